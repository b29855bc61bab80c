"""Structural operational semantics and explicit state-space exploration."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ParseError, StateBoundExceeded, UnguardedRecursion
from .multiactions import MultiAction, join
from .process import (
    Act,
    Allow,
    Alt,
    Block,
    Comm,
    Delta,
    Hide,
    LMerge,
    Par,
    Ref,
    Rename,
    Seq,
    Specification,
    Sync,
    Term,
    UNARY,
    gamma,
    operator_param,
)

DEFAULT_MAX_STATES = 100_000


class _Terminated:
    """Pseudo-state reached after successful termination."""

    __slots__ = ()

    def __repr__(self):
        return "TERMINATED"

    def __reduce__(self):
        return "TERMINATED"


TERMINATED = _Terminated()


def normalize(t: Term) -> Term:
    """Right-associate nested choices and sequences; nothing else changes."""
    if isinstance(t, (Alt, Seq)):
        cls = type(t)
        ops = []
        stack = [t]
        while stack:
            x = stack.pop()
            if isinstance(x, cls):
                stack.append(x.right)
                stack.append(x.left)
            else:
                ops.append(normalize(x))
        result = ops[-1]
        for x in reversed(ops[:-1]):
            result = cls(x, result)
        return result
    if isinstance(t, (Par, LMerge, Sync)):
        return type(t)(normalize(t.left), normalize(t.right))
    if isinstance(t, UNARY):
        return type(t)(operator_param(t), normalize(t.proc))
    return t


def _then(left, right: Term):
    """Successor of ``left . right`` once ``left`` has moved to ``left``."""
    if left is TERMINATED:
        return right
    if isinstance(left, Seq):
        return Seq(left.left, _then(left.right, right))
    return Seq(left, right)


def _pair(left, right):
    if left is TERMINATED:
        return right
    if right is TERMINATED:
        return left
    return Par(left, right)


def _dedup(steps):
    return tuple(dict.fromkeys(steps))


class Semantics:
    """One-step transition function of a specification, memoized per term."""

    def __init__(self, spec: Specification):
        self.spec = spec
        self._bodies: dict[str, Term] = {}
        self._cache: dict[Term, tuple] = {}
        self._unfolding: set[str] = set()

    def body(self, name: str) -> Term:
        b = self._bodies.get(name)
        if b is None:
            b = self._bodies[name] = normalize(self.spec.body(name))
        return b

    def step(self, p: Term) -> tuple:
        """Outgoing transitions of ``p`` as ``(label, successor)`` pairs."""
        hit = self._cache.get(p)
        if hit is None:
            hit = self._cache[p] = _dedup(self._step(p))
        return hit

    def _step(self, p: Term):
        if isinstance(p, Act):
            return [(p.alpha, TERMINATED)]
        if isinstance(p, Delta):
            return []
        if isinstance(p, Ref):
            if p.name in self._unfolding:
                raise UnguardedRecursion(p.name)
            self._unfolding.add(p.name)
            try:
                return list(self.step(self.body(p.name)))
            finally:
                self._unfolding.discard(p.name)
        if isinstance(p, Alt):
            return list(self.step(p.left)) + list(self.step(p.right))
        if isinstance(p, Seq):
            return [(a, _then(q, p.right)) for a, q in self.step(p.left)]
        if isinstance(p, (Par, LMerge, Sync)):
            return self._step_parallel(p)
        if isinstance(p, Allow):
            return [(a, _wrap(p, q)) for a, q in self.step(p.proc)
                    if not a.actions or a in p.allowed]
        if isinstance(p, Block):
            return [(a, _wrap(p, q)) for a, q in self.step(p.proc)
                    if p.actions.isdisjoint(a.actions)]
        if isinstance(p, Rename):
            table = p.as_dict()
            return [(MultiAction(table.get(x, x) for x in a.actions), _wrap(p, q))
                    for a, q in self.step(p.proc)]
        if isinstance(p, Comm):
            return [(gamma(p.rules, a), _wrap(p, q)) for a, q in self.step(p.proc)]
        if isinstance(p, Hide):
            return [(MultiAction(x for x in a.actions if x not in p.actions), _wrap(p, q))
                    for a, q in self.step(p.proc)]
        raise TypeError(f"not a process term: {p!r}")

    def _step_parallel(self, p):
        left = self.step(p.left)
        right = self.step(p.right) if not isinstance(p, LMerge) else ()
        out = []
        if not isinstance(p, Sync):
            for a, q in left:
                out.append((a, p.right if q is TERMINATED else Par(q, p.right)))
        if isinstance(p, Par):
            for b, r in right:
                out.append((b, p.left if r is TERMINATED else Par(p.left, r)))
        if isinstance(p, (Par, Sync)):
            for a, q in left:
                for b, r in right:
                    out.append((join(a, b), _pair(q, r)))
        return out


def _wrap(op: Term, successor):
    if successor is TERMINATED:
        return TERMINATED
    return type(op)(operator_param(op), successor)


def step(p: Term, spec: Specification | None = None) -> tuple:
    """One-step transitions of ``p``; ``TERMINATED`` marks successful termination."""
    return Semantics(spec or Specification({"_": p}, "_")).step(p)


@dataclass(frozen=True)
class LTS:
    """Explicit labeled transition system.

    ``states`` holds a descriptor per state index (a process term, the
    ``TERMINATED`` marker, or ``None`` for systems not built from terms).
    """

    states: tuple
    initial: int
    transitions: tuple  # of (source, MultiAction, target)
    terminating: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n = len(self.states)
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        for s, label, t in self.transitions:
            if not (0 <= s < n and 0 <= t < n) or not isinstance(label, MultiAction):
                raise ValueError(f"bad transition {(s, label, t)!r}")
        if any(not 0 <= s < n for s in self.terminating):
            raise ValueError("terminating state out of range")

    @classmethod
    def build(cls, n_states: int, initial: int, transitions: Iterable,
              terminating: Iterable[int] = ()) -> LTS:
        return cls((None,) * n_states, initial, tuple(transitions), frozenset(terminating))

    @property
    def num_states(self) -> int:
        return len(self.states)

    def labels(self) -> set[MultiAction]:
        return {label for _, label, _ in self.transitions}

    def outgoing(self) -> list[list[tuple[MultiAction, int]]]:
        out = [[] for _ in self.states]
        for s, label, t in self.transitions:
            out[s].append((label, t))
        return out


def explore(spec: Specification, max_states: int = DEFAULT_MAX_STATES,
            root: Term | None = None) -> LTS:
    """Breadth-first exploration from the root definition (or ``root``).

    A state whose term is literally the body of a definition is identified
    with the reference to that definition, so a recursive process that
    returns to its initial configuration closes the loop.
    """
    if max_states < 1:
        raise ValueError("max_states must be positive")
    sem = Semantics(spec)
    folds: dict[Term, Term] = {}
    for name, body in spec.definitions.items():
        if not isinstance(body, Ref):
            folds.setdefault(normalize(body), Ref(name))
    start = normalize(root) if root is not None else Ref(spec.root)
    start = folds.get(start, start)
    index = {start: 0}
    states = [start]
    transitions = []
    queue = deque([start])
    while queue:
        p = queue.popleft()
        src = index[p]
        if p is TERMINATED:
            continue
        for label, q in sem.step(p):
            q = folds.get(q, q)
            dst = index.get(q)
            if dst is None:
                if len(states) >= max_states:
                    raise StateBoundExceeded(max_states)
                dst = index[q] = len(states)
                states.append(q)
                queue.append(q)
            transitions.append((src, label, dst))
    terminating = frozenset(i for i, s in enumerate(states) if s is TERMINATED)
    return LTS(tuple(states), 0, tuple(transitions), terminating)


def explore_term(p: Term, spec: Specification | None = None,
                 max_states: int = DEFAULT_MAX_STATES) -> LTS:
    """Explore an arbitrary term, resolving references in ``spec``."""
    spec = spec or Specification({"_": p}, "_")
    return explore(spec, max_states, root=p)


# Aldebaran ----------------------------------------------------------------

def to_aut(lts: LTS) -> str:
    """Render in Aldebaran format; terminating states go in a trailing comment."""
    lines = [f"des ({lts.initial},{len(lts.transitions)},{lts.num_states})"]
    lines.extend(f'({s},"{label}",{t})' for s, label, t in lts.transitions)
    lines.append("-- term: " + " ".join(str(i) for i in sorted(lts.terminating)))
    return "\n".join(lines).rstrip() + "\n"


_HEADER_RE = re.compile(r"\s*des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_TRANS_RE = re.compile(r'\s*\(\s*(\d+)\s*,\s*"([^"]*)"\s*,\s*(\d+)\s*\)\s*$')


def _label(text: str) -> MultiAction:
    return MultiAction(x.strip() for x in text.split("|") if x.strip() not in ("", "tau"))


def from_aut(text: str) -> LTS:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty Aldebaran file", 1, 1)
    m = _HEADER_RE.match(lines[0])
    if m is None:
        raise ParseError("expected 'des (initial, transitions, states)'", 1, 1)
    initial, n_trans, n_states = map(int, m.groups())
    transitions = []
    terminating: list[int] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("--"):
            body = line[2:].strip()
            if body.startswith("term:"):
                terminating.extend(int(x) for x in body[5:].split())
            continue
        m = _TRANS_RE.match(line)
        if m is None:
            raise ParseError("malformed transition", lineno, 1)
        transitions.append((int(m.group(1)), _label(m.group(2)), int(m.group(3))))
    if len(transitions) != n_trans:
        raise ParseError(f"header announces {n_trans} transitions, found {len(transitions)}",
                         1, 1)
    return LTS.build(n_states, initial, transitions, terminating)
