"""Process terms, specifications and the auxiliary functions over them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from graphlib import CycleError, TopologicalSorter
from itertools import product
from typing import Iterable, Iterator, Mapping

from .errors import (
    InvalidCommRule,
    InvalidRenaming,
    MutualRecursion,
    NotBasicProcess,
    OverlappingCommRules,
    TauInAllowSet,
    TauInCommRule,
    UnknownReference,
)
from .multiactions import MultiAction, TAU, join, submulti, subtract


class Term:
    """Base class of the process AST.  All nodes are immutable and hashable."""

    __slots__ = ()

    def __str__(self):
        from .syntax import format_term

        return format_term(self)


@dataclass(frozen=True, slots=True, repr=False)
class Act(Term):
    alpha: MultiAction

    def __repr__(self):
        return f"Act({str(self.alpha)!r})"


@dataclass(frozen=True, slots=True, repr=False)
class Delta(Term):
    def __repr__(self):
        return "Delta()"


@dataclass(frozen=True, slots=True)
class Ref(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Alt(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Seq(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Par(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class LMerge(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Sync(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True, order=True)
class CommRule:
    lhs: MultiAction
    rhs: str

    def __str__(self):
        return f"{self.lhs}->{self.rhs}"


@dataclass(frozen=True, slots=True)
class Allow(Term):
    allowed: frozenset  # of MultiAction
    proc: Term


@dataclass(frozen=True, slots=True)
class Block(Term):
    actions: frozenset  # of str
    proc: Term


@dataclass(frozen=True, slots=True)
class Rename(Term):
    mapping: frozenset  # of (source, target) pairs
    proc: Term

    def as_dict(self) -> dict[str, str]:
        return dict(self.mapping)


@dataclass(frozen=True, slots=True)
class Comm(Term):
    rules: frozenset  # of CommRule
    proc: Term


@dataclass(frozen=True, slots=True)
class Hide(Term):
    actions: frozenset  # of str
    proc: Term


DELTA = Delta()
BINARY = (Alt, Seq, Par, LMerge, Sync)
UNARY = (Allow, Block, Rename, Comm, Hide)


def act(*names: str) -> Act:
    return Act(MultiAction(names))


def _fold_right(cls, terms):
    terms = list(terms)
    if not terms:
        raise ValueError(f"{cls.__name__} needs at least one operand")
    result = terms[-1]
    for t in reversed(terms[:-1]):
        result = cls(t, result)
    return result


def alt(*terms: Term) -> Term:
    return _fold_right(Alt, terms)


def seq(*terms: Term) -> Term:
    return _fold_right(Seq, terms)


def par(*terms: Term) -> Term:
    return _fold_right(Par, terms)


def allow(allowed: Iterable[MultiAction], p: Term) -> Allow:
    return Allow(frozenset(allowed), p)


def block(actions: Iterable[str], p: Term) -> Block:
    return Block(frozenset(actions), p)


def rename(mapping: Mapping[str, str], p: Term) -> Rename:
    return Rename(frozenset(mapping.items()), p)


def comm(rules: Iterable[CommRule], p: Term) -> Comm:
    return Comm(frozenset(rules), p)


def hide(actions: Iterable[str], p: Term) -> Hide:
    return Hide(frozenset(actions), p)


def operator_param(p: Term):
    """The set or map carried by a unary operator node."""
    if isinstance(p, Allow):
        return p.allowed
    if isinstance(p, Rename):
        return p.mapping
    if isinstance(p, Comm):
        return p.rules
    return p.actions


def children(p: Term) -> tuple[Term, ...]:
    if isinstance(p, BINARY):
        return (p.left, p.right)
    if isinstance(p, UNARY):
        return (p.proc,)
    return ()


def subterms(p: Term) -> Iterator[Term]:
    """Pre-order traversal of the AST (references are not unfolded)."""
    stack = [p]
    while stack:
        t = stack.pop()
        yield t
        stack.extend(reversed(children(t)))


def references(p: Term) -> set[str]:
    return {t.name for t in subterms(p) if isinstance(t, Ref)}


def leaves(p: Term) -> Iterator[MultiAction]:
    for t in subterms(p):
        if isinstance(t, Act):
            yield t.alpha


@dataclass(frozen=True)
class Definition:
    name: str
    body: Term


@dataclass(frozen=True, eq=True)
class Specification:
    """Named process definitions plus the name of the root definition."""

    definitions: Mapping[str, Term] = field(hash=False)
    root: str

    def __post_init__(self):
        object.__setattr__(self, "definitions", dict(self.definitions))

    def body(self, name: str) -> Term:
        try:
            return self.definitions[name]
        except KeyError:
            raise UnknownReference(name) from None

    def with_root(self, root: str) -> Specification:
        return Specification(self.definitions, root)

    def reachable(self, start: Iterable[str] | None = None) -> list[str]:
        """Definition names reachable from ``start`` (default: the root)."""
        todo = list(start) if start is not None else [self.root]
        seen: list[str] = []
        while todo:
            name = todo.pop()
            if name in seen:
                continue
            seen.append(name)
            todo.extend(sorted(references(self.body(name)), reverse=True))
        return seen

    def restricted(self) -> Specification:
        """Copy keeping only the definitions reachable from the root."""
        names = self.reachable()
        return Specification({n: self.definitions[n] for n in names}, self.root)

    def __str__(self):
        from .syntax import format_spec

        return format_spec(self)


def is_sequential(p: Term) -> bool:
    """True iff ``p`` uses only multi-actions, deadlock, choice and sequencing."""
    return all(isinstance(t, (Act, Delta, Alt, Seq)) for t in subterms(p))


def _closure(p: Term, spec: Specification | None) -> Iterator[Term]:
    """Subterms of ``p`` and, once each, of every referenced definition body."""
    seen: set[str] = set()
    todo = [p]
    while todo:
        for t in subterms(todo.pop()):
            yield t
            if isinstance(t, Ref) and t.name not in seen:
                seen.add(t.name)
                if spec is None:
                    raise UnknownReference(t.name)
                todo.append(spec.body(t.name))


def acts(p: Term, spec: Specification | None = None) -> frozenset[str]:
    """Actions occurring in multi-action leaves of ``p`` and referenced bodies."""
    found: set[str] = set()
    for t in _closure(p, spec):
        if isinstance(t, Act):
            found.update(t.alpha.actions)
    return frozenset(found)


def spec_acts(spec: Specification) -> frozenset[str]:
    return acts(Ref(spec.root), spec)


def is_tau_free(p: Term, spec: Specification | None = None) -> bool:
    """Syntactic check: no multi-action leaf is the empty multi-action."""
    return not any(isinstance(t, Act) and not t.alpha.actions for t in _closure(p, spec))


@lru_cache(maxsize=4096)
def _rule_index(rules: frozenset) -> tuple[CommRule, ...]:
    used: set[str] = set()
    for r in rules:
        if not r.lhs.actions:
            raise TauInCommRule(f"communication rule {r} has an empty left-hand side")
        if len(r.lhs) < 2:
            raise InvalidCommRule(f"communication rule {r} needs at least two actions")
        support = set(r.lhs.actions)
        if used & support:
            raise OverlappingCommRules(
                f"left-hand sides share actions {sorted(used & support)}")
        used |= support
    return tuple(sorted(rules))


@lru_cache(maxsize=65536)
def gamma(rules: frozenset, alpha: MultiAction) -> MultiAction:
    """Apply communication rules to ``alpha`` until none applies.

    Left-hand sides must be pairwise action-disjoint, which makes the result
    independent of the order in which rules fire.
    """
    ordered = _rule_index(frozenset(rules))
    changed = True
    while changed:
        changed = False
        for r in ordered:
            while submulti(r.lhs, alpha):
                alpha = join(MultiAction.of(r.rhs), subtract(alpha, r.lhs))
                changed = True
    return alpha


def alphabet(p: Term) -> frozenset[MultiAction]:
    """Multi-actions occurring in a basic process (tau and deadlock excluded)."""
    if isinstance(p, Act):
        return frozenset([p.alpha]) if p.alpha.actions else frozenset()
    if isinstance(p, Delta):
        return frozenset()
    if isinstance(p, (Alt, Seq)):
        return alphabet(p.left) | alphabet(p.right)
    raise NotBasicProcess(f"{type(p).__name__} is not a basic process operator")


def downclose(multis: Iterable[MultiAction]) -> frozenset[MultiAction]:
    """All nonempty sub-multisets of members of ``multis``."""
    out: set[MultiAction] = set()
    for alpha in multis:
        counts = sorted(alpha.counts().items())
        names = [a for a, _ in counts]
        for picks in product(*(range(n + 1) for _, n in counts)):
            bag = [a for a, k in zip(names, picks) for _ in range(k)]
            if bag:
                out.add(MultiAction(bag))
    return frozenset(out)


def comm_domain(rules: Iterable[CommRule]) -> frozenset[MultiAction]:
    return frozenset(r.lhs for r in rules)


def _check_body(name: str, body: Term, spec: Specification) -> None:
    for t in subterms(body):
        if isinstance(t, Ref) and t.name not in spec.definitions:
            raise UnknownReference(t.name)
        if isinstance(t, Comm):
            for r in t.rules:
                if not r.lhs.actions:
                    raise TauInCommRule(f"in {name}: communication {r} starts from tau")
                if len(r.lhs) < 2:
                    raise InvalidCommRule(f"in {name}: communication {r} has a single action")
        elif isinstance(t, Allow):
            if TAU in t.allowed:
                raise TauInAllowSet(f"in {name}: allow set contains tau")
        elif isinstance(t, Rename):
            sources = [s for s, _ in t.mapping]
            if len(sources) != len(set(sources)):
                raise InvalidRenaming(f"in {name}: renaming maps an action twice")


def validate(spec: Specification) -> Specification:
    """Check well-formedness; return ``spec`` unchanged or raise.

    Self-recursion is allowed, and so are references to other definitions as
    long as no cycle runs through two or more definitions.
    """
    if spec.root not in spec.definitions:
        raise UnknownReference(spec.root)
    graph = {}
    for name, body in spec.definitions.items():
        _check_body(name, body, spec)
        graph[name] = references(body) - {name}
    try:
        TopologicalSorter(graph).prepare()
    except CycleError as exc:
        cycle = exc.args[1]
        raise MutualRecursion(cycle[0]) from None
    return spec
