"""Splitting a process along a set of actions.

A sequential process ``p`` becomes the encapsulated parallel composition of
its A-isolation and A-coisolation.  The isolation keeps the actions in ``A``
(each tagged with a fresh "announce" action ``a#f#w``) and replaces every
other action ``b`` by a fresh "observe" action ``b#g#w``; the coisolation does
the mirror image.  The wrapper synchronizes each announce/observe pair into a
placeholder action, hides the placeholder and blocks unpaired fresh actions.

Branch words ``w`` over ``{1, 2}`` grow at every choice so that both halves
commit to the same alternative.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable

from .errors import (
    ActionOutsideAlphabet,
    NotSequential,
    NotTauFree,
    ReservedSeparatorInAction,
)
from .multiactions import SEPARATOR, MultiAction, check_action
from .process import (
    Act,
    Alt,
    BINARY,
    Block,
    Comm,
    CommRule,
    Definition,
    Delta,
    Hide,
    Par,
    Ref,
    Seq,
    Specification,
    Term,
    UNARY,
    acts,
    is_sequential,
    is_tau_free,
    operator_param,
    seq,
)

DEFAULT_TAU_ACTION = "tau" + SEPARATOR
_WORD_RE = re.compile(r"[12]*\Z")


def check_word(w: str) -> str:
    if not isinstance(w, str) or not _WORD_RE.match(w):
        raise ValueError(f"branch word must be a string over {{1, 2}}, got {w!r}")
    return w


def fresh(kind: str, a: str, w: str = "") -> str:
    """Fresh action for ``(kind, a, w)``: ``a#f#w`` or ``a#g#w``."""
    if kind not in ("f", "g"):
        raise ValueError(f"kind must be 'f' or 'g', got {kind!r}")
    if SEPARATOR in a:
        raise ReservedSeparatorInAction(f"action {a!r} contains {SEPARATOR!r}")
    return f"{a}{SEPARATOR}{kind}{SEPARATOR}{check_word(w)}"


@dataclass
class SubstitutionEnvironment:
    """Main definition, alphabet, placeholder action and the used fresh names.

    ``used`` collects every ``(action, word)`` pair for which fresh names were
    emitted; the wrapper's communications and blocked actions derive from it.
    """

    main: str
    alphabet: frozenset
    tau_action: str = DEFAULT_TAU_ACTION
    used: set = field(default_factory=set)

    def __post_init__(self):
        self.alphabet = frozenset(self.alphabet)
        if self.tau_action in self.alphabet:
            raise ValueError(f"placeholder {self.tau_action!r} lies in the alphabet")
        for a in self.alphabet:
            if SEPARATOR in a:
                raise ReservedSeparatorInAction(f"action {a!r} contains {SEPARATOR!r}")

    def f(self, a: str, w: str) -> str:
        self._use(a, w)
        return fresh("f", a, w)

    def g(self, a: str, w: str) -> str:
        self._use(a, w)
        return fresh("g", a, w)

    def _use(self, a, w):
        if a not in self.alphabet:
            raise ActionOutsideAlphabet(f"action {a!r} is outside the alphabet")
        self.used.add((a, w))


def make_env(spec: Specification, name: str | None = None, actions: Iterable[str] = (),
             alphabet: Iterable[str] | None = None,
             tau_action: str = DEFAULT_TAU_ACTION) -> SubstitutionEnvironment:
    """Environment for splitting definition ``name`` (default: the root)."""
    name = name or spec.root
    found = acts(Ref(name), spec) | frozenset(actions)
    if alphabet is None:
        alphabet = found
    else:
        alphabet = frozenset(alphabet)
        missing = found - alphabet
        if missing:
            raise ActionOutsideAlphabet(f"actions {sorted(missing)} are outside the alphabet")
    return SubstitutionEnvironment(name, frozenset(alphabet), tau_action)


def env_dom(env: SubstitutionEnvironment) -> frozenset:
    return frozenset(env.used)


def env_img(env: SubstitutionEnvironment) -> frozenset:
    return frozenset(fresh(k, a, w) for a, w in env.used for k in ("f", "g"))


def env_comm(env: SubstitutionEnvironment) -> frozenset:
    return frozenset(
        CommRule(MultiAction((fresh("f", a, w), fresh("g", a, w))), env.tau_action)
        for a, w in env.used)


def _halves(alpha: MultiAction, A, w, env, keep_inside: bool) -> MultiAction:
    out = []
    for x in alpha.actions:
        if (x in A) == keep_inside:
            out.append(x)
            out.append(env.f(x, w))
        else:
            out.append(env.g(x, w))
    return MultiAction(out)


def _isol(p: Term, A, w: str, env, keep_inside: bool, advance: bool) -> Term:
    if isinstance(p, Act):
        return Act(_halves(p.alpha, A, w, env, keep_inside))
    if isinstance(p, Delta):
        return p
    if isinstance(p, Seq):
        return Seq(_isol(p.left, A, w, env, keep_inside, advance),
                   _isol(p.right, A, w, env, keep_inside, advance))
    if isinstance(p, Alt):
        wl, wr = (w + "1", w + "2") if advance else (w, w)
        return Alt(_isol(p.left, A, wl, env, keep_inside, advance),
                   _isol(p.right, A, wr, env, keep_inside, advance))
    raise NotSequential(f"{type(p).__name__} is not a sequential operator")


def isolate(p: Term, A: Iterable[str], w: str, env: SubstitutionEnvironment,
            advance_word: bool = True) -> Term:
    """A-isolation of a sequential process."""
    return _isol(p, frozenset(A), check_word(w), env, True, advance_word)


def coisolate(p: Term, A: Iterable[str], w: str, env: SubstitutionEnvironment,
              advance_word: bool = True) -> Term:
    """A-coisolation: actions in ``A`` are observed, the others announced."""
    return _isol(p, frozenset(A), check_word(w), env, False, advance_word)


def qmark(p: Term, env: SubstitutionEnvironment) -> Term:
    return Block(env_img(env), Hide(frozenset([env.tau_action]), Comm(env_comm(env), p)))


class _Pending(Term):
    """Wrapper placeholder; filled in once every fresh name is known."""

    __slots__ = ("proc",)

    def __init__(self, proc):
        self.proc = proc


def _fill(p: Term, wrap) -> Term:
    if isinstance(p, _Pending):
        return wrap(_fill(p.proc, wrap))
    if isinstance(p, BINARY):
        return type(p)(_fill(p.left, wrap), _fill(p.right, wrap))
    if isinstance(p, UNARY):
        return type(p)(operator_param(p), _fill(p.proc, wrap))
    return p


def split_name(name: str, A: Iterable[str], w: str) -> str:
    return SEPARATOR.join((name, "split", ",".join(sorted(A)), w))


@dataclass
class SplitResult:
    term: Term
    new_definitions: dict  # (name, frozenset A, word) -> Definition
    env: SubstitutionEnvironment

    def definitions(self) -> dict[str, Term]:
        return {d.name: d.body for d in self.new_definitions.values()}


def _seq_factors(p: Term) -> list[Term]:
    if isinstance(p, Seq):
        return _seq_factors(p.left) + _seq_factors(p.right)
    return [p]


class _Splitter:
    def __init__(self, A, env, spec, advance):
        self.A = A
        self.env = env
        self.spec = spec
        self.advance = advance
        self.new_defs: dict = {}

    def split(self, p: Term, w: str) -> Term:
        if is_sequential(p):
            iso = _isol(p, self.A, w, self.env, True, self.advance)
            co = _isol(p, self.A, w, self.env, False, self.advance)
            return _Pending(Par(iso, co))
        if isinstance(p, Seq):
            # regroup maximal sequential runs so each gets a single wrapper
            parts, run = [], []
            for factor in _seq_factors(p):
                if is_sequential(factor):
                    run.append(factor)
                    continue
                if run:
                    parts.append(self.split(seq(*run), w))
                    run = []
                parts.append(self.split(factor, w))
            if run:
                parts.append(self.split(seq(*run), w))
            return seq(*parts)
        if isinstance(p, BINARY):
            return type(p)(self.split(p.left, w), self.split(p.right, w))
        if isinstance(p, UNARY):
            if isinstance(p, Hide):
                warnings.warn("splitting under hiding: the result may not equal the original",
                              stacklevel=3)
            return type(p)(operator_param(p), self.split(p.proc, w))
        if isinstance(p, Ref):
            key = (p.name, self.A, w)
            if key not in self.new_defs:
                new_name = split_name(p.name, self.A, w)
                self.new_defs[key] = None  # reserve before recursing
                body = self.split(self.spec.body(p.name), w)
                self.new_defs[key] = Definition(new_name, body)
            return Ref(split_name(p.name, self.A, w))
        raise TypeError(f"not a process term: {p!r}")


def split(p: Term, A: Iterable[str], w: str, env: SubstitutionEnvironment,
          spec: Specification | None = None, advance_word: bool = True) -> SplitResult:
    """Split ``p`` along ``A`` starting from branch word ``w``.

    References are replaced by references to memoized split definitions.
    ``advance_word=False`` keeps ``w`` fixed at choices; that variant is unsound
    and exists only as a negative control.
    """
    A = frozenset(A)
    for a in A:
        check_action(a)
    check_word(w)
    if spec is None:
        spec = Specification({}, "")
    if not is_tau_free(p, spec):
        raise NotTauFree("splitting requires a syntactically tau-free process")
    outside = (acts(p, spec) | A) - env.alphabet
    if outside:
        raise ActionOutsideAlphabet(f"actions {sorted(outside)} are outside the alphabet")
    splitter = _Splitter(A, env, spec, advance_word)
    term = splitter.split(p, w)

    def wrap(q):
        return qmark(q, env)

    term = _fill(term, wrap)
    new_defs = {k: Definition(d.name, _fill(d.body, wrap)) for k, d in splitter.new_defs.items()}
    return SplitResult(term, new_defs, env)


def split_spec(spec: Specification, actions: Iterable[str], word: str = "",
               name: str | None = None, advance_word: bool = True,
               tau_action: str = DEFAULT_TAU_ACTION) -> tuple[Specification, SplitResult]:
    """Split definition ``name`` (default: root) into a standalone specification."""
    name = name or spec.root
    actions = frozenset(actions)
    env = make_env(spec, name, actions, tau_action=tau_action)
    result = split(Ref(name), actions, word, env, spec, advance_word)
    root = result.term.name
    defs = result.definitions()
    ordered = {root: defs[root], **{k: v for k, v in defs.items() if k != root}}
    return Specification(ordered, root), result


def replace_with_split(spec: Specification, name: str, actions: Iterable[str],
                       word: str = "") -> Specification:
    """Substitute a split copy for every reference to ``name`` in ``spec``.

    The other definitions keep their original actions, so the split copy
    plugs into its original context unchanged.
    """
    split_part, result = split_spec(spec, actions, word, name)
    new_ref = Ref(split_part.root)

    def swap(t: Term) -> Term:
        if isinstance(t, Ref):
            return new_ref if t.name == name else t
        if isinstance(t, BINARY):
            return type(t)(swap(t.left), swap(t.right))
        if isinstance(t, UNARY):
            return type(t)(operator_param(t), swap(t.proc))
        return t

    defs = {n: swap(b) for n, b in spec.definitions.items() if n != name}
    root = spec.root if spec.root != name else split_part.root
    defs.update(split_part.definitions)
    return Specification(defs, root).restricted()
