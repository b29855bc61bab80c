"""Randomized soundness check of the process-algebra axioms.

Every axiom is a generator that draws one instance from a seeded RNG and
returns the two sides.  Process instances are compared by strong
bisimulation of their transition systems; multi-action laws (MA, MD, MS) are
compared as values.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from time import perf_counter
from typing import Callable

from .equivalence import bisimilar
from .multiactions import TAU, MultiAction, join, submulti, subtract
from .process import (
    DELTA,
    Act,
    Allow,
    Alt,
    Block,
    Comm,
    CommRule,
    Hide,
    LMerge,
    Par,
    Rename,
    Seq,
    Sync,
    Term,
    alphabet,
    comm_domain,
    downclose,
)
from .semantics import explore_term
from .splitting import SubstitutionEnvironment, env_img, qmark

ACTIONS = ("a", "b", "c")
RESULTS = ("k", "m")  # communication results never occurring in a left-hand side


def rand_multiaction(rng: random.Random, max_size: int = 3, names=ACTIONS,
                     allow_tau: bool = True) -> MultiAction:
    low = 0 if allow_tau else 1
    return MultiAction(rng.choice(names) for _ in range(rng.randint(low, max_size)))


def rand_action_set(rng: random.Random, names=ACTIONS) -> frozenset:
    return frozenset(a for a in names if rng.random() < 0.4)


def rand_rules(rng: random.Random, names=ACTIONS, results=RESULTS) -> frozenset:
    """Communication rules with pairwise action-disjoint left-hand sides."""
    pool = list(names)
    rng.shuffle(pool)
    rules = []
    while len(pool) >= 2 and rng.random() < 0.7:
        size = rng.randint(2, min(3, len(pool)))
        lhs, pool = pool[:size], pool[size:]
        if rng.random() < 0.3:
            lhs.append(lhs[0])  # rules may consume a repeated action
        rules.append(CommRule(MultiAction(lhs), rng.choice(results)))
    return frozenset(rules)


def rand_renaming(rng: random.Random, names=ACTIONS) -> frozenset:
    return frozenset((a, rng.choice(names + RESULTS)) for a in names if rng.random() < 0.5)


def rand_basic(rng: random.Random, depth: int = 3, names=ACTIONS) -> Term:
    """Random basic process: multi-actions, deadlock, choice and sequencing."""
    if depth <= 0 or rng.random() < 0.3:
        if rng.random() < 0.1:
            return DELTA
        return Act(rand_multiaction(rng, names=names))
    op = rng.choice((Alt, Seq))
    return op(rand_basic(rng, depth - 1, names), rand_basic(rng, depth - 1, names))


def rand_process(rng: random.Random, depth: int = 3, names=ACTIONS) -> Term:
    """Random closed process over every operator."""
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return DELTA
        return Act(rand_multiaction(rng, names=names))
    r = rng.random()
    if r < 0.7:
        op = rng.choice((Alt, Seq, Seq, Par, LMerge, Sync))
        return op(rand_process(rng, depth - 1, names), rand_process(rng, depth - 1, names))
    inner = rand_process(rng, depth - 1, names)
    kind = rng.randrange(5)
    if kind == 0:
        allowed = frozenset(rand_multiaction(rng, 2, names, allow_tau=False) for _ in range(3))
        return Allow(allowed, inner)
    if kind == 1:
        return Block(rand_action_set(rng, names), inner)
    if kind == 2:
        return Rename(rand_renaming(rng, names), inner)
    if kind == 3:
        return Comm(rand_rules(rng, names), inner)
    return Hide(rand_action_set(rng, names), inner)


def rand_alpha_delta(rng: random.Random) -> Term:
    """A multi-action or deadlock (the alpha-delta of the lemma statements)."""
    return DELTA if rng.random() < 0.2 else Act(rand_multiaction(rng))


def _act(alpha: MultiAction) -> Act:
    return Act(alpha)


def _single(rng, excluded=()) -> str:
    return rng.choice([a for a in ACTIONS if a not in excluded])


def _reference_comm(rules, alpha: MultiAction) -> MultiAction:
    """Communication function by its recursive definition: split the rule set,
    and apply a single rule as often as its left-hand side is contained."""
    rules = sorted(rules)
    if not rules:
        return alpha
    if len(rules) > 1:
        return _reference_comm(rules[:1], _reference_comm(rules[1:], alpha))
    (rule,) = rules
    if submulti(rule.lhs, alpha):
        return join(MultiAction.of(rule.rhs), _reference_comm(rules, subtract(alpha, rule.lhs)))
    return alpha


def _qmark_env(rng: random.Random) -> SubstitutionEnvironment:
    env = SubstitutionEnvironment("P", frozenset(ACTIONS))
    for a in ACTIONS:
        for w in ("", "1", "2"):
            if rng.random() < 0.3:
                env.used.add((a, w))
    if not env.used:
        env.used.add((rng.choice(ACTIONS), ""))
    return env


def _qmark_names(env) -> tuple:
    return ACTIONS + tuple(sorted(env_img(env)))


# generators return (lhs, rhs); terms are checked by bisimulation, anything
# else by equality
Instance = tuple
AXIOMS: dict[str, Callable[[random.Random], Instance]] = {}


def axiom(name):
    def register(fn):
        AXIOMS[name] = fn
        return fn
    return register


def _ma(rng):
    return rand_multiaction(rng)


def _p(rng):
    return rand_process(rng, 3)


@axiom("MA1")
def _(rng):
    x, y = _ma(rng), _ma(rng)
    return join(x, y), join(y, x)


@axiom("MA2")
def _(rng):
    x, y, z = _ma(rng), _ma(rng), _ma(rng)
    return join(join(x, y), z), join(x, join(y, z))


@axiom("MA3")
def _(rng):
    x = _ma(rng)
    return join(x, TAU), x


@axiom("A1")
def _(rng):
    p, q = _p(rng), _p(rng)
    return Alt(p, q), Alt(q, p)


@axiom("A2")
def _(rng):
    p, q, r = _p(rng), _p(rng), _p(rng)
    return Alt(p, Alt(q, r)), Alt(Alt(p, q), r)


@axiom("A3")
def _(rng):
    p = _p(rng)
    return Alt(p, p), p


@axiom("A4")
def _(rng):
    p, q, r = _p(rng), _p(rng), _p(rng)
    return Seq(Alt(p, q), r), Alt(Seq(p, r), Seq(q, r))


@axiom("A5")
def _(rng):
    p, q, r = _p(rng), _p(rng), _p(rng)
    return Seq(Seq(p, q), r), Seq(p, Seq(q, r))


@axiom("A6")
def _(rng):
    p = _p(rng)
    return Alt(p, DELTA), p


@axiom("A7")
def _(rng):
    return Seq(DELTA, _p(rng)), DELTA


@axiom("M")
def _(rng):
    p, q = _p(rng), _p(rng)
    return Par(p, q), Alt(Alt(LMerge(p, q), LMerge(q, p)), Sync(p, q))


@axiom("LM1")
def _(rng):
    x, p = rand_alpha_delta(rng), _p(rng)
    return LMerge(x, p), Seq(x, p)


@axiom("LM2")
def _(rng):
    return LMerge(DELTA, _p(rng)), DELTA


@axiom("LM3")
def _(rng):
    x, p, q = _act(_ma(rng)), _p(rng), _p(rng)
    return LMerge(Seq(x, p), q), Seq(x, Par(p, q))


@axiom("LM4")
def _(rng):
    p, q, r = _p(rng), _p(rng), _p(rng)
    return LMerge(Alt(p, q), r), Alt(LMerge(p, r), LMerge(q, r))


@axiom("S1")
def _(rng):
    p, q = _p(rng), _p(rng)
    return Sync(p, q), Sync(q, p)


@axiom("S2")
def _(rng):
    p, q, r = _p(rng), _p(rng), _p(rng)
    return Sync(Sync(p, q), r), Sync(p, Sync(q, r))


@axiom("S3")
def _(rng):
    p = _p(rng)
    return Sync(p, Act(TAU)), p


@axiom("S4")
def _(rng):
    return Sync(rand_alpha_delta(rng), DELTA), DELTA


@axiom("S5")
def _(rng):
    x, y, p = rand_alpha_delta(rng), rand_alpha_delta(rng), _p(rng)
    return Sync(Seq(x, p), y), Seq(Sync(x, y), p)


@axiom("S6")
def _(rng):
    x, y, p, q = rand_alpha_delta(rng), rand_alpha_delta(rng), _p(rng), _p(rng)
    return Sync(Seq(x, p), Seq(y, q)), Seq(Sync(x, y), Par(p, q))


@axiom("S7")
def _(rng):
    p, q, r = _p(rng), _p(rng), _p(rng)
    return Sync(Alt(p, q), r), Alt(Sync(p, r), Sync(q, r))


@axiom("SMA")
def _(rng):
    x, y = _ma(rng), _ma(rng)
    return Sync(Act(x), Act(y)), Act(join(x, y))


def _allow_set(rng):
    return frozenset(rand_multiaction(rng, 3, allow_tau=False) for _ in range(rng.randint(0, 4)))


@axiom("V1")
def _(rng):
    x = _ma(rng)
    V = _allow_set(rng)
    if x.actions:
        V |= {x}
    return Allow(V, Act(x)), Act(x)


@axiom("V2")
def _(rng):
    x = rand_multiaction(rng, allow_tau=False)
    return Allow(_allow_set(rng) - {x}, Act(x)), DELTA


@axiom("B1")
def _(rng):
    return Block(rand_action_set(rng), Act(TAU)), Act(TAU)


@axiom("B2")
def _(rng):
    a = _single(rng)
    return Block(rand_action_set(rng) - {a}, Act(MultiAction.of(a))), Act(MultiAction.of(a))


@axiom("B3")
def _(rng):
    a = _single(rng)
    return Block(rand_action_set(rng) | {a}, Act(MultiAction.of(a))), DELTA


@axiom("B4")
def _(rng):
    B, x, y = rand_action_set(rng), _ma(rng), _ma(rng)
    return Block(B, Sync(Act(x), Act(y))), Sync(Block(B, Act(x)), Block(B, Act(y)))


@axiom("R1")
def _(rng):
    return Rename(rand_renaming(rng), Act(TAU)), Act(TAU)


@axiom("R2")
def _(rng):
    R = dict(rand_renaming(rng))
    a = _single(rng)
    R.setdefault(a, rng.choice(ACTIONS + RESULTS))
    return Rename(frozenset(R.items()), Act(MultiAction.of(a))), Act(MultiAction.of(R[a]))


@axiom("R3")
def _(rng):
    a = _single(rng)
    R = frozenset((s, t) for s, t in rand_renaming(rng) if s != a)
    return Rename(R, Act(MultiAction.of(a))), Act(MultiAction.of(a))


@axiom("R4")
def _(rng):
    R, x, y = rand_renaming(rng), _ma(rng), _ma(rng)
    return Rename(R, Sync(Act(x), Act(y))), Sync(Rename(R, Act(x)), Rename(R, Act(y)))


@axiom("C1")
def _(rng):
    C, x = rand_rules(rng), rand_multiaction(rng, 5)
    return Comm(C, Act(x)), Act(_reference_comm(C, x))


@axiom("CL1")
def _(rng):
    p = rand_basic(rng, 3)
    forbidden = downclose(alphabet(p))
    for _ in range(100):
        C = rand_rules(rng, ACTIONS + ("e", "e2"))
        if not (comm_domain(C) & forbidden):
            return Comm(C, p), p
    return Comm(frozenset(), p), p


@axiom("H1")
def _(rng):
    return Hide(rand_action_set(rng), Act(TAU)), Act(TAU)


@axiom("H2")
def _(rng):
    a = _single(rng)
    return Hide(rand_action_set(rng) | {a}, Act(MultiAction.of(a))), Act(TAU)


@axiom("H3")
def _(rng):
    a = _single(rng)
    return Hide(rand_action_set(rng) - {a}, Act(MultiAction.of(a))), Act(MultiAction.of(a))


@axiom("H4")
def _(rng):
    I, x, y = rand_action_set(rng), _ma(rng), _ma(rng)
    return Hide(I, Sync(Act(x), Act(y))), Sync(Hide(I, Act(x)), Hide(I, Act(y)))


@axiom("H5")
def _(rng):
    return Hide(rand_action_set(rng), DELTA), DELTA


@axiom("H6")
def _(rng):
    I, p, q = rand_action_set(rng), _p(rng), _p(rng)
    return Hide(I, Alt(p, q)), Alt(Hide(I, p), Hide(I, q))


@axiom("H7")
def _(rng):
    I, p, q = rand_action_set(rng), _p(rng), _p(rng)
    return Hide(I, Seq(p, q)), Seq(Hide(I, p), Hide(I, q))


def _static(kind, rng):
    """A random unary operator constructor of the given family."""
    if kind == "V":
        V = _allow_set(rng)
        return lambda p: Allow(V, p)
    if kind == "B":
        B = rand_action_set(rng)
        return lambda p: Block(B, p)
    if kind == "R":
        R = rand_renaming(rng)
        return lambda p: Rename(R, p)
    C = rand_rules(rng)
    return lambda p: Comm(C, p)


def _register_static(kind, first):
    def zero(rng):
        return _static(kind, rng)(DELTA), DELTA

    def choice(rng):
        op, p, q = _static(kind, rng), _p(rng), _p(rng)
        return op(Alt(p, q)), Alt(op(p), op(q))

    def sequence(rng):
        op, p, q = _static(kind, rng), _p(rng), _p(rng)
        return op(Seq(p, q)), Seq(op(p), op(q))

    for offset, fn in enumerate((zero, choice, sequence)):
        AXIOMS[f"{kind}{first + offset}"] = fn


for _kind, _first in (("V", 3), ("B", 5), ("R", 5), ("C", 2)):
    _register_static(_kind, _first)


@axiom("MD1")
def _(rng):
    return subtract(TAU, _ma(rng)), TAU


@axiom("MD2")
def _(rng):
    x = _ma(rng)
    return subtract(x, TAU), x


@axiom("MD3")
def _(rng):
    x, y, z = rand_multiaction(rng, 5), _ma(rng), _ma(rng)
    return subtract(x, join(y, z)), subtract(subtract(x, y), z)


@axiom("MD4")
def _(rng):
    a, x = _single(rng), _ma(rng)
    return subtract(join(MultiAction.of(a), x), MultiAction.of(a)), x


@axiom("MD5")
def _(rng):
    a = _single(rng)
    b, x = _single(rng, (a,)), _ma(rng)
    return (subtract(join(MultiAction.of(a), x), MultiAction.of(b)),
            join(MultiAction.of(a), subtract(x, MultiAction.of(b))))


@axiom("MS1")
def _(rng):
    return submulti(TAU, _ma(rng)), True


@axiom("MS2")
def _(rng):
    return submulti(rand_multiaction(rng, allow_tau=False), TAU), False


@axiom("MS3")
def _(rng):
    a, x, y = MultiAction.of(_single(rng)), _ma(rng), rand_multiaction(rng, 4)
    return submulti(join(a, x), join(a, y)), submulti(x, y)


@axiom("MS4")
def _(rng):
    a = _single(rng)
    b = _single(rng, (a,))
    x, y = _ma(rng), rand_multiaction(rng, 4)
    A, B = MultiAction.of(a), MultiAction.of(b)
    return submulti(join(A, x), join(B, y)), submulti(join(A, subtract(x, B)), y)


@axiom("Q1")
def _(rng):
    return qmark(Act(TAU), _qmark_env(rng)), Act(TAU)


@axiom("Q2")
def _(rng):
    return qmark(DELTA, _qmark_env(rng)), DELTA


@axiom("Q3")
def _(rng):
    env = _qmark_env(rng)
    names = _qmark_names(env)
    p, q = rand_process(rng, 2, names), rand_process(rng, 2, names)
    return qmark(Alt(p, q), env), Alt(qmark(p, env), qmark(q, env))


@axiom("Q4")
def _(rng):
    env = _qmark_env(rng)
    names = _qmark_names(env)
    p, q = rand_process(rng, 2, names), rand_process(rng, 2, names)
    return qmark(Seq(p, q), env), Seq(qmark(p, env), qmark(q, env))


OPTIONAL = frozenset({"Q1", "Q2", "Q3", "Q4"})


@dataclass(frozen=True)
class AxiomReport:
    name: str
    instances: int
    failures: tuple  # of (lhs, rhs, witness) triples
    seconds: float

    @property
    def ok(self) -> bool:
        return not self.failures


def check_instance(lhs, rhs):
    """None if both sides agree, otherwise a description of the mismatch."""
    if isinstance(lhs, Term):
        verdict = bisimilar(explore_term(lhs), explore_term(rhs))
        return None if verdict else str(verdict.witness)
    return None if lhs == rhs else f"{lhs!r} != {rhs!r}"


def check_axiom(name: str, seed: int = 0, instances: int = 50) -> AxiomReport:
    rng = random.Random(f"{seed}:{name}")
    gen = AXIOMS[name]
    failures = []
    start = perf_counter()
    for _ in range(instances):
        lhs, rhs = gen(rng)
        problem = check_instance(lhs, rhs)
        if problem is not None:
            failures.append((lhs, rhs, problem))
    return AxiomReport(name, instances, tuple(failures), perf_counter() - start)


def run_suite(seed: int = 0, per_axiom: int = 50, names=None) -> list[AxiomReport]:
    return [check_axiom(n, seed, per_axiom) for n in (names or AXIOMS)]
