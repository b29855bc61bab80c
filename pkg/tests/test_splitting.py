import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_sequential, sequential_terms, taufree_multiactions
from procsplit.equivalence import bisimilar
from procsplit.errors import (
    ActionOutsideAlphabet,
    NotSequential,
    NotTauFree,
    ReservedSeparatorInAction,
)
from procsplit.multiactions import TAU, MultiAction
from procsplit.process import (
    BINARY,
    DELTA,
    UNARY,
    Act,
    Alt,
    CommRule,
    Hide,
    Par,
    Ref,
    Seq,
    Specification,
    act,
    acts,
    seq,
)
from procsplit.semantics import explore, explore_term
from procsplit.splitting import (
    SubstitutionEnvironment,
    coisolate,
    env_comm,
    env_dom,
    env_img,
    fresh,
    isolate,
    make_env,
    qmark,
    replace_with_split,
    split,
    split_name,
    split_spec,
)
from procsplit.syntax import parse


def env_for(*names):
    return SubstitutionEnvironment("P", frozenset(names))


def f(a, w=""):
    return fresh("f", a, w)


def g(a, w=""):
    return fresh("g", a, w)


def test_fresh_names():
    assert fresh("f", "a", "") == "a#f#"
    assert fresh("g", "b", "12") == "b#g#12"
    assert len({fresh("f", "a", "1"), fresh("f", "a", "2"), fresh("g", "a", "1")}) == 3
    with pytest.raises(ReservedSeparatorInAction):
        fresh("f", "a#b", "")
    with pytest.raises(ValueError):
        fresh("f", "a", "3")


def test_env_functions():
    env = env_for("a", "b")
    assert env_comm(env) == frozenset()
    env.f("a", "")
    env.g("b", "")
    assert env_dom(env) == {("a", ""), ("b", "")}
    assert env_comm(env) == {CommRule(MultiAction((f("a"), g("a"))), "tau#"),
                             CommRule(MultiAction((f("b"), g("b"))), "tau#")}
    assert env_img(env) == {f("a"), g("a"), f("b"), g("b")}
    env2 = env_for("a")
    env2.f("a", "1")
    env2.f("a", "2")
    rules = env_comm(env2)
    assert len(rules) == 2
    left, right = rules
    assert not set(left.lhs.actions) & set(right.lhs.actions)


def test_env_rejects_placeholder_in_alphabet():
    with pytest.raises(ValueError):
        SubstitutionEnvironment("P", frozenset(["a", "tau#"]))


def test_isolate_examples():
    env = env_for("a", "b", "c")
    ab = Seq(act("a"), act("b"))
    assert isolate(ab, {"a"}, "", env) == Seq(act("a", f("a")), act(g("b")))
    assert coisolate(ab, {"a"}, "", env) == Seq(act(g("a")), act("b", f("b")))
    assert isolate(DELTA, {"a"}, "1", env) == DELTA
    assert coisolate(Act(TAU), {"a"}, "", env) == Act(TAU)
    r = Alt(Seq(act("a"), act("b")), Seq(act("a"), act("c")))
    assert isolate(r, {"a"}, "", env) == Alt(Seq(act("a", f("a", "1")), act(g("b", "1"))),
                                             Seq(act("a", f("a", "2")), act(g("c", "2"))))
    assert coisolate(r, {"a"}, "", env) == Alt(Seq(act(g("a", "1")), act("b", f("b", "1"))),
                                               Seq(act(g("a", "2")), act("c", f("c", "2"))))


def test_isolate_errors():
    env = env_for("a")
    with pytest.raises(NotSequential):
        isolate(Par(act("a"), act("a")), {"a"}, "", env)
    with pytest.raises(ActionOutsideAlphabet):
        isolate(act("z"), {"a"}, "", env)


def test_qmark_laws():
    env = env_for("a", "b")
    env.f("a", "")
    assert bisimilar(explore_term(qmark(Act(TAU), env)), explore_term(Act(TAU)))
    assert bisimilar(explore_term(qmark(DELTA, env)), explore_term(DELTA))
    p, q = act("a", f("a")), act(g("a"))
    assert bisimilar(explore_term(qmark(Alt(p, q), env)),
                     explore_term(Alt(qmark(p, env), qmark(q, env))))


def shape(t):
    if isinstance(t, Act):
        return "act"
    if isinstance(t, BINARY):
        return (type(t).__name__, shape(t.left), shape(t.right))
    if isinstance(t, UNARY):
        return (type(t).__name__, shape(t.proc))
    return type(t).__name__


@given(sequential_terms(tau_free=False), st.frozensets(st.sampled_from("abcd")),
       st.sampled_from(["", "1", "21"]))
def test_isolation_preserves_shape(p, A, w):
    env = env_for(*"abcd")
    assert shape(isolate(p, A, w, env)) == shape(p) == shape(coisolate(p, A, w, env))


def test_fifo_split_term():
    spec = parse("Fifo = a . b . Fifo;")
    out, result = split_spec(spec, ["a"])
    name = split_name("Fifo", {"a"}, "")
    assert out.root == name == "Fifo#split#a#"
    env = result.env
    inner = Par(Seq(act("a", f("a")), act(g("b"))), Seq(act(g("a")), act("b", f("b"))))
    assert out.body(name) == Seq(qmark(inner, env), Ref(name))
    assert set(result.new_definitions) == {("Fifo", frozenset({"a"}), "")}


def test_sync_split_term():
    out, result = split_spec(parse("Sync = a|b . Sync;"), ["a"])
    inner = Par(act("a", f("a"), g("b")), act(g("a"), "b", f("b")))
    assert out.body(out.root) == Seq(qmark(inner, result.env), Ref(out.root))


def test_split_multiaction():
    env = env_for("a")
    result = split(act("a"), {"a"}, "", env)
    assert bisimilar(explore_term(result.term), explore_term(act("a")))


def test_negative_control():
    spec = parse("R = a . b + a . c;")
    frozen, _ = split_spec(spec, ["a"], advance_word=False)
    verdict = bisimilar(explore(spec), explore(frozen))
    assert not verdict
    assert verdict.witness.trace == (MultiAction.of("a"),)
    good, _ = split_spec(spec, ["a"])
    assert bisimilar(explore(spec), explore(good))


def test_split_requires_tau_free():
    with pytest.raises(NotTauFree):
        split_spec(parse("P = a . tau;"), ["a"])


def test_split_checks_alphabet():
    spec = parse("P = a . b;")
    env = make_env(spec, actions=["a"])
    with pytest.raises(ActionOutsideAlphabet):
        split(Ref("P"), {"z"}, "", env, spec)
    with pytest.raises(ActionOutsideAlphabet):
        make_env(spec, alphabet=["a"])


def test_hide_warns():
    spec = parse("P = hide{b}(a . b) . P;")
    with pytest.warns(UserWarning):
        split_spec(spec, ["a"])


def test_freshness():
    spec = parse("P = a . (b + c|d) . P;")
    out, result = split_spec(spec, ["a", "c"])
    assert not env_img(result.env) & acts(Ref("P"), spec)
    assert "tau#" not in acts(Ref("P"), spec)
    assert bisimilar(explore(spec), explore(out))


def test_every_reference_has_a_definition():
    spec = parse("P = Q || R; Q = a . Q; R = b . c . R;")
    out, result = split_spec(spec, ["a", "b"], "1")
    assert set(out.definitions) == {d.name for d in result.new_definitions.values()}
    assert bisimilar(explore(spec), explore(out))


def test_replace_with_split_in_context():
    spec = parse("""
        Sys = block{a1, b1}(comm{a1|b1->m}(Fifo || Sink));
        Fifo = x . a1 . Fifo;
        Sink = b1 . y . Sink;
    """)
    swapped = replace_with_split(spec, "Fifo", ["x"])
    assert "Fifo" not in swapped.definitions
    assert bisimilar(explore(spec), explore(swapped))


@settings(max_examples=100, deadline=None)
@given(taufree_multiactions, st.frozensets(st.sampled_from("abcd")),
       st.sampled_from(["", "1", "2", "12"]))
def test_split_multiaction_property(alpha, A, w):
    env = env_for(*"abcd")
    result = split(Act(alpha), A, w, env)
    assert bisimilar(explore_term(result.term), explore_term(Act(alpha)))


def random_recursive(rng):
    """One self-recursive definition with the recursion in tail position."""
    s1, s2 = random_sequential(rng, 3, "abc"), random_sequential(rng, 3, "abc")
    kind = rng.randrange(3)
    if kind == 0:
        body = seq(s1, Ref("P"))
    elif kind == 1:
        body = Alt(seq(s1, Ref("P")), s2)
    else:
        body = seq(Par(s1, s2), Ref("P"))
    return Specification({"P": body}, "P")


def test_recursive_split_property():
    rng = random.Random(17)
    for _ in range(60):
        spec = random_recursive(rng)
        acts_ = sorted(acts(Ref("P"), spec))
        A = rng.sample(acts_, rng.randint(1, min(2, len(acts_))))
        w = rng.choice(["", "1", "21"])
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            out, _ = split_spec(spec, A, w)
        assert bisimilar(explore(spec), explore(out)), (str(spec), A, w)
