import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_bisimilar, random_lts
from procsplit import _refine_py
from procsplit.equivalence import (
    KERNEL,
    Partition,
    bisimilar,
    block_ids,
    coarsest_partition,
    reduce,
)
from procsplit.multiactions import MultiAction
from procsplit.process import DELTA, Alt, Seq, act
from procsplit.semantics import explore, explore_term
from procsplit.splitting import split_spec
from procsplit.syntax import parse

try:
    from procsplit import _refine_ext
except ImportError:  # extension not built
    _refine_ext = None


def test_idempotent_choice():
    p = Seq(act("a"), Alt(act("b"), act("c")))
    assert bisimilar(explore_term(Alt(p, p)), explore_term(p))


def test_label_mismatch_has_witness():
    verdict = bisimilar(explore_term(Seq(act("a"), act("b"))), explore_term(Seq(act("a"), act("c"))))
    assert not verdict
    w = verdict.witness
    assert w.trace == (MultiAction.of("a"),)
    assert w.left_offers == {MultiAction.of("b")} and w.right_offers == {MultiAction.of("c")}
    assert str(w) == "a -> {b} vs {c}"


def test_termination_distinguishes():
    verdict = bisimilar(explore_term(act("a")), explore_term(Seq(act("a"), DELTA)))
    assert not verdict
    assert str(verdict.witness) == "a -> {<terminated>} vs {}"


def test_split_fifo_is_bisimilar():
    spec = parse("Fifo = a . b . Fifo;")
    out, _ = split_spec(spec, ["a"])
    assert bisimilar(explore(spec), explore(out))


def test_reduce_examples():
    assert reduce(explore_term(Alt(act("a"), act("a")))).num_states == 2
    minimal = explore(parse("Fifo = a . b . Fifo;"))
    assert reduce(minimal) == minimal
    doubled = explore_term(Alt(Seq(act("a"), DELTA), Seq(act("a"), DELTA)))
    single = explore_term(Seq(act("a"), DELTA))
    assert reduce(doubled).num_states == single.num_states
    assert bisimilar(reduce(doubled), single)


def test_partition_checks_blocks():
    with pytest.raises(ValueError):
        Partition((frozenset({0}), frozenset({0, 1})))
    assert len(coarsest_partition(explore_term(Alt(act("a"), act("a"))))) == 2


def test_oracle_agreement():
    rng = random.Random(11)
    for _ in range(200):
        l1, l2 = random_lts(rng), random_lts(rng)
        assert bool(bisimilar(l1, l2)) == brute_bisimilar(l1, l2)


@pytest.mark.skipif(_refine_ext is None, reason="compiled kernel not built")
def test_kernels_agree():
    rng = random.Random(3)
    for _ in range(300):
        l1, l2 = random_lts(rng, 8), random_lts(rng, 8)
        assert (block_ids(l1, l2, kernel=_refine_ext.refine)
                == block_ids(l1, l2, kernel=_refine_py.refine))


def test_kernel_name():
    assert KERNEL in ("cython", "python")


seeds = st.integers(0, 10**6)


@settings(max_examples=60, deadline=None)
@given(seeds, seeds, seeds)
def test_equivalence_relation(s1, s2, s3):
    a, b, c = (random_lts(random.Random(s), 4, ("a", "b")) for s in (s1, s2, s3))
    assert bisimilar(a, a)
    assert bool(bisimilar(a, b)) == bool(bisimilar(b, a))
    if bisimilar(a, b) and bisimilar(b, c):
        assert bisimilar(a, c)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_reduce_properties(seed):
    lts = random_lts(random.Random(seed), 6)
    small = reduce(lts)
    assert small.num_states <= lts.num_states
    assert bisimilar(lts, small)
    assert reduce(small).num_states == small.num_states
    # no two quotient states are bisimilar
    assert len(set(block_ids(small))) == small.num_states


@settings(max_examples=60, deadline=None)
@given(seeds, seeds)
def test_witness_is_a_common_trace(s1, s2):
    l1, l2 = random_lts(random.Random(s1), 5), random_lts(random.Random(s2), 5)
    verdict = bisimilar(l1, l2)
    if verdict:
        return
    w = verdict.witness
    for lts in (l1, l2):
        states = {lts.initial}
        out = lts.outgoing()
        for label in w.trace:
            states = {t for s in states for a, t in out[s] if a == label}
        assert states


def test_pure_python_switch():
    import os
    import subprocess
    import sys

    env = dict(os.environ, PROCSPLIT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import procsplit; print(procsplit.KERNEL)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
