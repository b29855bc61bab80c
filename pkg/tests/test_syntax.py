import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from procsplit.errors import ParseError, TauInCommRule
from procsplit.multiactions import TAU, MultiAction
from procsplit.process import (
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
    Ref,
    Rename,
    Seq,
    Specification,
    Sync,
    act,
)
from procsplit.splitting import split_spec
from procsplit.syntax import format_spec, format_term, parse, parse_term, tokenize

DEF_NAMES = ("P", "Q", "R")
ACTS = ("a", "b", "c", "x_1", "x_1'", "Q")  # "Q" collides with a definition name


def test_parse_fifo():
    spec = parse("Fifo = a . b . Fifo;")
    assert spec.root == "Fifo"
    assert spec.body("Fifo") == Seq(act("a"), Seq(act("b"), Ref("Fifo")))


def test_parse_tau_and_choice():
    assert parse("P = a|b + tau;").body("P") == Alt(act("a", "b"), Act(TAU))


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as info:
        parse("P = a . ;")
    assert (info.value.line, info.value.col) == (1, 9)


def test_tau_in_comm_rejected():
    with pytest.raises(TauInCommRule):
        parse("P = comm{tau|a->c}(a);")


def test_minimal_parentheses():
    assert format_spec(parse("P = a|b.c + d;")) == "P = a|b . c + d;\n"
    assert format_term(Seq(Alt(act("a"), act("b")), act("c"))) == "(a + b) . c"
    assert format_term(Alt(Alt(act("a"), act("b")), act("c"))) == "(a + b) + c"
    assert format_term(DELTA) == "delta"


def test_comments_and_operators():
    text = """% a comment
    P = allow{a|b, c}(block{d}(rename{a->b}(comm{a|d->c}(hide{e}(lmerge(a, sync(b, c)) || delta)))));
    """
    spec = parse(text)
    assert parse(format_spec(spec)) == spec


def test_split_output_round_trips():
    out, _ = split_spec(parse("Fifo = a . b . Fifo;"), ["a"])
    text = format_spec(out)
    assert "`a#f#`" in text
    assert parse(text) == out


def test_action_named_like_definition():
    spec = Specification({"P": Seq(act("Q"), Ref("Q")), "Q": act("b")}, "P")
    text = format_spec(spec)
    assert "Q|tau" in text
    assert parse(text) == spec


def test_tokenizer_tracks_lines():
    toks = tokenize("P =\n  a;")
    assert [(t.text, t.line, t.col) for t in toks[:3]] == [("P", 1, 1), ("=", 1, 3), ("a", 2, 3)]


def test_parse_term_without_definitions():
    assert parse_term("a . P", ["P"]) == Seq(act("a"), Ref("P"))


# round trip on random specifications ------------------------------------------

multis = st.builds(MultiAction, st.lists(st.sampled_from(ACTS), max_size=3))
nonempty = st.builds(MultiAction, st.lists(st.sampled_from(ACTS), min_size=1, max_size=3))
action_sets = st.frozensets(st.sampled_from(ACTS), max_size=3)


@st.composite
def comm_rules(draw):
    pool = list(draw(st.permutations(ACTS)))
    rules = []
    while len(pool) >= 2 and draw(st.booleans()):
        k = draw(st.integers(2, min(3, len(pool))))
        rules.append(CommRule(MultiAction(pool[:k]), draw(st.sampled_from(ACTS))))
        pool = pool[k:]
    return frozenset(rules)


renamings = st.dictionaries(st.sampled_from(ACTS), st.sampled_from(ACTS), max_size=3).map(
    lambda d: frozenset(d.items()))


def terms(refs):
    leaves = [st.builds(Act, multis), st.just(DELTA)]
    if refs:
        leaves.append(st.sampled_from(refs).map(Ref))

    def extend(sub):
        return st.one_of(
            *(st.builds(op, sub, sub) for op in (Alt, Seq, Par, LMerge, Sync)),
            st.builds(Allow, st.frozensets(nonempty, max_size=3), sub),
            st.builds(Block, action_sets, sub),
            st.builds(Rename, renamings, sub),
            st.builds(Comm, comm_rules(), sub),
            st.builds(Hide, action_sets, sub),
        )

    return st.recursive(st.one_of(*leaves), extend, max_leaves=10)


@st.composite
def specifications(draw):
    n = draw(st.integers(1, len(DEF_NAMES)))
    defs = {}
    for i in range(n):
        # a definition may refer to itself and to definitions declared after it
        refs = list(DEF_NAMES[i:n])
        defs[DEF_NAMES[i]] = draw(terms(refs))
    return Specification(defs, DEF_NAMES[0])


@settings(max_examples=200, deadline=None)
@given(specifications())
def test_round_trip(spec):
    assert parse(format_spec(spec)) == spec
