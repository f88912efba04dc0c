import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nquasi import decomposition_tree, max_irreducible_retract, reconstruct
from nquasi.errors import ParseError, PredicateError
from nquasi.generate import cyclic_table, random_planted, random_quasigroup
from nquasi.io import (
    format_mdscode,
    format_qtable,
    format_theorem,
    format_tree,
    parse_mdscode,
    parse_qtable,
    parse_theorem,
    parse_tree,
    read_predicate,
)


@settings(max_examples=40)
@given(st.integers(1, 4), st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_qtable_round_trip(s, m, seed):
    if s**m > 256:
        m = 2
    q = random_quasigroup(s, m, np.random.default_rng(seed))
    text = format_qtable(q)
    assert parse_qtable(text) == q
    assert format_qtable(parse_qtable(text)) == text


@settings(max_examples=40)
@given(st.integers(1, 4), st.integers(0, 3), st.integers(0, 2**32 - 1))
def test_mdscode_round_trip(s, m, seed):
    p = random_quasigroup(s, m, np.random.default_rng(seed)).to_predicate()
    text = format_mdscode(p)
    assert parse_mdscode(text) == p
    assert format_mdscode(parse_mdscode(text)) == text


def test_qtable_header():
    assert format_qtable(cyclic_table(2, 2)).splitlines()[0] == "qtable v1 order=2 arity=2"


def test_mdscode_header():
    assert format_mdscode(cyclic_table(2, 2).to_predicate()).splitlines()[0] == "mdscode v1 order=2 length=3"


def test_qtable_whitespace_tolerant():
    assert parse_qtable("qtable v1 order=2 arity=2\n0 1\n\n1   0\n") == cyclic_table(2, 2)


@pytest.mark.parametrize("text", [
    "",
    "qtable v2 order=2 arity=2\n0 1 1 0",
    "qtable v1 order=2\n0 1 1 0",
    "qtable v1 order=2 arity=2\n0 1 1",
    "qtable v1 order=2 arity=2\n0 1 x 0",
    "mdscode v1 order=2 length=3\n0 0\n1 1",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        read_predicate(text)


def test_short_code_is_invalid_not_malformed():
    with pytest.raises(PredicateError):
        read_predicate("mdscode v1 order=2 length=3\n0 0 0")


def test_auto_format():
    q = cyclic_table(3, 2)
    assert read_predicate(format_qtable(q)) == q.to_predicate()
    assert read_predicate(format_mdscode(q.to_predicate())) == q.to_predicate()


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(4, 6), st.integers(0, 2**32 - 1))
def test_tree_round_trip(s, n, seed):
    if s**n > 4**6:
        n = 5
    t = decomposition_tree(random_planted(s, n, np.random.default_rng(seed)).predicate)
    text = format_tree(t)
    back = parse_tree(text)
    assert back == t
    assert format_tree(back) == text


def test_tree_irreducible_marker(irr4_pred):
    text = format_tree(decomposition_tree(irr4_pred))
    assert text.splitlines()[1] == "leaf order=4 arity=4 irreducible"


def test_tree_trailing_garbage():
    text = format_tree(decomposition_tree(cyclic_table(3, 3).to_predicate()))
    with pytest.raises(ParseError):
        parse_tree(text + "var\n")


def test_theorem_round_trip(seven):
    inst = max_irreducible_retract(seven.predicate).instance
    dec = reconstruct(inst)
    text = format_theorem(dec)
    back = parse_theorem(text)
    assert back.predicate() == dec.predicate() == inst.M
    assert back.group_map == dec.group_map
    assert format_theorem(back) == text
    assert text.startswith("theorem1 v1 order=4 arity=7 k=4 groupmap=0,0,1\n")
