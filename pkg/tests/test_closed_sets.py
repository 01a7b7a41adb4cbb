import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from randcantor.closed_sets import (FiniteTree, cover_measure, decode_tree3, decode_tree4,
                                    select_path, tree_code_containing)
from randcantor.codings import CodeWord, DigitStream
from randcantor.errors import DeadEnd, NeedMoreCode


def test_decode_tree3_small():
    r = decode_tree3("210", 2)
    assert r.tree.members == {"", "0", "1", "01", "10"}
    assert r.digits_consumed == 3
    assert r.extendible_order == ("", "0", "1")


def test_decode_tree4_leaf_digit():
    r = decode_tree4("233", 2)
    assert r.tree.members == {"", "0", "1"}
    assert r.tree.dead_ends() == ["0", "1"] or sorted(r.tree.dead_ends()) == ["0", "1"]
    assert decode_tree4("3", 5).tree.members == {""}


def test_decode_needs_more_code():
    with pytest.raises(NeedMoreCode) as exc:
        decode_tree3("22", 2)
    assert exc.value.available == 2 and exc.value.required_count >= 3


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 9))
def test_tree3_has_no_dead_ends(sid, depth):
    tree = decode_tree3(DigitStream(0, sid, 3), depth).tree
    assert tree.dead_ends() == []
    assert len(tree.level(depth)) >= 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 8))
def test_stream_and_word_decoding_agree(sid, depth):
    s = DigitStream(2, sid, 3)
    r = decode_tree3(s, depth)
    assert decode_tree3(s.word(r.digits_consumed), depth) == r


def test_tree_json_round_trip():
    tree = decode_tree3("210222", 3).tree
    assert FiniteTree.from_json(tree.to_json()) == tree
    with pytest.raises(ValueError):
        FiniteTree(2, ["", "01"])


def test_select_path_follows_selector_on_branching():
    tree = decode_tree3("2222222", 3).tree
    assert str(select_path(tree, "101", 3)) == "101"
    forced = decode_tree3("010", 3).tree
    assert str(select_path(forced, "111", 3)) == "010"


def test_select_path_dead_end():
    tree = decode_tree4("03", 2).tree
    with pytest.raises(DeadEnd):
        select_path(tree, "00", 2)


def test_cover_measure():
    assert cover_measure(decode_tree3("2222222", 3).tree, 3) == 1
    assert cover_measure(decode_tree3("0000", 3).tree, 3) == Fraction(1, 8)


def test_path_selector_pushforward_depth2_exact():
    dist = {}
    for digits in itertools.product(range(3), repeat=3):
        tree = decode_tree3(CodeWord(3, digits), 2).tree
        for sel in ("00", "01", "10", "11"):
            w = str(select_path(tree, sel, 2))
            dist[w] = dist.get(w, 0) + Fraction(1, 27 * 4)
    assert dist == {w: Fraction(1, 4) for w in ("00", "01", "10", "11")}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.text(alphabet="01", min_size=8, max_size=8))
def test_tree_code_containing_contains_y(sid, y):
    code = tree_code_containing(y, DigitStream(1, sid, 3), 8)
    tree = decode_tree3(code, 8).tree
    assert y in tree
