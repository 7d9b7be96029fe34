import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from twreach.decomp import BalancedTD
from twreach.sequences import (LeafSeq, dominating_subsequence, lseq_element,
                               lseq_length, lseq_length_tree, useq_counts,
                               useq_element, useq_length, useq_stream)


def _materialize_useq(s):
    if s == 0:
        return [1]
    inner = _materialize_useq(s - 1)
    return inner + [1 << s] + inner


def test_useq_small_values():
    assert list(useq_stream(0)) == [1]
    assert list(useq_stream(1)) == [1, 2, 1]
    assert list(useq_stream(2)) == [1, 2, 1, 4, 1, 2, 1]


def test_useq_matches_recurrence():
    for s in range(8):
        assert list(useq_stream(s)) == _materialize_useq(s)


def test_useq_length_and_counts():
    for s in range(11):
        seq = _materialize_useq(s)
        assert useq_length(s) == len(seq) == (1 << (s + 1)) - 1
        for i in range(s + 1):
            assert useq_counts(s, i) == seq.count(1 << i) == 1 << (s - i)


def test_useq_element_bounds():
    with pytest.raises(ValueError):
        useq_element(2, 0)
    with pytest.raises(ValueError):
        useq_element(2, 8)
    with pytest.raises(ValueError):
        useq_element(-1, 1)
    with pytest.raises(ValueError):
        useq_counts(3, 4)


def _check_domination(s, demands, indices):
    assert indices == sorted(set(indices))
    assert len(indices) == len(demands)
    for k, dem in zip(indices, demands):
        assert useq_element(s, k) >= dem


def test_domination_examples():
    assert dominating_subsequence(2, [4]) == [4]
    assert dominating_subsequence(2, [1, 1, 1, 1]) == [1, 2, 3, 4]
    assert dominating_subsequence(2, [2, 2]) == [2, 4]
    assert dominating_subsequence(2, [4, 4]) is None


def test_domination_exhaustive_small():
    # every composition with sum <= 2^s is dominated (s <= 3 exhaustively)
    for s in range(4):
        cap = 1 << s
        for total in range(1, cap + 1):
            for cuts in range(total):
                for positions in itertools.combinations(range(1, total), cuts):
                    bounds = (0,) + positions + (total,)
                    demands = [bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1)]
                    out = dominating_subsequence(s, demands)
                    assert out is not None, (s, demands)
                    _check_domination(s, demands, out)


@given(st.integers(0, 6), st.data())
def test_domination_property(s, data):
    cap = 1 << s
    demands = []
    remaining = cap
    while remaining > 0:
        d = data.draw(st.integers(1, remaining))
        demands.append(d)
        remaining -= d
    out = dominating_subsequence(s, demands)
    assert out is not None
    _check_domination(s, demands, out)


def _complete_tree(h):
    """Complete binary BalancedTD of height h with empty bags."""
    n = (1 << (h + 1)) - 1
    bags = {i: () for i in range(1, n + 1)}
    edges = []
    for i in range(1, n + 1):
        if 2 * i <= n:
            edges.append((i, 2 * i))
            edges.append((i, 2 * i + 1))
    return BalancedTD(bags, edges, root=1)


def test_lseq_length_closed_form_values():
    assert lseq_length(0, 4) == 4
    assert lseq_length(1, 2) == 8
    assert lseq_length(2, 2) == 24
    assert lseq_length(3, 1) == 8


def test_lseq_length_closed_form_matches_tree():
    for h in range(5):
        tree = _complete_tree(h)
        for d in (1, 2, 4, 8):
            assert lseq_length(h, d) == lseq_length_tree(tree, 1, d)
            assert lseq_length(h, d) == (1 << h) * d * comb(h + d.bit_length() - 1,
                                                            d.bit_length() - 1)


def test_lseq_rejects_bad_d():
    tree = _complete_tree(1)
    with pytest.raises(ValueError, match="power of 2"):
        LeafSeq(tree, 1, 3)
    with pytest.raises(ValueError, match="power of 2"):
        lseq_length(2, 0)
    with pytest.raises(ValueError, match="unknown node"):
        LeafSeq(tree, 99, 2)


def test_lseq_height1_handrun():
    # children l=2, r=3; universal sequence <1,2,1> gives
    # <l, r, l, l, r, r, l, r>
    tree = _complete_tree(1)
    seq = LeafSeq(tree, 1, 2)
    assert seq.materialize() == [2, 3, 2, 2, 3, 3, 2, 3]
    assert seq.element(5) == 3
    assert len(seq) == 8


def test_lseq_leaf_block():
    tree = _complete_tree(2)
    seq = LeafSeq(tree, 4, 4)
    assert seq.materialize() == [4, 4, 4, 4]


def test_lseq_element_matches_materialization():
    for h in range(4):
        tree = _complete_tree(h)
        for d in (1, 2, 4):
            seq = LeafSeq(tree, 1, d)
            mat = seq.materialize()
            assert len(mat) == len(seq)
            for r, leaf in enumerate(mat, start=1):
                assert seq.element(r) == leaf
            with pytest.raises(ValueError):
                seq.element(0)
            with pytest.raises(ValueError):
                seq.element(len(mat) + 1)


def _lopsided_tree():
    # root 1 -> (2 -> (4 -> 6, 5), 3); node 2 chain exercises the
    # single-child case
    bags = {i: () for i in range(1, 7)}
    edges = [(1, 2), (1, 3), (2, 4), (2, 5), (4, 6)]
    return BalancedTD(bags, edges, root=1)


def test_lseq_single_child_nodes():
    tree = _lopsided_tree()
    for d in (1, 2, 4):
        seq = LeafSeq(tree, 1, d)
        mat = seq.materialize()
        assert len(mat) == len(seq)
        for r in range(1, len(mat) + 1):
            assert seq.element(r) == mat[r - 1]
        assert set(mat) <= set(tree.leaves)
        # structural length is bounded by the complete-tree closed form
        assert len(seq) <= lseq_length(tree.depth(), d)


def test_lseq_every_leaf_appears():
    tree = _lopsided_tree()
    assert set(LeafSeq(tree, 1, 1).materialize()) == set(tree.leaves)
