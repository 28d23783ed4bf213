from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from bnorder.combinatorics import (binomial, build_pst, enumerate_bounded_subsets, global_index,
                                   rank_combination, subset_at, table_size, unrank_combination)
from bnorder.errors import RankError


def pascal(n, k):
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row[k] if 0 <= k <= n else 0


def test_binomial_examples():
    assert binomial(6, 4) == 15
    assert binomial(59, 4) == pascal(59, 4) == 455_126
    assert binomial(5, 0) == 1
    assert binomial(3, 5) == 0


def test_binomial_fits_in_64_bits():
    assert binomial(64, 8) < 2**63


@pytest.mark.parametrize("n,k,l,expected", [
    (5, 2, 1, (1, 2)),
    (5, 2, 5, (2, 3)),
    (6, 4, 2, (1, 2, 3, 5)),
])
def test_unrank_examples(n, k, l, expected):
    assert unrank_combination(n, k, l) == expected
    assert rank_combination(expected, n) == l


def test_unrank_brute_force_lex():
    # lex order by brute force: itertools.combinations emits lexicographically
    for n in range(13):
        for k in range(min(n, 4) + 1):
            for l, combo in enumerate(combinations(range(1, n + 1), k), start=1):
                assert unrank_combination(n, k, l) == combo


def test_unrank_last_rank_terminates():
    # l = C(n, k) drives every shift loop to its largest admissible value
    for n in range(1, 20):
        for k in range(1, min(n, 6) + 1):
            assert unrank_combination(n, k, binomial(n, k)) == tuple(range(n - k + 1, n + 1))


@pytest.mark.parametrize("l", [0, 11])
def test_unrank_out_of_range(l):
    with pytest.raises(RankError):
        unrank_combination(5, 2, l)


def test_worked_indices():
    assert table_size(6, 4) == 57
    assert global_index({0, 1, 2, 3}, 6, 4) == 0
    assert global_index({0, 1, 2, 4}, 6, 4) == 1
    assert global_index({0, 1, 2, 5}, 6, 4) == 2
    assert global_index({0, 1, 3, 4}, 6, 4) == 3
    assert global_index({5}, 6, 4) == 55
    assert global_index(set(), 6, 4) == 56


@pytest.mark.parametrize("n,s", [(n, s) for n in range(0, 13) for s in (0, 1, 2, 4)])
def test_global_index_bijection(n, s):
    subsets = [c for k in range(min(n, s) + 1) for c in combinations(range(n), k)]
    idx = sorted(global_index(c, n, s) for c in subsets)
    assert idx == list(range(table_size(n, s)))
    for c in subsets:
        assert subset_at(global_index(c, n, s), n, s) == c


def test_global_index_accepts_mask():
    assert global_index(0b100000, 6, 4) == 55


@pytest.mark.parametrize("n,s,count", [(0, 4, 1), (6, 4, 57), (15, 4, 1941)])
def test_enumerate_counts(n, s, count):
    assert count == sum(binomial(n, j) for j in range(s + 1))
    out = list(enumerate_bounded_subsets(list(range(n)), s))
    assert len(out) == count == len(set(out))


def test_enumerate_follows_global_order():
    cands = [3, 7, 9, 12, 20]
    pos = {v: i for i, v in enumerate(cands)}
    for g, mask in enumerate(enumerate_bounded_subsets(cands, 3)):
        members = [pos[v] for v in cands if mask >> v & 1]
        assert global_index(members, len(cands), 3) == g


def test_enumerate_empty_pool():
    assert list(enumerate_bounded_subsets([], 4)) == [0]


def test_pst_matches_global_order():
    pst = build_pst(6, 4)
    assert len(pst) == 57
    assert pst[0] == (0, 1, 2, 3) and pst[1] == (0, 1, 2, 4)
    assert pst[55] == (5,) and pst[56] == ()
    for g in range(57):
        assert global_index(pst[g], 6, 4) == g


def test_pst_single_candidate():
    pst = build_pst(1, 4)
    assert [pst[g] for g in range(len(pst))] == [(0,), ()]


def test_pst_memory_sixty_nodes():
    pst = build_pst(60, 4)
    assert pst.nbytes == len(pst) * 16
    assert pst.nbytes / 2**20 == pytest.approx(7.99, abs=0.005)


@given(st.integers(1, 30).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, min(n, 5)))).flatmap(
    lambda nk: st.tuples(st.just(nk[0]), st.just(nk[1]), st.integers(1, binomial(*nk)))))
def test_rank_unrank_roundtrip_property(args):
    n, k, l = args
    assert rank_combination(unrank_combination(n, k, l), n) == l
