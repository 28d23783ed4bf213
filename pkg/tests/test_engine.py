import random
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bnorder.bench import synthetic_cache
from bnorder.combinatorics import global_index
from bnorder.engine import (IDENTITY, ArgmaxCell, ScoringEngine, WorkSlice, argmax_reduce, combine,
                            parallel_score_order, partition, scan_slice)
from bnorder.errors import ConfigurationError, EmptyWorkError, ValidationError
from bnorder.model import Order, PriorMatrix
from bnorder.scoring import score_order

from conftest import REDUCTION_SCORES, random_cells


def test_partition_examples():
    assert partition(57, 1) == [(0, 57)]
    assert partition(57, 4) == [(0, 14), (14, 28), (28, 42), (42, 57)]
    parts = partition(3, 8)
    assert sum(1 for lo, hi in parts if lo == hi) == 5
    with pytest.raises(ConfigurationError):
        partition(5, 0)


@given(st.integers(0, 10_000), st.integers(1, 64))
def test_partition_covers_evenly(total, workers):
    parts = partition(total, workers)
    assert parts[0][0] == 0 and parts[-1][1] == total
    assert all(a[1] == b[0] for a, b in zip(parts, parts[1:]))
    sizes = [hi - lo for lo, hi in parts]
    assert max(sizes) - min(sizes) <= 1


def test_fig8_reduction():
    cells = [ArgmaxCell(float(v), i) for i, v in enumerate(REDUCTION_SCORES)]
    assert argmax_reduce(cells) == ArgmaxCell(-1.0, 3)
    # the pairwise halving tree of the walk-through
    level = cells
    while len(level) > 1:
        half = len(level) // 2
        level = [combine(level[j], level[j + half]) for j in range(half)]
    assert level[0] == ArgmaxCell(-1.0, 3)


def test_reduce_small_cases():
    c = ArgmaxCell(-2.0, 9)
    assert argmax_reduce([c]) == c
    a, b = ArgmaxCell(1.0, 7), ArgmaxCell(1.0, 2)
    assert argmax_reduce([a, b]) == argmax_reduce([b, a]) == b
    assert argmax_reduce([IDENTITY, c, IDENTITY]) == c
    for bad in ([], [IDENTITY, IDENTITY]):
        with pytest.raises(EmptyWorkError):
            argmax_reduce(bad)


def tree_reduce(cells, rng):
    cells = list(cells)
    while len(cells) > 1:
        j = rng.randrange(len(cells) - 1)
        cells[j:j + 2] = [combine(cells[j], cells[j + 1])]
    return cells[0]


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.integers(1, 40))
def test_reduce_order_and_bracketing_invariant(seed, size):
    rng = np.random.default_rng(seed)
    cells = random_cells(rng, size)
    if all(c.idx is None for c in cells):
        return
    expected = argmax_reduce(cells)
    prng = random.Random(seed)
    shuffled = cells[:]
    prng.shuffle(shuffled)
    assert argmax_reduce(shuffled) == expected
    assert tree_reduce(shuffled, prng) == expected
    assert reduce(combine, reversed(cells)) == expected


def test_scan_slice_cases(cache7):
    order = Order((3, 0, 6, 1, 5, 2, 4))
    node = 4                                   # last position: six predecessors
    assert scan_slice(WorkSlice(node, 5, 5), order, cache7) == IDENTITY
    s_node = 1 + 6 + 15 + 20
    empty_idx = s_node - 1
    cell = scan_slice(WorkSlice(node, empty_idx, s_node), order, cache7)
    assert cell == ArgmaxCell(cache7.lookup(node, 0), empty_idx)
    full = scan_slice(WorkSlice(node, 0, s_node), order, cache7)
    _, sg = score_order(order, cache7)
    with ScoringEngine(cache7) as eng:
        assert eng.parent_mask(order, node, full.idx) == sg.dag.parents[node]
    with pytest.raises(ValidationError):
        scan_slice(WorkSlice(node, 0, s_node + 1), order, cache7)


def test_local_index_is_global_order(cache7):
    order = Order((3, 0, 6, 1, 5, 2, 4))
    for strategy in ("pst", "unrank"):
        with ScoringEngine(cache7, strategy=strategy) as eng:
            preds = sorted(order.perm[:6])
            for g in range(42):
                mask = eng.parent_mask(order, 4, g)
                local = [preds.index(v) for v in preds if mask >> v & 1]
                assert global_index(local, 6, 3) == g


@pytest.mark.parametrize("strategy", ["pst", "unrank"])
@pytest.mark.parametrize("workers,tasks", [(1, None), (2, None), (3, 5), (8, None), (4, 1)])
def test_worker_invariance(cache7, strategy, workers, tasks):
    rng = np.random.default_rng(workers * 10 + (tasks or 0))
    r = rng.random((7, 7))
    priors = PriorMatrix(r)
    for _ in range(15):
        order = Order(tuple(int(v) for v in rng.permutation(7)))
        for pri in (None, priors):
            assert parallel_score_order(order, cache7, pri, workers, tasks, strategy) == \
                score_order(order, cache7, pri)


def test_tie_rule_prefers_smallest_index():
    cache = synthetic_cache(5, 2)
    flat = np.zeros_like(cache.scores)
    tied = type(cache)(flat, 2)
    total, sg = parallel_score_order((0, 1, 2, 3, 4), tied, workers=3)
    # all ties: index 0 is the largest, lexicographically first predecessor set
    assert sg.dag.parents == (0, 0b1, 0b11, 0b11, 0b11)
    assert score_order((0, 1, 2, 3, 4), tied)[1].dag.parents == sg.dag.parents


def test_engine_rejects_bad_config(cache7):
    with pytest.raises(ConfigurationError):
        ScoringEngine(cache7, workers=0)
    with pytest.raises(ConfigurationError):
        ScoringEngine(cache7, strategy="gpu")


def test_large_synthetic_matches_reference():
    cache = synthetic_cache(20, 4, seed=3)
    rng = np.random.default_rng(0)
    for _ in range(3):
        order = Order(tuple(int(v) for v in rng.permutation(20)))
        ref = score_order(order, cache)
        for w in (1, 4):
            assert parallel_score_order(order, cache, workers=w) == ref
            assert parallel_score_order(order, cache, workers=w, strategy="unrank") == ref
