"""Data-parallel order scoring on a thread pool.

For every node the index space ``[0, S_node)`` of its bounded predecessor
subsets (``S_node = sum_j C(p, j)`` for ``p`` predecessors) is cut into
contiguous slices.  Each slice is scanned by a compiled kernel that releases
the GIL, producing one :class:`ArgmaxCell`; the driver reduces the cells of a
node with a smallest-index tie rule, so results are bit-identical to the
sequential scorer for any worker count.

Slice index -> parent set goes either through a precomputed parent set table
(``strategy="pst"``, default) or through on-the-fly unranking
(``strategy="unrank"``, no table memory).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache, reduce
from typing import NamedTuple, Sequence

import numpy as np
from numba import njit

from .combinatorics import (BINOM, _unrank_into_jit, build_pst, pst_nbytes, size_offset,
                            subset_at, table_size)
from .errors import CapacityError, ConfigurationError, EmptyWorkError, ValidationError
from .model import Dag, Order, PriorMatrix, as_order
from .scoring import ScoreCache, ScoredGraph, ppf_matrix


class WorkSlice(NamedTuple):
    node: int
    lo: int
    hi: int


class ArgmaxCell(NamedTuple):
    score: float
    idx: int | None


IDENTITY = ArgmaxCell(-math.inf, None)


def partition(total: int, workers: int) -> list[tuple[int, int]]:
    """Split ``[0, total)`` with boundaries ``floor(i * total / workers)``."""
    if workers < 1:
        raise ConfigurationError("workers must be >= 1")
    bounds = [i * total // workers for i in range(workers + 1)]
    return list(zip(bounds[:-1], bounds[1:]))


def combine(a: ArgmaxCell, b: ArgmaxCell) -> ArgmaxCell:
    if a.idx is None:
        return b
    if b.idx is None:
        return a
    if a.score > b.score or (a.score == b.score and a.idx < b.idx):
        return a
    return b


def argmax_reduce(cells: Sequence[ArgmaxCell]) -> ArgmaxCell:
    """Highest score wins, then smallest index; identity cells never win."""
    if not cells:
        raise EmptyWorkError("no cells to reduce")
    out = reduce(combine, cells)
    if out.idx is None:
        raise EmptyWorkError("all cells are empty")
    return out


# -- compiled scan kernel ----------------------------------------------------

@njit(nogil=True, cache=True)
def _scan_tasks(task_node, task_lo, task_hi, pred, pred_count, scores, w, s, binom,
                cand_offset, use_pst, pst_members, pst_sizes, pst_start,
                out_score, out_idx):
    n_cand = scores.shape[0] - 1
    buf = np.empty(max(s, 1), dtype=np.int64)
    for t in range(task_node.shape[0]):
        node = task_node[t]
        p = pred_count[node]
        best = -np.inf
        best_g = -1
        for g in range(task_lo[t], task_hi[t]):
            if use_pst:
                row = pst_start[p] + g
                k = pst_sizes[row]
                for q in range(k):
                    buf[q] = pst_members[row, q]
            else:
                k = min(p, s)
                rem = g
                while rem >= binom[p, k]:
                    rem -= binom[p, k]
                    k -= 1
                _unrank_into_jit(p, k, rem + 1, binom, buf)
                for q in range(k):
                    buf[q] -= 1
            # rank among the node's candidates (all other nodes, ascending)
            after = 0
            for q in range(k):
                v = pred[node, buf[q]]
                c = v if v < node else v - 1
                after += binom[n_cand - 1 - c, k - q]
            idx = cand_offset[k] + binom[n_cand, k] - 1 - after
            val = scores[node, idx]
            for q in range(k):
                val += w[node, pred[node, buf[q]]]
            if val > best:
                best = val
                best_g = g
        out_score[t] = best
        out_idx[t] = best_g


@lru_cache(maxsize=8)
def _pst_stack(n: int, s: int):
    """Parent set tables for 0..n-1 candidates, concatenated."""
    tables = [build_pst(p, s) for p in range(n)]
    start = np.zeros(n + 1, dtype=np.int64)
    for p, t in enumerate(tables):
        start[p + 1] = start[p] + len(t)
    members = np.concatenate([t.members for t in tables])
    sizes = np.concatenate([t.sizes for t in tables]).astype(np.int64)
    members.setflags(write=False)
    sizes.setflags(write=False)
    return members, sizes, start


def pst_stack_nbytes(n: int, s: int) -> int:
    return sum(pst_nbytes(p, s) for p in range(n))


class ScoringEngine:
    """Reusable scorer bound to one cache and prior matrix.

    ``tasks_per_node`` slices are cut per node (default: ``workers``); the
    flat task list is split into ``workers`` contiguous batches, one per pool
    thread.
    """

    def __init__(self, cache: ScoreCache, priors: PriorMatrix | None = None,
                 workers: int = 1, tasks_per_node: int | None = None,
                 strategy: str = "pst", memory_cap: int | None = None):
        if workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if strategy not in ("pst", "unrank"):
            raise ConfigurationError(f"unknown strategy {strategy!r}")
        self.cache = cache
        self.n = cache.n
        self.s = cache.s
        self.workers = workers
        self.tasks_per_node = tasks_per_node or workers
        self.strategy = strategy
        self.w = np.ascontiguousarray(ppf_matrix(priors, self.n))
        self.cand_offset = np.array(
            [size_offset(self.n - 1, self.s, k) for k in range(self.s + 1)], dtype=np.int64)
        if strategy == "pst":
            if memory_cap is not None and pst_stack_nbytes(self.n, self.s) > memory_cap:
                raise CapacityError("parent set tables exceed the memory cap; "
                                    "use the unrank strategy")
            self._pst = _pst_stack(self.n, self.s)
        else:
            self._pst = (np.full((1, 1), -1, dtype=np.int32),
                         np.zeros(1, dtype=np.int64), np.zeros(self.n + 1, dtype=np.int64))
        self.slice_sizes = [table_size(p, self.s) for p in range(self.n)]
        self._pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # -- planning -----------------------------------------------------------
    def _predecessors(self, order: Order):
        pos = np.asarray(order.position)
        before = pos[None, :] < pos[:, None]
        pred = np.argsort(~before, axis=1, kind="stable").astype(np.int64)
        return pred, before.sum(axis=1).astype(np.int64)

    def plan(self, order: Order, nodes: Sequence[int] | None = None) -> list[WorkSlice]:
        order = as_order(order)
        nodes = range(self.n) if nodes is None else nodes
        out = []
        for node in nodes:
            total = self.slice_sizes[order.position[node]]
            out.extend(WorkSlice(node, lo, hi) for lo, hi in partition(total, self.tasks_per_node))
        return out

    # -- scanning -------------------------------------------------------------
    def _run(self, slices, pred, pred_count):
        t = len(slices)
        arr = np.array(slices, dtype=np.int64).reshape(t, 3)
        node, lo, hi = (np.ascontiguousarray(arr[:, c]) for c in range(3))
        out_score = np.empty(t)
        out_idx = np.empty(t, dtype=np.int64)
        members, sizes, start = self._pst
        use_pst = self.strategy == "pst"

        def work(a, b):
            _scan_tasks(node[a:b], lo[a:b], hi[a:b], pred, pred_count, self.cache.scores,
                        self.w, self.s, BINOM, self.cand_offset, use_pst, members, sizes,
                        start, out_score[a:b], out_idx[a:b])

        if self._pool is None:
            work(0, t)
        else:
            futures = [self._pool.submit(work, a, b) for a, b in partition(t, self.workers) if b > a]
            for f in futures:
                f.result()
        return [ArgmaxCell(float(sc), int(ix)) if ix >= 0 else IDENTITY
                for sc, ix in zip(out_score, out_idx)]

    def scan(self, slices: Sequence[WorkSlice], order) -> list[ArgmaxCell]:
        order = as_order(order)
        pred, pred_count = self._predecessors(order)
        for sl in slices:
            if not 0 <= sl.lo <= sl.hi <= self.slice_sizes[pred_count[sl.node]]:
                raise ValidationError(f"{sl} outside the node's index range")
        if not slices:
            return []
        return self._run(list(slices), pred, pred_count)

    def parent_mask(self, order: Order, node: int, g: int, pred=None) -> int:
        """Node bitmask for local index ``g`` of ``node``'s predecessor table."""
        preds = sorted(order.perm[: order.position[node]])
        p = len(preds)
        if self.strategy == "pst":
            members, sizes, start = self._pst
            row = start[p] + g
            local = members[row, : sizes[row]]
        else:
            local = subset_at(g, p, self.s)
        mask = 0
        for q in local:
            mask |= 1 << preds[int(q)]
        return mask

    def score_nodes(self, order, nodes: Sequence[int]) -> list[tuple[float, int]]:
        """Best ``(effective score, parent mask)`` for each of ``nodes``."""
        order = as_order(order)
        nodes = list(nodes)
        if not nodes:
            return []
        pred, pred_count = self._predecessors(order)
        slices = self.plan(order, nodes)
        cells = self._run(slices, pred, pred_count)
        out = []
        per = self.tasks_per_node
        for j, node in enumerate(nodes):
            cell = argmax_reduce(cells[j * per:(j + 1) * per])
            out.append((cell.score, self.parent_mask(order, node, cell.idx)))
        return out

    def score_order(self, order) -> tuple[float, ScoredGraph]:
        order = as_order(order)
        results = self.score_nodes(order, range(self.n))
        total = 0.0
        for val, _ in results:
            total += val
        dag = Dag(tuple(mask for _, mask in results))
        return total, ScoredGraph(dag, total)


def scan_slice(sl: WorkSlice, order, cache: ScoreCache, priors: PriorMatrix | None = None,
               strategy: str = "pst") -> ArgmaxCell:
    with ScoringEngine(cache, priors, strategy=strategy) as engine:
        return engine.scan([sl], order)[0]


def parallel_score_order(order, cache: ScoreCache, priors: PriorMatrix | None = None,
                         workers: int = 1, tasks_per_node: int | None = None,
                         strategy: str = "pst") -> tuple[float, ScoredGraph]:
    with ScoringEngine(cache, priors, workers, tasks_per_node, strategy) as engine:
        return engine.score_order(order)
