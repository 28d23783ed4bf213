"""Timing harness: per-iteration scoring cost and enumeration speedup."""
from __future__ import annotations

import csv
import math
import time
from pathlib import Path
from typing import Iterable

import numpy as np

from .combinatorics import enumerate_bounded_subsets, table_size
from .engine import ScoringEngine
from .model import Order
from .scoring import ScoreCache

BENCH_COLUMNS = ("kind", "nodes", "workers", "s", "subsets", "seconds_per_iteration")


def synthetic_cache(n: int, s: int, seed: int = 0) -> ScoreCache:
    """Random finite local scores with the shape of a real cache."""
    rng = np.random.default_rng(seed)
    return ScoreCache(rng.normal(-1000.0, 50.0, size=(n, table_size(n - 1, s))), s)


def _scan_subsets(candidates, s, table) -> tuple[float, int]:
    best, best_mask = -math.inf, 0
    for g, mask in enumerate(enumerate_bounded_subsets(candidates, s)):
        val = table[g]
        if val > best:
            best, best_mask = val, mask
    return best, best_mask


def enumeration_timing(n_candidates: int, s: int = 4, repeats: int = 3,
                       seed: int = 0) -> dict:
    """Best-of-``repeats`` time of one node's scoring loop, bounded vs. all subsets.

    Both loops generate parent sets, read a score per set and keep the
    running argmax; the unbounded loop simply generates all ``2**n`` sets.
    """
    rng = np.random.default_rng(seed)
    cands = list(range(n_candidates))
    bounded_table = rng.normal(size=table_size(n_candidates, s)).tolist()
    full_table = rng.normal(size=2 ** n_candidates).tolist()

    def best_time(limit, table):
        out = math.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            _scan_subsets(cands, limit, table)
            out = min(out, time.perf_counter() - t0)
        return out

    bounded = best_time(s, bounded_table)
    full = best_time(n_candidates, full_table)
    return {
        "candidates": n_candidates,
        "bounded_subsets": len(bounded_table),
        "full_subsets": len(full_table),
        "bounded_seconds": bounded,
        "full_seconds": full,
        "speedup": full / bounded,
    }


def scoring_timing(n: int, workers: int, iterations: int = 20, s: int = 4, seed: int = 0,
                   cache: ScoreCache | None = None) -> float:
    """Mean seconds per full-order score at a given worker count."""
    cache = cache or synthetic_cache(n, s, seed)
    rng = np.random.default_rng(seed + 1)
    orders = [Order(tuple(int(v) for v in rng.permutation(n))) for _ in range(iterations)]
    with ScoringEngine(cache, workers=workers) as engine:
        engine.score_order(orders[0])
        t0 = time.perf_counter()
        for o in orders:
            engine.score_order(o)
        return (time.perf_counter() - t0) / iterations


def run_benchmarks(node_counts: Iterable[int], worker_counts: Iterable[int],
                   iterations: int = 20, s: int = 4, enum_candidates: Iterable[int] = (),
                   seed: int = 0) -> list[dict]:
    rows = []
    for n in node_counts:
        cache = synthetic_cache(n, s, seed)
        for w in worker_counts:
            rows.append({"kind": "order_scoring", "nodes": n, "workers": w, "s": s,
                         "subsets": cache.per_node,
                         "seconds_per_iteration": scoring_timing(n, w, iterations, s, seed, cache)})
    for c in enum_candidates:
        res = enumeration_timing(c, s, seed=seed)
        rows.append({"kind": "enumerate_bounded", "nodes": c, "workers": 1, "s": s,
                     "subsets": res["bounded_subsets"],
                     "seconds_per_iteration": res["bounded_seconds"]})
        rows.append({"kind": "enumerate_all", "nodes": c, "workers": 1, "s": c,
                     "subsets": res["full_subsets"],
                     "seconds_per_iteration": res["full_seconds"]})
    return rows


def write_bench_csv(target, rows: list[dict]) -> None:
    """Write to a path, or to an open text stream."""
    fh = open(target, "w", newline="") if isinstance(target, (str, Path)) else target
    try:
        w = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow({k: row[k] for k in BENCH_COLUMNS})
    finally:
        if fh is not target:
            fh.close()
