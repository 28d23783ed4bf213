"""Work partitioning and argmax reduction behind order scoring.

The per-node index range is cut into slices, each slice yields one
(score, index) cell, and the cells reduce to the same answer however they
are grouped.  Run: python3 demos/parallel_engine.py
"""
import time

import numpy as np

from bnorder.bench import synthetic_cache
from bnorder.engine import ArgmaxCell, ScoringEngine, argmax_reduce, partition
from bnorder.model import Order
from bnorder.scoring import score_order

print("57 parent sets over 4 workers:", partition(57, 4))

cells = [ArgmaxCell(float(v), i) for i, v in
         enumerate([-3, -5, -9, -1, -7, -6, -8, -4, -10, -12, -11, -13, -14, -15, -2, -16])]
print("reduced:", argmax_reduce(cells))
print("reduced in reverse:", argmax_reduce(cells[::-1]))

cache = synthetic_cache(20, 4, seed=0)
order = Order(tuple(int(v) for v in np.random.default_rng(0).permutation(20)))
ref = score_order(order, cache)
for workers in (1, 2, 4, 8):
    for strategy in ("pst", "unrank"):
        with ScoringEngine(cache, workers=workers, strategy=strategy) as engine:
            engine.score_order(order)
            t0 = time.perf_counter()
            got = engine.score_order(order)
            ms = (time.perf_counter() - t0) * 1e3
        print(f"W={workers} {strategy:6s} identical={got == ref} {ms:.2f} ms")
