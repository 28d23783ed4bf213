"""Build a local-score cache for a small synthetic network and look scores up.

Run: python3 demos/score_cache.py
"""
import numpy as np

from bnorder import RunConfig
from bnorder.combinatorics import table_size
from bnorder.model import pset_mask
from bnorder.protocol import SyntheticSetup, synthetic_problem
from bnorder.scoring import Hyperparams, build_score_cache, local_score

bn, data = synthetic_problem(SyntheticSetup(nodes=6, samples=2000), seed=1)
print("true edges:", sorted(bn.dag.edges()))

config = RunConfig(s=3)
cache = build_score_cache(data, config)
print(f"cache: {cache.n} nodes x {cache.per_node} parent sets "
      f"(= sum of C(5, j) for j <= 3 = {table_size(5, 3)})")

# every entry equals a fresh computation from the counts
hyper = Hyperparams.from_config(config)
child = 3
for parents in ([], [0], [0, 1], [1, 2, 5]):
    mask = pset_mask(parents)
    print(f"ls({child}, {parents}) = {cache.lookup(child, mask):.4f}",
          "(recomputed", f"{local_score(child, mask, data, hyper):.4f})")

# the best single parent for each node, read straight from the table
for node in range(cache.n):
    others = [v for v in range(cache.n) if v != node]
    best = max(others, key=lambda v: cache.lookup(node, 1 << v))
    gain = cache.lookup(node, 1 << best) - cache.lookup(node, 0)
    print(f"node {node}: best single parent {best}, gain {gain:+.2f} log10 units")
print("all scores finite:", bool(np.isfinite(cache.scores).all()))
