"""Prior-strength sweep: each configuration gives one (fp_rate, tp_rate) point.

Priors are placed on the no-prior run's mistakes, with growing strength.
Run: python3 demos/priors_roc.py
"""
from bnorder import RunConfig
from bnorder.protocol import SyntheticSetup, roc_sweep, synthetic_problem

bn, data = synthetic_problem(SyntheticSetup(nodes=15, samples=300), seed=4)
rows = roc_sweep(data, bn.dag, RunConfig(iterations=4000, seed=4))
print(f"{'config':>12} {'fp_rate':>8} {'tp_rate':>8} {'score':>12}")
for r in rows:
    print(f"{r['config']:>12} {r['fp_rate']:8.4f} {r['tp_rate']:8.3f} {r['score']:12.3f}")
