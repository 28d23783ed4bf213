"""Effect of random state flips on structure recovery.

Run: python3 demos/noise.py
"""
from bnorder import RunConfig
from bnorder.protocol import SyntheticSetup, noise_sweep, synthetic_problem

bn, data = synthetic_problem(SyntheticSetup(), seed=2)
rows = noise_sweep(data, bn.dag, RunConfig(iterations=5000, seed=2), (0.0, 0.05, 0.1, 0.15, 0.2))
for r in rows:
    print(f"{r['config']:>7}  tp_rate {r['tp_rate']:.3f}  fp_rate {r['fp_rate']:.4f}")
