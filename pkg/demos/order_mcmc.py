"""Learn an 8-node network with the order sampler and compare it with the truth.

Run: python3 demos/order_mcmc.py
"""
from bnorder import RunConfig, run_mcmc
from bnorder.evalgen import confusion
from bnorder.protocol import SyntheticSetup, synthetic_problem
from bnorder.scoring import build_score_cache, score_graph

bn, data = synthetic_problem(SyntheticSetup(), seed=3)
config = RunConfig(iterations=5000, seed=3)
cache = build_score_cache(data, config)
res = run_mcmc(None, config, cache=cache)

truth_score = score_graph(bn.dag, cache).total
print(f"truth score   {truth_score:.3f}")
print(f"learned score {res.best.total:.3f}")
print(f"acceptance    {res.acceptance_rate:.3f}")

trace = res.trace["best_score"]
for it in (0, 10, 100, 1000, len(trace) - 1):
    print(f"  best after {it + 1:5d} iterations: {trace[it]:.3f}")

c = confusion(res.best.dag, bn.dag)
print(f"tp={c.tp} fp={c.fp} fn={c.fn}  tp_rate={c.tp_rate:.3f} fp_rate={c.fp_rate:.4f}")
print("top graphs:", [round(g.total, 3) for g in res.tracker])
