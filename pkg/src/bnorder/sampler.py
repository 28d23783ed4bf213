"""Order-space Metropolis-Hastings sampler with best-graph tracking.

Randomness comes from counter-based Philox generators.  The run seed is
expanded with ``numpy.random.SeedSequence`` into two independent streams:

* stream 0 draws the initial permutation and every swap proposal;
* stream 1 draws the uniforms of the acceptance test.

Scoring consumes no randomness, so the worker count cannot influence a run.
"""
from __future__ import annotations

import bisect
import csv
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .engine import ScoringEngine
from .errors import ProposalError
from .model import Dag, Dataset, Order, PriorMatrix, RunConfig
from .scoring import ScoreCache, ScoredGraph, build_score_cache

TRACE_COLUMNS = ("iteration", "proposed_score", "accepted_flag", "best_score")


def make_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    proposal, accept = np.random.SeedSequence(seed).spawn(2)
    return (np.random.Generator(np.random.Philox(proposal)),
            np.random.Generator(np.random.Philox(accept)))


def draw_swap_positions(n: int, rng: np.random.Generator) -> tuple[int, int]:
    """Uniform unordered pair of distinct positions, returned as ``(lo, hi)``."""
    if n < 2:
        raise ProposalError("need at least two nodes to swap")
    i = int(rng.integers(n))
    j = int(rng.integers(n - 1))
    if j >= i:
        j += 1
    return (i, j) if i < j else (j, i)


def propose_swap(order: Order, rng: np.random.Generator) -> Order:
    i, j = draw_swap_positions(order.n, rng)
    return order.swapped(i, j)


def mh_accept(old_score: float, new_score: float, rng: np.random.Generator) -> bool:
    """Accept iff ``log10(u) < new - old`` for ``u ~ U(0, 1)``."""
    u = rng.random()
    return u == 0.0 or math.log10(u) < new_score - old_score


class BestGraphTracker:
    """The ``capacity`` best distinct graphs seen so far, best first."""

    def __init__(self, capacity: int = 10):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.entries: list[ScoredGraph] = []
        self._keys: set[tuple[int, ...]] = set()
        self._neg: list[float] = []

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i) -> ScoredGraph:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    @property
    def best(self) -> ScoredGraph | None:
        return self.entries[0] if self.entries else None

    def admits(self, score: float) -> bool:
        return len(self.entries) < self.capacity or score > self.entries[-1].total

    def update(self, graph: ScoredGraph) -> bool:
        if graph.key in self._keys or not self.admits(graph.total):
            return False
        if len(self.entries) == self.capacity:
            dropped = self.entries.pop()
            self._neg.pop()
            self._keys.discard(dropped.key)
        pos = bisect.bisect_right(self._neg, -graph.total)
        self.entries.insert(pos, graph)
        self._neg.insert(pos, -graph.total)
        self._keys.add(graph.key)
        return True


def tracker_update(tracker: BestGraphTracker, graph: ScoredGraph) -> BestGraphTracker:
    tracker.update(graph)
    return tracker


@dataclass
class McmcResult:
    tracker: BestGraphTracker
    trace: dict[str, np.ndarray]
    initial_order: Order
    final_order: Order
    final_score: float
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def best(self) -> ScoredGraph:
        return self.tracker[0]

    @property
    def acceptance_rate(self) -> float:
        return float(self.trace["accepted_flag"].mean())


class _ChainState:
    """Current order plus its per-node best scores and parent masks."""

    def __init__(self, order, values, masks):
        self.order = order
        self.values = values
        self.masks = masks
        self.score = _node_sum(values)


def _node_sum(values) -> float:
    total = 0.0
    for v in values:
        total += v
    return total


def _graph(state: _ChainState) -> ScoredGraph:
    return ScoredGraph(Dag(tuple(state.masks)), state.score)


def run_mcmc(dataset: Dataset | None, config: RunConfig, priors: PriorMatrix | None = None,
             *, cache: ScoreCache | None = None) -> McmcResult:
    """Preprocess (unless ``cache`` is given), then run ``config.iterations`` MH steps.

    Each step proposes a swap, rescores only the nodes whose predecessor sets
    changed (positions between the swapped pair), applies the MH test and
    offers the proposal's best graph to the tracker.  With
    ``config.strict_paper_tracker`` only accepted graphs are offered.
    """
    t0 = time.perf_counter()
    if cache is None:
        if dataset is None:
            raise ValueError("need a dataset or a prebuilt cache")
        cache = build_score_cache(dataset, config)
    t1 = time.perf_counter()
    n = cache.n
    prop_rng, acc_rng = make_streams(config.seed)
    tracker = BestGraphTracker(config.track_top)
    iters = config.iterations
    proposed = np.empty(iters)
    accepted = np.zeros(iters, dtype=bool)
    current = np.empty(iters)
    best = np.empty(iters)

    with ScoringEngine(cache, priors, config.workers, config.tasks_per_node,
                       config.strategy, config.memory_cap) as engine:
        order0 = Order(tuple(int(v) for v in prop_rng.permutation(n)))
        res = engine.score_nodes(order0, range(n))
        state = _ChainState(order0, [v for v, _ in res], [m for _, m in res])
        tracker.update(_graph(state))

        for it in range(iters):
            if n < 2:
                new = _ChainState(state.order, state.values, state.masks)
            else:
                lo, hi = draw_swap_positions(n, prop_rng)
                order = state.order.swapped(lo, hi)
                dirty = order.perm[lo:hi + 1]
                values, masks = list(state.values), list(state.masks)
                for node, (v, m) in zip(dirty, engine.score_nodes(order, dirty)):
                    values[node] = v
                    masks[node] = m
                new = _ChainState(order, values, masks)
            ok = mh_accept(state.score, new.score, acc_rng)
            if (ok or not config.strict_paper_tracker) and tracker.admits(new.score):
                tracker.update(_graph(new))
            if ok:
                state = new
            proposed[it] = new.score
            accepted[it] = ok
            current[it] = state.score
            best[it] = tracker[0].total
            if config.debug and (it + 1) % 100 == 0:
                full, _ = engine.score_order(state.order)
                assert full == state.score, f"stale chain score at iteration {it + 1}"

    t2 = time.perf_counter()
    trace = {
        "iteration": np.arange(1, iters + 1),
        "proposed_score": proposed,
        "accepted_flag": accepted,
        "current_score": current,
        "best_score": best,
    }
    return McmcResult(tracker, trace, order0, state.order, state.score,
                      {"preprocess": t1 - t0, "sampling": t2 - t1})


def write_trace_csv(path, trace: dict[str, np.ndarray]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_COLUMNS)
        for it, p, a, b in zip(trace["iteration"], trace["proposed_score"],
                               trace["accepted_flag"], trace["best_score"]):
            w.writerow((int(it), repr(float(p)), int(a), repr(float(b))))
