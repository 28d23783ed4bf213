"""Synthetic ground truth, forward sampling, noise injection and recovery metrics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .errors import ValidationError
from .model import Dag, Dataset, PriorMatrix, is_acyclic, pset_members, topological_order


@dataclass(frozen=True, eq=False)
class GroundTruthBn:
    """``cpts[i][k, j] = P(v_i = j | parent configuration k)``.

    Parent configurations use the same mixed-radix convention as the scorer:
    ascending parent index, lowest parent least significant.
    """

    dag: Dag
    cardinalities: tuple[int, ...]
    cpts: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.cardinalities) != self.dag.n or len(self.cpts) != self.dag.n:
            raise ValidationError("need one cardinality and one CPT per node")
        if not is_acyclic(self.dag):
            raise ValidationError("ground truth graph must be acyclic")
        for i, cpt in enumerate(self.cpts):
            rows = self.parent_configs(i)
            if cpt.shape != (rows, self.cardinalities[i]):
                raise ValidationError(f"CPT of node {i} has shape {cpt.shape}, "
                                      f"expected {(rows, self.cardinalities[i])}")
            if np.any(cpt < 0) or not np.allclose(cpt.sum(axis=1), 1.0, atol=1e-9, rtol=0):
                raise ValidationError(f"CPT rows of node {i} must be distributions")

    @property
    def n(self) -> int:
        return self.dag.n

    def parent_configs(self, node: int) -> int:
        return math.prod(self.cardinalities[p] for p in pset_members(self.dag.parents[node]))

    def joint(self) -> np.ndarray:
        """Full joint distribution by enumeration (small networks only)."""
        shape = self.cardinalities
        probs = np.ones(shape)
        for states in product(*(range(c) for c in shape)):
            p = 1.0
            for i in range(self.n):
                k, r = 0, 1
                for q in pset_members(self.dag.parents[i]):
                    k += states[q] * r
                    r *= shape[q]
                p *= self.cpts[i][k, states[i]]
            probs[states] = p
        return probs


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def tp_rate(self) -> float:
        pos = self.tp + self.fn
        return self.tp / pos if pos else 0.0

    @property
    def fp_rate(self) -> float:
        neg = self.fp + self.tn
        return self.fp / neg if neg else 0.0

    @property
    def f1(self) -> float:
        denom = 2 * self.tp + self.fp + self.fn
        return 2 * self.tp / denom if denom else 1.0


def random_dag(n: int, max_parents: int, edge_prob: float, rng: np.random.Generator) -> Dag:
    """Random permutation, then each backward edge kept with ``edge_prob`` up to the cap."""
    perm = rng.permutation(n)
    parents = [0] * n
    for pos in range(1, n):
        child = int(perm[pos])
        count = 0
        for q in rng.permutation(pos):
            if count >= max_parents:
                break
            if rng.random() < edge_prob:
                parents[child] |= 1 << int(perm[q])
                count += 1
    return Dag(tuple(parents))


def random_cpts(dag: Dag, cardinalities: Sequence[int], rng: np.random.Generator,
                concentration: float = 1.0) -> GroundTruthBn:
    """CPT rows drawn from a symmetric Dirichlet."""
    cards = tuple(int(c) for c in cardinalities)
    cpts = []
    for i in range(dag.n):
        rows = math.prod(cards[p] for p in pset_members(dag.parents[i]))
        cpts.append(rng.dirichlet(np.full(cards[i], concentration), size=rows))
    return GroundTruthBn(dag, cards, tuple(cpts))


def forward_sample(bn: GroundTruthBn, m: int, rng: np.random.Generator) -> Dataset:
    n = bn.n
    data = np.zeros((m, n), dtype=np.int64)
    for node in topological_order(bn.dag).perm:
        config = np.zeros(m, dtype=np.int64)
        r = 1
        for p in pset_members(bn.dag.parents[node]):
            config += data[:, p] * r
            r *= bn.cardinalities[p]
        cum = np.cumsum(bn.cpts[node], axis=1)[config]
        u = rng.random(m)
        states = (u[:, None] >= cum).sum(axis=1)
        data[:, node] = np.minimum(states, bn.cardinalities[node] - 1)
    return Dataset(data, bn.cardinalities)


def inject_noise(dataset: Dataset, p: float, rng: np.random.Generator) -> Dataset:
    """Each cell changes state with probability ``p``.

    Binary variables flip; variables with more states move to a uniformly
    chosen different state.
    """
    if not 0.0 <= p <= 1.0:
        raise ValidationError("flip probability must be in [0, 1]")
    data = dataset.data.copy()
    cards = np.asarray(dataset.cardinalities)
    flip = rng.random(data.shape) < p
    shift = 1 + np.floor(rng.random(data.shape) * (cards - 1)).astype(np.int64)
    data = np.where(flip, (data + shift) % cards, data)
    return Dataset(data, dataset.cardinalities, dataset.names)


def confusion(learned: Dag, truth: Dag) -> ConfusionCounts:
    if learned.n != truth.n:
        raise ValidationError(f"graphs have {learned.n} and {truth.n} nodes")
    n = truth.n
    a, b = learned.edge_set(), truth.edge_set()
    tp = len(a & b)
    fp = len(a - b)
    fn = len(b - a)
    return ConfusionCounts(tp, fp, fn, n * (n - 1) - tp - fp - fn)


def prior_perturbation_protocol(truth: Dag, baseline: Dag, strength_pair: tuple[float, float],
                                fraction: float, rng: np.random.Generator) -> PriorMatrix:
    """Priors on the baseline's mistakes.

    Each missed true edge ``m -> i`` gets ``R[i, m] = strength_pair[0]`` and
    each spurious edge gets ``strength_pair[1]``, independently with
    probability ``fraction``.  Edges are visited child-major, then parent.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValidationError("fraction must be in [0, 1]")
    if truth.n != baseline.n:
        raise ValidationError("graphs differ in node count")
    n = truth.n
    r = np.full((n, n), 0.5)
    t, b = truth.edge_set(), baseline.edge_set()
    for i in range(n):
        for m in range(n):
            if m == i:
                continue
            edge = (m, i)
            if edge in t and edge not in b:
                if rng.random() < fraction:
                    r[i, m] = strength_pair[0]
            elif edge in b and edge not in t:
                if rng.random() < fraction:
                    r[i, m] = strength_pair[1]
    return PriorMatrix(r)


# Prior configurations of the ROC protocol, weakest first: (label, pair, fraction).
ROC_SWEEP = (
    ("no-prior", None, 0.0),
    ("0.7/0.2@0.2", (0.7, 0.2), 0.2),
    ("0.7/0.2@0.4", (0.7, 0.2), 0.4),
    ("0.8/0.1@0.2", (0.8, 0.1), 0.2),
    ("0.8/0.1@0.4", (0.8, 0.1), 0.4),
)


# -- counting oracles ------------------------------------------------------------

def count_dags(n: int) -> int:
    """Labeled DAGs on ``n`` nodes (inclusion-exclusion recurrence)."""
    if not 0 <= n <= 20:
        raise ValidationError("count_dags supports 0 <= n <= 20")
    a = [1]
    for k in range(1, n + 1):
        a.append(sum((-1) ** (j + 1) * math.comb(k, j) * 2 ** (j * (k - j)) * a[k - j]
                     for j in range(1, k + 1)))
    return a[n]


def count_orders(n: int) -> int:
    if not 0 <= n <= 20:
        raise ValidationError("count_orders supports 0 <= n <= 20")
    return math.factorial(n)


def enumerate_dags(n: int, max_in_degree: int | None = None) -> Iterator[Dag]:
    """Brute force: every parent-set assignment, kept when acyclic."""
    cap = n - 1 if max_in_degree is None else max_in_degree
    choices = []
    for i in range(n):
        others = [1 << v for v in range(n) if v != i]
        masks = []
        for bits in range(1 << (n - 1)):
            mask = sum(o for q, o in enumerate(others) if bits >> q & 1)
            if bin(mask).count("1") <= cap:
                masks.append(mask)
        choices.append(masks)
    for parents in product(*choices):
        dag = Dag(parents)
        if is_acyclic(dag):
            yield dag
