"""Bayesian Dirichlet local scores (log10), the score cache, pairwise priors,
and graph / order scoring.

The local score of node ``i`` with parent set ``pi`` is::

    ls(i, pi) = |pi| log10(gamma)
                + sum_k [ lg(a_ik) - lg(a_ik + N_ik)
                          + sum_j ( lg(N_ijk + a_ijk) - lg(a_ijk) ) ]

with ``lg = log10 Gamma``.  A parent ``m`` of ``i`` additionally contributes
``ppf(R[i, m]) = 100 (R[i, m] - 0.5)^3``.
"""
from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import gammaln

from .combinatorics import enumerate_bounded_subsets, global_index, table_size
from .errors import CapacityError, ConfigurationError, CyclicGraphError, ValidationError
from .model import (Dag, Dataset, Order, PriorMatrix, RunConfig, as_order, check_parents,
                    is_acyclic, pset_members, pset_size)

LN10 = math.log(10.0)
CACHE_MAGIC = b"BNSC"


@dataclass(frozen=True)
class Hyperparams:
    gamma: float = 0.1
    ess: float = 1.0
    scheme: str = "bdeu"

    def __post_init__(self):
        if not self.gamma > 0:
            raise ConfigurationError("gamma must be > 0")
        if not self.ess > 0:
            raise ConfigurationError("ess must be > 0")
        if self.scheme not in ("bdeu", "k2"):
            raise ConfigurationError(f"unknown scheme {self.scheme!r}")

    @classmethod
    def from_config(cls, config: RunConfig) -> "Hyperparams":
        return cls(config.gamma, config.ess, config.scheme)

    def alpha_ijk(self, r_i: int, card: int) -> float:
        if self.scheme == "k2":
            return 1.0
        return self.ess / (r_i * card)

    def digest(self) -> int:
        key = f"{float(self.gamma).hex()}|{float(self.ess).hex()}|{self.scheme}"
        return int.from_bytes(hashlib.blake2b(key.encode(), digest_size=8).digest(), "little")


@dataclass(frozen=True, eq=False)
class CountTable:
    """``n_ijk[k, j]``: rows with parent configuration ``k`` and child state ``j``."""

    n_ijk: np.ndarray

    @property
    def n_ik(self) -> np.ndarray:
        return self.n_ijk.sum(axis=1)

    @property
    def r(self) -> int:
        return self.n_ijk.shape[0]


def count_statistics(dataset: Dataset, node: int, pset: int) -> CountTable:
    """Tally child states per parent configuration.

    Configuration index is mixed radix over the parents in ascending index
    order, lowest-indexed parent least significant.
    """
    if pset >> node & 1:
        raise ValidationError(f"node {node} cannot be its own parent")
    card = dataset.cardinalities[node]
    data = dataset.data
    config = np.zeros(dataset.m, dtype=np.int64)
    r = 1
    for p in pset_members(pset):
        config += data[:, p] * r
        r *= dataset.cardinalities[p]
    flat = np.bincount(config * card + data[:, node], minlength=r * card)
    return CountTable(flat.reshape(r, card))


def score_counts(counts: CountTable, n_parents: int, card: int, hyper: Hyperparams) -> float:
    a_ijk = hyper.alpha_ijk(counts.r, card)
    if not a_ijk > 0:
        raise ConfigurationError("Dirichlet hyperparameters must be positive")
    a_ik = card * a_ijk
    n_ijk = counts.n_ijk
    n_ik = n_ijk.sum(axis=1)
    seen = n_ik > 0            # unobserved configurations contribute exactly 0
    nk = n_ik[seen]
    nj = n_ijk[seen]
    per_config = (gammaln(a_ik) - gammaln(a_ik + nk)
                  + (gammaln(nj + a_ijk) - gammaln(a_ijk)).sum(axis=1))
    return n_parents * math.log10(hyper.gamma) + float(per_config.sum()) / LN10


def local_score(node: int, pset: int, dataset: Dataset, hyper: Hyperparams) -> float:
    counts = count_statistics(dataset, node, pset)
    return score_counts(counts, pset_size(pset), dataset.cardinalities[node], hyper)


def _candidate_position(node: int, v: int) -> int:
    return v if v < node else v - 1


class ScoreCache:
    """Dense table of local scores, one row per node.

    Row ``i`` is indexed by the global table index of the parent set over
    node ``i``'s candidates (every other node, ascending), so a lookup is a
    rank computation plus an array read.  Immutable once built.
    """

    def __init__(self, scores: np.ndarray, s: int, digest: int = 0):
        scores = np.ascontiguousarray(scores, dtype=np.float64)
        n = scores.shape[0]
        if scores.ndim != 2 or scores.shape[1] != table_size(n - 1, s):
            raise ValidationError(
                f"score table shape {scores.shape} does not match n={n}, s={s}")
        if not np.all(np.isfinite(scores)):
            raise ValidationError("score cache entries must be finite")
        scores.setflags(write=False)
        self.scores = scores
        self.n = n
        self.s = s
        self.digest = digest

    @property
    def entries(self) -> int:
        return self.scores.size

    @property
    def per_node(self) -> int:
        return self.scores.shape[1]

    def index(self, node: int, pset: int) -> int:
        if pset >> node & 1:
            raise ValidationError(f"node {node} cannot be its own parent")
        cand = [_candidate_position(node, v) for v in pset_members(pset)]
        return global_index(cand, self.n - 1, self.s)

    def lookup(self, node: int, pset: int) -> float:
        return float(self.scores[node, self.index(node, pset)])

    @staticmethod
    def estimate_bytes(n: int, s: int) -> int:
        return n * table_size(n - 1, s) * 8

    # -- persistence: 16-byte header then little-endian float64 rows --------
    def save(self, path) -> None:
        header = CACHE_MAGIC + struct.pack("<HHQ", self.n, self.s, self.digest)
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(self.scores.astype("<f8").tobytes())

    @classmethod
    def load(cls, path, expect_digest: int | None = None) -> "ScoreCache":
        raw = Path(path).read_bytes()
        if len(raw) < 16 or raw[:4] != CACHE_MAGIC:
            raise ValidationError(f"{path}: not a score cache file")
        n, s, digest = struct.unpack("<HHQ", raw[4:16])
        if expect_digest is not None and digest != expect_digest:
            raise ValidationError(f"{path}: cache built with different hyperparameters")
        body = np.frombuffer(raw, dtype="<f8", offset=16)
        width = table_size(n - 1, s)
        if body.size != n * width:
            raise ValidationError(f"{path}: truncated cache body")
        return cls(body.reshape(n, width).astype(np.float64), s, digest)


def build_score_cache(dataset: Dataset, config: RunConfig | None = None) -> ScoreCache:
    config = config or RunConfig()
    hyper = Hyperparams.from_config(config)
    n, s = dataset.n, config.s
    need = ScoreCache.estimate_bytes(n, s)
    if need > config.memory_cap:
        raise CapacityError(
            f"score cache for n={n}, s={s} needs {need} bytes, cap is {config.memory_cap}")
    width = table_size(n - 1, s)
    scores = np.empty((n, width), dtype=np.float64)
    for node in range(n):
        cands = [v for v in range(n) if v != node]
        for g, mask in enumerate(enumerate_bounded_subsets(cands, s)):
            scores[node, g] = local_score(node, mask, dataset, hyper)
    return ScoreCache(scores, s, hyper.digest())


# -- pairwise priors -----------------------------------------------------------

def ppf(r_value: float) -> float:
    """Pairwise prior weight in log10 units; zero at 0.5, +-12.5 at the ends."""
    r = float(r_value)
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"prior value {r_value} outside [0, 1]")
    return 100.0 * (r - 0.5) ** 3


def ppf_matrix(priors: PriorMatrix | None, n: int) -> np.ndarray:
    """``W[i, m] = ppf(R[i, m])``, zero diagonal; zeros when ``priors`` is None."""
    if priors is None:
        return np.zeros((n, n))
    if priors.n != n:
        raise ValidationError(f"prior matrix is {priors.n}x{priors.n}, expected {n}x{n}")
    w = 100.0 * (priors.r - 0.5) ** 3
    np.fill_diagonal(w, 0.0)
    return w


def effective_local_score(node: int, pset: int, cache: ScoreCache,
                          priors: PriorMatrix | None = None, *, _w=None) -> float:
    w = _w if _w is not None else ppf_matrix(priors, cache.n)
    total = cache.lookup(node, pset)
    for m in pset_members(pset):
        total += float(w[node, m])
    return total


@dataclass(frozen=True)
class ScoredGraph:
    dag: Dag
    total: float

    @property
    def key(self) -> tuple[int, ...]:
        return self.dag.parents


def score_graph(dag: Dag, cache: ScoreCache, priors: PriorMatrix | None = None) -> ScoredGraph:
    if dag.n != cache.n:
        raise ValidationError(f"graph has {dag.n} nodes, cache has {cache.n}")
    check_parents(dag, cache.s)
    if not is_acyclic(dag):
        raise CyclicGraphError("cannot score a cyclic graph")
    w = ppf_matrix(priors, cache.n)
    total = 0.0
    for i, mask in enumerate(dag.parents):
        total += effective_local_score(i, mask, cache, _w=w)
    return ScoredGraph(dag, total)


def best_parents(node: int, order: Order, cache: ScoreCache, w: np.ndarray) -> tuple[float, int]:
    """Max effective score over predecessor subsets of size <= s; first (lowest index) wins ties."""
    preds = pset_members(order.predecessors(node))
    best, best_mask = -math.inf, 0
    for mask in enumerate_bounded_subsets(preds, cache.s):
        val = effective_local_score(node, mask, cache, _w=w)
        if val > best:
            best, best_mask = val, mask
    return best, best_mask


def score_order(order, cache: ScoreCache,
                priors: PriorMatrix | None = None) -> tuple[float, ScoredGraph]:
    """Sequential reference scorer: per-node independent maximization.

    The scan runs over the node's predecessors sorted by index, in table
    order, so the result depends only on the predecessor set.
    """
    order = as_order(order)
    if order.n != cache.n:
        raise ValidationError(f"order has {order.n} nodes, cache has {cache.n}")
    w = ppf_matrix(priors, cache.n)
    parents = []
    total = 0.0
    for node in range(order.n):
        val, mask = best_parents(node, order, cache, w)
        parents.append(mask)
        total += val
    return total, ScoredGraph(Dag(tuple(parents)), total)
