"""Domain types: datasets, parent sets, DAGs, orders, priors and run settings.

Parent sets are plain Python ints used as bitmasks over node indices (bit ``v``
set means node ``v`` is a parent).  Networks are capped at 64 nodes so every
parent set fits in one machine word.
"""
from __future__ import annotations

import heapq
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, CyclicGraphError, LimitError, ValidationError

MAX_NODES = 64
MAX_PARENT_LIMIT = 8


# -- parent sets ---------------------------------------------------------------

def pset_mask(nodes: Iterable[int]) -> int:
    mask = 0
    for v in nodes:
        if not 0 <= v < MAX_NODES:
            raise ValidationError(f"node index {v} outside [0, {MAX_NODES})")
        mask |= 1 << v
    return mask


def pset_members(mask: int) -> tuple[int, ...]:
    """Node indices in ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def pset_size(mask: int) -> int:
    return bin(mask).count("1")


# -- dataset -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Dataset:
    """Complete discrete data: ``data[row, node]`` is a state in ``[0, card[node])``."""

    data: np.ndarray
    cardinalities: tuple[int, ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        data = np.asarray(self.data)
        cards = tuple(int(c) for c in self.cardinalities)
        if data.ndim != 2:
            raise ValidationError("dataset must be a 2-D array (rows x nodes)")
        if data.shape[1] != len(cards):
            raise ValidationError(
                f"{data.shape[1]} columns but {len(cards)} cardinalities")
        if not 1 <= len(cards) <= MAX_NODES:
            raise ValidationError(f"node count must be in [1, {MAX_NODES}]")
        if any(c < 2 for c in cards):
            raise ValidationError("every variable needs at least 2 states")
        if data.size and not np.issubdtype(data.dtype, np.integer):
            if not np.all(np.equal(np.mod(data, 1), 0)):
                raise ValidationError("states must be integers")
        data = data.astype(np.int64, copy=True)
        if data.size:
            bad = (data < 0) | (data >= np.asarray(cards))
            if bad.any():
                row, col = np.argwhere(bad)[0]
                raise ValidationError(
                    f"state {data[row, col]} at row {row}, column {col} "
                    f"outside [0, {cards[col]})")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "cardinalities", cards)
        if self.names is not None:
            names = tuple(str(x) for x in self.names)
            if len(names) != len(cards):
                raise ValidationError("one name per column required")
            object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return len(self.cardinalities)

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @classmethod
    def from_rows(cls, rows, cardinalities=None, names=None) -> "Dataset":
        """Build from row vectors; cardinalities default to ``max + 1`` per column (min 2)."""
        data = np.asarray(rows, dtype=np.int64)
        if cardinalities is None:
            if data.size == 0:
                raise ValidationError("cannot infer cardinalities from an empty dataset")
            cardinalities = [max(2, int(c) + 1) for c in data.max(axis=0)]
        return cls(data, tuple(cardinalities), names)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.cardinalities == other.cardinalities
                and self.names == other.names
                and np.array_equal(self.data, other.data))

    __hash__ = None


# -- graphs and orders ---------------------------------------------------------

@dataclass(frozen=True)
class Dag:
    """Directed graph stored as one parent bitmask per node.

    Construction rejects self-loops and out-of-range parents; acyclicity is
    checked separately with :func:`is_acyclic` so cyclic inputs can be
    represented and diagnosed.
    """

    parents: tuple[int, ...]

    def __post_init__(self):
        parents = tuple(int(p) for p in self.parents)
        n = len(parents)
        if not 0 < n <= MAX_NODES:
            raise ValidationError(f"node count must be in [1, {MAX_NODES}]")
        limit = 1 << n
        for i, mask in enumerate(parents):
            if mask < 0 or mask >= limit:
                raise ValidationError(f"parent set of node {i} names a node >= {n}")
            if mask >> i & 1:
                raise ValidationError(f"self-loop on node {i}")
        object.__setattr__(self, "parents", parents)

    @property
    def n(self) -> int:
        return len(self.parents)

    @classmethod
    def empty(cls, n: int) -> "Dag":
        return cls((0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Dag":
        """Edges are ``(parent, child)`` pairs."""
        parents = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge {u}->{v} outside a {n}-node graph")
            parents[v] |= 1 << u
        return cls(tuple(parents))

    def edges(self) -> list[tuple[int, int]]:
        """``(parent, child)`` pairs sorted by child then parent."""
        return [(u, v) for v, mask in enumerate(self.parents) for u in pset_members(mask)]

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges())

    def num_edges(self) -> int:
        return sum(pset_size(p) for p in self.parents)

    def max_in_degree(self) -> int:
        return max(pset_size(p) for p in self.parents)

    def adjacency(self) -> np.ndarray:
        """Boolean matrix with ``adj[u, v]`` true for an edge ``u -> v``."""
        adj = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges():
            adj[u, v] = True
        return adj


@dataclass(frozen=True)
class Order:
    """Node permutation; ``perm[p]`` is the node at position ``p``."""

    perm: tuple[int, ...]
    position: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValidationError(f"{perm} is not a permutation of 0..{len(perm) - 1}")
        pos = [0] * len(perm)
        for p, v in enumerate(perm):
            pos[v] = p
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "position", tuple(pos))

    @property
    def n(self) -> int:
        return len(self.perm)

    def predecessors(self, node: int) -> int:
        """Bitmask of nodes placed before ``node``."""
        return pset_mask(self.perm[: self.position[node]])

    def swapped(self, i: int, j: int) -> "Order":
        perm = list(self.perm)
        perm[i], perm[j] = perm[j], perm[i]
        return Order(tuple(perm))

    def __len__(self):
        return len(self.perm)


def consistent(pset: int, node: int, order: Order) -> bool:
    """True iff every member of ``pset`` precedes ``node`` in ``order``."""
    pos = order.position[node]
    return all(order.position[m] < pos for m in pset_members(pset))


def _kahn(dag: Dag) -> list[int]:
    n = dag.n
    indeg = [pset_size(p) for p in dag.parents]
    children = [[] for _ in range(n)]
    for u, v in dag.edges():
        children[u].append(v)
    ready = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        u = heapq.heappop(ready)
        out.append(u)
        for v in children[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    return out


def is_acyclic(dag: Dag) -> bool:
    return len(_kahn(dag)) == dag.n


def topological_order(dag: Dag) -> Order:
    """Kahn's procedure, always releasing the lowest-index ready node first."""
    out = _kahn(dag)
    if len(out) != dag.n:
        raise CyclicGraphError("graph contains a directed cycle")
    return Order(tuple(out))


# -- priors --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PriorMatrix:
    """Pairwise edge beliefs; ``r[i, m]`` is the belief in an edge ``m -> i``.

    0.5 means no bias.  The diagonal is ignored.
    """

    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=np.float64)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValidationError("prior matrix must be square")
        if not np.all(np.isfinite(r)) or r.min(initial=0.5) < 0 or r.max(initial=0.5) > 1:
            raise ValidationError("prior entries must lie in [0, 1]")
        np.fill_diagonal(r, 0.5)
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @property
    def n(self) -> int:
        return self.r.shape[0]

    @classmethod
    def neutral(cls, n: int) -> "PriorMatrix":
        return cls(np.full((n, n), 0.5))

    def is_neutral(self) -> bool:
        return bool(np.all(self.r == 0.5))

    def __eq__(self, other):
        if not isinstance(other, PriorMatrix):
            return NotImplemented
        return np.array_equal(self.r, other.r)

    __hash__ = None


# -- configuration -------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    s: int = 4
    gamma: float = 0.1
    ess: float = 1.0
    scheme: str = "bdeu"            # "bdeu" or "k2"
    iterations: int = 1000
    seed: int = 0
    workers: int = 1
    tasks_per_node: int | None = None   # None -> workers
    track_top: int = 10
    strict_paper_tracker: bool = False
    strategy: str = "pst"           # "pst" or "unrank"
    memory_cap: int = 4 * 2**30     # bytes
    debug: bool = False

    def __post_init__(self):
        if not 0 <= self.s <= MAX_PARENT_LIMIT:
            raise ConfigurationError(f"s must be in [0, {MAX_PARENT_LIMIT}]")
        if self.iterations < 1:
            raise ConfigurationError("iterations must be >= 1")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if self.tasks_per_node is not None and self.tasks_per_node < 1:
            raise ConfigurationError("tasks_per_node must be >= 1")
        if not self.gamma > 0:
            raise ConfigurationError("gamma must be > 0")
        if not self.ess > 0:
            raise ConfigurationError("ess must be > 0")
        if self.scheme not in ("bdeu", "k2"):
            raise ConfigurationError(f"unknown hyperparameter scheme {self.scheme!r}")
        if self.strategy not in ("pst", "unrank"):
            raise ConfigurationError(f"unknown index strategy {self.strategy!r}")
        if self.track_top < 1:
            raise ConfigurationError("track_top must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must fit in 64 bits")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(**d)


def check_parents(dag: Dag, s: int) -> None:
    for i, mask in enumerate(dag.parents):
        if pset_size(mask) > s:
            raise LimitError(f"node {i} has {pset_size(mask)} parents, limit is {s}")


def as_order(order: Order | Sequence[int]) -> Order:
    return order if isinstance(order, Order) else Order(tuple(order))
