"""Bounded-size subset indexing: k-combination (un)ranking and parent set tables.

Two orderings are used:

* **lexicographic k-combinations** of ``{1..n}`` with 1-based ranks, the
  convention of the shift-and-reduce unranking routine below;
* the **global table order** over all subsets of ``{0..n-1}`` with at most
  ``s`` members: descending size, lexicographic within a size.  For ``n=6,
  s=4`` this gives ``{0,1,2,3} -> 0``, ``{0,1,2,4} -> 1``, ``{5} -> 55`` and
  ``{} -> 56``.  The score cache and the parallel engine both address parent
  sets by this index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np
from numba import njit

from .errors import CapacityError, RankError, ValidationError
from .model import pset_members

# C(a, b) for 0 <= a, b <= 64; C(64, 32) < 2**63 so int64 holds every entry.
BINOM = np.zeros((65, 65), dtype=np.int64)
for _a in range(65):
    for _b in range(_a + 1):
        BINOM[_a, _b] = math.comb(_a, _b)
BINOM.setflags(write=False)


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def _unrank_into(n, k, l, binom, out):
    # Shift-and-reduce: pick each element as the smallest shift whose block of
    # C(n - shift, k - 1) combinations still contains rank l.
    k0 = k
    low = 0
    for pos in range(k0 - 1):
        total = 0
        shift = 1
        while shift <= n:
            block = binom[n - shift, k - 1]
            if total + block < l:
                total += block
                shift += 1
            else:
                break
        out[pos] = low + shift
        n -= shift
        k -= 1
        l -= total
        low = out[pos]
    if k0 > 0:
        out[k0 - 1] = low + l


_unrank_into_jit = njit(nogil=True, cache=True)(_unrank_into)


def unrank_combination(n: int, k: int, l: int) -> tuple[int, ...]:
    """The ``l``-th (1-based) k-combination of ``{1..n}`` in lexicographic order."""
    if not 0 <= k <= n <= 64:
        raise ValidationError(f"need 0 <= k <= n <= 64, got n={n}, k={k}")
    if not 1 <= l <= math.comb(n, k):
        raise RankError(f"rank {l} outside [1, C({n},{k})={math.comb(n, k)}]")
    out = [0] * k
    _unrank_into(n, k, l, BINOM, out)
    return tuple(int(x) for x in out)


def rank_combination(c: Sequence[int], n: int) -> int:
    """1-based lexicographic rank of the increasing combination ``c`` over ``{1..n}``."""
    k = len(c)
    prev = 0
    for x in c:
        if not prev < x <= n:
            raise ValidationError(f"{tuple(c)} is not an increasing combination over 1..{n}")
        prev = x
    # combinatorial number system: count combinations lexicographically after c
    after = sum(math.comb(n - x, k - i) for i, x in enumerate(c))
    return math.comb(n, k) - after


def table_size(n: int, s: int) -> int:
    """Number of subsets of an ``n``-set with at most ``s`` members."""
    return sum(math.comb(n, j) for j in range(min(n, s) + 1))


def size_offset(n: int, s: int, k: int) -> int:
    """Global index of the first ``k``-subset (sizes above ``k`` come first)."""
    return sum(math.comb(n, j) for j in range(k + 1, min(n, s) + 1))


def _members(pset) -> tuple[int, ...]:
    if isinstance(pset, (int, np.integer)):
        return pset_members(int(pset))
    return tuple(sorted(int(x) for x in pset))


def global_index(pset, candidates: int, s: int) -> int:
    """Position of ``pset`` (bitmask or iterable over ``0..candidates-1``) in the table order."""
    members = _members(pset)
    k = len(members)
    if k > s:
        raise ValidationError(f"subset of size {k} exceeds limit {s}")
    if members and (members[0] < 0 or members[-1] >= candidates):
        raise ValidationError(f"{members} not within 0..{candidates - 1}")
    rank = rank_combination([x + 1 for x in members], candidates)
    return size_offset(candidates, s, k) + rank - 1


def subset_at(index: int, candidates: int, s: int) -> tuple[int, ...]:
    """Inverse of :func:`global_index`; returns 0-based members."""
    if not 0 <= index < table_size(candidates, s):
        raise RankError(f"index {index} outside table of size {table_size(candidates, s)}")
    for k in range(min(candidates, s), -1, -1):
        block = math.comb(candidates, k)
        if index < block:
            return tuple(x - 1 for x in unrank_combination(candidates, k, index + 1))
        index -= block
    raise AssertionError("unreachable")


def enumerate_bounded_subsets(candidates: Sequence[int], s: int) -> Iterator[int]:
    """Yield every subset of ``candidates`` with at most ``s`` members as a node bitmask.

    Subsets come out in table order over the candidate positions, so the
    ``g``-th yielded mask is the subset with global index ``g``.
    """
    cands = list(candidates)
    if len(cands) > 63:
        raise ValidationError("at most 63 candidates")
    bits = [1 << v for v in cands]
    for k in range(min(len(cands), s), -1, -1):
        for combo in combinations(bits, k):
            yield sum(combo)


@dataclass(frozen=True, eq=False)
class ParentSetTable:
    """All subsets of ``{0..n-1}`` with at most ``s`` members, in table order.

    ``members[g]`` holds the positions of entry ``g`` padded with -1; with
    int32 storage a row costs ``4 * s`` bytes (16 at ``s=4``).
    """

    n: int
    s: int
    members: np.ndarray
    sizes: np.ndarray

    def __len__(self):
        return self.members.shape[0]

    def __getitem__(self, g) -> tuple[int, ...]:
        return tuple(int(x) for x in self.members[g, : self.sizes[g]])

    @property
    def nbytes(self) -> int:
        return self.members.nbytes

    def masks(self) -> list[int]:
        return [sum(1 << int(x) for x in self.members[g, : self.sizes[g]])
                for g in range(len(self))]


def pst_nbytes(n: int, s: int) -> int:
    return table_size(n, s) * 4 * max(s, 1)


def build_pst(n: int, s: int, memory_cap: int | None = None) -> ParentSetTable:
    if not 0 <= n <= 63:
        raise ValidationError("PST supports at most 63 candidates")
    if memory_cap is not None and pst_nbytes(n, s) > memory_cap:
        raise CapacityError(
            f"PST for n={n}, s={s} needs {pst_nbytes(n, s)} bytes (cap {memory_cap})")
    width = max(s, 1)
    total = table_size(n, s)
    members = np.full((total, width), -1, dtype=np.int32)
    sizes = np.empty(total, dtype=np.int8)
    row = 0
    for k in range(min(n, s), -1, -1):
        count = math.comb(n, k)
        if k:
            block = np.fromiter(
                (x for combo in combinations(range(n), k) for x in combo),
                dtype=np.int32, count=count * k)
            members[row:row + count, :k] = block.reshape(count, k)
        sizes[row:row + count] = k
        row += count
    members.setflags(write=False)
    sizes.setflags(write=False)
    return ParentSetTable(n, s, members, sizes)


def iter_global_order(n: int, s: int) -> Iterable[tuple[int, ...]]:
    """Table order as tuples, generated lazily."""
    for k in range(min(n, s), -1, -1):
        yield from combinations(range(n), k)
