"""Monomial families: V_{r,d}, Mon(t,r), Mon*(t,r), E_d, and orbits under S_d.

A :class:`MonomialSet` keeps its elements as rows of an integer array in
descending lexicographic order, so ``x1^a...`` with the largest ``a`` comes
first. That order is used for iteration, serialization and certificates.
"""

from __future__ import annotations

from collections import Counter
from math import factorial
from typing import Iterable, Iterator, TextIO

import numpy as np

from .core import Monomial
from .errors import DimensionMismatch, InvalidDegree, OutOfProvenRange, TooManyParts

#: weakly decreasing tuple of positive exponents; names an S_d-orbit
ExponentPartition = tuple[int, ...]


def _encode(arr: np.ndarray, base: int) -> np.ndarray:
    d = arr.shape[1]
    if d and base ** d >= 2**63:
        raise OverflowError(f"cannot encode {d} exponents in base {base}")
    weights = base ** np.arange(d - 1, -1, -1, dtype=np.int64)
    return arr.astype(np.int64) @ weights


class MonomialSet:
    """Immutable, duplicate-free, canonically ordered set of monomials."""

    __slots__ = ("dimension", "_arr", "_keys", "_base")

    def __init__(self, elements: Iterable[Monomial | Iterable[int]] = (), dimension: int | None = None):
        rows = [m.exps if isinstance(m, Monomial) else tuple(int(a) for a in m) for m in elements]
        if dimension is None:
            if not rows:
                raise DimensionMismatch("empty MonomialSet needs an explicit dimension")
            dimension = len(rows[0])
        if any(len(r) != dimension for r in rows):
            raise DimensionMismatch(f"mixed dimensions in MonomialSet (expected {dimension})")
        arr = np.array(rows, dtype=np.int64).reshape(len(rows), dimension) if rows else np.zeros((0, dimension), np.int64)
        self._init(arr, dimension)

    def _init(self, arr: np.ndarray, dimension: int) -> None:
        if arr.size and arr.min() < 0:
            raise ValueError("negative exponent")
        keys = base = None
        if len(arr) and dimension:
            base = max(int(arr.max()) + 1, 2)
            if base ** dimension < 2**63:
                keys = _encode(arr, base)
                if len(arr) > 1 and not (keys[1:] < keys[:-1]).all():
                    keys, first = np.unique(keys, return_index=True)
                    keys = keys[::-1]
                    arr = arr[first[::-1]]
            else:
                base = None
                arr = np.unique(arr, axis=0)[::-1]
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.setflags(write=False)
        self.dimension = dimension
        self._arr = arr
        self._keys = keys
        self._base = base

    @classmethod
    def from_array(cls, arr: np.ndarray, dimension: int | None = None) -> "MonomialSet":
        arr = np.asarray(arr, dtype=np.int64)
        if dimension is None:
            dimension = arr.shape[1]
        arr = arr.reshape(-1, dimension)
        obj = cls.__new__(cls)
        obj._init(arr, dimension)
        return obj

    @property
    def array(self) -> np.ndarray:
        """Read-only (n, d) int64 view of the elements in canonical order."""
        return self._arr

    def keys(self) -> tuple[np.ndarray, int]:
        """Mixed-radix integer codes (strictly decreasing) and their base."""
        if self._keys is None:
            base = int(self._arr.max()) + 1 if self._arr.size else 1
            base = max(base, 2)
            self._keys = _encode(self._arr, base)
            self._base = base
        return self._keys, self._base

    def __len__(self) -> int:
        return len(self._arr)

    def __iter__(self) -> Iterator[Monomial]:
        for row in self._arr.tolist():
            yield Monomial(tuple(row))

    def __getitem__(self, i: int) -> Monomial:
        return Monomial(tuple(self._arr[i].tolist()))

    def __contains__(self, m) -> bool:
        exps = m.exps if isinstance(m, Monomial) else tuple(m)
        if len(exps) != self.dimension or not len(self._arr):
            return False
        keys, base = self.keys()
        if max(exps, default=0) >= base or min(exps, default=0) < 0:
            return False
        k = int(_encode(np.array([exps], dtype=np.int64), base)[0])
        # keys are strictly decreasing
        pos = np.searchsorted(-keys, -k)
        return bool(pos < len(keys) and keys[pos] == k)

    def _common_keys(self, other: "MonomialSet") -> tuple[np.ndarray, np.ndarray]:
        if other.dimension != self.dimension:
            raise DimensionMismatch(f"dimension {other.dimension} != {self.dimension}")
        top = max(int(self._arr.max(initial=0)), int(other._arr.max(initial=0)))
        base = max(top + 1, 2)
        return _encode(self._arr, base), _encode(other._arr, base)

    def __sub__(self, other: "MonomialSet") -> "MonomialSet":
        a, b = self._common_keys(other)
        return MonomialSet.from_array(self._arr[~np.isin(a, b)], self.dimension)

    def __and__(self, other: "MonomialSet") -> "MonomialSet":
        a, b = self._common_keys(other)
        return MonomialSet.from_array(self._arr[np.isin(a, b)], self.dimension)

    def __or__(self, other: "MonomialSet") -> "MonomialSet":
        if other.dimension != self.dimension:
            raise DimensionMismatch(f"dimension {other.dimension} != {self.dimension}")
        return MonomialSet.from_array(np.vstack([self._arr, other._arr]), self.dimension)

    def __le__(self, other: "MonomialSet") -> bool:
        a, b = self._common_keys(other)
        return bool(np.isin(a, b).all())

    def __ge__(self, other: "MonomialSet") -> bool:
        return other <= self

    def __lt__(self, other: "MonomialSet") -> bool:
        return self <= other and len(self) < len(other)

    def __gt__(self, other: "MonomialSet") -> bool:
        return other < self

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonomialSet):
            return NotImplemented
        return self.dimension == other.dimension and np.array_equal(self._arr, other._arr)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"MonomialSet(d={self.dimension}, n={len(self)})"

    def degrees(self) -> np.ndarray:
        return self._arr.sum(axis=1)

    def filter(self, mask: np.ndarray) -> "MonomialSet":
        return MonomialSet.from_array(self._arr[mask], self.dimension)


def compositions(r: int, d: int, cap: int) -> np.ndarray:
    """All length-d nonnegative vectors summing to r with entries <= cap,
    in descending lexicographic order."""
    rows = np.zeros((1, 0), dtype=np.int64)
    sums = np.zeros(1, dtype=np.int64)
    for k in range(d):
        rest = d - k - 1
        hi = np.minimum(cap, r - sums)
        lo = np.maximum(0, r - sums - cap * rest)
        counts = np.maximum(hi - lo + 1, 0)
        idx = np.repeat(np.arange(len(rows)), counts)
        # offset of each new row inside its parent's block
        starts = np.cumsum(counts) - counts
        off = np.arange(len(idx)) - np.repeat(starts, counts)
        vals = hi[idx] - off
        rows = np.column_stack([rows[idx], vals])
        sums = sums[idx] + vals
    return rows


def veronese(r: int, d: int) -> MonomialSet:
    """V_{r,d}: squarefree monomials of degree r in d variables."""
    if r < 1 or r > d:
        raise InvalidDegree(f"V_{{{r},{d}}} is empty or undefined: need 1 <= r <= d")
    return MonomialSet.from_array(compositions(r, d, 1), d)


def _support_sizes(arr: np.ndarray) -> np.ndarray:
    return (arr > 0).sum(axis=1)


def mon(t: int, r: int, d: int) -> MonomialSet:
    """Degree-r monomials in d variables with support of size >= t."""
    arr = compositions(r, d, r)
    return MonomialSet.from_array(arr[_support_sizes(arr) >= t], d)


def mon_star(t: int, r: int, d: int) -> MonomialSet:
    """``mon(t, r, d)`` restricted to exponents <= d - 2."""
    if d < 3:
        raise ValueError("mon_star needs d >= 3")
    arr = compositions(r, d, d - 2)
    return MonomialSet.from_array(arr[_support_sizes(arr) >= t], d)


def e_set(d: int) -> MonomialSet:
    """E_d: elements of Mon*(4, 2d) with support exactly 4 and an exponent 1.

    Writing u = x_i^a x_j^b x_k^c x_l forces |supp u| <= 4, and Mon* demands
    |supp u| >= 4, so the four indices are distinct and x_l appears to the
    first power. Conversely such a u has that form. Hence the test below is
    the definition, minus the ambiguity in which variable plays x_l.
    """
    if d < 5:
        raise ValueError("E_d is defined for d >= 5")
    arr = mon_star(4, 2 * d, d).array
    supp4 = _support_sizes(arr) == 4
    has_one = (arr == 1).any(axis=1)
    return MonomialSet.from_array(arr[supp4 & has_one], d)


def e_set_closed(d: int) -> MonomialSet:
    """E_d from the shapes (d-2, a, b, 1) with a + b = d + 1; valid for d in 5..7."""
    if d not in (5, 6, 7):
        raise OutOfProvenRange(f"closed form of E_d is only established for d in 5..7, got {d}")
    out = MonomialSet((), dimension=d)
    for a in range(1, d - 1):
        b = d + 1 - a
        if 1 <= b <= d - 2:
            shape = tuple(sorted((d - 2, a, b, 1), reverse=True))
            out = out | orbit_expand(shape, d)
    return out


def canonical(m: Monomial | Iterable[int]) -> ExponentPartition:
    exps = m.exps if isinstance(m, Monomial) else tuple(m)
    return tuple(sorted((a for a in exps if a), reverse=True))


def placement(p: ExponentPartition, d: int) -> Monomial:
    """The first element of the orbit of p in canonical order: parts, then zeros."""
    if len(p) > d:
        raise TooManyParts(f"{len(p)} parts do not fit in {d} variables")
    return Monomial(tuple(p) + (0,) * (d - len(p)))


def orbit_representatives(s: MonomialSet) -> list[ExponentPartition]:
    """Distinct orbit shapes in ``s``, ordered like their placements in ``s``."""
    if not len(s):
        return []
    srt = MonomialSet.from_array(-np.sort(-s.array, axis=1), s.dimension)
    return [tuple(a for a in row if a) for row in srt.array.tolist()]


def orbit_size(p: ExponentPartition, d: int) -> int:
    if len(p) > d:
        raise TooManyParts(f"{len(p)} parts do not fit in {d} variables")
    counts = Counter(p)
    counts[0] = d - len(p)
    n = factorial(d)
    for c in counts.values():
        n //= factorial(c)
    return n


def _distinct_permutations(counts: dict[int, int], n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for v in sorted(counts, reverse=True):
        if counts[v]:
            counts[v] -= 1
            for tail in _distinct_permutations(counts, n - 1):
                yield (v,) + tail
            counts[v] += 1


def orbit_expand(p: ExponentPartition, d: int) -> MonomialSet:
    """All distinct placements of the parts of p into d variables."""
    if len(p) > d:
        raise TooManyParts(f"{len(p)} parts do not fit in {d} variables")
    counts = Counter(p)
    counts[0] += d - len(p)
    rows = list(_distinct_permutations(dict(counts), d))
    return MonomialSet.from_array(np.array(rows, dtype=np.int64).reshape(-1, d), d)


def is_permutation_closed(s: MonomialSet) -> bool:
    # s is covered by the orbits of its shapes; equal sizes means equality
    return sum(orbit_size(p, s.dimension) for p in orbit_representatives(s)) == len(s)


def format_lines(s: MonomialSet) -> str:
    return "".join(",".join(map(str, row)) + "\n" for row in s.array.tolist())


def write_lines(s: MonomialSet, fh: TextIO) -> None:
    fh.write(format_lines(s))


def read_lines(text: str, dimension: int | None = None) -> MonomialSet:
    rows = [tuple(int(x) for x in line.split(",")) for line in text.splitlines() if line.strip()]
    return MonomialSet(rows, dimension=dimension)
