"""Monomials as exponent vectors and exact integer linear algebra on them.

Variables are indexed from 0 in code; the printed form ``x1*x2^2`` is
1-based, matching how monomials are written by hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ArithmeticOverflow, DimensionMismatch, NotDivisible, NotSquare

INT64_MAX = 2**63 - 1


@dataclass(frozen=True, order=True)
class Monomial:
    """x_1^{a_1} ... x_d^{a_d}, stored as the tuple (a_1, ..., a_d)."""

    exps: tuple[int, ...]

    def __post_init__(self) -> None:
        exps = tuple(int(a) for a in self.exps)
        if any(a < 0 for a in exps):
            raise ValueError(f"negative exponent in {exps}")
        object.__setattr__(self, "exps", exps)

    @classmethod
    def one(cls, d: int) -> "Monomial":
        return cls((0,) * d)

    @classmethod
    def from_support(cls, indices: Iterable[int], d: int) -> "Monomial":
        exps = [0] * d
        for i in indices:
            exps[i] += 1
        return cls(tuple(exps))

    @property
    def dimension(self) -> int:
        return len(self.exps)

    @property
    def degree(self) -> int:
        return sum(self.exps)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, a in enumerate(self.exps) if a)

    def is_squarefree(self) -> bool:
        return all(a <= 1 for a in self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return multiply([self, other])

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return divide_exact(self, other)

    def __str__(self) -> str:
        parts = []
        for i, a in enumerate(self.exps):
            if a == 1:
                parts.append(f"x{i + 1}")
            elif a > 1:
                parts.append(f"x{i + 1}^{a}")
        return "*".join(parts) or "1"


def degree(m: Monomial) -> int:
    return m.degree


def support(m: Monomial) -> frozenset[int]:
    """Indices i with x_i dividing m."""
    return m.support


def multiply(ms: Sequence[Monomial], d: int | None = None) -> Monomial:
    """Product of monomials. ``d`` is only needed for the empty product."""
    if not ms:
        if d is None:
            raise DimensionMismatch("empty product needs an explicit dimension")
        return Monomial.one(d)
    dim = ms[0].dimension if d is None else d
    acc = [0] * dim
    for m in ms:
        if m.dimension != dim:
            raise DimensionMismatch(f"dimension {m.dimension} != {dim}")
        for i, a in enumerate(m.exps):
            acc[i] += a
    return Monomial(tuple(acc))


def divide_exact(m: Monomial, n: Monomial) -> Monomial:
    if m.dimension != n.dimension:
        raise DimensionMismatch(f"dimension {m.dimension} != {n.dimension}")
    q = tuple(a - b for a, b in zip(m.exps, n.exps))
    if any(a < 0 for a in q):
        raise NotDivisible(f"{n} does not divide {m}")
    return Monomial(q)


def log_matrix(ms: Sequence[Monomial]) -> np.ndarray:
    """Exponent matrix: rows index variables, column j is ``ms[j].exps``."""
    if not ms:
        return np.zeros((0, 0), dtype=np.int64)
    d = ms[0].dimension
    for m in ms:
        if m.dimension != d:
            raise DimensionMismatch(f"dimension {m.dimension} != {d}")
    return np.array([m.exps for m in ms], dtype=np.int64).T.copy()


def _checked(v: int) -> int:
    if v > INT64_MAX or v < -INT64_MAX:
        raise ArithmeticOverflow(f"intermediate {v} exceeds signed 64-bit range")
    return v


def _as_rows(M) -> list[list[int]]:
    arr = np.asarray(M)
    if arr.ndim != 2:
        raise NotSquare(f"expected a 2-d matrix, got shape {arr.shape}")
    return [[int(x) for x in row] for row in arr.tolist()]


def determinant(M) -> int:
    """Exact determinant by Bareiss fraction-free elimination.

    Every intermediate is a minor of ``M``. Each product is checked against
    the signed 64-bit range so that results agree with a fixed-width
    implementation; leaving that range raises ArithmeticOverflow.
    """
    a = _as_rows(M)
    n = len(a)
    if any(len(row) != n for row in a):
        raise NotSquare(f"matrix is {n}x{len(a[0]) if a else 0}")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                num = _checked(_checked(akk * rowi[j]) - _checked(aik * rowk[j]))
                rowi[j] = num // prev
            rowi[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def rank(M) -> int:
    """Rank over the rationals by fraction-free row echelon reduction."""
    a = _as_rows(M)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    prev = 1
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        rowr = a[r]
        for i in range(r + 1, rows):
            rowi = a[i]
            aic = rowi[c]
            for j in range(c + 1, cols):
                num = _checked(_checked(piv * rowi[j]) - _checked(aic * rowr[j]))
                rowi[j] = num // prev
            rowi[c] = 0
        prev = piv
        r += 1
    return r
