"""Jacobian minors of monomial maps by Leibniz expansion.

This is a cross-check for the exponent-matrix route and deliberately shares
no code with :func:`gaussver.core.determinant`: for monomials g_1..g_d,

    (x_1 ... x_d) * det(d g_a / d x_b) = det Log(g) * g_1 ... g_d.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Sequence

from .core import Monomial, determinant, log_matrix, multiply
from .errors import DimensionMismatch, MixedDegrees, TooLarge

MAX_LEIBNIZ_DIM = 8


@dataclass(frozen=True)
class Term:
    coeff: int
    mono: Monomial

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0


class TermSum:
    """Integer combination of monomials; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[Monomial, int] | None = None):
        self._terms = {m: c for m, c in (terms or {}).items() if c}

    def add(self, mono: Monomial, coeff: int) -> None:
        c = self._terms.get(mono, 0) + coeff
        if c:
            self._terms[mono] = c
        else:
            self._terms.pop(mono, None)

    def times(self, mono: Monomial) -> "TermSum":
        return TermSum({multiply([m, mono]): c for m, c in self._terms.items()})

    def scaled(self, k: int) -> "TermSum":
        return TermSum({m: k * c for m, c in self._terms.items()})

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> list[Term]:
        return [Term(self._terms[m], m) for m in sorted(self._terms, reverse=True)]

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TermSum):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        if not self._terms:
            return "TermSum(0)"
        return "TermSum(" + " + ".join(f"{t.coeff}*{t.mono}" for t in self.terms()) + ")"


def partial(g: Monomial, j: int) -> Term:
    a = g.exps[j]
    if a == 0:
        return Term(0, Monomial.one(g.dimension))
    exps = list(g.exps)
    exps[j] -= 1
    return Term(a, Monomial(tuple(exps)))


def _parity(perm: Sequence[int]) -> int:
    inv = 0
    n = len(perm)
    for a in range(n):
        for b in range(a + 1, n):
            if perm[a] > perm[b]:
                inv += 1
    return -1 if inv & 1 else 1


def theta_minor(gs: Sequence[Monomial], d: int) -> TermSum:
    """det of the d x d Jacobian (rows g_a, columns x_b) as a TermSum."""
    if len(gs) != d:
        raise DimensionMismatch(f"need {d} monomials, got {len(gs)}")
    if d > MAX_LEIBNIZ_DIM:
        raise TooLarge(f"Leibniz expansion limited to d <= {MAX_LEIBNIZ_DIM}")
    if any(g.dimension != d for g in gs):
        raise DimensionMismatch("monomials must live in d variables")
    table = [[partial(g, b) for b in range(d)] for g in gs]
    out = TermSum()
    for perm in permutations(range(d)):
        coeff = _parity(perm)
        exps = [0] * d
        for a, b in enumerate(perm):
            t = table[a][b]
            if t.coeff == 0:
                break
            coeff *= t.coeff
            for k, e in enumerate(t.mono.exps):
                exps[k] += e
        else:
            out.add(Monomial(tuple(exps)), coeff)
    return out


@dataclass(frozen=True)
class Mismatch:
    lhs: TermSum
    rhs: TermSum


def check_identity(gs: Sequence[Monomial], d: int) -> Mismatch | None:
    """Compare (x_1...x_d) * theta_minor(gs) with det Log(gs) * prod(gs).

    Returns None when both sides agree.
    """
    if len({g.degree for g in gs}) > 1:
        raise MixedDegrees("generators must share one degree")
    lhs = theta_minor(gs, d).times(Monomial((1,) * d))
    det = determinant(log_matrix(list(gs)))
    rhs = TermSum({multiply(list(gs)): det})
    return None if lhs == rhs else Mismatch(lhs, rhs)
