"""Exchange-axiom check for equigenerated monomial sets.

A set s of monomials of one degree generates a polymatroidal ideal when for
all u, v in s and every i with deg_i(u) > deg_i(v) some j with
deg_j(u) < deg_j(v) has x_j * u / x_i in s.

Pairs are scanned with v as the outer loop, then u, then i, each in
canonical set order. The first failure is reported as an
:class:`ExchangeViolation`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import Monomial
from .errors import EmptySet, MixedDegrees
from .sets import MonomialSet, is_permutation_closed, orbit_representatives, placement


@dataclass(frozen=True)
class ExchangeViolation:
    u: Monomial
    v: Monomial
    i: int
    tried: tuple[tuple[int, Monomial], ...]  # (j, x_j * u / x_i), each absent from the set


def assert_single_degree(s: MonomialSet) -> int:
    if not len(s):
        raise EmptySet("exchange check needs a nonempty set")
    degs = np.unique(s.degrees())
    if len(degs) != 1:
        raise MixedDegrees(f"set has degrees {degs.tolist()}")
    return int(degs[0])


def _violation(u: Monomial, v: Monomial, i: int) -> ExchangeViolation:
    tried = []
    for j in range(u.dimension):
        if u.exps[j] < v.exps[j]:
            w = list(u.exps)
            w[i] -= 1
            w[j] += 1
            tried.append((j, Monomial(tuple(w))))
    return ExchangeViolation(u, v, i, tuple(tried))


def exchange_check(s: MonomialSet, backend: str | None = None) -> ExchangeViolation | None:
    """None if ``s`` satisfies the exchange axiom, else the first violation.

    For permutation-closed sets only the first element of each orbit needs
    to be tried as v; the first violating v overall is the first element of
    some violating orbit.
    """
    assert_single_degree(s)
    keys, base = s.keys()
    arr = s.array
    masks = kernels.exchange_masks(arr, keys, base, backend)
    if is_permutation_closed(s):
        d = s.dimension
        reps = [placement(p, d).exps for p in orbit_representatives(s)]
        rep_keys = np.array([sum(a * base ** (d - 1 - k) for k, a in enumerate(r)) for r in reps], dtype=np.int64)
        v_order = np.sort(np.searchsorted(-keys, -rep_keys))
    else:
        v_order = np.arange(len(s), dtype=np.int64)
    pos, u, i = kernels.first_violation(arr, masks, v_order, backend)
    if pos < 0:
        return None
    return _violation(s[u], s[int(v_order[pos])], i)


def exchange_check_reference(s: MonomialSet) -> ExchangeViolation | None:
    """Same contract as :func:`exchange_check`, by brute force."""
    assert_single_degree(s)
    elems = [tuple(row) for row in s.array.tolist()]
    d = s.dimension
    for v in elems:
        for u in elems:
            for i in range(d):
                if u[i] <= v[i]:
                    continue
                ok = False
                for j in range(d):
                    if u[j] < v[j]:
                        w = list(u)
                        w[i] -= 1
                        w[j] += 1
                        if tuple(w) in elems:
                            ok = True
                            break
                if not ok:
                    return _violation(Monomial(u), Monomial(v), i)
    return None


def is_violation(s: MonomialSet, u: Monomial, v: Monomial, i: int) -> bool:
    """True when (u, v, i) breaks the exchange axiom in ``s``."""
    if u not in s or v not in s or u.exps[i] <= v.exps[i]:
        return False
    return all(m not in s for _, m in _violation(u, v, i).tried)
