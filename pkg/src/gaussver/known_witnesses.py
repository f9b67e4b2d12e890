"""Explicit generator lists for V_{3,5}, V_{3,6} and V_{3,7}.

Each case is (target exponents, generator triples). Triples use 1-based
variable numbers as written by hand, e.g. (1, 2, 3) is x1*x2*x3.
"""

from __future__ import annotations

from .core import Monomial
from .gauss import Witness, lift_witness

Triple = tuple[int, int, int]

CASES: dict[int, list[tuple[tuple[int, ...], list[Triple]]]] = {
    5: [
        ((2, 2, 2, 2, 2), [(1, 2, 3), (2, 3, 4), (3, 4, 5), (1, 4, 5), (1, 2, 5)]),
        ((3, 2, 2, 2, 1), [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 4), (3, 4, 5)]),
        ((3, 3, 2, 1, 1), [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 4), (2, 3, 5)]),
    ],
    6: [
        ((2, 2, 2, 2, 2, 2), [(1, 2, 3), (1, 4, 5), (1, 3, 6), (2, 4, 6), (2, 5, 6), (3, 4, 5)]),
        ((3, 2, 2, 2, 2, 1), [(1, 2, 3), (1, 3, 4), (1, 4, 6), (1, 5, 6), (2, 3, 5), (2, 4, 5)]),
        ((3, 3, 2, 2, 1, 1), [(1, 2, 4), (1, 2, 5), (1, 2, 6), (1, 3, 4), (2, 3, 5), (3, 4, 6)]),
        ((3, 3, 3, 1, 1, 1), [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 6), (2, 3, 6), (3, 4, 5)]),
        ((4, 2, 2, 2, 1, 1), [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 4, 6), (3, 5, 6)]),
        ((4, 3, 2, 1, 1, 1), [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 2, 6), (1, 3, 4), (3, 5, 6)]),
        ((4, 4, 1, 1, 1, 1), [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 2, 6), (1, 3, 4), (2, 5, 6)]),
    ],
    7: [
        ((2, 2, 2, 2, 2, 2, 2), [(1, 2, 3), (2, 3, 4), (3, 4, 5), (4, 5, 6), (5, 6, 7), (1, 6, 7), (1, 2, 7)]),
        ((3, 2, 2, 2, 2, 2, 1), [(1, 2, 3), (1, 4, 5), (1, 5, 6), (1, 5, 7), (2, 3, 4), (2, 4, 6), (3, 6, 7)]),
        ((3, 3, 2, 2, 2, 1, 1), [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (2, 3, 4), (2, 5, 7), (2, 6, 7)]),
        ((3, 3, 3, 2, 1, 1, 1), [(1, 2, 3), (1, 3, 4), (1, 4, 6), (1, 5, 6), (2, 3, 5), (2, 3, 7), (2, 4, 7)]),
        ((4, 2, 2, 2, 2, 1, 1), [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 7), (2, 3, 5), (2, 4, 7)]),
        ((4, 3, 2, 2, 1, 1, 1), [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 6), (1, 4, 7), (2, 4, 7), (3, 5, 6)]),
        ((4, 3, 3, 1, 1, 1, 1), [(1, 2, 3), (1, 3, 4), (1, 4, 6), (1, 5, 6), (1, 2, 7), (2, 3, 5), (2, 3, 7)]),
        ((4, 4, 2, 1, 1, 1, 1), [(1, 2, 3), (1, 2, 4), (2, 3, 5), (1, 2, 6), (1, 3, 4), (1, 5, 7), (2, 6, 7)]),
        ((5, 2, 2, 2, 1, 1, 1), [(1, 2, 3), (1, 2, 4), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 7), (2, 3, 7)]),
        ((5, 3, 2, 1, 1, 1, 1), [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 7), (1, 5, 6), (2, 6, 7)]),
        ((5, 4, 1, 1, 1, 1, 1), [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 2, 6), (1, 3, 4), (1, 5, 7), (2, 6, 7)]),
    ],
}

# support-4 targets for d = 5: x1^2..x4^2 over four variables, then x_r x_s x5
SUPPORT4_BASE: tuple[tuple[int, ...], list[Triple]] = ((2, 2, 2, 2), [(1, 2, 3), (2, 3, 4), (1, 3, 4), (1, 2, 4)])
SUPPORT4_LIFT = (0, 1)  # x1, x2 carry the two largest exponents of x1^3 x2^3 x3^2 x4^2


def triple(t: Triple, d: int) -> Monomial:
    return Monomial.from_support([i - 1 for i in t], d)


def case_witness(target: tuple[int, ...], triples: list[Triple], d: int | None = None) -> Witness:
    d = len(target) if d is None else d
    return Witness.from_generators([triple(t, d) for t in triples], Monomial(target), source="fixture")


def fixture_witnesses() -> list[Witness]:
    """All explicit lists, in order: the three for d = 5, the support-4
    construction (base and lifted), the seven for d = 6, the eleven for d = 7."""
    out = [case_witness(t, g) for t, g in CASES[5]]
    base = case_witness(*SUPPORT4_BASE)
    out.append(base)
    out.append(lift_witness(base, *SUPPORT4_LIFT))
    for d in (6, 7):
        out.extend(case_witness(t, g) for t, g in CASES[d])
    return out
