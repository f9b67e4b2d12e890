"""Gauss algebras of squarefree Veronese algebras.

Exact exponent-matrix computations: Gauss generators of monomial algebras,
certificates (witnesses) for individual generators, the exchange property
of the resulting monomial sets, and a Jacobian cross-check.
"""

from .core import Monomial, degree, determinant, divide_exact, log_matrix, multiply, rank, support
from .gauss import (
    EqualityReport,
    SearchResult,
    SearchStatus,
    Witness,
    WitnessStatus,
    build_witness_table,
    conjecture_check,
    gauss_generators,
    lift_witness,
    pick_reduction_indices,
    target_set,
    validate_witness,
    verify_equality,
    witness_search,
)
from .polymatroid import ExchangeViolation, exchange_check, exchange_check_reference
from .sets import (
    MonomialSet,
    canonical,
    e_set,
    e_set_closed,
    mon,
    mon_star,
    orbit_expand,
    orbit_representatives,
    veronese,
)

__version__ = "0.1.0"
