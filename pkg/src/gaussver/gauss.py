"""Gauss algebras of monomial algebras and certificates for their generators.

For a monomial algebra K[g_1, ..., g_n] in d variables the Gauss algebra is
generated by the monomials ``g_{i_1}...g_{i_d} / (x_1...x_d)`` over the
d-subsets whose exponent matrix is nonsingular. This module enumerates those
products, searches for a single subset realizing a given target (a
:class:`Witness`), extends witnesses from d-1 to d variables, and compares
the Gauss algebra of V_{3,d} with K[Mon*(4, 2d) \\ E_d].
"""

from __future__ import annotations

import enum
import json
import time
from math import comb
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .core import Monomial, determinant, divide_exact, log_matrix, multiply, rank
from .errors import (
    DegreeMismatch,
    DimensionMismatch,
    InvalidIndices,
    MixedDegrees,
    NoValidPair,
    RankDeficient,
)
from .sets import (
    ExponentPartition,
    MonomialSet,
    canonical,
    e_set,
    mon_star,
    orbit_representatives,
    orbit_size,
    placement,
    veronese,
)

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class Witness:
    """A d-subset of generators whose product is ``target * x_1...x_d`` and
    whose exponent matrix has determinant ``det != 0``."""

    dimension: int
    target: Monomial
    generators: tuple[Monomial, ...]
    det: int
    source: str = field(default="search", compare=False)
    nodes: int = field(default=0, compare=False)
    wall_ms: float = field(default=0.0, compare=False)

    @classmethod
    def from_generators(cls, generators: Sequence[Monomial], target: Monomial | None = None, **kw) -> "Witness":
        gens = tuple(generators)
        d = gens[0].dimension
        if target is None:
            target = divide_exact(multiply(gens), Monomial((1,) * d))
        return cls(d, target, gens, determinant(log_matrix(gens)), **kw)


class WitnessStatus(enum.Enum):
    OK = "ok"
    WRONG_PRODUCT = "wrong_product"
    SINGULAR_LOG = "singular_log"
    BAD_GENERATOR = "bad_generator"


def validate_witness(w: Witness) -> WitnessStatus:
    """Recheck a witness from scratch.

    A stored ``det`` that disagrees with the recomputed determinant is
    reported as SINGULAR_LOG: the claimed nonsingular matrix is not the one
    the generators give.
    """
    d = w.dimension
    gens = w.generators
    if len(gens) != d or w.target.dimension != d:
        return WitnessStatus.BAD_GENERATOR
    if any(g.dimension != d or not g.is_squarefree() for g in gens):
        return WitnessStatus.BAD_GENERATOR
    if len({g.degree for g in gens}) != 1 or gens[0].degree == 0:
        return WitnessStatus.BAD_GENERATOR
    lhs = multiply(gens)
    rhs = multiply([w.target, Monomial((1,) * d)])
    if lhs != rhs:
        return WitnessStatus.WRONG_PRODUCT
    det = determinant(log_matrix(gens))
    if det == 0 or det != w.det:
        return WitnessStatus.SINGULAR_LOG
    return WitnessStatus.OK


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------


@dataclass
class GaussEnumeration:
    generators: MonomialSet
    first_subsets: dict[tuple[int, ...], tuple[int, ...]]  # product exps -> generator indices
    source: MonomialSet
    nonsingular: int
    kernel_steps: int  # backend-specific: DFS nodes (numba) or subsets tested (numpy)
    wall_ms: float

    def witness_for(self, m: Monomial) -> Witness | None:
        idx = self.first_subsets.get(m.exps)
        if idx is None:
            return None
        gens = tuple(self.source[i] for i in idx)
        return Witness(m.dimension, m, gens, determinant(log_matrix(gens)), source="enumeration")


def _common_degree(gens: MonomialSet) -> int:
    degs = np.unique(gens.degrees())
    if len(degs) != 1:
        raise MixedDegrees(f"generators have degrees {degs.tolist()}")
    return int(degs[0])


def enumerate_gauss(gens: MonomialSet, d: int, threads: int = 1, backend: str | None = None) -> GaussEnumeration:
    """Run over every d-subset of ``gens`` (lexicographic in set order) and
    collect the distinct Gauss generators with the first subset giving each."""
    if gens.dimension != d:
        raise DimensionMismatch(f"generators live in {gens.dimension} variables, not {d}")
    if len(gens):
        _common_degree(gens)
    if len(gens) < d or rank(gens.array.T) < d:
        raise RankDeficient(f"K[gens] has dimension < {d}")
    t0 = time.perf_counter()
    G = gens.array
    base = kernels.product_base(G, d)
    units = range(len(G) - d + 1)

    def run(first: int):
        return kernels.enumerate_unit(G, d, first, base, backend)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, units))
    else:
        parts = [run(f) for f in units]
    first: dict[int, np.ndarray] = {}
    nonsingular = visited = 0
    for keys, subs, ns, vis in parts:
        nonsingular += ns
        visited += vis
        for k, s in zip(keys.tolist(), subs):
            if k not in first:
                first[k] = s
    keys = np.array(list(first), dtype=np.int64)
    prods = kernels.decode(keys, base, d) - 1
    subsets = {tuple(p): tuple(int(i) for i in s) for p, s in zip(prods.tolist(), first.values())}
    out = MonomialSet.from_array(prods.reshape(-1, d), d)
    return GaussEnumeration(out, subsets, gens, nonsingular, visited, (time.perf_counter() - t0) * 1e3)


def gauss_generators(gens: MonomialSet, d: int, threads: int = 1, backend: str | None = None) -> MonomialSet:
    """Generators of the Gauss algebra of K[gens] as a set of monomials."""
    return enumerate_gauss(gens, d, threads, backend).generators


# --------------------------------------------------------------------------
# witnesses
# --------------------------------------------------------------------------


class SearchStatus(enum.Enum):
    FOUND = "found"
    NO_WITNESS = "no_witness"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class SearchResult:
    status: SearchStatus
    witness: Witness | None
    nodes: int
    wall_ms: float = field(default=0.0, compare=False)


def _scarcity_order(cands: np.ndarray, budget: np.ndarray) -> np.ndarray:
    # generators touching the tightest variables first; stable on set order
    keys = [tuple(sorted(budget[row > 0].tolist())) for row in cands]
    return np.array(sorted(range(len(cands)), key=keys.__getitem__), dtype=np.int64)


def witness_search(
    target: Monomial,
    r: int,
    d: int,
    budget: int = DEFAULT_BUDGET,
    backend: str | None = None,
) -> SearchResult:
    """Look for d distinct squarefree degree-r monomials with nonsingular
    exponent matrix whose product is ``target * x_1...x_d``.

    The search is exhaustive: NO_WITNESS means none exists, while
    BUDGET_EXHAUSTED means the node limit stopped it first.
    """
    if target.dimension != d:
        raise DimensionMismatch(f"target has {target.dimension} variables, expected {d}")
    if target.degree != (r - 1) * d:
        raise DegreeMismatch(f"target degree {target.degree} != (r-1)d = {(r - 1) * d}")
    t0 = time.perf_counter()
    need = np.array(target.exps, dtype=np.int64) + 1
    pool = veronese(r, d).array
    cands = pool[(pool <= need).all(axis=1)]
    if len(cands) < d:
        return SearchResult(SearchStatus.NO_WITNESS, None, 0, (time.perf_counter() - t0) * 1e3)
    cands = cands[_scarcity_order(cands, need)]
    status, rows, nodes = kernels.witness_search_kernel(cands, need, budget, backend)
    ms = (time.perf_counter() - t0) * 1e3
    if status == kernels.FOUND:
        gens = tuple(Monomial(tuple(cands[i].tolist())) for i in rows)
        w = Witness(d, target, gens, determinant(log_matrix(gens)), "search", nodes, ms)
        return SearchResult(SearchStatus.FOUND, w, nodes, ms)
    if status == kernels.OUT_OF_BUDGET:
        return SearchResult(SearchStatus.BUDGET_EXHAUSTED, None, nodes, ms)
    return SearchResult(SearchStatus.NO_WITNESS, None, nodes, ms)


def relabel(m: Monomial, sigma: Sequence[int]) -> Monomial:
    """Move the exponent of variable i to position sigma[i]."""
    exps = [0] * m.dimension
    for i, a in enumerate(m.exps):
        exps[sigma[i]] = a
    return Monomial(tuple(exps))


def relabel_witness(w: Witness, sigma: Sequence[int]) -> Witness:
    gens = tuple(relabel(g, sigma) for g in w.generators)
    # permuting rows of the exponent matrix may flip the sign
    return Witness(w.dimension, relabel(w.target, sigma), gens, determinant(log_matrix(gens)), w.source, w.nodes, w.wall_ms)


def lift_witness(w: Witness, r: int, s: int) -> Witness:
    """Witness for ``u * x_r * x_s`` in d variables from a witness for u in
    d - 1 variables, by appending the generator x_r x_s x_d.

    The new exponent matrix is block triangular with a 1 in the corner, so the
    determinant is unchanged.
    """
    d0 = w.dimension
    if r == s or not (0 <= r < d0 and 0 <= s < d0):
        raise InvalidIndices(f"need distinct indices in [0, {d0}), got {r}, {s}")
    d = d0 + 1
    gens = tuple(Monomial(g.exps + (0,)) for g in w.generators)
    extra = [0] * d
    extra[r] = extra[s] = extra[d0] = 1
    tgt = list(w.target.exps) + [0]
    tgt[r] += 1
    tgt[s] += 1
    return Witness(d, Monomial(tuple(tgt)), gens + (Monomial(tuple(extra)),), w.det, "lift", w.nodes)


def pick_reduction_indices(m: Monomial) -> tuple[int, int]:
    """Positions of the two largest exponents (ties to the smaller index),
    both of which must exceed 1."""
    order = sorted(range(m.dimension), key=lambda i: (-m.exps[i], i))
    if len(order) < 2 or m.exps[order[1]] <= 1:
        raise NoValidPair(f"{m} has fewer than two exponents > 1")
    a, b = order[0], order[1]
    return (a, b) if a < b else (b, a)


# --------------------------------------------------------------------------
# witness tables and equality reports
# --------------------------------------------------------------------------


def target_set(d: int) -> MonomialSet:
    """Mon*(4, 2d) \\ E_d in d variables (no exclusion below d = 5)."""
    s = mon_star(4, 2 * d, d)
    return s - e_set(d) if d >= 5 else s


@dataclass
class TableEntry:
    partition: ExponentPartition
    status: SearchStatus
    witness: Witness | None
    nodes: int
    reason: str = ""


@dataclass
class WitnessTable:
    """One certificate per orbit of ``target_set(d)``, at the canonical placement."""

    dimension: int
    entries: dict[ExponentPartition, TableEntry]

    def witness_for(self, m: Monomial) -> Witness | None:
        """Witness for an arbitrary member of a certified orbit."""
        e = self.entries.get(canonical(m))
        if e is None or e.witness is None:
            return None
        # stable sort: position k of the placement goes to sigma[k]
        order = sorted(range(m.dimension), key=lambda i: (-m.exps[i], i))
        sigma = [0] * m.dimension
        for k, i in enumerate(order):
            sigma[k] = i
        return relabel_witness(e.witness, sigma)

    @property
    def complete(self) -> bool:
        return all(e.status is SearchStatus.FOUND for e in self.entries.values())


_TABLES: dict[tuple[int, int, str], WitnessTable] = {}


def _lift_entry(p: ExponentPartition, d: int, lower: WitnessTable | None, budget: int, backend) -> TableEntry:
    """Certificate for a shape without full support: lift the (d-1)-witness
    of m / (x_r x_s), or search directly when the lower table lacks it."""
    m = placement(p, d)
    r, s = pick_reduction_indices(m)
    u_full = list(m.exps)
    u_full[r] -= 1
    u_full[s] -= 1
    u = Monomial(tuple(u_full[:-1]))
    base = lower.witness_for(u) if lower is not None else None
    if base is not None:
        return TableEntry(p, SearchStatus.FOUND, lift_witness(base, r, s), 0)
    res = witness_search(m, 3, d, budget, backend)
    return TableEntry(p, res.status, res.witness, res.nodes, f"no lift from {canonical(u)} in dimension {d - 1}")


def build_witness_table(
    d: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    backend: str | None = None,
    cache_dir: Path | None = None,
) -> WitnessTable:
    """Certify every orbit of ``target_set(d)``: search for full-support
    shapes, lift from dimension d - 1 for the rest."""
    key = (d, budget, kernels._resolve(backend))
    if key in _TABLES:
        return _TABLES[key]
    if cache_dir is not None:
        cached = load_table(cache_dir, d)
        if cached is not None:
            _TABLES[key] = cached
            return cached
    reps = orbit_representatives(target_set(d))
    lower = None
    if any(len(p) < d for p in reps):
        lower = build_witness_table(d - 1, budget, threads, backend, cache_dir)
    full = [p for p in reps if len(p) == d]

    def search(p: ExponentPartition) -> TableEntry:
        res = witness_search(placement(p, d), 3, d, budget, backend)
        return TableEntry(p, res.status, res.witness, res.nodes)

    if threads > 1 and len(full) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = dict(zip(full, pool.map(search, full)))
    else:
        found = {p: search(p) for p in full}
    entries = {p: found[p] if p in found else _lift_entry(p, d, lower, budget, backend) for p in reps}
    table = WitnessTable(d, entries)
    _TABLES[key] = table
    if cache_dir is not None and table.complete:
        save_table(cache_dir, table)
    return table


def save_table(cache_dir: Path, table: WitnessTable) -> None:
    from .report import witness_record
    from .sets import format_lines

    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    d = table.dimension
    targets = MonomialSet([placement(p, d) for p in table.entries], dimension=d)
    (cache_dir / f"table_d{d}.txt").write_text(format_lines(targets))
    recs = [witness_record(e.witness, timing=False) for e in table.entries.values()]
    (cache_dir / f"table_d{d}.json").write_text(json.dumps(recs, indent=1, sort_keys=True) + "\n")


def load_table(cache_dir: Path, d: int) -> WitnessTable | None:
    """Read a cached table; every witness is re-validated before use."""
    path = Path(cache_dir) / f"table_d{d}.json"
    if not path.exists():
        return None
    entries = {}
    for rec in json.loads(path.read_text()):
        gens = tuple(Monomial(tuple(g)) for g in rec["generators"])
        nodes = int(rec.get("stats", {}).get("nodes", 0))
        w = Witness(d, Monomial(tuple(rec["target"])), gens, rec["det"], rec.get("source", "cache"), nodes)
        if validate_witness(w) is not WitnessStatus.OK:
            return None
        p = canonical(w.target)
        entries[p] = TableEntry(p, SearchStatus.FOUND, w, nodes if w.source == "search" else 0)
    expected = set(orbit_representatives(target_set(d)))
    if set(entries) != expected:
        return None
    return WitnessTable(d, {p: entries[p] for p in orbit_representatives(target_set(d))})


@dataclass
class EqualityReport:
    dimension: int
    mode: str
    target_size: int
    confirmed: list[tuple[ExponentPartition, Witness]]
    missing: list[tuple[ExponentPartition, SearchStatus]]
    extra: list[tuple[ExponentPartition, int]]
    stats: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.missing and not self.extra

    def partitions(self) -> tuple[list, list, list]:
        return (
            [p for p, _ in self.confirmed],
            [p for p, _ in self.missing],
            [p for p, _ in self.extra],
        )


def _extra_by_orbit(s: MonomialSet) -> list[tuple[ExponentPartition, int]]:
    counts: dict[ExponentPartition, int] = {}
    for m in s:
        p = canonical(m)
        counts[p] = counts.get(p, 0) + 1
    return [(p, counts[p]) for p in orbit_representatives(s)]


def verify_equality(
    d: int,
    mode: str = "enumerate",
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
    backend: str | None = None,
    cache_dir: Path | None = None,
) -> EqualityReport:
    """Compare the Gauss algebra of K[V_{3,d}] with K[Mon*(4, 2d) \\ E_d]."""
    if d < 5:
        raise ValueError("the comparison is stated for d >= 5")
    t0 = time.perf_counter()
    target = target_set(d)
    reps = orbit_representatives(target)
    if mode == "enumerate":
        en = enumerate_gauss(veronese(3, d), d, threads, backend)
        confirmed = []
        missing = []
        for p in reps:
            w = en.witness_for(placement(p, d))
            if w is None:
                missing.append((p, SearchStatus.NO_WITNESS))
            else:
                confirmed.append((p, w))
        extra = _extra_by_orbit(en.generators - target)
        n_sub = comb(len(en.source), d)
        stats = {"subsets": n_sub, "nonsingular": en.nonsingular, "nodes": n_sub}
    elif mode == "witness":
        table = build_witness_table(d, budget, threads, backend, cache_dir)
        confirmed, missing, bad = _collect(table, target)
        extra = bad
        stats = {"nodes": sum(e.nodes for e in table.entries.values())}
    else:
        raise ValueError(f"mode must be 'enumerate' or 'witness', got {mode!r}")
    stats["wall_ms"] = (time.perf_counter() - t0) * 1e3
    return EqualityReport(d, mode, len(target), confirmed, missing, extra, stats)


def _collect(table: WitnessTable, target: MonomialSet):
    confirmed, missing, outside = [], [], []
    for p, e in table.entries.items():
        if e.status is SearchStatus.FOUND and e.witness is not None:
            if validate_witness(e.witness) is not WitnessStatus.OK:
                missing.append((p, SearchStatus.NO_WITNESS))
                continue
            if e.witness.target not in target:
                outside.append((p, orbit_size(p, table.dimension)))
            confirmed.append((p, e.witness))
        else:
            missing.append((p, e.status))
    return confirmed, missing, outside


def sample_inclusion(d: int, samples: int, seed: int, target: MonomialSet | None = None) -> dict:
    """Draw random d-subsets of V_{3,d}; every nonsingular one must land in
    the target set."""
    target = target_set(d) if target is None else target
    gens = veronese(3, d)
    rng = np.random.default_rng(seed)
    nonsingular = 0
    outside: list[list[int]] = []
    ones = Monomial((1,) * d)
    for _ in range(samples):
        idx = np.sort(rng.choice(len(gens), size=d, replace=False))
        sub = [gens[int(i)] for i in idx]
        if determinant(log_matrix(sub)) == 0:
            continue
        nonsingular += 1
        m = divide_exact(multiply(sub), ones)
        if m not in target:
            outside.append(list(m.exps))
    return {"samples": samples, "seed": seed, "nonsingular": nonsingular, "outside": outside}


def conjecture_check(
    d: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    samples: int = 1000,
    seed: int = 0,
    backend: str | None = None,
    cache_dir: Path | None = None,
) -> EqualityReport:
    """Try to certify K[Mon*(4, 2d) \\ E_d] inside the Gauss algebra of
    K[V_{3,d}] for d >= 8, one orbit at a time."""
    if d < 8:
        raise ValueError("conjecture mode is for d >= 8; use verify_equality below that")
    t0 = time.perf_counter()
    table = build_witness_table(d, budget, threads, backend, cache_dir)
    target = target_set(d)
    confirmed, missing, outside = _collect(table, target)
    sample = sample_inclusion(d, samples, seed, target)
    for exps in sample["outside"]:
        outside.append((canonical(exps), 1))
    stats = {
        "nodes": sum(e.nodes for e in table.entries.values()),
        "sample": sample,
        "wall_ms": (time.perf_counter() - t0) * 1e3,
    }
    return EqualityReport(d, "conjecture", len(target), confirmed, missing, outside, stats)
