import json
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussver import gauss
from gaussver.core import Monomial, determinant, log_matrix
from gaussver.errors import DegreeMismatch, DimensionMismatch, InvalidIndices, MixedDegrees, NoValidPair, RankDeficient
from gaussver.gauss import (
    SearchStatus,
    Witness,
    WitnessStatus,
    build_witness_table,
    conjecture_check,
    enumerate_gauss,
    gauss_generators,
    lift_witness,
    load_table,
    pick_reduction_indices,
    relabel_witness,
    save_table,
    target_set,
    validate_witness,
    verify_equality,
    witness_search,
)
from gaussver.known_witnesses import CASES, case_witness, fixture_witnesses
from gaussver.sets import MonomialSet, canonical, e_set, mon, mon_star, orbit_representatives, placement, veronese

from oracles import brute_gauss


def as_set(s):
    return {m.exps for m in s}


# -- enumeration ---------------------------------------------------------------


def test_gauss_generators_examples(backend):
    assert as_set(gauss_generators(veronese(4, 5), 5, backend=backend)) == {(3, 3, 3, 3, 3)}
    g24 = gauss_generators(veronese(2, 4), 4, backend=backend)
    assert len(g24) == 12 and g24 == mon(3, 4, 4) - MonomialSet([(1, 1, 1, 1)])
    g35 = gauss_generators(veronese(3, 5), 5, backend=backend)
    assert len(g35) == 81 and g35 == mon_star(4, 10, 5) - e_set(5)


@pytest.mark.parametrize("r,d", [(2, 4), (2, 5), (3, 5), (4, 6), (3, 4)])
def test_gauss_generators_match_cofactor_oracle(r, d):
    gens = [m.exps for m in veronese(r, d)]
    assert as_set(gauss_generators(veronese(r, d), d)) == brute_gauss(gens, d)


def test_enumeration_input_checks():
    with pytest.raises(DimensionMismatch):
        gauss_generators(veronese(3, 5), 6)
    with pytest.raises(MixedDegrees):
        gauss_generators(MonomialSet([(1, 1, 0), (1, 0, 0), (0, 1, 1), (1, 0, 1)]), 3)
    with pytest.raises(RankDeficient):
        gauss_generators(MonomialSet([(1, 1, 0, 0), (0, 0, 1, 1), (1, 0, 1, 0), (0, 1, 0, 1)]), 4)


@pytest.mark.parametrize("r,d", [(2, 4), (2, 5), (2, 6), (3, 5), (3, 6), (4, 6)])
def test_enumerated_generators_have_degree_and_symmetry(r, d):
    g = gauss_generators(veronese(r, d), d)
    assert (g.degrees() == (r - 1) * d).all()
    from gaussver.sets import is_permutation_closed

    assert is_permutation_closed(g)


def test_thread_count_does_not_change_enumeration():
    a = enumerate_gauss(veronese(3, 6), 6, threads=1)
    b = enumerate_gauss(veronese(3, 6), 6, threads=3)
    assert a.generators == b.generators
    assert a.first_subsets == b.first_subsets
    assert a.nonsingular == b.nonsingular


def test_backends_pick_same_first_subsets():
    a = enumerate_gauss(veronese(3, 6), 6, backend="numba")
    b = enumerate_gauss(veronese(3, 6), 6, backend="numpy")
    assert a.first_subsets == b.first_subsets and a.nonsingular == b.nonsingular


def test_enumeration_witnesses_validate():
    en = enumerate_gauss(veronese(3, 6), 6)
    for m in en.generators:
        w = en.witness_for(m)
        assert validate_witness(w) is WitnessStatus.OK
    assert en.witness_for(Monomial((4, 4, 3, 1, 0, 0))) is None


# -- witnesses -------------------------------------------------------------------


def test_fixture_witnesses_validate():
    ws = fixture_witnesses()
    assert len(ws) == 3 + 2 + 7 + 11
    for w in ws:
        assert validate_witness(w) is WitnessStatus.OK, w.target
    lifted = ws[4]
    assert lifted.target == Monomial((3, 3, 2, 2, 0))
    assert lifted.det == ws[3].det


def test_validate_witness_reasons():
    w = case_witness(*CASES[5][0])
    assert abs(w.det) == 3
    dup = Witness(5, w.target, (w.generators[0],) + w.generators[:4], w.det)
    assert validate_witness(Witness.from_generators(list(dup.generators), w.target)) is WitnessStatus.WRONG_PRODUCT
    same = list(w.generators)
    same[1] = same[0]
    # duplicate generator with the product repaired by the target
    t = Monomial(tuple(sum(g.exps[i] for g in same) - 1 for i in range(5)))
    assert validate_witness(Witness.from_generators(same, t)) is WitnessStatus.SINGULAR_LOG
    wrong = Witness(5, Monomial((3, 3, 2, 1, 1)), w.generators, w.det)
    assert validate_witness(wrong) is WitnessStatus.WRONG_PRODUCT
    bad = Witness(5, w.target, (Monomial((2, 1, 0, 0, 0)),) + w.generators[1:], w.det)
    assert validate_witness(bad) is WitnessStatus.BAD_GENERATOR
    assert validate_witness(Witness(5, w.target, w.generators[:4], w.det)) is WitnessStatus.BAD_GENERATOR
    assert validate_witness(Witness(5, w.target, w.generators, w.det + 1)) is WitnessStatus.SINGULAR_LOG


def test_witness_search_examples(backend):
    res = witness_search(Monomial((2,) * 5), 3, 5, backend=backend)
    assert res.status is SearchStatus.FOUND
    assert validate_witness(res.witness) is WitnessStatus.OK
    assert witness_search(Monomial((3, 3, 3, 1, 0)), 3, 5, backend=backend).status is SearchStatus.NO_WITNESS
    assert witness_search(Monomial((4, 3, 1, 1, 1)), 3, 5, backend=backend).status is SearchStatus.NO_WITNESS
    assert witness_search(Monomial((2,) * 5), 3, 5, budget=1, backend=backend).status is SearchStatus.BUDGET_EXHAUSTED


def test_witness_search_preconditions():
    with pytest.raises(DimensionMismatch):
        witness_search(Monomial((2,) * 4), 3, 5)
    with pytest.raises(DegreeMismatch):
        witness_search(Monomial((2, 2, 2, 2, 1)), 3, 5)


def test_no_witness_exactly_on_e5(backend):
    found = set()
    for m in mon_star(4, 10, 5):
        res = witness_search(m, 3, 5, backend=backend)
        assert res.status is not SearchStatus.BUDGET_EXHAUSTED
        if res.status is SearchStatus.FOUND:
            assert validate_witness(res.witness) is WitnessStatus.OK
            assert res.witness.target == m
            found.add(m.exps)
    assert found == as_set(mon_star(4, 10, 5) - e_set(5))


@pytest.mark.parametrize("d", [5, 6])
def test_containment_in_mon_star_by_exhaustion(d):
    # every degree-2d target with an exponent >= d - 1 has no witness
    for m in mon(1, 2 * d, d):
        if max(m.exps) >= d - 1 and max(m.exps) <= d + 1:
            assert witness_search(m, 3, d).status is SearchStatus.NO_WITNESS


# -- lifting and relabeling ------------------------------------------------------------


@pytest.mark.parametrize(
    "exps,pair",
    [((3, 3, 2, 2, 0), (0, 1)), ((2, 3, 3, 2, 0), (1, 2)), ((3, 2, 2, 2, 1, 0, 0, 0), (0, 1)), ((2, 4, 1), (0, 1))],
)
def test_pick_reduction_indices(exps, pair):
    assert pick_reduction_indices(Monomial(exps)) == pair


@pytest.mark.parametrize("exps", [(3, 1, 1, 1), (1, 1, 1), (5,)])
def test_pick_reduction_indices_needs_two_large(exps):
    with pytest.raises(NoValidPair):
        pick_reduction_indices(Monomial(exps))


def test_lift_witness_case4():
    base = case_witness((2, 2, 2, 2), [(1, 2, 3), (2, 3, 4), (1, 3, 4), (1, 2, 4)])
    assert validate_witness(base) is WitnessStatus.OK
    for r, s in [(0, 1), (0, 3), (2, 3)]:
        w = lift_witness(base, r, s)
        assert validate_witness(w) is WitnessStatus.OK
        assert w.det == base.det == determinant(log_matrix(w.generators))
        assert w.dimension == 5 and len(w.target.support) == 4
        assert w.generators[-1] == Monomial.from_support([r, s, 4], 5)
    with pytest.raises(InvalidIndices):
        lift_witness(base, 1, 1)
    with pytest.raises(InvalidIndices):
        lift_witness(base, 0, 4)


def test_lift_d5_table_to_d6():
    t5 = build_witness_table(5)
    w = lift_witness(t5.witness_for(Monomial((2, 2, 2, 2, 2))), 0, 1)
    assert w.target == Monomial((3, 3, 2, 2, 2, 0))
    assert validate_witness(w) is WitnessStatus.OK


_e4 = enumerate_gauss(veronese(3, 4), 4)
_e5 = enumerate_gauss(veronese(3, 5), 5)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([4, 5]), st.data())
def test_lift_preserves_validity_and_det(d, data):
    en = _e4 if d == 4 else _e5
    m = data.draw(st.sampled_from(list(en.generators)))
    w = en.witness_for(m)
    r = data.draw(st.integers(0, d - 1))
    s = data.draw(st.integers(0, d - 1).filter(lambda k: k != r))
    lifted = lift_witness(w, r, s)
    assert validate_witness(lifted) is WitnessStatus.OK
    assert lifted.det == w.det


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_relabel_witness_stays_valid(data):
    m = data.draw(st.sampled_from(list(_e5.generators)))
    sigma = data.draw(st.permutations(range(5)))
    w = relabel_witness(_e5.witness_for(m), sigma)
    assert validate_witness(w) is WitnessStatus.OK
    assert canonical(w.target) == canonical(m)


# -- tables and equality -------------------------------------------------------------------


@pytest.mark.parametrize("d", [5, 6, 7])
def test_tables_cover_every_member(d):
    table = build_witness_table(d)
    assert table.complete
    assert list(table.entries) == orbit_representatives(target_set(d))
    rng = np.random.default_rng(d)
    members = list(target_set(d))
    for k in rng.choice(len(members), size=min(60, len(members)), replace=False):
        w = table.witness_for(members[int(k)])
        assert validate_witness(w) is WitnessStatus.OK and w.target == members[int(k)]
    excluded = orbit_representatives(e_set(d))[0]
    assert table.witness_for(placement(excluded, d)) is None


@pytest.mark.parametrize("d", [5, 6, 7])
def test_table_backends_agree(d):
    gauss._TABLES.clear()
    a = build_witness_table(d, backend="numba")
    b = build_witness_table(d, backend="numpy")
    for p in a.entries:
        assert a.entries[p].witness == b.entries[p].witness
        assert a.entries[p].nodes == b.entries[p].nodes


def test_lifted_entries_reference_lower_table():
    t6 = build_witness_table(6)
    lifted = [e for e in t6.entries.values() if len(e.partition) < 6]
    assert lifted and all(e.witness.source == "lift" for e in lifted)
    assert all(e.witness.generators[-1].exps[-1] == 1 for e in lifted)


def test_table_cache_round_trip(tmp_path):
    t = build_witness_table(6)
    save_table(tmp_path, t)
    assert (tmp_path / "table_d6.txt").read_text().splitlines()[0] == "4,4,2,2,0,0"
    loaded = load_table(tmp_path, 6)
    assert loaded is not None
    for p, e in t.entries.items():
        assert loaded.entries[p].witness == e.witness
        assert loaded.entries[p].nodes == e.nodes
    recs = json.loads((tmp_path / "table_d6.json").read_text())
    recs[0]["det"] += 1
    (tmp_path / "table_d6.json").write_text(json.dumps(recs))
    assert load_table(tmp_path, 6) is None
    assert load_table(tmp_path, 5) is None


@pytest.mark.parametrize("d", [5, 6, 7])
def test_modes_agree(d):
    by_witness = verify_equality(d, "witness")
    by_enum = verify_equality(d, "enumerate")
    assert by_witness.holds and by_enum.holds
    assert by_witness.partitions() == by_enum.partitions()
    assert by_enum.stats["subsets"] == {5: 252, 6: 38760, 7: 6724520}[d]


def test_enumeration_lands_in_target_set():
    # the inclusion direction, asserted on the full enumeration
    for d in (5, 6):
        assert gauss_generators(veronese(3, d), d) <= target_set(d)


def test_verify_equality_rejects_small_d_and_bad_mode():
    with pytest.raises(ValueError):
        verify_equality(4)
    with pytest.raises(ValueError):
        verify_equality(5, "guess")


def test_target_set_below_five_has_no_exclusion():
    assert target_set(4) == mon_star(4, 8, 4)


def test_conjecture_requires_d8():
    with pytest.raises(ValueError):
        conjecture_check(7)


@pytest.mark.slow
def test_conjecture_d8_budget_one_reports_exhaustion():
    gauss._TABLES.clear()
    rep = conjecture_check(8, budget=1, samples=10)
    assert rep.missing
    assert all(s in (SearchStatus.BUDGET_EXHAUSTED, SearchStatus.NO_WITNESS) for _, s in rep.missing)
    assert any(s is SearchStatus.BUDGET_EXHAUSTED for _, s in rep.missing)
    gauss._TABLES.clear()


def test_sample_inclusion_is_seeded():
    a = gauss.sample_inclusion(6, 200, seed=3)
    b = gauss.sample_inclusion(6, 200, seed=3)
    assert a == b and a["outside"] == [] and a["nonsingular"] > 0
