from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcsurgery.calculus import normalize, surgery_homology
from gcsurgery.invariants import recognize, wirtinger_presentation
from gcsurgery.presentation import is_power_relator, tietze_simplify
from gcsurgery.smith import AbelianGroup
from gcsurgery.torus_surgery import (
    BLOWN_UP,
    NULLHOMOLOGOUS,
    CharNumbers,
    GCSLedger,
    LedgerError,
    LocusRecord,
    PhaseError,
    ProductFourManifold,
    TorusSurgerySpec,
    apply_torus_surgery,
    blow_up_locus,
    char_connected_sum,
    char_fiber_sum,
    check_parity,
    en_decomposition_check,
    ledger_report,
    mark_perturbation,
)


def test_spec_validation():
    with pytest.raises(ValueError):
        TorusSurgerySpec("x", 1, 0, 1)
    with pytest.raises(ValueError):
        TorusSurgerySpec("a_1", 0, 0, 1)
    with pytest.raises(ValueError):
        TorusSurgerySpec("b_1", 0, 2, 2)
    s = TorusSurgerySpec("b_2", 0, 3, 1)
    assert TorusSurgerySpec.from_dict(s.to_dict()) == s


def test_translation_conventions():
    a = TorusSurgerySpec("a_1", 1, 0, 1)
    assert a.meridian_coefficient("figure") == 0
    assert a.meridian_coefficient("slope") == 1
    assert TorusSurgerySpec("b_1", 0, 1, 1).meridian_coefficient() == 1
    assert TorusSurgerySpec("b_1", 0, 5, 1).meridian_coefficient() == Fraction(1, 5)
    assert TorusSurgerySpec("a_1", 0, 1, 1).meridian_coefficient() is None


def test_phase_order_enforced():
    m = ProductFourManifold.s1_sigma(1)
    with pytest.raises(PhaseError):
        apply_torus_surgery(m, TorusSurgerySpec("a_1", 1, 0, 0))
    m = mark_perturbation(m)
    assert mark_perturbation(m) == m
    m = apply_torus_surgery(m, TorusSurgerySpec("a_1", 1, 0, 0))
    assert len(m.ledger.loci) == 1
    assert m.ledger.loci[0].flag == NULLHOMOLOGOUS
    assert m.char == CharNumbers(0, 0)


def test_genus_bound_enforced():
    with pytest.raises(ValueError):
        apply_torus_surgery(ProductFourManifold.s1_sigma(1), TorusSurgerySpec("b_2", 0, 1, 1))


@pytest.mark.parametrize("p", range(2, 8))
def test_lens_surgery_adds_power_relator(p):
    m = apply_torus_surgery(ProductFourManifold.s1_sigma(1), TorusSurgerySpec("b_1", 0, p, 1))
    m = mark_perturbation(m)
    m = apply_torus_surgery(m, TorusSurgerySpec("a_1", 1, 0, 0))
    assert surgery_homology(m.three_manifold) == AbelianGroup(1, (p,))
    out, _ = normalize(m.three_manifold)
    g = tietze_simplify(wirtinger_presentation(out))
    assert any(is_power_relator(r) == p for r in g.relators)
    assert ("Lens", p) in recognize(out).keys()


def test_blow_up_locus():
    m = mark_perturbation(ProductFourManifold.s1_sigma(2))
    m = apply_torus_surgery(m, TorusSurgerySpec("a_1", 1, 0, 0))
    m = apply_torus_surgery(m, TorusSurgerySpec("a_2", 1, 0, 0))
    b = blow_up_locus(m, 1)
    assert b.ledger.loci[0].flag == BLOWN_UP and b.ledger.loci[0].self_intersection == -1
    assert b.ledger.loci[1].flag == NULLHOMOLOGOUS and b.ledger.loci[1].self_intersection == 0
    assert b.char == CharNumbers(1, -1)
    with pytest.raises(LedgerError):
        blow_up_locus(b, 1)
    with pytest.raises(LedgerError):
        blow_up_locus(b, 9)
    assert check_parity(b.ledger)
    rep = ledger_report(b)
    assert rep["char"] == {"euler": 1, "signature": -1}
    assert [l["class"] for l in rep["loci"]] == [BLOWN_UP, NULLHOMOLOGOUS]


def test_ledger_round_trip():
    m = mark_perturbation(apply_torus_surgery(ProductFourManifold.s1_sigma(1),
                                              TorusSurgerySpec("b_1", 0, 1, 1)))
    m = apply_torus_surgery(m, TorusSurgerySpec("a_1", 1, 0, 0))
    assert ProductFourManifold.from_json(m.to_json()) == m
    assert GCSLedger.from_dict(m.ledger.to_dict()) == m.ledger


def test_locus_record_invariants():
    with pytest.raises(LedgerError):
        LocusRecord(1, 0, NULLHOMOLOGOUS, -1)
    with pytest.raises(LedgerError):
        LocusRecord(1, 0, BLOWN_UP, 0)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50),
       st.integers(-5, 5))
def test_characteristic_number_arithmetic(e1, s1, e2, s2, fe):
    a, b = CharNumbers(e1, s1), CharNumbers(e2, s2)
    assert char_fiber_sum(a, b, fe) == CharNumbers(e1 + e2 - 2 * fe, s1 + s2)
    assert char_connected_sum(a, b) == char_connected_sum(b, a)


def test_elliptic_surface_decompositions():
    assert all(en_decomposition_check(n) for n in range(1, 6))
    # E(2) is the fiber sum of two E(1) along a torus (Euler characteristic 0)
    e1 = CharNumbers(12, -8)
    assert char_fiber_sum(e1, e1, 0) == CharNumbers(24, -16)
