import pytest

from gcsurgery.calculus import surgery_homology
from gcsurgery.planner import (
    ABELIAN_ONLY,
    FAILED,
    VERIFIED,
    SurgerySchedule,
    TargetSpec,
    execute,
    genus_formula,
    make_schedule,
    plan_run_verify,
    verify,
)
from gcsurgery.smith import AbelianGroup
from gcsurgery.torus_surgery import TorusSurgerySpec


def curves(s):
    return [(str(x.curve), x.r) for x in s.specs]


def test_target_validation():
    with pytest.raises(ValueError):
        TargetSpec(n=0)
    with pytest.raises(ValueError):
        TargetSpec(c=1, p=(1,), n=1)
    with pytest.raises(ValueError):
        TargetSpec(a=2, n=1)
    with pytest.raises(ValueError):
        TargetSpec(c=2, p=(3,), n=1)


def test_genus_formula():
    assert genus_formula(TargetSpec(a=1, g=4, n=2)) == 6
    assert genus_formula(TargetSpec(b=3, n=2)) == 5
    assert genus_formula(TargetSpec(b=1, c=1, p=(2,), n=1)) == 3


def test_schedule_single_handle_target():
    s = make_schedule(TargetSpec(a=1, g=2, n=1))
    assert s.h == 3
    assert curves(s) == [("b_3", 1), ("a_3", 0)]


def test_schedule_inclusive_b_range():
    s = make_schedule(TargetSpec(b=2, n=1))
    assert s.h == 3
    assert curves(s) == [("a_1", 1), ("a_2", 1), ("b_2", 1), ("b_3", 1), ("a_3", 0)]
    assert s.marker == 4


def test_schedule_with_nothing_left_uses_y():
    s = make_schedule(TargetSpec(n=1))
    assert curves(s) == [("y", 1), ("b_1", 1), ("a_1", 0)]
    m = execute(s)
    assert surgery_homology(m.three_manifold) == AbelianGroup()


def test_schedule_never_uses_x_and_names_curves_once():
    for t in [TargetSpec(a=1, g=3, b=2, c=2, p=(2, 5), n=4), TargetSpec(c=1, p=(3,), n=2)]:
        s = make_schedule(t)
        assert all(x.curve.kind != "x" for x in s.specs)
        assert len({x.curve for x in s.specs}) == len(s.specs)
        assert sum(1 for x in s.specs if x.r == 0) == t.n


def test_schedule_invariants_checked():
    a0 = TorusSurgerySpec("a_1", 1, 0, 0)
    b1 = TorusSurgerySpec("b_1", 0, 1, 1)
    with pytest.raises(ValueError):
        SurgerySchedule(1, (a0, b1), 1)
    with pytest.raises(ValueError):
        SurgerySchedule(1, (b1, b1), 2)


def test_schedule_round_trip():
    s = make_schedule(TargetSpec(a=1, g=1, b=1, c=1, p=(4,), n=2))
    assert SurgerySchedule.from_json(s.to_json()) == s


def test_untouched_loops_give_free_rank():
    # before the lens conversions the free rank is t' (a = 0) or 2g+1+t' (a = 1)
    for t, rank in [(TargetSpec(b=1, c=1, p=(2,), n=2), 2),
                    (TargetSpec(a=1, g=2, b=1, c=1, p=(3,), n=1), 7)]:
        s = make_schedule(t)
        plain = tuple(x for x in s.specs if x.q < 2)
        m = execute(SurgerySchedule(s.h, plain, s.marker - t.c))
        assert surgery_homology(m.three_manifold).rank == rank


@pytest.mark.parametrize("t", [
    TargetSpec(b=2, n=3),
    TargetSpec(c=1, p=(2,), n=1),
    TargetSpec(a=1, g=1, n=2),
    TargetSpec(a=1, g=0, b=1, c=1, p=(5,), n=1),
])
def test_certificates(t):
    cert = plan_run_verify(t)
    assert cert.verdict == VERIFIED
    assert cert.h1_computed == t.expected_h1()
    assert cert.loci_computed == t.n
    d = cert.to_dict()
    assert d["h1"]["match"] and d["loci"]["match"] and d["verdict"] == VERIFIED


def test_mismatched_target_fails():
    s = make_schedule(TargetSpec(b=2, n=1))
    cert = verify(execute(s), TargetSpec(b=1, n=1))
    assert cert.verdict == FAILED


def test_slope_convention_agrees_on_homology():
    for t in [TargetSpec(b=1, n=1), TargetSpec(a=1, g=1, b=1, n=1), TargetSpec(c=1, p=(3,), n=2)]:
        cert = plan_run_verify(t, convention="slope")
        assert cert.h1_ok and cert.verdict in (VERIFIED, ABELIAN_ONLY)
