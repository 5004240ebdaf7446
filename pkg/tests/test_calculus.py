import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcsurgery import calculus
from gcsurgery.calculus import (
    InvariantViolation,
    RuleError,
    apply_rule,
    blow_down,
    blow_up,
    borromean_twist,
    chain_value,
    clear_rational,
    normalize,
    rational_to_chain,
    rolfsen_twist,
    slam_dunk,
    surgery_homology,
)
from gcsurgery.diagram import (
    add_meridian,
    build_borromean,
    build_chain,
    build_hopf,
    build_s1_sigma,
    build_unknot,
    linking_matrix,
    same_diagram,
    validate,
)
from gcsurgery.invariants import first_homology, recognize
from gcsurgery.smith import AbelianGroup

from conftest import random_application, random_diagram, same_pi1_counts


def fold(chain):
    """a_1 - 1/(a_2 - 1/(...)), evaluated from the back."""
    value = Fraction(chain[-1])
    for a in reversed(chain[:-1]):
        value = a - 1 / value
    return value


@given(st.integers(-40, 40), st.integers(1, 20))
def test_chain_expansion_inverts(p, q):
    r = Fraction(p, q)
    if r == 0:
        return
    chain = rational_to_chain(r)
    assert all(isinstance(a, int) for a in chain)
    assert fold(chain) == r == chain_value(chain)


def test_chain_examples():
    assert rational_to_chain(Fraction(7, 3)) == [3, 2, 2]
    assert rational_to_chain(Fraction(5)) == [5]


def test_slam_dunk_on_hopf():
    out = slam_dunk(build_hopf(4, 1), 1)
    assert len(out) == 1 and out.component(0).framing == 3
    out = slam_dunk(build_hopf(2, Fraction(1, 3)), 1)
    assert out.component(0).framing == -1
    # a 0-framed meridian cancels its parent entirely
    assert len(slam_dunk(build_hopf(7, 0), 1)) == 0


def test_slam_dunk_inverts_splicing():
    from math import gcd
    for p in range(2, 13):
        for q in range(2, p):
            if gcd(p, q) != 1:
                continue
            r = Fraction(p, q)
            spliced = clear_rational(build_unknot(r))
            assert spliced.is_integral
            assert first_homology(spliced) == AbelianGroup(0, (p,))
            # contract the chain from its far end
            d = spliced
            while len(d) > 1:
                d = slam_dunk(d, max(d.ids))
            assert d.component(0).framing == r


def test_rolfsen_twist_on_meridian():
    d = add_meridian(build_unknot(3), 0, Fraction(2, 5))
    out = rolfsen_twist(d, 1, 2)
    # p/q -> p/(q + n p); parent gains n * lk^2
    assert out.component(1).framing == Fraction(2, 9)
    assert out.component(0).framing == 5
    assert surgery_homology(out) == surgery_homology(d)


def test_blow_up_then_down_is_identity_up_to_isotopy():
    rng = random.Random(11)
    seen = 0
    for base in [build_borromean(1, 2, 3), build_chain([2, -3, 1]), build_s1_sigma(1)]:
        codes, _ = base.gauss()
        edges = [(c, k) for c in codes for k in range(len(codes[c]))]
        for strands in itertools.chain([()], ([e] for e in edges),
                                       rng.sample(list(itertools.combinations(edges, 2)), 15)):
            for sign in (1, -1):
                try:
                    up = blow_up(base, strands, sign)
                except RuleError:
                    continue
                new = max(up.ids)
                assert validate(up).ok
                back = blow_down(up, new)
                assert same_diagram(back, base)
                seen += 1
    assert seen > 40


def test_blow_up_preserves_pi1_counts():
    rng = random.Random(5)
    for base in [build_borromean(1, 2, 3), build_borromean(-1, 2, 5), build_chain([2, 3])]:
        codes, _ = base.gauss()
        edges = [(c, k) for c in codes for k in range(len(codes[c]))]
        pairs = list(itertools.combinations(edges, 2))
        rng.shuffle(pairs)
        for strands in pairs[:8]:
            for sign in (1, -1):
                try:
                    up = blow_up(base, strands, sign)
                except RuleError:
                    continue
                assert same_pi1_counts(base, up)


def test_twisted_disk_is_refused():
    # two antiparallel strands of one component cannot bound a flat disk here
    refused = 0
    base = build_borromean(1, 2, 3)
    codes, _ = base.gauss()
    edges = [(c, k) for c in codes for k in range(len(codes[c]))]
    for strands in itertools.combinations(edges, 2):
        try:
            blow_up(base, strands, 1)
        except RuleError as exc:
            refused += 1
            assert "disk" in str(exc) or "face" in str(exc) or "side" in str(exc)
    assert refused > 0


@pytest.mark.parametrize("eps", [1, -1])
@pytest.mark.parametrize("member", [0, 1, 2])
def test_borromean_twist_chirality(member, eps):
    for f1, f2 in [(1, 2), (2, 3), (-1, 3), (3, -2), (5, 1)]:
        fr = [f1, f2]
        fr.insert(member, eps)
        d = build_borromean(*fr)
        out = borromean_twist(d, member)
        assert len(out) == 2
        assert same_pi1_counts(d, out)


@pytest.mark.parametrize("eps", [1, -1])
def test_borromean_twist_inside_s1_sigma(eps):
    for h in (1, 2):
        for which in range(1, 2 * h + 1):
            d = build_s1_sigma(h).with_framing(which, eps).with_framing(0, 3)
            out, step = apply_rule(d, "borromean_twist", check_pi1=True, mid=which)
            assert step.ok and step.pi1.startswith("ok")


def test_engine_rejects_a_broken_rule(monkeypatch):
    def sloppy(d, cid):
        return d.with_framing(cid, d.component(cid).framing + 1)

    monkeypatch.setitem(calculus.RULES, "sloppy", sloppy)
    with pytest.raises(InvariantViolation):
        apply_rule(build_unknot(2), "sloppy", cid=0)


def test_unknown_rule_and_bad_params():
    with pytest.raises(RuleError):
        apply_rule(build_unknot(2), "no_such_rule")
    with pytest.raises(RuleError):
        blow_down(build_unknot(2), 0)


def test_normalize_examples():
    out, trace = normalize(build_hopf(4, 1))
    assert [s.rule for s in trace.steps] == ["slam_dunk"]
    assert str(recognize(out)) == "L(3,1)"
    out, _ = normalize(build_unknot(Fraction(1, 3)))
    assert str(recognize(out)) == "S3"
    out, _ = normalize(build_unknot(Fraction(7, 3)))
    assert recognize(out).keys() == [("Lens", 7)]
    assert all(step.ok for step in trace.steps)


def test_normalize_preserves_h1_on_random_diagrams():
    rng = random.Random(2)
    for _ in range(40):
        d = random_diagram(rng, rational=True)
        out, trace = normalize(d)
        assert surgery_homology(out) == surgery_homology(d)
        assert out.is_integral
        assert trace.initial == d.digest() and trace.final == out.digest()


def test_twist_to_infinity_deletes_the_meridian():
    # 1/1 -> 1/(1 - 1) is empty surgery; the parent picks up n * lk^2 = -1
    d = rolfsen_twist(add_meridian(build_unknot(0), 0, 1), 1, -1)
    assert len(d) == 1
    assert linking_matrix(d)[0][0] == -1


@pytest.mark.parametrize("rule", ["blow_up", "blow_down", "slam_dunk", "rolfsen_twist",
                                  "borromean_twist", "split_extract"])
def test_random_rules_preserve_s3_counts(rule):
    rng = random.Random(rule)
    checked = 0
    for _ in range(150):
        try:
            d, params = random_application(rule, rng)
            _, step = apply_rule(d, rule, check_pi1=True, **params)
        except RuleError:
            continue
        checked += step.pi1 != "skipped"
    assert checked > 5
