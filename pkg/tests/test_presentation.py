from hypothesis import given, settings
from hypothesis import strategies as st

from gcsurgery.presentation import (
    GroupPresentation,
    abelianization,
    canonical_cyclic,
    commutator,
    count_homomorphisms,
    cyclic_group,
    free_reduce,
    invert,
    is_power_relator,
    presentations_match,
    surface_times_circle,
    symmetric_group,
    tietze_simplify,
)
from gcsurgery.smith import AbelianGroup

S3 = symmetric_group(3)

words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12)


@given(words)
def test_free_reduce_idempotent_and_inverse(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert free_reduce(tuple(r) + invert(r)) == ()


@given(st.lists(words, min_size=1, max_size=4))
@settings(max_examples=150, deadline=None)
def test_tietze_preserves_abelianization_and_s3_count(rels):
    g = GroupPresentation(3, tuple(tuple(r) for r in rels))
    s = tietze_simplify(g)
    assert abelianization(s) == abelianization(g)
    assert count_homomorphisms(s, S3) == count_homomorphisms(g, S3)


def test_count_homomorphisms_known_values():
    # Hom(Z, S3) = 6, Hom(Z/2, S3) = 4 (identity and three transpositions),
    # Hom(Z/3, S3) = 3, Hom(Z^2, S3) = number of commuting pairs = 18
    assert count_homomorphisms(cyclic_group(0), S3) == 6
    assert count_homomorphisms(cyclic_group(2), S3) == 4
    assert count_homomorphisms(cyclic_group(3), S3) == 3
    z2 = GroupPresentation(2, (commutator((1,), (2,)),))
    assert count_homomorphisms(z2, S3) == 18


def test_surface_group_abelianization():
    for g in range(5):
        assert abelianization(surface_times_circle(g)) == AbelianGroup(2 * g + 1)


def test_presentations_match_relabelling():
    a = surface_times_circle(3)
    # rename u_i <-> v_i and invert c
    perm = {1: -1, 2: 3, 3: 2, 4: 5, 5: 4, 6: 7, 7: 6}
    img = lambda x: perm[abs(x)] * (1 if x > 0 else -1)
    b = GroupPresentation(7, tuple(tuple(img(x) for x in r) for r in a.relators[::-1]))
    assert presentations_match(a, b)
    wrong = GroupPresentation(7, a.relators[:-1] + ((2, 3, -2, -3, 4, 5, -5, -4, 6, 7, -6, -7),))
    assert not presentations_match(a, wrong)


def test_power_relator_and_canonical_form():
    assert is_power_relator((2, 2, 2)) == 3
    assert is_power_relator((1, 2)) == 0
    assert canonical_cyclic((2, 1, -2)) in ((1,), (-1,))
    assert canonical_cyclic((1, 2)) == canonical_cyclic((-1, -2))
