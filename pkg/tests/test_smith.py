import random

from hypothesis import given, settings
from hypothesis import strategies as st

from gcsurgery.smith import (
    AbelianGroup,
    cokernel,
    determinant,
    normalize_torsion,
    smith_normal_form,
)

from conftest import determinantal_divisors, naive_det

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@given(matrices)
@settings(max_examples=300, deadline=None)
def test_snf_matches_determinantal_divisors(m):
    assert smith_normal_form(m).divisors == determinantal_divisors(m)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_snf_divisibility_and_transforms(m):
    sf = smith_normal_form(m, transforms=True)
    assert sf.divisibility_ok()
    # U m V is diagonal with the divisors on it
    u, v = sf.left, sf.right
    rows, cols = len(m), len(m[0])
    prod = [[sum(u[i][k] * m[k][l] * v[l][j] for k in range(rows) for l in range(cols))
             for j in range(cols)] for i in range(rows)]
    for i in range(rows):
        for j in range(cols):
            expected = sf.divisors[i] if i == j else 0
            assert prod[i][j] == expected


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                       min_size=n, max_size=n)))
@settings(max_examples=200, deadline=None)
def test_bareiss_matches_cofactor_expansion(m):
    assert determinant(m) == naive_det(m)


def test_square_cokernel_order_is_determinant():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 4)
        m = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        g = cokernel(m)
        det = abs(naive_det(m))
        if det == 0:
            assert g.rank >= 1
        else:
            assert g.rank == 0 and g.order == det


def test_normalize_torsion_chinese_remainder():
    assert normalize_torsion([2, 3]) == (6,)
    assert normalize_torsion([2, 4]) == (2, 4)
    assert normalize_torsion([4, 6, 1]) == (2, 12)
    assert AbelianGroup(1, normalize_torsion([3, 3])).torsion == (3, 3)


def test_cokernel_examples():
    assert cokernel([[0]]) == AbelianGroup(1)
    assert cokernel([[2, 0], [0, 3]]) == AbelianGroup(0, (6,))
    assert cokernel([[0, 1], [1, 0]]) == AbelianGroup()
    assert str(AbelianGroup(2, (2, 4))) == "Z^2 + Z/2 + Z/4"
