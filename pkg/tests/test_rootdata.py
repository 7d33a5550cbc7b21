import math
from fractions import Fraction

import pytest

from qpchar.rootdata import (
    DominantAffineWeight,
    Weight,
    cartan_matrix,
    epsilon,
    fundamental_weight,
    inner_product,
    min_eigenvalue_lower_bound,
    positive_roots,
    root_coords,
    simple_root,
    structure_constant,
    weight_from_fundamental,
)


def test_cartan_matrix_a2():
    assert cartan_matrix(2) == ((2, -1), (-1, 2))


def test_cartan_matrix_rank_one():
    assert cartan_matrix(1) == ((2,),)


def test_cartan_matrix_entry():
    assert cartan_matrix(4)[1][2] == -1


def test_cartan_matrix_invalid_rank():
    with pytest.raises(ValueError):
        cartan_matrix(0)


def test_cartan_matrix_shape():
    for n in range(1, 7):
        A = cartan_matrix(n)
        for i in range(n):
            for j in range(n):
                assert A[i][j] == A[j][i]
                if i == j:
                    assert A[i][j] == 2
                else:
                    assert A[i][j] == (-1 if abs(i - j) == 1 else 0)


def test_positive_roots_count_and_support():
    for n in range(1, 7):
        roots = positive_roots(n)
        assert len(roots) == n * (n + 1) // 2
        for root in roots:
            coords = root_coords(root, n)
            support = [i for i, c in enumerate(coords) if c]
            assert all(c in (0, 1) for c in coords)
            assert support == list(range(support[0], support[-1] + 1))


def test_inner_product_simple_roots():
    assert inner_product(simple_root(1, 2), simple_root(2, 2)) == -1


def test_inner_product_fundamental_vs_simple():
    assert inner_product(fundamental_weight(1, 3), simple_root(1, 3)) == 1
    for n in (2, 3, 4):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                assert inner_product(
                    fundamental_weight(i, n), simple_root(j, n)
                ) == (1 if i == j else 0)


def test_inner_product_fundamental_pair():
    assert inner_product(fundamental_weight(1, 2), fundamental_weight(1, 2)) == Fraction(2, 3)


def test_inner_product_fundamental_closed_form():
    for n in range(1, 7):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                expect = Fraction(min(i, j)) - Fraction(i * j, n + 1)
                got = inner_product(fundamental_weight(i, n), fundamental_weight(j, n))
                assert got == expect


def test_inner_product_rank_mismatch():
    with pytest.raises(ValueError):
        inner_product(simple_root(1, 2), simple_root(1, 3))


def test_weight_fundamental_round_trip():
    import random

    rng = random.Random(7)
    for n in range(1, 6):
        for _ in range(20):
            w = tuple(rng.randint(-4, 4) for _ in range(n))
            weight = weight_from_fundamental(w, n)
            assert weight.fundamental_coords() == tuple(Fraction(x) for x in w)


def test_epsilon_zero_argument():
    for n in (1, 2, 3):
        assert epsilon((0,) * n, tuple(1 for _ in range(n))) == 1


def test_epsilon_diagonal_convention():
    assert epsilon((1, 0), (1, 0)) == 1


def test_epsilon_commutator_pair():
    a1 = root_coords((1, 1), 2)
    a2 = root_coords((2, 2), 2)
    assert epsilon(a1, a2) * epsilon(a2, a1) == -1


def test_epsilon_commutator_identity_all_simple_pairs():
    for n in range(1, 7):
        A = cartan_matrix(n)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                ai = root_coords((i, i), n)
                aj = root_coords((j, j), n)
                assert epsilon(ai, aj) * epsilon(aj, ai) == (-1) ** A[i - 1][j - 1]


def test_epsilon_bimultiplicative():
    import random

    rng = random.Random(3)
    for n in (2, 3, 4):
        for _ in range(30):
            a = tuple(rng.randint(-2, 2) for _ in range(n))
            b = tuple(rng.randint(-2, 2) for _ in range(n))
            c = tuple(rng.randint(-2, 2) for _ in range(n))
            ab = tuple(x + y for x, y in zip(a, b))
            assert epsilon(ab, c) == epsilon(a, c) * epsilon(b, c)
            assert epsilon(c, ab) == epsilon(c, a) * epsilon(c, b)


def test_epsilon_requires_root_lattice_weight():
    with pytest.raises(ValueError):
        epsilon(fundamental_weight(1, 2), simple_root(1, 2))


def test_structure_constant_adjacent():
    assert structure_constant((1, 1), (2, 2), 2) in (-1, 1)
    assert structure_constant((1, 1), (2, 2), 2) != 0


def test_structure_constant_same_root():
    assert structure_constant((1, 1), (1, 1), 2) == 0


def test_structure_constant_interval_concatenation():
    assert structure_constant((1, 2), (3, 3), 3) != 0
    assert structure_constant((3, 3), (1, 2), 3) != 0


def test_structure_constant_non_root_sum():
    assert structure_constant((1, 2), (2, 3), 3) == 0


def test_structure_constant_invalid_input():
    with pytest.raises(ValueError):
        structure_constant((2, 1), (1, 1), 3)


def test_structure_constant_antisymmetry():
    for n in (2, 3, 4):
        for r1 in positive_roots(n):
            for r2 in positive_roots(n):
                c12 = structure_constant(r1, r2, n)
                c21 = structure_constant(r2, r1, n)
                assert c12 == -c21 or (c12 == 0 and c21 == 0)


def test_dominant_affine_weight():
    w = DominantAffineWeight((1, 0, 2))
    assert w.n == 2
    assert w.level == 3
    assert w.two_term() == (1, 2)
    assert DominantAffineWeight((2, 0, 0)).two_term() == (2, None)
    assert DominantAffineWeight((1, 1, 1)).two_term() is None
    with pytest.raises(ValueError):
        DominantAffineWeight((1, -1, 1))
    with pytest.raises(ValueError):
        DominantAffineWeight((0, 0, 0))


def test_min_eigenvalue_lower_bound_certified_and_tight():
    for n in range(1, 8):
        lb = min_eigenvalue_lower_bound(n)
        true = 2 - 2 * math.cos(math.pi / (n + 1))
        assert 0 < lb <= true + 1e-12
        assert float(lb) > 0.5 * true
