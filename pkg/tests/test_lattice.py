import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liftchar.lattice import (
    DimensionMismatch,
    FiniteAbelianGroup,
    IntegerLattice,
    NotSublattice,
    det,
    dual_pairing,
    f2_echelon,
    f2_solve,
    identity,
    invariant_factors,
    inverse_unimodular,
    kernel_basis,
    lattice_index,
    matfreeze,
    matmul,
    quotient,
    smith_normal_form,
    solve_integer,
)

small_matrix = st.integers(1, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda m: st.lists(
            st.lists(st.integers(-9, 9), min_size=m, max_size=m),
            min_size=n,
            max_size=n,
        )
    )
)


def is_unimodular(m):
    return abs(det(m)) == 1


class TestSmithNormalForm:
    def test_diag_2_3(self):
        # brute-force oracle over unimodular row/column operations is the
        # divisibility chain itself: gcd 1, product 6
        u, d, v = smith_normal_form([[2, 0], [0, 3]])
        assert d == ((1, 0), (0, 6))
        assert matmul(matmul(u, [[2, 0], [0, 3]]), v) == d

    def test_identity(self):
        u, d, v = smith_normal_form(identity(3))
        assert d == identity(3)

    def test_zero(self):
        u, d, v = smith_normal_form([[0]])
        assert d == ((0,),)

    def test_empty(self):
        assert smith_normal_form([]) == ((), (), ())

    @settings(max_examples=120, deadline=None)
    @given(small_matrix)
    def test_exact_factorization(self, m):
        m = matfreeze(m)
        u, d, v = smith_normal_form(m)
        assert matmul(matmul(u, m), v) == d
        assert is_unimodular(u) and is_unimodular(v)
        diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
        for a, b in zip(diag, diag[1:]):
            if a != 0:
                assert b % a == 0
            else:
                assert b == 0
        for i in range(len(d)):
            for j in range(len(d[0])):
                if i != j:
                    assert d[i][j] == 0


class TestSolve:
    def test_simple(self):
        a = matfreeze([[2, 1], [0, 3]])
        x = solve_integer(a, (2, 4))
        assert x is not None
        assert x == (1, 1)

    def test_no_solution(self):
        assert solve_integer(matfreeze([[2, 0], [0, 2]]), (1, 0)) is None

    def test_kernel(self):
        k = kernel_basis(matfreeze([[1, 2], [2, 4], [0, 0]]))
        assert len(k) == 2
        for row in k:
            assert row[0] * 1 + row[1] * 2 + row[2] * 0 == 0

    def test_inverse_unimodular(self):
        m = matfreeze([[1, 1], [0, 1]])
        assert matmul(m, inverse_unimodular(m)) == identity(2)


class TestQuotient:
    def test_doubling(self):
        z2 = IntegerLattice.standard(2)
        g = quotient(z2, z2.scaled(2))
        assert g.invariant_factors == (2, 2)
        assert g.order == 4

    def test_checkerboard(self):
        # Z^2 / <(1,1),(1,-1)>: exhaustive coset enumeration over the
        # fundamental domain {0,1}^2 identifies (0,0)~(1,1), (1,0)~(0,1)
        z2 = IntegerLattice.standard(2)
        sub = IntegerLattice.from_rows([[1, 1], [1, -1]])
        g = quotient(z2, sub)
        assert g.invariant_factors == (2,)
        assert g.project((0, 0)) == g.project((1, 1))
        assert g.project((1, 0)) == g.project((0, 1))
        assert g.project((1, 0)) != g.project((0, 0))

    def test_trivial(self):
        lat = IntegerLattice.from_rows([[3, 1], [1, 2]])
        g = quotient(lat, lat)
        assert g.invariant_factors == ()
        assert g.order == 1

    def test_not_sublattice(self):
        with pytest.raises(NotSublattice):
            quotient(IntegerLattice.standard(2).scaled(2), IntegerLattice.standard(2))

    def test_functorial_index(self):
        rng = random.Random(7)
        for _ in range(25):
            n = rng.randrange(1, 4)
            l1 = IntegerLattice.standard(n)
            m2 = matfreeze(
                [[rng.randrange(-3, 4) + (2 if i == j else 0) for j in range(n)] for i in range(n)]
            )
            if det(m2) == 0:
                continue
            l2 = IntegerLattice.from_rows(m2)
            if any(not l1.contains(r) for r in l2.basis):
                continue
            l3 = l2.scaled(2)
            assert lattice_index(l1.basis, l3.basis) == lattice_index(
                l1.basis, l2.basis
            ) * lattice_index(l2.basis, l3.basis)


class TestPairingAndGroups:
    def test_root_with_own_coroot(self):
        assert dual_pairing((2,), (1,)) == 2

    def test_a2_off_diagonal(self):
        # simple roots of A2 in weight coordinates, coroots in the dual basis
        alpha1 = (2, -1)
        alpha2_covec = (0, 1)
        assert dual_pairing(alpha1, alpha2_covec) == -1

    def test_zero(self):
        assert dual_pairing((0, 0), (5, -3)) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            dual_pairing((1, 2), (1,))

    def test_characters(self):
        g = quotient(IntegerLattice.standard(1), IntegerLattice.standard(1).scaled(4))
        assert g.invariant_factors == (4,)
        chars = g.characters()
        assert len(chars) == 4
        val = chars[1].value(g.project((1,)))
        assert abs(val - 1j) < 1e-15

    def test_element_order(self):
        g = FiniteAbelianGroup(invariant_factors=(2, 4))
        assert g.element_order((1, 0)) == 2
        assert g.element_order((1, 1)) == 4
        assert g.element_order((0, 0)) == 1


class TestF2:
    def test_echelon_and_solve(self):
        basis = f2_echelon([(1, 1, 0), (0, 1, 1), (1, 0, 1)])
        assert len(basis) == 2
        combo = f2_solve([(1, 1, 0), (0, 1, 1)], (1, 0, 1))
        assert combo == (1, 1)
        assert f2_solve([(1, 1, 0)], (0, 0, 1)) is None

    def test_invariant_factors_cartan_a3(self):
        cartan_a3 = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
        assert invariant_factors(cartan_a3) == (1, 1, 4)
