import random

import pytest

from liftchar.lattice import dot, matfreeze, vecmat, vscale
from liftchar.rootdata import (
    PositiveSystem,
    UnsupportedType,
    build_root_datum,
    center_torsion,
    default_positive_roots,
    is_acceptable,
    rho_parts,
    weyl_generate,
)


def gl_datum(n):
    simple_roots = [
        tuple(1 if j == i else (-1 if j == i + 1 else 0) for j in range(n))
        for i in range(n - 1)
    ]
    return build_root_datum(
        [("A", n - 1)],
        lattice="explicit",
        central_torus_rank=1,
        simple_roots=simple_roots,
        simple_coroots=simple_roots,
    )


class TestBuild:
    def test_a1_simply_connected(self):
        rd = build_root_datum([("A", 1)])
        assert rd.rank == 1
        assert set(rd.roots) == {(2,), (-2,)}
        assert rd.coroot((2,)) == (1,)
        assert dot((2,), rd.coroot((2,))) == 2

    def test_rejects_type_c(self):
        with pytest.raises(UnsupportedType):
            build_root_datum([("C", 2)])

    def test_d4_center_order(self):
        rd = build_root_datum([("D", 4)])
        z = center_torsion(rd)
        assert z.order == 4
        assert z.invariant_factors == (2, 2)

    def test_root_counts(self):
        for factors, count in [
            ([("A", 2)], 6),
            ([("D", 3)], 24 // 2 * 2 - 12),  # D3 = A3: 12 roots
            ([("D", 4)], 24),
            ([("G", 2)], 12),
            ([("A", 1), ("A", 1)], 4),
        ]:
            rd = build_root_datum(factors)
            assert rd.nroots == count

    def test_gl_n(self):
        rd = gl_datum(3)
        assert rd.rank == 3
        assert rd.nroots == 6
        assert (1, -1, 0) in rd.roots

    def test_g2_lengths(self):
        rd = build_root_datum([("G", 2)])
        longs = [a for a in rd.roots if rd.is_long(a)]
        assert len(longs) == 6

    def test_simply_laced_all_long(self):
        rd = build_root_datum([("A", 2)])
        assert all(rd.is_long(a) for a in rd.roots)

    def test_pairing_convention(self):
        rd = build_root_datum([("A", 2)])
        a1, a2 = rd.simple_roots()
        assert rd.pairing(a1, a1) == 2
        assert rd.pairing(a1, a2) == -1


class TestAcceptable:
    def test_sl2(self):
        assert is_acceptable(build_root_datum([("A", 1)]))

    def test_psl2(self):
        assert not is_acceptable(build_root_datum([("A", 1)], lattice="adjoint"))

    def test_torus(self):
        rd = build_root_datum([], central_torus_rank=2)
        assert is_acceptable(rd)

    def test_gl2(self):
        assert is_acceptable(gl_datum(2))


class TestRhoParts:
    def test_all_real(self):
        rd = build_root_datum([("A", 1)])
        ps = PositiveSystem.from_roots(rd, [(2,)])
        parts = rho_parts(ps, lambda a: "real")
        assert parts["rho_r"] == parts["rho"]
        assert parts["rho_i"] == (0,)

    def test_all_imaginary(self):
        rd = build_root_datum([("A", 1)])
        ps = PositiveSystem.from_roots(rd, [(2,)])
        parts = rho_parts(ps, lambda a: "imaginary_noncompact")
        assert parts["rho_i"] == parts["rho"]

    def test_swap_complex(self):
        rd = build_root_datum([("A", 1), ("A", 1)])
        ps = PositiveSystem.from_roots(rd, [(2, 0), (0, 2)])
        parts = rho_parts(ps, lambda a: "complex")
        assert parts["rho_cx"] == parts["rho"]
        assert parts["rho_r"] == (0, 0)


class TestWeyl:
    def test_a1(self):
        rd = build_root_datum([("A", 1)])
        w = weyl_generate(rd)
        assert w.order == 2
        assert len(w.elements()) == 2

    def test_a2_closure(self):
        rd = build_root_datum([("A", 2)])
        w = weyl_generate(rd)
        assert w.order == 6
        assert len(w.elements()) == 6

    def test_e7_lazy(self):
        rd = build_root_datum([("E", 7)])
        w = weyl_generate(rd, max_order=10 ** 6)
        assert not w.enumerated
        assert w.order == 2903040
        # membership still works through the descent algorithm
        s0 = w.simple_reflection(0)
        assert w.contains_permutation(s0.perm)

    def test_membership_rejects_diagram_automorphism(self):
        rd = build_root_datum([("A", 2)])
        w = weyl_generate(rd)
        # -1 is not in W(A2); it induces the nontrivial diagram automorphism
        neg = tuple(rd.root_index(vscale(-1, a)) for a in rd.roots)
        assert not w.contains_permutation(neg)

    def test_reflection_word(self):
        rd = build_root_datum([("A", 2)])
        w = weyl_generate(rd)
        a1, a2 = rd.simple_roots()
        theta = tuple(x + y for x, y in zip(a1, a2))
        s = w.reflection(theta)
        assert s.perm[rd.root_index(theta)] == rd.root_index(vscale(-1, theta))
        assert (s * s).is_identity()
        assert s.sign() == -1

    def test_pairing_invariance(self):
        rd = build_root_datum([("D", 3)])
        w = weyl_generate(rd)
        rng = random.Random(3)
        els = w.elements()
        for _ in range(20):
            g = rng.choice(els)
            i, j = rng.randrange(rd.nroots), rng.randrange(rd.nroots)
            a, b = rd.roots[i], rd.roots[j]
            ga, gb = rd.roots[g.perm[i]], rd.roots[g.perm[j]]
            assert dot(ga, rd.coroot(gb)) == dot(a, rd.coroot(b))

    def test_rho_equivariance(self):
        rd = build_root_datum([("A", 2)])
        w = weyl_generate(rd)
        pos = default_positive_roots(rd)
        posidx = frozenset(rd.root_index(a) for a in pos)
        rho = rd.rho(pos)
        for g in w.elements():
            m = w.matrix_on_characters(g)
            rho_w = rd.rho([rd.roots[g.perm[i]] for i in posidx])
            assert tuple(vecmat(rho, m)) == rho_w


class TestCenter:
    def test_sc_a3(self):
        z = center_torsion(build_root_datum([("A", 3)]))
        assert z.invariant_factors == (4,)

    def test_sc_e7(self):
        z = center_torsion(build_root_datum([("E", 7)]))
        assert z.invariant_factors == (2,)

    def test_adjoint(self):
        z = center_torsion(build_root_datum([("A", 3)], lattice="adjoint"))
        assert z.order == 1

    def test_gl2_derived(self):
        z = center_torsion(gl_datum(2))
        assert z.invariant_factors == (2,)
