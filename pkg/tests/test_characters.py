from fractions import Fraction

import pytest

from helpers import (
    glnr_split,
    psl2r_split,
    sl2r_split,
    spin42_compact,
    su22_compact,
    u11_compact,
)
from liftchar.cartan import enumerate_cartans, special_positive_system
from liftchar.characters import (
    CartanCharacter,
    CharacterError,
    Cond1Fails,
    Cond2Fails,
    GenuineCharacterLabel,
    InternalInconsistency,
    LiftingData,
    NonIntegralPairing,
    ParityFails,
    TorusCharacter,
    cartan_key,
    cayley_character,
    cayley_genuine,
    component_quotient_order,
    constants,
    gamma_factor,
    kernel_class_generators,
    lambda_character,
    make_lifting_data,
    torus_lift,
)
from liftchar.cover import CoverSpec, QuotientSpec, validate_triple
from liftchar.lattice import matfreeze

HALF = Fraction(1, 2)


def sl2_triple(c=()):
    return validate_triple(sl2r_split(), CoverSpec(), QuotientSpec(tuple(c)))


def sl2_ld(c=()):
    from liftchar.characters import canonical_lifting_data

    return canonical_lifting_data(sl2_triple(c))


def gl_ld(n):
    from helpers import gl_triple
    from liftchar.characters import canonical_lifting_data

    return canonical_lifting_data(gl_triple(n))


class TestTorusCharacter:
    def test_eval_on_components(self):
        t = sl2_triple()
        cobar = t.cobar_torus(t.split_class)
        chi = TorusCharacter(cobar, (3,), (HALF,))
        assert chi.eval_skeleton((1,)) == -1

    def test_compact_integrality(self):
        t = validate_triple(u11_compact(), CoverSpec(), QuotientSpec())
        cobar = t.cobar_torus(t.fundamental_class)
        TorusCharacter(cobar, (2, 1), ())
        with pytest.raises(CharacterError):
            TorusCharacter(cobar, (HALF, 0), ())

    def test_xi_consistency_with_d(self):
        # at PSL(2,R) the Gamma generator is half the coroot; exp(pi*i/2...)
        t = validate_triple(sl2r_split(), CoverSpec(), QuotientSpec(((1,),)))
        cobar = t.cobar_torus(t.split_class)
        chi = TorusCharacter(cobar, (2,), (0,))
        assert chi.eval_skeleton_phase(cobar.lat.from_ambient((Fraction(1, 2),))) == 0


class TestMakeLiftingData:
    def test_sl2_canonical(self):
        ld = sl2_ld()
        assert ld.mu == (0,)

    def test_gl_quadratic(self):
        for n in (2, 3):
            ld = gl_ld(n)
            assert all(abs(complex(m)) < 1e-12 for m in ld.mu)

    def test_cond1_rejected(self):
        t = sl2_triple()
        cobar = t.cobar_torus(t.split_class)
        chi_s = TorusCharacter(cobar, (2,), (0,))
        with pytest.raises(Cond1Fails):
            make_lifting_data(t, (0,), chi_s)

    def test_cond2_rejected(self):
        t = sl2_triple()
        cobar = t.cobar_torus(t.split_class)
        chi_s = TorusCharacter(cobar, (1,), (HALF,))
        with pytest.raises(Cond2Fails):
            make_lifting_data(t, (0,), chi_s)


class TestGammaFactor:
    def test_sl2_compact_chi(self):
        ld = sl2_ld()
        enum = ld.triple.enumeration
        compact = enum.classes[enum.fundamental]
        chi, lam, mu = gamma_factor(ld, compact)
        cobar = ld.triple.cobar_torus(compact)
        m_coords = cobar.lat.from_ambient((1,))
        assert chi.eval(m_coords) == 1

    def test_lambda_is_e_minus_rho_on_derived(self):
        for ld in [sl2_ld(), gl_ld(3)]:
            for cc in ld.triple.enumeration.classes:
                ps = special_positive_system(cc)
                lam = lambda_character(ld, cc, ps)
                rho = ps.rho()
                # on -I-type classes inside the derived group
                rd = ld.triple.datum
                from liftchar.cartan import central_class_generators
                from liftchar.cover import derived_membership_f2
                from liftchar.lattice import F2Space

                derived = F2Space(rd.rank, derived_membership_f2(rd))
                for y in central_class_generators(rd, cc.theta):
                    if not derived.contains(y):
                        continue
                    want = Fraction(-sum(a * b for a, b in zip(rho, y)), 1) / 1
                    got = lam(y)
                    assert got == (Fraction(want) / 2) % 1

    def test_gamma_squared_is_lambda(self):
        # Gamma(h, g~)^2 = lambda(phi(h)): on Gamma(Hbar) classes phi(h) = 1
        # so chi-values are signs; exercised via chi(m)^2 = 1
        ld = gl_ld(2)
        for cc in ld.triple.enumeration.classes:
            chi, lam, _ = gamma_factor(ld, cc)
            cobar = ld.triple.cobar_torus(cc)
            for g in cobar.gamma_coord_gens():
                assert chi.eval_phase(g) in (Fraction(0), HALF)

    def test_phi_plus_dependence(self):
        # two special systems give chi's agreeing on component classes
        ld = gl_ld(3)
        enum = ld.triple.enumeration
        cc = enum.classes[enum.split]
        ps1 = special_positive_system(cc)
        neg = frozenset(
            cc.datum.root_index(tuple(-x for x in cc.datum.roots[i]))
            for i in ps1.indices
        )
        from liftchar.rootdata import PositiveSystem

        ps2 = PositiveSystem(cc.datum, neg)
        chi1, _, _ = gamma_factor(ld, cc, ps1)
        chi2, _, _ = gamma_factor(ld, cc, ps2)
        cobar = ld.triple.cobar_torus(cc)
        for g in cobar.gamma_coord_gens():
            assert chi1.eval_phase(g) == chi2.eval_phase(g)


class TestCayley:
    def test_character_round_trip(self):
        ld = sl2_ld()
        split = ld.triple.split_class
        chi = TorusCharacter(split.torus(), (2,), (0,))
        down = cayley_character(chi, split, (2,), "to_imaginary")
        assert len(down) == 1
        compact = split.inverse_cayley((2,))
        back = cayley_character(down[0], compact, (2,), "to_real")
        assert any(b.d == chi.d and b.xi == chi.xi for b in back)

    def test_gate_rejects(self):
        ld = sl2_ld()
        split = ld.triple.split_class
        chi = TorusCharacter(split.torus(), (2,), (HALF,))
        assert cayley_character(chi, split, (2,), "to_imaginary") == []

    def test_nonintegral_pairing(self):
        split = sl2_triple().split_class
        chi = TorusCharacter(split.torus(), (HALF,), (0,))
        with pytest.raises(NonIntegralPairing):
            cayley_character(chi, split, (2,), "to_imaginary")

    def test_type_ii_two_extensions(self):
        # PSL(2,R): the real root has type II, so two extensions exist
        t = validate_triple(sl2r_split(), CoverSpec(), QuotientSpec(((1,),)))
        split = t.split_class
        compact = split.inverse_cayley((2,))
        cobar_compact = t.cobar_torus(compact)
        psi = TorusCharacter(cobar_compact, (2,), () if not cobar_compact.gamma_coord_gens() else (0,))
        ups = cayley_character(psi, compact, (2,), "to_real")
        assert len(ups) == 2

    def test_genuine_round_trip(self):
        ld = sl2_ld()
        split = ld.triple.split_class
        label = GenuineCharacterLabel(cartan_key(split), (HALF,), ())
        down = cayley_genuine(label, split, (2,), "to_imaginary")
        compact = split.inverse_cayley((2,))
        up = cayley_genuine(down, compact, (2,), "to_real")
        assert up.dchi_tilde == label.dchi_tilde

    def test_genuine_parity_gate(self):
        ld = sl2_ld()
        split = ld.triple.split_class
        label = GenuineCharacterLabel(cartan_key(split), (1,), ())
        from liftchar.characters import HalfIntegralityFails

        with pytest.raises(HalfIntegralityFails):
            cayley_genuine(label, split, (2,), "to_imaginary")


class TestTorusLift:
    def test_sl2_spherical_two_labels(self):
        ld = sl2_ld()
        split = ld.triple.split_class
        cobar = ld.triple.cobar_torus(split)
        nu = Fraction(3, 7)
        psi = TorusCharacter(cobar, (nu,), (0,))
        labels = torus_lift(ld, split, psi)
        assert len(labels) == 2
        assert all(l.dchi_tilde == (nu / 2,) for l in labels)
        assert len({l.eta for l in labels}) == 2

    def test_sl2_sign_character_empty(self):
        ld = sl2_ld()
        split = ld.triple.split_class
        cobar = ld.triple.cobar_torus(split)
        psi = TorusCharacter(cobar, (0,), (HALF,))
        assert torus_lift(ld, split, psi) == []

    def test_psl2_single_label(self):
        t = validate_triple(sl2r_split(), CoverSpec(), QuotientSpec(((1,),)))
        cobar = t.cobar_torus(t.split_class)
        chi_s = TorusCharacter(cobar, (1,), (0,))
        ld = make_lifting_data(t, (0,), chi_s)
        psi = TorusCharacter(cobar, (Fraction(2, 3),), (0,))
        labels = torus_lift(ld, t.split_class, psi)
        assert len(labels) == 1

    def test_kernel_generators(self):
        t = sl2_triple()
        gens = kernel_class_generators(t, t.split_class)
        assert len(gens) == 1


class TestConstants:
    def test_sl2(self):
        ld = sl2_ld()
        enum = ld.triple.enumeration
        compact = enum.classes[enum.fundamental]
        split = enum.classes[enum.split]
        assert constants(ld.triple, split) == (1, 1)
        assert constants(ld.triple, compact) == (2, 2)

    def test_psl2(self):
        t = validate_triple(sl2r_split(), CoverSpec(), QuotientSpec(((1,),)))
        compact = t.fundamental_class
        assert constants(t, compact) == (1, 1)

    def test_gl_all_one(self):
        from helpers import gl_triple

        for n in (2, 3, 4):
            t = gl_triple(n)
            cs = [constants(t, cc) for cc in t.enumeration.classes]
            assert all(c[1] == 1 for c in cs)

    def test_u11_estimate_equality(self):
        t = validate_triple(u11_compact(), CoverSpec(), QuotientSpec())
        split_rank_s = t.split_class.split_rank
        for cc in t.enumeration.classes:
            c, big_c = constants(t, cc)
            assert big_c == 2 ** (split_rank_s - cc.split_rank)

    def test_powers_of_two_and_monotone(self):
        for t in [
            sl2_triple(),
            validate_triple(su22_compact(), CoverSpec(), QuotientSpec()),
            validate_triple(spin42_compact(), CoverSpec(), QuotientSpec()),
        ]:
            cs = {i: constants(t, cc) for i, cc in enumerate(t.enumeration.classes)}
            c_s = cs[t.enumeration.split][0]
            c_f = cs[t.enumeration.fundamental][0]
            for i, (c, bc) in cs.items():
                assert c & (c - 1) == 0
                assert c_s <= c <= c_f
                assert 1 <= bc <= 2 ** (
                    t.split_class.split_rank - t.enumeration.classes[i].split_rank
                )
