"""Characters of real tori, genuine character labels, transfer-factor
characters, torus lifting, and the normalizing constants.

Characters are evaluated exactly on the order-<=2 skeleton of a torus: a
point exp(pi*i*Y) decomposes as a component-group part times a 2-torsion
point of the identity component, the first evaluated through stored sign
data and the second through differential pairings.  Genuine characters of
the cover are never realized as functions; only their differentials,
central twists, and square values enter, which the structure theory pins
down on the classes we ever evaluate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cartan import (
    IMAGINARY_COMPACT,
    IMAGINARY_NONCOMPACT,
    REAL,
    COMPLEX,
    CartanClass,
    RealTorus,
    _f2_sum,
    as_real_fraction,
    central_class_generators,
    special_positive_system,
    zeta_cx_value,
)
from .cover import (
    AdmissibleTriple,
    PhiData,
    phi_on_cartan,
    square_form_value,
)
from .lattice import (
    F2Space,
    FiniteAbelianGroup,
    Vector,
    dot,
    f2_echelon,
    f2_solve,
    kernel_basis,
    matfreeze,
    phase_to_complex,
    solve_rational,
    vadd,
    vscale,
    vsub,
)
from .rootdata import PositiveSystem


class CharacterError(Exception):
    pass


class Cond1Fails(CharacterError):
    pass


class Cond2Fails(CharacterError):
    pass


class ParityFails(CharacterError):
    pass


class NonIntegralPairing(CharacterError):
    pass


class HalfIntegralityFails(CharacterError):
    pass


class TypeICompatibilityFails(CharacterError):
    pass


class InternalInconsistency(CharacterError):
    pass


class UnreachableCartan(CharacterError):
    pass


Phase = Fraction  # value exp(2*pi*i*t) stored as t mod 1


def _phase(t) -> Phase:
    return Fraction(t) % 1


def _cpair(d: Sequence, w: Sequence):
    """Pairing of a differential with a vector; complex parts allowed."""
    total = 0
    for a, b in zip(d, w):
        total = total + a * Fraction(b)
    return total


def _real_phase_of_pairing(val) -> Phase:
    """Phase exp(pi*i*val) for a value that must be real rational."""
    v = as_real_fraction(val)
    return _phase(v / 2)


def _half(x):
    if isinstance(x, complex):
        return x / 2
    return Fraction(x) / 2


# ---------------------------------------------------------------------------
# torus characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusCharacter:
    """Character of the real points of a torus.

    d is the differential (entries int, Fraction, or complex); xi lists the
    value phases on the canonical Gamma generators of the torus (Fraction t
    meaning exp(2*pi*i*t), each 0 or 1/2 for order-2 values).
    """

    torus: RealTorus
    d: Tuple
    xi: Tuple[Phase, ...]

    def __post_init__(self):
        gens = self.torus.gamma_coord_gens()
        if len(gens) != len(self.xi):
            raise CharacterError("xi must match the Gamma generators")
        object.__setattr__(self, "xi", tuple(_phase(x) for x in self.xi))
        if any(x not in (Fraction(0), Fraction(1, 2)) for x in self.xi):
            raise CharacterError("xi values must be +-1")
        self.validate()

    def validate(self):
        t = self.torus
        # the differential must be integral against the theta-fixed lattice
        for row in t._fixed:
            amb = t.lat.to_ambient(row)
            val = as_real_fraction(_cpair(self.d, amb))
            if val.denominator != 1:
                raise CharacterError(
                    "differential is non-integral on a compact direction"
                )
        # consistency of xi with d across all F2 relations of the generators
        gens = t.gamma_coord_gens() + t.identity_component_gens()
        k = t.lat.dim
        rel_matrix = [g for g in gens]
        from .cartan import _f2_kernel

        for rel in _f2_kernel([tuple(g) for g in rel_matrix]) if rel_matrix else []:
            total = Fraction(0)
            ng = len(t.gamma_coord_gens())
            acc = (0,) * k
            for bit, g in zip(rel, gens):
                if bit % 2:
                    acc = tuple((a + b) % 2 for a, b in zip(acc, g))
            if any(acc):
                continue  # not a genuine relation mod 2L
            for i, bit in enumerate(rel[:ng]):
                if bit % 2:
                    total += self.xi[i]
            for i, bit in enumerate(rel[ng:]):
                if bit % 2:
                    w = t.lat.to_ambient(t._fixed[i])
                    total += _real_phase_of_pairing(_cpair(self.d, w))
            # the combination is trivial in the torus, so the value must be 1
            if _phase(total) != 0:
                raise CharacterError("xi values conflict with the differential")

    # -- evaluation -----------------------------------------------------------

    def eval_skeleton_phase(self, coords: Sequence[int]) -> Phase:
        t = self.torus
        dec = t.component_decomposition(coords)
        if dec is None:
            raise CharacterError(f"{coords} is not in the torus skeleton")
        gpart, fpart = dec
        total = Fraction(0)
        combo = f2_solve(t.gamma_coord_gens(), gpart) if any(gpart) else ()
        if combo is None:
            raise CharacterError("Gamma decomposition failed")
        for bit, x in zip(combo or (), self.xi):
            if bit % 2:
                total += x
        if any(fpart):
            w = t.lat.to_ambient(fpart)
            total += _real_phase_of_pairing(_cpair(self.d, w))
        return _phase(total)

    def eval_skeleton(self, coords: Sequence[int]) -> complex:
        return phase_to_complex(self.eval_skeleton_phase(coords))

    def twist(self, dshift: Sequence, xshift: Sequence[Phase]) -> "TorusCharacter":
        d = tuple(a + b for a, b in zip(self.d, dshift))
        xi = tuple(_phase(a + b) for a, b in zip(self.xi, xshift))
        return TorusCharacter(self.torus, d, xi)


@dataclass(frozen=True)
class GenuineCharacterLabel:
    """Label (differential, central twist, anchor) for a genuine character.

    eta indexes the dual of Z_0(H)/phi(Hbar) relative to the distinguished
    base label of the same lift; m_values optionally records chi(m-tilde)
    phases for type-I Cayley bookkeeping.
    """

    cartan_key: Tuple
    dchi_tilde: Tuple
    eta: Tuple[int, ...]
    anchor: str = "base"
    m_values: Tuple[Tuple[Vector, Phase], ...] = ()
    # phases of (psi/chi) on the Gamma(Hbar) generators: the restriction of
    # the lifted character to the lifts of phi(Gamma(Hbar)), kept so the
    # source character can be recovered exactly
    s_values: Tuple[Phase, ...] = ()

    def m_value(self, root) -> Optional[Phase]:
        for vec, val in self.m_values:
            if tuple(vec) == tuple(root):
                return val
        return None

    def with_m_value(self, root, phase) -> "GenuineCharacterLabel":
        return replace(
            self, m_values=self.m_values + ((tuple(root), _phase(phase)),)
        )


def cartan_key(cc: CartanClass) -> Tuple:
    return (cc.theta, cc.grading)


# ---------------------------------------------------------------------------
# lifting data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LiftingData:
    """The pair (chi_tilde_s, chi_s) on the maximally split Cartan."""

    triple: AdmissibleTriple
    dchi_tilde_s: Tuple
    chi_s: TorusCharacter
    positive_s: PositiveSystem
    mu: Tuple
    anchor: str = "ld"

    @property
    def split_class(self) -> CartanClass:
        return self.triple.split_class

    def rho_s(self) -> Tuple[Fraction, ...]:
        return self.positive_s.rho()


def make_lifting_data(
    triple: AdmissibleTriple,
    dchi_tilde_s: Sequence,
    chi_s: TorusCharacter,
    anchor: str = "ld",
    positive_s: Optional[PositiveSystem] = None,
) -> LiftingData:
    """Validate a candidate pair and compute lambda and mu."""
    split = triple.split_class
    rd = triple.datum
    ps = positive_s if positive_s is not None else special_positive_system(split)
    rho = ps.rho()

    # genuineness parities on the imaginary roots of the split Cartan
    for i in split.imaginary_indices():
        alpha = rd.roots[i]
        val = as_real_fraction(_cpair(dchi_tilde_s, rd.coroot(alpha)))
        kind = split.classify_root(alpha)
        if kind == IMAGINARY_COMPACT and val.denominator != 1:
            raise ParityFails(f"<dchi~, {alpha}^> must be integral")
        if kind == IMAGINARY_NONCOMPACT and (2 * val).denominator != 1:
            raise ParityFails(f"<dchi~, {alpha}^> must be half-integral")
        if kind == IMAGINARY_NONCOMPACT and val.denominator != 2:
            raise ParityFails(f"<dchi~, {alpha}^> must lie in Z + 1/2")

    # condition (a): d(chi) = 2 d(chi~) + rho against every coroot
    for cv in rd.coroots:
        lhs = _cpair(chi_s.d, cv)
        rhs = 2 * _cpair(dchi_tilde_s, cv) + _cpair(rho, cv)
        diff = lhs - rhs
        if abs(complex(diff)) > 1e-12:
            raise Cond1Fails(f"differential condition fails on coroot {cv}")

    # condition (b): chi_s = zeta_cx on the real coroot classes
    cobar = triple.cobar_torus(split)
    for i in split.real_indices():
        cv = rd.coroot(rd.roots[i])
        coords = cobar.lat.from_ambient(cv)
        if coords is None:
            raise InternalInconsistency("real coroot missing from the quotient lattice")
        got = chi_s.eval_skeleton_phase(coords)
        want = Fraction(0) if zeta_cx_value(split, cv) == 1 else Fraction(1, 2)
        if got != want:
            raise Cond2Fails(f"chi_s({cv}-class) != zeta_cx")

    mu = tuple(
        a - 2 * b - c for a, b, c in zip(chi_s.d, dchi_tilde_s, rho)
    )
    for cv in rd.coroots:
        if abs(complex(_cpair(mu, cv))) > 1e-12:
            raise InternalInconsistency("mu does not vanish on the coroots")
    ld = LiftingData(triple, tuple(dchi_tilde_s), chi_s, ps, mu, anchor)
    _validate_lambda_on_derived(ld)
    return ld


def canonical_lifting_data(
    triple: AdmissibleTriple,
    dchi_tilde_s: Optional[Sequence] = None,
    anchor: str = "ld",
) -> LiftingData:
    """Lifting data with chi_s = (chi~^2 e^rho)-shaped and xi solved from
    the zeta_cx condition on the real coroot classes."""
    split = triple.split_class
    rd = triple.datum
    ps = special_positive_system(split)
    rho = ps.rho()
    if dchi_tilde_s is None:
        dchi_tilde_s = (0,) * rd.rank
    d = tuple(2 * a + b for a, b in zip(dchi_tilde_s, rho))
    cobar = triple.cobar_torus(split)
    gens = cobar.gamma_coord_gens()
    rows = []
    vals = []
    seen = set()
    for i in split.real_indices():
        cv = rd.coroot(rd.roots[i])
        coords = cobar.lat.from_ambient(cv)
        if coords is None:
            raise InternalInconsistency("real coroot outside the quotient lattice")
        dec = cobar.component_decomposition(tuple(v % 2 for v in coords))
        if dec is None:
            raise InternalInconsistency("real coroot class outside the skeleton")
        gpart, fpart = dec
        combo = f2_solve(gens, gpart) if any(gpart) else (0,) * len(gens)
        if combo is None:
            raise InternalInconsistency("Gamma solve failed")
        if tuple(combo) in seen:
            continue
        seen.add(tuple(combo))
        rhs = Fraction(0) if zeta_cx_value(split, cv) == 1 else Fraction(1, 2)
        if any(fpart):
            w = cobar.lat.to_ambient(fpart)
            rhs -= _real_phase_of_pairing(as_real_fraction(_cpair(d, w)))
        rows.append(tuple(combo))
        vals.append(0 if _phase(rhs) == 0 else 1)
    from .cartan import _f2_transpose_solve

    bits = _f2_transpose_solve(rows, vals, len(gens)) if rows else (0,) * len(gens)
    if bits is None:
        raise Cond2Fails("no xi solves the zeta_cx condition")
    xi = tuple(Fraction(b, 2) for b in bits)
    chi_s = TorusCharacter(cobar, d, xi)
    return make_lifting_data(triple, tuple(dchi_tilde_s), chi_s, anchor, positive_s=ps)


def _validate_lambda_on_derived(ld: LiftingData):
    """lambda = chi~^2/chi must equal e^{-rho} on Z_0(H_s) inside G_d."""
    lam = lambda_character(ld, ld.split_class, ld.positive_s)
    split = ld.split_class
    rd = ld.triple.datum
    from .cover import derived_membership_f2

    derived = F2Space(rd.rank, derived_membership_f2(rd))
    torus = split.torus()
    z0 = f2_echelon(
        central_class_generators(rd, split.theta) + torus.identity_component_gens()
    )
    rho = ld.positive_s.rho()
    for y in z0:
        if not derived.contains(y):
            continue
        got = lam(y)
        want = _real_phase_of_pairing(-_cpair(rho, y))
        if got != want:
            raise InternalInconsistency(
                f"lambda != e^-rho at the derived central class {y}"
            )


# ---------------------------------------------------------------------------
# chi~^2 pairings and the compatible character chi at an arbitrary Cartan
# ---------------------------------------------------------------------------

def _coroot_span_fixed_gens(cc: CartanClass):
    """Theta-fixed generating set of the coroot span with its 2dchi~ parities.

    Imaginary coroots carry the grading parity; a^ + theta(a^) for complex a
    orthogonal to theta(a) is even (the half-integrality lemma covers exactly
    that case).  Non-orthogonal complex pairs reduce to the other generators.
    """
    rd = cc.datum
    gens = []
    parities = []
    seen = set()
    for i in cc.imaginary_indices():
        cv = rd.coroot(rd.roots[i])
        if cv in seen:
            continue
        seen.add(cv)
        gens.append(cv)
        parities.append(1 if cc._grading_map[i] else 0)
    for i in cc.complex_indices():
        alpha = rd.roots[i]
        theta_alpha = cc.theta_on_root(alpha)
        if dot(alpha, rd.coroot(theta_alpha)) != 0:
            continue
        cv = rd.coroots[i]
        img = tuple(vadd(cv, tuple(int(x) for x in _theta_on(cc, cv))))
        if not any(img) or img in seen:
            continue
        seen.add(img)
        gens.append(img)
        parities.append(0)
    return gens, parities


def _theta_on(cc: CartanClass, y: Sequence[int]):
    from .lattice import vecmat

    return vecmat(tuple(y), cc.theta)


def chi_tilde_sq_pairing(ld: LiftingData, cc: CartanClass, w: Sequence) -> Fraction:
    """<2 dchi~_H, W> mod 2 for W in the theta-fixed rational span.

    Resolved through (i) the grading parities on imaginary coroots and the
    evenness on complex pairs, with the central part matching the split
    data, or (ii) the explicit cover lattice when the coroot component of W
    is fractional.
    """
    from .lattice import hermite_row_basis, solve_integer

    rd = ld.triple.datum
    gens, parities = _coroot_span_fixed_gens(cc)
    if rd.roots:
        zdirs = kernel_basis(matfreeze(zip(*rd.roots)))
        cor_basis = hermite_row_basis(matfreeze(rd.coroots))
    else:
        zdirs = tuple(tuple(1 if i == j else 0 for j in range(rd.rank)) for i in range(rd.rank))
        cor_basis = ()
    # canonical projection W = W_d + W_z along the coroot span
    stack = [tuple(r) for r in cor_basis] + [tuple(z) for z in zdirs]
    coeffs = solve_rational(matfreeze(stack), tuple(Fraction(x) for x in w))
    if coeffs is None:
        raise InternalInconsistency("W is outside the theta-fixed span")
    nz = len(cor_basis)
    wz = [Fraction(0)] * rd.rank
    for c, z in zip(coeffs[nz:], zdirs):
        for i, x in enumerate(z):
            wz[i] += c * x
    wd = tuple(Fraction(x) - y for x, y in zip(w, wz))

    zval = _cpair(tuple(2 * x for x in ld.dchi_tilde_s), wz)
    zphase = as_real_fraction(zval)

    if all(x.denominator == 1 for x in wd):
        combo = solve_integer(matfreeze(gens), tuple(int(x) for x in wd)) if gens else (
            () if not any(wd) else None
        )
        if combo is not None:
            total = Fraction(sum(int(c) * p for c, p in zip(combo, parities)) % 2)
            return _phase_mod2(total + zphase)
    cover_lat = ld.triple.cover.cover_cocharacter_lattice
    if cover_lat is None:
        raise InternalInconsistency(
            "chi~^2 pairing needs the explicit cover lattice at this class"
        )
    delta2 = _genuine_coset_vector(rd, cover_lat)
    val = dot(delta2, _require_int_vector(w))
    return _phase_mod2(Fraction(val))


def _phase_mod2(x: Fraction) -> Fraction:
    return Fraction(x) % 2


def _require_int_vector(w):
    out = []
    for x in w:
        fx = Fraction(x)
        if fx.denominator != 1:
            raise InternalInconsistency("expected an integral vector")
        out.append(int(fx))
    return tuple(out)


def _genuine_coset_vector(rd, cover_lat) -> Vector:
    """2*delta for a genuine character differential delta of the torus cover.

    The cover of the torus has cocharacter lattice cover_lat of index 2 in
    X_*; genuine characters pair half-integrally with exactly the vectors
    outside cover_lat.  2*delta is any X-vector odd on those.
    """
    n = rd.rank
    for bits in itertools.product((0, 1), repeat=n):
        cand = tuple(bits)
        ok = True
        found_odd = False
        for i in range(n):
            e = tuple(1 if j == i else 0 for j in range(n))
            from .lattice import solve_integer

            inside = solve_integer(cover_lat, e) is not None
            val = dot(cand, e) % 2
            if inside and val != 0:
                ok = False
                break
            if not inside:
                if val % 2 != 1:
                    ok = False
                    break
                found_odd = True
        if ok and found_odd:
            return cand
    raise InternalInconsistency("no genuine coset vector for the cover lattice")


@dataclass
class CartanCharacter:
    """The unique compatible character chi of Hbar for (cc, Phi+).

    Values on component classes come from the split-Cartan data, values on
    the identity component from the differential rules; the shift_rho_i
    flag applies the |e^{rho_i - rho}| modification (trivial on torsion).
    """

    ld: LiftingData
    cc: CartanClass
    ps: PositiveSystem
    shifted: bool = False

    def __post_init__(self):
        self.cobar = self.ld.triple.cobar_torus(self.cc)
        self.rho = self.ps.rho()
        self._validate_consistency()

    # differential of chi (with the nominal dchi~ gauge: zero on the split
    # directions, split-data central part, parity solution on the rest)
    def dchi_central_pairing(self, w) -> object:
        zval = _cpair(
            tuple(x for x in self.ld.chi_s.d), w
        ) - _cpair(self.ld.rho_s(), w)
        return zval

    def eval_phase(self, coords: Sequence[int]) -> Phase:
        t = self.cobar
        dec = t.component_decomposition(coords)
        if dec is None:
            raise CharacterError("point is outside the skeleton")
        gpart, fpart = dec
        total = Fraction(0)
        if any(gpart):
            amb = t.lat.to_ambient(gpart)
            split_cobar = self.ld.chi_s.torus
            sc = split_cobar.lat.from_ambient(amb)
            if sc is None:
                raise UnreachableCartan(
                    "Gamma class does not embed into the split Cartan"
                )
            total += self.ld.chi_s.eval_skeleton_phase(sc)
        if any(fpart):
            w = t.lat.to_ambient(fpart)
            total += _real_phase_of_pairing(as_real_fraction(_cpair(self.rho, w)))
            total += _phase(chi_tilde_sq_pairing(self.ld, self.cc, w) / 2)
            # central continuous part: <2 dchi~_s + mu, W_z> is folded into
            # chi_tilde_sq_pairing through the split differential
        return _phase(total)

    def eval(self, coords) -> complex:
        return phase_to_complex(self.eval_phase(coords))

    def _validate_consistency(self):
        t = self.cobar
        # order-2 points must take values +-1: this is the integrality of the
        # compatible character's differential at this Cartan
        for g in t._fixed:
            w = t.lat.to_ambient(g)
            ph = _phase(
                _real_phase_of_pairing(as_real_fraction(_cpair(self.rho, w)))
                + chi_tilde_sq_pairing(self.ld, self.cc, w) / 2
            )
            if ph not in (Fraction(0), Fraction(1, 2)):
                raise InternalInconsistency(
                    "compatible character takes a non-real value at an "
                    "order-2 point; the lifting data does not extend here"
                )
        gens = t.gamma_coord_gens() + t.identity_component_gens()
        if not gens:
            return
        from .cartan import _f2_kernel

        ng = len(t.gamma_coord_gens())
        for rel in _f2_kernel([tuple(g) for g in gens]):
            acc = (0,) * t.lat.dim
            for bit, g in zip(rel, gens):
                if bit % 2:
                    acc = tuple((a + b) % 2 for a, b in zip(acc, g))
            if any(acc):
                continue
            total = Fraction(0)
            for bit, g in zip(rel[:ng], t._anti):
                if bit % 2:
                    amb = t.lat.to_ambient(g)
                    sc = self.ld.chi_s.torus.lat.from_ambient(amb)
                    if sc is None:
                        raise UnreachableCartan("Gamma class outside the split torus")
                    total += self.ld.chi_s.eval_skeleton_phase(sc)
            for bit, g in zip(rel[ng:], t._fixed):
                if bit % 2:
                    w = t.lat.to_ambient(g)
                    total += _real_phase_of_pairing(as_real_fraction(_cpair(self.rho, w)))
                    total += _phase(chi_tilde_sq_pairing(self.ld, self.cc, w) / 2)
            if _phase(total) != 0:
                raise InternalInconsistency(
                    "compatible character is inconsistent at this Cartan"
                )


_GAMMA_CACHE: Dict = {}


def gamma_factor(ld: LiftingData, cc: CartanClass, ps: Optional[PositiveSystem] = None):
    """The compatible character chi, the character lambda of Z_0(H), and mu."""
    if ps is None:
        ps = special_positive_system(cc)
    key = (id(ld), cc.theta, cc.grading, frozenset(ps.indices))
    if key in _GAMMA_CACHE:
        return _GAMMA_CACHE[key]
    chi = CartanCharacter(ld, cc, ps)
    lam = lambda_character(ld, cc, ps)
    out = (chi, lam, ld.mu)
    _GAMMA_CACHE[key] = out
    return out


def lambda_character(ld: LiftingData, cc: CartanClass, ps: PositiveSystem) -> Callable:
    """lambda = chi~^2/chi on the skeleton classes of Z_0(H) (G-side)."""
    rd = ld.triple.datum
    torus = cc.torus()
    central = central_class_generators(rd, cc.theta)
    h0 = torus.identity_component_gens()
    chi = CartanCharacter(ld, cc, ps)
    cobar = ld.triple.cobar_torus(cc)

    def value(y: Sequence[int]) -> Phase:
        yy = tuple(int(v) % 2 for v in y)
        combo = f2_solve(central + h0, yy)
        if combo is None:
            raise CharacterError(f"{yy} is not in Z_0(H)")
        zpart = _f2_sum(central, combo[: len(central)], rd.rank)
        wpart = (0,) * rd.rank
        for bit, row in zip(combo[len(central):], torus._fixed):
            if bit % 2:
                wpart = tuple(a + b for a, b in zip(wpart, row))
        total = Fraction(0)
        if any(zpart):
            q = square_form_value(ld.triple, zpart)
            total += Fraction(0) if q == 1 else Fraction(1, 2)
        if any(wpart):
            w = torus.lat.to_ambient(wpart)
            total += _phase(chi_tilde_sq_pairing(ld, cc, w) / 2)
        sc = cobar.lat.from_ambient(tuple(Fraction(v) for v in yy))
        if sc is None:
            raise CharacterError("class missing from the quotient torus")
        total -= chi.eval_phase(sc)
        return _phase(total)

    return value


# ---------------------------------------------------------------------------
# Cayley transforms of characters
# ---------------------------------------------------------------------------

def cayley_character(
    chi: TorusCharacter,
    cc: CartanClass,
    alpha: Sequence[int],
    direction: str,
    target: Optional[CartanClass] = None,
) -> List[TorusCharacter]:
    """Cayley transform of a torus character through a real root.

    direction "to_imaginary" goes from the Cartan with alpha real toward the
    compact side (0 or 1 results); "to_real" goes the other way (1 or 2).
    """
    rd = cc.datum
    cv = rd.coroot(alpha)
    if direction == "to_imaginary":
        if cc.classify_root(alpha) != REAL:
            raise CharacterError("alpha must be real here")
        pairing = as_real_fraction(_cpair(chi.d, cv))
        if pairing.denominator != 1:
            raise NonIntegralPairing(f"<dchi, {alpha}^> = {pairing} not integral")
        if target is None:
            target = cc.inverse_cayley(alpha)
        # gate: chi(m_alpha) = (-1)^<dchi, alpha^>
        m_coords = chi.torus.lat.from_ambient(cv)
        want = _phase(Fraction(int(pairing), 2))
        if chi.eval_skeleton_phase(m_coords) != want:
            return []
        new_torus = RealTorus(chi.torus.lat, target.theta)
        xi = _transport_xi(chi, new_torus)
        if xi is None:
            raise CharacterError("Cayley transform lost a component value")
        return [TorusCharacter(new_torus, chi.d, xi)]
    if direction == "to_real":
        if cc.classify_root(alpha) != IMAGINARY_NONCOMPACT:
            raise CharacterError("alpha must be noncompact imaginary here")
        if target is None:
            target = cc.cayley(alpha)
        new_torus = RealTorus(chi.torus.lat, target.theta)
        gens = new_torus.gamma_coord_gens()
        out = []
        free_bits = []
        values = []
        for g in gens:
            if _class_shared_between(cc, target, chi.torus, g) and chi.torus.is_in_skeleton(g):
                values.append(chi.eval_skeleton_phase(g))
                free_bits.append(False)
            else:
                values.append(None)
                free_bits.append(True)
        nfree = sum(free_bits)
        for bits in itertools.product((0, 1), repeat=nfree):
            vals = []
            it = iter(bits)
            for v, fb in zip(values, free_bits):
                if fb:
                    vals.append(Fraction(next(it), 2))
                else:
                    vals.append(v)
            try:
                out.append(TorusCharacter(new_torus, chi.d, tuple(vals)))
            except CharacterError:
                continue
        return out
    raise CharacterError(f"unknown direction {direction}")


def _class_shared_between(
    cc_a: CartanClass, cc_b: CartanClass, torus: RealTorus, coords: Sequence[int]
) -> bool:
    """Does the class define the same group element in both Cartans?

    True when a representative lies in the common subtorus (intersection of
    the eigenspace pairs) up to a central class and the lattice 2L.
    """
    rd = cc_a.datum
    n = rd.rank
    lat = torus.lat

    def eig_intersection(sign):
        rows_a = matfreeze(
            tuple((1 if i == j else 0) - sign * cc_a.theta[i][j] for j in range(n))
            for i in range(n)
        )
        rows_b = matfreeze(
            tuple((1 if i == j else 0) - sign * cc_b.theta[i][j] for j in range(n))
            for i in range(n)
        )
        stacked = matfreeze(tuple(ra) + tuple(rb) for ra, rb in zip(rows_a, rows_b))
        return kernel_basis(stacked)

    span = list(eig_intersection(1)) + list(eig_intersection(-1))
    # functionals vanishing on the shared span, evaluated on 2L and on Y:
    # Y is shared iff f(Y - z) lies in the integer lattice f(2L)
    if span:
        perp = kernel_basis(matfreeze(zip(*span)))
    else:
        perp = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    if not perp:
        return True
    two_l_vecs = [tuple(Fraction(2 * x, lat.den) for x in row) for row in lat.rows]
    f_of_2l = matfreeze(
        tuple(int(sum(f[i] * v[i] for i in range(n))) for f in perp) for v in two_l_vecs
    )
    y = lat.to_ambient(coords)
    centrals = central_class_generators(rd, cc_a.theta)
    for bits in itertools.product((0, 1), repeat=len(centrals)):
        z = _f2_sum(centrals, bits, n) if centrals else (0,) * n
        target_vec = tuple(Fraction(a) - b for a, b in zip(y, z))
        fy = [sum(f[i] * target_vec[i] for i in range(n)) for f in perp]
        if any(Fraction(v).denominator != 1 for v in fy):
            continue
        from .lattice import solve_integer

        if solve_integer(f_of_2l, tuple(int(v) for v in fy)) is not None:
            return True
    return False


def _transport_xi(chi: TorusCharacter, new_torus: RealTorus):
    xi = []
    for g in new_torus.gamma_coord_gens():
        if not chi.torus.is_in_skeleton(g):
            return None
        xi.append(chi.eval_skeleton_phase(g))
    return tuple(xi)


def cayley_genuine(
    label: GenuineCharacterLabel,
    cc: CartanClass,
    alpha: Sequence[int],
    direction: str,
    real_type: Optional[str] = None,
) -> GenuineCharacterLabel:
    """Cayley transform of a genuine character label; always unique."""
    rd = cc.datum
    cv = rd.coroot(alpha)
    pairing = as_real_fraction(_cpair(label.dchi_tilde, cv))
    if direction == "to_imaginary":
        if cc.classify_root(alpha) != REAL:
            raise CharacterError("alpha must be real here")
        if (2 * pairing).denominator != 1 or pairing.denominator != 2:
            raise HalfIntegralityFails(f"<dchi~, {alpha}^> = {pairing} not in Z+1/2")
        rtype = real_type or cc.real_root_type(alpha)
        if rtype == "I":
            stored = label.m_value(alpha)
            want = _phase(pairing / 2)
            if stored is not None and stored != want:
                raise TypeICompatibilityFails(
                    f"chi~(m~) = {stored} but the pairing forces {want}"
                )
        target = cc.inverse_cayley(alpha)
        return GenuineCharacterLabel(
            cartan_key(target), label.dchi_tilde, label.eta, label.anchor, label.m_values
        )
    if direction == "to_real":
        if cc.classify_root(alpha) != IMAGINARY_NONCOMPACT:
            raise CharacterError("alpha must be noncompact imaginary here")
        if (2 * pairing).denominator != 1 or pairing.denominator != 2:
            raise HalfIntegralityFails(f"<dchi~, {alpha}^> = {pairing} not in Z+1/2")
        target = cc.cayley(alpha)
        out = GenuineCharacterLabel(
            cartan_key(target), label.dchi_tilde, label.eta, label.anchor, label.m_values
        )
        return out.with_m_value(alpha, _phase(pairing / 2))
    raise CharacterError(f"unknown direction {direction}")


# ---------------------------------------------------------------------------
# torus lifting
# ---------------------------------------------------------------------------

def kernel_class_generators(triple: AdmissibleTriple, cc: CartanClass) -> List[Vector]:
    """Skeleton coordinates (in the quotient torus) generating Ker(phi_Hbar)."""
    rd = triple.datum
    n = rd.rank
    cobar = triple.cobar_torus(cc)
    out = []
    sp = F2Space(cobar.lat.dim, [])
    for y in itertools.product((0, 1), repeat=n):
        if not any(y):
            continue
        coords = cobar.lat.from_ambient(tuple(Fraction(v) for v in y))
        if coords is None:
            continue
        cm = tuple(v % 2 for v in coords)
        if not cobar.is_in_skeleton(cm):
            continue
        if sp.add_vector(cm):
            out.append(cm)
    return out


def torus_lift(
    ld: LiftingData,
    cc: CartanClass,
    psi: TorusCharacter,
    chi: Optional[CartanCharacter] = None,
    shift_rho_i: bool = False,
    lam_vec: Optional[Sequence] = None,
) -> List[GenuineCharacterLabel]:
    """Lift of a character of Hbar; empty when psi != chi on Ker(phi)."""
    triple = ld.triple
    if chi is None:
        ps = special_positive_system(cc, lam=lam_vec)
        chi, _, _ = gamma_factor(ld, cc, ps)
    for k in kernel_class_generators(triple, cc):
        if psi.eval_skeleton_phase(k) != chi.eval_phase(k):
            return []
    data = phi_on_cartan(triple, cc)
    dpsi_tilde = tuple(_half(a - b) for a, b in zip(psi.d, ld.mu))
    labels = []
    for eta_bits in itertools.product((0, 1), repeat=len(data.coker_reps)):
        labels.append(
            GenuineCharacterLabel(
                cartan_key(cc), dpsi_tilde, tuple(eta_bits), ld.anchor
            )
        )
    return labels


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def component_quotient_order(cc: CartanClass, triple: Optional[AdmissibleTriple] = None) -> int:
    """|H / Z_0(H)| through the skeleton spans."""
    from .cartan import z0_component_skeleton_gens

    rd = cc.datum
    torus = cc.torus()
    form = triple.cover.commutator_form if triple is not None else None
    split_theta = triple.split_class.theta if triple is not None else None
    z0 = z0_component_skeleton_gens(rd, cc.theta, form, split_theta)
    gamma = [tuple(v % 2 for v in g) for g in torus.gamma_coord_gens()]
    big = F2Space(rd.rank, gamma + list(z0))
    small = F2Space(rd.rank, list(z0))
    return 2 ** (big.dim - small.dim)


def constants(triple: AdmissibleTriple, cc: CartanClass) -> Tuple[int, int]:
    """(c(H), C(H)) computed two ways and cross-checked."""
    c_h = _c_of(triple, cc)
    c_s = _c_of(triple, triple.split_class)
    if c_h % c_s != 0:
        raise InternalInconsistency("C(H) is not an integer")
    return c_h, c_h // c_s


def _c_of(triple: AdmissibleTriple, cc: CartanClass) -> int:
    data = phi_on_cartan(triple, cc)
    hz = component_quotient_order(cc, triple)
    root = 1
    while root * root < hz:
        root *= 2
    if root * root != hz:
        raise InternalInconsistency("|H/Z_0(H)| is not a perfect square")
    num = data.ker_order
    den = root * data.coker.order
    if num % den != 0:
        raise InternalInconsistency("c(H) is not an integer")
    c_direct = num // den

    # cross-check through the closed formulas
    p, q, r = cc.pqr
    c_g = (2 ** (p + r)) * root
    cap = 2 ** len(data.gamma_cap_c)
    c_bar = c_g * cap // triple.c_subgroup_order()
    if c_bar != c_direct:
        raise InternalInconsistency(
            f"constant formulas disagree: {c_direct} vs {c_bar}"
        )
    return c_direct
