"""Admissible two-fold covers, central two-group quotients, and the squaring
map phi between the quotient torus and the group side.

The quotient data C is a list of integer vectors Y with exp(pi*i*Y) a real
central element of order <= 2; the quotient's cocharacter lattice is then
X_* extended by the halves Y/2.  Squares of lifted torsion elements are
recorded by the quadratic form q (the value of z-tilde squared in {+-1}),
derived where the structure theory pins it down and supplied by overrides
elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cartan import (
    IMAGINARY_NONCOMPACT,
    REAL,
    CartanClass,
    CartanEnumeration,
    RealTorus,
    TorusLattice,
    _f2_kernel,
    _f2_sum,
    central_class_generators,
    enumerate_cartans,
    special_positive_system,
)
from .lattice import (
    F2Space,
    FiniteAbelianGroup,
    Matrix,
    Vector,
    dot,
    f2_echelon,
    f2_rank,
    f2_solve,
    hermite_row_basis,
    identity,
    kernel_basis,
    matfreeze,
    solve_integer,
    vadd,
    vscale,
)
from .rootdata import RootDatum


class CoverError(Exception):
    pass


class NotTwoGroup(CoverError):
    pass


class NotInZ0(CoverError):
    pass


class Zeta2Fails(CoverError):
    pass


class UnderdeterminedSquareForm(CoverError):
    pass


class NotAdmissible(CoverError):
    pass


# ---------------------------------------------------------------------------
# specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverSpec:
    """Two-fold cover data.

    admissible asserts the cover is nontrivial on every simple factor that
    admits a nonlinear cover.  square_form_overrides maps a central skeleton
    class (integer vector mod 2X_*) to the value of its lifted square, for
    classes the structure theory leaves open.  cover_cocharacter_lattice,
    when given, pins the restriction of the cover to the base Cartan's
    identity component by an index-2 sublattice of X_*.
    """

    admissible: bool = True
    square_form_overrides: Tuple[Tuple[Vector, int], ...] = ()
    cover_cocharacter_lattice: Optional[Matrix] = None
    # commutator form on the component skeleton: {exp(pi i Y), exp(pi i Y')}
    # = (-1)^(Y M Y'^T); needed only when the real group is disconnected
    commutator_form: Optional[Matrix] = None

    def override_for(self, y: Sequence[int]) -> Optional[int]:
        for vec, val in self.square_form_overrides:
            if tuple(a % 2 for a in vec) == tuple(a % 2 for a in y):
                return val
        return None


@dataclass(frozen=True)
class QuotientSpec:
    """Generators of the central two-group C as half-cocharacter classes."""

    c_generators: Tuple[Vector, ...] = ()


@dataclass(frozen=True)
class AdmissibleTriple:
    datum: RootDatum
    enumeration: CartanEnumeration
    cover: CoverSpec
    quotient: QuotientSpec
    xbar_star: TorusLattice  # cocharacter lattice of the quotient torus

    @property
    def split_class(self) -> CartanClass:
        return self.enumeration.classes[self.enumeration.split]

    @property
    def fundamental_class(self) -> CartanClass:
        return self.enumeration.classes[self.enumeration.fundamental]

    def cobar_torus(self, cc: CartanClass) -> RealTorus:
        return RealTorus(self.xbar_star, cc.theta)

    def c_subgroup_order(self) -> int:
        n = self.datum.rank
        gens = [tuple(v % 2 for v in y) for y in self.quotient.c_generators]
        return 2 ** f2_rank(gens) if gens else 1


# ---------------------------------------------------------------------------
# metaplectic structure
# ---------------------------------------------------------------------------

def metaplectic_roots(cc: CartanClass) -> Tuple[Vector, ...]:
    """Long real and long noncompact imaginary roots of the class."""
    rd = cc.datum
    out = []
    for i in list(cc.real_indices()) + list(cc.noncompact_imaginary_indices()):
        if rd.is_long(rd.roots[i]):
            out.append(rd.roots[i])
    return tuple(sorted(out))


def admits_nonlinear_cover(enum: CartanEnumeration, factor: Optional[int] = None) -> bool:
    """True when some Cartan class carries a metaplectic root (of the factor)."""
    rd = enum.classes[0].datum
    for idx in (enum.fundamental, enum.split):
        cc = enum.classes[idx]
        for alpha in metaplectic_roots(cc):
            if factor is None or rd.factor_of_root[rd.root_index(alpha)] == factor:
                return True
    return False


def lattice_cover_admissible(enum: CartanEnumeration, sublattice: Matrix) -> bool:
    """Is the cover with torus cocharacter lattice sublattice admissible?

    The lift of m_alpha = exp(pi*i*coroot) has order 4 exactly when the
    coroot is outside the sublattice; every metaplectic root must have that.
    """
    rd = enum.classes[0].datum
    for cc in enum.classes:
        for alpha in metaplectic_roots(cc):
            if solve_integer(sublattice, rd.coroot(alpha)) is not None:
                return False
    return True


def index_two_sublattices(n: int) -> List[Matrix]:
    """The index-2 sublattices of Z^n (kernels of the nonzero F2 functionals)."""
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        if not any(bits):
            continue
        gens = []
        for i in range(n):
            if bits[i] == 0:
                gens.append(tuple(1 if j == i else 0 for j in range(n)))
        support = [i for i in range(n) if bits[i]]
        for a, b in zip(support, support[1:]):
            gens.append(tuple(1 if j in (a, b) else 0 for j in range(n)))
        gens.append(vscale(2, tuple(1 if j == support[0] else 0 for j in range(n))))
        out.append(hermite_row_basis(gens))
    return out


# ---------------------------------------------------------------------------
# the square form and zeta_2
# ---------------------------------------------------------------------------

def derived_membership_f2(rd: RootDatum) -> List[Vector]:
    """F2 generators (mod 2X_*) of the classes exp(pi*i*Y) inside G_d(C)."""
    if not rd.roots:
        return []
    cor = matfreeze(rd.coroots)
    perp = kernel_basis(matfreeze(zip(*cor)))  # character side, kills all coroots
    if perp:
        sat = kernel_basis(matfreeze(zip(*perp)))  # X_* cap span_Q(coroots)
    else:
        sat = identity(rd.rank)
    return [tuple(v % 2 for v in row) for row in sat]


def square_form_value(
    triple_or_parts,
    y: Sequence[int],
    cover: Optional[CoverSpec] = None,
    split_class: Optional[CartanClass] = None,
) -> int:
    """q(z) = value of a lifted square for the central class exp(pi*i*Y).

    Derivable cases: classes in the span of real coroots of the maximally
    split Cartan (where commuting lifts give q = e^{rho_r}); otherwise an
    override is required.
    """
    if isinstance(triple_or_parts, AdmissibleTriple):
        cover = triple_or_parts.cover
        split_class = triple_or_parts.split_class
    cc = split_class
    rd = cc.datum
    yy = tuple(int(v) % 2 for v in y)
    real_coroots = [tuple(v % 2 for v in rd.coroot(rd.roots[i])) for i in cc.real_indices()]
    combo = f2_solve(real_coroots, yy) if real_coroots else (None if any(yy) else ())
    if combo is not None:
        ps = special_positive_system(cc)
        rho_r2 = [0] * rd.rank  # 2*rho_r as an integer vector
        for alpha in ps.roots():
            if cc.classify_root(alpha) == REAL:
                rho_r2 = [a + b for a, b in zip(rho_r2, alpha)]
        val = dot(tuple(rho_r2), tuple(int(v) for v in y))
        if val % 2 != 0:
            raise CoverError("rho_r pairing must be even on an order-2 class")
        return -1 if (val // 2) % 2 else 1
    if cover is not None:
        ov = cover.override_for(yy)
        if ov is not None:
            return ov
    raise UnderdeterminedSquareForm(
        f"square of the lift of class {yy} is neither derivable nor overridden"
    )


def zeta2_value(triple_or_parts, y: Sequence[int], cover=None, split_class=None) -> int:
    """zeta_2 = q(z) e^rho(z) for a central order-2 class in the derived group."""
    if isinstance(triple_or_parts, AdmissibleTriple):
        cover = triple_or_parts.cover
        split_class = triple_or_parts.split_class
    cc = split_class
    ps = special_positive_system(cc)
    rho2 = [0] * cc.datum.rank
    for alpha in ps.roots():
        rho2 = [a + b for a, b in zip(rho2, alpha)]
    val = dot(tuple(rho2), tuple(int(v) for v in y))
    if val % 2 != 0:
        raise Zeta2Fails("e^rho is not defined at this class (pairing is odd)")
    erho = -1 if (val // 2) % 2 else 1
    return square_form_value(None, y, cover=cover, split_class=cc) * erho


# ---------------------------------------------------------------------------
# triple validation
# ---------------------------------------------------------------------------

def validate_triple(
    base: CartanClass,
    cover: CoverSpec,
    quotient: QuotientSpec,
) -> AdmissibleTriple:
    """Check the triple conditions and assemble the quotient lattice.

    (a) generators have order 2 and are real central classes;
    (b) C lies in Z_0(G) (automatic for connected complex groups, checked
        through the commutator test on the split Cartan);
    (c) zeta_2 = 1 on C intersected with the derived group.
    """
    rd = base.datum
    enum = enumerate_cartans(base)
    split = enum.classes[enum.split]

    if not cover.admissible:
        raise NotAdmissible("the triple requires an admissible cover")
    if cover.cover_cocharacter_lattice is not None:
        if not lattice_cover_admissible(enum, cover.cover_cocharacter_lattice):
            raise NotAdmissible(
                "a metaplectic coroot lies in the cover lattice, so its lift "
                "has order 2 and the cover is trivial on that factor"
            )

    n = rd.rank
    central_gens = central_class_generators(rd, split.theta)
    central_span = F2Space(n, list(central_gens))
    for y in quotient.c_generators:
        yy = tuple(int(v) % 2 for v in y)
        if not central_span.contains(yy):
            # distinguish the failure modes for diagnostics
            if any(dot(alpha, y) % 2 for alpha in rd.simple_roots()):
                raise NotInZ0(f"class {yy} is not central")
            raise NotInZ0(f"class {yy} is not a real point on the split Cartan")
        from .cartan import z0_membership

        if not z0_membership(split, yy, cover.commutator_form, split.theta):
            raise NotInZ0(f"class {yy} fails the commutator test")

    derived_gens = derived_membership_f2(rd)
    derived_span = F2Space(n, derived_gens)
    # check zeta_2 = 1 on every element of C inside G_d
    cgens = [tuple(int(v) % 2 for v in y) for y in quotient.c_generators]
    for bits in itertools.product((0, 1), repeat=len(cgens)):
        if not any(bits):
            continue
        z = _f2_sum(cgens, bits, n)
        if derived_span.contains(z):
            if zeta2_value(None, z, cover=cover, split_class=split) != 1:
                raise Zeta2Fails(f"zeta_2 = -1 on the class {z}")

    rows = [vscale(2, r) for r in identity(n)]
    for y in quotient.c_generators:
        rows.append(tuple(int(v) for v in y))
    xbar2 = hermite_row_basis(rows)  # basis of 2 * Xbar_*
    xbar = TorusLattice(2, xbar2)
    return AdmissibleTriple(rd, enum, cover, quotient, xbar)


# ---------------------------------------------------------------------------
# the squaring map on a Cartan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhiData:
    """phi(Hbar) = (Gamma(H) cap C) H^0 together with kernel and cokernel."""

    gamma_cap_c: Tuple[Vector, ...]  # skeleton classes generating Gamma(H) cap C
    ker_order: int
    coker: FiniteAbelianGroup
    coker_reps: Tuple[Vector, ...]  # skeleton classes of coker generators
    z0_gens: Tuple[Vector, ...]
    image_gens: Tuple[Vector, ...]


def gamma_cap_c(triple: AdmissibleTriple, cc: CartanClass) -> List[Vector]:
    """Generators of Gamma(H) cap C as skeleton classes mod 2X_*."""
    rd = triple.datum
    n = rd.rank
    torus = cc.torus()
    gamma_gens = [tuple(int(v) % 2 for v in g) for g in torus.gamma_coord_gens()]
    cgens = [tuple(int(v) % 2 for v in y) for y in triple.quotient.c_generators]
    if not gamma_gens or not cgens:
        return []
    out = []
    for bits in itertools.product((0, 1), repeat=len(cgens)):
        if not any(bits):
            continue
        z = _f2_sum(cgens, bits, n)
        if f2_solve(gamma_gens, z) is not None:
            out.append(z)
    return f2_echelon(out)


def kernel_order(triple: AdmissibleTriple, cc: CartanClass) -> int:
    """|Ker(phi restricted to Hbar)| by exact counting mod 2*Xbar_*."""
    rd = triple.datum
    n = rd.rank
    w_gens = []
    for row in triple.xbar_star.rows:  # rows of 2*Xbar_* in ambient coords
        w_gens.append(tuple(v % 2 for v in row))
    w_space = F2Space(n, w_gens)
    one_minus = matfreeze(
        tuple((1 if i == j else 0) - cc.theta[i][j] for j in range(n)) for i in range(n)
    )
    # solutions of (1-theta) Y in 2*Xbar_* over F2
    wbasis = w_space.basis
    sol_gens = []
    candidates = identity(n)
    images = [tuple(v % 2 for v in row) for row in one_minus]
    # companion reduction: solve x @ (1-theta) in span(wbasis)
    ext = [img + cand for img, cand in zip(images, [tuple(r) for r in candidates])]
    wext = [tuple(b) + (0,) * n for b in wbasis]
    basis: List[Tuple[int, ...]] = []
    kernel: List[Vector] = []
    for row in wext + ext:
        cur = row
        for b in basis:
            lead = next(i for i in range(n) if b[i] == 1) if any(b[:n]) else None
            if lead is not None and cur[lead] == 1:
                cur = tuple((a + c) % 2 for a, c in zip(cur, b))
        if any(cur[:n]):
            basis.append(cur)
        elif any(cur[n:]):
            kernel.append(cur[n:])
    dim_s = f2_rank(kernel)
    dim_w = len(wbasis)
    return 2 ** (dim_s - dim_w)


def phi_on_cartan(triple: AdmissibleTriple, cc: CartanClass) -> PhiData:
    from .cartan import z0_component_skeleton_gens

    rd = triple.datum
    n = rd.rank
    torus = cc.torus()
    h0 = [tuple(int(v) % 2 for v in g) for g in torus.identity_component_gens()]
    cap = gamma_cap_c(triple, cc)
    image = F2Space(n, cap + h0)
    z0_gens = z0_component_skeleton_gens(
        rd, cc.theta, triple.cover.commutator_form, triple.split_class.theta
    )
    z0 = F2Space(n, list(z0_gens))
    # cokernel Z_0(H)/phi(Hbar): complement of image inside z0
    reps = []
    grow = F2Space(n, list(image.basis))
    for g in z0.basis:
        if grow.add_vector(g):
            reps.append(g)
    coker = FiniteAbelianGroup(
        invariant_factors=(2,) * len(reps), generator_labels=matfreeze(reps)
    )
    return PhiData(
        gamma_cap_c=tuple(cap),
        ker_order=kernel_order(triple, cc),
        coker=coker,
        coker_reps=tuple(reps),
        z0_gens=tuple(z0.basis),
        image_gens=tuple(image.basis),
    )
