"""Real forms as Cartan involutions with gradings, Cayley transforms, and
the finite 2-group skeletons of real tori.

A Cartan class is (theta, grading): an involution of the cocharacter lattice
together with a compact/noncompact grading of the imaginary roots.  Points
of order <= 2 of a real torus are written exp(pi*i*Y); all component-group
computations happen on Y-vectors mod 2L with exact integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .lattice import (
    F2Space,
    FiniteAbelianGroup,
    IntegerLattice,
    Matrix,
    Vector,
    dot,
    f2_echelon,
    f2_solve,
    hermite_row_basis,
    identity,
    kernel_basis,
    matfreeze,
    matmul,
    quotient,
    solve_integer,
    solve_rational,
    transpose,
    vadd,
    vecmat,
    vscale,
    vsub,
)
from .rootdata import PositiveSystem, RootDatum, WeylGroup, default_positive_roots

REAL = "real"
IMAGINARY_COMPACT = "imaginary_compact"
IMAGINARY_NONCOMPACT = "imaginary_noncompact"
COMPLEX = "complex"


class CartanError(Exception):
    pass


class NotNoncompactImaginary(CartanError):
    pass


class NotRealRoot(CartanError):
    pass


class GradingInconsistent(CartanError):
    pass


class NoSpecialSystem(CartanError):
    pass


class SingularLambda(CartanError):
    pass


# ---------------------------------------------------------------------------
# real torus skeletons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusLattice:
    """Lattice L = (1/den) * rowspan(rows) inside the ambient Q^n."""

    den: int
    rows: Matrix

    @staticmethod
    def standard(n: int) -> "TorusLattice":
        return TorusLattice(1, identity(n))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def to_ambient(self, coords: Sequence[int]) -> Tuple[Fraction, ...]:
        v = vecmat(coords, self.rows)
        return tuple(Fraction(x, self.den) for x in v)

    def from_ambient(self, v: Sequence) -> Optional[Vector]:
        scaled = [Fraction(x) * self.den for x in v]
        if any(x.denominator != 1 for x in scaled):
            return None
        return solve_integer(self.rows, tuple(int(x) for x in scaled))

    def contains(self, v: Sequence) -> bool:
        return self.from_ambient(v) is not None


class RealTorus:
    """Real points of a torus with cocharacter lattice L and involution theta.

    theta acts on ambient row vectors from the right; L must be theta-stable.
    Elements of the 2-group skeleton {h : h^2 = 1} are exp(pi*i*Y) and are
    represented by their L-coordinates mod 2.
    """

    def __init__(self, lat: TorusLattice, theta: Matrix):
        self.lat = lat
        self.theta = theta
        k = lat.dim
        theta_l = []
        for row in lat.rows:
            img = vecmat(row, theta)
            x = solve_integer(lat.rows, img)
            if x is None:
                raise CartanError("lattice is not stable under theta")
            theta_l.append(x)
        self.theta_coords = matfreeze(theta_l)  # theta in L-coordinates
        if matmul(self.theta_coords, self.theta_coords) != identity(k):
            raise CartanError("theta is not an involution on the lattice")
        one_minus = matfreeze(
            tuple((1 if i == j else 0) - self.theta_coords[i][j] for j in range(k))
            for i in range(k)
        )
        one_plus = matfreeze(
            tuple((1 if i == j else 0) + self.theta_coords[i][j] for j in range(k))
            for i in range(k)
        )
        self._one_minus = one_minus
        self._anti = kernel_basis(one_plus)  # coords of L^{-theta}
        self._fixed = kernel_basis(one_minus)  # coords of L^{theta}
        # skeleton: {x mod 2 : x @ (1 - theta) == 0 mod 2}
        rows_mod2 = [tuple(v % 2 for v in row) for row in one_minus]
        self._skeleton_gens = _f2_kernel(rows_mod2)

    # -- structure ----------------------------------------------------------

    @property
    def pqr(self) -> Tuple[int, int, int]:
        # r equals the F2-rank of (1 - theta): 0 on compact and split blocks,
        # 1 per complex pair
        fixed = len(self._fixed)
        anti = len(self._anti)
        from .lattice import f2_rank

        r = f2_rank([tuple(x % 2 for x in row) for row in self._one_minus])
        return fixed - r, anti - r, r

    def skeleton_generators(self) -> List[Vector]:
        return list(self._skeleton_gens)

    def skeleton_space(self) -> F2Space:
        return F2Space(self.lat.dim, list(self._skeleton_gens))

    def gamma_coord_gens(self) -> List[Vector]:
        """Skeleton coordinates of a basis of L^{-theta} (generators of Gamma)."""
        return [tuple(x % 2 for x in row) for row in self._anti]

    def gamma_ambient_gens(self) -> List[Tuple[Fraction, ...]]:
        return [self.lat.to_ambient(row) for row in self._anti]

    def identity_component_gens(self) -> List[Vector]:
        """Skeleton coordinates of generators of the 2-torsion of the identity component."""
        return [tuple(x % 2 for x in row) for row in self._fixed]

    def gamma_group(self) -> FiniteAbelianGroup:
        """Gamma = L^{-theta}/2L^{-theta}, elementary abelian of order 2^(q+r)."""
        n = len(self._anti)
        labels = []
        for row in self._anti:
            amb = self.lat.to_ambient(row)
            labels.append(tuple(int(x) if Fraction(x).denominator == 1 else x for x in amb))
        return FiniteAbelianGroup(
            invariant_factors=(2,) * n,
            generator_labels=tuple(labels),
        )

    def pi0_group(self) -> FiniteAbelianGroup:
        """pi_0 = L^{-theta} / (1 - theta)L as an elementary 2-group."""
        if not self._anti:
            return FiniteAbelianGroup(invariant_factors=())
        anti = matfreeze(self._anti)
        img = []
        for row in self._one_minus:
            x = solve_integer(anti, row)
            if x is None:
                raise CartanError("(1-theta)L is not inside L^{-theta}")
            img.append(x)
        m = len(anti)
        bigl = IntegerLattice.standard(m)
        small = IntegerLattice.from_rows(hermite_row_basis(img))
        return quotient(bigl, small)

    # -- point predicates (arguments are skeleton coordinate vectors) --------

    def is_in_skeleton(self, coords: Sequence[int]) -> bool:
        sp = F2Space(self.lat.dim, list(self._skeleton_gens))
        return sp.contains(coords)

    def in_identity_component(self, coords: Sequence[int]) -> bool:
        sp = F2Space(self.lat.dim, self.identity_component_gens())
        return sp.contains(tuple(x % 2 for x in coords))

    def component_decomposition(self, coords: Sequence[int]) -> Optional[Tuple[Vector, Vector]]:
        """Split a skeleton class as (Gamma part, theta-fixed part) mod 2L.

        Returns honest lattice representatives in L-coordinates: the first is
        theta-anti, the second theta-fixed, and their sum is the class mod 2L.
        """
        gens = self.gamma_coord_gens() + self.identity_component_gens()
        combo = f2_solve(gens, tuple(x % 2 for x in coords))
        if combo is None:
            return None
        ng = len(self.gamma_coord_gens())
        gpart = (0,) * self.lat.dim
        for bit, row in zip(combo[:ng], self._anti):
            if bit % 2:
                gpart = tuple(a + b for a, b in zip(gpart, row))
        fpart = (0,) * self.lat.dim
        for bit, row in zip(combo[ng:], self._fixed):
            if bit % 2:
                fpart = tuple(a + b for a, b in zip(fpart, row))
        return gpart, fpart

    def ambient_of(self, coords: Sequence[int]) -> Tuple[Fraction, ...]:
        return self.lat.to_ambient(coords)


def _f2_kernel(rows_mod2: Sequence[Sequence[int]]) -> List[Vector]:
    """Basis of {x : x @ rows == 0 mod 2}; rows may be rectangular."""
    k = len(rows_mod2)
    if k == 0:
        return []
    ncols = len(rows_mod2[0])
    candidates = [tuple(1 if i == j else 0 for j in range(k)) for i in range(k)]
    images = [tuple(row[j] % 2 for j in range(ncols)) for row in rows_mod2]
    basis: List[Tuple[Vector, Vector]] = []  # (image, preimage) pairs
    kernel: List[Vector] = []
    for img, pre in zip(images, candidates):
        cur_img, cur_pre = img, pre
        for bimg, bpre in basis:
            p = bimg.index(1)
            if cur_img[p] == 1:
                cur_img = tuple((a + b) % 2 for a, b in zip(cur_img, bimg))
                cur_pre = tuple((a + b) % 2 for a, b in zip(cur_pre, bpre))
        if any(cur_img):
            basis.append((cur_img, cur_pre))
            basis.sort(key=lambda t: t[0].index(1))
        else:
            kernel.append(cur_pre)
    return kernel


def _f2_sum(gens: Sequence[Vector], combo: Sequence[int], dim: int) -> Vector:
    acc = (0,) * dim
    for g, c in zip(gens, combo):
        if c % 2:
            acc = tuple((a + b) % 2 for a, b in zip(acc, g))
    return acc


# ---------------------------------------------------------------------------
# Cartan classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CartanClass:
    """Involution of X_* plus a grading of the imaginary roots."""

    datum: RootDatum
    theta: Matrix  # acts on cocharacter row vectors from the right
    grading: Tuple[Tuple[int, int], ...]  # (imaginary root index, 0/1), sorted
    chain: Tuple[Tuple[str, Vector], ...] = ()  # Cayley path from the base class

    _grading_map: Dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        rd = self.datum
        if matmul(self.theta, self.theta) != identity(rd.rank):
            raise CartanError("theta must be an involution")
        tt = transpose(self.theta)
        for i, alpha in enumerate(rd.roots):
            img = vecmat(alpha, tt)
            j = rd.root_index(img)  # raises NotARoot when theta does not permute roots
            if rd.coroot(img) != vecmat(rd.coroots[i], self.theta):
                raise CartanError("theta does not transport coroots coherently")
        object.__setattr__(self, "_grading_map", dict(self.grading))
        gm = self._grading_map
        imag = self.imaginary_indices()
        if set(gm) != set(imag):
            raise GradingInconsistent("grading must cover exactly the imaginary roots")
        for i in imag:
            neg = rd.root_index(vscale(-1, rd.roots[i]))
            if gm[i] != gm[neg]:
                raise GradingInconsistent("grading must be symmetric under negation")
        for i, j in itertools.combinations(imag, 2):
            s = vadd(rd.roots[i], rd.roots[j])
            if tuple(s) in rd._index:
                k = rd.root_index(s)
                if k in gm and gm[k] != (gm[i] + gm[j]) % 2:
                    raise GradingInconsistent("grading violates additivity")

    # -- root classification --------------------------------------------------

    def theta_on_root(self, alpha: Sequence[int]) -> Vector:
        return vecmat(alpha, transpose(self.theta))

    def classify_root(self, alpha: Sequence[int]) -> str:
        rd = self.datum
        idx = rd.root_index(alpha)  # raises NotARoot
        img = self.theta_on_root(alpha)
        if img == tuple(vscale(-1, alpha)):
            return REAL
        if img == tuple(alpha):
            return IMAGINARY_NONCOMPACT if self._grading_map[idx] else IMAGINARY_COMPACT
        return COMPLEX

    def imaginary_indices(self) -> Tuple[int, ...]:
        rd = self.datum
        tt = transpose(self.theta)
        return tuple(i for i, a in enumerate(rd.roots) if vecmat(a, tt) == a)

    def real_indices(self) -> Tuple[int, ...]:
        rd = self.datum
        tt = transpose(self.theta)
        return tuple(
            i for i, a in enumerate(rd.roots) if vecmat(a, tt) == tuple(vscale(-1, a))
        )

    def complex_indices(self) -> Tuple[int, ...]:
        excl = set(self.imaginary_indices()) | set(self.real_indices())
        return tuple(i for i in range(self.datum.nroots) if i not in excl)

    def noncompact_imaginary_indices(self) -> Tuple[int, ...]:
        return tuple(i for i in self.imaginary_indices() if self._grading_map[i])

    def sigma_on_root(self, alpha: Sequence[int]) -> Vector:
        return vscale(-1, self.theta_on_root(alpha))

    # -- torus structure ------------------------------------------------------

    def torus(self) -> RealTorus:
        return RealTorus(TorusLattice.standard(self.datum.rank), self.theta)

    @property
    def pqr(self) -> Tuple[int, int, int]:
        return self.torus().pqr

    @property
    def split_rank(self) -> int:
        _, q, r = self.pqr
        return q + r

    def gamma_order(self) -> int:
        _, q, r = self.pqr
        return 2 ** (q + r)

    # -- Cayley transforms -----------------------------------------------------

    def cayley(self, beta: Sequence[int]) -> "CartanClass":
        """Cayley transform through a noncompact imaginary root (toward split)."""
        rd = self.datum
        if self.classify_root(beta) != IMAGINARY_NONCOMPACT:
            raise NotNoncompactImaginary(f"{tuple(beta)} is not noncompact imaginary")
        new_theta = matmul(self.theta, rd.coreflection_matrix(beta))
        bv = rd.coroot(beta)
        new_grading = []
        for i, val in self.grading:
            if dot(rd.roots[i], bv) == 0:
                new_grading.append((i, val))
        cc = CartanClass(
            rd,
            new_theta,
            tuple(sorted(new_grading)),
            self.chain + (("up", tuple(beta)),),
        )
        if set(cc.imaginary_indices()) != {i for i, _ in new_grading}:
            raise GradingInconsistent("unexpected imaginary roots after Cayley transform")
        return cc

    def inverse_cayley(self, alpha: Sequence[int], weyl=None) -> "CartanClass":
        """Cayley transform through a real root (toward compact).

        The new grading is an additive extension keeping the old imaginary
        gradings with the Cayley partner of alpha noncompact.  When the F2
        system leaves free bits, all solutions must be W-conjugate (they are
        coordinate reorderings of the same real form); that check needs the
        Weyl group, so an ambiguous step without one aborts.
        """
        rd = self.datum
        if self.classify_root(alpha) != REAL:
            raise NotRealRoot(f"{tuple(alpha)} is not real")
        new_theta = matmul(self.theta, rd.coreflection_matrix(alpha))
        conditions = [(rd.roots[i], v) for i, v in self.grading] + [(tuple(alpha), 1)]
        solutions = solve_gradings(rd, new_theta, conditions)
        chain = self.chain + (("down", tuple(alpha)),)
        if len(solutions) == 1:
            return CartanClass(rd, new_theta, solutions[0], chain)
        if weyl is None:
            raise GradingInconsistent(
                "grading after Cayley transform has free bits; a Weyl group is "
                "needed to certify the solutions are conjugate"
            )
        classes = [CartanClass(rd, new_theta, g, chain) for g in solutions]
        keys = {_class_orbit_key(c, weyl) for c in classes}
        if len(keys) != 1:
            raise GradingInconsistent(
                f"inverse Cayley grading is genuinely ambiguous: {len(keys)} classes"
            )
        return classes[0]

    # -- real root type ---------------------------------------------------------

    def real_root_type(self, alpha: Sequence[int]) -> str:
        if self.classify_root(alpha) != REAL:
            raise NotRealRoot(f"{tuple(alpha)} is not real")
        torus = self.torus()
        for g in torus.gamma_ambient_gens():
            val = dot(tuple(alpha), g)
            if Fraction(val) % 2 == 1:
                return "II"
        return "I"


def make_grading_from_noncompact_simples(
    rd: RootDatum, theta: Matrix, noncompact: Sequence[int]
) -> Tuple[Tuple[int, int], ...]:
    """Grading from 0/1 marks on the simple roots of the imaginary system.

    noncompact lists positions (into the imaginary simple system, in the
    order returned by imaginary_simple_roots) that are noncompact; extension
    to all imaginary roots is linear over the imaginary root lattice.
    """
    imag_simples, imag_idx = imaginary_simple_roots(rd, theta)
    marks = [1 if i in set(noncompact) else 0 for i in range(len(imag_simples))]
    grading = []
    if imag_simples:
        basis = matfreeze(imag_simples)
        for i in imag_idx:
            coeffs = solve_rational(basis, rd.roots[i])
            if coeffs is None or any(c.denominator != 1 for c in coeffs):
                raise GradingInconsistent("imaginary root outside the simple span")
            val = sum(int(c) * m for c, m in zip(coeffs, marks)) % 2
            grading.append((i, val))
    return tuple(sorted(grading))


def solve_gradings(rd: RootDatum, theta: Matrix, conditions) -> List[Tuple[Tuple[int, int], ...]]:
    """All additive gradings of the theta-imaginary roots matching conditions.

    conditions is a list of (root vector, 0/1); raises when the F2 system is
    inconsistent.
    """
    simples, imag_idx = imaginary_simple_roots(rd, theta)
    if not simples:
        return [()]
    basis = matfreeze(simples)
    rows = []
    vals = []
    for root, v in conditions:
        coeffs = solve_rational(basis, root)
        if coeffs is None or any(c.denominator != 1 for c in coeffs):
            raise GradingInconsistent("grading condition root outside the imaginary span")
        rows.append(tuple(int(c) % 2 for c in coeffs))
        vals.append(v % 2)
    k = len(simples)
    marks0 = _f2_transpose_solve(rows, vals, k)
    if marks0 is None:
        raise GradingInconsistent("grading conditions are inconsistent")
    cond_matrix = [tuple(rows[c][j] for c in range(len(rows))) for j in range(k)]
    kern = _f2_kernel(cond_matrix)

    def extend(marks):
        grading = []
        for i in imag_idx:
            coeffs = solve_rational(basis, rd.roots[i])
            val = sum(int(c) * m for c, m in zip(coeffs, marks)) % 2
            grading.append((i, val))
        return tuple(sorted(grading))

    out = []
    for bits in itertools.product((0, 1), repeat=len(kern)):
        marks = list(marks0)
        for b, kv in zip(bits, kern):
            if b:
                marks = [(m + x) % 2 for m, x in zip(marks, kv)]
        out.append(extend(tuple(marks)))
    return sorted(set(out))


def _f2_transpose_solve(rows, vals, k):
    """Solve sum_j rows[c][j]*x_j = vals[c] mod 2 for x in F2^k."""
    aug = [list(r) + [v] for r, v in zip(rows, vals)]
    pivots = []
    rr = 0
    for col in range(k):
        piv = next((i for i in range(rr, len(aug)) if aug[i][col] % 2 == 1), None)
        if piv is None:
            continue
        aug[rr], aug[piv] = aug[piv], aug[rr]
        for i in range(len(aug)):
            if i != rr and aug[i][col] % 2 == 1:
                aug[i] = [(a + b) % 2 for a, b in zip(aug[i], aug[rr])]
        pivots.append(col)
        rr += 1
    for i in range(rr, len(aug)):
        if aug[i][k] % 2 == 1:
            return None
    x = [0] * k
    for idx, col in enumerate(pivots):
        x[col] = aug[idx][k] % 2
    return tuple(x)


def imaginary_simple_roots(rd: RootDatum, theta: Matrix):
    """Simple system of the imaginary roots w.r.t. the default positivity.

    Simples that are also simple for the whole datum come first, in datum
    order, so grading positions are stable for equal-rank forms.
    """
    tt = transpose(theta)
    imag_idx = tuple(i for i, a in enumerate(rd.roots) if vecmat(a, tt) == a)
    pos = default_positive_roots(rd)
    pos_set = {tuple(a) for a in pos}
    pos_imag = [rd.roots[i] for i in imag_idx if rd.roots[i] in pos_set]
    sums = set()
    for a, b in itertools.combinations(pos_imag, 2):
        sums.add(tuple(vadd(a, b)))
    simples = [a for a in pos_imag if tuple(a) not in sums]
    datum_simples = list(rd.simple_roots())

    def order_key(a):
        if a in datum_simples:
            return (0, datum_simples.index(a))
        return (1, a)

    simples.sort(key=order_key)
    return simples, imag_idx


# ---------------------------------------------------------------------------
# operations from the spec surface
# ---------------------------------------------------------------------------

def classify_root(cc: CartanClass, alpha: Sequence[int]) -> str:
    return cc.classify_root(alpha)


def special_positive_system(
    cc: CartanClass, lam: Optional[Sequence] = None
) -> PositiveSystem:
    """A special positive system; with lam, positive imaginary roots follow lam."""
    rd = cc.datum
    torus = cc.torus()
    anti = [torus.lat.to_ambient(row) for row in torus._anti]
    fixed = [torus.lat.to_ambient(row) for row in torus._fixed]
    imag = set(cc.imaginary_indices())
    if lam is not None:
        for i in imag:
            if _pair(rd.roots[i], None, lam, rd) == 0:
                raise SingularLambda("lambda is singular on an imaginary root")

    for mult in (3, 5, 7, 11, 13):
        v = _generic_combo(anti, mult, rd.rank)
        u = _generic_combo(fixed, mult + 2, rd.rank)
        chosen = []
        ok = True
        for i, alpha in enumerate(rd.roots):
            if i in imag:
                key2 = _pair(alpha, None, lam, rd) if lam is not None else dot(alpha, u)
                if key2 == 0:
                    ok = False
                    break
                if key2 > 0:
                    chosen.append(i)
            else:
                key1 = dot(alpha, v)
                if key1 == 0:
                    ok = False
                    break
                if key1 > 0:
                    chosen.append(i)
        if ok and 2 * len(chosen) == rd.nroots:
            ps = PositiveSystem(rd, frozenset(chosen))
            _assert_special(cc, ps)
            return ps
    raise NoSpecialSystem("could not build a special positive system")


def _pair(alpha, _unused, lam, rd):
    cv = rd.coroot(alpha)
    val = 0
    for a, b in zip(lam, cv):
        val = val + a * b
    return as_real_fraction(val)


def as_real_fraction(x) -> Fraction:
    """Coerce a pairing value to an exact real Fraction; rejects complex data."""
    if isinstance(x, complex):
        if abs(x.imag) > 1e-12:
            raise CartanError(f"pairing {x} is not real")
        x = x.real
    if isinstance(x, float):
        f = Fraction(x).limit_denominator(10 ** 9)
        if abs(float(f) - x) > 1e-12:
            raise CartanError(f"pairing {x} is not rational")
        return f
    return Fraction(x)


def _generic_combo(vectors, mult, n):
    if not vectors:
        return (Fraction(0),) * n
    acc = [Fraction(0)] * n
    m = 1
    for vec in vectors:
        for i, x in enumerate(vec):
            acc[i] += m * Fraction(x)
        m *= mult
    return tuple(acc)


def _assert_special(cc: CartanClass, ps: PositiveSystem):
    rd = cc.datum
    for i in ps.indices:
        alpha = rd.roots[i]
        if cc.classify_root(alpha) == COMPLEX:
            if not ps.contains(cc.sigma_on_root(alpha)):
                raise NoSpecialSystem("sigma does not stabilize the complex positives")


def is_special(cc: CartanClass, ps: PositiveSystem) -> bool:
    try:
        _assert_special(cc, ps)
        return True
    except NoSpecialSystem:
        return False


def zeta_cx_vector(cc: CartanClass, s_choice: Optional[Sequence[int]] = None) -> Vector:
    """Sum of one complex root per {+-a, +-sigma(a)} orbit (exponent vector)."""
    rd = cc.datum
    if s_choice is not None:
        reps = list(s_choice)
    else:
        seen: Set[int] = set()
        reps = []
        for i in cc.complex_indices():
            if i in seen:
                continue
            alpha = rd.roots[i]
            orbit = {
                i,
                rd.root_index(vscale(-1, alpha)),
                rd.root_index(cc.sigma_on_root(alpha)),
                rd.root_index(vscale(-1, cc.sigma_on_root(alpha))),
            }
            seen |= orbit
            reps.append(i)
    acc = (0,) * rd.rank
    for i in reps:
        acc = vadd(acc, rd.roots[i])
    return tuple(acc)


def zeta_cx_value(cc: CartanClass, y: Sequence, s_choice=None) -> int:
    """zeta_cx at exp(pi*i*Y) for Y in the -theta part; always +-1."""
    svec = zeta_cx_vector(cc, s_choice)
    val = sum(Fraction(a) * Fraction(b) for a, b in zip(svec, y))
    if val.denominator != 1:
        raise CartanError("zeta_cx exponent is not integral at this class")
    return -1 if int(val) % 2 else 1


def commutator(h_descriptor, m_beta_root, cc: CartanClass) -> int:
    """{h, m_beta} per the sign rules; h is (Y, in_identity_component)."""
    if cc.classify_root(m_beta_root) != REAL:
        raise NotRealRoot(f"{tuple(m_beta_root)} is not real")
    y, in_h0 = h_descriptor
    if in_h0:
        return 1
    val = sum(Fraction(a) * Fraction(b) for a, b in zip(m_beta_root, y))
    if val.denominator != 1:
        raise CartanError("pairing is not integral")
    return -1 if int(val) % 2 else 1


def central_class_generators(rd: RootDatum, theta: Matrix) -> List[Vector]:
    """Skeleton classes Y of the order-<=2 central real elements exp(pi*i*Y)."""
    torus = RealTorus(TorusLattice.standard(rd.rank), theta)
    sk = torus.skeleton_generators()
    if not sk:
        return []
    simples = rd.simple_roots()
    if not simples:
        return f2_echelon(sk)
    cond = [tuple(dot(alpha, g) % 2 for alpha in simples) for g in sk]
    sols = _f2_kernel(cond)
    out = [_f2_sum(sk, s, rd.rank) for s in sols]
    return f2_echelon(out)


_Z0_GENS_CACHE: Dict = {}


def real_group_connected(rd: RootDatum, split_theta: Matrix) -> bool:
    """G = H_s G^0, so G is connected iff every component class of the
    maximally split Cartan lies in Gamma_r(H_s) H_s^0."""
    torus = RealTorus(TorusLattice.standard(rd.rank), split_theta)
    tt = transpose(split_theta)
    real_coroots = [
        tuple(v % 2 for v in rd.coroots[i])
        for i, a in enumerate(rd.roots)
        if vecmat(a, tt) == tuple(vscale(-1, a))
    ]
    span = real_coroots + torus.identity_component_gens()
    for g in torus.gamma_coord_gens():
        if f2_solve(span, tuple(v % 2 for v in g)) is None:
            return False
    return True


def z0_component_skeleton_gens(
    rd: RootDatum,
    theta: Matrix,
    commutator_form=None,
    split_theta: Optional[Matrix] = None,
) -> List[Vector]:
    """Skeleton generators of Z_0(G)H^0 inside the order-2 classes.

    Central elements of any 2-power order contribute their component class
    [(1-theta)v]; the grid denominator follows the 2-part of the center.
    For a disconnected real group, Z_0(G) is cut out of Z(G) by the cover's
    commutator form against the split Cartan's component classes.
    """
    key = (rd, theta, commutator_form, split_theta)
    if key in _Z0_GENS_CACHE:
        return _Z0_GENS_CACHE[key]
    from .rootdata import center_torsion

    n = rd.rank
    torus = RealTorus(TorusLattice.standard(n), theta)
    central = list(central_class_generators(rd, theta))
    if split_theta is not None and not real_group_connected(rd, split_theta):
        if commutator_form is None:
            raise CartanError(
                "the real group is disconnected; Z_0(G) needs the cover's "
                "commutator form"
            )
        split_torus = RealTorus(TorusLattice.standard(n), split_theta)
        comp_gens = split_torus.gamma_coord_gens()
        cond = [
            tuple(dot(vecmat(tuple(z), commutator_form), g) % 2 for g in comp_gens)
            for z in central
        ]
        sols = _f2_kernel(cond) if central else []
        central = [_f2_sum(central, s, n) for s in sols]
        disconnected = True
    else:
        disconnected = False
    gens = central + torus.identity_component_gens()
    two_part = 1
    for d in center_torsion(rd).invariant_factors:
        t = 1
        while d % 2 == 0:
            t *= 2
            d //= 2
        two_part = max(two_part, t)
    denom = 2 * two_part
    if denom > 2 and n <= 6:
        simples = rd.simple_roots()
        one_minus = matfreeze(
            tuple((1 if i == j else 0) - theta[i][j] for j in range(n)) for i in range(n)
        )
        if disconnected:
            split_torus = RealTorus(TorusLattice.standard(n), split_theta)
            comp_gens = split_torus.gamma_coord_gens()
        for ks in itertools.product(range(denom), repeat=n):
            v = tuple(Fraction(k, denom) for k in ks)
            if all(x == 0 for x in v):
                continue
            if simples and any((dot(a, v)).denominator != 1 for a in simples):
                continue
            w = vecmat(v, one_minus)  # (1 - theta) v
            if any(Fraction(x).denominator != 1 for x in w):
                continue
            if disconnected:
                yz = tuple(2 * x for x in v)
                if any(x.denominator != 1 for x in yz):
                    raise CartanError(
                        "order-4 central torsion in a disconnected real group "
                        "is not modeled"
                    )
                row = vecmat(tuple(int(x) % 2 for x in yz), commutator_form)
                if any(dot(row, g) % 2 for g in comp_gens):
                    continue  # the central element is outside Z_0(G)
            gens.append(tuple(int(x) % 2 for x in w))
    out = f2_echelon(gens)
    _Z0_GENS_CACHE[key] = out
    return out


def z0_membership(
    cc: CartanClass,
    y: Sequence[int],
    commutator_form=None,
    split_theta: Optional[Matrix] = None,
) -> bool:
    """Is exp(pi*i*Y) in Z_0(G)H^0 with trivial real-root commutators?"""
    rd = cc.datum
    for i in cc.real_indices():
        if dot(rd.roots[i], y) % 2 != 0:
            return False
    gens = z0_component_skeleton_gens(rd, cc.theta, commutator_form, split_theta)
    return f2_solve(gens, tuple(v % 2 for v in y)) is not None


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

@dataclass
class CartanEnumeration:
    classes: List[CartanClass]
    edges: List[Tuple[int, int, Vector]]  # (lower index, upper index, root)
    fundamental: int
    split: int

    def by_split_rank(self):
        return sorted(range(len(self.classes)), key=lambda i: self.classes[i].split_rank)


_WEYL_CACHE: Dict = {}
_ENUM_CACHE: Dict = {}


def weyl_for(rd: RootDatum, max_order: int = 10 ** 7) -> WeylGroup:
    key = (rd, max_order)
    if key not in _WEYL_CACHE:
        _WEYL_CACHE[key] = WeylGroup(rd, max_order=max_order)
    return _WEYL_CACHE[key]


def enumerate_cartans(base: CartanClass, weyl: Optional[WeylGroup] = None) -> CartanEnumeration:
    """Closure of the base class under Cayley transforms, deduplicated by W.

    The base must be fundamental (no real roots) or maximally split (no
    noncompact imaginary roots); closure then proceeds upward or downward
    so the grading stays determined.  Representatives are normalized so the
    split part of every class embeds in the split class's.
    """
    cache_key = (base.datum, base.theta, base.grading)
    if cache_key in _ENUM_CACHE:
        return _ENUM_CACHE[cache_key]
    rd = base.datum
    if weyl is None:
        weyl = weyl_for(rd)
    upward = len(base.real_indices()) == 0
    downward = len(base.noncompact_imaginary_indices()) == 0
    if not upward and not downward:
        raise CartanError("base class must be fundamental or maximally split")

    reps: List[CartanClass] = [base]
    keys = [_class_orbit_key(base, weyl)]
    edges: List[Tuple[int, int, Vector]] = []
    frontier = [0]
    while frontier:
        i = frontier.pop()
        cc = reps[i]
        moves = []
        if upward:
            for j in cc.noncompact_imaginary_indices():
                moves.append(("up", rd.roots[j]))
        else:
            for j in cc.real_indices():
                moves.append(("down", rd.roots[j]))
        for direction, root in moves:
            nxt = cc.cayley(root) if direction == "up" else cc.inverse_cayley(root, weyl)
            key = _class_orbit_key(nxt, weyl)
            if key in keys:
                k = keys.index(key)
            else:
                reps.append(nxt)
                keys.append(key)
                k = len(reps) - 1
                frontier.append(k)
            lo, hi = (i, k) if direction == "up" else (k, i)
            if (lo, hi, tuple(root)) not in edges:
                edges.append((lo, hi, tuple(root)))

    split_idx = max(range(len(reps)), key=lambda i: reps[i].split_rank)
    fund_idx = min(range(len(reps)), key=lambda i: reps[i].split_rank)
    reps = _normalize_split_embeddings(reps, split_idx, weyl)
    _validate_metaplectic_consistency(reps)
    for cc in reps:
        p, q, r = cc.pqr
        assert p + q + 2 * r == rd.rank
    out = CartanEnumeration(reps, edges, fund_idx, split_idx)
    _ENUM_CACHE[cache_key] = out
    return out


def _class_orbit_key(cc: CartanClass, weyl: WeylGroup):
    rd = cc.datum
    best = None
    theta_m = cc.theta
    for w in weyl.elements():
        m = weyl.matrix_on_cocharacters(w)
        inv = weyl.inverse(w)
        minv = weyl.matrix_on_cocharacters(inv)
        th = matmul(minv, matmul(theta_m, m))
        grading = tuple(sorted((w.perm[i], v) for i, v in cc.grading))
        key = (th, grading)
        if best is None or key < best:
            best = key
    return best


def _normalize_split_embeddings(reps, split_idx, weyl):
    rd = reps[0].datum
    split_torus = reps[split_idx].torus()
    split_anti = matfreeze(split_torus._anti)  # coords in the standard lattice

    def embeds(cc):
        t = cc.torus()
        for row in t._anti:
            img = row
            # row is already in standard coordinates
            if solve_rational(split_anti, img) is None:
                return False
        return True

    out = []
    for i, cc in enumerate(reps):
        if i == split_idx or embeds(cc):
            out.append(cc)
            continue
        found = None
        for w in weyl.elements():
            m = weyl.matrix_on_cocharacters(w)
            minv = weyl.matrix_on_cocharacters(weyl.inverse(w))
            th = matmul(minv, matmul(cc.theta, m))
            cand_anti = kernel_basis(
                matfreeze(
                    tuple((1 if a == b else 0) + th[a][b] for b in range(rd.rank))
                    for a in range(rd.rank)
                )
            )
            if all(solve_rational(split_anti, row) is not None for row in cand_anti):
                grading = tuple(sorted((w.perm[j], v) for j, v in cc.grading))
                found = CartanClass(rd, th, grading, cc.chain + (("conj", tuple(w.word)),))
                break
        if found is None:
            raise CartanError("could not align a Cartan class with the split torus")
        out.append(found)
    return out


def _validate_metaplectic_consistency(reps):
    """Oddly laced: the existence of a long real/noncompact-imaginary root is
    a property of the group, so it must agree across all Cartan classes."""
    rd = reps[0].datum
    nfac = len(rd.factors)
    verdicts = []
    for cc in reps:
        per = []
        for f in range(nfac):
            has = False
            for i in list(cc.real_indices()) + list(cc.noncompact_imaginary_indices()):
                if rd.factor_of_root[i] == f and rd.is_long(rd.roots[i]):
                    has = True
                    break
            per.append(has)
        verdicts.append(tuple(per))
    base = None
    for v in verdicts:
        if base is None:
            base = v
        elif v != base:
            raise CartanError(
                f"metaplectic-root existence differs across Cartan classes: {verdicts}"
            )
