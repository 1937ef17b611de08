"""Exact integer-lattice and finite abelian 2-group arithmetic.

All computations here are over arbitrary-precision integers (and Fractions
for rational solves); no floating point enters this module.  Vectors are
tuples of ints, matrices are tuples of row tuples, and lattices act on row
vectors from the left (an element of the lattice with basis B is x @ B for
an integer row vector x).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

Vector = Tuple[int, ...]
Matrix = Tuple[Vector, ...]


class LatticeError(Exception):
    pass


class NotSublattice(LatticeError):
    pass


class DimensionMismatch(LatticeError):
    pass


# ---------------------------------------------------------------------------
# basic matrix helpers
# ---------------------------------------------------------------------------

def matfreeze(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]):
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch(f"{len(a[0])} columns vs {len(b)} rows")
    cols = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(m: Sequence[Sequence], v: Sequence):
    # v treated as a column: returns m @ v
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vecmat(v: Sequence, m: Sequence[Sequence]):
    # row vector times matrix
    if len(v) != len(m):
        raise DimensionMismatch(f"vector length {len(v)} vs {len(m)} rows")
    cols = list(zip(*m))
    return tuple(sum(x * y for x, y in zip(v, col)) for col in cols)


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def vadd(u: Sequence, v: Sequence):
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Sequence, v: Sequence):
    return tuple(x - y for x, y in zip(u, v))


def vscale(c, v: Sequence):
    return tuple(c * x for x in v)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise DimensionMismatch(f"{len(u)} vs {len(v)}")
    return sum(x * y for x, y in zip(u, v))


def dual_pairing(v: Sequence, w: Sequence):
    """Pairing of a character vector with a cocharacter vector."""
    return dot(v, w)


def det(m: Sequence[Sequence]) -> int:
    n = len(m)
    if n == 0:
        return 1
    _, d, _ = smith_normal_form(m)
    val = 1
    for i in range(n):
        val *= d[i][i]
    # smith_normal_form keeps diagonal nonnegative; recover the sign separately
    return val * _det_sign(m)


def _det_sign(m: Sequence[Sequence]) -> int:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        if a[c][c] < 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# Smith normal form with transformation matrices
# ---------------------------------------------------------------------------

def smith_normal_form(m: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U @ m @ V = D diagonal, d1 | d2 | ..., U, V unimodular."""
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def addmul_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # locate a pivot of minimal absolute value in the lower-right block
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        if piv[0] != t:
            swap_rows(t, piv[0])
        if piv[1] != t:
            swap_cols(t, piv[1])
        dirty = False
        for i in range(t + 1, rows):
            if a[i][t] != 0:
                q = a[i][t] // a[t][t]
                addmul_row(i, t, -q)
                if a[i][t] != 0:
                    dirty = True
        for j in range(t + 1, cols):
            if a[t][j] != 0:
                q = a[t][j] // a[t][t]
                addmul_col(j, t, -q)
                if a[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # divisibility sweep: pivot must divide every remaining entry
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            addmul_row(t, offender, 1)
            continue
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    return matfreeze(u), matfreeze(a), matfreeze(v)


def invariant_factors(m: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    _, d, _ = smith_normal_form(m)
    return tuple(d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)))


def inverse_unimodular(m: Sequence[Sequence[int]]) -> Matrix:
    n = len(m)
    u, d, v = smith_normal_form(m)
    for i in range(n):
        if d[i][i] != 1:
            raise LatticeError("matrix is not unimodular")
    return matmul(v, u)


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[Vector]:
    """Solve x @ a = b over the integers; None when no solution exists."""
    rows = len(a)
    if rows == 0:
        return () if all(x == 0 for x in b) else None
    u, d, v = smith_normal_form(a)
    bv = vecmat(b, v)
    y = []
    for i in range(rows):
        di = d[i][i] if i < min(rows, len(d[0])) else 0
        if di == 0:
            y.append(0)
        else:
            if bv[i] % di != 0:
                return None
            y.append(bv[i] // di)
    if any(bv[j] != 0 for j in range(rows, len(bv))):
        return None
    # consistency: columns beyond rank must vanish
    x = vecmat(tuple(y), u)
    if vecmat(x, a) != tuple(b):
        return None
    return x


def solve_rational(a: Sequence[Sequence], b: Sequence) -> Optional[Tuple[Fraction, ...]]:
    """Solve x @ a = b over the rationals; None when inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    # Gaussian elimination on the transpose system a^T x^T = b^T
    aug = [[Fraction(a[r][c]) for r in range(rows)] + [Fraction(b[c])] for c in range(cols)]
    pivots = []
    rr = 0
    for c in range(rows):
        piv = next((r for r in range(rr, cols) if aug[r][c] != 0), None)
        if piv is None:
            continue
        aug[rr], aug[piv] = aug[piv], aug[rr]
        pivval = aug[rr][c]
        aug[rr] = [x / pivval for x in aug[rr]]
        for r in range(cols):
            if r != rr and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[rr])]
        pivots.append(c)
        rr += 1
    for r in range(rr, cols):
        if aug[r][rows] != 0:
            return None
    x = [Fraction(0)] * rows
    for idx, c in enumerate(pivots):
        x[c] = aug[idx][rows]
    return tuple(x)


def kernel_basis(a: Sequence[Sequence[int]]) -> Matrix:
    """Integer basis of {x : x @ a = 0}; the result is saturated in Z^rows."""
    rows = len(a)
    if rows == 0:
        return ()
    u, d, _ = smith_normal_form(a)
    cols = len(a[0])
    out = []
    for i in range(rows):
        di = d[i][i] if i < min(rows, cols) else 0
        if di == 0:
            out.append(u[i])
    return tuple(out)


def rank(a: Sequence[Sequence[int]]) -> int:
    return len(a) - len(kernel_basis(a)) if a else 0


def hermite_row_basis(gens: Sequence[Sequence[int]]) -> Matrix:
    """Canonical row basis (HNF, pivots positive) of the lattice spanned by gens."""
    work = [list(map(int, r)) for r in gens if any(r)]
    if not work:
        return ()
    cols = len(work[0])
    basis: List[List[int]] = []
    row = 0
    for c in range(cols):
        piv = None
        for r in range(row, len(work)):
            if work[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        work[row], work[piv] = work[piv], work[row]
        # gcd-reduce the column below the pivot
        changed = True
        while changed:
            changed = False
            for r in range(row + 1, len(work)):
                if work[r][c] != 0:
                    if abs(work[r][c]) < abs(work[row][c]):
                        work[row], work[r] = work[r], work[row]
                    q = work[r][c] // work[row][c]
                    work[r] = [x - q * y for x, y in zip(work[r], work[row])]
                    if work[r][c] != 0:
                        changed = True
        if work[row][c] < 0:
            work[row] = [-x for x in work[row]]
        # reduce entries above the pivot
        for r in range(row):
            q = work[r][c] // work[row][c]
            if q:
                work[r] = [x - q * y for x, y in zip(work[r], work[row])]
        row += 1
        if row == len(work):
            break
    return matfreeze(r for r in work[:row] if any(r))


def lattice_intersection(a_rows: Sequence[Sequence], b_rows: Sequence[Sequence]) -> Matrix:
    """Basis of the intersection of two rational row lattices.

    Rows may have Fraction entries; the result rows are Fraction tuples.
    """
    if not a_rows or not b_rows:
        return ()
    den = 1
    for row in list(a_rows) + list(b_rows):
        for x in row:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
    a_int = [tuple(int(Fraction(x) * den) for x in row) for row in a_rows]
    b_int = [tuple(int(Fraction(x) * den) for x in row) for row in b_rows]
    stacked = matfreeze([row for row in a_int] + [tuple(-x for x in row) for row in b_int])
    ker = kernel_basis(stacked)
    out = []
    for k in ker:
        v = (0,) * len(a_int[0])
        for c, row in zip(k[: len(a_int)], a_int):
            v = vadd(v, vscale(c, row))
        out.append(v)
    basis = hermite_row_basis(out)
    return tuple(tuple(Fraction(x, den) for x in row) for row in basis)


def lattice_member(basis: Matrix, v: Sequence[int]) -> bool:
    if not basis:
        return all(x == 0 for x in v)
    return solve_integer(basis, tuple(v)) is not None


def lattice_sum(a: Matrix, b: Matrix) -> Matrix:
    return hermite_row_basis(tuple(a) + tuple(b))


def lattice_index(big: Matrix, small: Matrix):
    """Index [big : small] for equal-rank lattices (math.inf-free: raises otherwise)."""
    coeffs = []
    for row in small:
        x = solve_integer(big, row)
        if x is None:
            raise NotSublattice(f"{row} not in the big lattice")
        coeffs.append(x)
    facs = invariant_factors(coeffs)
    if len(small) < len(big) or any(f == 0 for f in facs):
        raise LatticeError("sublattice has smaller rank; index is infinite")
    idx = 1
    for f in facs:
        idx *= f
    return idx


# ---------------------------------------------------------------------------
# lattices and quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerLattice:
    """Full-rank lattice in its ambient Z^n, rows of basis = basis vectors."""

    rank: int
    basis: Matrix

    @staticmethod
    def standard(n: int) -> "IntegerLattice":
        return IntegerLattice(n, identity(n))

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "IntegerLattice":
        b = matfreeze(rows)
        if b and len(b) != len(b[0]):
            raise LatticeError("basis matrix must be square")
        if b and det(b) == 0:
            raise LatticeError("basis has zero determinant")
        return IntegerLattice(len(b), b)

    def contains(self, v: Sequence[int]) -> bool:
        return lattice_member(self.basis, v)

    def scaled(self, c: int) -> "IntegerLattice":
        return IntegerLattice(self.rank, matfreeze(vscale(c, row) for row in self.basis))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Quotient of lattices presented by invariant factors d1 | d2 | ...

    generator_labels[i] is an ambient vector mapping onto the i-th canonical
    generator; elements are tuples (a1, ..., ak) with ai taken mod di.
    """

    invariant_factors: Tuple[int, ...]
    generator_labels: Matrix = ()
    # projection data: solve against the big basis then change coordinates
    _big_basis: Matrix = ()
    _coord_map: Matrix = ()  # row vector x (coords in big basis) -> x @ _coord_map

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def identity_element(self) -> Vector:
        return (0,) * len(self.invariant_factors)

    def normal_form(self, coeffs: Sequence[int]) -> Vector:
        return tuple(c % d for c, d in zip(coeffs, self.invariant_factors))

    def project(self, v: Sequence[int]) -> Vector:
        """Canonical form of the class of an ambient vector."""
        x = solve_integer(self._big_basis, tuple(v))
        if x is None:
            raise NotSublattice(f"{v} is not in the ambient lattice")
        return self.normal_form(vecmat(x, self._coord_map))

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.normal_form(vadd(a, b))

    def neg(self, a: Sequence[int]) -> Vector:
        return self.normal_form(vscale(-1, a))

    def elements(self) -> List[Vector]:
        out = [()]
        for d in self.invariant_factors:
            out = [e + (a,) for e in out for a in range(d)]
        return out

    def element_order(self, a: Sequence[int]) -> int:
        n = 1
        for c, d in zip(self.normal_form(a), self.invariant_factors):
            if c:
                g = d // _gcd(c, d)
                n = n * g // _gcd(n, g)
        return n

    def characters(self) -> List["GroupCharacter"]:
        return [GroupCharacter(self, e) for e in self.elements()]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class GroupCharacter:
    """Character of a FiniteAbelianGroup, exponents per canonical generator."""

    group: FiniteAbelianGroup
    exponents: Tuple[int, ...]

    def angle(self, element: Sequence[int]) -> Fraction:
        """Value as a fraction t meaning exp(2*pi*i*t)."""
        t = Fraction(0)
        nf = self.group.normal_form(element)
        for e, a, d in zip(self.exponents, nf, self.group.invariant_factors):
            t += Fraction(e * a, d)
        return t % 1

    def value(self, element: Sequence[int]) -> complex:
        return phase_to_complex(self.angle(element))

    def is_trivial(self) -> bool:
        return all(e % d == 0 for e, d in zip(self.exponents, self.group.invariant_factors))


def phase_to_complex(t: Fraction) -> complex:
    t = Fraction(t) % 1
    table = {
        Fraction(0): 1 + 0j,
        Fraction(1, 2): -1 + 0j,
        Fraction(1, 4): 1j,
        Fraction(3, 4): -1j,
    }
    if t in table:
        return table[t]
    import cmath

    return cmath.exp(2j * cmath.pi * float(t))


def quotient(big: IntegerLattice, small: IntegerLattice) -> FiniteAbelianGroup:
    """Finite quotient big/small for a finite-index sublattice."""
    if big.rank != small.rank:
        raise NotSublattice("quotient requires equal ranks")
    coeffs = []
    for row in small.basis:
        x = solve_integer(big.basis, row)
        if x is None:
            raise NotSublattice(f"{row} is not in the big lattice")
        coeffs.append(x)
    a = matfreeze(coeffs)
    u, d, v = smith_normal_form(a)
    n = big.rank
    vinv = inverse_unimodular(v)
    # class of x @ big.basis is read off from w = x @ v: w_i mod d_i
    facs = []
    gens = []
    coord_rows = []
    for i in range(n):
        di = d[i][i]
        if di == 0:
            raise NotSublattice("sublattice is not of finite index")
        if di > 1:
            facs.append(di)
            gens.append(vecmat(vinv[i], big.basis))
            coord_rows.append(i)
    # x (coords in big basis) maps to the class ((x @ v)_i mod d_i) over retained i
    coord_map = matfreeze(tuple(v[r][i] for i in coord_rows) for r in range(n))
    return FiniteAbelianGroup(
        invariant_factors=tuple(facs),
        generator_labels=matfreeze(gens),
        _big_basis=big.basis,
        _coord_map=coord_map,
    )


# ---------------------------------------------------------------------------
# F2 linear algebra on bit tuples
# ---------------------------------------------------------------------------

BitVec = Tuple[int, ...]


@dataclass
class F2Space:
    """Subspace of F2^n kept as a reduced row-echelon basis."""

    dimension: int
    basis: List[BitVec] = field(default_factory=list)

    def __post_init__(self):
        rows = [tuple(x % 2 for x in r) for r in self.basis]
        self.basis = f2_echelon(rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return f2_reduce(self.basis, v) is not None

    def add_vector(self, v: Sequence[int]) -> bool:
        v = tuple(x % 2 for x in v)
        if self.contains(v):
            return False
        self.basis = f2_echelon(self.basis + [v])
        return True


def f2_echelon(rows: Sequence[Sequence[int]]) -> List[BitVec]:
    work = [tuple(x % 2 for x in r) for r in rows if any(x % 2 for x in r)]
    basis: List[BitVec] = []
    for r in work:
        r = _f2_reduce_against(basis, r)
        if any(r):
            basis.append(r)
            basis.sort(key=lambda x: x.index(1))
            # re-reduce for canonical form
            newbasis: List[BitVec] = []
            for b in basis:
                b = _f2_reduce_against(newbasis, b)
                if any(b):
                    newbasis.append(b)
                    newbasis.sort(key=lambda x: x.index(1))
            basis = newbasis
    return basis


def _f2_reduce_against(basis: Sequence[BitVec], v: Sequence[int]) -> BitVec:
    v = tuple(x % 2 for x in v)
    for b in basis:
        p = b.index(1)
        if v[p] == 1:
            v = tuple((x + y) % 2 for x, y in zip(v, b))
    return v


def f2_reduce(basis: Sequence[BitVec], v: Sequence[int]) -> Optional[BitVec]:
    """None when v is outside the span, else the (zero) residue."""
    r = _f2_reduce_against(basis, v)
    return r if not any(r) else None


def f2_solve(gens: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[BitVec]:
    """Express target as a 0/1 combination of gens over F2; None if impossible."""
    n = len(target)
    k = len(gens)
    rows = [tuple(x % 2 for x in g) + tuple(1 if i == j else 0 for j in range(k)) for i, g in enumerate(gens)]
    basis: List[BitVec] = []
    for r in rows:
        rr = r
        for b in basis:
            p = next(i for i in range(n) if b[i] == 1) if any(b[:n]) else None
            if p is not None and rr[p] == 1:
                rr = tuple((x + y) % 2 for x, y in zip(rr, b))
        if any(rr[:n]):
            basis.append(rr)
    v = tuple(x % 2 for x in target) + (0,) * k
    for b in basis:
        p = next(i for i in range(n) if b[i] == 1)
        if v[p] == 1:
            v = tuple((x + y) % 2 for x, y in zip(v, b))
    if any(v[:n]):
        return None
    return tuple(v[n:])


def f2_rank(rows: Sequence[Sequence[int]]) -> int:
    return len(f2_echelon(rows))
