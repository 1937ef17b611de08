"""Based root data for oddly-laced reductive groups and their Weyl groups.

Coordinates: the character lattice X is always Z^n in its own basis, so
roots are integer vectors, coroots are integer vectors in the dual basis,
and the pairing is the dot product.  Central torus directions are extra
coordinates carrying no roots.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .lattice import (
    FiniteAbelianGroup,
    IntegerLattice,
    Matrix,
    Vector,
    dot,
    hermite_row_basis,
    identity,
    inverse_unimodular,
    kernel_basis,
    matfreeze,
    matmul,
    quotient,
    solve_integer,
    solve_rational,
    vadd,
    vecmat,
    vscale,
    vsub,
)


class RootDatumError(Exception):
    pass


class UnsupportedType(RootDatumError):
    pass


class InvalidLattice(RootDatumError):
    pass


class NotARoot(RootDatumError):
    pass


ODDLY_LACED = {"A", "D", "E", "G"}


def cartan_matrix(kind: str, rank: int) -> Matrix:
    if kind == "A":
        if rank < 1:
            raise UnsupportedType("A_n needs n >= 1")
        edges = [(i, i + 1) for i in range(rank - 1)]
    elif kind == "D":
        if rank < 2:
            raise UnsupportedType("D_n needs n >= 2")
        edges = [(i, i + 1) for i in range(rank - 2)]
        if rank >= 3:
            edges.append((rank - 3, rank - 1))
    elif kind == "E":
        if rank not in (6, 7, 8):
            raise UnsupportedType("E_n needs n in {6,7,8}")
        chain = [0, 2, 3, 4, 5, 6, 7][: rank - 1]
        edges = [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
        edges.append((1, 3))
    elif kind == "G":
        if rank != 2:
            raise UnsupportedType("G_2 only")
        return ((2, -1), (-3, 2))
    else:
        raise UnsupportedType(f"type {kind} is not oddly laced")
    c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j in edges:
        c[i][j] = -1
        c[j][i] = -1
    return matfreeze(c)


WEYL_ORDERS = {
    "A": lambda n: _factorial(n + 1),
    "D": lambda n: (2 ** (n - 1)) * _factorial(n),
    "E": lambda n: {6: 51840, 7: 2903040, 8: 696729600}[n],
    "G": lambda n: 12,
}


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


# ---------------------------------------------------------------------------
# root datum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootDatum:
    """Roots/coroots in a fixed global indexing over X = Z^rank."""

    rank: int
    roots: Tuple[Vector, ...]
    coroots: Tuple[Vector, ...]
    simple_indices: Tuple[int, ...]
    factors: Tuple[Tuple[str, int], ...]
    factor_of_root: Tuple[int, ...]
    central_rank: int

    _index: Dict[Vector, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {r: i for i, r in enumerate(self.roots)})

    # -- basic queries ------------------------------------------------------

    @property
    def nroots(self) -> int:
        return len(self.roots)

    def root_index(self, alpha: Sequence[int]) -> int:
        try:
            return self._index[tuple(alpha)]
        except KeyError:
            raise NotARoot(f"{tuple(alpha)} is not a root")

    def coroot(self, alpha: Sequence[int]) -> Vector:
        return self.coroots[self.root_index(alpha)]

    def pairing(self, alpha: Sequence[int], beta: Sequence[int]) -> int:
        """<alpha, beta_coroot> for roots alpha, beta."""
        return dot(alpha, self.coroot(beta))

    def is_long(self, alpha: Sequence[int]) -> bool:
        cv = self.coroot(alpha)
        i = self.factor_of_root[self.root_index(alpha)]
        for j, beta in enumerate(self.roots):
            if self.factor_of_root[j] != i:
                continue
            if tuple(beta) in (tuple(alpha), tuple(vscale(-1, alpha))):
                continue
            if abs(dot(beta, cv)) > 1:
                return False
        return True

    def simple_roots(self) -> Tuple[Vector, ...]:
        return tuple(self.roots[i] for i in self.simple_indices)

    def simple_coroots(self) -> Tuple[Vector, ...]:
        return tuple(self.coroots[i] for i in self.simple_indices)

    def reflection_matrix(self, alpha: Sequence[int]) -> Matrix:
        """Matrix of s_alpha on X (acting on row vectors from the right)."""
        cv = self.coroot(alpha)
        n = self.rank
        return matfreeze(
            tuple((1 if i == j else 0) - cv[i] * alpha[j] for j in range(n)) for i in range(n)
        )

    def coreflection_matrix(self, alpha: Sequence[int]) -> Matrix:
        """Matrix of s_alpha on X_* (acting on row vectors from the right)."""
        cv = self.coroot(alpha)
        n = self.rank
        return matfreeze(
            tuple((1 if i == j else 0) - alpha[i] * cv[j] for j in range(n)) for i in range(n)
        )

    def reflect_root(self, alpha: Sequence[int], beta: Sequence[int]) -> Vector:
        """s_alpha(beta)."""
        return vsub(beta, vscale(self.pairing(beta, alpha), alpha))

    def root_span_lattice(self) -> Matrix:
        """Basis of the saturation X_d = X cap span_Q(roots)."""
        if not self.roots:
            return ()
        # kernel of the pairing with a basis of the perp of the coroot span
        perp = kernel_basis(matfreeze(zip(*self.coroots)))
        if not perp:
            return identity(self.rank)
        return kernel_basis(matfreeze(zip(*perp)))

    def derived_rank(self) -> int:
        return len(self.root_span_lattice())

    def rho(self, positive: Sequence[Sequence[int]]) -> Tuple[Fraction, ...]:
        acc = tuple(Fraction(0) for _ in range(self.rank))
        for a in positive:
            acc = tuple(x + Fraction(y) for x, y in zip(acc, a))
        return tuple(x / 2 for x in acc)


def _closure_from_simples(simple_roots, simple_coroots):
    """All (root, coroot) pairs generated by the simple reflections."""
    pairs = {(tuple(a), tuple(b)) for a, b in zip(simple_roots, simple_coroots)}
    frontier = list(pairs)
    while frontier:
        alpha, alphav = frontier.pop()
        for beta, betav in zip(simple_roots, simple_coroots):
            k = dot(alpha, betav)
            new = (vsub(alpha, vscale(k, beta)), vsub(alphav, vscale(dot(beta, alphav), betav)))
            if new not in pairs:
                pairs.add(new)
                frontier.append(new)
        neg = (vscale(-1, alpha), vscale(-1, alphav))
        if neg not in pairs:
            pairs.add(neg)
            frontier.append(neg)
    return sorted(pairs)


def build_root_datum(
    factors: Sequence[Tuple[str, int]],
    lattice="simply_connected",
    central_torus_rank: int = 0,
    simple_roots: Optional[Sequence[Sequence[int]]] = None,
    simple_coroots: Optional[Sequence[Sequence[int]]] = None,
) -> RootDatum:
    """Construct a validated RootDatum.

    lattice is "simply_connected", "adjoint", or "explicit"; the explicit
    form takes simple (co)roots in ambient Z^n coordinates with the central
    torus built in.
    """
    factors = tuple((str(k), int(r)) for k, r in factors)
    for kind, rk in factors:
        if kind not in ODDLY_LACED:
            raise UnsupportedType(f"type {kind} is excluded (not oddly laced)")
        cartan_matrix(kind, rk)  # validates the rank

    if lattice == "explicit":
        if simple_roots is None or simple_coroots is None:
            raise InvalidLattice("explicit lattice needs simple roots and coroots")
        sr = matfreeze(simple_roots)
        sc = matfreeze(simple_coroots)
        n = len(sr[0]) if sr else central_torus_rank
        blocks = [cartan_matrix(k, r) for k, r in factors]
        expected = _block_diag(blocks)
        got = matfreeze(tuple(dot(a, b) for b in sc) for a in sr)
        if got != expected:
            raise InvalidLattice("pairings of the given simple (co)roots do not match the type")
        pairs = _closure_from_simples(sr, sc) if sr else []
        roots = tuple(p[0] for p in pairs)
        coroots = tuple(p[1] for p in pairs)
        simple_idx = tuple(roots.index(tuple(a)) for a in sr)
        fac_of = _factor_assignment(roots, sr, sc, factors)
        return RootDatum(n, roots, coroots, simple_idx, factors, fac_of, central_torus_rank)

    semis = sum(r for _, r in factors)
    n = semis + central_torus_rank
    blocks = [cartan_matrix(k, r) for k, r in factors]
    cmat = _block_diag(blocks)
    # reference frame: fundamental-weight coordinates per factor, then center
    sr_ref = matfreeze(tuple(cmat[i]) + (0,) * central_torus_rank for i in range(semis))
    sc_ref = matfreeze(
        tuple(1 if j == i else 0 for j in range(n)) for i in range(semis)
    )
    if lattice == "simply_connected":
        basis = identity(n)
    elif lattice == "adjoint":
        rows = [sr_ref[i] for i in range(semis)]
        rows += [tuple(1 if j == semis + k else 0 for j in range(n)) for k in range(central_torus_rank)]
        basis = matfreeze(rows)
    else:
        basis = matfreeze(lattice)
        if len(basis) != n:
            raise InvalidLattice("lattice basis must be square of full rank")
    # X-coordinates: lambda = x @ basis, so x = lambda @ basis^{-1}
    sr_new = []
    for a in sr_ref:
        x = solve_integer(basis, a)
        if x is None:
            raise InvalidLattice("chosen lattice does not contain the root lattice")
        sr_new.append(x)
    bt = matfreeze(zip(*basis))
    sc_new = [vecmat(c, bt) for c in sc_ref]
    pairs = _closure_from_simples(sr_new, sc_new) if semis else []
    roots = tuple(p[0] for p in pairs)
    coroots = tuple(p[1] for p in pairs)
    simple_idx = tuple(roots.index(tuple(a)) for a in sr_new)
    fac_of = _factor_assignment(roots, matfreeze(sr_new), matfreeze(sc_new), factors)
    return RootDatum(n, roots, coroots, simple_idx, factors, fac_of, central_torus_rank)


def _block_diag(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return matfreeze(out)


def _factor_assignment(roots, sr, sc, factors) -> Tuple[int, ...]:
    starts = []
    off = 0
    for _, r in factors:
        starts.append((off, off + r))
        off += r
    out = []
    for alpha in roots:
        hit = None
        for fi, (a, b) in enumerate(starts):
            if any(dot(alpha, sc[i]) != 0 for i in range(a, b)):
                hit = fi
                break
        out.append(hit if hit is not None else -1)
    return tuple(out)


def is_acceptable(rd: RootDatum, positive: Optional[Sequence[Vector]] = None) -> bool:
    """True when rho extends to a character of the whole torus.

    Equivalent test: <rho, y> is integral for every cocharacter y orthogonal
    to the root-trivial directions of X.
    """
    if not rd.roots:
        return True
    if positive is None:
        positive = default_positive_roots(rd)
    rho = rd.rho(positive)
    k = kernel_basis(matfreeze(zip(*rd.coroots)))  # characters killing all coroots
    if k:
        kprime = kernel_basis(matfreeze(zip(*k)))  # cocharacters killing those
    else:
        kprime = identity(rd.rank)
    return all(dot(rho, y).denominator == 1 for y in kprime)


def default_positive_roots(rd: RootDatum) -> Tuple[Vector, ...]:
    """Positive system generated by the simple roots."""
    simples = rd.simple_roots()
    scs = rd.simple_coroots()
    out = []
    for alpha in rd.roots:
        coeffs = solve_rational(matfreeze(simples), alpha)
        if coeffs is None:
            raise RootDatumError("root outside simple span")
        s = sum(coeffs)
        out.append(alpha if s > 0 else None)
    return tuple(a for a in out if a is not None)


@dataclass(frozen=True)
class PositiveSystem:
    """Half of the roots, closed under addition within the root system."""

    datum: RootDatum
    indices: FrozenSet[int]

    def __post_init__(self):
        rd = self.datum
        if 2 * len(self.indices) != rd.nroots:
            raise RootDatumError("positive system must contain half the roots")
        for i in self.indices:
            if rd.root_index(vscale(-1, rd.roots[i])) in self.indices:
                raise RootDatumError("positive system contains a root and its negative")
        for i, j in itertools.combinations(sorted(self.indices), 2):
            s = vadd(rd.roots[i], rd.roots[j])
            if tuple(s) in rd._index and rd.root_index(s) not in self.indices:
                raise RootDatumError("positive system is not closed under addition")

    @staticmethod
    def from_roots(rd: RootDatum, roots: Sequence[Sequence[int]]) -> "PositiveSystem":
        return PositiveSystem(rd, frozenset(rd.root_index(a) for a in roots))

    def roots(self) -> Tuple[Vector, ...]:
        return tuple(self.datum.roots[i] for i in sorted(self.indices))

    def contains(self, alpha: Sequence[int]) -> bool:
        return self.datum.root_index(alpha) in self.indices

    def rho(self) -> Tuple[Fraction, ...]:
        return self.datum.rho(self.roots())


def rho_parts(ps: PositiveSystem, classify) -> Dict[str, Tuple[Fraction, ...]]:
    """Half-sums of positive roots split by a classification function.

    classify maps a root to 'real' | 'imaginary' | 'complex' (compactness of
    imaginary roots does not matter here).  Returns rho, rho_r, rho_i, rho_cx
    with rho = rho_r + rho_i + rho_cx exactly.
    """
    rd = ps.datum
    buckets = {"real": [], "imaginary": [], "complex": []}
    for alpha in ps.roots():
        kind = classify(alpha)
        if kind.startswith("imaginary"):
            kind = "imaginary"
        buckets[kind].append(alpha)
    out = {
        "rho": ps.rho(),
        "rho_r": rd.rho(buckets["real"]),
        "rho_i": rd.rho(buckets["imaginary"]),
        "rho_cx": rd.rho(buckets["complex"]),
    }
    assert tuple(
        a + b + c for a, b, c in zip(out["rho_r"], out["rho_i"], out["rho_cx"])
    ) == tuple(out["rho"])
    return out


# ---------------------------------------------------------------------------
# Weyl group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeylElement:
    """Permutation of the root index set plus a generating word."""

    perm: Tuple[int, ...]
    word: Tuple[int, ...]  # indices into rd.simple_indices

    def sign(self) -> int:
        return -1 if len(self.word) % 2 else 1

    def apply_index(self, i: int) -> int:
        return self.perm[i]

    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.perm))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # (self * other)(x) = self(other(x))
        return WeylElement(
            tuple(self.perm[p] for p in other.perm), self.word + other.word
        )


class WeylGroup:
    """Weyl group as permutations of the root list.

    Fully enumerated when the order fits under max_order, otherwise a lazy
    handle supporting membership tests and on-demand products.
    """

    def __init__(self, rd: RootDatum, max_order: int = 10 ** 7):
        self.datum = rd
        self.order = 1
        for kind, rank_ in rd.factors:
            self.order *= WEYL_ORDERS[kind](rank_)
        self._simple_perms = [self._perm_of_reflection(i) for i in rd.simple_indices]
        self.enumerated = self.order <= max_order
        self._elements: Optional[List[WeylElement]] = None
        self._cochar_cache: Dict[Tuple[int, ...], Matrix] = {}
        self._char_cache: Dict[Tuple[int, ...], Matrix] = {}
        if self.enumerated:
            self._elements = self._enumerate()
            assert len(self._elements) == self.order

    def _perm_of_reflection(self, root_idx: int) -> Tuple[int, ...]:
        rd = self.datum
        alpha = rd.roots[root_idx]
        return tuple(rd.root_index(rd.reflect_root(alpha, beta)) for beta in rd.roots)

    def identity_element(self) -> WeylElement:
        return WeylElement(tuple(range(self.datum.nroots)), ())

    def simple_reflection(self, j: int) -> WeylElement:
        return WeylElement(self._simple_perms[j], (j,))

    def reflection(self, alpha: Sequence[int]) -> WeylElement:
        """s_alpha as a WeylElement with a word in simple reflections."""
        rd = self.datum
        idx = rd.root_index(alpha)
        pos = self._positive_mask()
        if not pos[idx]:
            idx = rd.root_index(vscale(-1, rd.roots[idx]))
        # conjugate a simple reflection: if u(alpha_j) = alpha then
        # s_alpha = u s_j u^{-1}; find u by height descent
        word: List[int] = []
        cur = idx
        while cur not in set(rd.simple_indices):
            moved = False
            for j, _sidx in enumerate(rd.simple_indices):
                img = self._simple_perms[j][cur]
                if pos[img] and _height(rd, rd.roots[img]) < _height(rd, rd.roots[cur]):
                    word.append(j)
                    cur = img
                    moved = True
                    break
            if not moved:
                raise RootDatumError("reflection descent failed")
        j0 = rd.simple_indices.index(cur)
        u = self.identity_element()
        for j in word:
            u = u * self.simple_reflection(j)
        return u * self.simple_reflection(j0) * self._inverse(u)

    def _inverse(self, w: WeylElement) -> WeylElement:
        inv = [0] * len(w.perm)
        for i, p in enumerate(w.perm):
            inv[p] = i
        return WeylElement(tuple(inv), tuple(reversed(w.word)))

    def inverse(self, w: WeylElement) -> WeylElement:
        return self._inverse(w)

    def _positive_mask(self):
        pos = default_positive_roots(self.datum)
        posidx = {self.datum.root_index(a) for a in pos}
        return [i in posidx for i in range(self.datum.nroots)]

    def _enumerate(self) -> List[WeylElement]:
        rd = self.datum
        seen = {}
        start = self.identity_element()
        seen[start.perm] = start
        self._cochar_cache[start.perm] = identity(rd.rank)
        self._char_cache[start.perm] = identity(rd.rank)
        s_cochar = [rd.coreflection_matrix(rd.roots[i]) for i in rd.simple_indices]
        s_char = [rd.reflection_matrix(rd.roots[i]) for i in rd.simple_indices]
        frontier = [start]
        while frontier:
            w = frontier.pop()
            for j in range(len(self._simple_perms)):
                nxt = w * self.simple_reflection(j)
                if nxt.perm not in seen:
                    seen[nxt.perm] = nxt
                    # (w s_j)(Y) = w(s_j(Y)): right-multiplication composes left
                    self._cochar_cache[nxt.perm] = matmul(
                        s_cochar[j], self._cochar_cache[w.perm]
                    )
                    self._char_cache[nxt.perm] = matmul(s_char[j], self._char_cache[w.perm])
                    frontier.append(nxt)
        return list(seen.values())

    def elements(self) -> List[WeylElement]:
        if not self.enumerated:
            raise RootDatumError(
                f"Weyl group of order {self.order} exceeds the enumeration bound; "
                "raise max_order to force a full sum"
            )
        return list(self._elements)

    def contains_permutation(self, perm: Sequence[int]) -> bool:
        """Descent test: does this root permutation come from the Weyl group?"""
        rd = self.datum
        pos = self._positive_mask()
        cur = list(perm)
        guard = rd.nroots + 2  # a reduced word never exceeds the number of positive roots
        steps = 0
        while True:
            if all(p == i for i, p in enumerate(cur)):
                return True
            j = next(
                (
                    jj
                    for jj, sidx in enumerate(rd.simple_indices)
                    if not pos[cur[sidx]]
                ),
                None,
            )
            if j is None:
                return False  # a nontrivial diagram automorphism survives
            sp = self._simple_perms[j]
            cur = [cur[sp[i]] for i in range(len(cur))]
            steps += 1
            if steps > guard:
                raise RootDatumError("descent did not terminate")

    def matrix_on_characters(self, w: WeylElement) -> Matrix:
        # row vectors act from the left, so the word composes right-to-left
        if w.perm in self._char_cache:
            return self._char_cache[w.perm]
        rd = self.datum
        m = identity(rd.rank)
        for j in reversed(w.word):
            m = matmul(m, rd.reflection_matrix(rd.roots[rd.simple_indices[j]]))
        self._char_cache[w.perm] = m
        return m

    def matrix_on_cocharacters(self, w: WeylElement) -> Matrix:
        if w.perm in self._cochar_cache:
            return self._cochar_cache[w.perm]
        rd = self.datum
        m = identity(rd.rank)
        for j in reversed(w.word):
            m = matmul(m, rd.coreflection_matrix(rd.roots[rd.simple_indices[j]]))
        self._cochar_cache[w.perm] = m
        return m


def _height(rd: RootDatum, alpha) -> Fraction:
    coeffs = solve_rational(matfreeze(rd.simple_roots()), alpha)
    return sum(coeffs)


def weyl_generate(rd: RootDatum, max_order: int = 10 ** 7) -> WeylGroup:
    return WeylGroup(rd, max_order=max_order)


def center_torsion(rd: RootDatum) -> FiniteAbelianGroup:
    """Character group of the center of the derived complex group.

    Computed as X/(Q + K) where Q is the root lattice and K the sublattice of
    characters trivial on the derived part; this is isomorphic to Z(G_d(C))
    as a finite abelian group.
    """
    if not rd.roots:
        return FiniteAbelianGroup(invariant_factors=())
    k = kernel_basis(matfreeze(zip(*rd.coroots)))
    gens = hermite_row_basis(matfreeze(rd.roots) + k)
    big = IntegerLattice.standard(rd.rank)
    small = IntegerLattice.from_rows(gens)
    return quotient(big, small)
