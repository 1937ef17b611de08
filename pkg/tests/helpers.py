"""Shared constructions of the small groups used across the test suite."""

from liftchar.cartan import (
    CartanClass,
    make_grading_from_noncompact_simples,
)
from liftchar.lattice import identity, matfreeze
from liftchar.rootdata import build_root_datum


def neg_identity(n):
    return matfreeze([[-1 if i == j else 0 for j in range(n)] for i in range(n)])


def sl2r_split():
    rd = build_root_datum([("A", 1)])
    return CartanClass(rd, neg_identity(1), ())


def psl2r_split():
    rd = build_root_datum([("A", 1)], lattice="adjoint")
    return CartanClass(rd, neg_identity(1), ())


def su11_compact():
    rd = build_root_datum([("A", 1)])
    grading = make_grading_from_noncompact_simples(rd, identity(1), [0])
    return CartanClass(rd, identity(1), grading)


def su2_compact():
    rd = build_root_datum([("A", 1)])
    grading = make_grading_from_noncompact_simples(rd, identity(1), [])
    return CartanClass(rd, identity(1), grading)


def gl_datum(n):
    simple = [
        tuple(1 if j == i else (-1 if j == i + 1 else 0) for j in range(n))
        for i in range(n - 1)
    ]
    return build_root_datum(
        [("A", n - 1)],
        lattice="explicit",
        central_torus_rank=1,
        simple_roots=simple,
        simple_coroots=simple,
    )


def glnr_split(n):
    rd = gl_datum(n)
    return CartanClass(rd, neg_identity(n), ())


def gl_cover(n):
    """GL(n,R) cover data: off-diagonal Hilbert-symbol commutator form."""
    from liftchar.cover import CoverSpec

    form = matfreeze([[0 if i == j else 1 for j in range(n)] for i in range(n)])
    return CoverSpec(commutator_form=form)


def gl_triple(n):
    from liftchar.cover import QuotientSpec, validate_triple

    return validate_triple(glnr_split(n), gl_cover(n), QuotientSpec())


def u11_datum():
    return build_root_datum(
        [("A", 1)],
        lattice="explicit",
        central_torus_rank=1,
        simple_roots=[(1, -1)],
        simple_coroots=[(1, -1)],
    )


def u11_compact():
    rd = u11_datum()
    grading = make_grading_from_noncompact_simples(rd, identity(2), [0])
    return CartanClass(rd, identity(2), grading)


def d2_swap():
    rd = build_root_datum([("A", 1), ("A", 1)])
    theta = matfreeze([[0, 1], [1, 0]])
    return CartanClass(rd, theta, ())


def spin_compact(n, noncompact_simple_positions):
    """Simply connected D_n with compact base Cartan and the given grading."""
    rd = build_root_datum([("D", n)])
    grading = make_grading_from_noncompact_simples(
        rd, identity(n), noncompact_simple_positions
    )
    return CartanClass(rd, identity(n), grading)


def spin22_compact():
    # Spin(2,2): both simple roots of D2 noncompact
    return spin_compact(2, [0, 1])


def spin42_compact():
    # Spin(4,2): D3 with p-block {1,2}, q-block {3}
    return spin_compact(3, [1, 2])


def spin44_compact():
    # Spin(4,4): D4 with p-block {1,2}, q-block {3,4}: e2-e3 is the mixed simple
    return spin_compact(4, [1])


def spinstar8_compact():
    # Spin*(8): e_i - e_j compact, e_i + e_j noncompact
    return spin_compact(4, [3])


def su22_compact():
    rd = build_root_datum([("A", 3)])
    grading = make_grading_from_noncompact_simples(rd, identity(3), [1])
    return CartanClass(rd, identity(3), grading)


def d4_split():
    rd = build_root_datum([("D", 4)])
    return CartanClass(rd, neg_identity(4), ())
