"""Shared fixtures: the small algebra zoo used across the suite."""

from fractions import Fraction

import pytest

from tiltkit.algebra import (
    Bimodule,
    FDAlgebra,
    PathAlgebraPresentation,
    Quiver,
    build_fd_algebra,
    glue_triangular,
)
from tiltkit.linalg import QQ, Matrix


def loop_pair_presentation(a, b, bound=None):
    """Two vertices x, y with loops d (at x) and t (at y) and an arrow f: x -> y,
    relations d^a = t^b = 0 and (d then f) = (f then t).

    The corner e_x A e_x is k[d]/d^a, the corner e_y A e_y is k[t]/t^b, and
    the connecting corner e_y A e_x has dimension min(a, b).  A nilpotency
    degree of 1 means the loop is absent (a length-1 relation would not be
    admissible), and the commutation relation degenerates to a zero relation.
    """
    arrows = [("f", "x", "y")]
    if a > 1:
        arrows.insert(0, ("d", "x", "x"))
    if b > 1:
        arrows.append(("t", "y", "y"))
    q = Quiver(["x", "y"], arrows)
    if bound is None:
        bound = max(a, b, min(a, b) + 1) + 1
    rels = []
    if a > 1:
        rels.append([(1, ("d",) * a)])
    if b > 1:
        rels.append([(1, ("t",) * b)])
    if a > 1 and b > 1:
        rels.append([(1, ("d", "f")), (-1, ("f", "t"))])
    elif a > 1:
        rels.append([(1, ("d", "f"))])
    elif b > 1:
        rels.append([(1, ("f", "t"))])
    return PathAlgebraPresentation(q, rels, bound)


def loop_pair_algebra(a, b, bound=None):
    return build_fd_algebra(loop_pair_presentation(a, b, bound))


def nilpotent_loop_algebra(b):
    """k[t]/t^b as a one-vertex path algebra."""
    q = Quiver(["y"], [("t", "y", "y")])
    rels = [[(1, ("t",) * b)]] if b >= 2 else []
    if b == 1:
        q = Quiver(["y"], [])
        return build_fd_algebra(PathAlgebraPresentation(q, [], 1))
    return build_fd_algebra(PathAlgebraPresentation(q, rels, b))


def a2_algebra():
    """Path algebra of x -> y."""
    q = Quiver(["x", "y"], [("g", "x", "y")])
    return build_fd_algebra(PathAlgebraPresentation(q, [], 2))


def product_kk_algebra():
    """k x k: two vertices, no arrows."""
    q = Quiver(["x", "y"], [])
    return build_fd_algebra(PathAlgebraPresentation(q, [], 1))


def matrix2_algebra():
    """Full 2x2 matrix algebra with diagonal distinguished idempotents."""
    # basis order: E11, E12, E21, E22
    z, o = Fraction(0), Fraction(1)

    def vec(k):
        v = [z] * 4
        v[k] = o
        return v

    zero = [z] * 4
    prod = {
        (0, 0): vec(0), (0, 1): vec(1), (0, 2): zero, (0, 3): zero,
        (1, 0): zero, (1, 1): zero, (1, 2): vec(0), (1, 3): vec(1),
        (2, 0): vec(2), (2, 1): vec(3), (2, 2): zero, (2, 3): zero,
        (3, 0): zero, (3, 1): zero, (3, 2): vec(2), (3, 3): vec(3),
    }
    table = [[prod[(i, j)] for j in range(4)] for i in range(4)]
    return FDAlgebra.from_structure_constants(
        QQ, ["E11", "E12", "E21", "E22"], table, [vec(0), vec(3)],
        idempotent_names=["1", "2"])


def jordan_bimodule(c, b, m):
    """The (C, B)-bimodule k^m where both loop generators act by the same
    nilpotent shift; C = k[t]/t^b, B = k[d]/d^a as built above, m <= min(a, b).

    Basis vector i (0-based) sits in degree i; t and d both send i -> i+1.
    """
    f = QQ
    z, o = f.zero(), f.one()

    def shift_power(p):
        rows = [[o if j + p == i else z for j in range(m)] for i in range(m)]
        return Matrix(f, rows, cols=m) if m else Matrix.zeros(f, 0, 0)

    # algebra basis elements of k[t]/t^b are 1, t, ..., t^{b-1} in path order
    left = [shift_power(k) for k in range(c.dim)]
    right = [shift_power(k) for k in range(b.dim)]
    return Bimodule(c, b, m, left, right,
                    block_row=[0] * m, block_col=[0] * m)


def glued_loop_fixture(a, b, m):
    """Triangular algebra glued from k[d]/d^a, k[t]/t^b and the Jordan bimodule."""
    B = nilpotent_loop_algebra(a)
    B.idempotent_names = ["x"]
    C = nilpotent_loop_algebra(b)
    C.idempotent_names = ["y"]
    return glue_triangular(B, C, jordan_bimodule(C, B, m))


@pytest.fixture(scope="session")
def kr32():
    return loop_pair_algebra(3, 2)


@pytest.fixture(scope="session")
def kr22():
    return loop_pair_algebra(2, 2)


@pytest.fixture(scope="session")
def kr12():
    return loop_pair_algebra(1, 2)


@pytest.fixture(scope="session")
def a2():
    return a2_algebra()


@pytest.fixture(scope="session")
def kk():
    return product_kk_algebra()


@pytest.fixture(scope="session")
def mat2():
    return matrix2_algebra()


@pytest.fixture(scope="session")
def dual_numbers():
    return nilpotent_loop_algebra(2)


def a3_zero_relation_algebra():
    """u -> v -> w with the composite zero; the simple at u has pd 2."""
    q = Quiver(["u", "v", "w"], [("a", "u", "v"), ("b", "v", "w")])
    return build_fd_algebra(PathAlgebraPresentation(q, [[(1, ("a", "b"))]], 3))


@pytest.fixture(scope="session")
def a3z():
    return a3_zero_relation_algebra()
