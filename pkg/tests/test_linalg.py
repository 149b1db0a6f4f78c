from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from parahyper.linalg import (
    Endomorphism,
    SingularMatrix,
    Subspace,
    charpoly,
    det,
    inverse,
    matmul,
    nullspace,
    poly_eval,
    primitive_vector,
    random_unimodular,
    rank,
    rational_roots,
    rational_sqrt,
    rref,
    scalar,
    solve,
    squarefree_part,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def matrices(n=4):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def test_scalar_is_canonical():
    assert scalar(Fraction(2, 4)) == Fraction(1, 2)
    assert scalar("-3/6") == Fraction(-1, 2)
    with pytest.raises(TypeError):
        scalar(0.5)


def test_rref_pivots_leftmost():
    r, piv = rref([[0, 2, 4], [1, 1, 1]])
    assert piv == (0, 1)
    assert r == ((1, 0, -1), (0, 1, 2))


@given(matrices())
def test_rank_matches_numpy(m):
    assert rank(m) == np.linalg.matrix_rank(np.array(m, dtype=float))


@given(matrices())
def test_nullspace_is_kernel(m):
    for v in nullspace(tuple(tuple(r) for r in m), 4):
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in m)
    assert len(nullspace(tuple(tuple(r) for r in m), 4)) == 4 - rank(m)


@given(matrices())
def test_inverse_and_det(m):
    d = det(m)
    assert abs(float(d) - np.linalg.det(np.array(m, dtype=float))) < 1e-6 * max(1, abs(float(d)))
    if d == 0:
        with pytest.raises(SingularMatrix):
            inverse(m)
    else:
        inv = inverse(m)
        assert matmul(m, inv) == tuple(tuple(Fraction(int(i == j)) for j in range(4)) for i in range(4))


@given(matrices(3), st.lists(small, min_size=3, max_size=3))
def test_solve(m, b):
    x = solve(m, b)
    if x is not None:
        assert all(sum(a * c for a, c in zip(r, x)) == bi for r, bi in zip(m, b))


def test_charpoly_and_roots():
    m = [[2, 0, 0], [0, 2, 0], [1, 0, -3]]
    cp = charpoly(m)
    assert cp == [1, -1, -8, 12]  # (t-2)^2 (t+3)
    assert sorted(rational_roots(cp)) == [-3, 2]
    assert squarefree_part(cp) == [1, 1, -6]
    assert poly_eval(cp, Fraction(2)) == 0


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-1)) is None


def test_primitive_vector():
    assert primitive_vector((Fraction(1, 2), Fraction(-3, 4), 0)) == (2, -3, 0)


@pytest.mark.parametrize("seed", range(20))
def test_random_unimodular(seed):
    P = random_unimodular(seed)
    assert abs(P.det()) == 1
    assert P == random_unimodular(seed)


def test_endomorphism_column_convention():
    J = Endomorphism.from_images([(0, 1), (-1, 0)])
    assert J((1, 0)) == (0, 1)
    assert J.column(0) == (0, 1)
    assert (J @ J) == Endomorphism.identity(2) * -1


@given(matrices(), matrices(), st.lists(small, min_size=4, max_size=4))
def test_composition_matches_matrix_product(a, b, v):
    A, B = Endomorphism(a), Endomorphism(b)
    assert (A @ B)(v) == A(B(v))


def test_subspace_operations():
    s = Subspace(3, [(1, 1, 0), (2, 2, 0), (0, 0, 1)])
    t = Subspace(3, [(1, 0, 0), (0, 1, 0)])
    assert s.dim == 2
    assert s.intersection(t) == Subspace(3, [(1, 1, 0)])
    assert s.contains((3, 3, -1)) and not s.contains((1, 0, 0))
    assert s.coordinates((3, 3, -1)) is not None
    assert len(s.complement_basis()) == 1
