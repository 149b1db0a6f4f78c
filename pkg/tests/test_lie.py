from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import sample_params
from parahyper.catalog import PHC_IDS, phc, symbolic_jacobi_holds
from parahyper.forms import BilinearForm
from parahyper.lie import (
    BracketTable,
    JacobiError,
    LieAlgebra,
    bracket,
    center,
    change_of_basis,
    derived_series,
    derived_subalgebra,
    is_nilpotent,
    is_solvable,
    jacobi_defect,
    killing_form,
    lower_central_series,
    structure_array,
)
from parahyper.linalg import Endomorphism, Subspace, UsageError, random_unimodular

X, Y, Z, W = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
vec = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=4, max_size=4).map(tuple)
ids = st.sampled_from(PHC_IDS)


def sample(cid):
    return phc(cid, sample_params(cid)).algebra


def test_bracket_examples():
    assert bracket(phc("PHC2").algebra, X, Y) == W
    assert bracket(phc("PHC6", {"a": 1, "b": 2}).algebra, X, W) == (1, 1, 2, 0)
    with pytest.raises(UsageError):
        bracket(phc("PHC2").algebra, X, (1, 0, 0))


@given(ids, vec, vec, vec, st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_bracket_is_bilinear_antisymmetric_and_jacobi(cid, u, v, w, s):
    L = sample(cid)
    br = L.bracket
    assert br(u, u) == (0, 0, 0, 0)
    assert br(u, v) == tuple(-c for c in br(v, u))
    lhs = br(tuple(a + s * b for a, b in zip(u, w)), v)
    assert lhs == tuple(a + s * b for a, b in zip(br(u, v), br(w, v)))
    cyc = [br(br(u, v), w), br(br(v, w), u), br(br(w, u), v)]
    assert tuple(sum(c) for c in zip(*cyc)) == (0, 0, 0, 0)


def test_jacobi_defect():
    assert jacobi_defect(BracketTable(4)) == []
    for a in (-2, Fraction(1, 3), 5):
        for b in (0, -1, Fraction(7, 2)):
            assert jacobi_defect(phc("PHC6", {"a": a, "b": b}).algebra) == []
    assert symbolic_jacobi_holds("PHC6")
    # hand oracle: [[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = X + 0 + X
    bad = BracketTable(3, {(0, 1): (0, 1, 0), (0, 2): (0, 0, 1), (1, 2): (1, 0, 0)})
    assert jacobi_defect(bad) == [(0, 1, 2, (2, 0, 0))]
    with pytest.raises(JacobiError):
        LieAlgebra(3, {(0, 1): (0, 1, 0), (0, 2): (0, 0, 1), (1, 2): (1, 0, 0)})
    # this table only looks suspicious; every cyclic sum vanishes
    assert jacobi_defect(BracketTable(3, {(0, 1): (0, 0, 1), (0, 2): (0, 0, 1)})) == []


def test_series_and_center():
    L = phc("PHC4").algebra
    assert derived_subalgebra(L).dim == 1 and center(L).dim == 2 and is_nilpotent(L)
    L = phc("PHC1").algebra
    assert center(L).dim == 4 and is_solvable(L)
    L = phc("PHC2").algebra
    assert derived_subalgebra(L) == Subspace(4, [X, Y, W])
    assert center(L) == Subspace(4, [Z])
    assert not is_solvable(L)


@pytest.mark.parametrize("cid", PHC_IDS)
def test_series_are_monotone_and_center_is_kernel(cid):
    L = sample(cid)
    for series in (derived_series(L), lower_central_series(L)):
        for big, small in zip(series, series[1:]):
            assert big.contains_subspace(small) and small.dim < big.dim
    for z in center(L).basis:
        for e in (X, Y, Z, W):
            assert not any(L.bracket(z, e))


def killing_oracle(L):
    """trace(ad_i ad_j) from float structure constants."""
    C = np.array([[[float(c) for c in v] for v in row] for row in structure_array(L)])
    ads = [C[i].T for i in range(L.dim)]
    return np.array([[np.trace(a @ b) for b in ads] for a in ads])


@pytest.mark.parametrize("cid", PHC_IDS)
def test_killing_form_matches_float_oracle(cid):
    L = sample(cid)
    exact = np.array([[float(x) for x in r] for r in killing_form(L).gram])
    assert np.allclose(exact, killing_oracle(L))


def test_killing_examples():
    assert killing_form(phc("PHC1").algebra).is_zero()
    assert killing_form(phc("PHC4").algebra).is_zero()
    assert killing_form(phc("PHC2").algebra) == BilinearForm.diagonal((-2, 2, 0, 2))
    assert killing_form(phc("PHC2").algebra).signature() == (2, 1, 1)


def test_change_of_basis_examples():
    L = phc("PHC5").algebra
    assert change_of_basis(L, Endomorphism.identity(4)) == L
    M = change_of_basis(L, Endomorphism.diagonal((2, 1, 1, 1)))
    assert M.bracket(X, Y) == X
    L7 = phc("PHC7", {"a": 1, "b": 0}).algebra
    assert jacobi_defect(change_of_basis(L7, random_unimodular(42))) == []
    with pytest.raises(UsageError):
        change_of_basis(L, Endomorphism.diagonal((1, 0, 1, 1)))


@given(ids, st.integers(0, 10_000), vec, vec)
def test_change_of_basis_is_isomorphism(cid, seed, u, v):
    L = sample(cid)
    P = random_unimodular(seed)
    M = change_of_basis(L, P)
    assert P(M.bracket(u, v)) == L.bracket(P(u), P(v))
    assert killing_form(M) == killing_form(L).pullback(P)


def test_determinism():
    L = sample("PHC10")
    assert killing_form(L) == killing_form(L)
    assert change_of_basis(L, random_unimodular(3)) == change_of_basis(L, random_unimodular(3))
