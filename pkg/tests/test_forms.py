import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from parahyper.forms import BilinearForm
from parahyper.linalg import random_unimodular

entries = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def symmetric(draw, n=4):
    upper = {(i, j): draw(entries) for i in range(n) for j in range(i, n)}
    return [[upper[(min(i, j), max(i, j))] for j in range(n)] for i in range(n)]


def eigen_signature(gram, eps=1e-9):
    ev = np.linalg.eigvalsh(np.array(gram, dtype=float))
    return (int((ev > eps).sum()), int((ev < -eps).sum()), int((abs(ev) <= eps).sum()))


def test_examples():
    assert BilinearForm.diagonal((1, 1, -1, -1)).signature() == (2, 2, 0)
    assert BilinearForm.zero(4).signature() == (0, 0, 4)
    assert BilinearForm([[0, 1], [1, 0]]).signature() == (1, 1, 0)


def test_rejects_asymmetric():
    with pytest.raises(ValueError):
        BilinearForm([[0, 1], [0, 0]])


@given(symmetric())
def test_signature_matches_eigenvalues(g):
    assert BilinearForm(g).signature() == eigen_signature(g)


@given(symmetric(), st.integers(0, 5000))
def test_sylvester_inertia(g, seed):
    B = BilinearForm(g)
    assert B.pullback(random_unimodular(seed)).signature() == B.signature()


@given(symmetric())
def test_radical_dimension(g):
    B = BilinearForm(g)
    assert len(B.radical()) == B.signature()[2]
    for v in B.radical():
        assert all(B(v, e) == 0 for e in np.eye(4, dtype=int).tolist())
