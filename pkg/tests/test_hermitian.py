from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import sample_params
from parahyper.catalog import PHC_IDS, phc
from parahyper.forms import BilinearForm
from parahyper.hermitian import (
    AnchorIsNull,
    Degenerate,
    NotProportional,
    averaged_metric,
    averaged_metric_ladder,
    basis_criterion,
    classify_plane,
    default_metric,
    induced_signature,
    is_hermitian,
    is_hermitian_for_triple,
    is_null,
    metric_from_anchor,
    null_cone_3space,
    proportionality_check,
)
from parahyper.linalg import Endomorphism, Subspace, UsageError, random_unimodular, rank, vadd, vsub
from parahyper.structures import is_compatible_pair, j_of

Z = (0, 0, 1, 0)
vec = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=4, max_size=4).map(tuple)
ids = st.sampled_from(PHC_IDS)


@pytest.fixture(scope="module")
def phc1():
    t = phc("PHC1").structure
    return t, metric_from_anchor(t, Z)


def sample_triple(cid):
    return phc(cid, sample_params(cid)).structure


def test_anchor_examples(phc1):
    t, g = phc1
    assert g.signature() == (2, 2, 0)
    assert is_hermitian_for_triple(g, t)
    with pytest.raises(AnchorIsNull):
        metric_from_anchor(t, vadd(t.j1(Z), t.j2(Z)))
    assert metric_from_anchor(t, t.j1(Z)) == g


@given(ids, vec)
def test_anchored_metric_properties(cid, X):
    t = sample_triple(cid)
    assume(basis_criterion(t, None, X))
    g = metric_from_anchor(t, X)
    assert metric_from_anchor(t, t.j1(X)) == g
    assert g(X, X) == 1 and g(t.j2(X), t.j2(X)) == -1
    for u, v in ((X, (1, 2, 0, -1)), ((0, 1, 1, 3), (2, 0, -1, 1))):
        assert g(t.j1(u), t.j1(v)) == g(u, v)  # isometry
        assert g(t.j2(u), t.j2(v)) == -g(u, v)  # anti-isometry
    h, _ = default_metric(t)
    lam = proportionality_check(g, h)
    assert lam is not NotProportional and lam != 0


def test_averaged_metric(phc1):
    t, g = phc1
    assert averaged_metric(t, BilinearForm.diagonal((1, 1, 1, 1))) is Degenerate
    avg = averaged_metric(t, BilinearForm.diagonal((1, 2, 3, 4)))
    assert avg is not Degenerate and avg.signature() == (2, 2, 0) and is_hermitian_for_triple(avg, t)
    assert averaged_metric(t, g) == g.scaled(4)


@pytest.mark.parametrize("cid", PHC_IDS)
def test_averaged_ladder_is_proportional_to_anchor(cid):
    t = sample_triple(cid)
    avg = averaged_metric_ladder(t)
    assert is_hermitian_for_triple(avg, t)
    assert proportionality_check(avg, default_metric(t)[0]) is not NotProportional


def test_proportionality(phc1):
    t, g = phc1
    assert proportionality_check(g.scaled(3), g) == 3
    # metrics of different triples on the same space need not be proportional
    found = False
    for seed in range(20):
        other = t.conjugate(random_unimodular(seed))
        h, _ = default_metric(other)
        if proportionality_check(g, h) is NotProportional:
            assert not is_hermitian_for_triple(g, other)
            found = True
            break
    assert found


def test_basis_criterion_examples(phc1):
    t, g = phc1
    assert g(Z, Z) == 1 and basis_criterion(t, g, Z)
    Y = (1, 2, 0, 1)
    assert not is_null(g, Y)
    X = vadd(t.j1(Y), t.j2(Y))
    assert is_null(g, X) and not basis_criterion(t, g, X)


@given(ids, vec)
def test_basis_criterion_equivalence(cid, X):
    t = sample_triple(cid)
    g, _ = default_metric(t)
    assert basis_criterion(t, g, X) == (g(X, X) != 0)


def test_worked_planes(phc1):
    t, g = phc1
    W = Subspace(4, [Z, t.j1(Z)])
    assert classify_plane(t, g, W).tag == "Definite"
    assert classify_plane(t, g, Subspace(4, [Z, t.j2(Z)])).tag == "Lorentz"
    n = vadd(t.j1(Z), t.j2(Z))
    tn = classify_plane(t, g, Subspace(4, [n, vsub(Z, t.j3(Z))]))
    assert tn.tag == "TotallyNullB"
    plus = Subspace(4, (t.j2 - Endomorphism.identity(4)).kernel())
    ta = classify_plane(t, g, plus)
    assert ta.tag == "TotallyNullA"
    assert plus.sum(plus.image(j_of(t, ta.x))).dim == 4
    assert all(j_of(t, ta.y)(b) == b for b in plus.basis)
    r1 = classify_plane(t, g, Subspace(4, [Z, n]))
    assert r1.tag == "RankOne"
    with pytest.raises(UsageError):
        classify_plane(t, g, Subspace(4, [Z]))


def _preserves(J, W):
    return all(W.contains(J(b)) for b in W.basis)


@given(ids, vec, vec)
def test_plane_class_matches_induced_form(cid, u, v):
    t = sample_triple(cid)
    assume(rank([u, v]) == 2)
    g, _ = default_metric(t)
    W = Subspace(4, [u, v])
    pc = classify_plane(t, g, W)
    p, m, z = induced_signature(g, W)
    expected = {0: "Lorentz" if p == m else "Definite", 1: "RankOne"}.get(z)
    if expected:
        assert pc.tag == expected
    else:
        assert pc.tag in ("TotallyNullA", "TotallyNullB")
    if pc.tag == "Definite":
        assert _preserves(j_of(t, pc.x), W)
    if pc.tag == "Lorentz":
        assert _preserves(j_of(t, pc.y), W)
    if pc.normalized and pc.x is not None:
        assert is_compatible_pair(t, pc.x, pc.y)
    if pc.tag == "RankOne":
        N, X = pc.witnesses["N"], pc.witnesses["X"]
        assert vsub(j_of(t, pc.x)(X), j_of(t, pc.y)(X)) == N
    # scaling the metric keeps the tag
    assert classify_plane(t, g.scaled(5), W).tag == pc.tag
    if pc.tag == "Definite":
        assert classify_plane(t, g.scaled(-2), W).tag == "Definite"


def test_null_cone(phc1):
    t, g = phc1
    n = vadd(t.j1(Z), t.j2(Z))
    W = Subspace(4, [Z, n, t.j1(n)])
    N, plane1, minus = null_cone_3space(t, g, W)
    assert all(g(N, w) == 0 for w in W.basis)
    for P in (plane1, minus):
        assert P.dim == 2 and W.contains_subspace(P)
        assert all(g(a, b) == 0 for a in P.basis for b in P.basis)
    with pytest.raises(UsageError):
        null_cone_3space(t, g, Subspace(4, [Z, t.j1(Z), t.j2(Z)]))


def test_hermitian_rejects_wrong_structure(phc1):
    t, g = phc1
    assert is_hermitian(g, t.j1)
    assert not is_hermitian(g, Endomorphism.diagonal((1, -1, 1, -1)))
    assert Fraction(1) == g(Z, Z)
