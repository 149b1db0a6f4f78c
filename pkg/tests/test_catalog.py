from fractions import Fraction

import pytest

from parahyper.catalog import (
    HC_IDS,
    KNOWN_ERRATA,
    NO_COUNTERPART,
    PARAMETERS,
    PHC_IDS,
    CatalogError,
    VerificationReport,
    cross_reference,
    entry,
    hc,
    parameter_grid,
    phc,
    symbolic_jacobi_holds,
    verify_all,
    verify_entry,
    witness_holds,
)
from parahyper.lie import ad, derived_subalgebra, jacobi_defect
from parahyper.linalg import Endomorphism, charpoly, rational_roots
from parahyper.structures import StructureKind, is_integrable, triple_failures

X, Y, Z, W = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


@pytest.fixture(scope="module")
def report():
    return verify_all()


def test_verify_all_passes(report):
    assert report.all_passed
    hc_checks = {r.check for r in report.records if r.id in HC_IDS}
    assert hc_checks == {"jacobi"}
    assert {r.check for r in report.records if r.id == "PHC9"} >= {"j3_integrable", "metric"}


def test_errata_are_exactly_the_known_ones(report):
    assert report.errata == set(KNOWN_ERRATA) == {"PHC8", "PHC10"}
    for cid in KNOWN_ERRATA:
        e = phc(cid)
        assert e.corrected and e.note
        j1, j2 = e.printed_pair
        printed_ok = not triple_failures(j1, j2) and is_integrable(e.algebra, j2, StructureKind.Product) and is_integrable(
            e.algebra, j1, StructureKind.Complex
        )
        assert not printed_ok
    assert not phc("PHC3").corrected


def test_phc8_entry():
    e = phc("PHC8")
    assert e.algebra.bracket(X, Z) == X and e.algebra.bracket(Y, W) == Y
    # the corrected structure is the PHC7 table
    assert e.structure == phc("PHC7").structure


def test_parameter_validation():
    with pytest.raises(CatalogError):
        phc("PHC10", {"c": 0})
    with pytest.raises(CatalogError):
        phc("PHC1", {"a": 1})
    with pytest.raises(CatalogError):
        phc("PHC11")
    e = phc("PHC6", {"a": -3, "b": Fraction(1, 2)})
    assert e.label == "PHC6(a=-3, b=1/2)"
    assert phc("PHC9").params == {"a": 0, "b": 0, "c": 1}


def test_parameter_grid_respects_constraints():
    assert len(parameter_grid("PHC6")) == 49
    assert len(parameter_grid("PHC9")) == 7 * 7 * 6
    assert all(p["c"] != 0 for p in parameter_grid("PHC10"))
    assert parameter_grid("PHC1") == [{}]


@pytest.mark.parametrize("cid", [c for c in PHC_IDS if c in PARAMETERS])
def test_symbolic_jacobi(cid):
    assert symbolic_jacobi_holds(cid)


def test_hc_entries():
    L = hc("HC2").algebra
    assert L.bracket(X, Y) == W and L.bracket(Y, W) == X and L.bracket(W, X) == Y
    assert not any(any(L.bracket(Z, v)) for v in (X, Y, W))
    assert not hc("HC1").algebra.constants
    assert jacobi_defect(hc("HC5").algebra) == []
    assert all(hc(c).structure is None for c in HC_IDS)
    assert entry("hc3").id == "HC3"


def test_corrupted_structure_is_reported_not_raised():
    e = phc("PHC3")
    j2 = e.structure.j2
    cols = j2.columns()
    cols[1] = (0, 0, 0, 0)  # drop the image of Y
    rep = VerificationReport()
    verify_entry("PHC3", {}, e.algebra, (e.structure.j1, Endomorphism.from_images(cols)), rep)
    assert not rep.all_passed
    assert rep.failures[0].check == "triple"


def test_cross_references():
    (r4,) = cross_reference("HC4")
    assert r4.target == "PHC9" and r4.params["a"] == 0 and r4.params["b"] == 0
    (r2,) = cross_reference("HC2")
    assert r2.target == NO_COUNTERPART
    (r5,) = cross_reference("HC5")
    assert r5.target == "PHC10" and r5.params == {"a": 0, "b": 0, "c": 1}
    for cid in ("HC1", "HC4", "HC5"):
        assert all(witness_holds(r) for r in cross_reference(cid))
    assert [(r.source, r.target) for r in cross_reference("PHC9")] == [("PHC9", "HC4")]


def test_hc3_needs_an_irrational_basis_change():
    (r3,) = cross_reference("HC3")
    assert r3.target == "PHC7" and r3.witness is None and not witness_holds(r3)
    L7 = phc("PHC7", r3.params).algebra
    L3 = hc("HC3").algebra

    def ad_on_derived(L):
        d = derived_subalgebra(L)
        return Endomorphism.from_images([d.coordinates(L.bracket(W, b)) for b in d.basis])

    cp7 = charpoly(ad_on_derived(L7).rows)
    assert rational_roots(cp7) == []  # t^2 - t - 1 up to sign
    assert cp7[1] ** 2 - 4 * cp7[0] * cp7[2] == 5
    assert sorted(rational_roots(charpoly(ad_on_derived(L3).rows))) == [0, 1]
    assert ad(L7, W).trace() == ad(L3, W).trace()
