import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import sample_params
from parahyper.catalog import HC_IDS, PHC_IDS, hc, phc
from parahyper.classify import (
    Fingerprint,
    family_fingerprints,
    fingerprint,
    ideal_splitting,
    is_decomposable,
    match_family,
    separation_table,
)
from parahyper.lie import LieAlgebra, change_of_basis, direct_sum, is_ideal, structure_array
from parahyper.linalg import UsageError, random_unimodular
from parahyper.search import SearchConfig, SearchStatus

R2 = LieAlgebra(2, {(0, 1): {1: 1}}, ("A", "B"))  # [A, B] = B
ABELIAN2 = LieAlgebra.abelian(2, ("C", "D"))


def sample(cid):
    return phc(cid, sample_params(cid)).algebra


def float_dims(L):
    """dim [L, L] and dim Z(L) from numpy ranks, independent of the exact code."""
    C = np.array([[[float(c) for c in v] for v in row] for row in structure_array(L)])
    derived = np.linalg.matrix_rank(C.reshape(-1, L.dim))
    # v is central iff sum_j v_j C[i, j, :] = 0 for every i
    center = L.dim - np.linalg.matrix_rank(C.transpose(0, 2, 1).reshape(-1, L.dim))
    return derived, center


FROZEN = {
    "PHC1": Fingerprint(0, 4, True, True, 0, (0, 0, 4), True, False, (4, 0), True),
    "PHC2": Fingerprint(3, 1, False, False, 3, (2, 1, 1), False, False, (4, 3), False),
    "PHC3": Fingerprint(2, 1, True, False, 0, (1, 0, 3), True, False, (4, 2), False),
    "PHC4": Fingerprint(1, 2, True, True, 0, (0, 0, 4), True, False, (4, 1, 0), False),
    "PHC5": Fingerprint(1, 2, True, False, 0, (1, 0, 3), True, False, (4, 1), True),
    "PHC8": Fingerprint(2, 0, True, False, 0, (2, 0, 2), True, False, (4, 2), True),
    "HC2": Fingerprint(3, 1, False, False, 3, (0, 3, 1), False, False, (4, 3), False),
}


@pytest.mark.parametrize("cid", sorted(FROZEN))
def test_frozen_fingerprints(cid):
    L = hc(cid).algebra if cid in HC_IDS else phc(cid).algebra
    assert fingerprint(L) == FROZEN[cid]


@pytest.mark.parametrize("cid", PHC_IDS + HC_IDS)
def test_dimensions_match_float_oracle(cid):
    L = hc(cid).algebra if cid in HC_IDS else sample(cid)
    fp = fingerprint(L)
    assert (fp.dim_derived, fp.dim_center) == float_dims(L)


def test_heisenberg_derived_algebras():
    assert fingerprint(sample("PHC6")).derived_is_heisenberg
    assert fingerprint(sample("PHC10")).derived_is_heisenberg
    assert not fingerprint(sample("PHC9")).derived_is_heisenberg
    assert fingerprint(sample("PHC9")).derived_is_abelian


@given(st.sampled_from(PHC_IDS + HC_IDS), st.integers(0, 10**6))
@settings(max_examples=60)
def test_fingerprint_invariance(cid, seed):
    L = hc(cid).algebra if cid in HC_IDS else sample(cid)
    assert fingerprint(change_of_basis(L, random_unimodular(seed))) == fingerprint(L)


def test_fingerprint_rejects_other_dimensions():
    with pytest.raises(UsageError):
        fingerprint(LieAlgebra.abelian(3))
    with pytest.raises(UsageError):
        ideal_splitting(LieAlgebra.abelian(5))


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("parts", [(R2, R2), (R2, ABELIAN2), (ABELIAN2, ABELIAN2)])
def test_direct_sums_are_detected(parts, seed):
    L = change_of_basis(direct_sum(*parts, ("X", "Y", "Z", "W")), random_unimodular(seed))
    pair = ideal_splitting(L)
    assert pair is not None
    a, b = pair
    assert is_ideal(L, a) and is_ideal(L, b) and a.intersection(b).dim == 0 and a.dim + b.dim == 4
    assert not any(any(L.bracket(u, v)) for u in a.basis for v in b.basis)


@pytest.mark.parametrize("cid", ["PHC2", "PHC3", "PHC4", "PHC6", "PHC9", "PHC10"])
def test_indecomposable_entries(cid):
    assert not is_decomposable(sample(cid))


def test_separation_table_has_no_unseparated_pair():
    table = separation_table()
    assert len(table) == 15
    assert all(table.values())
    assert table[("PHC3", "PHC8")] == ["dim_center", "killing_signature", "decomposable"]


def test_match_family_examples():
    assert match_family(LieAlgebra.abelian(4)).candidates == ("PHC1",)
    assert match_family(hc("HC2").algebra).candidates == ()
    assert match_family(hc("HC4").algebra).candidates == ("PHC9",)
    m = match_family(change_of_basis(phc("PHC8").algebra, random_unimodular(8)), SearchConfig(restarts=50))
    assert set(m.candidates) == {"PHC7", "PHC8"}
    assert m.evidence.status is SearchStatus.Certified
    d = m.to_dict()
    assert d["candidates"] == ["PHC7", "PHC8"] and "not an isomorphism verdict" in d["note"]
    assert d["evidence"]["status"] == "Certified"


def test_phc7_grid_contains_split_samples():
    """Some PHC7 samples are r2 + r2, which is why PHC8 cannot be singled out."""
    assert fingerprint(phc("PHC8").algebra) in family_fingerprints("PHC7")
    assert fingerprint(phc("PHC7", {"a": 0, "b": 1}).algebra) == fingerprint(phc("PHC8").algebra)


@given(st.sampled_from(PHC_IDS), st.integers(0, 1000))
@settings(max_examples=25)
def test_match_family_contains_own_family(cid, seed):
    L = change_of_basis(sample(cid), random_unimodular(seed))
    m = match_family(L)
    assert cid in m.candidates
    for c in m.candidates:
        assert m.fingerprint in family_fingerprints(c)
