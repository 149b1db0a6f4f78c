"""Isomorphism-invariant fingerprints and candidate matching against the catalog."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from itertools import permutations

from .catalog import PARAMETERS, PHC_IDS, parameter_grid, phc
from .lie import (
    BracketTable,
    ad,
    bracket_span,
    center,
    derived_series,
    derived_subalgebra,
    is_ideal,
    killing_form,
    lower_central_series,
)
from .linalg import Endomorphism, Subspace, UsageError, Vector, charpoly, dot, lincomb, nullspace, rank, rational_roots
from .search import SearchConfig, SearchResult, search_structure


@dataclass(frozen=True)
class Fingerprint:
    dim_derived: int
    dim_center: int
    solvable: bool
    nilpotent: bool
    dim_second_derived: int
    killing_signature: tuple[int, int, int]
    derived_is_abelian: bool
    derived_is_heisenberg: bool
    lower_central_dims: tuple[int, ...]
    decomposable: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["killing_signature"] = list(self.killing_signature)
        d["lower_central_dims"] = list(self.lower_central_dims)
        return d

    def differences(self, other: "Fingerprint") -> list[str]:
        return [k for k in self.__dataclass_fields__ if getattr(self, k) != getattr(other, k)]


# ------------------------------------------------------ decomposability


def _ideal_pair_ok(L: BracketTable, a: Subspace, b: Subspace) -> bool:
    return (
        a.dim == 2
        and b.dim == 2
        and a.intersection(b).dim == 0
        and is_ideal(L, a)
        and is_ideal(L, b)
        and bracket_span(L, a, b).dim == 0
    )


def _restricted(L: BracketTable, x: Vector, s: Subspace) -> Endomorphism:
    """Matrix of ``ad(x)`` on an ad-invariant subspace, in its echelon basis."""
    return Endomorphism.from_images([s.coordinates(L.bracket(x, b)) for b in s.basis])


def _invariant_lines(L: BracketTable, s: Subspace) -> list[Vector]:
    """Lines of ``s`` preserved by every ``ad(e_k)``.

    On an abelian ideal the restrictions commute, so an invariant line is
    an eigenline of the first restriction that is not scalar. If all are
    scalar there is no finite list; callers only use this when ``r2 + r2``
    is possible, where some restriction is not scalar.
    """
    ops = [_restricted(L, L.basis_vector(k), s) for k in range(L.dim)]
    pivot = next((m for m in ops if not m.is_scalar(m.rows[0][0])), None)
    if pivot is None:
        return []
    lines = []
    for r in rational_roots(charpoly(pivot.rows)):
        ker = (pivot - Endomorphism.identity(pivot.dim) * r).kernel()
        if len(ker) == 1 and all(rank([ker[0], m(ker[0])]) == 1 for m in ops):
            lines.append(lincomb(ker[0], s.basis))
    return lines


def _ideal_through(L: BracketTable, own: Vector, other: Vector) -> Subspace:
    """``{v : [v, other] = 0 and [L, v] lies in span(own)}``."""
    n = L.dim
    rows = list(ad(L, other).rows)
    forms = nullspace((own,), n)  # their common kernel is span(own)
    for k in range(n):
        m = ad(L, L.basis_vector(k))
        rows.extend(tuple(dot(f, m.column(q)) for q in range(n)) for f in forms)
    return Subspace(n, nullspace(tuple(rows), n))


def ideal_splitting(L: BracketTable) -> tuple[Subspace, Subspace] | None:
    """Two 2-dimensional ideals with ``L = I1 + I2`` (direct), or ``None``.

    In dimension 4 a split algebra is abelian, ``r2 + R^2`` or ``r2 + r2``
    (``r2`` the non-abelian 2-dimensional algebra). The first two are
    recognised from the centre; the last from the lines of the derived
    algebra that every ``ad`` preserves. Each returned pair is re-checked.
    """
    if L.dim != 4:
        raise UsageError("decomposability probe is for dimension 4")
    n = 4
    z = center(L)
    d = derived_subalgebra(L)
    e = [L.basis_vector(k) for k in range(n)]
    if z.dim == n:
        return Subspace(n, e[:2]), Subspace(n, e[2:])
    if z.dim == 2:
        if d.dim != 1 or d.intersection(z).dim:
            return None
        y = d.basis[0]
        x = next(v for v in e if any(L.bracket(v, y)))
        pair = (Subspace(n, [x, y]), z)
        return pair if _ideal_pair_ok(L, *pair) else None
    if z.dim != 0 or d.dim != 2 or bracket_span(L, d, d).dim:
        return None
    for y1, y2 in permutations(_invariant_lines(L, d), 2):
        pair = (_ideal_through(L, y1, y2), _ideal_through(L, y2, y1))
        if _ideal_pair_ok(L, *pair):
            return pair
    return None


def is_decomposable(L: BracketTable) -> bool:
    return ideal_splitting(L) is not None


# ------------------------------------------------------------ fingerprint


def _is_heisenberg(L: BracketTable, d: Subspace) -> bool:
    if d.dim != 3:
        return False
    dd = bracket_span(L, d, d)
    if dd.dim != 1:
        return False
    # [g', g'] central in g' makes g' nilpotent of class 2
    return bracket_span(L, d, dd).dim == 0


def fingerprint(L: BracketTable) -> Fingerprint:
    if L.dim != 4:
        raise UsageError("fingerprints are defined for dimension 4")
    ds = derived_series(L)
    d = ds[1] if len(ds) > 1 else ds[0]
    dd = bracket_span(L, d, d)
    lcs = lower_central_series(L)
    return Fingerprint(
        dim_derived=d.dim,
        dim_center=center(L).dim,
        solvable=ds[-1].dim == 0,
        nilpotent=lcs[-1].dim == 0,
        dim_second_derived=dd.dim,
        killing_signature=killing_form(L).signature(),
        derived_is_abelian=dd.dim == 0,
        derived_is_heisenberg=_is_heisenberg(L, d),
        lower_central_dims=tuple(s.dim for s in lcs),
        decomposable=is_decomposable(L),
    )


# ------------------------------------------------------------- matching


@lru_cache(maxsize=None)
def family_fingerprints(cid: str) -> frozenset[Fingerprint]:
    """Fingerprints of every grid sample of a catalog family."""
    samples = parameter_grid(cid) if cid in PARAMETERS else [{}]
    return frozenset(fingerprint(phc(cid, p).algebra) for p in samples)


@dataclass(frozen=True)
class MatchResult:
    fingerprint: Fingerprint
    candidates: tuple[str, ...]
    evidence: SearchResult | None = None

    def to_dict(self) -> dict:
        out = {"fingerprint": self.fingerprint.to_dict(), "candidates": list(self.candidates)}
        if self.evidence is not None:
            out["evidence"] = self.evidence.trace_json()
        out["note"] = "candidate set from invariants; not an isomorphism verdict"
        return out


def match_family(L: BracketTable, search: SearchConfig | bool | None = None) -> MatchResult:
    """Catalog families with a grid sample sharing ``L``'s fingerprint.

    With ``search`` truthy (a config or ``True``) and a non-empty candidate
    set, a structure search runs on ``L`` and its result is attached.
    """
    fp = fingerprint(L)
    cands = tuple(cid for cid in PHC_IDS if fp in family_fingerprints(cid))
    evidence = None
    if cands and search:
        cfg = search if isinstance(search, SearchConfig) else SearchConfig()
        evidence = search_structure(L, cfg)
    return MatchResult(fp, cands, evidence)


def separation_table(ids=("PHC1", "PHC2", "PHC3", "PHC4", "PHC5", "PHC8")) -> dict[tuple[str, str], list[str]]:
    """For each pair of ids, the fingerprint fields that differ (empty: not separated)."""
    fps = {cid: fingerprint(phc(cid).algebra) for cid in ids}
    return {(a, b): fps[a].differences(fps[b]) for i, a in enumerate(ids) for b in ids[i + 1 :]}
