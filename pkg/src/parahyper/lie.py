"""Lie algebras given by structure constants, with classical invariants."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .forms import BilinearForm
from .linalg import (
    ZERO,
    Endomorphism,
    SingularMatrix,
    Subspace,
    UsageError,
    Vector,
    lincomb,
    nullspace,
    scalar,
    unit_vector,
    vector,
    zero_vector,
)

Terms = tuple[tuple[int, Fraction], ...]

DEFAULT_NAMES_4 = ("X", "Y", "Z", "W")


class JacobiError(UsageError):
    """The bracket table does not satisfy the Jacobi identity."""

    def __init__(self, defects):
        self.defects = defects
        where = ", ".join(f"({i},{j},{k})" for i, j, k, _ in defects)
        super().__init__(f"Jacobi identity fails at basis triples {where}")


def default_names(n: int) -> tuple[str, ...]:
    return DEFAULT_NAMES_4 if n == 4 else tuple(f"e{i + 1}" for i in range(n))


def _terms_from(value, n: int) -> Terms:
    """Accept a dense vector or a ``{k: coeff}`` mapping; return sparse terms."""
    if isinstance(value, Mapping):
        acc: dict[int, Fraction] = {}
        for k, c in value.items():
            if not 0 <= k < n:
                raise UsageError(f"basis index {k} out of range")
            acc[k] = acc.get(k, ZERO) + scalar(c)
        return tuple((k, c) for k, c in sorted(acc.items()) if c)
    v = vector(value)
    if len(v) != n:
        raise UsageError("bracket value has the wrong length")
    return tuple((k, c) for k, c in enumerate(v) if c)


class BracketTable:
    """Unvalidated antisymmetric bracket table (a "pre-algebra").

    ``constants`` maps ``(i, j)`` to the value of ``[e_i, e_j]``. Keys with
    ``i > j`` are folded onto ``(j, i)`` with a sign; only ``i < j`` is stored.
    """

    __slots__ = ("dim", "basis_names", "constants")

    def __init__(self, dim: int, constants: Mapping | None = None, basis_names: Sequence[str] | None = None):
        if dim < 1:
            raise UsageError("dimension must be positive")
        names = tuple(basis_names) if basis_names is not None else default_names(dim)
        if len(names) != dim:
            raise UsageError("basis_names length must equal dim")
        if len(set(names)) != dim:
            raise UsageError("basis names must be distinct")
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), value in (constants or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise UsageError(f"bracket index ({i},{j}) out of range")
            terms = _terms_from(value, dim)
            if i == j:
                if terms:
                    raise UsageError(f"[e{i}, e{i}] must be zero")
                continue
            sign = 1 if i < j else -1
            key = (min(i, j), max(i, j))
            slot = table.setdefault(key, {})
            for k, c in terms:
                slot[k] = slot.get(k, ZERO) + sign * c
        self.dim = dim
        self.basis_names = names
        self.constants: dict[tuple[int, int], Terms] = {
            key: tuple((k, c) for k, c in sorted(slot.items()) if c)
            for key, slot in sorted(table.items())
            if any(slot.values())
        }

    def structure_vector(self, i: int, j: int) -> Vector:
        """``[e_i, e_j]`` as a dense vector (antisymmetry applied)."""
        if i == j:
            return zero_vector(self.dim)
        sign = 1 if i < j else -1
        out = [ZERO] * self.dim
        for k, c in self.constants.get((min(i, j), max(i, j)), ()):
            out[k] = sign * c
        return tuple(out)

    def bracket(self, u: Sequence, v: Sequence) -> Vector:
        u, v = vector(u), vector(v)
        if len(u) != self.dim or len(v) != self.dim:
            raise UsageError(f"bracket expects vectors of length {self.dim}")
        return self._bracket(u, v)

    def _bracket(self, u: Vector, v: Vector) -> Vector:
        out = [ZERO] * self.dim
        for (i, j), terms in self.constants.items():
            ui, uj, vi, vj = u[i], u[j], v[i], v[j]
            coef = ui * vj if ui and vj else 0
            if uj and vi:
                coef -= uj * vi
            if coef:
                for k, c in terms:
                    out[k] += coef * c
        return tuple(out)

    def basis_vector(self, name_or_index) -> Vector:
        i = self.basis_names.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return unit_vector(self.dim, i)

    def __eq__(self, other) -> bool:
        return (
            type(self) is type(other)
            and self.dim == other.dim
            and self.basis_names == other.basis_names
            and self.constants == other.constants
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.basis_names, tuple(self.constants.items())))

    def __repr__(self) -> str:
        parts = []
        for (i, j), terms in self.constants.items():
            rhs = " + ".join(f"{c}*{self.basis_names[k]}" for k, c in terms)
            parts.append(f"[{self.basis_names[i]},{self.basis_names[j]}]={rhs}")
        return f"{type(self).__name__}({self.dim}; {'; '.join(parts) or 'abelian'})"


def jacobi_defect(table: BracketTable) -> list[tuple[int, int, int, Vector]]:
    """Basis triples ``i<j<k`` whose cyclic Jacobi sum is nonzero, with the sum."""
    n = table.dim
    e = [unit_vector(n, i) for i in range(n)]
    br = table.bracket
    out = []
    for i, j, k in combinations(range(n), 3):
        s = lincomb(
            (1, 1, 1),
            (br(br(e[i], e[j]), e[k]), br(br(e[j], e[k]), e[i]), br(br(e[k], e[i]), e[j])),
        )
        if any(s):
            out.append((i, j, k, s))
    return out


class LieAlgebra(BracketTable):
    """A bracket table that has passed the Jacobi check."""

    __slots__ = ()

    def __init__(self, dim: int, constants: Mapping | None = None, basis_names: Sequence[str] | None = None):
        super().__init__(dim, constants, basis_names)
        defects = jacobi_defect(self)
        if defects:
            raise JacobiError(defects)

    @classmethod
    def from_table(cls, table: BracketTable) -> "LieAlgebra":
        return cls(table.dim, dict(((i, j), dict(t)) for (i, j), t in table.constants.items()), table.basis_names)

    @classmethod
    def abelian(cls, n: int, basis_names: Sequence[str] | None = None) -> "LieAlgebra":
        return cls(n, {}, basis_names)


def bracket(L: BracketTable, u: Sequence, v: Sequence) -> Vector:
    return L.bracket(u, v)


def ad(L: BracketTable, u: Sequence) -> Endomorphism:
    """The adjoint map ``v -> [u, v]``."""
    return Endomorphism.from_images([L.bracket(u, unit_vector(L.dim, j)) for j in range(L.dim)])


def bracket_span(L: BracketTable, a: Subspace, b: Subspace) -> Subspace:
    """Span of ``[a, b]`` for two subspaces."""
    return Subspace(L.dim, [L.bracket(x, y) for x in a.basis for y in b.basis])


def derived_subalgebra(L: BracketTable) -> Subspace:
    n = L.dim
    return Subspace(n, [L.structure_vector(i, j) for i, j in L.constants])


def center(L: BracketTable) -> Subspace:
    """Kernel of the stacked adjoint maps."""
    return centralizer(L, Subspace.whole(L.dim))


def centralizer(L: BracketTable, s: Subspace) -> Subspace:
    n = L.dim
    stacked = []
    for b in s.basis:
        stacked.extend(ad(L, b).rows)
    if not any(any(r) for r in stacked):
        return Subspace.whole(n)
    return Subspace(n, nullspace(tuple(stacked), n))


def derived_series(L: BracketTable) -> list[Subspace]:
    """``g, g^(1), g^(2), ...`` until the terms stop changing."""
    series = [Subspace.whole(L.dim)]
    while True:
        nxt = bracket_span(L, series[-1], series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)
        if nxt.dim == 0:
            return series


def lower_central_series(L: BracketTable) -> list[Subspace]:
    """``g, [g,g], [g,[g,g]], ...`` until the terms stop changing."""
    whole = Subspace.whole(L.dim)
    series = [whole]
    while True:
        nxt = bracket_span(L, whole, series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)
        if nxt.dim == 0:
            return series


def is_solvable(L: BracketTable) -> bool:
    return derived_series(L)[-1].dim == 0


def is_nilpotent(L: BracketTable) -> bool:
    return lower_central_series(L)[-1].dim == 0


def killing_form(L: BracketTable) -> BilinearForm:
    n = L.dim
    ads = [ad(L, unit_vector(n, i)) for i in range(n)]
    gram = [[(ads[i] @ ads[j]).trace() for j in range(n)] for i in range(n)]
    return BilinearForm(gram)


def change_of_basis(L: LieAlgebra, P: Endomorphism) -> LieAlgebra:
    """Transport ``L`` to the basis ``f_i = P e_i``.

    The new constants are ``c'_{ij} = P^{-1} [P e_i, P e_j]``, so that
    ``P`` becomes an isomorphism from the result onto ``L``.
    """
    if P.dim != L.dim:
        raise UsageError("basis change has the wrong size")
    try:
        Pinv = P.inverse()
    except SingularMatrix as exc:
        raise UsageError("basis change matrix is singular") from exc
    cols = P.columns()
    consts = {}
    for i, j in combinations(range(L.dim), 2):
        v = Pinv(L.bracket(cols[i], cols[j]))
        if any(v):
            consts[(i, j)] = v
    return type(L)(L.dim, consts, L.basis_names) if isinstance(L, LieAlgebra) else BracketTable(L.dim, consts, L.basis_names)


def direct_sum(a: BracketTable, b: BracketTable, basis_names: Sequence[str] | None = None) -> LieAlgebra:
    n = a.dim + b.dim
    consts = {}
    for (i, j), t in a.constants.items():
        consts[(i, j)] = {k: c for k, c in t}
    for (i, j), t in b.constants.items():
        consts[(a.dim + i, a.dim + j)] = {a.dim + k: c for k, c in t}
    return LieAlgebra(n, consts, basis_names)


def from_names(names: Sequence[str], relations: Mapping[tuple[str, str], Mapping[str, object]], validate: bool = True):
    """Build from named relations such as ``{("X", "Y"): {"W": 1}}``."""
    idx = {nm: i for i, nm in enumerate(names)}
    consts = {}
    for (p, q), rhs in relations.items():
        i, j = idx[p], idx[q]
        terms = {idx[k]: scalar(c) for k, c in rhs.items()}
        key = (i, j)
        if key in consts or (j, i) in consts:
            raise UsageError(f"duplicate relation for [{p}, {q}]")
        consts[key] = terms
    cls = LieAlgebra if validate else BracketTable
    return cls(len(names), consts, names)


def structure_array(L: BracketTable) -> list[list[Vector]]:
    """Dense ``C[i][j] = [e_i, e_j]``."""
    return [[L.structure_vector(i, j) for j in range(L.dim)] for i in range(L.dim)]


def is_ideal(L: BracketTable, s: Subspace) -> bool:
    return s.contains_subspace(bracket_span(L, Subspace.whole(L.dim), s))


def is_subalgebra(L: BracketTable, s: Subspace) -> bool:
    return s.contains_subspace(bracket_span(L, s, s))


def restricted_is_abelian(L: BracketTable, s: Subspace) -> bool:
    return bracket_span(L, s, s).dim == 0


def iter_basis(L: BracketTable) -> Iterable[Vector]:
    return (unit_vector(L.dim, i) for i in range(L.dim))
