"""Neutral hermitian metrics for para-hypercomplex triples and plane geometry."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .forms import BilinearForm
from .linalg import (
    ONE,
    ZERO,
    Endomorphism,
    Subspace,
    UsageError,
    Vector,
    inverse,
    lincomb,
    matmul,
    rank,
    rational_sqrt,
    solve,
    transpose,
    unit_vector,
    vadd,
    vector,
    vscale,
    vsub,
)
from .structures import PHTriple, Triple3, j_of


class AnchorIsNull(UsageError):
    """``(X, J1X, J2X, J3X)`` is dependent, so ``X`` is null for every hermitian metric."""


class _Marker:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name

    def __bool__(self) -> bool:
        return False


Degenerate = _Marker("Degenerate")
NotProportional = _Marker("NotProportional")

NEUTRAL = (ONE, ONE, -ONE, -ONE)


def _anchor_ladder(n: int) -> list[Vector]:
    singles = [unit_vector(n, i) for i in range(n)]
    pairs = [vadd(singles[0], singles[i]) for i in range(1, n)]
    return singles + pairs


ANCHOR_LADDER = tuple(_anchor_ladder(4))
# Diagonal seeds average to zero whenever J2 is diagonal and J1 permutes
# coordinates (the PHC7/PHC8 table), so the ladder ends with a dense seed.
SEED_LADDER = (
    BilinearForm.diagonal((1, 2, 3, 4)),
    BilinearForm.diagonal((1, 3, 9, 27)),
    BilinearForm(((4, 1, 0, 1), (1, 5, 2, 0), (0, 2, 6, 3), (1, 0, 3, 7))),
)


def is_hermitian(g: BilinearForm, J: Endomorphism) -> bool:
    """``g(JX, Y) = -g(X, JY)``, i.e. ``J^T G + G J = 0``."""
    G = g.gram
    JT_G = matmul(transpose(J.rows), G)
    G_J = matmul(G, J.rows)
    return all(a + b == 0 for r, s in zip(JT_G, G_J) for a, b in zip(r, s))


def is_hermitian_for_triple(g: BilinearForm, t: PHTriple) -> bool:
    return all(is_hermitian(g, J) for J in t.structures())


def frame(t: PHTriple, X: Sequence) -> list[Vector]:
    X = vector(X)
    return [X, t.j1(X), t.j2(X), t.j3(X)]


def metric_from_anchor(t: PHTriple, X: Sequence) -> BilinearForm:
    """The form with Gram ``diag(1, 1, -1, -1)`` in the frame ``(X, J1X, J2X, J3X)``."""
    if t.dim != 4:
        raise UsageError("anchored metrics are defined in dimension 4")
    X = vector(X)
    if len(X) != 4:
        raise UsageError("anchor must have length 4")
    f = frame(t, X)
    if rank(f) < 4:
        raise AnchorIsNull(f"anchor {[str(c) for c in X]} gives a dependent frame")
    Finv = inverse(transpose(tuple(f)))  # frame vectors as columns
    D = tuple(tuple(NEUTRAL[i] if i == j else ZERO for j in range(4)) for i in range(4))
    g = BilinearForm(matmul(matmul(transpose(Finv), D), Finv))
    if not is_hermitian_for_triple(g, t) or g.signature() != (2, 2, 0):
        raise ArithmeticError("anchored metric failed its postcondition; the triple is not valid")
    return g


def default_metric(t: PHTriple) -> tuple[BilinearForm, Vector]:
    """First anchor in the fixed ladder that is not null, with its metric."""
    for X in ANCHOR_LADDER:
        try:
            return metric_from_anchor(t, X), X
        except AnchorIsNull:
            continue
    raise AnchorIsNull("every anchor in the ladder is null")


def averaged_metric(t: PHTriple, seed: BilinearForm):
    """``s(X,Y) + s(J1X,J1Y) - s(J2X,J2Y) - s(J3X,J3Y)`` or ``Degenerate``."""
    j1, j2, j3 = t.structures()
    g = seed + seed.pullback(j1) - seed.pullback(j2) - seed.pullback(j3)
    if g.is_degenerate():
        return Degenerate
    return g


def averaged_metric_ladder(t: PHTriple) -> BilinearForm:
    for seed in SEED_LADDER:
        g = averaged_metric(t, seed)
        if g is not Degenerate:
            return g
    raise ArithmeticError("every seed in the ladder averaged to a degenerate form")


def proportionality_check(g: BilinearForm, h: BilinearForm):
    """``lam`` with ``g = lam * h``, or ``NotProportional``."""
    if g.dim != h.dim:
        return NotProportional
    lam = None
    for r, s in zip(g.gram, h.gram):
        for a, b in zip(r, s):
            if b == 0:
                if a != 0:
                    return NotProportional
                continue
            ratio = a / b
            if lam is None:
                lam = ratio
            elif ratio != lam:
                return NotProportional
    if lam is None or lam == 0:
        return NotProportional
    return lam


def is_null(g: BilinearForm, v: Sequence) -> bool:
    return g(v, v) == 0


def basis_criterion(t: PHTriple, g: BilinearForm, X: Sequence) -> bool:
    """Whether ``(X, J1X, J2X, J3X)`` is a basis; ``g`` is not consulted."""
    return rank(frame(t, X)) == t.dim


# ------------------------------------------------------------ hyperboloid


def frame_coordinates(t: PHTriple, X: Vector, v: Vector) -> Vector:
    """Coordinates of ``v`` in the frame ``(X, J1X, J2X, J3X)``."""
    sol = solve(transpose(tuple(frame(t, X))), v)
    if sol is None:
        raise AnchorIsNull("frame is not a basis")
    return sol


def _reflect_onto(src: Triple3, dst: Triple3) -> "callable":
    """Rational Lorentz reflection sending ``src`` to ``dst`` (same norm)."""
    if src == dst:
        return lambda u: u
    v = tuple(a - b for a, b in zip(src, dst))
    nv = Triple3(*v)
    q = nv.lorentz_norm()
    if q == 0:
        v = tuple(a + b for a, b in zip(src, dst))
        nv = Triple3(*v)
        q = nv.lorentz_norm()
        sign = -1
    else:
        sign = 1
    if q == 0:
        raise ArithmeticError("no reflection available")

    def apply(u: Triple3) -> Triple3:
        c = 2 * u.inner(nv) / q
        return Triple3(*(sign * (a - c * b) for a, b in zip(u, nv)))

    return apply


E1 = Triple3(1, 0, 0)
E2 = Triple3(0, 1, 0)


def complete_from_complex(x: Triple3) -> Triple3:
    """A rational ``y`` with norm -1 orthogonal to the unit timelike ``x``."""
    return _reflect_onto(E1, x)(E2)


def complete_from_product(y: Triple3) -> Triple3:
    """A rational ``x`` with norm 1 orthogonal to the unit spacelike ``y``."""
    return _reflect_onto(E2, y)(E1)


def split_null(n: Triple3) -> tuple[Triple3, Triple3]:
    """Compatible ``(x, y)`` with ``x - y = n`` for a nonzero null ``n``."""
    if n.lorentz_norm() != 0 or not any(n):
        raise UsageError("expected a nonzero null direction")
    # u with <u, n> = 1, then x = t n + u with <x, x> = 1
    u = Triple3(1 / n.x1, 0, 0)
    t = (1 - u.lorentz_norm()) / 2
    x = Triple3(*(t * a + b for a, b in zip(n, u)))
    y = Triple3(*(a - b for a, b in zip(x, n)))
    return x, y


# ------------------------------------------------------------ planes


class PlaneKind(enum.Enum):
    Definite = "Definite"
    Lorentz = "Lorentz"
    TotallyNullA = "TotallyNullA"
    TotallyNullB = "TotallyNullB"
    RankOne = "RankOne"


@dataclass(frozen=True)
class PlaneClass:
    """Classification of a 2-plane together with an adapted compatible pair.

    ``x`` and ``y`` give ``J1' = J_x`` and ``J2' = J_y``. In the definite and
    Lorentz cases the preserving direction may have a norm whose square root
    is irrational; then ``normalized`` is False and ``x`` (definite) or ``y``
    (Lorentz) is the unnormalised direction, which still preserves the plane.
    """

    kind: PlaneKind
    x: Triple3 | None
    y: Triple3 | None
    normalized: bool = True
    witnesses: dict = field(default_factory=dict)

    @property
    def tag(self) -> str:
        return self.kind.value


def _non_null_in(g: BilinearForm, basis: Sequence[Vector]) -> Vector | None:
    cands = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            cands += [vadd(basis[i], basis[j]), vsub(basis[i], basis[j])]
    return next((c for c in cands if g(c, c) != 0), None)


def _pseudo_orthonormal_direction(t: PHTriple, g: BilinearForm, basis):
    X = _non_null_in(g, basis)
    other = next(b for b in basis if rank([X, b]) == 2)
    Y = vsub(other, vscale(g(other, X) / g(X, X), X))
    c = frame_coordinates(t, X, Y)
    return X, Y, Triple3(c[1], c[2], c[3])


def _solve_fixing(t: PHTriple, basis: Sequence[Vector], eig: int) -> Triple3 | None:
    """``y`` with ``J_y w = eig * w`` on every ``w`` in ``basis``."""
    rows_, rhs = [], []
    for w in basis:
        imgs = [J(w) for J in t.structures()]
        for k in range(len(w)):
            rows_.append(tuple(img[k] for img in imgs))
            rhs.append(eig * w[k])
    sol = solve(tuple(rows_), tuple(rhs))
    return None if sol is None else Triple3(*sol)


def _preserves(J: Endomorphism, W: Subspace) -> bool:
    return all(W.contains(J(b)) for b in W.basis)


def classify_plane(t: PHTriple, g: BilinearForm, W: Subspace) -> PlaneClass:
    if W.dim != 2 or W.ambient_dim != t.dim or t.dim != 4:
        raise UsageError("classify_plane needs a 2-dimensional subspace of a 4-dimensional space")
    basis = list(W.basis)
    induced = g.restrict(basis)
    p, m, z = induced.signature()
    if z == 0:
        X, Y, dirn = _pseudo_orthonormal_direction(t, g, basis)
        k = dirn.lorentz_norm()
        r = rational_sqrt(abs(k))
        wit = {"X": X, "Y": Y}
        if p == 2 or m == 2:
            if r is None:
                return PlaneClass(PlaneKind.Definite, dirn, None, False, wit)
            x = Triple3(*(a / r for a in dirn))
            return PlaneClass(PlaneKind.Definite, x, complete_from_complex(x), True, wit)
        if r is None:
            return PlaneClass(PlaneKind.Lorentz, None, dirn, False, wit)
        y = Triple3(*(a / r for a in dirn))
        return PlaneClass(PlaneKind.Lorentz, complete_from_product(y), y, True, wit)
    if z == 2:
        if W.intersection(W.image(t.j1)).dim == 0:
            for eig in (1, -1):
                y = _solve_fixing(t, basis, eig)
                if y is not None:
                    y = y if eig == 1 else Triple3(*(-a for a in y))
                    x = complete_from_product(y)
                    return PlaneClass(PlaneKind.TotallyNullA, x, y, True, {"complement": W.image(j_of(t, x))})
            return PlaneClass(PlaneKind.TotallyNullA, None, None, True, {})
        if _preserves(t.j1, W) and _preserves(t.j2, W):
            return _totally_null_b(t, g, W)
        raise ArithmeticError("totally null plane is neither split by J1 nor invariant")
    # rank one: N spans the radical, X is any non-null vector of W
    rad = induced.radical()
    N = lincomb(rad[0], basis)
    X = _non_null_in(g, basis)
    c = frame_coordinates(t, X, N)
    x, y = split_null(Triple3(c[1], c[2], c[3]))
    return PlaneClass(PlaneKind.RankOne, x, y, True, {"N": N, "X": X})


def _totally_null_b(t: PHTriple, g: BilinearForm, W: Subspace) -> PlaneClass:
    # (J1 + J2') X = J1 (I - J3') X, so it suffices to find a non-null X with
    # (I - J3') X a nonzero element of W; J2' = +J2 or -J2 picks the eigenspace.
    for sgn in (1, -1):
        y = Triple3(0, sgn, 0)
        j3 = t.j1 @ j_of(t, y)
        minus = Subspace(4, (j3 + Endomorphism.identity(4)).kernel())
        plus = Subspace(4, (j3 - Endomorphism.identity(4)).kernel())
        common = W.intersection(minus)
        if common.dim == 0:
            continue
        w = common.basis[0]
        z = next((b for b in plus.basis if g(w, b) != 0), None)
        if z is None:
            continue
        X = vadd(vscale(Fraction(1, 2), w), z)
        return PlaneClass(PlaneKind.TotallyNullB, E1, y, True, {"X": X})
    return PlaneClass(PlaneKind.TotallyNullB, None, None, True, {})


def induced_signature(g: BilinearForm, W: Subspace) -> tuple[int, int, int]:
    return g.restrict(W.basis).signature()


def null_cone_3space(t: PHTriple, g: BilinearForm, W: Subspace):
    """``(N, plane1, planeMinus)`` for a 3-space with one-dimensional radical."""
    if W.dim != 3 or W.ambient_dim != 4 or t.dim != 4:
        raise UsageError("null_cone_3space needs a 3-dimensional subspace of a 4-dimensional space")
    basis = list(W.basis)
    induced = g.restrict(basis)
    if induced.signature()[2] != 1:
        raise UsageError("induced form must have a one-dimensional radical")
    N = lincomb(induced.radical()[0], basis)
    X = _non_null_in(g, basis)
    c = frame_coordinates(t, X, N)
    x, y = split_null(Triple3(c[1], c[2], c[3]))
    j1p = j_of(t, x)
    j3p = j1p @ j_of(t, y)
    plane1 = Subspace(4, [N, j1p(N)])
    plane_minus = Subspace(4, (j3p + Endomorphism.identity(4)).kernel())
    if not (W.contains_subspace(plane1) and W.contains_subspace(plane_minus)):
        raise ArithmeticError("null-cone planes are not contained in W")
    return N, plane1, plane_minus


def null_cone_adapted_pair(t: PHTriple, g: BilinearForm, W: Subspace, X: Sequence | None = None):
    """Adapted ``(x, y)`` with ``N = J_x X - J_y X`` for the 3-space ``W``."""
    basis = list(W.basis)
    induced = g.restrict(basis)
    N = lincomb(induced.radical()[0], basis)
    X = vector(X) if X is not None else _non_null_in(g, basis)
    c = frame_coordinates(t, X, N)
    return (*split_null(Triple3(c[1], c[2], c[3])), N, X)


def null_vectors_in(g: BilinearForm, W: Subspace, base: Vector, directions: Sequence[Vector]) -> list[Vector]:
    """Null vectors ``base + s d`` for a null ``base`` and each direction ``d``."""
    out = []
    for d in directions:
        qd = g(d, d)
        bd = g(base, d)
        if qd != 0 and bd != 0:
            s = -2 * bd / qd
            out.append(vadd(base, vscale(s, d)))
    return out

