"""Complex and product structures, para-hypercomplex triples and integrability."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .lie import BracketTable
from .linalg import ONE, ZERO, Endomorphism, UsageError, Vector, rank, scalar, unit_vector, vadd, vector, vsub


class StructureKind(enum.Enum):
    Complex = "Complex"
    Product = "Product"

    @property
    def sign(self) -> int:
        """Sign in front of ``[X, Y]`` in the Nijenhuis tensor."""
        return -1 if self is StructureKind.Complex else 1


class TripleValidationError(UsageError):
    """``make_triple`` failed; ``failures`` names the broken identities."""

    def __init__(self, failures: list[str]):
        self.failures = failures
        super().__init__("invalid para-hypercomplex pair: " + ", ".join(failures))


def is_complex_structure(J: Endomorphism) -> bool:
    return (J @ J).is_scalar(-1)


def is_product_structure(J: Endomorphism) -> bool:
    return (J @ J).is_scalar(1) and not J.is_scalar(1) and not J.is_scalar(-1)


@dataclass(frozen=True)
class PHTriple:
    """Validated pair ``(j1, j2)``; ``j3 = j1 j2`` is always derived."""

    j1: Endomorphism
    j2: Endomorphism

    @property
    def j3(self) -> Endomorphism:
        return self.j1 @ self.j2

    @property
    def dim(self) -> int:
        return self.j1.dim

    def structures(self) -> tuple[Endomorphism, Endomorphism, Endomorphism]:
        return self.j1, self.j2, self.j3

    def conjugate(self, P: Endomorphism) -> "PHTriple":
        """The triple ``P^{-1} J P``, which lives on ``change_of_basis(L, P)``."""
        Pinv = P.inverse()
        return make_triple(Pinv @ self.j1 @ P, Pinv @ self.j2 @ P)


TRIPLE_CHECKS = ("complex", "product", "not_plus_minus_identity", "anticommute")


def triple_failures(j1: Endomorphism, j2: Endomorphism) -> list[str]:
    if j1.dim != j2.dim:
        raise UsageError("j1 and j2 have different sizes")
    failed = []
    if not (j1 @ j1).is_scalar(-1):
        failed.append("complex")
    if not (j2 @ j2).is_scalar(1):
        failed.append("product")
    if j2.is_scalar(1) or j2.is_scalar(-1):
        failed.append("not_plus_minus_identity")
    if not (j1 @ j2 + j2 @ j1).is_zero():
        failed.append("anticommute")
    return failed


def make_triple(j1: Endomorphism, j2: Endomorphism) -> PHTriple:
    failed = triple_failures(j1, j2)
    if failed:
        raise TripleValidationError(failed)
    return PHTriple(j1, j2)


def nijenhuis(L: BracketTable, J: Endomorphism, kind: StructureKind, X: Sequence, Y: Sequence) -> Vector:
    """``[JX,JY] - J[X,JY] - J[JX,Y] + sign*[X,Y]`` with sign -1 (complex) or +1 (product)."""
    if J.dim != L.dim:
        raise UsageError("structure and algebra dimensions differ")
    X, Y = vector(X), vector(Y)
    if len(X) != L.dim or len(Y) != L.dim:
        raise UsageError("vector length does not match the algebra")
    JX, JY = J(X), J(Y)
    br = L._bracket
    inner = vadd(br(X, JY), br(JX, Y))
    out = vsub(br(JX, JY), J(inner))
    xy = br(X, Y)
    s = kind.sign
    return tuple(a + s * b for a, b in zip(out, xy))


def _basis_nijenhuis(L: BracketTable, J: Endomorphism, kind: StructureKind):
    """Yield ``(i, j, N(e_i, e_j))`` for ``i < j``, reusing the columns of ``J``."""
    if J.dim != L.dim:
        raise UsageError("structure and algebra dimensions differ")
    n, br, s = L.dim, L._bracket, kind.sign
    units = [unit_vector(n, i) for i in range(n)]
    cols = J.columns()
    for i, j in combinations(range(n), 2):
        inner = vadd(br(units[i], cols[j]), br(cols[i], units[j]))
        out = vsub(br(cols[i], cols[j]), J(inner))
        yield i, j, tuple(a + s * b for a, b in zip(out, br(units[i], units[j])))


def nijenhuis_failures(L: BracketTable, J: Endomorphism, kind: StructureKind) -> list[tuple[int, int, Vector]]:
    return [(i, j, v) for i, j, v in _basis_nijenhuis(L, J, kind) if any(v)]


def is_integrable(L: BracketTable, J: Endomorphism, kind: StructureKind) -> bool:
    return not any(any(v) for _, _, v in _basis_nijenhuis(L, J, kind))


def shortcut_integrable(L: BracketTable, J: Endomorphism, kind: StructureKind, X: Sequence, Y: Sequence) -> bool:
    """Integrability from a single Nijenhuis value.

    Requires ``(X, JX, Y, JY)`` to be a basis; then ``N`` vanishes identically
    exactly when ``N(X, Y) = 0``.
    """
    X, Y = vector(X), vector(Y)
    if L.dim != 4 or rank([X, J(X), Y, J(Y)]) != 4:
        raise UsageError("(X, JX, Y, JY) is not a basis")
    return not any(nijenhuis(L, J, kind, X, Y))


def triple_integrable(L: BracketTable, t: PHTriple) -> bool:
    return is_integrable(L, t.j1, StructureKind.Complex) and is_integrable(L, t.j2, StructureKind.Product)


# ------------------------------------------------------- hyperboloid family


@dataclass(frozen=True)
class Triple3:
    """Coefficients of ``J_x = x1 J1 + x2 J2 + x3 J3``."""

    x1: Fraction
    x2: Fraction
    x3: Fraction

    def __init__(self, x1, x2, x3):
        object.__setattr__(self, "x1", scalar(x1))
        object.__setattr__(self, "x2", scalar(x2))
        object.__setattr__(self, "x3", scalar(x3))

    def __iter__(self) -> Iterator[Fraction]:
        return iter((self.x1, self.x2, self.x3))

    def lorentz_norm(self) -> Fraction:
        return self.x1 * self.x1 - self.x2 * self.x2 - self.x3 * self.x3

    def inner(self, other: "Triple3") -> Fraction:
        return self.x1 * other.x1 - self.x2 * other.x2 - self.x3 * other.x3

    def cross(self, other: "Triple3") -> "Triple3":
        """The product for which ``J_x J_y = -<x,y> I + J_{x cross y}`` holds.

        The first component carries the opposite sign to the Euclidean cross
        product; this follows from ``J1 J2 = J3``, ``J2 J3 = -J1``, ``J3 J1 = J2``.
        """
        x1, x2, x3 = self
        y1, y2, y3 = other
        return Triple3(x3 * y2 - x2 * y3, x3 * y1 - x1 * y3, x1 * y2 - x2 * y1)

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.x1, self.x2, self.x3)


def j_of(triple: PHTriple, x: Triple3) -> Endomorphism:
    j1, j2, j3 = triple.structures()
    return j1 * x.x1 + j2 * x.x2 + j3 * x.x3


def composition_identity_defect(triple: PHTriple, x: Triple3, y: Triple3) -> Endomorphism:
    """``J_x J_y + <x,y> I - J_{x cross y}``; zero on every valid triple."""
    n = triple.dim
    return j_of(triple, x) @ j_of(triple, y) + Endomorphism.identity(n) * x.inner(y) - j_of(triple, x.cross(y))


def is_compatible_pair(triple: PHTriple, x: Triple3, y: Triple3) -> bool:
    return x.lorentz_norm() == 1 and y.lorentz_norm() == -1 and x.inner(y) == 0


def compatible_triple(triple: PHTriple, x: Triple3, y: Triple3) -> PHTriple:
    return make_triple(j_of(triple, x), j_of(triple, y))


# ---- rational points on the hyperboloids
#
# Points are produced by applying rational Lorentz transformations (rotations
# in the (x2, x3) plane and boosts mixing x1 with x2 or x3) to the standard
# compatible pair e1 = (1,0,0), e2 = (0,1,0). Each factor is parametrised by a
# rational s, so every output is exact and the pair stays compatible.


def _rotation(s: Fraction) -> tuple[Fraction, Fraction]:
    d = 1 + s * s
    return (1 - s * s) / d, 2 * s / d


def _boost(s: Fraction) -> tuple[Fraction, Fraction]:
    # cosh = (1+s^2)/(1-s^2), sinh = 2s/(1-s^2); requires s^2 != 1
    d = 1 - s * s
    return (1 + s * s) / d, 2 * s / d


def _apply(m, v):
    return tuple(sum((m[i][k] * v[k] for k in range(3)), ZERO) for i in range(3))


def lorentz_transform(rot: Fraction, boost12: Fraction, boost13: Fraction, rot2: Fraction = ZERO):
    """Rational matrix preserving ``x1^2 - x2^2 - x3^2`` (row-major, 3x3)."""
    for s in (boost12, boost13):
        if s * s == 1:
            raise UsageError("boost parameter must satisfy s^2 != 1")
    c, s = _rotation(scalar(rot))
    r1 = ((ONE, ZERO, ZERO), (ZERO, c, -s), (ZERO, s, c))
    ch, sh = _boost(scalar(boost12))
    b12 = ((ch, sh, ZERO), (sh, ch, ZERO), (ZERO, ZERO, ONE))
    ch, sh = _boost(scalar(boost13))
    b13 = ((ch, ZERO, sh), (ZERO, ONE, ZERO), (sh, ZERO, ch))
    c, s = _rotation(scalar(rot2))
    r2 = ((ONE, ZERO, ZERO), (ZERO, c, -s), (ZERO, s, c))
    m = ((ONE, ZERO, ZERO), (ZERO, ONE, ZERO), (ZERO, ZERO, ONE))
    for f in (r2, b13, b12, r1):
        m = tuple(tuple(sum((f[i][k] * m[k][j] for k in range(3)), ZERO) for j in range(3)) for i in range(3))
    return m


def hyperboloid_pair(rot, boost12, boost13, rot2=0) -> tuple[Triple3, Triple3]:
    """A rational compatible pair ``(x, y)``: norms 1 and -1, orthogonal."""
    m = lorentz_transform(scalar(rot), scalar(boost12), scalar(boost13), scalar(rot2))
    x = _apply(m, (ONE, ZERO, ZERO))
    y = _apply(m, (ZERO, ONE, ZERO))
    return Triple3(*x), Triple3(*y)
