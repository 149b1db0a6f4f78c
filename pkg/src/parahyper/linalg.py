"""Exact rational linear algebra over ``fractions.Fraction``.

Vectors are tuples of Fractions. Matrices are tuples of row tuples, except
for :class:`Endomorphism`, which wraps a square matrix in the column
convention (column ``j`` is the image of basis vector ``e_j``).
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from typing import Iterable, Sequence

Scalar = Fraction
Vector = tuple[Fraction, ...]
Rows = tuple[tuple[Fraction, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class UsageError(ValueError):
    """Raised for malformed arguments (dimension mismatch, singular input, ...)."""


class SingularMatrix(UsageError):
    pass


def scalar(x) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"p/q"`` string to a Fraction.

    Floats are rejected so that no rounding can sneak into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def vector(xs: Iterable) -> Vector:
    return tuple(scalar(x) for x in xs)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def _check_len(u: Sequence, v: Sequence) -> None:
    if len(u) != len(v):
        raise UsageError(f"length mismatch: {len(u)} vs {len(v)}")


def vadd(u: Vector, v: Vector) -> Vector:
    _check_len(u, v)
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    _check_len(u, v)
    return tuple(a - b for a, b in zip(u, v))


def vscale(s, u: Vector) -> Vector:
    s = scalar(s)
    return tuple(s * a for a in u)


def vneg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def dot(u: Vector, v: Vector) -> Fraction:
    _check_len(u, v)
    return sum((a * b for a, b in zip(u, v)), ZERO)


def lincomb(coeffs: Sequence, vectors: Sequence[Vector]) -> Vector:
    if not vectors:
        raise UsageError("empty linear combination")
    n = len(vectors[0])
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        c = scalar(c)
        if c:
            for k, a in enumerate(v):
                if a:
                    out[k] += c * a
    return tuple(out)


def is_zero(u: Sequence) -> bool:
    return not any(u)


# ---------------------------------------------------------------- matrices


def rows(data: Iterable[Iterable]) -> Rows:
    out = tuple(tuple(scalar(x) for x in r) for r in data)
    if out and len({len(r) for r in out}) != 1:
        raise UsageError("ragged matrix")
    return out


def identity_rows(n: int) -> Rows:
    return tuple(unit_vector(n, i) for i in range(n))


def transpose(a: Rows) -> Rows:
    return tuple(zip(*a)) if a else ()


def matmul(a: Rows, b: Rows) -> Rows:
    if a and b and len(a[0]) != len(b):
        raise UsageError("inner dimensions differ")
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(r, c) if x and y), ZERO) for c in bt) for r in a)


def matvec(a: Rows, v: Vector) -> Vector:
    if a and len(a[0]) != len(v):
        raise UsageError("matrix/vector dimension mismatch")
    return tuple(sum((x * y for x, y in zip(r, v) if x and y), ZERO) for r in a)


def _integer_row(r: Sequence[Fraction]) -> list[int]:
    den = reduce(lambda x, y: x * y // gcd(x, y), (f.denominator for f in r), 1)
    return [int(f * den) for f in r]


def _primitive(r: list[int]) -> list[int]:
    g = reduce(gcd, r, 0)
    return [x // g for x in r] if g > 1 else r


def primitive_vector(v: Sequence) -> Vector:
    """Positive multiple of ``v`` with coprime integer entries (zero stays zero)."""
    r = _primitive(_integer_row([scalar(x) for x in v]))
    return tuple(Fraction(x) for x in r)


def rref(a: Iterable[Sequence]) -> tuple[Rows, tuple[int, ...]]:
    """Reduced row echelon form with leftmost-nonzero pivoting.

    Elimination runs on integer rows (fraction-free, content removed after
    each step); only the final normalisation divides by the pivots.
    """
    work = [_integer_row(vector(r)) for r in a]
    work = [r for r in work if any(r)]
    if not work:
        return (), ()
    ncols = len(work[0])
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(work):
            break
        src = next((i for i in range(top, len(work)) if work[i][col]), None)
        if src is None:
            continue
        work[top], work[src] = work[src], work[top]
        p = work[top]
        for i in range(len(work)):
            if i != top and work[i][col]:
                c = work[i][col]
                g = gcd(p[col], c)
                mp, mc = p[col] // g, c // g
                work[i] = _primitive([mp * x - mc * y for x, y in zip(work[i], p)])
        pivots.append(col)
        top += 1
    out = []
    for r, col in zip(work[:top], pivots):
        lead = r[col]
        out.append(tuple(Fraction(x, lead) for x in r))
    return tuple(out), tuple(pivots)


def rank(a: Iterable[Sequence]) -> int:
    return len(rref(a)[1])


def nullspace(a: Rows, ncols: int | None = None) -> list[Vector]:
    """Basis of ``{x : a x = 0}``; one basis vector per free column."""
    if ncols is None:
        if not a:
            raise UsageError("column count needed for an empty matrix")
        ncols = len(a[0])
    red, piv = rref(a)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for r, p in zip(red, piv):
            x[p] = -r[f]
        basis.append(tuple(x))
    return basis


def solve(a: Rows, b: Vector) -> Vector | None:
    """One solution of ``a x = b`` (free variables set to 0), or None."""
    n = len(a[0]) if a else 0
    aug = [tuple(r) + (bi,) for r, bi in zip(a, b)]
    red, piv = rref(aug)
    if piv and piv[-1] == n:
        return None
    x = [ZERO] * n
    for r, p in zip(red, piv):
        x[p] = r[n]
    return tuple(x)


def inverse(a: Rows) -> Rows:
    n = len(a)
    if any(len(r) != n for r in a):
        raise UsageError("inverse of a non-square matrix")
    aug = [tuple(r) + unit_vector(n, i) for i, r in enumerate(a)]
    red, piv = rref(aug)
    if tuple(piv[:n]) != tuple(range(n)) or len(piv) > n:
        raise SingularMatrix("matrix is singular")
    return tuple(r[n:] for r in red)


def det(a: Rows) -> Fraction:
    """Determinant by Bareiss elimination on the integer-scaled matrix."""
    n = len(a)
    if n == 0:
        return ONE
    scale = ONE
    m = []
    for r in a:
        ir = _integer_row(r)
        den = 1
        for f in r:
            den = den * f.denominator // gcd(den, f.denominator)
        scale /= den
        m.append(ir)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] * scale


def charpoly(a: Rows) -> list[Fraction]:
    """Monic characteristic polynomial, highest degree first (Faddeev-LeVerrier)."""
    n = len(a)
    coeffs = [ONE]
    m: Rows = tuple((ZERO,) * n for _ in range(n))
    for k in range(1, n + 1):
        am = matmul(a, m)
        m = tuple(tuple(x + (coeffs[-1] if i == j else ZERO) for j, x in enumerate(r)) for i, r in enumerate(am))
        am = matmul(a, m)
        coeffs.append(-sum((am[i][i] for i in range(n)), ZERO) / k)
    return coeffs


def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = ZERO
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        q = a[0] / b[0]
        for k in range(len(b)):
            a[k] -= q * b[k]
        a = _poly_trim(a[1:]) if len(a) > 1 else [ZERO]
    return _poly_trim(a)


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while any(b):
        a, b = b, _poly_rem(a, b)
    return [c / a[0] for c in a]


def _poly_quot(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, out = list(a), []
    while len(a) >= len(b):
        q = a[0] / b[0]
        out.append(q)
        for k in range(len(b)):
            a[k] -= q * b[k]
        a = a[1:]
    return out


def squarefree_part(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """``p / gcd(p, p')``: same roots, all simple (highest degree first)."""
    p = _poly_trim([scalar(c) for c in coeffs])
    n = len(p) - 1
    if n < 1:
        return p
    dp = [c * (n - i) for i, c in enumerate(p[:-1])]
    g = _poly_gcd(p, dp)
    return _poly_quot(p, g) if len(g) > 1 else p


def rational_roots(coeffs: Sequence[Fraction], max_den: int = 10**6) -> list[Fraction]:
    """Rational roots of a polynomial, found numerically and confirmed exactly.

    Repeated roots are removed first so the numeric step sees simple roots.
    """
    import numpy as np

    coeffs = squarefree_part(coeffs)
    roots: list[Fraction] = []
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        if ZERO not in roots:
            roots.append(ZERO)
    if len(coeffs) <= 1:
        return roots
    big = max(abs(c) for c in coeffs)
    approx = np.roots([float(c / big) for c in coeffs])
    for z in approx:
        if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
            continue
        for md in (1, 10, 100, 10**4, max_den):
            q = Fraction(float(z.real)).limit_denominator(md)
            if q not in roots and poly_eval(coeffs, q) == 0:
                roots.append(q)
                break
    return roots


def rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


# ------------------------------------------------------------ Endomorphism


class Endomorphism:
    """Square exact matrix; column ``j`` holds the image of ``e_j``."""

    __slots__ = ("_rows", "_hash")

    def __init__(self, entries: Iterable[Iterable]):
        r = rows(entries)
        if any(len(x) != len(r) for x in r):
            raise UsageError("endomorphism must be square")
        self._rows = r
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "Endomorphism":
        return cls(identity_rows(n))

    @classmethod
    def zero(cls, n: int) -> "Endomorphism":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def from_images(cls, images: Sequence[Sequence]) -> "Endomorphism":
        """Build from the list of images of the basis vectors (the columns)."""
        return cls(transpose(rows(images)))

    @classmethod
    def diagonal(cls, diag: Sequence) -> "Endomorphism":
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> Rows:
        return self._rows

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.dim)]

    def __call__(self, v: Sequence) -> Vector:
        v = vector(v)
        if len(v) != self.dim:
            raise UsageError("vector length does not match endomorphism")
        return matvec(self._rows, v)

    apply = __call__

    def __matmul__(self, other: "Endomorphism") -> "Endomorphism":
        if not isinstance(other, Endomorphism):
            return NotImplemented
        if other.dim != self.dim:
            raise UsageError("composition of endomorphisms of different size")
        return Endomorphism(matmul(self._rows, other._rows))

    def __add__(self, other: "Endomorphism") -> "Endomorphism":
        if other.dim != self.dim:
            raise UsageError("dimension mismatch")
        return Endomorphism(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)))

    def __sub__(self, other: "Endomorphism") -> "Endomorphism":
        if other.dim != self.dim:
            raise UsageError("dimension mismatch")
        return Endomorphism(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)))

    def __neg__(self) -> "Endomorphism":
        return Endomorphism(tuple(tuple(-a for a in r) for r in self._rows))

    def __mul__(self, s) -> "Endomorphism":
        s = scalar(s)
        return Endomorphism(tuple(tuple(s * a for a in r) for r in self._rows))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Endomorphism) and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"Endomorphism([{body}])"

    def transpose(self) -> "Endomorphism":
        return Endomorphism(transpose(self._rows))

    def inverse(self) -> "Endomorphism":
        return Endomorphism(inverse(self._rows))

    def det(self) -> Fraction:
        return det(self._rows)

    def trace(self) -> Fraction:
        return sum((self._rows[i][i] for i in range(self.dim)), ZERO)

    def rank(self) -> int:
        return rank(self._rows)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    def is_scalar(self, s) -> bool:
        s = scalar(s)
        n = self.dim
        return all(self._rows[i][j] == (s if i == j else ZERO) for i in range(n) for j in range(n))

    def kernel(self) -> list[Vector]:
        return nullspace(self._rows, self.dim)

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self._rows])


# ---------------------------------------------------------------- Subspace


class Subspace:
    """Span of generators in ``Q^n`` with a canonical RREF basis."""

    __slots__ = ("ambient_dim", "generators", "basis", "pivots")

    def __init__(self, ambient_dim: int, generators: Iterable[Sequence] = ()):
        gens = tuple(vector(g) for g in generators)
        for g in gens:
            if len(g) != ambient_dim:
                raise UsageError(f"generator of length {len(g)} in ambient dimension {ambient_dim}")
        self.ambient_dim = ambient_dim
        self.generators = gens
        self.basis, self.pivots = rref(gens) if gens else ((), ())

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, identity_rows(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, basis={[tuple(str(x) for x in b) for b in self.basis]})"

    def contains(self, v: Sequence) -> bool:
        v = vector(v)
        if len(v) != self.ambient_dim:
            raise UsageError("vector length does not match subspace ambient dimension")
        if not any(v):
            return True
        return rank(self.basis + (v,)) == self.dim

    __contains__ = contains

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        if not self.dim or not other.dim:
            return Subspace.zero(self.ambient_dim)
        # a.x = b.y  <=>  [A^T | -B^T] (x, y) = 0
        cols = list(self.basis) + [vneg(b) for b in other.basis]
        system = transpose(tuple(cols))
        gens = [lincomb(sol[: self.dim], self.basis) for sol in nullspace(system, len(cols))]
        return Subspace(self.ambient_dim, gens)

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of ``v`` in the RREF basis (v must lie in the span)."""
        v = vector(v)
        coords = tuple(v[p] for p in self.pivots)
        rebuilt = lincomb(coords, self.basis) if self.basis else zero_vector(self.ambient_dim)
        if rebuilt != v:
            raise UsageError("vector is not in the subspace")
        return coords

    def complement_basis(self) -> list[Vector]:
        """Standard basis vectors completing the RREF basis to a basis of Q^n."""
        return [unit_vector(self.ambient_dim, c) for c in range(self.ambient_dim) if c not in self.pivots]

    def image(self, f: Endomorphism) -> "Subspace":
        return Subspace(self.ambient_dim, [f(b) for b in self.basis])


def random_unimodular(seed: int, n: int = 4, bound: int = 2) -> Endomorphism:
    """Integer matrix with entries in ``[-bound, bound]`` and determinant +-1, reproducible from ``seed``."""
    import numpy as np

    rng = np.random.default_rng(seed)
    while True:
        P = Endomorphism([[int(v) for v in rng.integers(-bound, bound + 1, n)] for _ in range(n)])
        if abs(P.det()) == 1:
            return P
