"""Symmetric bilinear forms with exact Gram matrices."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import ZERO, Endomorphism, Rows, UsageError, matmul, rows, transpose, vector


class BilinearForm:
    """Symmetric form ``B(u, v) = u^T G v`` in the distinguished basis."""

    __slots__ = ("gram", "_signature")

    def __init__(self, gram: Iterable[Iterable]):
        g = rows(gram)
        n = len(g)
        if any(len(r) != n for r in g):
            raise UsageError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise UsageError("Gram matrix must be symmetric")
        self.gram: Rows = g
        self._signature = None

    @classmethod
    def diagonal(cls, diag: Sequence) -> "BilinearForm":
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "BilinearForm":
        return cls([[0] * n for _ in range(n)])

    @property
    def dim(self) -> int:
        return len(self.gram)

    def __call__(self, u: Sequence, v: Sequence) -> Fraction:
        u, v = vector(u), vector(v)
        if len(u) != self.dim or len(v) != self.dim:
            raise UsageError("vector length does not match the form")
        total = ZERO
        for i, ui in enumerate(u):
            if ui:
                row = self.gram[i]
                total += ui * sum((row[j] * vj for j, vj in enumerate(v) if vj), ZERO)
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, BilinearForm) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.gram)
        return f"BilinearForm([{body}])"

    def scaled(self, s) -> "BilinearForm":
        s = Fraction(s)
        return BilinearForm([[s * x for x in r] for r in self.gram])

    def __add__(self, other: "BilinearForm") -> "BilinearForm":
        return BilinearForm([[a + b for a, b in zip(r, q)] for r, q in zip(self.gram, other.gram)])

    def __sub__(self, other: "BilinearForm") -> "BilinearForm":
        return BilinearForm([[a - b for a, b in zip(r, q)] for r, q in zip(self.gram, other.gram)])

    def pullback(self, f: Endomorphism) -> "BilinearForm":
        """The form ``(u, v) -> B(f u, f v)``, Gram ``F^T G F``."""
        return BilinearForm(matmul(matmul(transpose(f.rows), self.gram), f.rows))

    def restrict(self, basis: Sequence[Sequence]) -> "BilinearForm":
        """Gram matrix of the form on the span of ``basis`` (in that basis)."""
        vs = [vector(b) for b in basis]
        return BilinearForm([[self(u, v) for v in vs] for u in vs])

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.gram)

    def rank(self) -> int:
        p, m, _ = self.signature()
        return p + m

    def is_degenerate(self) -> bool:
        return self.signature()[2] > 0

    def signature(self) -> tuple[int, int, int]:
        """``(positive, negative, zero)`` counts via symmetric Gaussian congruence."""
        if self._signature is None:
            self._signature = _inertia(self.gram)
        return self._signature

    def radical(self):
        return Endomorphism(self.gram).kernel()


def _inertia(gram: Rows) -> tuple[int, int, int]:
    a = [list(r) for r in gram]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i]), None)
        if piv is None:
            # no diagonal pivot: use an off-diagonal entry a[i][j] != 0 and
            # replace e_i by e_i + e_j, which makes the diagonal nonzero
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        row = a[piv][:]
        for i in active:
            f = a[i][piv] / d
            if f:
                for k in range(n):
                    a[i][k] -= f * row[k]
        for i in active:
            a[i][piv] = ZERO
        for k in range(n):
            a[piv][k] = ZERO if k != piv else d
    return pos, neg, n - pos - neg
