"""Exact recovery of a para-hypercomplex pair from a numerical solution.

Entry-wise rounding only works when the basis happens to be adapted to the
structure. The general route used here:

* The +1 and -1 eigenspaces ``V+`` and ``V-`` of J2 are two-dimensional
  subalgebras, and J1 maps one onto the other.
* Their spanning vectors are recognised one at a time as rational vectors.
  A guess ``s1`` for a vector of ``V+`` must have a rational eigenvalue on
  ``L / <s1>`` under ``ad(s1)``, since the next vector lives in an
  eigenspace of that induced map.
* Each guess is tested by re-running the optimizer with the vector pinned
  as an eigenvector of J2. A guess is kept only if the residual still
  reaches machine zero.
* Once both subalgebras are exact, the map ``F: V+ -> V-`` induced by J1
  satisfies linear and quadratic equations. These are solved exactly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .lie import BracketTable, ad, derived_subalgebra, killing_form
from .linalg import (
    ONE,
    ZERO,
    Endomorphism,
    Vector,
    charpoly,
    nullspace,
    primitive_vector,
    rank,
    rational_roots,
    rational_sqrt,
    rref,
    solve,
    unit_vector,
)
from .numeric import jacobian, levenberg_marquardt
from .structures import PHTriple, StructureKind, make_triple, nijenhuis, triple_failures, triple_integrable

FIRST_DENOMINATORS = (4, 16, 100)
RECOGNITION_DENOMINATORS = (10, 100, 10**3, 10**4, 10**5, 10**6, 10**7, 10**8, 10**9, 10**10, 10**12)
FALLBACK_DENOMINATORS = (4, 16, 100, 1000)
MAX_LINE_DISTANCE = 0.05
PIN_ACCEPT = 1e-22
NULL_BOX = 6

Pin = tuple[Vector, int]


def _floats(v) -> np.ndarray:
    return np.array([float(t) for t in v])


def _round(t: float, md: int) -> Fraction:
    return Fraction(float(t)).limit_denominator(md)


def rational_direction(v: np.ndarray, md: int) -> Vector:
    """Scale so the largest entry is 1, then round each entry."""
    i = int(np.argmax(abs(v)))
    v = v / v[i]
    return tuple(_round(t, md) for t in v)


def eigenplane(M: np.ndarray, lam: float) -> np.ndarray:
    """Orthonormal basis (columns) of the two-dimensional near-kernel of ``M - lam I``."""
    _, _, vt = np.linalg.svd(M - lam * np.eye(4))
    return vt[2:].T


def line_distance(Q: np.ndarray, v: Vector) -> float:
    vn = _floats(v)
    vn /= np.linalg.norm(vn)
    return float(np.linalg.norm(vn - Q @ (Q.T @ vn)))


def _combine(coeffs, vectors) -> Vector:
    n = len(vectors[0])
    return tuple(sum((c * v[k] for c, v in zip(coeffs, vectors)), ZERO) for k in range(n))


class _Problem:
    """Per-algebra data shared by every certification attempt."""

    def __init__(self, L: BracketTable, C: np.ndarray):
        self.L = L
        self.C = C
        self._null = None

    # -- induced action of ad(s1) on L / <s1>

    def induced(self, s1: Vector) -> tuple[Endomorphism, list[Vector]]:
        n = self.L.dim
        p = max(range(n), key=lambda i: abs(s1[i]))
        comp = [unit_vector(n, j) for j in range(n) if j != p]
        basis = Endomorphism.from_images([s1] + comp)
        M = basis.inverse() @ ad(self.L, s1) @ basis
        return Endomorphism([r[1:] for r in M.rows[1:]]), comp

    @staticmethod
    def eigenspaces(M: Endomorphism) -> list[tuple[Fraction, list[Vector]]]:
        out = []
        for r in rational_roots(charpoly(M.rows)):
            ns = (M - Endomorphism.identity(M.dim) * r).kernel()
            if ns:
                out.append((r, ns))
        return out

    # -- Killing-null points of the derived algebra

    def null_point(self):
        if self._null is None:
            D = derived_subalgebra(self.L).basis
            K = killing_form(self.L)
            q = K.restrict(D).gram if D else ()
            p0 = None
            if D:
                qn = np.array([[float(t) for t in r] for r in q])
                grid = np.array(list(product(range(-NULL_BOX, NULL_BOX + 1), repeat=len(D))))
                vals = np.einsum("ni,ij,nj->n", grid, qn, grid)
                for idx in np.nonzero(abs(vals) < 1e-9)[0]:
                    v = tuple(Fraction(int(t)) for t in grid[idx])
                    if any(v) and _quad(q, v, v) == 0:
                        p0 = v
                        break
            self._null = (p0, q, D)
        return self._null

    def derived_line_candidates(self, Q: np.ndarray, md: int) -> list[Vector]:
        """Guesses for a vector of a 2-dim subalgebra built from its bracket line.

        In a non-abelian two-dimensional subalgebra the bracket of its
        vectors spans a line that lies in the subalgebra. When that line is
        Killing-null inside the derived algebra, the rounded direction is
        pulled back onto the null cone through a known rational null point.
        """
        u = np.einsum("i,j,ijk->k", Q[:, 0], Q[:, 1], self.C)
        if np.linalg.norm(u) < 1e-8:
            return []
        out = [rational_direction(u, md)]
        p0, q, D = self.null_point()
        if p0 is None:
            return out
        Dn = np.array([[float(t) for t in d] for d in D]).T
        qn = np.array([[float(t) for t in r] for r in q])
        c = np.linalg.lstsq(Dn, u, rcond=None)[0]
        if abs(c @ qn @ c) >= 1e-6 * (c @ c) * abs(qn).max():
            return out
        p0n = _floats(p0)
        scale = np.linalg.norm(p0n) / np.linalg.norm(c)
        for sgn in (1, -1):
            d = tuple(_round(t, md) for t in sgn * scale * c - p0n)
            qd = _quad(q, d, d)
            if qd == 0:
                continue
            t = -2 * _quad(q, p0, d) / qd
            p = tuple(a + t * b for a, b in zip(p0, d))
            if any(p):
                out.append(_combine(p, D))
        return out

    # -- candidate generation

    def first_candidates(self, Q: np.ndarray) -> list[tuple[float, Vector]]:
        vecs = [Q[:, 0], Q[:, 1], Q[:, 0] + Q[:, 1], Q[:, 0] - Q[:, 1]]
        scored = []
        for md in FIRST_DENOMINATORS:
            for s1 in [rational_direction(v, md) for v in vecs] + self.derived_line_candidates(Q, md):
                M, _ = self.induced(s1)
                if self.eigenspaces(M):
                    scored.append((md, line_distance(Q, s1), s1))
        scored.sort(key=lambda t: t[:2])
        return _dedupe((d, v) for _, d, v in scored)

    def second_candidates(self, x_exact: list[Fraction], s1: Vector, lam: int) -> list[tuple[float, Vector]]:
        """Vectors completing ``s1`` to a candidate eigenplane of the refined J2."""
        M, comp = self.induced(s1)
        B = [x_exact[16 + 4 * r : 20 + 4 * r] for r in range(4)]
        out = []
        for _, ns in self.eigenspaces(M):
            basis = [_combine(e, comp) for e in ns]
            cols = [tuple(sum((B[r][k] * e[k] for k in range(4)), ZERO) - lam * e[r] for r in range(4)) for e in basis]
            coef = _kernel_coefficients(cols)
            if coef is None:
                continue
            exact = [_recognise(c) for c in coef]
            if all(c is not None for c in exact):
                s2 = _combine(exact, basis)
                if rank([s1, s2]) == 2:
                    out.append((0.0, s2))
            for md in FALLBACK_DENOMINATORS:
                s2 = _combine([c.limit_denominator(md) for c in coef], basis)
                if rank([s1, s2]) == 2:
                    out.append((1.0 / md, s2))
        # simpler vectors first: they keep the final certificate small
        out.sort(key=lambda item: max(c.denominator for c in item[1]))
        return out

    # -- high-precision polishing

    def exact_residual(self, x: list[Fraction], pins: list[Pin]) -> list[Fraction]:
        A = Endomorphism([x[4 * r : 4 * r + 4] for r in range(4)])
        B = Endomorphism([x[16 + 4 * r : 20 + 4 * r] for r in range(4)])
        I = Endomorphism.identity(4)
        out: list[Fraction] = []
        for M in (A @ A + I, B @ B - I, A @ B + B @ A):
            for r in M.rows:
                out.extend(r)
        for J, kind in ((A, StructureKind.Complex), (B, StructureKind.Product)):
            for i, j in combinations(range(4), 2):
                out.extend(nijenhuis(self.L, J, kind, unit_vector(4, i), unit_vector(4, j)))
        for v, lam in pins:
            out.extend(a - lam * b for a, b in zip(B(v), v))
        return out

    def refine(self, x: np.ndarray, pins: list[Pin], iterations: int = 3) -> list[Fraction]:
        """Gauss-Newton steps with the residual evaluated exactly at the current point."""
        G, _ = pin_rows(pins)
        xf = [Fraction(float(t)) for t in x]
        for _ in range(iterations):
            xd = np.array([float(t) for t in xf])
            Jm = np.vstack([jacobian(self.C, xd), G])
            r = np.array([float(t) for t in self.exact_residual(xf, pins)])
            step = np.linalg.lstsq(Jm, r, rcond=1e-10)[0]
            xf = [a - Fraction(float(s)) for a, s in zip(xf, step)]
        return xf


def _quad(q, u, v) -> Fraction:
    return sum((u[i] * q[i][j] * v[j] for i in range(len(u)) for j in range(len(v))), ZERO)


def _dedupe(items) -> list[tuple[float, Vector]]:
    seen, out = set(), []
    for d, v in items:
        if v not in seen:
            seen.add(v)
            out.append((d, v))
    return out


def _kernel_coefficients(cols: list[Vector]) -> list[Fraction] | None:
    """Near-kernel vector of the matrix with these columns, solved exactly.

    The column with the largest weight in the numeric kernel is fixed to 1
    and the others come from the exact normal equations.
    """
    if len(cols) == 1:
        return [ONE]
    An = np.array([[float(t) for t in c] for c in cols]).T
    _, S, vt = np.linalg.svd(An)
    if S[-1] > 1e-6 * max(S[0], 1):
        return None
    p = int(np.argmax(abs(vt[-1])))
    others = [i for i in range(len(cols)) if i != p]
    N = [[sum((cols[a][r] * cols[b][r] for r in range(4)), ZERO) for b in others] for a in others]
    y = [-sum((cols[a][r] * cols[p][r] for r in range(4)), ZERO) for a in others]
    sol = solve(N, y)
    if sol is None:
        return None
    coef = [ONE] * len(cols)
    for i, v in zip(others, sol):
        coef[i] = v
    return coef


def _recognise(v: Fraction) -> Fraction | None:
    """Small-denominator rational agreeing with ``v`` to 25 digits, if any."""
    tol = Fraction(1, 10**25) * max(ONE, abs(v))
    for md in RECOGNITION_DENOMINATORS:
        q = v.limit_denominator(md)
        if abs(q - v) < tol:
            return q
    return None


def pin_rows(pins: list[Pin]) -> tuple[np.ndarray, np.ndarray]:
    """Rows expressing ``B v = lam v`` for each pinned vector."""
    G, h = [], []
    for v, lam in pins:
        vn = _floats(v)
        for r in range(4):
            row = np.zeros(32)
            row[16 + 4 * r : 20 + 4 * r] = vn
            G.append(row)
            h.append(lam * vn[r])
    return np.array(G).reshape(-1, 32), np.array(h)


def resolve(C: np.ndarray, x: np.ndarray, pins: list[Pin]) -> tuple[np.ndarray, float]:
    x1, f1, _ = levenberg_marquardt(C, x, max_iter=300, tol=1e-24, extra_rows=pin_rows(pins))
    return x1, f1


# ------------------------------------------------------------- exact F


def _phi_equations(L: BracketTable, Vp: list[Vector], Vm: list[Vector]):
    """Linear and quadratic conditions on ``F`` (row-major 2x2, ``J1 Vp[i] = Vm F[:, i]``).

    Returns ``(linear, quadratic)``: ``linear(f)`` and ``quadratic(f)``
    each give two coordinates that must vanish, or ``None`` if ``Vp`` or
    ``Vm`` is not a subalgebra.
    """
    B = Endomorphism.from_images(list(Vp) + list(Vm))
    Bi = B.inverse()
    br = L._bracket
    X, Y = Vp
    xy = Bi(br(X, Y))
    if xy[2] or xy[3] or any(Bi(br(*Vm))[:2]):
        return None

    def images(f):
        return _combine((f[0], f[2]), Vm), _combine((f[1], f[3]), Vm)

    def mixed(f):
        pX, pY = images(f)
        return Bi(tuple(a + b for a, b in zip(br(X, pY), br(pX, Y))))

    def linear(f):
        m = mixed(f)
        return (m[2] - f[0] * xy[0] - f[1] * xy[1], m[3] - f[2] * xy[0] - f[3] * xy[1])

    def quadratic(f):
        pX, pY = images(f)
        bb = Bi(br(pX, pY))
        m = mixed(f)
        return (bb[2] - f[0] * m[0] - f[1] * m[1], bb[3] - f[2] * m[0] - f[3] * m[1])

    return linear, quadratic


def _quadric_matrices(quadratic, K: list[Vector]) -> list[list[list[Fraction]]]:
    """Symmetric matrices of ``t -> quadratic(sum t_i K_i)`` by polarisation."""
    k = len(K)
    diag = [quadratic(Ki) for Ki in K]
    mats = [[[ZERO] * k for _ in range(k)] for _ in range(2)]
    for i in range(k):
        for c in range(2):
            mats[c][i][i] = diag[i][c]
    for i, j in combinations(range(k), 2):
        s = quadratic(tuple(a + b for a, b in zip(K[i], K[j])))
        for c in range(2):
            mats[c][i][j] = mats[c][j][i] = (s[c] - diag[i][c] - diag[j][c]) / 2
    return mats


def linear_components(Q) -> list[list[Vector]] | None:
    """Rational linear pieces of ``{t : t^T Q t = 0}`` when ``rank Q <= 2``.

    Each piece is a list of linear forms whose common zero set is contained
    in the quadric; together the pieces contain every rational zero. Returns
    ``None`` when the rank exceeds 2.
    """
    R = [r for r in rref(Q)[0] if any(r)]
    if len(R) == 0:
        return [[]]
    if len(R) == 1:
        return [[R[0]]]
    if len(R) > 2:
        return None
    r1, r2 = R
    U = [solve(R, e) for e in ((ONE, ZERO), (ZERO, ONE))]
    if any(u is None for u in U):
        return None
    S = [[_quad(Q, U[a], U[b]) for b in range(2)] for a in range(2)]
    s11, s12, s22 = S[0][0], S[0][1], S[1][1]
    d = rational_sqrt(s12 * s12 - s11 * s22)
    if d is None:
        return [[r1, r2]]
    if s11 != 0:
        forms = [tuple(s11 * a + (s12 + sg * d) * b for a, b in zip(r1, r2)) for sg in (-1, 1)]
    else:
        forms = [r2, tuple(2 * s12 * a + s22 * b for a, b in zip(r1, r2))]
    if forms[0] == forms[1]:
        return [[forms[0]]]
    return [[f] for f in forms]


def _restrict(Q, T: list[Vector]):
    return [[_quad(Q, a, b) for b in T] for a in T]


def rational_common_zeros(quads, T: list[Vector], target: np.ndarray) -> list[Vector]:
    """Rational points of ``span(T)`` near ``target`` on which every quadric vanishes.

    Factorable quadrics (rank at most 2) split the search into linear
    subspaces; once every quadric vanishes on the current subspace, the
    projection of ``target`` is rounded at a few denominators.
    """
    if not T:
        return []
    live = [Q for Q in (_restrict(Q, T) for Q in quads) if any(any(r) for r in Q)]
    Tn = np.array([_floats(t) for t in T]).T
    s_n = np.linalg.lstsq(Tn, target, rcond=None)[0]
    if not live:
        # every point of span(T) solves the system: offer small ones first
        small = [_combine(c, T) for c in product((0, 1, -1), repeat=len(T)) if any(c)]
        return small + [_combine([_round(s, md) for s in s_n], T) for md in (1, 10, 100, 1000)]
    for Q in live:
        pieces = linear_components(Q)
        if pieces is None:
            continue
        found = []
        for forms in pieces:
            sub = nullspace(forms, len(T)) if forms else [unit_vector(len(T), i) for i in range(len(T))]
            T2 = [_combine(s, T) for s in sub]
            found.extend(rational_common_zeros(quads, T2, target))
        return found
    # no quadric factors: only an exact hit of the rounded projection can help
    out = []
    for md in (1, 10, 100, 1000):
        s = [_round(v, md) for v in s_n]
        if all(_quad(Q, s, s) == 0 for Q in live):
            out.append(_combine(s, T))
    return out


def _height(v) -> int:
    return max(max(abs(x.numerator), x.denominator) for x in v)


def solve_map(L: BracketTable, Vp: list[Vector], Vm: list[Vector], A: np.ndarray) -> list[list[Fraction]] | None:
    """Exact ``F`` (2x2 rows) of smallest height, ties broken by distance to the numeric J1 ``A``."""
    eqs = _phi_equations(L, Vp, Vm)
    if eqs is None:
        return None
    linear, quadratic = eqs
    units = [unit_vector(4, i) for i in range(4)]
    lin_cols = [linear(u) for u in units]
    K = nullspace([[lin_cols[j][c] for j in range(4)] for c in range(2)], 4)
    if not K:
        return None
    quads = _quadric_matrices(quadratic, K)
    Vpn = np.array([_floats(v) for v in Vp]).T
    Vmn = np.array([_floats(v) for v in Vm]).T
    Fn = np.linalg.lstsq(Vmn, A @ Vpn, rcond=None)[0].ravel()
    Kn = np.array([_floats(k) for k in K]).T
    tn = np.linalg.lstsq(Kn, Fn, rcond=None)[0]
    best = None
    for t in rational_common_zeros(quads, [unit_vector(len(K), i) for i in range(len(K))], tn):
        f = _combine(t, K)
        if f[0] * f[3] - f[1] * f[2] == 0 or any(quadratic(f)) or any(linear(f)):
            continue
        key = (_height(f), float(np.linalg.norm(_floats(t) - tn)))
        if best is None or key < best[0]:
            best = (key, f)
    if best is None:
        return None
    f = best[1]
    return [[f[0], f[1]], [f[2], f[3]]]


def assemble(Vp: list[Vector], Vm: list[Vector], F: list[list[Fraction]]) -> tuple[Endomorphism, Endomorphism]:
    """J1 and J2 from the eigenplanes and the map ``F``."""
    B = Endomorphism.from_images(list(Vp) + list(Vm))
    Bi = B.inverse()
    J2 = B @ Endomorphism.diagonal((1, 1, -1, -1)) @ Bi
    Finv = Endomorphism(F).inverse().rows
    local = [[ZERO] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            local[2 + i][j] = F[i][j]
            local[i][2 + j] = -Finv[i][j]
    return B @ Endomorphism(local) @ Bi, J2


# ------------------------------------------------------------- driver


def certify_by_eigenspaces(L: BracketTable, C: np.ndarray, x: np.ndarray, budget: int = 60) -> PHTriple | None:
    """Exact triple near the numerical solution ``x``, or ``None``.

    ``budget`` caps the number of pinned re-solves. The returned triple has
    been validated and checked for integrability with exact arithmetic.
    """
    if L.dim != 4:
        return None
    prob = _Problem(L, C)
    calls = 0

    def search(x, pins: list[Pin], stage: int):
        nonlocal calls
        if stage == 4:
            return x, pins
        lam = 1 if stage < 2 else -1
        if stage % 2 == 0:
            cands = prob.first_candidates(eigenplane(x[16:].reshape(4, 4), lam))
        else:
            cands = prob.second_candidates(prob.refine(x, pins), pins[-1][0], lam)
        for d, v in _dedupe(cands):
            if d > MAX_LINE_DISTANCE:
                continue
            if calls > budget:
                return None
            calls += 1
            trial = pins + [(v, lam)]
            x1, f1 = resolve(C, x, trial)
            if f1 < PIN_ACCEPT:
                found = search(x1, trial, stage + 1)
                if found:
                    return found
        return None

    found = search(np.asarray(x, dtype=float), [], 0)
    if not found:
        return None
    x2, pins = found
    Vp = [primitive_vector(pins[0][0]), primitive_vector(pins[1][0])]
    Vm = [primitive_vector(pins[2][0]), primitive_vector(pins[3][0])]
    if rank(Vp + Vm) < 4:
        return None
    F = solve_map(L, Vp, Vm, x2[:16].reshape(4, 4))
    if F is None:
        return None
    j1, j2 = assemble(Vp, Vm, F)
    if triple_failures(j1, j2):
        return None
    t = make_triple(j1, j2)
    return t if triple_integrable(L, t) else None
