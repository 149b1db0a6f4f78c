"""Floating-point residual of the para-hypercomplex system and its Jacobian.

The unknowns are the 32 entries of ``A`` (candidate J1) and ``B``
(candidate J2), each stored row-major; ``x[:16]`` is ``A`` and ``x[16:]``
is ``B``. Matrices follow the column convention: ``A[p, i]`` is the
``p``-th coordinate of ``A e_i``.
"""

from __future__ import annotations

import numpy as np

from .lie import BracketTable

I4 = np.eye(4)
UPPER = np.triu_indices(4, 1)
N_RESIDUALS = 16 * 3 + 24 * 2


def float_tensor(L: BracketTable) -> np.ndarray:
    """``C[i, j, k]``: coefficient of ``e_k`` in ``[e_i, e_j]`` (single conversion point)."""
    n = L.dim
    C = np.zeros((n, n, n))
    for (i, j), terms in L.constants.items():
        for k, c in terms:
            C[i, j, k] = float(c)
            C[j, i, k] = -float(c)
    return C


def nijenhuis_tensor(C: np.ndarray, J: np.ndarray, sign: int) -> np.ndarray:
    """``N[i, j, k]``: coordinate ``k`` of ``N(e_i, e_j)``."""
    t1 = np.einsum("pi,qj,pqk->ijk", J, J, C)
    t2 = np.einsum("km,iqm,qj->ijk", J, C, J)
    t3 = np.einsum("km,pi,pjm->ijk", J, J, C)
    return t1 - t2 - t3 + sign * C


def _nijenhuis_derivative(C: np.ndarray, J: np.ndarray) -> np.ndarray:
    """``d N[i, j, k] / d J[a, b]`` as an array indexed ``[i, j, k, a, b]``."""
    d = I4
    d1 = np.einsum("bi,qj,aqk->ijkab", d, J, C) + np.einsum("bj,pi,pak->ijkab", d, J, C)
    d2 = np.einsum("ka,iqb,qj->ijkab", d, C, J) + np.einsum("km,iam,bj->ijkab", J, C, d)
    d3 = np.einsum("ka,pi,pjb->ijkab", d, J, C) + np.einsum("km,bi,ajm->ijkab", J, d, C)
    return d1 - d2 - d3


def split(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return x[:16].reshape(4, 4), x[16:].reshape(4, 4)


def residual_vector(C: np.ndarray, x: np.ndarray) -> np.ndarray:
    A, B = split(x)
    return np.concatenate(
        [
            (A @ A + I4).ravel(),
            (B @ B - I4).ravel(),
            (A @ B + B @ A).ravel(),
            nijenhuis_tensor(C, A, -1)[UPPER].ravel(),
            nijenhuis_tensor(C, B, 1)[UPPER].ravel(),
        ]
    )


def _square_derivative(M: np.ndarray) -> np.ndarray:
    # d (M M)[r, s] / d M[a, b]
    return (np.einsum("ra,bs->rsab", I4, M) + np.einsum("ra,bs->rsab", M, I4)).reshape(16, 16)


def jacobian(C: np.ndarray, x: np.ndarray) -> np.ndarray:
    A, B = split(x)
    out = np.zeros((N_RESIDUALS, 32))
    out[0:16, 0:16] = _square_derivative(A)
    out[16:32, 16:32] = _square_derivative(B)
    out[32:48, 0:16] = (np.einsum("ra,bs->rsab", I4, B) + np.einsum("ra,bs->rsab", B, I4)).reshape(16, 16)
    out[32:48, 16:32] = (np.einsum("ra,bs->rsab", A, I4) + np.einsum("ra,bs->rsab", I4, A)).reshape(16, 16)
    out[48:72, 0:16] = _nijenhuis_derivative(C, A)[UPPER].reshape(24, 16)
    out[72:96, 16:32] = _nijenhuis_derivative(C, B)[UPPER].reshape(24, 16)
    return out


def objective(C: np.ndarray, x: np.ndarray) -> float:
    r = residual_vector(C, x)
    return float(r @ r)


def levenberg_marquardt(
    C: np.ndarray,
    x0: np.ndarray,
    max_iter: int = 500,
    tol: float = 1e-18,
    extra_rows: tuple[np.ndarray, np.ndarray] | None = None,
) -> tuple[np.ndarray, float, list[float]]:
    """Minimise ``|r(x)|^2`` (plus ``|G x - h|^2`` if ``extra_rows = (G, h)``).

    Steps that do not lower the objective are rejected, so the returned
    history is non-increasing. Damping uses Marquardt's diagonal scaling.
    """
    if extra_rows is None:
        def res(z):
            return residual_vector(C, z)

        def jac(z):
            return jacobian(C, z)
    else:
        G, h = extra_rows

        def res(z):
            return np.concatenate([residual_vector(C, z), G @ z - h])

        def jac(z):
            return np.vstack([jacobian(C, z), G])

    x = np.array(x0, dtype=float)
    r = res(x)
    f = float(r @ r)
    history = [f]
    mu, nu = 1e-3, 2.0
    for _ in range(max_iter):
        if f < tol or not np.isfinite(f):
            break
        Jm = jac(x)
        g = Jm.T @ r
        H = Jm.T @ Jm
        try:
            step = np.linalg.solve(H + mu * np.diag(np.maximum(np.diag(H), 1e-12)), -g)
        except np.linalg.LinAlgError:
            mu *= nu
            nu *= 2
            continue
        xn = x + step
        rn = res(xn)
        fn = float(rn @ rn)
        predicted = -2 * (step @ g) - step @ H @ step
        if np.isfinite(fn) and fn < f:
            rho = (f - fn) / predicted if predicted > 0 else 0.0
            x, r, f = xn, rn, fn
            mu *= max(1 / 3, 1 - (2 * rho - 1) ** 3) if rho > 0 else 1.0
            mu = max(mu, 1e-15)
            nu = 2.0
        else:
            mu *= nu
            nu *= 2
        history.append(f)
        if mu > 1e12:
            break
    return x, f, history
