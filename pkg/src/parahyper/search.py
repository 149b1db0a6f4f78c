"""Numerical search for an integrable para-hypercomplex pair, with exact certification.

Each restart runs Levenberg-Marquardt on the 32 entries of ``(A, B)``
with the analytic Jacobian from :mod:`parahyper.numeric`. A restart whose
residual drops below the tolerance is certified: first by rounding every
entry (:func:`certify`), then by recognising the eigenplanes of ``B``
(:func:`parahyper.rationalize.certify_by_eigenspaces`). Whatever is
returned as ``Certified`` has been re-validated by the exact modules.
"""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .lie import BracketTable
from .linalg import Endomorphism, UsageError
from .numeric import float_tensor, levenberg_marquardt, objective
from .rationalize import certify_by_eigenspaces
from .structures import PHTriple, StructureKind, is_integrable, make_triple, triple_failures

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 200
    seed: int = 0
    max_iterations: int = 500
    residual_tolerance: float = 1e-18
    max_denominator: int = 10000
    init_scale: float = 2.0

    def __post_init__(self):
        if isinstance(self.restarts, bool) or not isinstance(self.restarts, int) or self.restarts < 1:
            raise UsageError("restarts must be a positive integer")
        if isinstance(self.max_iterations, bool) or not isinstance(self.max_iterations, int) or self.max_iterations < 1:
            raise UsageError("max_iterations must be a positive integer")
        if isinstance(self.max_denominator, bool) or not isinstance(self.max_denominator, int) or self.max_denominator < 1:
            raise UsageError("max_denominator must be a positive integer")
        if not isinstance(self.seed, int) or not -(1 << 63) <= self.seed <= MASK64:
            raise UsageError("seed must be a 64-bit integer")
        if not self.residual_tolerance > 0 or not self.init_scale > 0:
            raise UsageError("tolerance and init_scale must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SearchConfig":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SearchConfig":
        return cls.from_dict(json.loads(text))


class SearchStatus(enum.Enum):
    Certified = "Certified"
    NumericOnly = "NumericOnly"
    NotFound = "NotFound"


@dataclass(frozen=True)
class RestartRecord:
    restart: int
    iterations: int
    residual: float
    history: tuple[float, ...]
    outcome: str  # "certified", "uncertified", "above_tolerance"


@dataclass(frozen=True)
class SearchResult:
    status: SearchStatus
    triple: PHTriple | None = None
    approx: tuple[np.ndarray, np.ndarray] | None = None
    residual: float = float("inf")
    trace: tuple[RestartRecord, ...] = field(default_factory=tuple)
    certified_restart: int | None = None

    @property
    def label(self) -> str:
        if self.status is SearchStatus.Certified:
            return "certified"
        if self.status is SearchStatus.NumericOnly:
            return "numeric only (uncertified; inconclusive)"
        return "not found (inconclusive: not a proof of nonexistence)"

    def trace_json(self) -> dict:
        return {
            "status": self.status.value,
            "label": self.label,
            "residual": self.residual,
            "certified_restart": self.certified_restart,
            "restarts": [
                {"restart": r.restart, "iterations": r.iterations, "residual": r.residual, "outcome": r.outcome}
                for r in self.trace
            ],
        }


@dataclass(frozen=True)
class CertificationFailed:
    """Rounding did not give a valid integrable pair; ``check`` names the first broken test."""

    check: str
    detail: str = ""

    def __bool__(self) -> bool:
        return False


def _check_shape(A, B) -> tuple[np.ndarray, np.ndarray]:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != (4, 4) or B.shape != (4, 4):
        raise UsageError("A and B must be 4x4")
    return A, B


def residual(L: BracketTable, A, B) -> float:
    """Sum of squared entries of ``A^2+I``, ``B^2-I``, ``AB+BA`` and both Nijenhuis tensors."""
    if L.dim != 4:
        raise UsageError("the search works in dimension 4")
    A, B = _check_shape(A, B)
    return objective(float_tensor(L), np.concatenate([A.ravel(), B.ravel()]))


def _rational_matrix(M: np.ndarray, max_den: int) -> Endomorphism:
    return Endomorphism([[Fraction(float(v)).limit_denominator(max_den) for v in row] for row in M])


def certify(L: BracketTable, A, B, max_denominator: int = 10000) -> PHTriple | CertificationFailed:
    """Round entries by continued fractions and verify the result exactly."""
    A, B = _check_shape(A, B)
    j1 = _rational_matrix(A, max_denominator)
    j2 = _rational_matrix(B, max_denominator)
    failed = triple_failures(j1, j2)
    if failed:
        return CertificationFailed(failed[0], "rounded matrices fail " + ", ".join(failed))
    if not is_integrable(L, j1, StructureKind.Complex):
        return CertificationFailed("j1_integrable", "Nijenhuis tensor of the rounded J1 is nonzero")
    if not is_integrable(L, j2, StructureKind.Product):
        return CertificationFailed("j2_integrable", "Nijenhuis tensor of the rounded J2 is nonzero")
    return make_triple(j1, j2)


def initial_point(seed: int, restart: int, scale: float) -> np.ndarray:
    """Uniform start in ``[-scale, scale]^32`` from a Philox stream keyed on ``(seed, restart)``."""
    key = np.array([seed & MASK64, restart & MASK64], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    return rng.uniform(-scale, scale, 32)


def _certify_point(L: BracketTable, C: np.ndarray, x: np.ndarray, max_den: int) -> PHTriple | None:
    A, B = x[:16].reshape(4, 4), x[16:].reshape(4, 4)
    rounded = certify(L, A, B, max_den)
    if isinstance(rounded, PHTriple):
        return rounded
    return certify_by_eigenspaces(L, C, x)


def run_restart(L: BracketTable, C: np.ndarray, cfg: SearchConfig, restart: int):
    """One independent restart: ``(record, x, triple_or_None)``."""
    x0 = initial_point(cfg.seed, restart, cfg.init_scale)
    x, f, history = levenberg_marquardt(C, x0, cfg.max_iterations, cfg.residual_tolerance)
    triple = None
    if f < cfg.residual_tolerance:
        triple = _certify_point(L, C, x, cfg.max_denominator)
        outcome = "certified" if triple else "uncertified"
    else:
        outcome = "above_tolerance"
    record = RestartRecord(restart, len(history) - 1, f, tuple(history), outcome)
    return record, x, triple


def search_structure(L: BracketTable, cfg: SearchConfig | None = None) -> SearchResult:
    """Run restarts in index order and stop at the first certified one.

    A certified pair has exact residual zero, so every certified restart
    ties and the lowest index wins; stopping early gives the same answer
    as running all restarts.
    """
    if L.dim != 4:
        raise UsageError("the search works in dimension 4")
    cfg = cfg or SearchConfig()
    C = float_tensor(L)
    trace = []
    best = None  # (residual, restart, x) over uncertified restarts
    for restart in range(cfg.restarts):
        record, x, triple = run_restart(L, C, cfg, restart)
        trace.append(record)
        if triple is not None:
            return SearchResult(
                SearchStatus.Certified,
                triple=triple,
                approx=(x[:16].reshape(4, 4), x[16:].reshape(4, 4)),
                residual=record.residual,
                trace=tuple(trace),
                certified_restart=restart,
            )
        if best is None or record.residual < best[0]:
            best = (record.residual, restart, x)
    f, _, x = best
    status = SearchStatus.NumericOnly if f < cfg.residual_tolerance else SearchStatus.NotFound
    return SearchResult(status, approx=(x[:16].reshape(4, 4), x[16:].reshape(4, 4)), residual=f, trace=tuple(trace))
