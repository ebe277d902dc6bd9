"""
Sampling certificates for matrix monotonicity and matrix convexity.

A function is matrix monotone of order n iff every n-point Loewner matrix
(divided differences, derivatives on the diagonal) is positive semi-definite.
We cannot check every point set, so a certificate here is one-sided: it says
no violation was found among ``trials`` random point sets per order.  Trial
``i`` draws from ``numpy.random.default_rng(seed + i)``, so the verdict is
independent of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, ValidationError
from .generators import five_point_derivative
from .matrix_core import apply_scalar_function, random_hermitian_with_spectrum

PSD_RTOL = 1e-8
SAMPLE_RANGE = (1e-3, 1e3)
MIN_SEPARATION = 1e-8
_DERIV_REL_STEP = 1e-3
# Below this relative gap a divided difference is taken as f' at the midpoint.
_CLOSE_GAP = 1e-7

CERTIFIED_MONOTONE = "certified_monotone"
CERTIFIED_DECREASING = "certified_decreasing"
CERTIFIED_CONVEX = "certified_convex"
REJECTED = "rejected"


@dataclass(frozen=True)
class LoewnerMatrix:
    points: np.ndarray
    entries: np.ndarray

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])


@dataclass
class CertificationReport:
    """Outcome of a certification run.

    ``worst_eigenvalue`` is the most negative scaled eigenvalue seen
    (``min eig / scale``); ``witness`` holds the failing point set or matrix
    pair when ``verdict == "rejected"``.
    """

    verdict: str
    order: int
    trials: int
    seed: int
    worst_eigenvalue: float
    kind: str = "monotone"
    witness: Optional[dict] = None
    function: str = ""
    tolerance: float = PSD_RTOL

    @property
    def certified(self) -> bool:
        return self.verdict != REJECTED

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "property": self.kind,
            "function": self.function,
            "order": self.order,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "worst_eigenvalue": self.worst_eigenvalue,
            "witness": self.witness,
        }


def _evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        vals = np.asarray(f(x), dtype=float)
    if vals.shape != x.shape:
        vals = np.broadcast_to(vals, x.shape).copy()
    if not np.all(np.isfinite(vals)):
        bad = x[~np.isfinite(vals)].ravel()[0]
        raise DomainError(f"function is non-finite at t={bad!r}")
    return vals


def loewner_matrix(f: Callable, points) -> LoewnerMatrix:
    """Loewner matrix ``[(f(x_i)-f(x_j))/(x_i-x_j)]`` with ``f'(x_i)`` on the diagonal.

    Derivatives use a five-point stencil with step ``1e-3 * x_i``.
    """
    x = np.asarray(points, dtype=float).ravel()
    if np.any(x <= 0):
        raise ValidationError("Loewner points must be positive")
    n = x.size
    gaps = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(gaps, np.inf)
    if n > 1 and np.min(gaps) <= MIN_SEPARATION:
        raise ValidationError(f"Loewner points closer than {MIN_SEPARATION:g}")

    step = _DERIV_REL_STEP * x
    stencil = np.concatenate([x, x + 2 * step, x + step, x - step, x - 2 * step])
    vals = _evaluate(f, stencil)
    fx, p2, p1, m1, m2 = vals.reshape(5, n)
    deriv = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * step)

    with np.errstate(divide="ignore", invalid="ignore"):
        L = (fx[:, None] - fx[None, :]) / (x[:, None] - x[None, :])
    np.fill_diagonal(L, deriv)

    rel = gaps / np.maximum(x[:, None], x[None, :])
    close = np.argwhere(np.triu(rel < _CLOSE_GAP, 1))
    if close.size:
        mids = np.array([(x[i] + x[j]) / 2 for i, j in close])
        dmid = five_point_derivative(lambda t: _evaluate(f, np.asarray(t)), mids, _DERIV_REL_STEP * mids)
        for (i, j), d in zip(close, np.atleast_1d(dmid)):
            L[i, j] = L[j, i] = d
    L = 0.5 * (L + L.T)
    return LoewnerMatrix(points=x, entries=L)


def _scaled_min_eig(L: np.ndarray) -> float:
    scale = np.max(np.abs(L))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.eigvalsh(L)[0] / scale)


def sample_points(rng: np.random.Generator, n: int, low: float = SAMPLE_RANGE[0],
                  high: float = SAMPLE_RANGE[1]) -> np.ndarray:
    """``n`` sorted points, log-uniform on ``[low, high]``."""
    return np.sort(np.exp(rng.uniform(np.log(low), np.log(high), size=n)))


def _function_name(f) -> str:
    return getattr(f, "name", getattr(f, "__name__", type(f).__name__))


def certify_operator_monotone(f: Callable, max_order: int = 6, trials: int = 200, seed: int = 0,
                              decreasing: bool = False, tolerance: float = PSD_RTOL) -> CertificationReport:
    """Search for a non-PSD Loewner matrix of order 2..max_order.

    With ``decreasing=True`` the search runs on ``-f`` and a clean run gives
    ``certified_decreasing``.  A Loewner matrix counts as PSD when its smallest
    eigenvalue is at least ``-1e-8 * max|entry|``.
    """
    if not 2 <= max_order <= 8:
        raise ValidationError(f"max_order {max_order} outside 2..8")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    g = (lambda t: -np.asarray(f(t))) if decreasing else f
    prop = "decreasing" if decreasing else "monotone"
    worst = np.inf
    for trial in range(trials):
        rng = np.random.default_rng(seed + trial)
        for n in range(2, max_order + 1):
            pts = sample_points(rng, n)
            L = loewner_matrix(g, pts).entries
            m = _scaled_min_eig(L)
            worst = min(worst, m)
            if m < -tolerance:
                return CertificationReport(
                    verdict=REJECTED, order=max_order, trials=trials, seed=seed,
                    worst_eigenvalue=m, kind=prop, function=_function_name(f), tolerance=tolerance,
                    witness={"trial": trial, "order": n, "points": pts.tolist(),
                             "scaled_min_eigenvalue": m},
                )
    verdict = CERTIFIED_DECREASING if decreasing else CERTIFIED_MONOTONE
    return CertificationReport(verdict=verdict, order=max_order, trials=trials, seed=seed,
                               worst_eigenvalue=float(worst), kind=prop,
                               function=_function_name(f), tolerance=tolerance)


def _random_positive_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    lam = sample_points(rng, dim)
    return random_hermitian_with_spectrum(lam, rng)


def midpoint_gap(f: Callable, X, Y) -> tuple:
    """``(f(X)+f(Y))/2 - f((X+Y)/2)`` and its smallest eigenvalue over the spectral-norm scale."""
    fX = apply_scalar_function(f, X)
    fY = apply_scalar_function(f, Y)
    fM = apply_scalar_function(f, 0.5 * (np.asarray(X) + np.asarray(Y)))
    gap = 0.5 * (fX + fY) - fM
    gap = 0.5 * (gap + gap.conj().T)
    scale = max(np.linalg.norm(fX, 2), np.linalg.norm(fY, 2), np.linalg.norm(fM, 2))
    m = float(np.linalg.eigvalsh(gap)[0])
    return gap, (m / scale if scale > 0 else m)


def certify_operator_convex(f: Callable, dim: int = 4, trials: int = 200, seed: int = 0,
                            tolerance: float = PSD_RTOL) -> CertificationReport:
    """Search for Hermitian ``X, Y`` (spectra in [1e-3, 1e3]) with a non-PSD midpoint gap."""
    if not 1 <= dim <= 8:
        raise ValidationError(f"dim {dim} outside 1..8")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    worst = np.inf
    for trial in range(trials):
        rng = np.random.default_rng(seed + trial)
        X = _random_positive_hermitian(rng, dim)
        Y = _random_positive_hermitian(rng, dim)
        try:
            _, m = midpoint_gap(f, X, Y)
        except DomainError as exc:
            raise DomainError(f"trial {trial}: {exc}") from exc
        worst = min(worst, m)
        if m < -tolerance:
            return CertificationReport(
                verdict=REJECTED, order=dim, trials=trials, seed=seed, worst_eigenvalue=m,
                kind="convex", function=_function_name(f), tolerance=tolerance,
                witness={"trial": trial, "X": _encode(X), "Y": _encode(Y), "scaled_min_eigenvalue": m},
            )
    return CertificationReport(verdict=CERTIFIED_CONVEX, order=dim, trials=trials, seed=seed,
                               worst_eigenvalue=float(worst), kind="convex",
                               function=_function_name(f), tolerance=tolerance)


def _encode(M: np.ndarray) -> dict:
    return {"re": M.real.tolist(), "im": M.imag.tolist()}


def _decode(d: dict) -> np.ndarray:
    return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)


def recheck_witness(f: Callable, report: CertificationReport) -> bool:
    """Re-evaluate a rejection witness; True iff the violation is reproduced."""
    if report.verdict != REJECTED or report.witness is None:
        return False
    w = report.witness
    if report.kind == "convex":
        _, m = midpoint_gap(f, _decode(w["X"]), _decode(w["Y"]))
    else:
        g = (lambda t: -np.asarray(f(t))) if report.kind == "decreasing" else f
        m = _scaled_min_eig(loewner_matrix(g, w["points"]).entries)
    return m < -report.tolerance
