"""
Dense Hermitian linear algebra for small (n <= 16) quantum states and observables.

Everything here works on plain ``numpy`` arrays.  :class:`HermitianMatrix` and
:class:`DensityMatrix` are thin validated wrappers; every public function also
accepts raw array-likes, so ``np.asarray(rho)`` works on either.

Random ensembles use ``numpy.random.default_rng`` (PCG64, 64-bit state) seeded
with the integer passed in, so a given ``(dim, seed, rank)`` always yields the
same matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import DomainError, NumericalError, ValidationError

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-10
RANK_TOLERANCE = 1e-12

SeedLike = Union[int, np.random.Generator, None]


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def max_asymmetry(M) -> float:
    """Largest entrywise deviation ``|M[j,k] - conj(M[k,j])|``."""
    M = np.asarray(M)
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def check_hermitian(M, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``M`` as a complex square array, raising if it is not Hermitian."""
    if isinstance(M, (HermitianMatrix, DensityMatrix)):
        return M.matrix
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValidationError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidationError("matrix has non-finite entries")
    asym = max_asymmetry(M)
    if asym > atol:
        raise ValidationError(f"matrix is not Hermitian: max asymmetry {asym:.3e} > {atol:.1e}")
    return M


def check_density_matrix(rho, rank_tolerance: float = RANK_TOLERANCE,
                         trace_atol: float = TRACE_ATOL) -> np.ndarray:
    """Return ``rho`` as an array after checking Hermiticity, positivity and unit trace."""
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    rho = check_hermitian(rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_atol:
        raise ValidationError(f"state trace is {tr!r}; deficit {1.0 - tr:.3e} exceeds {trace_atol:.1e}")
    evals = np.linalg.eigvalsh(rho)
    floor = -rank_tolerance * max(float(evals[-1]), 0.0)
    if evals[0] < floor:
        raise ValidationError(f"state has negative eigenvalue {evals[0]:.3e}")
    return rho


def _check_same_shape(*mats: np.ndarray) -> None:
    shapes = {m.shape for m in mats}
    if len(shapes) != 1:
        raise ValidationError(f"dimension mismatch: {sorted(shapes)}")


@dataclass(frozen=True)
class HermitianMatrix:
    """A validated complex Hermitian matrix (an observable)."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", check_hermitian(self.matrix))
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True)
class DensityMatrix:
    """A validated quantum state: Hermitian, positive semi-definite, unit trace."""

    matrix: np.ndarray
    rank_tolerance: float = RANK_TOLERANCE

    def __post_init__(self):
        object.__setattr__(self, "matrix",
                           check_density_matrix(self.matrix, self.rank_tolerance))
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    @property
    def rank(self) -> int:
        ev = self.eigenvalues
        return int(np.sum(ev > self.rank_tolerance * ev[-1]))

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order and the unitary whose columns are eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float = field(default=0.0, compare=False)

    def reconstruct(self, values: Optional[np.ndarray] = None) -> np.ndarray:
        U = self.eigenvectors
        lam = self.eigenvalues if values is None else values
        return (U * lam) @ U.conj().T

    def to_eigenbasis(self, X) -> np.ndarray:
        """Express ``X`` in the eigenbasis: ``U* X U``."""
        U = self.eigenvectors
        return U.conj().T @ np.asarray(X) @ U

    def from_eigenbasis(self, X) -> np.ndarray:
        U = self.eigenvectors
        return U @ np.asarray(X) @ U.conj().T


def jacobi_eigh(M, rtol: float = 1e-13, max_sweeps: int = 60):
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Each pivot ``(p, q)`` is first made real by a diagonal phase, then removed
    by a real plane rotation.  Sweeps stop once the off-diagonal Frobenius mass
    falls below ``rtol * ||M||_F``.

    Returns:
        (eigenvalues, eigenvectors) with eigenvalues ascending.
    """
    A = np.array(M, dtype=complex)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n), V
    target = rtol * scale

    def off(a):
        return np.linalg.norm(a - np.diag(np.diag(a)))

    for _ in range(max_sweeps):
        if off(A) < target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                app, aqq = A[p, p].real, A[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                G = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                V[:, idx] = V[:, idx] @ G
    else:
        if off(A) >= target:
            raise NumericalError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    lam = np.diag(A).real
    order = np.argsort(lam, kind="stable")
    return lam[order], V[:, order]


def eigh(M, method: str = "lapack") -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Args:
        M: Hermitian matrix (validated; non-Hermitian input raises
            :class:`ValidationError` naming the asymmetry).
        method: ``"lapack"`` (``numpy.linalg.eigh``) or ``"jacobi"``.
    """
    M = check_hermitian(M)
    if method == "lapack":
        lam, U = np.linalg.eigh(M)
    elif method == "jacobi":
        lam, U = jacobi_eigh(M)
    else:
        raise ValidationError(f"unknown eigensolver {method!r}")
    res = float(np.linalg.norm((U * lam) @ U.conj().T - M, 2))
    return SpectralDecomposition(lam, U, res)


def _eval_on_spectrum(f: Callable, lam: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        try:
            vals = np.asarray(f(lam))
        except (DomainError, ValueError, ZeroDivisionError, OverflowError):
            vals = None
        if vals is None or vals.shape != lam.shape:
            vals = np.array([_eval_scalar(f, x) for x in lam])
    bad = ~np.isfinite(vals)
    if np.any(bad):
        raise DomainError(f"function undefined or non-finite at eigenvalue {lam[bad][0]!r}")
    return vals


def _eval_scalar(f, x):
    try:
        return f(x)
    except (DomainError, ValueError, ZeroDivisionError, OverflowError):
        return np.nan


def apply_scalar_function(f: Callable, M, clip_tolerance: Optional[float] = None) -> np.ndarray:
    """Spectral calculus ``U diag(f(lambda)) U*``.

    Args:
        f: scalar function, ideally vectorised over numpy arrays.
        M: Hermitian matrix.
        clip_tolerance: if given, eigenvalues with ``|lambda| <= clip_tolerance *
            max|lambda|`` are snapped to exactly zero first (for PSD inputs whose
            null space shows up as tiny negative rounding noise).
    """
    dec = eigh(M)
    lam = dec.eigenvalues.copy()
    if clip_tolerance is not None and lam.size:
        lam[np.abs(lam) <= clip_tolerance * np.max(np.abs(lam))] = 0.0
    vals = _eval_on_spectrum(f, lam)
    out = dec.reconstruct(vals)
    if np.isrealobj(vals):
        out = 0.5 * (out + out.conj().T)
    return out


def commutator(X, Y) -> np.ndarray:
    """``XY - YX``."""
    X, Y = np.asarray(X), np.asarray(Y)
    _check_same_shape(X, Y)
    return X @ Y - Y @ X


def variance(rho, A) -> float:
    """``Tr(rho A^2) - (Tr rho A)^2``."""
    rho, A = np.asarray(rho), np.asarray(A)
    _check_same_shape(rho, A)
    mean = np.trace(rho @ A).real
    return float(np.trace(rho @ A @ A).real - mean * mean)


def random_density_matrix(dim: int, seed: SeedLike = None, rank: Optional[int] = None) -> np.ndarray:
    """Random state ``G G* / Tr(G G*)`` with ``G`` a complex Ginibre matrix of shape ``dim x rank``."""
    if dim < 1:
        raise ValidationError("dim must be positive")
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValidationError(f"rank {rank} out of range 1..{dim}")
    rng = _rng(seed)
    G = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = G @ G.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_hermitian(dim: int, seed: SeedLike = None, scale: float = 1.0) -> np.ndarray:
    """Random Hermitian matrix ``scale * (G + G*) / 2`` (GUE up to normalisation)."""
    rng = _rng(seed)
    G = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * 0.5 * (G + G.conj().T)


def random_unitary(dim: int, seed: SeedLike = None) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with the diagonal phase fixed."""
    rng = _rng(seed)
    G = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_hermitian_with_spectrum(eigenvalues, seed: SeedLike = None) -> np.ndarray:
    """Hermitian matrix with the given spectrum and a Haar-random eigenbasis."""
    lam = np.asarray(eigenvalues, dtype=float)
    U = random_unitary(lam.size, seed)
    M = (U * lam) @ U.conj().T
    return 0.5 * (M + M.conj().T)
