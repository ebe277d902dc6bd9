"""
Monotone metrics, Morozova-Cencov kernels and metric adjusted skew information.

For a symmetric normalised metric function ``f`` with ``f(0) > 0`` the skew
information of an observable ``A`` in a state ``rho`` is

    I(rho, A) = f(0)/2 * sum_jk chat(l_j, l_k) |A_jk|^2,     chat(x, y) = (x - y)^2 / (y f(x/y)),

with ``A_jk`` the entries of ``A`` in the eigenbasis of ``rho`` and ``l_j`` the
eigenvalues.  Several routes to the same number are provided so they can check
one another:

* :func:`masi_spectral`   eigenbasis sum above (also handles singular states)
* :func:`masi_modular`    traces of ``A h(Delta) A rho`` with the modular operator
* :func:`wyd_commutator`  ``-1/2 Tr [rho^p, A][rho^(1-p), A]``
* :func:`unbounded_masi`  the quadratic form without ``f(0)/2`` for ``f(0) = 0``
* :func:`bridge_skew_info` the ``f_alpha`` family, written with ``(1 + Delta)/2``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError, ValidationError
from .generators import (
    GeneratorFunction,
    MetricFunction,
    builtin_bridge,
    construct_f,
    derivative_at_one,
    sharp,
)
from .matrix_core import (
    apply_scalar_function,
    check_density_matrix,
    check_hermitian,
    commutator,
    eigh,
)

#: Eigenvalues below this fraction of the largest are treated as exact zeros.
RANK_THRESHOLD = 1e-12
#: Unbounded measures refuse states whose smallest eigenvalue is below this.
UNBOUNDED_MIN_EIGENVALUE = 1e-10

MetricLike = Union[GeneratorFunction, MetricFunction, "MorozovaCencov"]


@dataclass(frozen=True)
class MorozovaCencov:
    """Kernel pair ``c(x, y) = 1/(y f(x/y))`` and ``chat(x, y) = (x - y)^2 c(x, y)``."""

    metric: MetricFunction
    _sharp: GeneratorFunction = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        src = self.metric.source_generator
        if src is not None and self._sharp is None:
            object.__setattr__(self, "_sharp", sharp(src))

    @classmethod
    def from_generator(cls, h: GeneratorFunction, normalize: bool = True) -> "MorozovaCencov":
        return cls(construct_f(h, normalize=normalize))

    @property
    def metric_constant(self) -> float:
        return self.metric.metric_constant

    def c(self, x, y):
        return c_value(self, x, y)

    def c_hat(self, x, y):
        return c_hat(self, x, y)


def as_morozova_cencov(obj: MetricLike) -> MorozovaCencov:
    if isinstance(obj, MorozovaCencov):
        return obj
    if isinstance(obj, MetricFunction):
        return MorozovaCencov(obj)
    if isinstance(obj, GeneratorFunction):
        return MorozovaCencov.from_generator(obj)
    raise ValidationError(f"cannot build a Morozova-Cencov kernel from {type(obj).__name__}")


@dataclass
class SkewInfoReport:
    """Result of one skew information computation.

    ``terms`` holds the pieces the value was assembled from (method dependent);
    ``diagnostics`` records the state's spectrum handling.
    """

    value: float
    method: str
    terms: dict = field(default_factory=dict)
    generator: str = ""
    metric: str = ""
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "value": self.value,
            "generator": self.generator,
            "metric": self.metric,
            "terms": self.terms,
            "diagnostics": self.diagnostics,
        }


# -- kernels ------------------------------------------------------------------

def c_value(mc: MorozovaCencov, x, y):
    """``c(x, y) = 1 / (y f(x/y))`` for ``x, y > 0``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("Morozova-Cencov function needs x, y > 0")
    out = 1.0 / (y * np.asarray(mc.metric(x / y)))
    return float(out) if out.ndim == 0 else out


def _chat_positive(mc: MorozovaCencov, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    metric = mc.metric
    h = metric.source_generator
    if h is not None and mc._sharp is not None:
        k = metric.normalization if metric.normalized else 1.0
        r = x / y
        # Perspective form: no (x - y)^2 / f cancellation.
        return (x + y - y * np.asarray(h(r)) - y * np.asarray(mc._sharp(r))) / k
    return (x - y) ** 2 / (y * np.asarray(metric(x / y)))


def c_hat(mc: MorozovaCencov, x, y):
    """``chat(x, y) = (x - y)^2 c(x, y)``, extended to ``x, y >= 0``.

    On the boundary ``chat(x, 0) = chat(0, x) = x / f(0)``, which requires a
    regular metric; ``chat(x, x) = 0``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    if np.any(x < 0) or np.any(y < 0):
        raise DomainError("chat needs x, y >= 0")
    out = np.zeros(x.shape)
    diag = x == y
    boundary = ~diag & ((x == 0) | (y == 0))
    interior = ~diag & ~boundary
    if np.any(boundary):
        f0 = mc.metric_constant
        if not mc.metric.regular:
            raise DomainError("chat at a zero eigenvalue needs a regular metric (f(0) > 0); "
                              "the unbounded measure is not defined on the state-space boundary")
        out[boundary] = (x[boundary] + y[boundary]) / f0
    if np.any(interior):
        out[interior] = _chat_positive(mc, x[interior], y[interior])
    return float(out) if out.ndim == 0 else out


# -- helpers ------------------------------------------------------------------

def _prepare(rho, A):
    rho = check_density_matrix(rho)
    A = check_hermitian(A)
    if rho.shape != A.shape:
        raise ValidationError(f"dimension mismatch: state {rho.shape}, observable {A.shape}")
    dec = eigh(rho)
    lam = dec.eigenvalues.copy()
    lam_max = lam[-1]
    zero = lam <= RANK_THRESHOLD * lam_max
    lam[zero] = 0.0
    diagnostics = {
        "min_eigenvalue": float(dec.eigenvalues[0]),
        "rank": int(np.sum(~zero)),
        "zero_eigenvalues": int(np.sum(zero)),
    }
    return rho, A, dec, lam, diagnostics


def _name(obj) -> str:
    return getattr(obj, "name", "")


def _pair_grid(lam):
    return np.meshgrid(lam, lam, indexing="ij")


# -- quadratic forms ------------------------------------------------------------

def metric_form(mc: MetricLike, rho, B) -> float:
    """Monotone metric ``K(B, B) = sum_jk c(l_j, l_k) |B_jk|^2`` in the eigenbasis of ``rho``.

    For singular ``rho`` the pairs touching the kernel need either a regular
    metric (one zero eigenvalue, ``c(x, 0) = 1/(x f(0))``) or vanishing
    ``B`` entries; otherwise :class:`DomainError`.
    """
    mc = as_morozova_cencov(mc)
    rho = check_density_matrix(rho)
    B = np.asarray(B, dtype=complex)
    if B.shape != rho.shape:
        raise ValidationError(f"dimension mismatch: state {rho.shape}, B {B.shape}")
    dec = eigh(rho)
    lam = dec.eigenvalues.copy()
    zero = lam <= RANK_THRESHOLD * lam[-1]
    lam[zero] = 0.0
    W = np.abs(dec.to_eigenbasis(B)) ** 2
    X, Y = _pair_grid(lam)
    pos = (X > 0) & (Y > 0)
    C = np.zeros_like(W)
    if np.any(pos):
        C[pos] = c_value(mc, X[pos], Y[pos])
    tol = 1e-24 * max(float(np.max(W)), 1e-300)
    both = (X == 0) & (Y == 0)
    one = ~pos & ~both
    if np.any(W[both] > tol):
        raise DomainError("B does not vanish on the kernel of rho; metric undefined there")
    if np.any(one):
        if mc.metric.regular:
            Z = np.maximum(X, Y)[one]
            C[one] = 1.0 / (Z * mc.metric_constant)
        elif np.any(W[one] > tol):
            raise DomainError("state not strictly positive and the metric is not regular")
    return float(np.sum(C * W))


def masi_spectral(mc: MetricLike, rho, A) -> SkewInfoReport:
    """Metric adjusted skew information ``f(0)/2 * sum chat(l_j, l_k) |A_jk|^2``.

    Works for singular states through the boundary values of ``chat``.
    Non-regular metrics (``f(0) = 0``) raise; use :func:`unbounded_masi`.
    """
    mc = as_morozova_cencov(mc)
    if not mc.metric.regular:
        raise DomainError(f"metric {mc.metric.name} is not regular (f(0) = 0): "
                          "its skew information vanishes; use unbounded_masi")
    rho, A, dec, lam, diag = _prepare(rho, A)
    W = np.abs(dec.to_eigenbasis(A)) ** 2
    X, Y = _pair_grid(lam)
    S = float(np.sum(c_hat(mc, X, Y) * W))
    f0 = mc.metric_constant
    diag["boundary_kernel"] = diag["zero_eigenvalues"] > 0
    return SkewInfoReport(
        value=0.5 * f0 * S,
        method="spectral",
        terms={"metric_constant": f0, "chat_sum": S},
        generator=_name(mc.metric.source_generator),
        metric=mc.metric.name,
        diagnostics=diag,
    )


def _require_full_rank(diag: dict, where: str) -> None:
    if diag["zero_eigenvalues"]:
        raise DomainError(f"state not strictly positive (min eigenvalue {diag['min_eigenvalue']:.3e}); "
                          f"{where} needs an invertible state, use masi_spectral for singular states")


def _modular_apply(dec, lam, func, A) -> np.ndarray:
    """``func(Delta_rho) A``: entry (j, k) in the eigenbasis is scaled by ``func(l_j / l_k)``."""
    X, Y = _pair_grid(lam)
    At = dec.to_eigenbasis(A)
    return dec.from_eigenbasis(np.asarray(func(X / Y)) * At)


def masi_modular(h: GeneratorFunction, rho, A) -> SkewInfoReport:
    """Skew information through the modular operator ``Delta(X) = rho X rho^-1``.

    value = C (2 Tr rho A^2 - Tr A h(Delta)(A) rho - Tr A h#(Delta)(A) rho)

    with ``C = f(0) / (2 h'(1)(1 - h'(1)))``.  When ``h#(0) = 0`` this is
    ``1 / (2 (1 - h(0)))``; ``terms["literal_coefficient"]`` records that value
    whenever ``h(0)`` is known.
    """
    metric = construct_f(h)
    if not metric.symmetric:
        raise ValidationError(f"f constructed from {h.name} is not symmetric; no skew information")
    rho, A, dec, lam, diag = _prepare(rho, A)
    _require_full_rank(diag, "the modular operator")
    hs = sharp(h)
    t0 = 2.0 * np.trace(rho @ A @ A).real
    th = np.trace(A @ _modular_apply(dec, lam, h, A) @ rho).real
    ths = np.trace(A @ _modular_apply(dec, lam, hs, A) @ rho).real
    d = derivative_at_one(h)
    C = metric.metric_constant / (2.0 * d * (1.0 - d))
    terms = {"two_tr_rho_A2": float(t0), "h_term": float(th), "h_sharp_term": float(ths),
             "coefficient": C}
    h0 = h.analytic_limit_at_zero
    if h0 is not None and math.isfinite(h0) and h0 != 1.0:
        terms["literal_coefficient"] = 1.0 / (2.0 * (1.0 - h0))
    return SkewInfoReport(
        value=float(C * (t0 - th - ths)),
        method="modular",
        terms=terms,
        generator=h.name,
        metric=metric.name,
        diagnostics=diag,
    )


def _psd_power(rho: np.ndarray, p: float) -> np.ndarray:
    return apply_scalar_function(lambda t: np.power(np.maximum(t, 0.0), p), rho,
                                 clip_tolerance=RANK_THRESHOLD)


def wyd_commutator(rho, A, p: float) -> SkewInfoReport:
    """Wigner-Yanase-Dyson skew information ``-1/2 Tr [rho^p, A][rho^(1-p), A]`` for ``0 < p < 1``."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValidationError(f"WYD exponent {p!r} outside (0, 1)")
    rho, A, _, _, diag = _prepare(rho, A)
    P = _psd_power(rho, p)
    Q = _psd_power(rho, 1.0 - p)
    tr = np.trace(commutator(P, A) @ commutator(Q, A)).real
    return SkewInfoReport(value=float(-0.5 * tr), method="commutator",
                          terms={"commutator_trace": float(tr), "p": p},
                          generator=f"power:{p!r}", diagnostics=diag)


def unbounded_wyd_commutator(rho, A, p: float) -> SkewInfoReport:
    """``-1/(p(1-p)) Tr [rho^p, A][rho^(1-p), A]`` for ``p`` in ``(-1, 0) U (1, 2)``.

    Closed form of the unbounded measure generated by ``h(t) = t**p``.
    """
    p = float(p)
    if not (-1.0 < p < 0.0 or 1.0 < p < 2.0):
        raise ValidationError(f"unbounded WYD exponent {p!r} outside (-1, 0) U (1, 2)")
    rho, A, _, _, diag = _prepare(rho, A)
    _require_strictly_positive(diag)
    P = apply_scalar_function(lambda t: np.power(t, p), rho)
    Q = apply_scalar_function(lambda t: np.power(t, 1.0 - p), rho)
    tr = np.trace(commutator(P, A) @ commutator(Q, A)).real
    return SkewInfoReport(value=float(-tr / (p * (1.0 - p))), method="commutator",
                          terms={"commutator_trace": float(tr), "p": p},
                          generator=f"power:{p!r}", diagnostics=diag)


def _require_strictly_positive(diag: dict) -> None:
    if diag["min_eigenvalue"] <= UNBOUNDED_MIN_EIGENVALUE:
        raise DomainError(f"state not strictly positive: min eigenvalue {diag['min_eigenvalue']:.3e} "
                          f"<= {UNBOUNDED_MIN_EIGENVALUE:g}; unbounded measures live on the state manifold only")


def unbounded_masi(h: MetricLike, rho, A) -> SkewInfoReport:
    """Unbounded skew information ``K(i[rho, A], i[rho, A])`` for a metric with ``f(0) = 0``."""
    mc = as_morozova_cencov(h)
    if mc.metric.regular:
        raise ValidationError(f"metric {mc.metric.name} is regular (f(0) = {mc.metric_constant:g}); "
                              "use masi_spectral")
    rho, A, _, _, diag = _prepare(rho, A)
    _require_strictly_positive(diag)
    B = 1j * commutator(rho, A)
    K = metric_form(mc, rho, B)
    return SkewInfoReport(value=K, method="unbounded", terms={"metric_form": K},
                          generator=_name(mc.metric.source_generator), metric=mc.metric.name,
                          diagnostics=diag)


def bridge_skew_info(alpha: float, rho, A) -> SkewInfoReport:
    """Skew information of the bridge family, written with the modular operator:

        Tr rho A^2 - 1/2 Tr[A ((1+Delta)/2)^(1-2a) (rho^a A rho^(1-a))
                            + A ((1+Delta)/2)^(2a-1) (rho^(1-a) A rho^a)]

    On singular states the eigenbasis route is used instead.  The value always
    follows the formula above.  At ``alpha`` in {0, 1} the generator has
    ``h(0) = 1/2`` or ``h#(0) = 1/2`` and that formula is half of
    ``f(0)/2 * K``.  The report then sets ``normalization_discrepancy`` and
    carries both numbers.
    """
    a = float(alpha)
    h = builtin_bridge(a)
    mc = MorozovaCencov.from_generator(h)
    rho, A, dec, lam, diag = _prepare(rho, A)
    k = mc.metric.normalization
    C = mc.metric_constant / (2.0 * k)
    canonical = masi_spectral(mc, rho, A).value
    if diag["zero_eigenvalues"]:
        value = canonical / (2.0 * C)
        path = "spectral"
        terms = {}
    else:
        path = "modular"
        t0 = np.trace(rho @ A @ A).real
        P = _psd_power(rho, a)
        Q = _psd_power(rho, 1.0 - a)
        mid = lambda r: (1.0 + r) / 2.0  # noqa: E731
        X1 = _modular_apply(dec, lam, lambda r: mid(r) ** (1.0 - 2.0 * a), P @ A @ Q)
        X2 = _modular_apply(dec, lam, lambda r: mid(r) ** (2.0 * a - 1.0), Q @ A @ P)
        t1 = np.trace(A @ X1).real
        t2 = np.trace(A @ X2).real
        value = float(t0 - 0.5 * (t1 + t2))
        terms = {"tr_rho_A2": float(t0), "first_term": float(t1), "second_term": float(t2)}
    discrepancy = abs(2.0 * C - 1.0) > 1e-12
    diag.update({
        "path": path,
        "metric_constant": mc.metric_constant,
        "normalization_discrepancy": discrepancy,
        "bridge_formula_value": float(value),
        "metric_adjusted_value": float(canonical),
    })
    return SkewInfoReport(value=float(value), method="bridge", terms=terms, generator=h.name,
                          metric=mc.metric.name, diagnostics=diag)
