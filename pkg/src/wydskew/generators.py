"""
Scalar generator functions on the positive half-axis and the transforms between them.

A *generator* ``h`` is a positive function on ``(0, inf)`` normalised by
``h(1) = 1``.  From it we build

* ``sharp(h)(t) = t / h(t)``
* ``star(f)(t)  = t * f(1/t)``
* ``tilde(h)(t) = 1 / h(1/t)``

and the metric function

    f(t) = h'(1) (1 - h'(1)) (t - 1)^2 / ((h(t) - 1) (sharp(h)(t) - 1)),

which is operator monotone whenever ``h`` is, and operator monotone
decreasing (before normalisation) when both ``h`` and ``sharp(h)`` are
operator convex.

All callables are vectorised: they accept floats or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, NumericalError, ValidationError

#: Pinned sampling grid for numerical function equality.
SAMPLE_GRID = np.logspace(-4.0, 4.0, 64)
EQUALITY_RTOL = 1e-9

#: Half-width of the window around t = 1 where the 0/0 form is replaced by a Taylor polynomial.
FALLBACK_RADIUS = 1e-4
_RICHARDSON_STEPS = (1e-3, 5e-4)

_FD_STEP = 1e-5
_FD_STABILITY = 1e-6
_LIMIT_EXPONENTS = range(4, 9)
_LIMIT_ATOL = 1e-7
_LIMIT_BLOWUP = 1e12
REGULARITY_THRESHOLD = 1e-12


@dataclass(frozen=True)
class GeneratorFunction:
    """A scalar function on ``(0, inf)`` together with optional analytic metadata.

    ``analytic_sharp_limit_at_zero`` stores ``lim_{t->0} t / h(t)`` when known;
    it lets :func:`construct_f` obtain ``f(0)`` in closed form.
    """

    func: Callable
    name: str = "h"
    analytic_derivative_at_one: Optional[float] = None
    analytic_limit_at_zero: Optional[float] = None
    analytic_sharp_limit_at_zero: Optional[float] = None
    positive: bool = True

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = self.func(arr)
        out = np.asarray(out, dtype=float)
        return float(out) if out.ndim == 0 else out

    def evaluate(self, t):
        return self(t)

    def __repr__(self):
        return f"GeneratorFunction({self.name})"


@dataclass(frozen=True)
class MetricFunction:
    """A metric-generating function ``f`` built from a generator.

    Attributes:
        base: the function ``f`` itself.
        metric_constant: ``f(0)``; the metric is regular when it is positive.
        regular: ``metric_constant > 1e-12``.
        normalization: the factor ``h'(1) (1 - h'(1))`` of the construction.
        source_generator: the ``h`` it came from, if any.
        normalized: whether ``normalization`` was applied.
        symmetric: whether ``f(t) = t f(1/t)`` held on the sample grid.
    """

    base: GeneratorFunction
    metric_constant: float
    regular: bool
    normalization: float
    source_generator: Optional[GeneratorFunction] = None
    normalized: bool = True
    symmetric: bool = False
    taylor_coefficients: tuple = field(default=(), repr=False)

    def __call__(self, t):
        return self.base(t)

    @property
    def name(self) -> str:
        return self.base.name


def _probe(h: GeneratorFunction) -> np.ndarray:
    return np.atleast_1d(h(SAMPLE_GRID))


def _require_nonvanishing(h: GeneratorFunction, what: str) -> None:
    vals = _probe(h)
    bad = ~np.isfinite(vals) | (vals == 0.0)
    if np.any(bad):
        raise DomainError(f"{what}: {h.name} vanishes or is non-finite at t={SAMPLE_GRID[bad][0]!r}")


def functions_equal(f: Callable, g: Callable, rtol: float = EQUALITY_RTOL,
                    grid: np.ndarray = SAMPLE_GRID) -> bool:
    """Pointwise relative equality on the pinned log-spaced grid."""
    a = np.asarray(f(grid), dtype=float)
    b = np.asarray(g(grid), dtype=float)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        return False
    return bool(np.all(np.abs(a - b) <= rtol * np.maximum(np.abs(a), np.abs(b))))


def sharp(h: GeneratorFunction) -> GeneratorFunction:
    """``t -> t / h(t)``."""
    _require_nonvanishing(h, "sharp")
    d = h.analytic_derivative_at_one
    return GeneratorFunction(
        func=lambda t: t / h(t),
        name=f"sharp({h.name})",
        analytic_derivative_at_one=None if d is None else 1.0 - d,
        analytic_limit_at_zero=h.analytic_sharp_limit_at_zero,
        analytic_sharp_limit_at_zero=h.analytic_limit_at_zero,
        positive=h.positive,
    )


def star(f: GeneratorFunction) -> GeneratorFunction:
    """``t -> t f(1/t)``."""
    d = f.analytic_derivative_at_one
    return GeneratorFunction(
        func=lambda t: t * f(1.0 / t),
        name=f"star({f.name})",
        analytic_derivative_at_one=None if d is None else 1.0 - d,
        positive=f.positive,
    )


def tilde(h: GeneratorFunction) -> GeneratorFunction:
    """``t -> 1 / h(1/t)``."""
    _require_nonvanishing(h, "tilde")
    return GeneratorFunction(
        func=lambda t: 1.0 / h(1.0 / t),
        name=f"tilde({h.name})",
        analytic_derivative_at_one=h.analytic_derivative_at_one,
        positive=h.positive,
    )


def five_point_derivative(f: Callable, x, step):
    """Central five-point difference, truncation error O(step^4)."""
    x = np.asarray(x, dtype=float)
    step = np.asarray(step, dtype=float)
    return (-f(x + 2 * step) + 8 * f(x + step) - 8 * f(x - step) + f(x - 2 * step)) / (12 * step)


def derivative_at_one(h: GeneratorFunction) -> float:
    """``h'(1)``: analytic value if recorded, else a five-point difference with step 1e-5.

    The difference is repeated with step 2e-5; disagreement beyond 1e-6 raises
    :class:`NumericalError`.
    """
    if h.analytic_derivative_at_one is not None:
        return float(h.analytic_derivative_at_one)
    d1 = float(five_point_derivative(h, 1.0, _FD_STEP))
    d2 = float(five_point_derivative(h, 1.0, 2 * _FD_STEP))
    if not (math.isfinite(d1) and math.isfinite(d2)) or abs(d1 - d2) > _FD_STABILITY:
        raise NumericalError(f"unstable derivative of {h.name} at 1: {d1!r} vs {d2!r}")
    return d1


def limit_at_zero(h: GeneratorFunction) -> float:
    """``lim_{t->0+} h(t)``, possibly ``inf``.

    Without analytic metadata, ``h`` is sampled at ``t = 10**-k`` for
    ``k = 4..8``; the last sample is returned once consecutive samples agree
    to 1e-7.  Samples above 1e12 that keep growing give ``inf``.
    """
    if h.analytic_limit_at_zero is not None:
        return float(h.analytic_limit_at_zero)
    ts = np.array([10.0 ** -k for k in _LIMIT_EXPONENTS])
    vals = np.atleast_1d(h(ts))
    if vals[-1] > _LIMIT_BLOWUP and vals[-1] > vals[-2]:
        return math.inf
    if np.all(np.isfinite(vals[-2:])) and abs(vals[-1] - vals[-2]) < _LIMIT_ATOL:
        return float(vals[-1])
    raise NumericalError(f"no numerical limit of {h.name} at 0: samples {vals.tolist()}")


def _check_generator(h: GeneratorFunction) -> None:
    one = h(1.0)
    if not abs(one - 1.0) <= 1e-12:
        raise ValidationError(f"{h.name} is not normalised: h(1) = {one!r}")
    vals = _probe(h)
    if np.allclose(vals, 1.0, rtol=0.0, atol=1e-12):
        raise ValidationError(f"{h.name} is constant; the construction needs h neither constant nor the identity")
    if np.allclose(vals, SAMPLE_GRID, rtol=1e-12, atol=0.0):
        raise ValidationError(f"{h.name} is the identity; the construction needs h neither constant nor the identity")


def _raw_rule(h: GeneratorFunction, hs: GeneratorFunction) -> Callable:
    def raw(t):
        t = np.asarray(t, dtype=float)
        denom = (np.asarray(h(t)) - 1.0) * (np.asarray(hs(t)) - 1.0)
        if np.any(denom == 0.0):
            bad = np.atleast_1d(t)[np.atleast_1d(denom == 0.0)][0]
            raise DomainError(f"(h(t) - 1)(h#(t) - 1) vanishes at t={float(bad)!r}")
        return (t - 1.0) ** 2 / denom

    return raw


def _taylor_coefficients(raw: Callable, value_at_one: float) -> tuple:
    """Richardson-extrapolated first and second derivatives of ``raw`` at 1."""
    s1, s2 = _RICHARDSON_STEPS
    p1, m1, p2, m2 = np.asarray(raw(np.array([1 + s1, 1 - s1, 1 + s2, 1 - s2])), dtype=float)
    d1_s1 = (p1 - m1) / (2 * s1)
    d1_s2 = (p2 - m2) / (2 * s2)
    d2_s1 = (p1 - 2 * value_at_one + m1) / s1 ** 2
    d2_s2 = (p2 - 2 * value_at_one + m2) / s2 ** 2
    # s2 = s1 / 2, so the O(s^2) error cancels with weights (4, -1) / 3.
    return value_at_one, (4 * d1_s2 - d1_s1) / 3, (4 * d2_s2 - d2_s1) / 3


def _limit_of_raw(h: GeneratorFunction) -> Optional[float]:
    h0, hs0 = h.analytic_limit_at_zero, h.analytic_sharp_limit_at_zero
    if h0 is None or hs0 is None:
        return None
    # (h - 1)(h# - 1) at 0; an infinite factor sends the quotient to 0.
    if math.isinf(h0) or math.isinf(hs0):
        return 0.0
    return 1.0 / ((h0 - 1.0) * (hs0 - 1.0))


def construct_f(h: GeneratorFunction, normalize: bool = True) -> MetricFunction:
    """Build ``f(t) = k (t-1)^2 / ((h(t)-1)(h#(t)-1))`` with ``k = h'(1)(1-h'(1))``.

    With ``normalize=False`` the factor ``k`` is omitted.  For operator convex
    ``h`` (e.g. ``t**1.5``) ``k`` is negative, so the raw function is negative
    and decreasing while the normalised one is positive with ``f(0) = 0``.

    Within 1e-4 of ``t = 1`` the quotient is replaced by its second order
    Taylor polynomial, whose value at 1 is ``1/k`` and whose derivatives come
    from Richardson extrapolation of the quotient at steps 1e-3 and 5e-4.
    """
    _check_generator(h)
    hs = sharp(h)
    d = derivative_at_one(h)
    k = d * (1.0 - d)
    if k == 0.0:
        raise ValidationError(f"h'(1) = {d!r} gives a zero normalisation")
    raw = _raw_rule(h, hs)
    coeffs = _taylor_coefficients(raw, 1.0 / k)
    c0, c1, c2 = coeffs
    scale = k if normalize else 1.0

    def f(t):
        t = np.asarray(t, dtype=float)
        near = np.abs(t - 1.0) < FALLBACK_RADIUS
        if t.ndim == 0:
            u = float(t) - 1.0
            val = c0 + c1 * u + 0.5 * c2 * u * u if near else raw(t)
            return scale * val
        out = np.empty_like(t)
        u = t[near] - 1.0
        out[near] = c0 + c1 * u + 0.5 * c2 * u * u
        if np.any(~near):
            out[~near] = raw(t[~near])
        return scale * out

    raw0 = _limit_of_raw(h)
    label = f"f[{h.name}]" if normalize else f"raw_f[{h.name}]"
    base = GeneratorFunction(
        func=f,
        name=label,
        analytic_derivative_at_one=None,
        analytic_limit_at_zero=None if raw0 is None else (0.0 if raw0 == 0.0 else scale * raw0),
        positive=normalize or k > 0,
    )
    try:
        f0 = limit_at_zero(base)
    except NumericalError:
        if normalize:
            raise
        f0 = math.nan  # the raw function is not a metric; its limit is informational
    if f0 == 0.0:
        f0 = 0.0  # drop the sign of -0.0
    symmetric = functions_equal(base, star(base))
    return MetricFunction(
        base=base,
        metric_constant=f0,
        regular=f0 > REGULARITY_THRESHOLD,
        normalization=k,
        source_generator=h,
        normalized=normalize,
        symmetric=symmetric,
        taylor_coefficients=coeffs,
    )


def g_auxiliary(h: GeneratorFunction) -> GeneratorFunction:
    """``g(t) = (h(t)-1)/(t-1) + (h#(t)-1)/(t-1)`` with ``g(1) = 1``.

    The unnormalised metric function satisfies ``f(t) = -(t-1)/(g(t)-1)``.
    Near ``t = 1`` this identity is used in reverse, ``g = 1 - (t-1)/f``, so
    ``g`` inherits the Taylor fallback of :func:`construct_f`.
    """
    _check_generator(h)
    hs = sharp(h)
    raw_f = construct_f(h, normalize=False)

    def g(t):
        t = np.asarray(t, dtype=float)
        near = np.abs(t - 1.0) < FALLBACK_RADIUS
        far = np.where(near, 2.0, t)
        direct = (np.asarray(h(far)) - 1.0) / (far - 1.0) + (np.asarray(hs(far)) - 1.0) / (far - 1.0)
        if not np.any(near):
            return direct
        tn = np.where(near, t, 1.0)
        safe_f = np.asarray(raw_f(tn))
        viafallback = 1.0 - (tn - 1.0) / safe_f
        return np.where(near, viafallback, direct)

    return GeneratorFunction(func=g, name=f"g[{h.name}]", analytic_derivative_at_one=None)


@dataclass(frozen=True)
class SymmetryReport:
    star_symmetric: bool
    tilde_symmetric: bool
    f_symmetric: bool
    f_symmetric_verified: Optional[bool]


def symmetry_class(h: GeneratorFunction) -> SymmetryReport:
    """Which of ``h = h*`` and ``h = tilde(h)`` hold; either makes the constructed ``f`` symmetric.

    ``f_symmetric_verified`` is the direct check ``f = f*`` on the constructed
    function, or ``None`` when ``h`` admits no construction.
    """
    s = functions_equal(h, star(h))
    t = functions_equal(h, tilde(h))
    try:
        verified = construct_f(h).symmetric
    except (ValidationError, DomainError, NumericalError):
        verified = None
    return SymmetryReport(star_symmetric=s, tilde_symmetric=t, f_symmetric=s or t or bool(verified),
                          f_symmetric_verified=verified)


# -- builtin families ---------------------------------------------------------

def builtin_power(p: float) -> GeneratorFunction:
    """``t**p`` for ``p`` in ``(-1, 0) U (0, 1) U (1, 2)``.

    Operator monotone for ``0 < p < 1``; for the other two ranges both ``h``
    and ``sharp(h)`` are operator convex.
    """
    p = float(p)
    if not -1.0 < p < 2.0:
        raise ValidationError(f"power exponent {p!r} outside (-1, 2)")
    if p in (0.0, 1.0):
        raise ValidationError(f"power exponent {p!r} gives a constant or the identity; "
                              "h must be neither constant nor the identity")
    return GeneratorFunction(
        func=lambda t: np.power(t, p),
        name=f"power:{p!r}",
        analytic_derivative_at_one=p,
        analytic_limit_at_zero=0.0 if p > 0 else math.inf,
        analytic_sharp_limit_at_zero=0.0 if p < 1 else math.inf,
    )


def builtin_bridge(alpha: float) -> GeneratorFunction:
    """``t**alpha ((1+t)/2)**(1-2 alpha)`` for ``0 <= alpha <= 1``.

    ``sharp`` maps ``alpha`` to ``1 - alpha``.  ``alpha = 0`` is ``(1+t)/2``,
    ``alpha = 1/2`` is ``sqrt(t)``, ``alpha = 1`` is ``2t/(1+t)``.
    """
    a = float(alpha)
    if not 0.0 <= a <= 1.0:
        raise ValidationError(f"bridge parameter {a!r} outside [0, 1]")
    return GeneratorFunction(
        func=lambda t: np.power(t, a) * np.power((1.0 + t) / 2.0, 1.0 - 2.0 * a),
        name=f"bridge:{a!r}",
        analytic_derivative_at_one=0.5,
        analytic_limit_at_zero=0.5 if a == 0.0 else 0.0,
        analytic_sharp_limit_at_zero=0.5 if a == 1.0 else 0.0,
    )


def _exotic_log(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("exotic generator is defined for t > 0 only")
    small = t <= 1.0
    ts = np.where(small, t, 1.0)
    tl = np.where(small, 1.0, t)
    # Two algebraically equal forms; each avoids cancelling large terms on its side of 1,
    # and they are exact mirror images under t -> 1/t.
    lo = (1.0 + ts) * np.log(ts) + (1.0 / ts - ts) * np.log1p(ts)
    hi = (1.0 + 1.0 / tl) * np.log(tl) - (tl - 1.0 / tl) * np.log1p(1.0 / tl)
    return np.where(small, lo, hi)


def builtin_exotic() -> GeneratorFunction:
    """``(t/(1+t))**(1+t) * (1+t)**(1+1/t)``, operator monotone with ``h = tilde(h)``.

    ``h'(1) = 2 - 2 ln 2``, ``h(0) = 0`` and ``t/h(t) -> 1/e`` as ``t -> 0``.
    """
    return GeneratorFunction(
        func=lambda t: np.exp(_exotic_log(t)),
        name="exotic",
        analytic_derivative_at_one=2.0 - 2.0 * math.log(2.0),
        analytic_limit_at_zero=0.0,
        analytic_sharp_limit_at_zero=math.exp(-1.0),
    )


def generator(func: Callable, name: str = "h", **metadata) -> GeneratorFunction:
    """Wrap a plain vectorised callable as a :class:`GeneratorFunction`."""
    return GeneratorFunction(func=func, name=name, **metadata)


def with_metadata(h: GeneratorFunction, **changes) -> GeneratorFunction:
    return replace(h, **changes)
