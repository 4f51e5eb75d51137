"""Special functions and the adaptive quadrature engine used by every other module.

The quadrature is a global-adaptive bisection scheme built on the nested
7-point Gauss / 15-point Kronrod pair.  Semi-infinite ranges are mapped to
(0, 1) by t = a - log(1 - u), which assumes the integrand decays at least
exponentially (the caller's contract).  Algebraic endpoint singularities
t^alpha with alpha in (-1, 0) are removed by the substitution
t = a + s^(1/(1+alpha)), which turns the singular factor into a constant
Jacobian; the integrand is never evaluated at the endpoint itself.

All integrands are expected to be vectorized: f(x) must accept a 1-D numpy
array and return an array of the same length.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "integrate",
    "integrate_components",
    "log_gamma",
    "log_beta",
    "gaussian_radial_moment",
    "log_gaussian_radial_moment",
    "one_minus_exp",
]


# ---------------------------------------------------------------------------
# small special functions
# ---------------------------------------------------------------------------

# Lanczos approximation, g = 7 with 9 coefficients.  Gives ~1e-15 relative
# accuracy on Gamma itself for x >= 0.5; the reflection formula covers (0, 0.5).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0 (Lanczos, g=7, 9 terms)."""
    if not x > 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _LN_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def log_beta(a: float, b: float) -> float:
    """log B(a, b) = log Gamma(a) + log Gamma(b) - log Gamma(a+b), a, b > 0."""
    if not (a > 0.0 and b > 0.0):
        raise ValueError(f"log_beta requires positive arguments, got {a!r}, {b!r}")
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def log_gaussian_radial_moment(m: int) -> float:
    """log of int_0^inf exp(-rho^2/2) rho^m drho = log[Gamma((m+1)/2) 2^((m-1)/2)]."""
    if m < 0:
        raise ValueError(f"radial moment needs m >= 0, got {m}")
    return log_gamma(0.5 * (m + 1)) + 0.5 * (m - 1) * math.log(2.0)


def gaussian_radial_moment(m: int) -> float:
    """int_0^inf exp(-rho^2/2) rho^m drho.

    Overflows float64 around m ~ 300; use log_gaussian_radial_moment for the
    large-m regime (the polar-coordinate reduction does).
    """
    return math.exp(log_gaussian_radial_moment(m))


def one_minus_exp(x):
    """1 - exp(-x) without cancellation for small x (expm1-based)."""
    return -np.expm1(-x)


# ---------------------------------------------------------------------------
# Gauss-Kronrod 7/15 pair
# ---------------------------------------------------------------------------

_XGK = np.array([
    0.9914553711208126392068547,
    0.9491079123427585245261897,
    0.8648644233597690727897128,
    0.7415311855993944398638648,
    0.5860872354676911302941448,
    0.4058451513773971669066064,
    0.2077849550078984676006894,
])
_WGK = np.array([
    0.0229353220105292249637320,
    0.0630920926299785532907007,
    0.1047900103222501838398763,
    0.1406532597155259187451896,
    0.1690047266392679028265834,
    0.1903505780647854099132564,
    0.2044329400752988924141620,
])
_WGK_CENTER = 0.2094821410847278280129992
_WG = np.array([
    0.1294849661688696932706114,
    0.2797053914892766679014678,
    0.3818300505051189449503698,
])
_WG_CENTER = 0.4179591836734693877551020

# nodes in ascending order on [-1, 1]; index 7 is the center
_NODES = np.concatenate((-_XGK, [0.0], _XGK[::-1]))
_W_K15 = np.concatenate((_WGK, [_WGK_CENTER], _WGK[::-1]))
_W_G7 = np.zeros(15)
_W_G7[[1, 3, 5]] = _WG
_W_G7[7] = _WG_CENTER
_W_G7[[9, 11, 13]] = _WG[::-1]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and endpoint handling for the adaptive integrator.

    singular_lower / singular_upper: algebraic singularity exponent alpha in
    (-1, 0) at the respective endpoint, or None for a regular endpoint.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 512
    singular_lower: float | None = None
    singular_upper: float | None = None

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        for alpha in (self.singular_lower, self.singular_upper):
            if alpha is not None and not (-1.0 < alpha < 0.0):
                raise ValueError(
                    f"algebraic endpoint exponent must lie in (-1, 0), got {alpha!r}"
                )


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    converged: bool
    neval: int = 0

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.converged and other.converged,
            self.neval + other.neval,
        )


def _panel(f, a, b):
    """K15 estimate, error |K15 - G7| and node count on one panel."""
    h = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = np.asarray(f(mid + h * _NODES), dtype=float)
    k15 = h * float(_W_K15 @ y)
    g7 = h * float(_W_G7 @ y)
    return k15, abs(k15 - g7)


def _tolerance(spec, value):
    return max(spec.abs_tol, spec.rel_tol * abs(value))


def _adaptive(f, a, b, spec):
    """Global-adaptive GK15 on a finite interval, no endpoint transforms."""
    v, e = _panel(f, a, b)
    neval = 15
    # heap entries: (-err, lo, hi, value, err, splittable)
    panels = [(-e, a, b, v, e, True)]
    nsplit = 0
    while nsplit < spec.max_subdivisions:
        total_v = math.fsum(p[3] for p in panels)
        total_e = math.fsum(p[4] for p in panels)
        if total_e <= _tolerance(spec, total_v):
            return QuadResult(total_v, total_e, True, neval)
        negerr, lo, hi, pv, pe, splittable = heapq.heappop(panels)
        mid = 0.5 * (lo + hi)
        if not splittable or not (lo < mid < hi):
            # interval exhausted at machine precision; give up on refining it
            heapq.heappush(panels, (0.0, lo, hi, pv, pe, False))
            if all(not p[5] for p in panels):
                break
            continue
        v1, e1 = _panel(f, lo, mid)
        v2, e2 = _panel(f, mid, hi)
        neval += 30
        heapq.heappush(panels, (-e1, lo, mid, v1, e1, True))
        heapq.heappush(panels, (-e2, mid, hi, v2, e2, True))
        nsplit += 1
    total_v = math.fsum(p[3] for p in panels)
    total_e = math.fsum(p[4] for p in panels)
    return QuadResult(total_v, total_e, total_e <= _tolerance(spec, total_v), neval)


def _algebraic_sub(f, a, b, alpha, mirror):
    """Substitution removing a t^alpha endpoint singularity.

    lower end:  t = a + s^q,  q = 1/(1+alpha);   mirror: t = b - s^q.
    Returns (g, s_max) with int_a^b f dt = int_0^{s_max} g ds.
    """
    q = 1.0 / (1.0 + alpha)
    s_max = (b - a) ** (1.0 / q)

    if mirror:
        def g(s):
            return f(b - s**q) * q * s ** (q - 1.0)
    else:
        def g(s):
            return f(a + s**q) * q * s ** (q - 1.0)

    return g, s_max


def integrate(f, a: float, b: float, spec: QuadratureSpec | None = None) -> QuadResult:
    """Adaptive quadrature of f over (a, b); b may be math.inf.

    Non-convergence is reported through QuadResult.converged, never silently.
    """
    if spec is None:
        spec = QuadratureSpec()
    if math.isinf(a):
        raise ValueError("lower endpoint must be finite")
    if math.isinf(b):
        if spec.singular_upper is not None:
            raise ValueError("cannot flag a singularity at an infinite endpoint")
        if spec.singular_lower is not None:
            head = integrate(f, a, a + 1.0, replace(spec, singular_upper=None))
            tail = integrate(f, a + 1.0, math.inf, replace(spec, singular_lower=None))
            return head + tail
        # t = a - log(1 - u) maps (a, inf) to u in (0, 1); dt = du / (1 - u)
        def g(u):
            t = a - np.log1p(-u)
            return f(t) / (1.0 - u)

        return _adaptive(g, 0.0, 1.0, spec)

    if not a < b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")

    if spec.singular_lower is not None and spec.singular_upper is not None:
        mid = 0.5 * (a + b)
        lo = integrate(f, a, mid, replace(spec, singular_upper=None))
        hi = integrate(f, mid, b, replace(spec, singular_lower=None))
        return lo + hi
    if spec.singular_lower is not None:
        g, s_max = _algebraic_sub(f, a, b, spec.singular_lower, mirror=False)
        return _adaptive(g, 0.0, s_max, spec)
    if spec.singular_upper is not None:
        g, s_max = _algebraic_sub(f, a, b, spec.singular_upper, mirror=True)
        return _adaptive(g, 0.0, s_max, spec)
    return _adaptive(f, a, b, spec)


# ---------------------------------------------------------------------------
# vector-valued adaptive quadrature (shared panels across components)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentsResult:
    values: np.ndarray
    errors: np.ndarray
    converged: bool
    neval: int


def integrate_components(f, a: float, b: float, n_components: int,
                         spec: QuadratureSpec | None = None) -> ComponentsResult:
    """Adaptive GK15 for a vector integrand on a finite interval.

    f(x) with x of shape (n,) must return shape (n, K).  All components share
    one panel set; refinement is driven by the component that is worst
    relative to its own tolerance.  Used where many integrals need the same
    expensive per-node state (e.g. the covariance norm across a whole
    spectrum), giving O(panels) instead of O(K * panels) node evaluations.
    """
    if spec is None:
        spec = QuadratureSpec()
    if not a < b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")

    def panel(lo, hi):
        h = 0.5 * (hi - lo)
        mid = 0.5 * (lo + hi)
        y = np.asarray(f(mid + h * _NODES), dtype=float)
        if y.shape != (15, n_components):
            raise ValueError(f"integrand returned shape {y.shape}, "
                             f"expected (15, {n_components})")
        k15 = h * (_W_K15 @ y)
        g7 = h * (_W_G7 @ y)
        return k15, np.abs(k15 - g7)

    v, e = panel(a, b)
    neval = 15
    panels = [(a, b, v, e, True)]
    nsplit = 0
    while True:
        totals = np.sum([p[2] for p in panels], axis=0)
        errs = np.sum([p[3] for p in panels], axis=0)
        tol = np.maximum(spec.abs_tol, spec.rel_tol * np.abs(totals))
        if np.all(errs <= tol):
            return ComponentsResult(totals, errs, True, neval)
        if nsplit >= spec.max_subdivisions:
            return ComponentsResult(totals, errs, False, neval)
        # split the panel with the worst tolerance-relative error
        scores = [np.max(p[3] / tol) if p[4] else -1.0 for p in panels]
        idx = int(np.argmax(scores))
        if scores[idx] < 0.0:
            return ComponentsResult(totals, errs, False, neval)
        lo, hi, pv, pe, _ = panels.pop(idx)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            panels.append((lo, hi, pv, pe, False))
            continue
        v1, e1 = panel(lo, mid)
        v2, e2 = panel(mid, hi)
        neval += 30
        panels.append((lo, mid, v1, e1, True))
        panels.append((mid, hi, v2, e2, True))
        nsplit += 1
