"""Eigenvalue sequences of the drift and the derived time-dependent covariance scalars.

A spectrum is one of three kinds:

* quadratic  -- eigenvalue(k) = c0 * k**2 (the canonical divergence instance),
* explicit   -- a finite ascending list, optionally certified to dominate
                certified_c0 * k**2,
* constant   -- eigenvalue(k) = lam for all k (the scalar, dimension-free case).

For time t >= 0 the covariance scalars are
    c_k(t) = sqrt((1 - exp(-2 lam_k t)) / (2 lam_k)),
computed through expm1 so that small t * lam_k does not cancel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import one_minus_exp

__all__ = ["Spectrum", "CovScalars", "cov_scalars", "tail_sum_bound",
           "c_norm_upper", "sqrt_harmonic_sum"]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Immutable eigenvalue sequence; build via quadratic/explicit/constant."""

    kind: str
    c0: float | None = None
    values: tuple[float, ...] | None = None
    lam: float | None = None
    certified_c0: float | None = None

    @classmethod
    def quadratic(cls, c0: float = 1.0) -> "Spectrum":
        if not c0 > 0.0:
            raise ValueError(f"quadratic spectrum needs c0 > 0, got {c0!r}")
        return cls(kind="quadratic", c0=float(c0))

    @classmethod
    def explicit(cls, values, certified_c0: float | None = None) -> "Spectrum":
        vals = tuple(float(v) for v in values)
        if not vals:
            raise ValueError("explicit spectrum needs at least one eigenvalue")
        if vals[0] <= 0.0:
            raise ValueError("eigenvalues must be positive")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("explicit eigenvalues must be strictly increasing")
        if certified_c0 is not None:
            if not certified_c0 > 0.0:
                raise ValueError("certificate constant must be positive")
            for k, v in enumerate(vals, start=1):
                if v < certified_c0 * k * k:
                    raise ValueError(
                        f"certificate violated: eigenvalue {k} is {v}, "
                        f"below {certified_c0} * {k}^2")
        return cls(kind="explicit", values=vals, certified_c0=certified_c0)

    @classmethod
    def constant(cls, lam: float) -> "Spectrum":
        if not lam > 0.0:
            raise ValueError(f"constant spectrum needs lam > 0, got {lam!r}")
        return cls(kind="constant", lam=float(lam))

    @classmethod
    def from_descriptor(cls, text: str) -> "Spectrum":
        """Parse 'quadratic:c0=1' | 'constant:lambda=2.5' | 'explicit:file=<path>'."""
        kind, _, rest = text.partition(":")
        kind = kind.strip().lower()
        opts = {}
        if rest:
            for piece in rest.split(","):
                key, _, val = piece.partition("=")
                opts[key.strip()] = val.strip()
        if kind == "quadratic":
            return cls.quadratic(float(opts.get("c0", 1.0)))
        if kind == "constant":
            if "lambda" not in opts:
                raise ValueError("constant spectrum needs lambda=<value>")
            return cls.constant(float(opts["lambda"]))
        if kind == "explicit":
            if "file" not in opts:
                raise ValueError("explicit spectrum needs file=<path>")
            with open(opts["file"]) as fh:
                vals = [float(line) for line in fh
                        if line.strip() and not line.lstrip().startswith("#")]
            cert = float(opts["c0"]) if "c0" in opts else None
            return cls.explicit(vals, certified_c0=cert)
        raise ValueError(f"unknown spectrum kind {kind!r}")

    # -- queries ------------------------------------------------------------

    @property
    def is_increasing(self) -> bool:
        return self.kind != "constant"

    @property
    def size(self) -> int | None:
        """Largest usable index for explicit spectra, None if unbounded."""
        return len(self.values) if self.kind == "explicit" else None

    def eigenvalue(self, k: int) -> float:
        if k < 1:
            raise ValueError(f"eigenvalue index starts at 1, got {k}")
        if self.kind == "quadratic":
            return self.c0 * k * k
        if self.kind == "constant":
            return self.lam
        if k > len(self.values):
            raise IndexError(f"explicit spectrum has {len(self.values)} "
                             f"eigenvalues, index {k} out of range")
        return self.values[k - 1]

    def eigenvalues(self, m: int) -> np.ndarray:
        """First m eigenvalues as an array."""
        if m < 1:
            raise ValueError(f"need m >= 1, got {m}")
        if self.kind == "quadratic":
            k = np.arange(1, m + 1, dtype=float)
            return self.c0 * k * k
        if self.kind == "constant":
            return np.full(m, self.lam)
        if m > len(self.values):
            raise IndexError(f"explicit spectrum has {len(self.values)} "
                             f"eigenvalues, requested {m}")
        return np.array(self.values[:m])

    def describe(self) -> str:
        if self.kind == "quadratic":
            return f"quadratic:c0={self.c0:.17g}"
        if self.kind == "constant":
            return f"constant:lambda={self.lam:.17g}"
        return f"explicit:n={len(self.values)}" + (
            f",c0={self.certified_c0:.17g}" if self.certified_c0 else "")


@dataclass(frozen=True, eq=False)
class CovScalars:
    """Covariance scalars c_k(t) of the smoothing Gaussian at time t."""

    t: float
    c: np.ndarray = field(repr=False)
    norm: float

    @property
    def c_squared(self) -> np.ndarray:
        return self.c * self.c


def cov_scalars(spectrum: Spectrum, m: int, t: float) -> CovScalars:
    """c_k(t) = sqrt((1 - e^{-2 lam_k t}) / (2 lam_k)) for k = 1..m and |c(t)|."""
    if t < 0.0:
        raise ValueError(f"need t >= 0, got {t!r}")
    lam = spectrum.eigenvalues(m)
    csq = one_minus_exp(2.0 * lam * t) / (2.0 * lam)
    c = np.sqrt(csq)
    return CovScalars(t=t, c=c, norm=float(math.sqrt(csq.sum())))


def tail_sum_bound(c0: float, s: float) -> float:
    """Upper bound sqrt(pi / (2 c0 s)) for sum_k exp(-2 lam_k s), lam_k >= c0 k^2."""
    if not (c0 > 0.0 and s > 0.0):
        raise ValueError("tail_sum_bound needs c0 > 0 and s > 0")
    return math.sqrt(math.pi / (2.0 * c0 * s))


def c_norm_upper(c0: float, t: float) -> float:
    """Upper bound (2 pi t / c0)^(1/4) for |c(t)| when lam_k >= c0 k^2."""
    if not (c0 > 0.0 and t > 0.0):
        raise ValueError("c_norm_upper needs c0 > 0 and t > 0")
    return (2.0 * math.pi * t / c0) ** 0.25


def sqrt_harmonic_sum(spectrum: Spectrum, m: int) -> float:
    """sum_{k<=m} eigenvalue(k)^(-1/2); grows like log m for quadratic spectra."""
    if not spectrum.is_increasing:
        raise ValueError("sqrt_harmonic_sum is meaningless for a constant "
                         "spectrum; it quantifies divergence of increasing ones")
    lam = spectrum.eigenvalues(m)
    return float(np.sum(1.0 / np.sqrt(lam)))
