"""Gaussian one-photon angular-frequency distributions.

The amplitude is f(ω) = exp(-(ω - ω̄)²/2σ²)/N on ω >= 0, with N fixed by
unit norm of f², which brings in an error function because the domain is
truncated at zero.  Everything downstream (interferograms, oracles, fits)
consumes these distributions, so the type is immutable and validated at
construction.

Units are the caller's business as long as they are consistent: internally
frequencies and delays only ever appear through products like ωτ, so the
natural choice is ω in units of σ and τ in units of 1/σ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import integrate_half_line

__all__ = [
    "SpectralDistribution",
    "normalization_constant",
    "weighted_overlap",
]

_SQRT_PI = math.sqrt(math.pi)
_KERNELS = ("one", "cos", "sin")


def normalization_constant(mean_freq: float, width: float, *, extended_range: bool = False) -> float:
    """Squared norm |N|² of the Gaussian amplitude: (σ√π/2)(1 + erf(ω̄/σ)).

    ``extended_range=True`` returns the σ√π limit obtained by letting the
    frequency integral run over the whole real line, which is the value the
    approximate closed-form interferograms implicitly use.  (The error made
    is exponentially small in (ω̄/σ)²; note the limit is σ√π, sometimes
    misprinted as σπ.)
    """
    if width <= 0.0:
        raise ValueError(f"spectral width must be positive, got {width}")
    if extended_range:
        return width * _SQRT_PI
    return 0.5 * width * _SQRT_PI * (1.0 + math.erf(mean_freq / width))


@dataclass(frozen=True)
class SpectralDistribution:
    """Normalized real Gaussian amplitude with mean ω̄ >= 0 and width σ > 0."""

    mean_freq: float
    width: float
    normalization: float = field(init=False, repr=False)

    def __post_init__(self):
        if self.width <= 0.0:
            raise ValueError(f"spectral width must be positive, got {self.width}")
        if self.mean_freq < 0.0:
            raise ValueError(f"mean frequency must be non-negative, got {self.mean_freq}")
        norm_sq = normalization_constant(self.mean_freq, self.width)
        object.__setattr__(self, "normalization", math.sqrt(norm_sq))

    def amplitude(self, omega):
        """f(ω) = exp(-(ω-ω̄)²/2σ²)/N; only defined for ω >= 0."""
        w = np.asarray(omega, dtype=float)
        if np.any(w < 0.0):
            raise ValueError("angular frequency must be non-negative")
        u = (w - self.mean_freq) / self.width
        out = np.exp(-0.5 * u * u) / self.normalization
        return out if out.ndim else float(out)

    def upper_cutoff(self, pad: float = 9.0) -> float:
        return self.mean_freq + pad * self.width


def weighted_overlap(
    f: SpectralDistribution,
    g: SpectralDistribution,
    weight_power: int = 0,
    kernel: str = "one",
    tau: float = 0.0,
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-12,
) -> float:
    """∫₀^∞ ω^p f(ω) g(ω) kernel(ωτ) dω for kernel in {one, cos, sin}.

    This is the shared integral behind every spectral-state interferogram:
    p = 1, kernel = cos gives the fringe terms, kernel = sin the coherent
    cross term, and (f, f, 0, one) recovers the unit norm.  Symmetric in
    (f, g) bit-for-bit, because the integrand is built from the commutative
    product of the two amplitudes.
    """
    if weight_power not in (0, 1, 2, 3):
        raise ValueError(f"unsupported weight power {weight_power}")
    if kernel not in _KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}; expected one of {_KERNELS}")
    tau = float(tau)

    if kernel == "one":
        kern = None
    elif kernel == "cos":
        kern = np.cos
    else:
        kern = np.sin

    def integrand(w):
        y = f.amplitude(w) * g.amplitude(w)
        if weight_power:
            y = y * w**weight_power
        if kern is not None:
            y = y * kern(w * tau)
        return y

    peak = max(f.mean_freq, g.mean_freq)
    amp_scale = 1.0 / (f.normalization * g.normalization)

    def envelope(x):
        # pointwise bound on |integrand| for x beyond both means
        return (x**weight_power) * f.amplitude(x) * g.amplitude(x) if x > peak else amp_scale * (peak + 1.0)

    cutoff_start = max(f.upper_cutoff(1.0), g.upper_cutoff(1.0))
    result = integrate_half_line(
        integrand,
        envelope=envelope,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
        osc_scale=abs(tau) if kernel != "one" else 0.0,
        cutoff_start=cutoff_start,
    )
    return result.value
