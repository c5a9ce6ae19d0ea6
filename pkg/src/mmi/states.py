"""Input port states: vacuum, one-photon Fock, coherent, and thermal.

The interferometer accepts one state per port.  Spectral states carry a
Gaussian amplitude; thermal states are characterized entirely by a
dimensionless temperature θ (k_B T / ħ in the working frequency unit),
because the detected mean intensity depends on the state only through the
per-mode mean occupation n̄(ω, θ).

Thermal light is chaotic: its phase-space representation is a circularly
symmetric complex Gaussian per mode, which is what ``sample_thermal_field``
draws.  The sampling convention fixes E[|α_j|²] = n̄(ω_j, θ) exactly per
mode; the mode-density factor ω^(d-1) δω of a d-dimensional field belongs
to the intensity sums, not to the amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import integrate_half_line
from .spectra import SpectralDistribution
from .thermal_kernels import bose_integral_constant

__all__ = [
    "Coherent",
    "OnePhoton",
    "PortState",
    "Thermal",
    "ThermalSampleField",
    "Vacuum",
    "bose_weighted_integral",
    "mean_occupation",
    "sample_thermal_field",
]


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class OnePhoton:
    spectrum: SpectralDistribution


@dataclass(frozen=True)
class Coherent:
    spectrum: SpectralDistribution


@dataclass(frozen=True)
class Thermal:
    theta: float  # dimensionless temperature, k_B T / hbar in frequency units

    def __post_init__(self):
        if self.theta <= 0.0:
            raise ValueError(f"temperature must be positive, got {self.theta}")


PortState = Vacuum | OnePhoton | Coherent | Thermal


def mean_occupation(omega, theta: float):
    """Bose-Einstein mean photon number 1/(exp(ω/θ) - 1).

    Strictly decreasing in ω, diverging like θ/ω as ω -> 0+.  The pole is
    outside the domain: ω must be positive.
    """
    if theta <= 0.0:
        raise ValueError(f"temperature must be positive, got {theta}")
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0.0):
        raise ValueError("mean occupation requires omega > 0")
    out = 1.0 / np.expm1(w / theta)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ThermalSampleField:
    """One realization of per-mode complex amplitudes of a thermal field."""

    frequencies: np.ndarray
    amplitudes: np.ndarray
    seed: int

    def __post_init__(self):
        if self.frequencies.shape != self.amplitudes.shape:
            raise ValueError("frequency grid and amplitude array differ in shape")


def sample_amplitudes(rng: np.random.Generator, nbar: np.ndarray, draws: int) -> np.ndarray:
    """(draws, modes) circularly symmetric complex Gaussians, E|α|² = n̄."""
    scale = np.sqrt(0.5 * nbar)
    re = rng.standard_normal((draws, nbar.size))
    im = rng.standard_normal((draws, nbar.size))
    return scale * (re + 1j * im)


def sample_thermal_field(theta: float, mode_grid: np.ndarray, seed: int) -> ThermalSampleField:
    """Draw one chaotic-light realization on the given frequency grid.

    Per mode the amplitude is a circularly symmetric complex Gaussian with
    E[|α_j|²] = n̄(ω_j, θ): uniformly random phase, exponentially
    distributed |α_j|².  Deterministic for a fixed seed (PCG64, 128-bit
    state).
    """
    grid = np.asarray(mode_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("mode grid is empty")
    nbar = np.asarray(mean_occupation(grid, theta), dtype=float)
    rng = np.random.default_rng(seed)
    amps = sample_amplitudes(rng, nbar, 1)[0]
    return ThermalSampleField(frequencies=grid, amplitudes=amps, seed=seed)


def bose_weighted_integral(
    theta: float,
    d: int,
    kernel: str = "one",
    tau: float = 0.0,
    *,
    allow_general_dimension: bool = False,
    abs_tol: float | None = None,
    rel_tol: float = 1e-12,
) -> float:
    """∫₀^∞ ω^d n̄(ω, θ) kernel(ωτ) dω for kernel in {one, cos}.

    With kernel = one this is θ^(d+1) Γ(1+d) ζ(1+d); with kernel = cos it
    is the blackbody fringe integral evaluated at a = τθ.  Dimensions other
    than 1 and 3 are gated behind ``allow_general_dimension``.
    """
    if theta <= 0.0:
        raise ValueError(f"temperature must be positive, got {theta}")
    if kernel not in ("one", "cos"):
        raise ValueError(f"unknown kernel {kernel!r}; expected 'one' or 'cos'")
    if d not in (1, 3) and not allow_general_dimension:
        raise ValueError(f"dimension {d} unsupported; pass allow_general_dimension=True to force")
    if d <= 0:
        raise ValueError("dimension must be positive")

    a = abs(float(tau)) * theta
    scale = theta ** (d + 1) * bose_integral_constant(d)
    if abs_tol is None:
        abs_tol = 1e-13 * scale

    def integrand(x):
        y = np.empty_like(x)
        tiny = x < 1e-8
        xt = x[~tiny]
        y[~tiny] = xt**d / np.expm1(xt)
        y[tiny] = x[tiny] ** (d - 1) * (1.0 - 0.5 * x[tiny])
        if kernel == "cos":
            y = y * np.cos(a * x)
        return y

    def envelope(x):
        # 1/(e^x - 1) <= e^-x / (1 - e^-1) for x >= 1
        return x**d * math.exp(-x) * 1.582 if x >= 1.0 else 2.0 * x ** (d - 1)

    result = integrate_half_line(
        integrand,
        envelope=envelope,
        abs_tol=abs_tol / theta ** (d + 1),
        rel_tol=rel_tol,
        osc_scale=a if kernel == "cos" else 0.0,
        cutoff_start=8.0,
    )
    return theta ** (d + 1) * result.value
