"""Normalized single-photon detection intensity ⟨I⟩(τ)/⟨I⟩(0).

Every scenario has a quadrature path that integrates the defining spectral
integral directly, and, where one exists, a closed-form path:

====================  =========================================  ==========
ports (signal, LO)    quadrature integrand (up to constants)     closed form
====================  =========================================  ==========
one-photon pair       ω[f_s²(1+cos ωτ) + f_lo²(1-cos ωτ)]        Gaussian-envelope approximation
coherent pair         same + cross term -2ω f_s f_lo sin ωτ      same + approximate sin term
one-photon / vacuum   ω f_s²(1+cos ωτ)                           ½(1 + e^{-(στ)²/4} cos ω̄τ)
thermal / vacuum      ω^d n̄(ω,θ)(1+cos ωτ)                       exact hyperbolic form (d=3)
thermal pair          ω³[n̄₁(1+cos ωτ) + n̄₀(1-cos ωτ)]           exact hyperbolic form
====================  =========================================  ==========

The thermal closed forms are exact and stable down to τ = 0 thanks to the
cancellation-free kernel in :mod:`mmi.thermal_kernels`.  The spectral-state
closed forms replace ω by ω̄ and extend the frequency range to the whole
real line, so they are approximations controlled by σ/ω̄; their measured
accuracy at ω̄ = 3σ is at the 1e-2 level in the ratio.

Unnormalized intensities carry an arbitrary but consistent internal scale
(constant prefactors are dropped); only ratios are part of the contract.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .quadrature import integrate_half_line
from .spectra import SpectralDistribution, weighted_overlap
from .states import Coherent, OnePhoton, PortState, Thermal, Vacuum, bose_weighted_integral
from .thermal_kernels import bose_integral_constant, fringe_deviation

__all__ = [
    "Interferogram",
    "IntensityRequest",
    "coherent_intensity",
    "coherent_intensity_closed",
    "compute_interferogram",
    "fock_intensity",
    "fock_intensity_closed",
    "one_photon_vacuum_ratio",
    "thermal_thermal_ratio",
    "thermal_vacuum_ratio",
]

_METHODS = ("auto", "closed_form", "quadrature")


# ---------------------------------------------------------------------------
# spectral-state scenarios


def _spectral_integral(f_s, f_lo, tau, d, cross: bool, abs_tol, rel_tol):
    """One-shot quadrature of the full detection integrand."""
    tau = float(tau)

    def integrand(w):
        c = np.cos(w * tau)
        y = f_s.amplitude(w) ** 2 * (1.0 + c)
        if f_lo is not None:
            y = y + f_lo.amplitude(w) ** 2 * (1.0 - c)
            if cross:
                y = y - 2.0 * f_s.amplitude(w) * f_lo.amplitude(w) * np.sin(w * tau)
        return w**d * y

    if f_lo is None:
        peak = f_s.mean_freq
        cutoff_start = f_s.upper_cutoff(1.0)
    else:
        peak = max(f_s.mean_freq, f_lo.mean_freq)
        cutoff_start = max(f_s.upper_cutoff(1.0), f_lo.upper_cutoff(1.0))

    def envelope(x):
        bound = f_s.amplitude(x) ** 2 * 2.0
        if f_lo is not None:
            bound = bound + f_lo.amplitude(x) ** 2 * 2.0 + 2.0 * f_s.amplitude(x) * f_lo.amplitude(x)
        return x**d * bound if x > peak else 4.0 * (peak + 1.0) ** d

    result = integrate_half_line(
        integrand,
        envelope=envelope,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
        osc_scale=abs(tau),
        cutoff_start=cutoff_start,
    )
    return result.value


def fock_intensity(
    f_s: SpectralDistribution,
    f_lo: SpectralDistribution,
    tau: float,
    d: int = 1,
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-12,
) -> float:
    """Unnormalized detected intensity for one-photon states in both ports.

    ∫₀^∞ dω ω^d [f_s²(1 + cos ωτ) + f_lo²(1 - cos ωτ)], constant prefactors
    dropped.  At τ = 0 the dark-port term vanishes and the value is twice
    the mean frequency under f_s².
    """
    if d not in (1, 3):
        raise ValueError(f"dimension {d} unsupported; expected 1 or 3")
    return _spectral_integral(f_s, f_lo, tau, d, cross=False, abs_tol=abs_tol, rel_tol=rel_tol)


def coherent_intensity(
    f_s: SpectralDistribution,
    f_lo: SpectralDistribution,
    tau: float,
    d: int = 1,
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-12,
) -> float:
    """Unnormalized intensity for coherent states in both ports.

    The one-photon integrand plus the cross term -2ω^d f_s f_lo sin ωτ,
    integrated in a single quadrature call (so the difference from
    :func:`fock_intensity` is a genuine dual-path check against
    :func:`mmi.spectra.weighted_overlap`, not an identity).
    """
    if d not in (1, 3):
        raise ValueError(f"dimension {d} unsupported; expected 1 or 3")
    return _spectral_integral(f_s, f_lo, tau, d, cross=True, abs_tol=abs_tol, rel_tol=rel_tol)


def _check_closed_form_regime(spec: SpectralDistribution, label: str):
    if spec.mean_freq < 2.0 * spec.width:
        raise ValueError(
            f"closed form requires mean frequency >= 2 widths for the {label} port "
            f"(got {spec.mean_freq} vs width {spec.width})"
        )
    if spec.mean_freq < 3.0 * spec.width:
        warnings.warn(
            f"closed form is a wide-pulse approximation; accuracy degrades for "
            f"{label} mean frequency below 3 widths",
            stacklevel=3,
        )


def _fock_closed_ratio(mean_s, width_s, mean_lo, width_lo, tau):
    # extended-range, ω -> ω̄ form; unguarded so optimizers may roam
    t = np.asarray(tau, dtype=float)
    ratio = mean_lo / mean_s
    env_s = np.exp(-((width_s * t) ** 2) / 4.0)
    env_lo = np.exp(-((width_lo * t) ** 2) / 4.0)
    return 0.5 * (
        1.0 + ratio + env_s * np.cos(t * mean_s) - ratio * env_lo * np.cos(t * mean_lo)
    )


def _coherent_cross_ratio(mean_s, width_s, mean_lo, width_lo, tau):
    # same approximation applied to the product Gaussian of the two spectra
    t = np.asarray(tau, dtype=float)
    var_sum = width_s**2 + width_lo**2
    mu = (mean_s * width_lo**2 + mean_lo * width_s**2) / var_sum
    amp = math.sqrt(2.0 * width_s * width_lo / var_sum)
    detune = math.exp(-((mean_s - mean_lo) ** 2) / (2.0 * var_sum))
    env = np.exp(-(width_s**2 * width_lo**2 / (2.0 * var_sum)) * t**2)
    return (mu / mean_s) * amp * detune * env * np.sin(mu * t)


def fock_intensity_closed(f_s: SpectralDistribution, f_lo: SpectralDistribution, tau) -> float:
    """Gaussian-envelope closed form of the two-photon ratio.

    ½[1 + ω̄_lo/ω̄_s + e^{-(στ)²/4}(cos τω̄_s - (ω̄_lo/ω̄_s) cos τω̄_lo)]
    for a common width σ (each cosine carries its own width's envelope in
    general); valid for ω̄ well above σ; asymptotes to (1 + ω̄_lo/ω̄_s)/2.
    """
    _check_closed_form_regime(f_s, "signal")
    _check_closed_form_regime(f_lo, "local oscillator")
    out = _fock_closed_ratio(f_s.mean_freq, f_s.width, f_lo.mean_freq, f_lo.width, tau)
    return out if out.ndim else float(out)


def coherent_intensity_closed(f_s: SpectralDistribution, f_lo: SpectralDistribution, tau) -> float:
    """Closed-form coherent-pair ratio at the same approximation level.

    The two-photon closed form minus the cross term evaluated with the
    same ω -> ω̄ replacement and extended frequency range; for a common
    width σ the subtracted term is
    (ω̄₊/ω̄_s) e^{-(ω̄_s-ω̄_lo)²/4σ²} e^{-(στ)²/4} sin(ω̄₊τ),
    with ω̄₊ = (ω̄_s + ω̄_lo)/2.
    """
    _check_closed_form_regime(f_s, "signal")
    _check_closed_form_regime(f_lo, "local oscillator")
    base = _fock_closed_ratio(f_s.mean_freq, f_s.width, f_lo.mean_freq, f_lo.width, tau)
    cross = _coherent_cross_ratio(f_s.mean_freq, f_s.width, f_lo.mean_freq, f_lo.width, tau)
    out = base - cross
    return out if out.ndim else float(out)


def one_photon_vacuum_ratio(f_s: SpectralDistribution, tau) -> float:
    """½(1 + e^{-(στ)²/4} cos τω̄), for vacuum in the LO port.

    The fringe envelope is Gaussian in τ (quadratic log-envelope), not the
    exponential decay a Lorentzian line would produce.
    """
    t = np.asarray(tau, dtype=float)
    out = 0.5 * (1.0 + np.exp(-((f_s.width * t) ** 2) / 4.0) * np.cos(t * f_s.mean_freq))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# thermal scenarios


def thermal_vacuum_ratio(
    theta: float,
    tau,
    d: int = 3,
    method: str = "auto",
    *,
    allow_general_dimension: bool = False,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-12,
):
    """Normalized intensity for thermal signal against vacuum; even in τ.

    Quadrature path: ½[1 + (1/J(d)) ∫₀^∞ x^d cos(ax)/(e^x - 1) dx] with
    a = τθ and J(d) = Γ(1+d)ζ(1+d).  Closed-form path (d = 3 only):
    ½[1 + 15((2 + cosh 2aπ)/sinh⁴(aπ) - 3/(aπ)⁴)], evaluated through the
    stable kernel; the two agree to quadrature tolerance.  Decays to 1/2
    like a⁻⁴.
    """
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}")
    if theta <= 0.0:
        raise ValueError(f"temperature must be positive, got {theta}")
    if d not in (1, 3) and not allow_general_dimension:
        raise ValueError(f"dimension {d} unsupported; pass allow_general_dimension=True to force")
    if method == "closed_form" and d != 3:
        raise ValueError("closed form is only available in three dimensions")
    if method == "auto":
        method = "closed_form" if d == 3 else "quadrature"

    t = np.asarray(tau, dtype=float)
    a = np.abs(t) * theta
    if method == "closed_form":
        out = 0.5 * (1.0 + np.asarray(fringe_deviation(a * math.pi)))
        return out if out.ndim else float(out)

    j_const = bose_integral_constant(d)
    flat = np.atleast_1d(a)
    vals = np.empty_like(flat)
    for i, ai in enumerate(flat):
        osc = bose_weighted_integral(
            1.0, d, "cos", ai,
            allow_general_dimension=allow_general_dimension,
            abs_tol=abs_tol * j_const, rel_tol=rel_tol,
        )
        vals[i] = 0.5 * (1.0 + osc / j_const)
    out = vals.reshape(np.shape(a))
    return out if out.ndim else float(out)


def thermal_thermal_ratio(
    theta0: float,
    theta1: float,
    tau,
    method: str = "auto",
    *,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-12,
):
    """Normalized intensity for thermal signal (θ₁) against thermal LO (θ₀).

    Exact closed form (three dimensions), written through the fringe
    deviation K(a) = 15((2+cosh 2aπ)/sinh⁴ aπ - 3/(aπ)⁴):

        ratio = ½[1 + r⁴ + K(a₁) - r⁴ K(a₀)],   r = θ₀/θ₁, a_i = τθ_i,

    in which the two power-law poles have cancelled algebraically, so equal
    temperatures give exactly 1 at every delay and the asymptote
    (1 + r⁴)/2 is approached exponentially fast, which is the interferometric
    thermometry signal.  The quadrature path integrates the two Bose
    fringe integrals directly.
    """
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}")
    if theta0 <= 0.0 or theta1 <= 0.0:
        raise ValueError("temperatures must be positive")
    if method == "auto":
        method = "closed_form"

    t = np.asarray(tau, dtype=float)
    a0 = np.abs(t) * theta0
    a1 = np.abs(t) * theta1
    r4 = (theta0 / theta1) ** 4

    if method == "closed_form":
        dev1 = np.asarray(fringe_deviation(a1 * math.pi))
        dev0 = np.asarray(fringe_deviation(a0 * math.pi))
        # grouping the kernel difference keeps the equal-temperature
        # cancellation exact in floating point
        out = 0.5 * (1.0 + r4 + (dev1 - r4 * dev0))
        return out if out.ndim else float(out)

    j3 = bose_integral_constant(3)
    flat0 = np.atleast_1d(a0).ravel()
    flat1 = np.atleast_1d(a1).ravel()
    vals = np.empty_like(flat0)
    for i, (x0, x1) in enumerate(zip(flat0, flat1)):
        osc1 = bose_weighted_integral(1.0, 3, "cos", x1, abs_tol=abs_tol * j3, rel_tol=rel_tol)
        osc0 = bose_weighted_integral(1.0, 3, "cos", x0, abs_tol=abs_tol * j3, rel_tol=rel_tol)
        vals[i] = 0.5 * (1.0 + r4) + (osc1 - r4 * osc0) / (2.0 * j3)
    out = vals.reshape(np.shape(a0))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# request/interferogram surface


@dataclass(frozen=True)
class IntensityRequest:
    """A scenario to evaluate on a delay grid.

    ``method``: 'auto' picks the exact path for the scenario (quadrature
    for spectral states, the hyperbolic closed form for thermal ones);
    'closed_form' is only available where a closed expression exists
    (spectral approximations at d = 1, thermal at d = 3).
    """

    signal: PortState
    lo: PortState
    delays: Any
    dimension: int = 1
    method: str = "auto"
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        object.__setattr__(self, "delays", np.atleast_1d(np.asarray(self.delays, dtype=float)))


@dataclass(frozen=True)
class Interferogram:
    """(τ, ⟨I⟩(τ)/⟨I⟩(0)) samples plus provenance metadata.

    The ratio is defined relative to the zero-delay intensity, so a τ = 0
    sample is identically 1.  ``normalization`` records the unnormalized
    ⟨I⟩(0) for quadrature paths (module-internal scale); closed-form paths
    are born normalized and record None.
    """

    delays: np.ndarray
    ratios: np.ndarray
    normalization: float | None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.delays.shape != self.ratios.shape:
            raise ValueError("delay and ratio arrays differ in shape")
        if not np.all(np.isfinite(self.ratios)):
            raise ValueError("interferogram contains non-finite ratios")
        if np.any(self.ratios < 0.0):
            raise ValueError("interferogram contains negative ratios")
        at_zero = self.delays == 0.0
        if at_zero.any() and not np.all(self.ratios[at_zero] == 1.0):
            raise ValueError("ratio at zero delay must be exactly 1")


def _describe_state(state: PortState) -> dict:
    if isinstance(state, Vacuum):
        return {"kind": "vacuum"}
    if isinstance(state, Thermal):
        return {"kind": "thermal", "theta": state.theta}
    kind = "one_photon" if isinstance(state, OnePhoton) else "coherent"
    return {"kind": kind, "mean_freq": state.spectrum.mean_freq, "width": state.spectrum.width}


def compute_interferogram(request: IntensityRequest, threads: int = 1) -> Interferogram:
    """Evaluate a scenario over its delay grid.

    Supported port pairs: (one-photon, one-photon), (coherent, coherent),
    (one-photon | coherent, vacuum), (thermal, vacuum), (thermal, thermal).
    Vacuum is only admissible in the LO port: with an empty signal port
    the zero-delay intensity vanishes and no ratio exists.
    """
    sig, lo = request.signal, request.lo
    taus = request.delays
    method = request.method
    d = request.dimension

    if isinstance(sig, (OnePhoton, Coherent)) and isinstance(lo, Vacuum):
        if method in ("auto", "quadrature"):
            ratios, norm = _grid_ratio_quadrature(
                lambda t: _spectral_integral(
                    sig.spectrum, None, t, d, False, request.abs_tol, request.rel_tol
                ),
                taus,
                threads,
            )
            used = "quadrature"
        else:
            if d != 1:
                raise ValueError("spectral closed forms are one-dimensional")
            ratios, norm = np.asarray(one_photon_vacuum_ratio(sig.spectrum, taus)), None
            used = "closed_form"
    elif isinstance(sig, OnePhoton) and isinstance(lo, OnePhoton):
        if method in ("auto", "quadrature"):
            ratios, norm = _grid_ratio_quadrature(
                lambda t: fock_intensity(
                    sig.spectrum, lo.spectrum, t, d,
                    abs_tol=request.abs_tol, rel_tol=request.rel_tol,
                ),
                taus,
                threads,
            )
            used = "quadrature"
        else:
            if d != 1:
                raise ValueError("spectral closed forms are one-dimensional")
            ratios, norm = np.asarray(fock_intensity_closed(sig.spectrum, lo.spectrum, taus)), None
            used = "closed_form"
    elif isinstance(sig, Coherent) and isinstance(lo, Coherent):
        if method in ("auto", "quadrature"):
            ratios, norm = _grid_ratio_quadrature(
                lambda t: coherent_intensity(
                    sig.spectrum, lo.spectrum, t, d,
                    abs_tol=request.abs_tol, rel_tol=request.rel_tol,
                ),
                taus,
                threads,
            )
            used = "quadrature"
        else:
            if d != 1:
                raise ValueError("spectral closed forms are one-dimensional")
            ratios, norm = np.asarray(coherent_intensity_closed(sig.spectrum, lo.spectrum, taus)), None
            used = "closed_form"
    elif isinstance(sig, Thermal) and isinstance(lo, Vacuum):
        used = method if method != "auto" else ("closed_form" if d == 3 else "quadrature")
        ratios = np.asarray(
            thermal_vacuum_ratio(
                sig.theta, taus, d, used, abs_tol=request.abs_tol, rel_tol=request.rel_tol
            )
        )
        norm = None
    elif isinstance(sig, Thermal) and isinstance(lo, Thermal):
        if d != 3:
            raise ValueError("the two-temperature scenario is three-dimensional")
        used = method if method != "auto" else "closed_form"
        ratios = np.asarray(
            thermal_thermal_ratio(
                lo.theta, sig.theta, taus, used,
                abs_tol=request.abs_tol, rel_tol=request.rel_tol,
            )
        )
        norm = None
    else:
        raise ValueError(
            f"unsupported port combination: signal={type(sig).__name__}, lo={type(lo).__name__}"
        )

    ratios = np.asarray(ratios, dtype=float).reshape(taus.shape)
    ratios[taus == 0.0] = 1.0
    meta = {
        "signal": _describe_state(sig),
        "lo": _describe_state(lo),
        "dimension": d,
        "method": used,
        "abs_tol": request.abs_tol,
        "rel_tol": request.rel_tol,
        "seed": None,
    }
    return Interferogram(delays=taus.copy(), ratios=ratios, normalization=norm, metadata=meta)


def _grid_ratio_quadrature(intensity_fn, taus, threads):
    norm = intensity_fn(0.0)
    if norm <= 0.0:
        raise ValueError("zero-delay intensity vanished; cannot normalize")

    def one(t):
        return 1.0 if t == 0.0 else intensity_fn(t) / norm

    if threads > 1 and taus.size > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            ratios = np.fromiter(pool.map(one, taus.ravel()), dtype=float, count=taus.size)
    else:
        ratios = np.fromiter((one(t) for t in taus.ravel()), dtype=float, count=taus.size)
    return ratios.reshape(taus.shape), norm
