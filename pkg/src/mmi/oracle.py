"""Independent brute-force verification of the intensity formulas.

Everything here deliberately avoids the quadrature engine and the closed
forms: states live on an explicit discrete frequency grid, the detector
field acts on explicit amplitude arrays, and the detection probability is
summed over final states directly (plain sums, no FFT, no shared code
paths).  Its only job is to disagree with :mod:`mmi.intensity` when one of
the two is wrong.

Two averaging modes exist for the detector time window.  The default
performs the window average analytically, which collapses the double
frequency sum onto its diagonal (the infinite-window limit).  A finite
window keeps the full double sum weighted by sinc((ω-ω')T/2) and exists as
a diagnostic: its deviation from the analytic mode scales like
1/(T · δω), the frequency-leakage of a finite measurement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectra import SpectralDistribution
from .states import mean_occupation, sample_amplitudes

__all__ = [
    "CoherentField",
    "ModeGrid",
    "MonteCarloIntensity",
    "ResourceLimitError",
    "TruncatedState",
    "build_coherent",
    "build_one_photon",
    "detect_intensity_bruteforce",
    "spectral_mode_grid",
    "thermal_mode_grid",
    "thermal_intensity_montecarlo",
]


class ResourceLimitError(RuntimeError):
    """Raised when a brute-force evaluation would exceed its amplitude cap."""


@dataclass(frozen=True)
class ModeGrid:
    """Discrete, strictly increasing, positive frequency grid with cell widths."""

    frequencies: np.ndarray
    weights: np.ndarray  # integration cell width per mode

    def __post_init__(self):
        w = self.frequencies
        if w.ndim != 1 or w.size == 0:
            raise ValueError("mode grid must be a non-empty 1-d array")
        if np.any(w <= 0.0):
            raise ValueError("all mode frequencies must be positive")
        if np.any(np.diff(w) <= 0.0):
            raise ValueError("mode frequencies must be strictly increasing")
        if self.weights.shape != w.shape or np.any(self.weights <= 0.0):
            raise ValueError("cell widths must be positive and match the grid")

    @property
    def size(self) -> int:
        return self.frequencies.size

    @classmethod
    def uniform(cls, lo: float, hi: float, m: int) -> "ModeGrid":
        freqs = np.linspace(lo, hi, m)
        dw = (hi - lo) / (m - 1) if m > 1 else 1.0
        return cls(frequencies=freqs, weights=np.full(m, dw))

    @classmethod
    def log_spaced(cls, lo: float, hi: float, m: int) -> "ModeGrid":
        freqs = np.geomspace(lo, hi, m)
        w = np.empty(m)
        w[1:-1] = 0.5 * (freqs[2:] - freqs[:-2])
        w[0] = 0.5 * (freqs[1] - freqs[0])
        w[-1] = 0.5 * (freqs[-1] - freqs[-2])
        return cls(frequencies=freqs, weights=w)


def spectral_mode_grid(*spectra: SpectralDistribution, m: int = 101, span: float = 6.0) -> ModeGrid:
    """Uniform grid covering ω̄ ± span·σ of every given spectrum.

    The lower edge is clipped half a cell above ω = 0 when the nominal
    coverage would reach negative frequencies (which the states do not
    occupy and the continuum integrals exclude).
    """
    if not spectra:
        raise ValueError("at least one spectrum is required")
    hi = max(s.mean_freq + span * s.width for s in spectra)
    lo = min(s.mean_freq - span * s.width for s in spectra)
    if lo <= 0.0:
        lo = hi / (2 * m)
    return ModeGrid.uniform(lo, hi, m)


def thermal_mode_grid(theta: float, m: int = 256, lo: float = 1e-3, hi: float = 30.0) -> ModeGrid:
    """Log-spaced grid over [lo, hi]·θ, resolving the occupation pole and tail."""
    return ModeGrid.log_spaced(lo * theta, hi * theta, m)


@dataclass(frozen=True)
class TruncatedState:
    """A one-photon wavepacket over a mode grid (cap one photon per mode).

    The amplitude on mode j is √(δω_j) f(ω_j), renormalized to unit norm;
    the pre-normalization deficit records the discretization plus domain
    truncation loss.  The number basis of M modes capped at n_max photons
    has (n_max+1)^M states; only the single-photon sector (M amplitudes)
    is stored.
    """

    grid: ModeGrid
    amplitudes: np.ndarray
    photon_cap: int = 1
    norm_deficit: float = 0.0

    def __post_init__(self):
        if self.amplitudes.shape != self.grid.frequencies.shape:
            raise ValueError("amplitude array must match the mode grid")
        total = float(np.sum(self.amplitudes**2))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"state norm deviates from 1 by {total - 1.0:.2e}")

    @property
    def log2_basis_dimension(self) -> float:
        return self.grid.size * math.log2(self.photon_cap + 1)

    def mean_frequency(self) -> float:
        return float(np.sum(self.amplitudes**2 * self.grid.frequencies))


@dataclass(frozen=True)
class CoherentField:
    """Per-mode coherent eigenvalues √(δω_j) f(ω_j) (no renormalization)."""

    grid: ModeGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.frequencies.shape:
            raise ValueError("eigenvalue array must match the mode grid")


def build_one_photon(spectrum: SpectralDistribution, grid: ModeGrid) -> TruncatedState:
    """Discretize a one-photon wavepacket onto a mode grid.

    The grid must cover at least six widths around the mean (the portion at
    negative frequencies, which the continuum state does not occupy, is
    exempt).  A single-mode grid is the degenerate monochromatic case and
    skips the coverage requirement: renormalization puts the whole photon
    on that mode.
    """
    if grid.size > 1:
        need_hi = spectrum.mean_freq + 6.0 * spectrum.width
        need_lo = max(spectrum.mean_freq - 6.0 * spectrum.width, grid.weights[0])
        if grid.frequencies[-1] < need_hi - 1e-9 or grid.frequencies[0] > need_lo + 1e-9:
            raise ValueError("mode grid does not cover six spectral widths around the mean")
    amps = np.sqrt(grid.weights) * spectrum.amplitude(grid.frequencies)
    total = float(np.sum(amps**2))
    return TruncatedState(
        grid=grid,
        amplitudes=amps / math.sqrt(total),
        norm_deficit=1.0 - total,
    )


def build_coherent(spectrum: SpectralDistribution, grid: ModeGrid) -> CoherentField:
    values = np.sqrt(grid.weights) * spectrum.amplitude(grid.frequencies)
    return CoherentField(grid=grid, values=values.astype(complex))


def _port_factors(omega: np.ndarray, tau: float):
    # per-mode arm factors with the common e^{i phi_2} removed
    phase = np.exp(1j * omega * tau)
    signal = 1j * 0.5 * (1.0 + phase)  # i sqrt(T(1-T)) (1 + e^{i w tau}) at T=1/2
    lo = 0.5 * (1.0 - phase)           # T - (1-T) e^{i w tau} at T=1/2
    return signal, lo


def _window_average(omega: np.ndarray, window: float | None) -> np.ndarray:
    """Time-average matrix of e^{i(ω-ω')t}: Kronecker delta or finite-window sinc."""
    if window is None:
        return np.eye(omega.size)
    delta = omega[:, None] - omega[None, :]
    return np.sinc(delta * window / (2.0 * math.pi))


def detect_intensity_bruteforce(
    signal,
    lo,
    tau: float,
    *,
    d: int = 1,
    window: float | None = None,
    amplitude_cap: int = 1_000_000,
) -> float:
    """Unnormalized detected intensity from explicit discrete states.

    ``signal``/``lo`` are :class:`TruncatedState`, :class:`CoherentField`,
    or None (vacuum); both occupied ports must share a grid type scenario
    (two one-photon states, or coherent/thermal eigenvalue fields).  The
    measure weight is δω_j ω_j^d per mode; constants shared with the
    intensity module are dropped, so only ratios are comparable.
    """
    if signal is None and lo is None:
        return 0.0
    if isinstance(signal, TruncatedState) or isinstance(lo, TruncatedState):
        return _bruteforce_fock(signal, lo, tau, d, window, amplitude_cap)
    return _bruteforce_coherent(signal, lo, tau, d, window)


def _measure(grid: ModeGrid, d: int) -> np.ndarray:
    return grid.weights * grid.frequencies**d


def _bruteforce_fock(signal, lo, tau, d, window, amplitude_cap):
    if signal is None:
        raise ValueError("vacuum is only supported in the LO port")
    if not isinstance(signal, TruncatedState) or not (lo is None or isinstance(lo, TruncatedState)):
        raise ValueError("mixed one-photon/coherent ports are not supported")

    grid = signal.grid
    omega = grid.frequencies
    m_sig = grid.size
    m_lo = lo.grid.size if lo is not None else 1
    if m_sig * m_lo > amplitude_cap:
        raise ResourceLimitError(
            f"final-state workspace {m_sig * m_lo} exceeds the cap {amplitude_cap}"
        )

    sig_f, lo_f = _port_factors(omega, tau)
    root_measure = np.sqrt(_measure(grid, d))
    avg = _window_average(omega, window)
    # Detector field applied to |1_s> x |1_lo>: annihilating the signal
    # photon from mode m leaves final state |0, 1_k>, amplitude
    # a_sig[k, m] = d_k * s_m; annihilating the LO photon leaves |1_j, 0>,
    # amplitude a_lo[j, m] = c_j * l_m.  The two sectors are orthogonal, so
    # the detection probability sums their window-averaged squares.
    s = root_measure * sig_f * signal.amplitudes
    if lo is None:
        # single final state |0, 0>
        return float(np.real(np.conj(s) @ avg @ s))

    if not np.array_equal(lo.grid.frequencies, omega):
        raise ValueError("both ports must share one mode grid")
    l = np.sqrt(_measure(lo.grid, d)) * lo_f * lo.amplitudes
    a_sig = np.outer(lo.amplitudes.astype(complex), s)
    a_lo = np.outer(signal.amplitudes.astype(complex), l)
    intensity = np.einsum("km,mn,kn->", np.conj(a_sig), avg, a_sig)
    intensity += np.einsum("km,mn,kn->", np.conj(a_lo), avg, a_lo)
    return float(np.real(intensity))


def _bruteforce_coherent(signal, lo, tau, d, window):
    grid = signal.grid if signal is not None else lo.grid
    omega = grid.frequencies
    beta_s = signal.values if signal is not None else np.zeros(grid.size, complex)
    beta_l = lo.values if lo is not None else np.zeros(grid.size, complex)
    if signal is not None and lo is not None:
        if not np.array_equal(signal.grid.frequencies, lo.grid.frequencies):
            raise ValueError("both ports must share one mode grid")

    sig_f, lo_f = _port_factors(omega, tau)
    root_measure = np.sqrt(_measure(grid, d))
    w = root_measure * (beta_s * sig_f + beta_l * lo_f)
    avg = _window_average(omega, window)
    return float(np.real(np.conj(w) @ avg @ w))


@dataclass(frozen=True)
class MonteCarloIntensity:
    """Monte-Carlo estimate of thermal interferogram ratios.

    ``ratios[i] ± stderrs[i]`` estimates ⟨I⟩(τ_i)/⟨I⟩(0); the cross-term
    fields report the phase-sensitive contribution alone, which must be
    statistically compatible with zero for chaotic light.
    """

    delays: np.ndarray
    ratios: np.ndarray
    stderrs: np.ndarray
    cross_mean: float
    cross_stderr: float
    samples: int
    seed: int


def thermal_intensity_montecarlo(
    theta_signal: float,
    theta_lo: float | None,
    tau,
    *,
    grid: ModeGrid | None = None,
    d: int = 3,
    samples: int = 100_000,
    seed: int = 0,
    batch: int = 4096,
) -> MonteCarloIntensity:
    """Phase-space Monte-Carlo oracle for thermal scenarios.

    Each draw realizes both ports as chaotic fields (circular complex
    Gaussians with per-mode variance n̄), evaluates the coherent-state
    detection intensity for that realization at every requested delay and
    at zero delay, and averages.  The ratio estimator is the ratio of the
    two sample means over common draws; its standard error comes from the
    delta method with the sampled covariance.
    """
    if samples < 1000:
        raise ValueError("at least 1000 samples are required")
    if grid is None:
        grid = thermal_mode_grid(max(theta_signal, theta_lo or 0.0))
    taus = np.atleast_1d(np.asarray(tau, dtype=float))
    omega = grid.frequencies
    measure = _measure(grid, d)

    nbar_s = np.asarray(mean_occupation(omega, theta_signal))
    nbar_l = np.asarray(mean_occupation(omega, theta_lo)) if theta_lo is not None else None

    cos_m = np.cos(np.outer(omega, taus))  # (M, K)
    sin_m = np.sin(np.outer(omega, taus))
    w_plus = measure[:, None] * (1.0 + cos_m)
    w_minus = measure[:, None] * (1.0 - cos_m)
    w_cross = measure[:, None] * (-2.0 * sin_m)

    rng = np.random.default_rng(seed)
    k = taus.size
    cross_idx = int(np.argmax(np.abs(taus)))  # report the cross term at the largest delay
    sum_x = np.zeros(k)
    sum_y = 0.0
    sum_xx = np.zeros(k)
    sum_yy = 0.0
    sum_xy = np.zeros(k)
    sum_c = 0.0
    sum_cc = 0.0

    done = 0
    while done < samples:
        n = min(batch, samples - done)
        beta_s = sample_amplitudes(rng, nbar_s, n)
        abs_s = np.abs(beta_s) ** 2
        if nbar_l is not None:
            beta_l = sample_amplitudes(rng, nbar_l, n)
            abs_l = np.abs(beta_l) ** 2
            cross = np.real(beta_l * np.conj(beta_s))
        else:
            abs_l = None
            cross = None

        x = abs_s @ w_plus
        y = 2.0 * (abs_s @ measure)
        if abs_l is not None:
            x = x + abs_l @ w_minus + cross @ w_cross
        c_term = (cross @ w_cross[:, cross_idx]) if cross is not None else np.zeros(n)

        sum_x += x.sum(axis=0)
        sum_y += y.sum()
        sum_xx += (x * x).sum(axis=0)
        sum_yy += (y * y).sum()
        sum_xy += (x * y[:, None]).sum(axis=0)
        sum_c += c_term.sum()
        sum_cc += (c_term * c_term).sum()
        done += n

    m = float(samples)
    mean_x = sum_x / m
    mean_y = sum_y / m
    ratios = mean_x / mean_y
    var_x = np.maximum(sum_xx / m - mean_x**2, 0.0)
    var_y = max(sum_yy / m - mean_y**2, 0.0)
    cov_xy = sum_xy / m - mean_x * mean_y
    var_ratio = np.maximum(var_x - 2.0 * ratios * cov_xy + ratios**2 * var_y, 0.0)
    stderrs = np.sqrt(var_ratio / m) / mean_y

    # cross estimator normalized by the analytic-free sampled <I(0)>
    cross_mean = (sum_c / m) / mean_y
    cross_var = max(sum_cc / m - (sum_c / m) ** 2, 0.0)
    cross_stderr = math.sqrt(cross_var / m) / mean_y

    return MonteCarloIntensity(
        delays=taus,
        ratios=ratios,
        stderrs=stderrs,
        cross_mean=float(cross_mean),
        cross_stderr=float(cross_stderr),
        samples=samples,
        seed=seed,
    )
