"""Beam-splitter mode transformation and the recombined detector kernel.

A lossless splitter with transmittance T maps the two input annihilation
operators through the unitary [[√T, i√R], [i√R, √T]] (R = 1 - T); the
reflected component picks up the usual π/2 phase.  Traversing the splitter,
the two delayed arms, and the splitter again composes into per-port weight
functions of ωτ at the detector:

    signal_weight = 2T(1-T)(1 + cos ωτ)
    lo_weight     = T² + (1-T)² - 2T(1-T) cos ωτ
    cross_weight  = -2 √(T(1-T)) sin ωτ

which sum (signal + lo) to exactly 1 at every frequency: photon
conservation through the lossless optics.  The common mirror π/2 phases
cancel between the arms and are dropped throughout.

Port labels: port 0 is the local oscillator, port 1 the signal, and the
delay is τ = τ₃ - τ₂.  Swapping the labels flips the sign of the sin cross
term, i.e. reverses τ in coherent-state interferograms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["BeamSplitter", "DelayLine", "DetectorKernel", "detector_kernel", "transform_modes"]


@dataclass(frozen=True)
class BeamSplitter:
    """Frequency-independent lossless splitter; reflectance is 1 - T."""

    transmittance: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.transmittance <= 1.0:
            raise ValueError(f"transmittance must lie in [0, 1], got {self.transmittance}")

    @property
    def reflectance(self) -> float:
        return 1.0 - self.transmittance


@dataclass(frozen=True)
class DelayLine:
    """Optical time delay between the two arms, τ = τ₃ - τ₂ (any sign)."""

    tau: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.tau):
            raise ValueError("delay must be finite")


def transform_modes(bs: BeamSplitter) -> np.ndarray:
    """Unitary acting on (a_lo, a_signal): [[√T, i√R], [i√R, √T]].

    Applying it twice with the arm phase factors interleaved reproduces the
    detector-mode composition (see :func:`detector_kernel`).
    """
    t = math.sqrt(bs.transmittance)
    r = 1j * math.sqrt(bs.reflectance)
    return np.array([[t, r], [r, t]])


@dataclass(frozen=True)
class DetectorKernel:
    """Per-port spectral weights of the recombined field at the detector."""

    transmittance: float
    tau: float

    def lo_coefficient(self, omega):
        """LO-operator amplitude T - (1-T) e^{iωτ} (common arm phase removed)."""
        t = self.transmittance
        phase = np.exp(1j * np.asarray(omega, dtype=float) * self.tau)
        return t - (1.0 - t) * phase

    def signal_coefficient(self, omega):
        """Signal-operator amplitude i√(T(1-T))(1 + e^{iωτ}), same phase convention."""
        t = self.transmittance
        phase = np.exp(1j * np.asarray(omega, dtype=float) * self.tau)
        return 1j * math.sqrt(t * (1.0 - t)) * (1.0 + phase)

    def signal_weight(self, omega):
        t = self.transmittance
        c = np.cos(np.asarray(omega, dtype=float) * self.tau)
        out = 2.0 * t * (1.0 - t) * (1.0 + c)
        return out if out.ndim else float(out)

    def lo_weight(self, omega):
        t = self.transmittance
        c = np.cos(np.asarray(omega, dtype=float) * self.tau)
        out = t * t + (1.0 - t) ** 2 - 2.0 * t * (1.0 - t) * c
        return out if out.ndim else float(out)

    def cross_weight(self, omega):
        """Weight of the f_signal·f_lo interference term; odd in τ."""
        t = self.transmittance
        s = np.sin(np.asarray(omega, dtype=float) * self.tau)
        out = -2.0 * math.sqrt(t * (1.0 - t)) * s
        return out if out.ndim else float(out)


def detector_kernel(bs: BeamSplitter, delay: DelayLine) -> DetectorKernel:
    """Weights of the detected intensity per unit ω·(spectral density).

    The squared moduli of the port coefficients after the double splitter
    traversal; the overall arm-independent phase is dropped.  At T = 1/2
    these reduce to (1 ± cos ωτ)/2 with cross weight -sin ωτ.
    """
    return DetectorKernel(transmittance=bs.transmittance, tau=delay.tau)
