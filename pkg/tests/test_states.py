import math

import numpy as np
import pytest

from mmi.spectra import SpectralDistribution
from mmi.states import (
    Coherent,
    OnePhoton,
    Thermal,
    Vacuum,
    bose_weighted_integral,
    mean_occupation,
    sample_thermal_field,
)
from oracles import riemann_bose_cos


def test_port_state_construction():
    spec = SpectralDistribution(3.0, 1.0)
    assert OnePhoton(spec).spectrum is spec
    assert Coherent(spec).spectrum is spec
    assert Thermal(2.5).theta == 2.5
    Vacuum()
    with pytest.raises(ValueError):
        Thermal(0.0)
    with pytest.raises(ValueError):
        Thermal(-1.0)


def test_mean_occupation_log2_point():
    # exp(ln 2) - 1 = 1
    assert abs(mean_occupation(math.log(2.0), 1.0) - 1.0) < 1e-14
    assert abs(mean_occupation(2.0 * math.log(2.0), 2.0) - 1.0) < 1e-14


def test_mean_occupation_deep_boltzmann_tail():
    # 1/(e^10 - 1) = 4.540199100968776832...e-5 (30-digit evaluation); the
    # pure Boltzmann factor e^-10 = 4.53999e-5 differs in the fourth digit,
    # so this also catches a dropped "-1"
    assert abs(mean_occupation(10.0, 1.0) - 4.5401991009687766e-05) < 1e-19
    assert mean_occupation(600.0, 1.0) < 1e-250  # deep tail stays finite and tiny


def test_mean_occupation_detailed_identity():
    # nbar * (e^(w/theta) - 1) = 1 with the factor built by expm1
    for ratio in np.geomspace(1e-6, 30.0, 200):
        nbar = mean_occupation(ratio, 1.0)
        assert abs(nbar * math.expm1(ratio) - 1.0) < 1e-12, ratio


def test_mean_occupation_small_frequency_divergence():
    w = 1e-8
    assert abs(mean_occupation(w, 1.0) - 1.0 / w) < 1.0  # theta/omega leading pole
    assert mean_occupation(1e-3, 1.0) > mean_occupation(2e-3, 1.0)


def test_mean_occupation_domain_errors():
    with pytest.raises(ValueError):
        mean_occupation(0.0, 1.0)
    with pytest.raises(ValueError):
        mean_occupation(-1.0, 1.0)
    with pytest.raises(ValueError):
        mean_occupation(1.0, 0.0)


def test_thermal_sampling_deterministic_per_seed():
    grid = np.geomspace(1e-3, 30.0, 64)
    a = sample_thermal_field(1.0, grid, seed=1234)
    b = sample_thermal_field(1.0, grid, seed=1234)
    c = sample_thermal_field(1.0, grid, seed=1235)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert not np.array_equal(a.amplitudes, c.amplitudes)


def test_thermal_sampling_empty_grid_rejected():
    with pytest.raises(ValueError):
        sample_thermal_field(1.0, np.array([]), seed=0)


def test_thermal_sampling_moments():
    # single mode, many draws: E|alpha|^2 = nbar within 3 standard errors,
    # E[alpha] = 0, and Re/Im variances agree (circular symmetry)
    from mmi.states import sample_amplitudes

    omega, theta = 0.7, 1.0
    nbar = mean_occupation(omega, theta)
    rng = np.random.default_rng(7)
    draws = sample_amplitudes(rng, np.array([nbar]), 1_000_000)[:, 0]
    m = draws.size
    power = np.abs(draws) ** 2
    stderr_power = nbar / math.sqrt(m)  # exponential distribution: std = mean
    assert abs(power.mean() - nbar) < 3.0 * stderr_power
    stderr_mean = math.sqrt(nbar / 2.0 / m)
    assert abs(draws.real.mean()) < 3.0 * stderr_mean
    assert abs(draws.imag.mean()) < 3.0 * stderr_mean
    var_re = draws.real.var()
    var_im = draws.imag.var()
    # variance-of-variance for a gaussian: 2 var^2 / m
    tol = 3.0 * math.sqrt(2.0 / m) * (nbar / 2.0)
    assert abs(var_re - var_im) < 2.0 * tol


@pytest.mark.parametrize("d", [1, 3])
def test_bose_weighted_integral_constant_kernel(d):
    # theta^(d+1) Gamma(1+d) zeta(d+1)
    theta = 1.7
    expected = theta ** (d + 1) * math.gamma(1.0 + d) * (math.pi**2 / 6.0 if d == 1 else math.pi**4 / 90.0)
    got = bose_weighted_integral(theta, d, "one")
    assert abs(got - expected) / expected < 1e-9


def test_bose_weighted_integral_cos_matches_riemann_oracle():
    a = 1.3
    got = bose_weighted_integral(1.0, 3, "cos", a)
    ref = riemann_bose_cos(3, a)
    assert abs(got - ref) < 1e-7  # limited by the oracle's step size


def test_bose_weighted_integral_cos_matches_hyperbolic_bracket():
    # at a = 1 the d = 3 fringe integral equals theta^4 J(3) times the
    # stable hyperbolic bracket, evaluated through an independent code path
    from mmi.thermal_kernels import bose_integral_constant, fringe_deviation

    theta = 1.0
    got = bose_weighted_integral(theta, 3, "cos", 1.0)
    bracket = fringe_deviation(math.pi)
    assert abs(got - theta**4 * bose_integral_constant(3) * bracket) < 1e-10


def test_bose_weighted_integral_scaling_in_theta():
    # substitution x = omega/theta: value scales like theta^(d+1) with a = tau*theta fixed
    theta = 2.0
    a = 0.8
    v1 = bose_weighted_integral(1.0, 3, "cos", a)
    v2 = bose_weighted_integral(theta, 3, "cos", a / theta)
    assert abs(v2 - theta**4 * v1) < 1e-9 * theta**4


def test_bose_weighted_integral_general_dimension_gate():
    with pytest.raises(ValueError):
        bose_weighted_integral(1.0, 2, "one")
    val = bose_weighted_integral(1.0, 2, "one", allow_general_dimension=True)
    apery = 1.2020569031595943
    assert abs(val - 2.0 * apery) / (2.0 * apery) < 1e-9


def test_bose_weighted_integral_domain_errors():
    with pytest.raises(ValueError):
        bose_weighted_integral(0.0, 3, "one")
    with pytest.raises(ValueError):
        bose_weighted_integral(1.0, 3, "sin")
