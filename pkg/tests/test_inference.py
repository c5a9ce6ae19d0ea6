import numpy as np
import pytest

from mmi.inference import (
    DEFAULT_COHERENCE_EPSILON,
    FitProblem,
    IdentifiabilityError,
    discriminate_state_class,
    estimate_coherence_time,
    fit,
    model_prediction,
)
from mmi.intensity import coherent_intensity, fock_intensity, thermal_thermal_ratio
from mmi.spectra import SpectralDistribution

F_S = SpectralDistribution(3.0, 1.0)
F_LO = SpectralDistribution(3.15, 1.0)


def _thermal_problem(ratio_true=1.01, n=200, noise=None, seed=None, theta0=1.0):
    taus = np.linspace(0.0, 3.0, n) / (ratio_true * theta0)  # a1 spans [0, 3]
    data = np.asarray(thermal_thermal_ratio(theta0, ratio_true * theta0, taus))
    if noise is not None:
        rng = np.random.default_rng(seed)
        data = data + rng.normal(0.0, noise, size=data.shape)
    return FitProblem(tau=taus, ratios=data, model="thermal_thermal", fixed={"theta0": theta0})


def test_thermal_roundtrip_noise_free():
    result = fit(_thermal_problem())
    assert abs(result.estimates["theta_ratio"] - 1.01) < 1e-6
    assert result.converged
    assert result.residual_norm <= result.initial_residual_norm
    assert all(u > 0.0 for u in result.uncertainties.values())


def test_thermal_roundtrip_is_deterministic():
    a = fit(_thermal_problem())
    b = fit(_thermal_problem())
    assert a.estimates == b.estimates
    assert a.iterations == b.iterations


def test_thermal_roundtrip_with_noise():
    hits = 0
    for seed in range(20):
        result = fit(_thermal_problem(noise=1e-4, seed=seed))
        if abs(result.estimates["theta_ratio"] - 1.01) < 1e-3:
            hits += 1
    assert hits >= 19


def test_no_better_minimum_at_truth():
    problem = _thermal_problem(noise=1e-4, seed=1)
    result = fit(problem)
    est = result.estimates["theta_ratio"]
    resid_est = np.linalg.norm(model_prediction("thermal_thermal", problem.tau, (est,), problem.fixed) - problem.ratios)
    resid_true = np.linalg.norm(model_prediction("thermal_thermal", problem.tau, (1.01,), problem.fixed) - problem.ratios)
    assert resid_est <= resid_true + 1e-12


def test_flat_data_raises_identifiability():
    taus = np.linspace(0.0, 3.0, 50)
    with pytest.raises(IdentifiabilityError):
        fit(FitProblem(tau=taus, ratios=np.ones_like(taus), model="thermal_thermal", fixed={"theta0": 1.0}))


def test_too_few_samples_rejected():
    with pytest.raises(IdentifiabilityError):
        FitProblem(tau=[0.0], ratios=[1.0], model="thermal_thermal", fixed={"theta0": 1.0})


def test_initial_guess_must_respect_bounds():
    taus = np.linspace(0.0, 3.0, 50)
    data = np.asarray(thermal_thermal_ratio(1.0, 1.01, taus))
    with pytest.raises(ValueError):
        FitProblem(
            tau=taus, ratios=data, model="thermal_thermal", fixed={"theta0": 1.0},
            initial=(2.0,), bounds=((0.5, 1.5),),
        )


def test_one_photon_vacuum_roundtrip():
    taus = np.linspace(0.0, 6.0, 120)
    truth = (3.2, 0.9)
    data = model_prediction("one_photon_vacuum", taus, truth, {})
    result = fit(FitProblem(tau=taus, ratios=data, model="one_photon_vacuum", initial=(3.0, 1.0)))
    assert abs(result.estimates["mean_freq"] - truth[0]) < 1e-6
    assert abs(result.estimates["width"] - truth[1]) < 1e-6


def test_fock_roundtrip_with_default_initialization():
    taus = np.linspace(0.0, 6.0, 150)
    data = model_prediction("fock_fock", taus, (3.0, 1.0), {"lo_mean_freq": 3.15})
    problem = FitProblem(
        tau=taus, ratios=data, model="fock_fock",
        fixed={"lo_mean_freq": 3.15, "width_guess": 1.0},
    )
    result = fit(problem)
    assert abs(result.estimates["mean_freq"] - 3.0) < 1e-6
    assert abs(result.estimates["width"] - 1.0) < 1e-6


def test_coherent_model_roundtrip():
    taus = np.linspace(0.0, 6.0, 150)
    data = model_prediction("coherent_coherent", taus, (3.0, 1.0), {"lo_mean_freq": 3.15})
    problem = FitProblem(
        tau=taus, ratios=data, model="coherent_coherent",
        fixed={"lo_mean_freq": 3.15, "width_guess": 1.0},
    )
    result = fit(problem)
    assert abs(result.estimates["mean_freq"] - 3.0) < 1e-6
    assert abs(result.estimates["width"] - 1.0) < 1e-6


def test_model_jacobians_match_central_differences():
    cases = [
        ("thermal_thermal", (1.02,), {"theta0": 1.0}, np.linspace(0.0, 2.5, 80)),
        ("one_photon_vacuum", (3.1, 0.95), {}, np.linspace(0.0, 5.0, 80)),
        ("fock_fock", (3.05, 1.02), {"lo_mean_freq": 3.15}, np.linspace(0.0, 5.0, 80)),
        ("coherent_coherent", (3.05, 1.02), {"lo_mean_freq": 3.15}, np.linspace(0.0, 5.0, 80)),
    ]
    for model, params, fixed, taus in cases:
        base = model_prediction(model, taus, params, fixed)
        for i, p in enumerate(params):
            h = 1e-6 * max(abs(p), 1.0)
            up = list(params)
            dn = list(params)
            up[i] = p + h
            dn[i] = p - h
            central = (model_prediction(model, taus, up, fixed) - model_prediction(model, taus, dn, fixed)) / (2 * h)
            forward = (model_prediction(model, taus, up, fixed) - base) / h
            scale = float(np.max(np.abs(central))) or 1.0
            assert float(np.max(np.abs(forward - central))) / scale < 1e-5, (model, i)


def test_weighting_changes_heteroscedastic_fit():
    rng = np.random.default_rng(3)
    taus = np.linspace(0.0, 3.0, 200) / 1.01
    clean = np.asarray(thermal_thermal_ratio(1.0, 1.01, taus))
    sigma = np.where(taus < np.median(taus), 1e-5, 5e-3)
    data = clean + rng.normal(0.0, sigma)
    unweighted = fit(FitProblem(tau=taus, ratios=data, model="thermal_thermal", fixed={"theta0": 1.0}))
    weighted = fit(
        FitProblem(tau=taus, ratios=data, model="thermal_thermal", fixed={"theta0": 1.0}, noise=sigma)
    )
    est_u = unweighted.estimates["theta_ratio"]
    est_w = weighted.estimates["theta_ratio"]
    assert est_u != est_w
    assert abs(est_w - 1.01) < abs(est_u - 1.01) + 5e-4


# ---------------------------------------------------------------------------
# coherence time


def test_default_threshold_calibrated_to_three_halves():
    report = estimate_coherence_time()
    assert 1.4 <= report.a_c <= 1.6
    assert abs(report.a_c - 1.5) < 1e-3
    assert report.epsilon == DEFAULT_COHERENCE_EPSILON


def test_loose_threshold_gives_tiny_coherence_time():
    report = estimate_coherence_time(epsilon=0.49)
    assert report.a_c < 0.1


def test_threshold_monotonicity():
    eps_grid = [0.02, 0.05, 0.09, 0.15, 0.3]
    acs = [estimate_coherence_time(epsilon=e).a_c for e in eps_grid]
    assert all(b < a for a, b in zip(acs, acs[1:]))


def test_dimensionless_collapse_under_temperature_rescaling():
    hot = estimate_coherence_time(theta=7.3)
    cold = estimate_coherence_time(theta=0.2)
    assert hot.a_c == pytest.approx(cold.a_c, abs=1e-12)
    assert hot.tau_c == pytest.approx(hot.a_c / 7.3)
    assert cold.tau_c == pytest.approx(cold.a_c / 0.2)
    assert hot.coherence_length == hot.tau_c  # c = 1 by default


def test_threshold_domain():
    with pytest.raises(ValueError):
        estimate_coherence_time(epsilon=0.0)
    with pytest.raises(ValueError):
        estimate_coherence_time(epsilon=0.5)


# ---------------------------------------------------------------------------
# discrimination


def _ratio_curve(kind, taus):
    make = fock_intensity if kind == "fock" else coherent_intensity
    norm = make(F_S, F_LO, 0.0)
    return np.array([1.0 if t == 0.0 else make(F_S, F_LO, t) / norm for t in taus])


def test_discriminates_coherent_data():
    taus = np.linspace(0.0, 6.0, 121)
    result = discriminate_state_class(taus, _ratio_curve("coherent", taus), F_LO)
    assert result.label == "coherent-like"
    assert result.score < 1.0


def test_discriminates_fock_data():
    taus = np.linspace(0.0, 6.0, 121)
    result = discriminate_state_class(taus, _ratio_curve("fock", taus), F_LO)
    assert result.label == "fock-like"


def test_symmetrized_data_indistinguishable():
    taus = np.linspace(-6.0, 6.0, 241)
    curve = _ratio_curve("coherent", taus)
    symmetrized = 0.5 * (curve + curve[::-1])  # grid is symmetric about 0
    result = discriminate_state_class(taus, symmetrized, F_LO)
    assert result.label == "indistinguishable"


def test_single_point_data_rejected():
    with pytest.raises(IdentifiabilityError):
        discriminate_state_class(np.array([0.0]), np.array([1.0]), F_LO)


def test_short_span_rejected():
    taus = np.linspace(0.0, 0.5, 40)  # less than one fringe period (2 pi / 3.15)
    with pytest.raises(IdentifiabilityError):
        discriminate_state_class(taus, np.ones(40), F_LO)
