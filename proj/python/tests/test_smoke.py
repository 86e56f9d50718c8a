import math

import numpy as np
import pytest

import nearinterp as ni


def test_hyp2f1_arctan_family():
    assert ni.hyp2f1(1.0, 0.5, 1.5, -1.0) == pytest.approx(math.pi / 4, rel=1e-13)
    with pytest.raises(ValueError):
        ni.hyp2f1(1.0, 0.5, 1.5, 0.5)


def test_integrals_and_inverse():
    g = ni.Regime(alpha=2.0, gamma=0.5, sigma_sq=1.0)
    assert ni.integral_i(g, 1.0) == pytest.approx(math.atan(2.0), rel=1e-12)
    assert ni.k_of_r(g, ni.r_of_k(g, 3.0)) == pytest.approx(3.0, rel=1e-10)
    assert ni.k_crit(ni.Regime(2.0, 1.0, 1.0)) == 0.0


def test_regularizer_selection_hits_target():
    g = ni.Regime()
    choice = ni.select_regularizer(g, 0.2, 2000)
    point = ni.asymptotic_errors(g, choice.k)
    assert point.e_train == pytest.approx(0.2, rel=1e-10)
    assert point.e_test > g.sigma_sq
    assert choice.rho_n == pytest.approx(choice.r * 2000 ** -1.75)


def test_regime_validation():
    with pytest.raises(ni.DomainError):
        ni.Regime(alpha=0.5)


def test_generate_and_fit():
    data = ni.generate(n=40, p=80, alpha=1.75, sigma_sq=0.0, seed=3)
    assert data.X.shape == (80, 40)
    np.testing.assert_allclose(data.y, data.X.T @ data.beta_star)
    fit = ni.fit_ridge(data, 1e-3)
    assert fit.beta_hat.shape == (80,)
    assert fit.sq_norm == pytest.approx(float(fit.beta_hat @ fit.beta_hat))
    path = ni.sweep_rho(data, [1e-3, 1e-1])
    np.testing.assert_allclose(path[0].beta_hat, fit.beta_hat, rtol=1e-8, atol=1e-12)
    assert path[1].sq_norm < path[0].sq_norm


def test_spectral_helpers():
    assert ni.stieltjes([2.0, 4.0], -2.0) == pytest.approx(5 / 24)
    assert ni.esd_cdf([1.0, 2.0, 3.0, 4.0], 2.0) == 0.5
    assert ni.limit_cdf(2.0, 0.5, 1.0) == pytest.approx(0.5)
    rows = ni.positivity_check(alpha=1.75, gamma=0.5, n=60, r_grid=[0.1, 1.0], trials=2, seed=1)
    assert [r for r, _ in rows] == [0.1, 1.0]
    assert all(value > 0 for _, value in rows)


def test_tradeoff_sweep_small():
    result = ni.tradeoff_sweep(ni.Regime(), [0.2, 0.5], n=60, trials=2, seed=5)
    assert len(result.rows) == 4
    metrics = {a.metric for a in result.aggregates}
    assert metrics == {"train_mse", "test_mse", "sq_norm"}
    with pytest.raises(ni.ConfigError):
        ni.tradeoff_sweep(ni.Regime(), [1.5], n=60)
