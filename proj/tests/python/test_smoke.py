"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import ellwishart as ew


def test_generator_moments():
    gauss = ew.DensityGenerator.make("gaussian")
    assert gauss.modular_moment(8, 1) == pytest.approx(8.0)
    t6 = ew.DensityGenerator.make("t", nu=6)
    assert t6.modular_moment(8, 1) == pytest.approx(12.0)
    with pytest.raises(ew.MomentError):
        ew.DensityGenerator.make("t", nu=4).modular_moment(8, 2)


def test_sampling_and_mean():
    rng = ew.Rng(7)
    params = ew.EwParams(20, np.eye(3), ew.DensityGenerator.make("t", nu=10))
    draws = [ew.sample_ew(params, rng) for _ in range(4000)]
    mean = sum(draws) / len(draws)
    want = ew.ew_mean(params)
    assert np.linalg.norm(mean - want) / np.linalg.norm(want) < 0.05
    for s in draws[:50]:
        assert np.allclose(s, s.T)
        assert np.linalg.eigvalsh(s).min() > 0


def test_sampling_determinism():
    params = ew.EwParams(12, np.eye(2), ew.DensityGenerator.make("gaussian"))
    a = [ew.sample_ew(params, ew.Rng(5)) for _ in range(1)][0]
    b = [ew.sample_ew(params, ew.Rng(5)) for _ in range(1)][0]
    assert np.array_equal(a, b)


def test_log_pdf_matches_scipy_wishart():
    scipy_stats = pytest.importorskip("scipy.stats")
    n, p = 7, 3
    rng = np.random.default_rng(0)
    a = rng.standard_normal((p, p))
    sigma = a @ a.T + p * np.eye(p)
    s = a.T @ a + p * np.eye(p)
    params = ew.EwParams(n, sigma, ew.DensityGenerator.make("gaussian"))
    want = scipy_stats.wishart(df=n, scale=sigma).logpdf(s)
    assert ew.ew_log_pdf(params, s) == pytest.approx(want, rel=1e-10)


def test_kron_moments():
    got = ew.wishart_kron_moment(5, np.eye(2), 2)
    assert got.reshape(4, 4, order="F")[0, 0] == pytest.approx(35.0)

    params = ew.EwParams(10, np.eye(2), ew.DensityGenerator.make("gaussian"),
                         inverse=True)
    first = ew.iew_kron_moment(params, 1)
    assert first[0] == pytest.approx(1.0 / 7.0)

    with pytest.raises(ew.BudgetError):
        ew.wishart_kron_moment(20, np.eye(3), 6)


def test_coefficients():
    c = ew.coefficients(ew.DensityGenerator.make("t", nu=6), 10, 2)
    assert c.a == pytest.approx(15.0)
    assert c.b == pytest.approx(4.5)
    assert c.c == pytest.approx(2.25)
    c2 = ew.coefficients(ew.DensityGenerator.make("t", nu=2), 10, 2)
    assert c2.a is None


def test_ks_and_mle():
    d, p = ew.ks_two_sample([1, 2, 3, 4], [1.5, 2.5, 3.5, 4.5])
    assert d == pytest.approx(0.25)
    assert 0.0 <= p <= 1.0

    rng = ew.Rng(3)
    params = ew.EwParams(30, 2.0 * np.eye(2), ew.DensityGenerator.make("t", nu=8))
    samples = [ew.sample_ew(params, rng) for _ in range(800)]
    est = ew.mle_t_wishart(samples, 30, 8.0)
    assert np.linalg.norm(est - 2.0 * np.eye(2)) / 2.0 < 0.15


def test_fit_report():
    rng = ew.Rng(11)
    params = ew.EwParams(40, np.eye(2), ew.DensityGenerator.make("t", nu=15))
    data = {"cls": [ew.sample_ew(params, rng) for _ in range(150)]}
    rep = ew.fit_report(data, n=40, nu=15.0, mc_count=1500, seed=4)
    stats = rep["cls"]["stats"]
    assert set(stats) == {
        "trace", "trace2", "trace3", "norm", "norm2", "norm3", "neglog10det",
    }
    d, p = stats["trace"]["t_wishart"]
    assert 0.0 <= d <= 1.0
    assert 0.0 <= p <= 1.0


def test_modular_pdf_normalization():
    gen = ew.DensityGenerator.make("gg", beta=0.8)
    ts = np.linspace(1e-6, 600.0, 400000)
    mass = np.trapz([gen.modular_pdf(6, t) for t in ts], ts)
    assert mass == pytest.approx(1.0, abs=2e-4)
