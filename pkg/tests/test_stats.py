"""Estimator tests: exact small cases, independent oracles, invariances.

Oracles come from outside the package: scipy's kurtosis, an FFT route to the
autocorrelation, and inverse-CDF Pareto sampling driven by numpy's own
generator.
"""

import math

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from threshold_market import DegenerateInputError, NumericError, ParameterError
from threshold_market.stats import (
    acf,
    excess_kurtosis,
    hill_tail_index,
    log_returns,
    summarize,
)


# --------------------------------------------------------------- log returns


def test_log_returns_exact():
    out = log_returns([1.0, math.e, math.e**2])
    assert out == pytest.approx([1.0, 1.0], rel=1e-15)
    assert list(log_returns([3.7] * 10)) == [0.0] * 9
    assert log_returns([1.0, 0.5]) == pytest.approx([math.log(0.5)], rel=1e-15)


def test_log_returns_length():
    assert len(log_returns(np.linspace(1, 2, 500))) == 499
    with pytest.raises(ParameterError):
        log_returns([1.0])


def test_log_returns_rejects_bad_prices():
    with pytest.raises(NumericError):
        log_returns([1.0, -2.0])
    with pytest.raises(NumericError):
        log_returns([1.0, 0.0])
    with pytest.raises(NumericError):
        log_returns([1.0, math.inf])


# ------------------------------------------------------------------ kurtosis


def test_kurtosis_two_point_symmetric():
    series = np.tile([1.0, -1.0], 500)
    assert excess_kurtosis(series) == pytest.approx(-2.0, abs=1e-12)


def test_kurtosis_gaussian_oracle():
    draws = np.random.default_rng(55).standard_normal(10**6)
    assert abs(excess_kurtosis(draws)) < 0.05


def test_kurtosis_matches_scipy():
    x = np.random.default_rng(8).lognormal(size=5000)
    expected = scipy.stats.kurtosis(x, fisher=True, bias=True)
    assert excess_kurtosis(x) == pytest.approx(expected, rel=1e-10)


def test_kurtosis_degenerate():
    with pytest.raises(DegenerateInputError):
        excess_kurtosis([2.0] * 100)
    with pytest.raises(DegenerateInputError):
        excess_kurtosis([1.0, 2.0, 3.0])


@given(
    a=st.floats(min_value=0.1, max_value=10.0),
    b=st.floats(min_value=-5.0, max_value=5.0),
)
@settings(max_examples=50)
def test_kurtosis_affine_invariant(a, b):
    x = np.random.default_rng(99).standard_normal(400)
    assert excess_kurtosis(a * x + b) == pytest.approx(
        excess_kurtosis(x), rel=1e-10, abs=1e-10
    )


# ----------------------------------------------------------------------- acf


def test_acf_alternating_series():
    x = np.tile([1.0, -1.0], 2000)
    curve = acf(x, 2)
    assert curve.rho[0] == pytest.approx(-1.0, abs=1e-3)
    assert curve.rho[1] == pytest.approx(1.0, abs=1e-3)


def test_acf_white_noise_band():
    z = np.random.default_rng(777).standard_normal(10**5)
    curve = acf(z, 100)
    assert list(curve.lags) == list(range(1, 101))
    assert np.abs(curve.rho).max() < 0.02


def test_acf_duplicated_samples():
    # Each value repeated 200 times: adjacent samples are almost always
    # equal, so the lag-1 correlation approaches 1.
    base = np.random.default_rng(55).standard_normal(100)
    curve = acf(np.repeat(base, 200), 1)
    assert curve.rho[0] > 0.95


def test_acf_matches_fft_oracle():
    rng = np.random.default_rng(2468)
    x = rng.standard_normal(4096) + 0.3 * np.sin(np.arange(4096) / 7.0)
    d = x - x.mean()
    padded = np.concatenate([d, np.zeros(len(d))])
    acov = np.fft.ifft(np.abs(np.fft.fft(padded)) ** 2).real[: len(d)]
    expected = acov[1:51] / acov[0]
    assert acf(x, 50).rho == pytest.approx(expected, abs=1e-12)


def test_acf_bounded():
    x = np.random.default_rng(3).standard_normal(500).cumsum()
    curve = acf(x, 100)
    assert np.all(np.abs(curve.rho) <= 1.0 + 1e-12)


def test_acf_errors():
    with pytest.raises(DegenerateInputError):
        acf([1.0] * 50, 5)
    with pytest.raises(ParameterError):
        acf([1.0, 2.0, 3.0], 3)
    with pytest.raises(ParameterError):
        acf([1.0, 2.0, 3.0], 0)


@given(
    a=st.floats(min_value=0.1, max_value=10.0),
    b=st.floats(min_value=-5.0, max_value=5.0),
)
@settings(max_examples=50)
def test_acf_affine_invariant(a, b):
    x = np.random.default_rng(31).standard_normal(300)
    assert acf(a * x + b, 20).rho == pytest.approx(acf(x, 20).rho, abs=1e-10)


# ---------------------------------------------------------------- tail index


def pareto_sample(alpha, n, seed):
    # Inverse-CDF sampling: P(X > x) = x^(-alpha) for x >= 1.
    u = np.random.default_rng(seed).uniform(size=n)
    return (1.0 - u) ** (-1.0 / alpha)


def test_hill_recovers_pareto_3():
    x = pareto_sample(3.0, 10**5, 1234)
    assert hill_tail_index(x, 0.05) == pytest.approx(3.0, abs=0.15)


def test_hill_recovers_pareto_1_5():
    # Consume one sample block first so the draws differ from the alpha=3
    # case while staying reproducible.
    rng = np.random.default_rng(1234)
    rng.uniform(size=10**5)
    u = rng.uniform(size=10**5)
    x = (1.0 - u) ** (-1.0 / 1.5)
    assert hill_tail_index(x, 0.05) == pytest.approx(1.5, abs=0.1)


def test_hill_sign_blind():
    x = pareto_sample(3.0, 10**4, 9)
    signs = np.where(np.arange(len(x)) % 2 == 0, 1.0, -1.0)
    assert hill_tail_index(x * signs, 0.05) == hill_tail_index(x, 0.05)


def test_hill_scale_invariant():
    x = pareto_sample(2.0, 10**4, 77)
    base = hill_tail_index(x, 0.05)
    for a in (1e-6, 0.5, 3.0, 1e6):
        assert hill_tail_index(a * x, 0.05) == pytest.approx(base, rel=1e-10)


def test_hill_errors():
    with pytest.raises(ParameterError):
        hill_tail_index(np.ones(49), 0.05)
    x = pareto_sample(2.0, 1000, 5)
    with pytest.raises(ParameterError):
        hill_tail_index(x, 0.0)
    with pytest.raises(ParameterError):
        hill_tail_index(x, 0.25)
    with pytest.raises(DegenerateInputError):
        hill_tail_index(np.ones(1000), 0.05)  # all spacings zero
    mostly_zero = np.zeros(1000)
    mostly_zero[:10] = 2.0
    with pytest.raises(DegenerateInputError):
        hill_tail_index(mostly_zero, 0.05)  # threshold not positive


# ----------------------------------------------------------------- summarize


def test_summarize_composition():
    prices = np.exp(np.random.default_rng(4).standard_normal(3000).cumsum() * 0.01)
    s = summarize(prices, max_lag=100, k_fraction=0.05)
    r = log_returns(prices)
    assert s.n_samples == len(r) == 2999
    assert s.mean == pytest.approx(float(np.mean(r)), rel=1e-12)
    assert s.variance == pytest.approx(float(np.var(r)), rel=1e-12)
    assert s.excess_kurtosis == pytest.approx(excess_kurtosis(r), rel=1e-12)
    assert s.acf_returns.rho == pytest.approx(acf(r, 100).rho, rel=1e-12)
    assert s.acf_abs_returns.rho == pytest.approx(acf(np.abs(r), 100).rho, rel=1e-12)
    assert s.tail_index == pytest.approx(hill_tail_index(r, 0.05), rel=1e-12)
    assert s.variance >= 0.0


def test_summarize_gbm_flat():
    # Geometric random walk: kurtosis near zero, no return correlation.
    steps = np.random.default_rng(12).standard_normal(10**4) * 0.006 - 2e-5
    prices = np.exp(np.concatenate([[0.0], steps.cumsum()]))
    s = summarize(prices)
    assert abs(s.excess_kurtosis) < 1.0
    assert np.abs(s.acf_returns.rho[:20]).max() < 0.05


def test_summarize_tail_index_omitted_when_unavailable():
    prices = np.linspace(1.0, 2.0, 30)  # 29 returns: below the tail-fit floor
    s = summarize(prices, max_lag=10)
    assert s.tail_index is None
    assert s.n_samples == 29


def test_summarize_constant_prices():
    with pytest.raises(DegenerateInputError):
        summarize([1.0] * 100, max_lag=10)
