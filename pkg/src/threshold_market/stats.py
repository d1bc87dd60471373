"""Pure-function statistics over completed runs.

All estimators use the plain moment definitions (biased, no small-sample
corrections): at the 10^4 samples a standard run produces, the corrections
are negligible and the simple forms are reproducible across languages.  The
volatility proxy throughout is the absolute log return.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, NumericError, ParameterError

DEFAULT_MAX_LAG = 250      # about one trading year of daily lags
DEFAULT_K_FRACTION = 0.05  # top 5% of absolute returns enter the tail fit


@dataclass(frozen=True)
class AcfCurve:
    lags: np.ndarray   # 1..max_lag
    rho: np.ndarray

    def __len__(self) -> int:
        return len(self.lags)


@dataclass(frozen=True)
class StatsSummary:
    mean: float
    variance: float
    excess_kurtosis: float
    acf_returns: AcfCurve
    acf_abs_returns: AcfCurve
    tail_index: Optional[float]
    n_samples: int


def _as_1d(values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ParameterError(f"{what} must be one-dimensional, got shape {arr.shape}")
    return arr


def log_returns(prices) -> np.ndarray:
    """r(n) = ln(p(n+1) / p(n)); output is one shorter than the input."""
    p = _as_1d(prices, "prices")
    if len(p) < 2:
        raise ParameterError(f"need at least 2 prices, got {len(p)}")
    if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
        raise NumericError("prices must be finite and strictly positive")
    return np.diff(np.log(p))


def excess_kurtosis(series) -> float:
    """m4 / m2^2 - 3 with central sample moments."""
    x = _as_1d(series, "series")
    n = len(x)
    if n < 4:
        raise DegenerateInputError(f"excess kurtosis needs at least 4 samples, got {n}")
    d = x - np.mean(x)
    m2 = np.mean(d * d)
    if m2 == 0.0:
        raise DegenerateInputError("excess kurtosis of a constant series")
    m4 = np.mean(d**4)
    return float(m4 / (m2 * m2) - 3.0)


def acf(series, max_lag: int) -> AcfCurve:
    """Sample autocorrelation rho(k), k = 1..max_lag, full-sample mean and
    denominator (the standard biased estimator)."""
    x = _as_1d(series, "series")
    n = len(x)
    if max_lag < 1:
        raise ParameterError(f"max_lag must be >= 1, got {max_lag}")
    if max_lag >= n:
        raise ParameterError(f"max_lag must be < series length, got {max_lag} >= {n}")
    d = x - np.mean(x)
    denom = float(np.sum(d * d))
    if denom == 0.0:
        raise DegenerateInputError("autocorrelation of a constant series")
    rho = np.empty(max_lag, dtype=np.float64)
    for k in range(1, max_lag + 1):
        rho[k - 1] = np.sum(d[:-k] * d[k:]) / denom
    return AcfCurve(lags=np.arange(1, max_lag + 1), rho=rho)


def hill_tail_index(series, k_fraction: float = DEFAULT_K_FRACTION) -> float:
    """Hill estimator of the power-law tail exponent of |series|.

    Uses the top k = ceil(k_fraction * N) order statistics of the absolute
    values against the (k+1)-th largest as threshold; zeros never enter and
    ties at the threshold contribute nothing.
    """
    x = _as_1d(series, "series")
    n = len(x)
    if n < 50:
        raise ParameterError(f"tail estimation needs at least 50 samples, got {n}")
    if not 0.0 < k_fraction <= 0.2:
        raise ParameterError(f"k_fraction must be in (0, 0.2], got {k_fraction}")
    a = np.sort(np.abs(x))
    k = math.ceil(k_fraction * n)
    threshold = a[n - k - 1]
    if threshold <= 0.0:
        raise DegenerateInputError(
            f"tail estimation needs more than k={k} positive values"
        )
    spacing_sum = float(np.sum(np.log(a[n - k:] / threshold)))
    if spacing_sum <= 0.0:
        raise DegenerateInputError("tail order statistics are all equal")
    return k / spacing_sum


def summarize(
    prices,
    max_lag: int = DEFAULT_MAX_LAG,
    k_fraction: float = DEFAULT_K_FRACTION,
) -> StatsSummary:
    """Full measurement battery over a price path.

    The tail index is omitted (None) when its preconditions fail; every other
    component error propagates.
    """
    r = log_returns(prices)
    mean = float(np.mean(r))
    d = r - mean
    variance = float(np.mean(d * d))
    kurt = excess_kurtosis(r)
    acf_r = acf(r, max_lag)
    acf_abs = acf(np.abs(r), max_lag)
    try:
        tail: Optional[float] = hill_tail_index(r, k_fraction)
    except (ParameterError, DegenerateInputError):
        tail = None
    return StatsSummary(
        mean=mean,
        variance=variance,
        excess_kurtosis=kurt,
        acf_returns=acf_r,
        acf_abs_returns=acf_abs,
        tail_index=tail,
        n_samples=len(r),
    )
