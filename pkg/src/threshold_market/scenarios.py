"""Named experiment presets, ensemble execution, and the incentive report.

Presets pin the strategy switches; everything else (steps, agents, kappa,
...) stays overridable:

* ``emh_baseline``      -- fixed thresholds, no feedback: the price obeys
                           uncoupled reference statistics.
* ``herding``           -- minority agents drift inward, shock amplification
                           f = 1 + 2|sigma| on.
* ``herding_incentive`` -- herding plus an incentive (rate 100) against the
                           -1 state that shuts off at step 5000.
* ``custom``            -- plain defaults, caller sets everything.

The reference (uncoupled) price path is co-generated inside the step loop
from the same shock draws rather than re-simulated, which keeps the two
paths comparable point by point.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from . import backend as _backend
from .errors import ParameterError
from .model import TimeSeries
from .params import ModelParams
from .rng import _check_u64, substream_seed
from .stats import DEFAULT_K_FRACTION, DEFAULT_MAX_LAG, StatsSummary, log_returns, summarize

DEFAULT_N_SEEDS = 32
DEFAULT_MASTER_SEED = 42

SCENARIO_NAMES = ("emh_baseline", "herding", "herding_incentive", "custom")

# Strategy switches each preset pins (validated on every construction).
_PRESET_CONSTRAINTS: dict[str, dict] = {
    "emh_baseline": dict(
        herding_enabled=False, incentive_rate=0.0, volatility_feedback=False
    ),
    "herding": dict(
        herding_enabled=True, incentive_rate=0.0, volatility_feedback=True
    ),
    "herding_incentive": dict(
        herding_enabled=True,
        incentive_rate=100.0,
        incentive_off_step=5000,
        volatility_feedback=True,
    ),
}


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    params: ModelParams
    n_seeds: int = DEFAULT_N_SEEDS
    master_seed: int = DEFAULT_MASTER_SEED
    max_lag: int = DEFAULT_MAX_LAG
    k_fraction: float = DEFAULT_K_FRACTION

    def __post_init__(self):
        if self.name not in SCENARIO_NAMES:
            raise ParameterError(
                f"unknown scenario {self.name!r}; choose from {', '.join(SCENARIO_NAMES)}"
            )
        if self.n_seeds < 1:
            raise ParameterError(f"n_seeds must be >= 1, got {self.n_seeds}")
        _check_u64(self.master_seed, "master_seed")
        constraints = _PRESET_CONSTRAINTS.get(self.name, {})
        for field, expected in constraints.items():
            actual = getattr(self.params, field)
            if actual != expected:
                raise ParameterError(
                    f"scenario {self.name!r} requires {field}={expected!r}, got {actual!r} "
                    "(use scenario 'custom' to vary strategy switches)"
                )


@dataclass(frozen=True)
class RunResult:
    records: TimeSeries
    summary: StatsSummary
    seed: int


def make_scenario(
    name: str,
    n_seeds: int = DEFAULT_N_SEEDS,
    master_seed: int = DEFAULT_MASTER_SEED,
    max_lag: int = DEFAULT_MAX_LAG,
    k_fraction: float = DEFAULT_K_FRACTION,
    **param_overrides,
) -> ScenarioConfig:
    """Build a ScenarioConfig from a preset name plus ModelParams overrides."""
    base = ModelParams(**_PRESET_CONSTRAINTS.get(name, {})) if name in SCENARIO_NAMES else None
    if base is None:
        raise ParameterError(
            f"unknown scenario {name!r}; choose from {', '.join(SCENARIO_NAMES)}"
        )
    params = replace(base, **param_overrides)
    return ScenarioConfig(
        name=name,
        params=params,
        n_seeds=n_seeds,
        master_seed=master_seed,
        max_lag=max_lag,
        k_fraction=k_fraction,
    )


def run_scenario(config: ScenarioConfig, seed: int, backend: str = "auto") -> RunResult:
    """One ensemble member: simulate, then measure the price column."""
    records = _backend.run_simulation(seed, config.params, backend=backend)
    summary = summarize(records.price, max_lag=config.max_lag, k_fraction=config.k_fraction)
    return RunResult(records=records, summary=summary, seed=seed)


def run_ensemble(
    config: ScenarioConfig,
    threads: Optional[int] = None,
    backend: str = "auto",
) -> list[RunResult]:
    """All ensemble members, ordered by member index.

    Member k runs on the substream seed derived from (master_seed, k), so the
    result is independent of execution order and of the degree of
    parallelism.  The compiled kernel drops the GIL, letting members overlap
    on real threads.
    """
    seeds = [substream_seed(config.master_seed, k) for k in range(config.n_seeds)]
    if threads is not None and threads < 1:
        raise ParameterError(f"threads must be >= 1, got {threads}")
    if threads == 1 or config.n_seeds == 1:
        return [run_scenario(config, s, backend=backend) for s in seeds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: run_scenario(config, s, backend=backend), seeds))


class IncentiveReport(NamedTuple):
    mean_sigma_before: float
    mean_sigma_after: float
    vol_before: float
    vol_after: float


def incentive_effect_report(result: RunResult, split_step: int) -> IncentiveReport:
    """Sentiment means and return volatilities on [0, split) vs [split, n).

    Volatility is the (population) standard deviation of the log returns
    within each window.
    """
    n = len(result.records)
    if not 0 < split_step < n:
        raise ParameterError(f"split_step must be in (0, {n}), got {split_step}")
    if split_step < 2 or n - split_step < 2:
        raise ParameterError(
            f"windows need at least 2 prices each, got split_step={split_step} of {n}"
        )
    sent = result.records.sentiment
    price = result.records.price
    r_before = log_returns(price[:split_step])
    r_after = log_returns(price[split_step:])
    return IncentiveReport(
        mean_sigma_before=float(np.mean(sent[:split_step])),
        mean_sigma_after=float(np.mean(sent[split_step:])),
        vol_before=float(np.std(r_before)),
        vol_after=float(np.std(r_after)),
    )
