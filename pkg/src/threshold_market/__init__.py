"""Moving-threshold heterogeneous-agent market simulator.

A market of M agents, each long or short one unit, whose strategies are a
pair of price thresholds drifting between switches.  The package bundles the
simulator (compiled kernel with a pure-Python fallback), a stylized-facts
statistics battery, named experiment scenarios, and a CLI.
"""

from .backend import HAVE_KERNEL, run_simulation
from .errors import DegenerateInputError, NumericError, ParameterError
from .model import (
    AgentState,
    MarketState,
    StepOutcome,
    TimeSeries,
    TimeSeriesRecord,
    init_market,
    step,
)
from .params import ModelParams
from .rng import RngStream, substream_seed
from .scenarios import (
    IncentiveReport,
    RunResult,
    ScenarioConfig,
    incentive_effect_report,
    make_scenario,
    run_ensemble,
    run_scenario,
)
from .stats import (
    AcfCurve,
    StatsSummary,
    acf,
    excess_kurtosis,
    hill_tail_index,
    log_returns,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "AcfCurve",
    "AgentState",
    "DegenerateInputError",
    "HAVE_KERNEL",
    "IncentiveReport",
    "MarketState",
    "ModelParams",
    "NumericError",
    "ParameterError",
    "RngStream",
    "RunResult",
    "ScenarioConfig",
    "StatsSummary",
    "StepOutcome",
    "TimeSeries",
    "TimeSeriesRecord",
    "acf",
    "excess_kurtosis",
    "hill_tail_index",
    "incentive_effect_report",
    "init_market",
    "log_returns",
    "make_scenario",
    "run_ensemble",
    "run_scenario",
    "run_simulation",
    "step",
    "substream_seed",
    "summarize",
]
