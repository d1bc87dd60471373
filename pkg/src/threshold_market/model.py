"""Moving-threshold market model: agents, switching, sentiment, price.

Each of the M agents holds a position s = +-1 plus a pair of price
thresholds (lower, upper) straddling the price at which the agent last
switched.  When the price leaves that corridor the agent flips position and
draws a fresh corridor around the current price.  The market-wide sentiment
(the mean position) feeds back into the price through the market-depth
coupling kappa, and strategies are expressed as threshold motion:

* herding   -- agents in the strict minority move both thresholds toward the
               price at rate herd_coeff * h * |sentiment| per step;
* incentive -- agents sitting in the disfavored state move both thresholds
               inward at rate incentive_rate * h per step while the
               incentive is active.

Step pipeline (fixed; determines the draw order within a step):

  1. draw the information shock eta;
  2. update price and the uncoupled reference price with the same eta;
  3. decide whether the incentive is active this step;
  4. apply threshold drift to every agent, in index order, using the
     sentiment that entered the step;
  5. check switches against the new price, in index order, single pass
     (a switching agent draws its two new threshold offsets immediately);
  6. recompute sentiment, advance the step counter.

Switches therefore affect the price only on the *next* step, through the
kappa * d_sigma term.  Initialization draws, per agent in index order:
sign, herding coefficient (skipped when c_lo == c_hi), lower offset, upper
offset.

The compiled kernel in ``_kernel`` replays this module's arithmetic
operation for operation; both backends produce bit-identical runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .errors import NumericError, ParameterError
from .params import ModelParams
from .rng import RngStream


class TimeSeriesRecord(NamedTuple):
    """One output row: state after the step plus the shock that produced it."""

    step: int
    eta: float
    price: float
    emh_price: float
    sentiment: float
    n_switches: int


class StepOutcome(NamedTuple):
    record: TimeSeriesRecord
    n_switches: int


@dataclass
class AgentState:
    """Position, threshold corridor and fixed herding coefficient."""

    s: int
    lower: float
    upper: float
    herd_coeff: float


@dataclass
class MarketState:
    n: int
    price: float
    emh_price: float
    sigma: float
    sigma_prev: float
    agents: list[AgentState]


@dataclass(frozen=True)
class TimeSeries:
    """Columnar per-step output of a completed run (rows 1..n_steps)."""

    step: np.ndarray
    eta: np.ndarray
    price: np.ndarray
    emh_price: np.ndarray
    sentiment: np.ndarray
    n_switches: np.ndarray

    def __len__(self) -> int:
        return len(self.step)

    def row(self, i: int) -> TimeSeriesRecord:
        return TimeSeriesRecord(
            int(self.step[i]),
            float(self.eta[i]),
            float(self.price[i]),
            float(self.emh_price[i]),
            float(self.sentiment[i]),
            int(self.n_switches[i]),
        )

    def __iter__(self) -> Iterator[TimeSeriesRecord]:
        return (self.row(i) for i in range(len(self)))


def sentiment(positions) -> float:
    """Mean position; exact because the +-1 sum is integer arithmetic."""
    total = 0
    count = 0
    for s in positions:
        total += s
        count += 1
    if count == 0:
        raise ParameterError("sentiment of an empty position list")
    return total / count


def volatility_factor(sigma: float, feedback_on: bool) -> float:
    """Shock amplification 1 + 2|sigma| (stand-in for noise traders), or 1."""
    if not feedback_on:
        return 1.0
    return 1.0 + 2.0 * abs(sigma)


def price_update(p: float, eta: float, sigma: float, d_sigma: float, params: ModelParams) -> float:
    """p * exp((sqrt(h) eta - h/2) f(sigma) + kappa d_sigma)."""
    if not (math.isfinite(p) and math.isfinite(eta) and math.isfinite(sigma) and math.isfinite(d_sigma)):
        raise NumericError(
            f"price update needs finite inputs, got p={p} eta={eta} sigma={sigma} d_sigma={d_sigma}"
        )
    fval = volatility_factor(sigma, params.volatility_feedback)
    return p * math.exp((math.sqrt(params.h) * eta - 0.5 * params.h) * fval + params.kappa * d_sigma)


def emh_price_update(p_emh: float, eta: float, h: float) -> float:
    """Uncoupled reference path: p * exp(sqrt(h) eta - h/2), same eta as the
    coupled price that step."""
    return p_emh * math.exp(math.sqrt(h) * eta - 0.5 * h)


def generate_thresholds(price: float, stream: RngStream, params: ModelParams) -> tuple[float, float]:
    """Fresh corridor around `price`: lower offset drawn first, then upper."""
    x_l = stream.uniform(params.x_lo, params.x_hi)
    x_u = stream.uniform(params.x_lo, params.x_hi)
    return price / (1.0 + x_l), (1.0 + x_u) * price


def apply_threshold_drift(
    agent: AgentState, sigma: float, params: ModelParams, incentive_active: bool
) -> None:
    """Move the corridor inward in place; herding first, incentive second.

    Herding applies only to strict-minority agents (s * sigma < 0), so
    sigma = 0 moves nothing.  Drifts are additive in absolute price units and
    cumulative within one call.
    """
    if params.herding_enabled and agent.s * sigma < 0.0:
        move = agent.herd_coeff * params.h * abs(sigma)
        agent.lower += move
        agent.upper -= move
    if incentive_active and agent.s == -params.preferred_state:
        move = params.incentive_rate * params.h
        agent.lower += move
        agent.upper -= move


def check_switch(agent: AgentState, price: float) -> bool:
    """True when the price has left the corridor, or drift collapsed it."""
    return price <= agent.lower or price >= agent.upper or agent.lower >= agent.upper


def switch_agent(agent: AgentState, price: float, stream: RngStream, params: ModelParams) -> None:
    """Flip position and regenerate the corridor at `price`; herd_coeff is
    fixed for the agent's lifetime."""
    agent.s = -agent.s
    agent.lower, agent.upper = generate_thresholds(price, stream, params)


def init_market(params: ModelParams, stream: RngStream) -> MarketState:
    """Mixed initial positions around sentiment ~ 0, corridors around p0.

    Per agent, in index order: sign draw, herding-coefficient draw (skipped
    when c_lo == c_hi, where the coefficient is the common value), then the
    two threshold offsets.  sigma_prev is set to sigma so the first step sees
    d_sigma = 0.
    """
    agents = []
    for _ in range(params.n_agents):
        s = stream.sign()
        if params.c_lo == params.c_hi:
            coeff = params.c_lo
        else:
            coeff = stream.uniform(params.c_lo, params.c_hi)
        lower, upper = generate_thresholds(params.p0, stream, params)
        agents.append(AgentState(s=s, lower=lower, upper=upper, herd_coeff=coeff))
    sigma0 = sentiment(a.s for a in agents)
    return MarketState(
        n=0,
        price=params.p0,
        emh_price=params.p0,
        sigma=sigma0,
        sigma_prev=sigma0,
        agents=agents,
    )


def incentive_active_at(n: int, params: ModelParams) -> bool:
    return params.incentive_rate > 0.0 and (
        params.incentive_off_step is None or n < params.incentive_off_step
    )


def step(state: MarketState, stream: RngStream, params: ModelParams) -> StepOutcome:
    """Advance the market by one step in place (pipeline in module docstring)."""
    eta = stream.standard_normal()
    d_sigma = state.sigma - state.sigma_prev
    new_price = price_update(state.price, eta, state.sigma, d_sigma, params)
    new_emh = emh_price_update(state.emh_price, eta, params.h)
    incentive = incentive_active_at(state.n, params)

    for agent in state.agents:
        apply_threshold_drift(agent, state.sigma, params, incentive)

    n_switches = 0
    for agent in state.agents:
        if check_switch(agent, new_price):
            switch_agent(agent, new_price, stream, params)
            n_switches += 1

    new_sigma = sentiment(a.s for a in state.agents)
    state.sigma_prev = state.sigma
    state.sigma = new_sigma
    state.price = new_price
    state.emh_price = new_emh
    state.n += 1

    record = TimeSeriesRecord(state.n, eta, new_price, new_emh, new_sigma, n_switches)
    return StepOutcome(record=record, n_switches=n_switches)


def run_simulation_python(seed: int, params: ModelParams) -> TimeSeries:
    """Full seeded run on the pure-Python backend."""
    stream = RngStream(seed)
    state = init_market(params, stream)
    n = params.n_steps
    steps = np.empty(n, dtype=np.int64)
    eta = np.empty(n, dtype=np.float64)
    price = np.empty(n, dtype=np.float64)
    emh = np.empty(n, dtype=np.float64)
    sig = np.empty(n, dtype=np.float64)
    switches = np.empty(n, dtype=np.int64)
    for i in range(n):
        rec = step(state, stream, params).record
        steps[i] = rec.step
        eta[i] = rec.eta
        price[i] = rec.price
        emh[i] = rec.emh_price
        sig[i] = rec.sentiment
        switches[i] = rec.n_switches
    return TimeSeries(steps, eta, price, emh, sig, switches)
