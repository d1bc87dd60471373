"""Scalar parameters governing one simulation run."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ParameterError


@dataclass(frozen=True)
class ModelParams:
    """Everything a run needs besides its seed.

    h is the squared daily volatility of the information stream (a timestep
    of h = 0.00004 matches daily price moves of 0.6--0.7%).  kappa converts
    sentiment changes into log-price impact.  Initial threshold offsets are
    uniform on [x_lo, x_hi]; herding coefficients uniform on [c_lo, c_hi].
    incentive_rate > 0 pushes agents out of -preferred_state at rate
    incentive_rate * h per step, until incentive_off_step (if set).
    """

    h: float = 0.00004
    n_agents: int = 100
    kappa: float = 0.2
    x_lo: float = 0.1
    x_hi: float = 0.3
    c_lo: float = 0.0
    c_hi: float = 100.0
    incentive_rate: float = 0.0
    incentive_off_step: Optional[int] = None
    preferred_state: int = 1
    volatility_feedback: bool = False
    herding_enabled: bool = False
    n_steps: int = 10000
    p0: float = 1.0

    def __post_init__(self):
        if not self.h > 0.0:
            raise ParameterError(f"h must be > 0, got {self.h}")
        if self.n_agents < 1:
            raise ParameterError(f"n_agents must be >= 1, got {self.n_agents}")
        if self.kappa < 0.0:
            raise ParameterError(f"kappa must be >= 0, got {self.kappa}")
        if not 0.0 < self.x_lo < self.x_hi:
            raise ParameterError(
                f"threshold offsets need 0 < x_lo < x_hi, got [{self.x_lo}, {self.x_hi}]"
            )
        if not 0.0 <= self.c_lo <= self.c_hi:
            raise ParameterError(
                f"herding coefficients need 0 <= c_lo <= c_hi, got [{self.c_lo}, {self.c_hi}]"
            )
        if self.incentive_rate < 0.0:
            raise ParameterError(f"incentive_rate must be >= 0, got {self.incentive_rate}")
        if self.incentive_off_step is not None and self.incentive_off_step < 0:
            raise ParameterError(
                f"incentive_off_step must be >= 0 or unset, got {self.incentive_off_step}"
            )
        if self.preferred_state not in (1, -1):
            raise ParameterError(f"preferred_state must be +1 or -1, got {self.preferred_state}")
        if self.n_steps < 1:
            raise ParameterError(f"n_steps must be >= 1, got {self.n_steps}")
        if not self.p0 > 0.0:
            raise ParameterError(f"p0 must be > 0, got {self.p0}")
