"""Backend selection: compiled kernel when importable, pure Python otherwise.

Both backends produce bit-identical output, so the choice only affects
speed.  ``THRESHOLD_MARKET_BACKEND=python|compiled`` overrides the default
(useful for benchmarks and the identity tests).
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ParameterError
from .model import TimeSeries, run_simulation_python
from .params import ModelParams

try:
    from . import _kernel
except ImportError:  # extension not built; pure Python still works
    _kernel = None

HAVE_KERNEL = _kernel is not None

_BACKENDS = ("auto", "compiled", "python")


def default_backend() -> str:
    """Backend implied by the environment: 'compiled' or 'python'."""
    choice = os.environ.get("THRESHOLD_MARKET_BACKEND", "auto").lower()
    if choice not in _BACKENDS:
        raise ParameterError(
            f"THRESHOLD_MARKET_BACKEND must be one of {_BACKENDS}, got {choice!r}"
        )
    if choice == "auto":
        return "compiled" if HAVE_KERNEL else "python"
    return choice


def resolve_backend(backend: str = "auto") -> str:
    if backend not in _BACKENDS:
        raise ParameterError(f"backend must be one of {_BACKENDS}, got {backend!r}")
    if backend == "auto":
        return default_backend()
    return backend


def run_simulation(seed: int, params: ModelParams, backend: str = "auto") -> TimeSeries:
    """One full seeded run on the chosen backend."""
    chosen = resolve_backend(backend)
    if chosen == "compiled":
        if not HAVE_KERNEL:
            raise ParameterError("compiled backend requested but the kernel is not built")
        n = params.n_steps
        step = np.empty(n, dtype=np.int64)
        eta = np.empty(n, dtype=np.float64)
        price = np.empty(n, dtype=np.float64)
        emh = np.empty(n, dtype=np.float64)
        sigma = np.empty(n, dtype=np.float64)
        switches = np.empty(n, dtype=np.int64)
        _kernel.simulate(
            seed, n, params.n_agents, params.h, params.kappa,
            params.x_lo, params.x_hi, params.c_lo, params.c_hi,
            params.incentive_rate, params.incentive_off_step, params.preferred_state,
            params.volatility_feedback, params.herding_enabled, params.p0,
            step, eta, price, emh, sigma, switches,
        )
        return TimeSeries(step, eta, price, emh, sigma, switches)
    return run_simulation_python(seed, params)
