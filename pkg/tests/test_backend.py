"""Backend selection and compiled/pure-Python equivalence.

The compiled kernel must replay the reference implementation bit for bit:
every run comparison here uses exact equality, never tolerances.
"""

import numpy as np
import pytest

from conftest import timeseries_equal
from threshold_market import ModelParams, ParameterError
from threshold_market.backend import (
    HAVE_KERNEL,
    default_backend,
    resolve_backend,
    run_simulation,
)
from threshold_market.rng import RngStream, inverse_normal_cdf, substream_seed

needs_kernel = pytest.mark.skipif(not HAVE_KERNEL, reason="compiled kernel not built")

PARAM_SETS = {
    "baseline": dict(),
    "herding": dict(herding_enabled=True, volatility_feedback=True),
    "incentive": dict(
        herding_enabled=True,
        volatility_feedback=True,
        incentive_rate=100.0,
        incentive_off_step=1000,
    ),
    "uncoupled": dict(kappa=0.0, herding_enabled=True),
    "preferred_minus": dict(
        herding_enabled=True, incentive_rate=50.0, preferred_state=-1
    ),
    "degenerate_herd": dict(herding_enabled=True, c_lo=40.0, c_hi=40.0),
}


# ----------------------------------------------------------------- selection


def test_resolve_backend_values():
    assert resolve_backend("python") == "python"
    if HAVE_KERNEL:
        assert resolve_backend("auto") == "compiled"
        assert resolve_backend("compiled") == "compiled"
    with pytest.raises(ParameterError):
        resolve_backend("fortran")


def test_default_backend_env(monkeypatch):
    monkeypatch.delenv("THRESHOLD_MARKET_BACKEND", raising=False)
    assert default_backend() == ("compiled" if HAVE_KERNEL else "python")
    monkeypatch.setenv("THRESHOLD_MARKET_BACKEND", "python")
    assert default_backend() == "python"
    monkeypatch.setenv("THRESHOLD_MARKET_BACKEND", "bogus")
    with pytest.raises(ParameterError):
        default_backend()


def test_python_backend_always_available():
    p = ModelParams(n_steps=50)
    ts = run_simulation(1, p, backend="python")
    assert len(ts) == 50


# --------------------------------------------------------------- equivalence


@needs_kernel
@pytest.mark.parametrize("name", sorted(PARAM_SETS))
@pytest.mark.parametrize("seed", [1, 998877])
def test_backends_bit_identical(name, seed):
    params = ModelParams(n_steps=2000, **PARAM_SETS[name])
    compiled = run_simulation(seed, params, backend="compiled")
    python = run_simulation(seed, params, backend="python")
    assert timeseries_equal(compiled, python)


@needs_kernel
def test_backends_bit_identical_full_length():
    params = ModelParams(
        herding_enabled=True,
        volatility_feedback=True,
        incentive_rate=100.0,
        incentive_off_step=5000,
    )
    compiled = run_simulation(12345, params, backend="compiled")
    python = run_simulation(12345, params, backend="python")
    assert len(compiled) == 10000
    assert timeseries_equal(compiled, python)


@needs_kernel
def test_kernel_rng_helpers_match_python():
    from threshold_market import _kernel

    n = 4096
    for seed in (0, 42, 2**64 - 1):
        stream = RngStream(seed)
        words = np.empty(n, dtype=np.uint64)
        _kernel.u64_sequence(seed, words)
        assert [stream.next_u64() for _ in range(n)] == list(map(int, words))

        stream = RngStream(seed)
        normals = np.empty(n, dtype=np.float64)
        _kernel.normal_sequence(seed, normals)
        assert [stream.standard_normal() for _ in range(n)] == list(normals)

        stream = RngStream(seed)
        uniforms = np.empty(n, dtype=np.float64)
        _kernel.uniform_sequence(seed, 0.1, 0.3, uniforms)
        assert [stream.uniform(0.1, 0.3) for _ in range(n)] == list(uniforms)

        stream = RngStream(seed)
        signs = np.empty(n, dtype=np.int64)
        _kernel.sign_sequence(seed, signs)
        assert [stream.sign() for _ in range(n)] == list(map(int, signs))


@needs_kernel
def test_kernel_scalar_helpers_match_python():
    from threshold_market import _kernel

    for k in range(20):
        assert _kernel.substream_seed(42, k) == substream_seed(42, k)
    for u in (1e-300, 1e-9, 0.2, 0.5, 0.9, 1 - 1e-12):
        assert _kernel.inverse_normal_cdf(u) == inverse_normal_cdf(u)


# ---------------------------------------------------------------- regression
# Values frozen from the reference implementation at package version 0.1.0;
# any change here is a silent behavior change in the RNG or the step pipeline.


def test_run_regression_pins():
    params = ModelParams(n_steps=1000, herding_enabled=True, volatility_feedback=True)
    ts = run_simulation(42, params, backend="python")
    assert float(ts.eta[0]) == -0.9758837425027637
    assert float(ts.price[-1]) == 1.2483524089576656
    assert float(ts.emh_price[-1]) == 1.1513597248312863
    assert float(ts.sentiment[-1]) == 0.1
    assert int(ts.n_switches.sum()) == 462

    baseline = ModelParams(n_steps=1000)
    ts = run_simulation(7, baseline, backend="python")
    assert float(ts.price[-1]) == 0.8718449762130698
    assert int(ts.n_switches.sum()) == 143
