"""Command-line entry point.

Runs one scenario ensemble and writes, into --out:

* ``timeseries_<seed>.csv``  -- one file per ensemble member, columns
  ``step,eta,price,emh_price,sentiment,n_switches``;
* ``summary.json``           -- per-seed statistics, ensemble aggregates and
  a pooled return histogram.

Precedence: flags > ``--config`` file (flat ``key=value`` lines, ``#``
comments) > preset defaults.  Real numbers are rendered with full round-trip
precision and files are written atomically, so outputs are byte-stable
functions of (scenario, overrides, master seed, ensemble size).

Exit codes: 0 success, 2 usage or configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, NumericError, ParameterError
from .scenarios import (
    DEFAULT_K_FRACTION,
    DEFAULT_MASTER_SEED,
    DEFAULT_MAX_LAG,
    DEFAULT_N_SEEDS,
    SCENARIO_NAMES,
    RunResult,
    ScenarioConfig,
    make_scenario,
    run_ensemble,
)

HISTOGRAM_BINS = 101
HISTOGRAM_SPAN_STDS = 6.0

# Keys accepted in --config files and their parsers.  "Override" keys feed
# ModelParams / the stats knobs; the rest mirror top-level flags.
_BOOL_WORDS = {
    "true": True, "yes": True, "on": True, "1": True,
    "false": False, "no": False, "off": False, "0": False,
}


def _parse_bool(text: str) -> bool:
    try:
        return _BOOL_WORDS[text.strip().lower()]
    except KeyError:
        raise ParameterError(f"expected a boolean, got {text!r}") from None


def _parse_int(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise ParameterError(f"expected an integer, got {text!r}") from None


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParameterError(f"expected a number, got {text!r}") from None


_OVERRIDE_PARSERS = {
    "h": _parse_float,
    "kappa": _parse_float,
    "R": _parse_float,
    "incentive_off_step": _parse_int,
    "x_lo": _parse_float,
    "x_hi": _parse_float,
    "c_lo": _parse_float,
    "c_hi": _parse_float,
    "volatility_feedback": _parse_bool,
    "herding_enabled": _parse_bool,
    "max_lag": _parse_int,
    "k_fraction": _parse_float,
    "p0": _parse_float,
}
_TOP_PARSERS = {
    "scenario": str.strip,
    "seed": _parse_int,
    "seeds": _parse_int,
    "steps": _parse_int,
    "agents": _parse_int,
    "threads": _parse_int,
    "out": str.strip,
}

# Override keys -> ModelParams field names ("R" is the one rename).
_PARAM_FIELDS = {
    "h": "h",
    "kappa": "kappa",
    "R": "incentive_rate",
    "incentive_off_step": "incentive_off_step",
    "x_lo": "x_lo",
    "x_hi": "x_hi",
    "c_lo": "c_lo",
    "c_hi": "c_hi",
    "volatility_feedback": "volatility_feedback",
    "herding_enabled": "herding_enabled",
    "p0": "p0",
}


@dataclass
class CliConfig:
    scenario: str
    steps: Optional[int]
    agents: Optional[int]
    seeds: int
    seed: int
    out_dir: Path
    threads: Optional[int]
    overrides: dict = field(default_factory=dict)
    config: Optional[ScenarioConfig] = None  # built and validated by parse_args


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threshold-market",
        description="Moving-threshold market model: run a scenario ensemble "
        "and write time series plus summary statistics.",
    )
    parser.add_argument("--scenario", choices=SCENARIO_NAMES, default=None,
                        help="experiment preset (default: emh_baseline)")
    parser.add_argument("--config", metavar="FILE", default=None,
                        help="flat key=value config file; flags take precedence")
    parser.add_argument("--seed", type=int, default=None, metavar="U64",
                        help=f"master seed (default {DEFAULT_MASTER_SEED})")
    parser.add_argument("--seeds", type=int, default=None, metavar="N",
                        help=f"ensemble size (default {DEFAULT_N_SEEDS})")
    parser.add_argument("--steps", type=int, default=None, metavar="N",
                        help="steps per run (default 10000)")
    parser.add_argument("--agents", type=int, default=None, metavar="M",
                        help="agent count (default 100)")
    parser.add_argument("--kappa", type=float, default=None, metavar="X",
                        help="market-depth coupling")
    parser.add_argument("--h", type=float, default=None, metavar="X",
                        help="timestep length in variance units")
    parser.add_argument("--R", type=float, default=None, metavar="X",
                        help="incentive drift rate")
    parser.add_argument("--incentive-off", type=int, default=None, metavar="N",
                        help="step at which the incentive shuts off")
    parser.add_argument("--feedback", type=_parse_bool, default=None, metavar="BOOL",
                        help="shock amplification 1 + 2|sentiment| on/off")
    parser.add_argument("--herding", type=_parse_bool, default=None, metavar="BOOL",
                        help="minority threshold drift on/off")
    parser.add_argument("--max-lag", type=int, default=None, metavar="K",
                        help="autocorrelation lags to report (default 250)")
    parser.add_argument("--k-fraction", type=float, default=None, metavar="X",
                        help="top fraction of |returns| in the tail fit (default 0.05)")
    parser.add_argument("--out", default=None, metavar="DIR",
                        help="output directory (default ./out)")
    parser.add_argument("--threads", type=int, default=None, metavar="N",
                        help="ensemble parallelism cap (default: machine); "
                        "output is independent of this value")
    return parser


def _read_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParameterError(f"cannot read config file {path}: {exc}") from None
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _TOP_PARSERS:
            values[key] = _TOP_PARSERS[key](value)
        elif key in _OVERRIDE_PARSERS:
            values[key] = _OVERRIDE_PARSERS[key](value)
        else:
            raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
    return values


# (flag dest, override key) pairs: flags that map straight onto override keys.
_FLAG_OVERRIDES = [
    ("kappa", "kappa"),
    ("h", "h"),
    ("R", "R"),
    ("incentive_off", "incentive_off_step"),
    ("feedback", "volatility_feedback"),
    ("herding", "herding_enabled"),
    ("max_lag", "max_lag"),
    ("k_fraction", "k_fraction"),
]


def parse_args(argv=None) -> CliConfig:
    """Merge flags, config file and defaults into a validated CliConfig."""
    args = build_parser().parse_args(argv)
    file_values = _read_config_file(args.config) if args.config else {}

    def pick(flag_value, file_key, default):
        if flag_value is not None:
            return flag_value
        return file_values.get(file_key, default)

    overrides = {k: v for k, v in file_values.items() if k in _OVERRIDE_PARSERS}
    for dest, key in _FLAG_OVERRIDES:
        flag_value = getattr(args, dest)
        if flag_value is not None:
            overrides[key] = flag_value

    cfg = CliConfig(
        scenario=pick(args.scenario, "scenario", "emh_baseline"),
        steps=pick(args.steps, "steps", None),
        agents=pick(args.agents, "agents", None),
        seeds=pick(args.seeds, "seeds", DEFAULT_N_SEEDS),
        seed=pick(args.seed, "seed", DEFAULT_MASTER_SEED),
        out_dir=Path(pick(args.out, "out", "out")),
        threads=pick(args.threads, "threads", None),
        overrides=overrides,
    )
    cfg.config = _build_scenario(cfg)
    return cfg


def _build_scenario(cfg: CliConfig) -> ScenarioConfig:
    """Re-validate merged values against the model invariants."""
    if cfg.scenario not in SCENARIO_NAMES:
        raise ParameterError(
            f"unknown scenario {cfg.scenario!r}; choose from {', '.join(SCENARIO_NAMES)}"
        )
    param_overrides = {}
    for key, value in cfg.overrides.items():
        if key in _PARAM_FIELDS:
            param_overrides[_PARAM_FIELDS[key]] = value
    if cfg.steps is not None:
        param_overrides["n_steps"] = cfg.steps
    if cfg.agents is not None:
        param_overrides["n_agents"] = cfg.agents
    return make_scenario(
        cfg.scenario,
        n_seeds=cfg.seeds,
        master_seed=cfg.seed,
        max_lag=cfg.overrides.get("max_lag", DEFAULT_MAX_LAG),
        k_fraction=cfg.overrides.get("k_fraction", DEFAULT_K_FRACTION),
        **param_overrides,
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def _atomic_write_text(path: Path, text: str) -> None:
    """Write whole-file-or-nothing so failures leave no partial output."""
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError:
        try:
            tmp.unlink()
        except OSError:
            pass
        raise


def emit_timeseries(result: RunResult, path: Path) -> None:
    """CSV of the run's per-step records, full round-trip precision."""
    rec = result.records
    lines = ["step,eta,price,emh_price,sentiment,n_switches"]
    for i in range(len(rec)):
        lines.append(
            f"{rec.step[i]},{_fmt(rec.eta[i])},{_fmt(rec.price[i])},"
            f"{_fmt(rec.emh_price[i])},{_fmt(rec.sentiment[i])},{rec.n_switches[i]}"
        )
    lines.append("")  # newline-terminated
    _atomic_write_text(path, "\n".join(lines))


def _aggregate(values: list) -> Optional[dict]:
    present = [v for v in values if v is not None]
    if not present:
        return None
    return {
        "min": min(present),
        "max": max(present),
        "mean": sum(present) / len(present),
    }


def _return_histogram(results: list[RunResult]) -> Optional[dict]:
    pooled = np.concatenate(
        [np.diff(np.log(res.records.price)) for res in results]
    )
    spread = float(np.std(pooled))
    if spread == 0.0:
        return None
    half_span = HISTOGRAM_SPAN_STDS * spread
    edges = np.linspace(-half_span, half_span, HISTOGRAM_BINS + 1)
    counts, _ = np.histogram(pooled, bins=edges)
    return {
        "bin_edges": [float(e) for e in edges],
        "counts": [int(c) for c in counts],
    }


def emit_summary(results: list[RunResult], path: Path) -> None:
    """JSON with per-seed statistics, aggregates, and a pooled histogram."""
    if not results:
        raise ParameterError("summary of an empty result list")
    per_seed = []
    for res in results:
        s = res.summary
        per_seed.append(
            {
                "seed": res.seed,
                "excess_kurtosis": s.excess_kurtosis,
                "tail_index": s.tail_index,
                "acf_returns": {
                    "lags": [int(k) for k in s.acf_returns.lags],
                    "rho": [float(v) for v in s.acf_returns.rho],
                },
                "acf_abs_returns": {
                    "lags": [int(k) for k in s.acf_abs_returns.lags],
                    "rho": [float(v) for v in s.acf_abs_returns.rho],
                },
                "mean_sigma": float(np.mean(res.records.sentiment)),
                "return_variance": s.variance,
            }
        )
    doc = {
        "n_seeds": len(results),
        "per_seed": per_seed,
        "aggregates": {
            stat: _aggregate([entry[stat] for entry in per_seed])
            for stat in ("excess_kurtosis", "tail_index", "mean_sigma", "return_variance")
        },
        "histogram": _return_histogram(results),
    }
    _atomic_write_text(path, json.dumps(doc, indent=2) + "\n")


def execute(cfg: CliConfig) -> int:
    results = run_ensemble(cfg.config, threads=cfg.threads)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for res in results:
        emit_timeseries(res, cfg.out_dir / f"timeseries_{res.seed}.csv")
    emit_summary(results, cfg.out_dir / "summary.json")
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_args(argv)
    except (ParameterError, DegenerateInputError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return execute(cfg)
    except (ParameterError, DegenerateInputError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
