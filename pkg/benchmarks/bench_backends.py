"""Benchmark the compiled kernel against the pure-Python reference backend.

Both produce bit-identical output, so this is purely a throughput
comparison.  Run from the repository root:

    python benchmarks/bench_backends.py
    python benchmarks/bench_backends.py --steps 20000 --repeats 5
"""

import argparse
import statistics
import time

from threshold_market import ModelParams
from threshold_market.backend import HAVE_KERNEL, run_simulation

CASES = {
    "emh_baseline": dict(),
    "herding": dict(herding_enabled=True, volatility_feedback=True),
    "herding_incentive": dict(
        herding_enabled=True,
        volatility_feedback=True,
        incentive_rate=100.0,
        incentive_off_step=5000,
    ),
}


def time_backend(backend, params, seed, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        run_simulation(seed, params, backend=backend)
        samples.append(time.perf_counter() - t0)
    return min(samples), statistics.mean(samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=10000)
    ap.add_argument("--agents", type=int, default=100)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    backends = ["python"] + (["compiled"] if HAVE_KERNEL else [])
    if not HAVE_KERNEL:
        print("note: compiled kernel not built; timing the Python backend only\n")

    print(f"{args.steps} steps x {args.agents} agents, "
          f"best of {args.repeats} repeats, seed {args.seed}\n")
    header = f"{'case':<20} {'backend':<10} {'best':>10} {'mean':>10} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, overrides in CASES.items():
        params = ModelParams(n_steps=args.steps, n_agents=args.agents, **overrides)
        best = {}
        for backend in backends:
            best_t, mean_t = time_backend(backend, params, args.seed, args.repeats)
            best[backend] = best_t
            speedup = (
                f"{best['python'] / best_t:8.1f}x" if backend == "compiled" else ""
            )
            print(f"{name:<20} {backend:<10} {best_t:9.4f}s {mean_t:9.4f}s {speedup:>9}")
        print()


if __name__ == "__main__":
    main()
