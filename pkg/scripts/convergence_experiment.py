#!/usr/bin/env python3
"""Ergodic convergence experiment.

Simulates the optimal degenerate strategy for a geometric ladder of cycle
counts and reports how the estimation error shrinks against the reported
standard error. The error should fall roughly like 1/sqrt(cycles) and stay
within a few standard errors at every rung.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from tuning import (
    analyze_chain,
    degenerate_strategy,
    indicator,
    load_chain_spec,
    simulate_replicated,
    solve_tuning,
)

DEFAULT_MODEL = Path(__file__).resolve().parent.parent / "models" / "reference.json"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("model", nargs="?", default=str(DEFAULT_MODEL))
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--replications", type=int, default=4)
    parser.add_argument("--max-exponent", type=int, default=6,
                        help="largest rung is 10**k cycles per replication")
    args = parser.parse_args()

    spec = load_chain_spec(args.model)
    control = solve_tuning(spec, "maximize")
    strategy = degenerate_strategy(control.m0_star, control.m1_star, spec.n_internal)
    target = indicator(strategy, spec, analyze_chain(spec))

    print(f"model: {args.model}")
    print(f"strategy: degenerate ({control.m0_star}, {control.m1_star}), "
          f"analytic value {target:.12f}")
    print(f"{args.replications} replications per rung, seed {args.seed}")
    print()
    header = f"{'cycles/rep':>12} {'i_hat':>14} {'std err':>12} {'|error|':>12} {'error/SE':>9}"
    print(header)
    print("-" * len(header))

    for k in range(2, args.max_exponent + 1):
        cycles = 10 ** k
        stats = simulate_replicated(
            spec, strategy, cycles=cycles,
            replications=args.replications, seed=args.seed,
        )
        err = abs(stats.i_hat - target)
        ratio = err / stats.std_error if stats.std_error > 0 else float("inf")
        print(f"{cycles:>12d} {stats.i_hat:>14.8f} {stats.std_error:>12.2e} "
              f"{err:>12.2e} {ratio:>9.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
