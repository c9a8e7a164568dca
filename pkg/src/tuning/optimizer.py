"""Exact solution of the tuning problem and randomized refutation.

The long-run average income, viewed as a function of the strategy pair,
is a ratio of two bilinear forms, so its extrema over the product of
probability simplices are attained at vertices: deterministic policies
that always restart at a fixed internal state from each boundary side.
Solving the problem therefore reduces to a scan of the ratio table for
its global extremum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .absorption import analyze_chain, check_positivity
from .errors import PositivityError
from .model import ChainSpec
from .stationary import cost_coefficients

DIRECTIONS = ("maximize", "minimize")
DOMINANCE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class OptimalControl:
    """Best deterministic policy: restart labels, value, and the full table."""

    m0_star: int
    m1_star: int
    value: float
    direction: str
    c_table: np.ndarray


@dataclass(frozen=True)
class RefutationReport:
    """Outcome of a randomized search for a strategy beating the optimum.

    ``gap`` measures how far the best random strategy stayed inside the
    optimum (nonnegative up to roundoff); ``violations`` counts samples
    beyond the optimum by more than ``tolerance``. Both are None/0 when
    no samples were drawn.
    """

    samples: int
    seed: int
    tolerance: float
    best_observed: float | None
    gap: float | None
    violations: int


def solve_tuning(spec: ChainSpec, direction: str = "maximize") -> OptimalControl:
    """Scan the ratio table for its global extremum.

    Ties are broken toward the lexicographically smallest label pair.
    Strict positivity of the absorption probabilities is checked first
    and a PositivityError raised if it fails.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}, expected one of {DIRECTIONS}")
    analysis = analyze_chain(spec)
    positivity = check_positivity(analysis)
    if not positivity.ok:
        first = positivity.errors[0]
        raise PositivityError(
            f"{len(positivity.errors)} absorption probabilities are not strictly "
            f"positive, e.g. {first.message}"
        )
    coeffs = cost_coefficients(spec, analysis)
    table = coeffs.c_table
    # np.argmax/argmin return the first flat index, which is lexicographic
    # in (row, column) order
    flat = int(np.argmax(table) if direction == "maximize" else np.argmin(table))
    i0, i1 = divmod(flat, spec.n_internal)
    return OptimalControl(
        m0_star=i0 + 2,
        m1_star=i1 + 2,
        value=float(table[i0, i1]),
        direction=direction,
        c_table=table,
    )


def _simplex_rows(rng: np.random.Generator, rows: int, n: int) -> np.ndarray:
    """Uniform draws from the probability simplex (flat Dirichlet), one per row."""
    x = rng.standard_exponential((rows, n))
    sums = x.sum(axis=1)
    while True:
        bad = sums == 0.0
        if not bad.any():
            break
        x[bad] = rng.standard_exponential((int(bad.sum()), n))
        sums = x.sum(axis=1)
    return x / sums[:, None]


def refute_with_random_strategies(
    spec: ChainSpec,
    control: OptimalControl,
    samples: int,
    seed: int,
    tolerance: float = DOMINANCE_TOL,
) -> RefutationReport:
    """Try to beat a claimed optimum with random strategies.

    Draws ``samples`` independent strategy pairs uniformly from the
    simplices (alpha0 for all samples first, then alpha1), evaluates the
    long-run income for every pair in a vectorized single pass, and
    reports anything beyond ``control.value`` by more than ``tolerance``.
    Deterministic for fixed (spec, control, samples, seed).
    """
    if samples < 0:
        raise ValueError(f"samples must be >= 0, got {samples}")
    if samples == 0:
        return RefutationReport(
            samples=0, seed=seed, tolerance=tolerance,
            best_observed=None, gap=None, violations=0,
        )
    analysis = analyze_chain(spec)
    rng = np.random.default_rng(seed)
    n = spec.n_internal
    alpha0 = _simplex_rows(rng, samples, n)
    alpha1 = _simplex_rows(rng, samples, n)

    g0 = spec.d0 + analysis.r
    g1 = spec.d1 + analysis.r
    to0 = alpha1 @ analysis.b[:, 0]
    to1 = alpha0 @ analysis.b[:, 1]
    values = ((alpha0 @ g0) * to0 + (alpha1 @ g1) * to1) / (to0 + to1)

    if control.direction == "maximize":
        best = float(values.max())
        violations = int((values > control.value + tolerance).sum())
        gap = control.value - best
    else:
        best = float(values.min())
        violations = int((values < control.value - tolerance).sum())
        gap = best - control.value
    return RefutationReport(
        samples=samples, seed=seed, tolerance=tolerance,
        best_observed=best, gap=gap, violations=violations,
    )
