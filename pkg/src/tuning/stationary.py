"""Long-run average income of the controlled process.

Watching the process only at boundary hits gives a two-state chain on
{0, 1} whose transition row i mixes the absorption probabilities by the
intervention distribution used at boundary i:

    p_tilde[i, j] = sum_l alpha_i[l] * b[l, j]

Its stationary distribution is explicit,

    pi = (p_tilde[1, 0], p_tilde[0, 1]) / (p_tilde[0, 1] + p_tilde[1, 0]),

and the expected income of one boundary-to-boundary cycle started at
boundary i is

    rho[i] = sum_l alpha_i[l] * (d_i[l] + r[l]).

The long-run average income per cycle ("indicator") is pi @ rho. Three
algebraically equal routes are kept as independent code paths:

* ``embedded``    pi @ rho through the two-state chain (default, O(n));
* ``ratio``       single-sum ratio obtained by substituting pi;
* ``fractional``  double sums over the degenerate-policy tables (O(n^2)).

The tables make the deterministic policies explicit: for the strategy
that always restarts at label m0 from boundary 0 and m1 from boundary 1,

    a_table[m0, m1] = (d0[m0] + r[m0]) * b[m1, 0] + (d1[m1] + r[m1]) * b[m0, 1]
    b_table[m0, m1] = b[m0, 1] + b[m1, 0]
    c_table = a_table / b_table

and c_table[m0, m1] equals indicator(degenerate(m0, m1)). Table indices
are 0-based; add 2 for state labels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .absorption import AbsorptionAnalysis
from .errors import DegenerateChainError, PositivityError
from .model import ChainSpec, Strategy

DEGENERACY_TOL = 1e-14

ROUTES = ("embedded", "ratio", "fractional")


@dataclass(frozen=True, eq=False)
class EmbeddedChain:
    """Boundary-hit chain: 2x2 transitions, stationary law, cycle incomes."""

    p_tilde: np.ndarray
    pi: np.ndarray
    rho: np.ndarray


@dataclass(frozen=True, eq=False)
class CostCoefficients:
    """Degenerate-policy tables a, b, and their ratio c, each (n, n)."""

    a_table: np.ndarray
    b_table: np.ndarray
    c_table: np.ndarray


def _check_lengths(strategy: Strategy, n: int) -> None:
    if strategy.alpha0.shape != (n,) or strategy.alpha1.shape != (n,):
        raise ValueError(
            f"strategy dimensions {strategy.alpha0.shape}, {strategy.alpha1.shape} "
            f"do not match {n} internal states"
        )


def embedded_transition(strategy: Strategy, analysis: AbsorptionAnalysis) -> np.ndarray:
    """2x2 transition matrix of the boundary-hit chain."""
    _check_lengths(strategy, analysis.b.shape[0])
    return np.vstack([strategy.alpha0 @ analysis.b, strategy.alpha1 @ analysis.b])


def stationary_distribution(p_tilde: np.ndarray) -> np.ndarray:
    """Stationary law of a 2x2 stochastic matrix, in closed form.

    Raises DegenerateChainError when the off-diagonal mass
    p_tilde[0, 1] + p_tilde[1, 0] is at or below 1e-14.
    """
    p_tilde = np.asarray(p_tilde, dtype=float)
    off = float(p_tilde[0, 1] + p_tilde[1, 0])
    if off <= DEGENERACY_TOL:
        raise DegenerateChainError(
            f"boundary chain has off-diagonal mass {off!r}, no unique stationary law"
        )
    return np.array([p_tilde[1, 0] / off, p_tilde[0, 1] / off])


def visit_income(strategy: Strategy, spec: ChainSpec, analysis: AbsorptionAnalysis) -> np.ndarray:
    """Expected income of one cycle started at boundary 0 and 1."""
    _check_lengths(strategy, spec.n_internal)
    return np.array(
        [
            float(strategy.alpha0 @ (spec.d0 + analysis.r)),
            float(strategy.alpha1 @ (spec.d1 + analysis.r)),
        ]
    )


def embedded_chain(strategy: Strategy, spec: ChainSpec, analysis: AbsorptionAnalysis) -> EmbeddedChain:
    """Bundle p_tilde, pi, and rho for one strategy."""
    p_tilde = embedded_transition(strategy, analysis)
    return EmbeddedChain(
        p_tilde=p_tilde,
        pi=stationary_distribution(p_tilde),
        rho=visit_income(strategy, spec, analysis),
    )


def _coefficient_tables(spec: ChainSpec, analysis: AbsorptionAnalysis) -> tuple[np.ndarray, np.ndarray]:
    g0 = spec.d0 + analysis.r
    g1 = spec.d1 + analysis.r
    b0 = analysis.b[:, 0]
    b1 = analysis.b[:, 1]
    a = np.outer(g0, b0) + np.outer(b1, g1)
    bt = np.add.outer(b1, b0)
    return a, bt


def cost_coefficients(spec: ChainSpec, analysis: AbsorptionAnalysis) -> CostCoefficients:
    """Build the degenerate-policy tables.

    Raises PositivityError if any b_table entry is not strictly positive,
    since the ratio c_table is undefined there.
    """
    a, bt = _coefficient_tables(spec, analysis)
    if (bt <= 0.0).any():
        i, j = map(int, np.argwhere(bt <= 0.0)[0])
        raise PositivityError(
            f"b_table entry for policy ({i + 2}, {j + 2}) is {float(bt[i, j])!r}, "
            "ratio table is undefined"
        )
    return CostCoefficients(a_table=a, b_table=bt, c_table=a / bt)


def indicator(
    strategy: Strategy,
    spec: ChainSpec,
    analysis: AbsorptionAnalysis,
    route: str = "embedded",
) -> float:
    """Long-run average income per cycle under one strategy.

    The three routes are algebraically identical; keeping them separate
    gives an internal cross-check (they must agree to near machine
    precision on any valid input). All raise DegenerateChainError when
    the boundary chain never switches sides.
    """
    _check_lengths(strategy, spec.n_internal)
    if route == "embedded":
        chain = embedded_chain(strategy, spec, analysis)
        return float(chain.pi @ chain.rho)
    if route == "ratio":
        to0 = float(strategy.alpha1 @ analysis.b[:, 0])
        to1 = float(strategy.alpha0 @ analysis.b[:, 1])
        off = to0 + to1
        if off <= DEGENERACY_TOL:
            raise DegenerateChainError(
                f"boundary chain has off-diagonal mass {off!r}, no unique stationary law"
            )
        rho0 = float(strategy.alpha0 @ (spec.d0 + analysis.r))
        rho1 = float(strategy.alpha1 @ (spec.d1 + analysis.r))
        return (rho0 * to0 + rho1 * to1) / off
    if route == "fractional":
        a, bt = _coefficient_tables(spec, analysis)
        weights = np.outer(strategy.alpha0, strategy.alpha1)
        den = float((bt * weights).sum())
        if den <= DEGENERACY_TOL:
            raise DegenerateChainError(
                f"boundary chain has off-diagonal mass {den!r}, no unique stationary law"
            )
        return float((a * weights).sum()) / den
    raise ValueError(f"unknown route {route!r}, expected one of {ROUTES}")
