"""Step-by-step simulation of the controlled process.

Conventions, shared by `simulate` and `sample_trajectory` so that both
consume the random stream identically:

* The process starts at the smallest internal label. The warm-up segment
  (start to first boundary hit) is excluded from all accounting.
* A cycle runs from one boundary hit to the next. Its income is the
  transfer cost d_l of the chosen restart state, plus c_l once for every
  step spent in an internal state, the restart (arrival) state included,
  boundary states excluded.
* Next states are drawn by inverse CDF over ascending state labels
  (boundary 0, boundary 1, then internal labels); restart states by
  inverse CDF over ascending internal labels.
* Stream s of seed k uses PCG64 seeded with SeedSequence(k, spawn_key=(s,))
  (64-bit seedable, period 2**128). `simulate` is stream 0; replication
  r of `simulate_replicated` is stream r, and results are combined in
  replication order, so every result is reproducible from (seed, stream).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import CycleLimitError
from .model import ChainSpec, Strategy

DEFAULT_SEGMENT_LIMIT = 10**9

FREE_MOVE = "free_move"
ABSORPTION = "absorption"
TRANSFER = "transfer"

_BLOCK = 8192


@dataclass(frozen=True, slots=True)
class TrajectoryEvent:
    """One step of a sampled path.

    ``income_delta`` is the income recognized at this step: c_l for a free
    move to (or start at) internal state l, 0 for an absorption, and
    d_l + c_l for a transfer restarting at internal state l (the arrival
    step counts as time spent in l).
    """

    step: int
    state: int
    event_kind: str
    income_delta: float


@dataclass(frozen=True)
class SimulationStats:
    """Aggregates over completed cycles; the warm-up segment is excluded.

    ``boundary_counts[j]`` counts cycles that started at boundary state j,
    so the two entries sum to ``cycles``. ``i_hat`` is total_income /
    cycles exactly; ``std_error`` is the sample standard error of the
    per-cycle incomes (0.0 when cycles == 1).
    """

    cycles: int
    total_income: float
    i_hat: float
    std_error: float
    boundary_counts: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "cycles": self.cycles,
            "total_income": self.total_income,
            "i_hat": self.i_hat,
            "std_error": self.std_error,
            "boundary_counts": list(self.boundary_counts),
        }


def _stream_rng(seed: int, stream: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def _uniform_stream(rng: np.random.Generator):
    """Sequential U[0,1) draws, generated in blocks for speed."""
    buf = rng.random(_BLOCK)
    pos = 0

    def next_u() -> float:
        nonlocal buf, pos
        if pos == _BLOCK:
            buf = rng.random(_BLOCK)
            pos = 0
        u = buf[pos]
        pos += 1
        return u

    return next_u


def _cumulative_rows(spec: ChainSpec) -> list[list[float]]:
    """Per internal state, cumulative probabilities over ascending labels
    [boundary 0, boundary 1, internal 2..N]; top forced to exactly 1."""
    full = np.cumsum(np.hstack([spec.p01, spec.p00]), axis=1)
    rows = [row.tolist() for row in full]
    for row in rows:
        row[-1] = 1.0
    return rows


def _cumulative_alpha(strategy: Strategy) -> list[list[float]]:
    rows = [np.cumsum(strategy.alpha0).tolist(), np.cumsum(strategy.alpha1).tolist()]
    for row in rows:
        row[-1] = 1.0
    return rows


def _pick(cum_row: list[float], u: float) -> int:
    """Inverse CDF: first index whose cumulative probability exceeds u."""
    i = bisect_right(cum_row, u)
    return i if i < len(cum_row) else len(cum_row) - 1


class _Welford:
    """Streaming mean and scatter of per-cycle incomes."""

    __slots__ = ("count", "mean", "m2")

    def __init__(self) -> None:
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add(self, value: float) -> None:
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)

    def merge(self, other: "_Welford") -> None:
        if other.count == 0:
            return
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean, other.m2
            return
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / total
        self.m2 += other.m2 + delta * delta * self.count * other.count / total
        self.count = total

    def std_error(self) -> float:
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.count - 1) / self.count)


def _run_stream(
    spec: ChainSpec,
    strategy: Strategy,
    cycles: int,
    seed: int,
    stream: int,
    segment_limit: int,
) -> tuple[_Welford, float, list[int]]:
    """One independent replication; returns (per-cycle stats, total, counts)."""
    next_u = _uniform_stream(_stream_rng(seed, stream))
    full_cum = _cumulative_rows(spec)
    alpha_cum = _cumulative_alpha(strategy)
    c = spec.c.tolist()
    d = [spec.d0.tolist(), spec.d1.tolist()]

    # warm-up: free evolution from the smallest internal label to the first
    # boundary hit, income discarded
    state = 0
    steps = 1
    while True:
        idx = _pick(full_cum[state], next_u())
        if idx < 2:
            boundary = idx
            break
        state = idx - 2
        steps += 1
        if steps > segment_limit:
            raise CycleLimitError(
                f"warm-up segment exceeded {segment_limit} steps without absorption"
            )

    counts = [0, 0]
    total = 0.0
    welford = _Welford()
    for _ in range(cycles):
        counts[boundary] += 1
        restart = _pick(alpha_cum[boundary], next_u())
        income = d[boundary][restart] + c[restart]
        state = restart
        steps = 1
        while True:
            idx = _pick(full_cum[state], next_u())
            if idx < 2:
                boundary = idx
                break
            state = idx - 2
            income += c[state]
            steps += 1
            if steps > segment_limit:
                raise CycleLimitError(
                    f"free-evolution segment exceeded {segment_limit} steps "
                    "without absorption"
                )
        total += income
        welford.add(income)
    return welford, total, counts


def simulate(
    spec: ChainSpec,
    strategy: Strategy,
    cycles: int,
    seed: int,
    *,
    segment_limit: int = DEFAULT_SEGMENT_LIMIT,
) -> SimulationStats:
    """Simulate exactly ``cycles`` boundary-to-boundary cycles (stream 0)."""
    if cycles < 1:
        raise ValueError(f"cycles must be >= 1, got {cycles}")
    if segment_limit < 1:
        raise ValueError(f"segment_limit must be >= 1, got {segment_limit}")
    welford, total, counts = _run_stream(spec, strategy, cycles, seed, 0, segment_limit)
    return SimulationStats(
        cycles=welford.count,
        total_income=total,
        i_hat=total / welford.count,
        std_error=welford.std_error(),
        boundary_counts=(counts[0], counts[1]),
    )


def simulate_replicated(
    spec: ChainSpec,
    strategy: Strategy,
    cycles: int,
    seed: int,
    replications: int = 1,
    *,
    segment_limit: int = DEFAULT_SEGMENT_LIMIT,
) -> SimulationStats:
    """Run ``replications`` independent streams of ``cycles`` each and pool.

    Stream r uses the (seed, r) derivation, and partial results are merged
    in replication order, so the outcome is deterministic and stream 0
    alone reproduces `simulate`.
    """
    if cycles < 1:
        raise ValueError(f"cycles must be >= 1, got {cycles}")
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications}")
    if segment_limit < 1:
        raise ValueError(f"segment_limit must be >= 1, got {segment_limit}")
    pooled = _Welford()
    total = 0.0
    counts = [0, 0]
    for stream in range(replications):
        welford, sub_total, sub_counts = _run_stream(
            spec, strategy, cycles, seed, stream, segment_limit
        )
        pooled.merge(welford)
        total += sub_total
        counts[0] += sub_counts[0]
        counts[1] += sub_counts[1]
    return SimulationStats(
        cycles=pooled.count,
        total_income=total,
        i_hat=total / pooled.count,
        std_error=pooled.std_error(),
        boundary_counts=(counts[0], counts[1]),
    )


def sample_trajectory(
    spec: ChainSpec,
    strategy: Strategy,
    max_steps: int,
    seed: int,
) -> list[TrajectoryEvent]:
    """Record ``max_steps`` raw steps of the controlled process (stream 0).

    Step 0 is the start at the smallest internal label. The draw sequence
    matches `simulate` with the same seed, so summing income_delta over the
    events of each completed cycle (first transfer after an absorption up
    to the next absorption) reproduces the per-cycle incomes exactly.
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    next_u = _uniform_stream(_stream_rng(seed, 0))
    full_cum = _cumulative_rows(spec)
    alpha_cum = _cumulative_alpha(strategy)
    c = spec.c.tolist()
    d = [spec.d0.tolist(), spec.d1.tolist()]

    events = [TrajectoryEvent(step=0, state=2, event_kind=FREE_MOVE, income_delta=c[0])]
    state = 0
    boundary: int | None = None
    for step in range(1, max_steps):
        if boundary is None:
            idx = _pick(full_cum[state], next_u())
            if idx < 2:
                boundary = idx
                events.append(
                    TrajectoryEvent(step=step, state=idx, event_kind=ABSORPTION, income_delta=0.0)
                )
            else:
                state = idx - 2
                events.append(
                    TrajectoryEvent(
                        step=step, state=state + 2, event_kind=FREE_MOVE, income_delta=c[state]
                    )
                )
        else:
            restart = _pick(alpha_cum[boundary], next_u())
            events.append(
                TrajectoryEvent(
                    step=step,
                    state=restart + 2,
                    event_kind=TRANSFER,
                    income_delta=d[boundary][restart] + c[restart],
                )
            )
            state = restart
            boundary = None
    return events
