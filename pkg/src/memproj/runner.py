"""Iteration engine: project, record, stop.

A run applies ``x <- project(x, sets[j])`` with ``j`` supplied by a
strategy, records one row per projection performed, and halts when a
stopping criterion fires.  Cost is counted in projections; for the memory
strategy the mandatory initial projection onto its starting set is
projection number 0 of the run.

With ``debug_asserts`` enabled and a known feasible point supplied, every
step is checked against the two error-reduction inequalities that all
metric projections satisfy, and the run aborts with a diagnostic when a
violation exceeds the floating-point slack.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .memory import is_admissible
from .strategies import Strategy, transition_counts

__all__ = [
    "NumericError",
    "FejerViolation",
    "StoppingRule",
    "RunTrace",
    "run",
    "residual_series",
    "STATUS_STEP",
    "STATUS_RESIDUAL",
    "STATUS_MAX_ITERATIONS",
]

STATUS_STEP = "converged_by_step"
STATUS_RESIDUAL = "converged_by_residual"
STATUS_MAX_ITERATIONS = "max_iterations"

# smallest positive double: a step tolerance that only exact zeros beat,
# used for fixed-budget runs
_NEVER = 5e-324


class NumericError(RuntimeError):
    """An iterate became non-finite (overflow or NaN)."""


class FejerViolation(RuntimeError):
    """A projection step failed the error-reduction check in debug mode."""


@dataclass(frozen=True)
class StoppingRule:
    """When to halt a run.

    ``step_window`` is the number of trailing projections whose steps must
    all be shorter than ``step_tolerance`` for the step criterion to fire;
    ``None`` means twice the number of sets, a full-recurrence window, so a
    run cannot stop merely because one transition stalled.  The residual
    criterion needs a known feasible point and fires when the distance to
    it drops below ``residual_tolerance``.
    """

    max_iterations: int
    step_window: int | None = None
    step_tolerance: float = 1e-12
    residual_tolerance: float | None = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.step_window is not None and self.step_window < 1:
            raise ValueError("step_window must be at least 1")
        if not self.step_tolerance > 0.0:
            raise ValueError("step_tolerance must be > 0")
        if self.residual_tolerance is not None and not self.residual_tolerance > 0.0:
            raise ValueError("residual_tolerance must be > 0")

    @classmethod
    def exact_budget(cls, n_projections: int) -> "StoppingRule":
        """Run for exactly ``n_projections`` unless steps hit exact zero."""
        return cls(max_iterations=n_projections, step_tolerance=_NEVER)


@dataclass
class RunTrace:
    """Everything recorded during one run.

    ``set_indices[k]``, ``step_lengths[k]`` and ``residuals[k]`` describe
    projection k (0-based); ``residuals`` is present only when a known
    point was supplied.  ``iterates`` (optional) holds the start point
    followed by the iterate after each projection, so it has one more row
    than there were projections.  For the memory strategy ``final_matrix``
    is the memory after its last update and ``matrix_snapshots`` holds
    (projection_count, matrix) pairs taken every snapshot interval.
    """

    set_indices: np.ndarray
    step_lengths: np.ndarray
    status: str
    n_sets: int
    x0: np.ndarray
    x_final: np.ndarray
    residuals: np.ndarray | None = None
    known_point: np.ndarray | None = None
    iterates: np.ndarray | None = None
    final_matrix: np.ndarray | None = None
    matrix_snapshots: list = field(default_factory=list)

    @property
    def n_projections(self) -> int:
        return int(self.set_indices.shape[0])

    def transition_counts(self) -> np.ndarray:
        return transition_counts(self.set_indices, self.n_sets)


def _check_fejer(x_prev, x_next, z, step, k):
    d_prev = float(np.linalg.norm(x_prev - z))
    d_next = float(np.linalg.norm(x_next - z))
    if d_next * d_next > d_prev * d_prev - step * step + 1e-9:
        raise FejerViolation(
            f"projection {k}: squared distance to the reference point fell "
            f"by less than the squared step ({d_prev:.17g} -> {d_next:.17g}, "
            f"step {step:.17g}); is the reference point feasible?"
        )
    if d_next > d_prev + 1e-12:
        raise FejerViolation(
            f"projection {k}: distance to the reference point increased "
            f"({d_prev:.17g} -> {d_next:.17g}); is the reference point feasible?"
        )


def run(
    sets,
    strategy: Strategy,
    x0,
    stop: StoppingRule,
    known_point=None,
    *,
    debug_asserts: bool = False,
    store_iterates: bool = False,
    matrix_snapshot_interval: int | None = None,
) -> RunTrace:
    """Drive ``strategy`` over ``sets`` from ``x0`` until ``stop`` fires.

    All sets must share the dimension of ``x0`` and there must be at least
    two of them.  For the memory strategy the start point is first moved
    into the strategy's starting set (that projection is part of the run
    and of its cost), and the strategy's matrix is validated here.
    """
    sets = list(sets)
    n = len(sets)
    if n < 2:
        raise ValueError("need at least 2 sets")
    x = np.array(x0, dtype=float)
    if x.ndim != 1:
        raise ValueError("x0 must be a 1-D vector")
    d = x.shape[0]
    for i, s in enumerate(sets):
        if s.dim != d:
            raise ValueError(f"set {i} has dimension {s.dim}, expected {d}")
    if not np.all(np.isfinite(x)):
        raise ValueError("x0 must have finite entries")
    if strategy.n_sets != n:
        raise ValueError(
            f"strategy was built for {strategy.n_sets} sets, got {n}"
        )
    z = None
    if known_point is not None:
        z = np.array(known_point, dtype=float)
        if z.shape != (d,):
            raise ValueError("known_point dimension mismatch")
    memory_matrix = getattr(strategy, "matrix", None)
    if memory_matrix is not None:
        if memory_matrix.n != n:
            raise ValueError("memory matrix size does not match the number of sets")
        if not is_admissible(memory_matrix):
            raise ValueError("memory matrix is not admissible")
    window = stop.step_window if stop.step_window is not None else 2 * n
    if window < n:
        raise ValueError("step_window must cover at least one full sweep (>= N)")

    indices: list[int] = []
    steps: list[float] = []
    residuals: list[float] | None = [] if z is not None else None
    iterates = [x.copy()] if store_iterates else None
    snapshots: list = []
    x_start = x.copy()
    status = STATUS_MAX_ITERATIONS

    def record(j: int, x_prev: np.ndarray, x_next: np.ndarray, step: float) -> float:
        if not np.all(np.isfinite(x_next)):
            raise NumericError(f"non-finite iterate after projection {len(indices)}")
        if debug_asserts and z is not None:
            _check_fejer(x_prev, x_next, z, step, len(indices))
        indices.append(j)
        steps.append(step)
        res = np.nan
        if z is not None:
            res = float(np.linalg.norm(x_next - z))
            residuals.append(res)
        if iterates is not None:
            iterates.append(x_next.copy())
        return res

    def should_stop(res: float) -> str | None:
        if (
            z is not None
            and stop.residual_tolerance is not None
            and res < stop.residual_tolerance
        ):
            return STATUS_RESIDUAL
        if len(steps) >= window and max(steps[-window:]) < stop.step_tolerance:
            return STATUS_STEP
        return None

    if strategy.needs_start_projection:
        j0 = int(getattr(strategy, "current_index", 0))
        x_next = sets[j0].project(x)
        res = record(j0, x, x_next, float(np.linalg.norm(x_next - x)))
        x = x_next
        verdict = should_stop(res)
        if verdict is not None:
            status = verdict

    last_step = None
    while status == STATUS_MAX_ITERATIONS and len(indices) < stop.max_iterations:
        j = strategy.next_index(last_step)
        x_next = sets[j].project(x)
        step = float(np.linalg.norm(x_next - x))
        res = record(j, x, x_next, step)
        x = x_next
        last_step = step
        if (
            matrix_snapshot_interval is not None
            and memory_matrix is not None
            and len(indices) % matrix_snapshot_interval == 0
        ):
            snapshots.append((len(indices), strategy.matrix.to_array()))
        verdict = should_stop(res)
        if verdict is not None:
            status = verdict

    strategy.finish(last_step)
    final_matrix = None
    if memory_matrix is not None:
        final_matrix = strategy.matrix.to_array()

    return RunTrace(
        set_indices=np.asarray(indices, dtype=int),
        step_lengths=np.asarray(steps, dtype=float),
        status=status,
        n_sets=n,
        x0=x_start,
        x_final=x,
        residuals=None if residuals is None else np.asarray(residuals, dtype=float),
        known_point=z,
        iterates=None if iterates is None else np.asarray(iterates, dtype=float),
        final_matrix=final_matrix,
        matrix_snapshots=snapshots,
    )


def residual_series(trace: RunTrace, z) -> np.ndarray:
    """Distances to ``z`` along the run: entry i is after i projections.

    Works from stored iterates when available, otherwise from the residual
    column when ``z`` equals the run's known point.
    """
    zv = np.asarray(z, dtype=float)
    if zv.shape != trace.x0.shape:
        raise ValueError("z dimension mismatch")
    if trace.iterates is not None:
        # row by row with the same norm call the recorder used, so the
        # series matches stored residuals bit for bit
        return np.array([float(np.linalg.norm(row - zv)) for row in trace.iterates])
    if trace.residuals is not None and trace.known_point is not None and np.array_equal(
        zv, trace.known_point
    ):
        first = float(np.linalg.norm(trace.x0 - zv))
        return np.concatenate([[first], trace.residuals])
    raise ValueError(
        "iterates were not stored; rerun with store_iterates=True or pass "
        "the run's known point"
    )
