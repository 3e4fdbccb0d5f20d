"""A small feasibility problem with a known answer, plus canned studies.

The problem is a fan of N lines through the origin in R^3 with directions
(r cos(j pi / N), r sin(j pi / N), 1) for j = 1..N.  The lines intersect
only at the origin, so the origin is the unique feasible point and the
residual of an iterate is simply its norm.  Small r makes neighbouring
lines nearly parallel, which is exactly the regime where the order of
projections matters a lot.

Presets bundle the strategy line-ups and iteration budgets used in the
canned comparisons; each runs every method over a list of seeds and
collects residual series, transition-frequency matrices and summary
statistics.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .memory import Policy, build_banded_forward, build_dense
from .runner import StoppingRule, run
from .sets import LineThroughOrigin
from .strategies import Cyclic, Memory, RandomizedCycles

__all__ = [
    "ToyConfig",
    "make_toy_problem",
    "toy_directions",
    "PRESETS",
    "MethodResult",
    "PresetReport",
    "run_preset",
    "concentration_step",
]


@dataclass(frozen=True)
class ToyConfig:
    """Fan-of-lines problem parameters: N lines, radius parameter r > 0."""

    n_sets: int = 9
    r: float = 0.05

    def __post_init__(self):
        if self.n_sets < 2:
            raise ValueError("need at least 2 lines")
        if not (np.isfinite(self.r) and self.r > 0.0):
            raise ValueError("r must be finite and > 0")


def toy_directions(n_sets: int, r: float) -> np.ndarray:
    """Direction vectors of the N lines, one per row."""
    j = np.arange(1, n_sets + 1)
    angles = j * np.pi / n_sets
    return np.column_stack([r * np.cos(angles), r * np.sin(angles), np.ones(n_sets)])


def make_toy_problem(cfg: ToyConfig = ToyConfig()):
    """Build the fan of lines; returns (sets, x0, solution).

    The start point is (cos(pi/N), sin(pi/N), 1) and the solution is the
    origin.  The construction verifies that distinct lines only meet at the
    origin (no two directions are parallel).
    """
    dirs = toy_directions(cfg.n_sets, cfg.r)
    norms = np.linalg.norm(dirs, axis=1)
    for a in range(cfg.n_sets):
        for b in range(a + 1, cfg.n_sets):
            cosang = abs(dirs[a] @ dirs[b]) / (norms[a] * norms[b])
            if cosang >= 1.0 - 1e-12:
                raise ValueError(
                    f"lines {a} and {b} are parallel; their intersection is "
                    "not a single point"
                )
    sets = [LineThroughOrigin(dirs[i]) for i in range(cfg.n_sets)]
    x0 = np.array([np.cos(np.pi / cfg.n_sets), np.sin(np.pi / cfg.n_sets), 1.0])
    solution = np.zeros(3)
    return sets, x0, solution


@dataclass
class MethodResult:
    """All runs of one method within a preset."""

    label: str
    traces: list
    seeds: list

    def residuals_at_budget(self) -> np.ndarray:
        return np.array([t.residuals[-1] for t in self.traces])

    def frequency_matrices(self) -> list:
        return [t.transition_counts() for t in self.traces]


@dataclass
class PresetReport:
    """Outcome of one preset: per-method runs plus summary statistics."""

    preset: str
    config: ToyConfig
    iterations: int
    seeds: list
    params: dict
    methods: list

    def method(self, label: str) -> MethodResult:
        for m in self.methods:
            if m.label == label:
                return m
        raise KeyError(label)

    def summary(self) -> dict:
        out = {
            "preset": self.preset,
            "n_sets": self.config.n_sets,
            "r": self.config.r,
            "iterations": self.iterations,
            "seeds": list(self.seeds),
            "params": dict(self.params),
            "methods": {},
        }
        for m in self.methods:
            res = m.residuals_at_budget()
            entry = {
                "residual_at_budget": {
                    "per_seed": [float(v) for v in res],
                    "median": float(np.median(res)),
                    "min": float(res.min()),
                    "max": float(res.max()),
                },
                "status": [t.status for t in m.traces],
            }
            if m.label.startswith("pam"):
                conc = [
                    concentration_step(t.set_indices, t.n_sets) for t in m.traces
                ]
                entry["concentration_step"] = {
                    "per_seed": conc,
                    "median": float(np.median([c for c in conc])),
                }
            out["methods"][m.label] = entry
        return out


def concentration_step(indices, n_sets: int, threshold: float = 0.75) -> int:
    """Transitions needed before the top-N cells keep ``threshold`` of the
    cumulative transition mass for the rest of the run.

    A proxy for the length of the learning phase: while the method still
    explores, mass spreads over many cells and the top-N share dips; once
    it locks onto a profitable route the share climbs and stays up.  The
    result equals the total transition count when the share never settles
    above the threshold within the trace.
    """
    idx = np.asarray(indices, dtype=int)
    total = idx.size - 1
    if total < 1:
        return 0
    counts = np.zeros(n_sets * n_sets, dtype=np.int64)
    shares = np.empty(total)
    for t in range(total):
        counts[idx[t] * n_sets + idx[t + 1]] += 1
        top = np.partition(counts, counts.size - n_sets)[-n_sets:]
        shares[t] = top.sum() / (t + 1)
    below = np.flatnonzero(shares < threshold)
    if below.size == 0:
        return 0
    return int(below[-1]) + 1


PRESETS = (
    "benchmark",
    "scaling_large",
    "scaling_small",
    "sparse_forward",
    "bandwidth_sweep",
)

_DEFAULT_BUDGET = {
    "benchmark": 315,
    "scaling_large": 315,
    "scaling_small": 315,
    "sparse_forward": 432,
    "bandwidth_sweep": 315,
}


def _method_lineup(preset: str, n_sets: int, omega, beta: float):
    """(label, strategy factory seed -> Strategy) pairs for a preset."""
    policy = Policy("min", beta)

    def pam_dense(scale):
        return lambda seed: Memory(build_dense(n_sets, scale), policy, seed=seed)

    def pam_forward(w):
        return lambda seed: Memory(
            build_banded_forward(n_sets, w), policy, seed=seed
        )

    mcp = ("mcp", lambda seed: Cyclic(n_sets))
    mrp = ("mrp", lambda seed: RandomizedCycles(n_sets, seed=seed))

    if preset == "benchmark":
        return [mcp, mrp, ("pam", pam_dense(1.0))]
    if preset == "scaling_large":
        return [mrp, ("pam", pam_dense(1.0))]
    if preset == "scaling_small":
        return [mrp, ("pam", pam_dense(0.01))]
    if preset == "sparse_forward":
        w = 2 if omega is None else int(omega)
        return [mcp, (f"pam_omega{w}", pam_forward(w))]
    if preset == "bandwidth_sweep":
        quarter = max(1, round(n_sets / 4))
        half = max(1, round(n_sets / 2))
        full = n_sets - 1  # forward band of width N-1 admits every transition
        lineup = [mcp, mrp]
        for w in dict.fromkeys((quarter, half, full)):
            lineup.append((f"pam_omega{w}", pam_forward(w)))
        return lineup
    raise ValueError(f"unknown preset {preset!r}; choose one of {PRESETS}")


def run_preset(
    preset: str,
    config: ToyConfig = ToyConfig(),
    seeds=range(20),
    iterations: int | None = None,
    omega: int | None = None,
    beta: float = 0.01,
    store_iterates: bool = False,
) -> PresetReport:
    """Run one canned study over all seeds and collect the results.

    Every method runs once per seed with a fixed projection budget (the
    preset default unless ``iterations`` overrides it).  Deterministic
    methods simply repeat; keeping the loop uniform keeps the summary
    statistics comparable.
    """
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; choose one of {PRESETS}")
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ValueError("need at least one seed")
    budget = _DEFAULT_BUDGET[preset] if iterations is None else int(iterations)
    sets, x0, solution = make_toy_problem(config)
    rule = StoppingRule.exact_budget(budget)
    methods = []
    for label, factory in _method_lineup(preset, config.n_sets, omega, beta):
        traces = []
        for seed in seeds:
            trace = run(
                sets,
                factory(seed),
                x0,
                rule,
                known_point=solution,
                store_iterates=store_iterates,
            )
            traces.append(trace)
        methods.append(MethodResult(label=label, traces=traces, seeds=list(seeds)))
    params = {"beta": beta}
    if omega is not None:
        params["omega"] = int(omega)
    return PresetReport(
        preset=preset,
        config=config,
        iterations=budget,
        seeds=list(seeds),
        params=params,
        methods=methods,
    )
