"""The fan-of-lines problem and the canned studies built on it."""
from __future__ import annotations

import numpy as np
import pytest

from memproj import (
    Cyclic,
    Memory,
    Policy,
    StoppingRule,
    ToyConfig,
    build_banded_forward,
    concentration_step,
    distance,
    make_toy_problem,
    run,
    run_preset,
    toy_directions,
)


class TestProblemGeneration:
    def test_last_direction_is_the_known_one(self):
        sets, _, _ = make_toy_problem(ToyConfig(9, 0.05))
        # angle of line 9 is pi: direction (-r, 0, 1) up to float trig
        np.testing.assert_allclose(
            sets[8].direction, [-0.05, 0.0, 1.0], atol=1e-15
        )

    def test_directions_match_the_trig_formula(self):
        n, r = 9, 0.05
        dirs = toy_directions(n, r)
        for j in range(1, n + 1):
            angle = j * np.pi / n
            np.testing.assert_array_equal(
                dirs[j - 1], [r * np.cos(angle), r * np.sin(angle), 1.0]
            )

    def test_start_point(self):
        _, x0, _ = make_toy_problem(ToyConfig(9, 0.05))
        np.testing.assert_array_equal(
            x0, [np.cos(np.pi / 9), np.sin(np.pi / 9), 1.0]
        )

    def test_solution_lies_on_every_line(self):
        sets, _, solution = make_toy_problem(ToyConfig(9, 0.05))
        np.testing.assert_array_equal(solution, np.zeros(3))
        for s in sets:
            assert distance(solution, s) == 0.0

    @pytest.mark.parametrize("n,r", [(2, 0.5), (5, 0.1), (9, 0.05), (17, 1.3)])
    def test_direction_shape_invariants(self, n, r):
        dirs = toy_directions(n, r)
        assert np.all(dirs[:, 2] == 1.0)
        xy = np.hypot(dirs[:, 0], dirs[:, 1])
        np.testing.assert_allclose(xy, r, atol=1e-15, rtol=0)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ToyConfig(1, 0.05)
        with pytest.raises(ValueError):
            ToyConfig(9, 0.0)
        with pytest.raises(ValueError):
            ToyConfig(9, -1.0)

    def test_numerically_parallel_lines_rejected(self):
        # at tiny r the lines cannot be told apart in double precision
        with pytest.raises(ValueError, match="parallel"):
            make_toy_problem(ToyConfig(9, 1e-8))

    def test_start_point_is_on_no_line(self):
        sets, x0, _ = make_toy_problem(ToyConfig(9, 0.05))
        assert all(distance(x0, s) > 1e-3 for s in sets)


class TestMemoryEqualsCyclicWithTrivialBand:
    def test_iterates_match_bitwise(self):
        sets, x0, sol = make_toy_problem(ToyConfig(9, 0.05))
        pam = Memory(build_banded_forward(9, 1), Policy("min", 0.01), seed=2)
        t_pam = run(sets, pam, x0, StoppingRule.exact_budget(101),
                    known_point=sol, store_iterates=True)
        t_mcp = run(sets, Cyclic(9), sets[0].project(x0),
                    StoppingRule.exact_budget(101), known_point=sol,
                    store_iterates=True)
        assert np.array_equal(t_pam.set_indices, t_mcp.set_indices)
        assert np.array_equal(t_pam.iterates[1:], t_mcp.iterates[1:])
        assert np.array_equal(t_mcp.iterates[0], t_pam.iterates[1])


class TestConcentration:
    def test_pure_cycle_concentrates_immediately(self):
        idx = np.tile(np.arange(4), 30)
        assert concentration_step(idx, 4) == 0

    def test_spread_then_cycle(self):
        rng = np.random.default_rng(0)
        explore = rng.integers(6, size=200)
        cycle = np.tile(np.arange(6), 200)
        t = concentration_step(np.concatenate([explore, cycle]), 6)
        assert 200 < t < 700

    def test_trivial_sequences(self):
        assert concentration_step([3], 5) == 0
        assert concentration_step([], 5) == 0


class TestPresets:
    def test_unknown_preset_rejected(self):
        with pytest.raises(ValueError, match="unknown preset"):
            run_preset("nonsense", seeds=[0])

    def test_empty_seed_list_rejected(self):
        with pytest.raises(ValueError, match="seed"):
            run_preset("benchmark", seeds=[])

    def test_benchmark_structure(self):
        rep = run_preset("benchmark", seeds=range(3), iterations=60)
        assert [m.label for m in rep.methods] == ["mcp", "mrp", "pam"]
        for m in rep.methods:
            assert len(m.traces) == 3
            for t in m.traces:
                assert t.n_projections == 60
                assert t.transition_counts().sum() == 59

    def test_benchmark_mcp_frequencies_sit_on_the_cycle(self):
        rep = run_preset("benchmark", seeds=[0], iterations=90)
        counts = rep.method("mcp").frequency_matrices()[0]
        cycle = np.zeros_like(counts, dtype=bool)
        for m in range(9):
            cycle[m, (m + 1) % 9] = True
        assert counts[~cycle].sum() == 0
        assert counts[cycle].sum() == 89

    def test_summary_statistics_shape(self):
        rep = run_preset("benchmark", seeds=range(4), iterations=45)
        s = rep.summary()
        assert s["iterations"] == 45
        assert set(s["methods"]) == {"mcp", "mrp", "pam"}
        block = s["methods"]["pam"]["residual_at_budget"]
        assert len(block["per_seed"]) == 4
        assert block["min"] <= block["median"] <= block["max"]
        assert "concentration_step" in s["methods"]["pam"]

    def test_sparse_forward_label_follows_omega(self):
        rep = run_preset("sparse_forward", seeds=[0], iterations=30, omega=4)
        assert [m.label for m in rep.methods] == ["mcp", "pam_omega4"]

    def test_bandwidth_sweep_lineup_for_nine_sets(self):
        rep = run_preset("bandwidth_sweep", seeds=[0], iterations=30)
        labels = [m.label for m in rep.methods]
        assert labels == ["mcp", "mrp", "pam_omega2", "pam_omega4", "pam_omega8"]

    def test_default_budgets(self):
        rep = run_preset("benchmark", seeds=[0])
        assert rep.iterations == 315
        rep = run_preset("sparse_forward", seeds=[0], omega=2)
        assert rep.iterations == 432

    def test_scaling_small_shows_underperformance_for_some_seed(self):
        rep = run_preset("scaling_small", seeds=range(20))
        mrp_median = np.median(rep.method("mrp").residuals_at_budget())
        pam = rep.method("pam").residuals_at_budget()
        assert np.any(pam > mrp_median)

    def test_scaling_large_tracks_or_beats_mrp(self):
        rep = run_preset("scaling_large", seeds=range(10))
        mrp_median = np.median(rep.method("mrp").residuals_at_budget())
        pam_median = np.median(rep.method("pam").residuals_at_budget())
        assert pam_median <= mrp_median

    def test_method_lookup(self):
        rep = run_preset("benchmark", seeds=[0], iterations=20)
        assert rep.method("mcp").label == "mcp"
        with pytest.raises(KeyError):
            rep.method("missing")
