"""Tests for the pyramid and the optimizer drivers."""

import json

import numpy as np
import pytest

from conftest import bits, random_instance
from max3sat_suite.core.data_structures import DataStructureManager, RunConfig
from max3sat_suite.core.errors import PyramidLevelError, RunConfigError
from max3sat_suite.core.instance import evaluate, fitness, make_rng, random_assignment
from max3sat_suite.core.mmst import Mmst
from max3sat_suite.search import pyramid as pyramid_module
from max3sat_suite.search.pyramid import (
    POLICIES,
    DriverPolicy,
    Pyramid,
    PyramidOptimizer,
    ipp_run,
    mocsm_mixed_run,
    mocsm_run,
    run,
)

ALGORITHMS = ("ipp", "mocsm", "mocsm-mixed")


class TestPyramid:
    def test_duplicate_rejected(self, e1):
        pyramid = Pyramid()
        assert pyramid.add_unique(0, Mmst.build(e1, bits("110101")))
        assert not pyramid.add_unique(0, Mmst.build(e1, bits("110101")))
        assert len(pyramid) == 1

    def test_duplicate_rejected_across_levels(self, e1):
        pyramid = Pyramid()
        pyramid.add_unique(0, Mmst.build(e1, bits("110101")))
        pyramid.add_unique(1, Mmst.build(e1, bits("010000")))
        assert not pyramid.add_unique(1, Mmst.build(e1, bits("110101")))
        assert not pyramid.add_unique(0, Mmst.build(e1, bits("010000")))

    def test_new_level_and_gap(self, e1):
        pyramid = Pyramid()
        assert pyramid.level_count == 0
        pyramid.add_unique(0, Mmst.build(e1, bits("110101")))
        pyramid.add_unique(1, Mmst.build(e1, bits("010000")))
        assert pyramid.level_count == 2
        with pytest.raises(PyramidLevelError):
            pyramid.add_unique(3, Mmst.build(e1, bits("111111")))
        with pytest.raises(PyramidLevelError):
            pyramid.add_unique(-1, Mmst.build(e1, bits("111111")))

    def test_rejected_duplicate_opens_no_level(self, e1):
        pyramid = Pyramid()
        pyramid.add_unique(0, Mmst.build(e1, bits("110101")))
        assert not pyramid.add_unique(1, Mmst.build(e1, bits("110101")))
        assert pyramid.level_count == 1

    def test_size_after_distinct_inserts(self, e1):
        pyramid = Pyramid()
        for i in range(20):
            x = np.array([(i >> k) & 1 for k in range(6)], dtype=np.uint8)
            pyramid.add_unique(i % 3 if i >= 3 else i, Mmst.build(e1, x))
        assert len(pyramid) == 20
        assert len(pyramid.members()) == 20

    def test_members_level_major(self, e1):
        pyramid = Pyramid()
        first, second, third = (Mmst.build(e1, bits(t)) for t in ("000000", "111111", "101010"))
        pyramid.add_unique(0, first)
        pyramid.add_unique(1, second)
        pyramid.add_unique(0, third)
        assert pyramid.members() == [first, third, second]

    def test_refresh_keeps_single_owner(self, e1):
        pyramid = Pyramid()
        a, b = Mmst.build(e1, bits("110101")), Mmst.build(e1, bits("110111"))
        pyramid.add_unique(0, a)
        pyramid.add_unique(0, b)
        old = a.key()
        a.flip(4)  # a now equals b
        pyramid.refresh(a, old)
        assert not pyramid.contains(bits("110101"))
        assert pyramid.contains(bits("110111"))
        assert pyramid.add_unique(0, Mmst.build(e1, bits("110101")))

    def test_shared_assignment_stays_blocked_until_last_holder_leaves(self, e1):
        pyramid = Pyramid()
        a, b = Mmst.build(e1, bits("110101")), Mmst.build(e1, bits("110111"))
        pyramid.add_unique(0, a)
        pyramid.add_unique(0, b)
        old = a.key()
        a.flip(4)
        pyramid.refresh(a, old)
        assert pyramid.holders(bits("110111")) == 2

        # b was inserted first and now moves away; a still holds 110111
        old = b.key()
        b.flip(0)
        pyramid.refresh(b, old)
        assert pyramid.holders(bits("110111")) == 1
        assert pyramid.contains(bits("110111"))
        assert not pyramid.add_unique(1, Mmst.build(e1, bits("110111")))
        assert len(pyramid) == 2

        old = a.key()
        a.flip(1)
        pyramid.refresh(a, old)
        assert not pyramid.contains(bits("110111"))
        assert pyramid.add_unique(1, Mmst.build(e1, bits("110111")))


def flip_limited(algorithm, seed=0, flip_limit=10_000, **kwargs):
    return RunConfig(algorithm=algorithm, seed=seed, flip_limit=flip_limit, **kwargs)


class TestDrivers:
    @pytest.mark.parametrize("algorithm", ALGORITHMS)
    def test_e1_solved_by_every_seed(self, e1, algorithm):
        for seed in range(30):
            result = run(e1, flip_limited(algorithm, seed, target=3))
            assert result.success
            assert result.best_fitness == 3
            assert result.flip_updates <= 10_000
            assert fitness(e1, result.best_assignment) == 3

    @pytest.mark.parametrize("algorithm", ALGORITHMS)
    def test_zero_budget_returns_initial_climber(self, algorithm):
        instance = random_instance(make_rng(3), 40, 40)
        result = run(instance, flip_limited(algorithm, seed=5, flip_limit=0))
        expected = random_assignment(instance.n, make_rng(5))
        assert np.array_equal(result.best_assignment, expected)
        assert result.best_fitness == fitness(instance, expected)
        assert result.flip_updates == 0
        assert result.full_evaluations == 1
        assert len(result.history) == 1

    @pytest.mark.parametrize("algorithm", ALGORITHMS)
    def test_zero_time_budget(self, e1, algorithm):
        result = run(e1, RunConfig(algorithm=algorithm, seed=1, time_limit_ms=0))
        assert result.best_fitness >= 0
        assert result.success == (result.best_fitness >= result.target)

    @pytest.mark.parametrize("algorithm", ALGORITHMS)
    def test_history_strictly_increasing(self, algorithm):
        rng = make_rng(6)
        for seed in range(5):
            instance = random_instance(rng, 30, 60)
            result = run(instance, flip_limited(algorithm, seed, flip_limit=20_000))
            fitnesses = [entry.fitness for entry in result.history]
            flips = [entry.flip_updates for entry in result.history]
            assert fitnesses == sorted(set(fitnesses))
            assert flips == sorted(flips)
            assert fitnesses[-1] == result.best_fitness <= instance.m
            assert result.success == (result.best_fitness >= result.target)
            assert evaluate(instance, result.best_assignment).fitness == result.best_fitness

    @pytest.mark.parametrize("algorithm", ALGORITHMS)
    def test_deterministic_under_flip_limit(self, algorithm):
        instance = random_instance(make_rng(7), 40, 40)
        first = DataStructureManager.run_result_to_dict(run(instance, flip_limited(algorithm, 11, flip_limit=5000)))
        second = DataStructureManager.run_result_to_dict(run(instance, flip_limited(algorithm, 11, flip_limit=5000)))
        first.pop("wall_ms")
        second.pop("wall_ms")
        assert first == second

    def test_result_json_round_trip(self, tmp_path):
        instance = random_instance(make_rng(10), 30, 30)
        result = run(instance, flip_limited("mocsm-mixed", seed=3, flip_limit=5000, archive_threshold=0.9))
        path = DataStructureManager.save_run_result(result, tmp_path / "runs" / "result.json")
        loaded = DataStructureManager.load_run_result(path)

        assert sorted(json.loads((tmp_path / "runs" / "result.json").read_text())) == sorted([
            "instance", "algorithm", "seed", "n", "m", "best_fitness", "best_assignment", "target",
            "success", "full_evaluations", "flip_updates", "wall_ms", "history",
        ])
        assert np.array_equal(loaded.best_assignment, result.best_assignment)
        assert loaded.best_assignment.dtype == np.uint8
        assert loaded.history == result.history
        assert loaded.archive == []
        assert DataStructureManager.run_result_to_dict(loaded) == DataStructureManager.run_result_to_dict(result)

    def test_named_runners_check_algorithm(self, e1):
        assert ipp_run(e1, flip_limited("ipp", target=3)).algorithm == "ipp"
        assert mocsm_run(e1, flip_limited("mocsm", target=3)).algorithm == "mocsm"
        assert mocsm_mixed_run(e1, flip_limited("mocsm-mixed", target=3)).algorithm == "mocsm-mixed"
        with pytest.raises(RunConfigError):
            ipp_run(e1, flip_limited("mocsm"))

    def test_stop_criterion_required(self):
        with pytest.raises(RunConfigError):
            RunConfig(algorithm="ipp")

    def test_degenerate_mocsm_equals_ipp(self):
        instance = random_instance(make_rng(8), 50, 50)
        undirected = DriverPolicy(
            member_directed=POLICIES["ipp"].member_directed,
            climber_directed=False,
            long_connection=POLICIES["mocsm"].long_connection,
        )
        config = flip_limited("mocsm", seed=4, flip_limit=20_000, long_connection_steps=0)
        degenerate = PyramidOptimizer(instance, config, policy=undirected).run()
        baseline = ipp_run(instance, flip_limited("ipp", seed=4, flip_limit=20_000))
        assert np.array_equal(degenerate.best_assignment, baseline.best_assignment)
        assert degenerate.history == baseline.history
        assert degenerate.flip_updates == baseline.flip_updates
        assert degenerate.full_evaluations == baseline.full_evaluations

    def test_archive_collects_distinct_high_quality_solutions(self):
        instance = random_instance(make_rng(9), 30, 30)
        result = run(instance, flip_limited("mocsm", seed=2, flip_limit=20_000, archive_threshold=0.9))
        bar = int(np.ceil(0.9 * instance.m))
        keys = [bytes(x.tolist()) for x in result.archive]
        assert result.archive
        assert len(keys) == len(set(keys))
        assert all(fitness(instance, x) >= bar for x in result.archive)

    def test_vig_perturbation_runs(self, e1):
        result = run(e1, flip_limited("ipp", seed=3, target=3, perturbation="vig", vig_mask_size=3))
        assert result.success


class TestMixedParity:
    def test_long_connection_applied_to_even_positions(self, e1, monkeypatch):
        calls = []
        real = pyramid_module.long_connection

        def counting(state, steps_limit, rng):
            calls.append(state)
            return real(state, steps_limit, rng)

        monkeypatch.setattr(pyramid_module, "long_connection", counting)
        instance = random_instance(make_rng(10), 40, 40)
        optimizer = PyramidOptimizer(instance, flip_limited("mocsm-mixed", seed=1, flip_limit=3000))

        sizes = []
        real_connect = optimizer._connect_members

        def connect():
            before = len(calls)
            size = len(optimizer.pyramid)
            real_connect()
            sizes.append((size, len(calls) - before))

        optimizer._connect_members = connect
        optimizer.run()
        assert sizes
        for size, count in sizes:
            assert count == (size + 1) // 2

    def test_single_member_gets_even_treatment(self):
        policy = POLICIES["mocsm-mixed"]
        assert policy.member_directed(0) is False
        assert policy.long_connection(0) is True
        assert policy.member_directed(1) is True
        assert policy.long_connection(1) is False
