"""End-to-end tests for the max3sat command line."""

import csv
import json

import pytest

from conftest import E1_TEXT, FORCED_X1_TEXT
from max3sat_suite.cli import EXIT_BUDGET, EXIT_ERROR, EXIT_SUCCESS, main, read_column
from max3sat_suite.utils.logging_config import setup_logging_for_run


@pytest.fixture
def cli(tmp_path, capsys):
    """Run main() with logs under tmp_path; returns (exit code, stdout)."""
    def invoke(*argv):
        code = main(["--log-dir", str(tmp_path / "logs"), *argv])
        return code, capsys.readouterr().out
    return invoke


@pytest.fixture
def e1_file(tmp_path):
    path = tmp_path / "e1.cnf"
    path.write_text(E1_TEXT)
    return path


@pytest.fixture
def forced_file(tmp_path):
    path = tmp_path / "forced.cnf"
    path.write_text(FORCED_X1_TEXT)
    return path


class TestGen:
    def test_writes_count_files(self, cli, tmp_path):
        out_dir = tmp_path / "suite"
        code, out = cli("gen", "--kind", "uniform", "--n", "20", "--cr", "4.27", "--seed", "1",
                        "--count", "3", "--out-dir", str(out_dir))
        assert code == EXIT_SUCCESS
        files = sorted(out_dir.glob("*.cnf"))
        assert len(files) == 3
        assert len(out.splitlines()) == 3
        assert files[0].read_text().splitlines()[0] == "p cnf 20 85"

    def test_rerun_is_byte_identical(self, cli, tmp_path):
        for target in ("a", "b"):
            cli("gen", "--kind", "scalefree", "--n", "30", "--cr", "4.0", "--beta", "2.5",
                "--seed", "7", "--out-dir", str(tmp_path / target))
        first = sorted((tmp_path / "a").glob("*.cnf"))
        second = sorted((tmp_path / "b").glob("*.cnf"))
        assert [p.name for p in first] == [p.name for p in second]
        assert [p.read_bytes() for p in first] == [p.read_bytes() for p in second]

    def test_scale_free_needs_beta(self, cli, tmp_path):
        code, _ = cli("gen", "--kind", "scalefree", "--n", "30", "--cr", "4.0", "--out-dir", str(tmp_path))
        assert code == EXIT_ERROR


class TestSolve:
    def test_e1_success(self, cli, e1_file):
        code, out = cli("solve", "--algo", "mocsm", "--instance", str(e1_file), "--flip-limit", "10000")
        assert code == EXIT_SUCCESS
        result = json.loads(out)
        assert result["success"] is True
        assert result["best_fitness"] == result["m"] == 3
        assert result["instance"] == "e1"
        assert len(result["best_assignment"]) == 6

    def test_zero_budget_exits_two(self, cli, e1_file, tmp_path):
        out = tmp_path / "run.json"
        code, _ = cli("solve", "--algo", "ipp", "--instance", str(e1_file), "--flip-limit", "0",
                      "--target", "4", "--out", str(out))
        assert code == EXIT_BUDGET
        assert json.loads(out.read_text())["success"] is False

    def test_missing_budget(self, cli, e1_file):
        code, out = cli("solve", "--algo", "ipp", "--instance", str(e1_file))
        assert code == EXIT_ERROR
        assert out == ""

    def test_missing_instance(self, cli, tmp_path):
        code, _ = cli("solve", "--algo", "ipp", "--instance", str(tmp_path / "nope.cnf"), "--flip-limit", "10")
        assert code == EXIT_ERROR

    def test_error_points_at_log_file(self, tmp_path, capsys):
        code = main(["--log-dir", str(tmp_path / "logs"), "solve", "--algo", "ipp",
                     "--instance", str(tmp_path / "nope.cnf"), "--flip-limit", "10"])
        assert code == EXIT_ERROR
        err = capsys.readouterr().err
        logs = list((tmp_path / "logs").glob("max3sat_run_*.log"))
        assert len(logs) == 1
        assert f"see {logs[0]} for details" in err
        assert "solve failed" in logs[0].read_text()

    @pytest.mark.parametrize("argv", [
        ["solve", "--algo", "ipp"],
        ["solve", "--algo", "greedy", "--instance", "x.cnf"],
        ["analyze"],
        [],
    ])
    def test_usage_errors_are_not_budget_exits(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == EXIT_ERROR
        assert exc.value.code != EXIT_BUDGET
        assert "usage: max3sat" in capsys.readouterr().err

    def test_help_still_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--help"])
        assert exc.value.code == EXIT_SUCCESS
        assert "--flip-limit" in capsys.readouterr().out

    def test_archive_written(self, cli, e1_file, tmp_path):
        archive = tmp_path / "archive.txt"
        code, _ = cli("solve", "--algo", "mocsm-mixed", "--instance", str(e1_file), "--flip-limit", "2000",
                      "--archive-threshold", "0.5", "--solutions-out", str(archive))
        assert code == EXIT_SUCCESS
        lines = archive.read_text().splitlines()
        assert lines
        assert all(len(line) == 6 and set(line) <= {"0", "1"} for line in lines)


class TestAnalyze:
    def test_backbone_exhaustive(self, cli, forced_file):
        code, out = cli("analyze", "backbone", "--instance", str(forced_file))
        assert code == EXIT_SUCCESS
        assert json.loads(out) == {"n": 3, "optimum": 4, "size": 1, "fixed": {"1": 1}}

    def test_backbone_over_limit(self, cli, forced_file):
        code, _ = cli("analyze", "backbone", "--instance", str(forced_file), "--exhaustive-limit", "2")
        assert code == EXIT_ERROR

    def test_backbone_from_solutions(self, cli, forced_file, tmp_path):
        solutions = tmp_path / "solutions.txt"
        solutions.write_text("# archive\n100\n101\n")
        code, out = cli("analyze", "backbone", "--instance", str(forced_file), "--solutions", str(solutions))
        assert code == EXIT_SUCCESS
        assert json.loads(out)["fixed"] == {"1": 1, "2": 0}

    def test_difficulty_of_optima_is_zero(self, cli, forced_file, tmp_path):
        solutions = tmp_path / "solutions.txt"
        solutions.write_text("100\n111\n110\n")
        code, out = cli("analyze", "difficulty", "--instance", str(forced_file), "--solutions", str(solutions))
        assert code == EXIT_SUCCESS
        report = json.loads(out)
        assert report["difficulty"] == 0.0
        assert report["solutions"] == 3
        assert report["backbone_size"] == 1

    def test_difficulty_with_backbone_file(self, cli, forced_file, tmp_path):
        backbone = tmp_path / "backbone.json"
        backbone.write_text(json.dumps({"n": 3, "optimum": 4, "size": 1, "fixed": {"1": 1}}))
        solutions = tmp_path / "solutions.txt"
        solutions.write_text("011\n")
        code, out = cli("analyze", "difficulty", "--instance", str(forced_file), "--solutions", str(solutions),
                        "--backbone", str(backbone))
        assert code == EXIT_SUCCESS
        assert json.loads(out)["difficulty"] == 1.0

    def test_bad_solutions_line(self, cli, forced_file, tmp_path):
        solutions = tmp_path / "solutions.txt"
        solutions.write_text("100\n1x0\n")
        code, _ = cli("analyze", "difficulty", "--instance", str(forced_file), "--solutions", str(solutions))
        assert code == EXIT_ERROR

    def test_overlap_writes_both_csvs(self, cli, e1_file, tmp_path):
        solutions = tmp_path / "solutions.txt"
        solutions.write_text("110000\n110111\n110101\n")
        out_dir = tmp_path / "report"
        code, out = cli("analyze", "overlap", "--instance", str(e1_file), "--solutions", str(solutions),
                        "--threshold", "0.3", "--out-dir", str(out_dir))
        assert code == EXIT_SUCCESS
        assert len(out.splitlines()) == 2
        with open(out_dir / "overlap_distribution.csv") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["class", "overlap", "count"]
        assert sum(int(row[2]) for row in rows[1:]) == 2
        with open(out_dir / "c1c2_by_overlap.csv") as f:
            header = next(csv.reader(f))
        assert header[:2] == ["overlap", "count"]

    def test_spearman_identical_columns(self, cli, tmp_path):
        column = tmp_path / "x.txt"
        column.write_text("1\n2\n3\n4\n")
        code, out = cli("analyze", "spearman", "--x", str(column), "--y", str(column))
        assert code == EXIT_SUCCESS
        report = json.loads(out)
        assert report["rho"] == pytest.approx(1.0)
        assert report["n"] == 4

    def test_spearman_pairs_ids(self, cli, tmp_path):
        x = tmp_path / "difficulty.csv"
        y = tmp_path / "effort.csv"
        x.write_text("a,1\nb,2\nc,3\n")
        y.write_text("c,9\nb,4\na,1\n")
        code, out = cli("analyze", "spearman", "--x", str(x), "--y", str(y))
        assert code == EXIT_SUCCESS
        assert json.loads(out)["rho"] == pytest.approx(1.0)

    def test_spearman_constant_column(self, cli, tmp_path):
        x = tmp_path / "x.txt"
        y = tmp_path / "y.txt"
        x.write_text("1\n2\n3\n")
        y.write_text("5\n5\n5\n")
        code, _ = cli("analyze", "spearman", "--x", str(x), "--y", str(y))
        assert code == EXIT_ERROR

    def test_vig_edge_list(self, cli, e1_file):
        code, out = cli("analyze", "vig", "--instance", str(e1_file))
        assert code == EXIT_SUCCESS
        assert out.split() == ["1", "2", "1", "3", "2", "3", "2", "5", "3", "5", "4", "5", "4", "6", "5", "6"]


def test_run_log_header(tmp_path, monkeypatch):
    monkeypatch.setenv("MAX3SAT_EXHAUSTIVE_LIMIT", "20")
    monkeypatch.delenv("MAX3SAT_LOG_DIR", raising=False)
    manager = setup_logging_for_run(str(tmp_path / "logs"))
    path = manager.get_log_file_path()
    assert path.parent == tmp_path / "logs"
    assert path.name.startswith("max3sat_run_") and path.suffix == ".log"
    text = path.read_text()
    assert "CPUs available to bench workers" in text
    assert "networkx" in text
    assert "MAX3SAT_EXHAUSTIVE_LIMIT: 20" in text
    assert "MAX3SAT_LOG_DIR: not set, using default" in text


def test_read_column(tmp_path):
    path = tmp_path / "column.txt"
    path.write_text("# effort\nu1, 10\n\nu2,20.5\n")
    assert read_column(str(path)) == (["u1", "u2"], [10.0, 20.5])


class TestBench:
    @pytest.fixture
    def suite(self, tmp_path):
        directory = tmp_path / "suite"
        directory.mkdir()
        (directory / "e1.cnf").write_text(E1_TEXT)
        return directory

    def read_rows(self, path):
        with open(path) as f:
            return list(csv.DictReader(f))

    def test_every_combination(self, cli, suite, tmp_path):
        report = tmp_path / "bench.csv"
        code, out = cli("bench", "--suite", str(suite), "--algos", "ipp,mocsm,mocsm-mixed",
                        "--seeds", "5", "--flip-limit", "10000", "--out", str(report))
        assert code == EXIT_SUCCESS
        rows = self.read_rows(report)
        assert len(rows) == 15
        assert all(row["success"] == "true" for row in rows)
        assert [(row["algorithm"], row["seed"]) for row in rows] == \
               [(a, str(s)) for a in ("ipp", "mocsm", "mocsm-mixed") for s in range(5)]
        summary = json.loads(out)
        assert summary["rows"] == 15
        for algorithm in ("ipp", "mocsm", "mocsm-mixed"):
            assert summary["summary"][algorithm]["solve_rate"] == 1.0
            assert summary["summary"][algorithm]["runs"] == 5

    def test_parallel_matches_sequential(self, cli, suite, tmp_path):
        reports = []
        for jobs in ("1", "2"):
            report = tmp_path / f"bench_{jobs}.csv"
            cli("bench", "--suite", str(suite), "--seeds", "4", "--flip-limit", "5000",
                "--jobs", jobs, "--out", str(report))
            rows = self.read_rows(report)
            for row in rows:
                row.pop("wall_ms")
            reports.append(rows)
        assert reports[0] == reports[1]
        assert len(reports[0]) == 12

    def test_empty_suite(self, cli, tmp_path):
        (tmp_path / "empty").mkdir()
        code, _ = cli("bench", "--suite", str(tmp_path / "empty"), "--flip-limit", "10")
        assert code == EXIT_ERROR

    def test_unknown_algorithm(self, cli, suite):
        code, _ = cli("bench", "--suite", str(suite), "--algos", "walksat", "--flip-limit", "10")
        assert code == EXIT_ERROR
