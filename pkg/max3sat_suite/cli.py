"""
Max3Sat Suite Command Line

Subcommands:
    gen       write generated DIMACS instances
    solve     run one optimizer on one instance
    analyze   backbone / overlap / difficulty / spearman / vig
    bench     every (instance, algorithm, seed) combination of a suite

Machine-readable output goes to stdout or to the --out files; logs go to
stderr and to a per-run file under the log directory.
"""

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .analysis.backbone import (
    DIFFICULTY_FRACTION,
    HIGH_QUALITY_THRESHOLD,
    backbone_exhaustive,
    backbone_from_solutions,
    c1c2_by_overlap,
    classify_high_quality,
    difficulty,
    difficulty_study,
    distribution_rows,
    median_effort,
    overlap_distribution,
    spearman,
)
from .core.data_structures import (
    ALGORITHMS,
    PERTURBATIONS,
    BenchRow,
    DataStructureManager,
    GeneratorConfig,
    Max3SatInstance,
    RunConfig,
)
from .core.errors import AnalysisInputError, Max3SatError, RunConfigError
from .core.instance import generate, read_dimacs, save_dimacs
from .core.vig import build_vig, write_edge_list
from .search.pyramid import run
from .utils.logging_config import setup_logging_for_run, get_logger
from .utils.settings import Settings

logger = get_logger(__name__)

EXIT_SUCCESS = 0
EXIT_ERROR = 1
EXIT_BUDGET = 2

BENCH_HEADER = ["instance", "algorithm", "seed", "success", "best_fitness",
                "flip_updates", "full_evaluations", "wall_ms"]
OVERLAP_HEADER = ["class", "overlap", "count"]
C1C2_HEADER = ["overlap", "count", "c1_min", "c1_mean", "c1_max", "c2_min", "c2_mean", "c2_max"]

KIND_FLAGS = {"uniform": "uniform", "scalefree": "scale-free"}


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        logger.info(f"Wrote {path}")
    else:
        sys.stdout.write(text)


def _emit_json(data, out: Optional[str]) -> None:
    _emit(json.dumps(data, indent=2) + "\n", out)


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    logger.info(f"Wrote {path}")


# gen

def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    out_dir = Path(args.out_dir or settings.output_dir)
    if args.count < 1:
        raise AnalysisInputError("--count must be >= 1")
    for i in range(args.count):
        config = GeneratorConfig(kind=KIND_FLAGS[args.kind], n=args.n, cr=args.cr,
                                 beta=args.beta, seed=args.seed + i)
        instance = generate(config)
        path = save_dimacs(instance, out_dir / f"{instance.name}.cnf")
        print(path)
    return EXIT_SUCCESS


# solve

def cmd_solve(args: argparse.Namespace, settings: Settings) -> int:
    if args.flip_limit is None and args.time_limit_ms is None:
        raise RunConfigError("solve needs --flip-limit or --time-limit-ms")
    instance = read_dimacs(args.instance)
    config = RunConfig(
        algorithm=args.algo,
        seed=args.seed,
        time_limit_ms=args.time_limit_ms,
        flip_limit=args.flip_limit,
        target=args.target,
        long_connection_steps=args.lc_steps,
        perturbation=args.perturbation,
        archive_threshold=args.archive_threshold,
    )
    result = run(instance, config)
    if args.out:
        DataStructureManager.save_run_result(result, args.out)
    else:
        _emit(DataStructureManager.dumps_run_result(result) + "\n", None)
    if args.solutions_out:
        DataStructureManager.save_solutions(result.archive, args.solutions_out)
    return EXIT_SUCCESS if result.success else EXIT_BUDGET


# analyze

def _load_solutions(path: Optional[str], instance: Max3SatInstance):
    if not path:
        raise AnalysisInputError("--solutions is required")
    return DataStructureManager.load_solutions(path, instance.n)


def _resolve_backbone(args: argparse.Namespace, instance: Max3SatInstance, settings: Settings):
    """--backbone JSON if given, else exhaustive enumeration."""
    if args.backbone:
        try:
            data = json.loads(Path(args.backbone).read_text())
        except ValueError as e:
            raise AnalysisInputError(f"{args.backbone}: not a backbone JSON file: {e}") from None
        backbone = DataStructureManager.backbone_from_dict(data)
        if backbone.n != instance.n:
            raise AnalysisInputError(f"backbone covers {backbone.n} variables, instance has {instance.n}")
        return backbone
    return backbone_exhaustive(instance, args.exhaustive_limit or settings.exhaustive_limit)


def cmd_analyze_backbone(args: argparse.Namespace, settings: Settings) -> int:
    instance = read_dimacs(args.instance)
    if args.solutions:
        backbone = backbone_from_solutions(instance, _load_solutions(args.solutions, instance))
    else:
        backbone = backbone_exhaustive(instance, args.exhaustive_limit or settings.exhaustive_limit)
    _emit_json(DataStructureManager.backbone_to_dict(backbone), args.out)
    return EXIT_SUCCESS


def cmd_analyze_overlap(args: argparse.Namespace, settings: Settings) -> int:
    instance = read_dimacs(args.instance)
    solutions = _load_solutions(args.solutions, instance)
    backbone = _resolve_backbone(args, instance, settings)
    hq = classify_high_quality(instance, solutions, args.threshold, args.rounding)

    out_dir = Path(args.out_dir or settings.output_dir)
    _write_csv(out_dir / "overlap_distribution.csv", OVERLAP_HEADER,
               distribution_rows(overlap_distribution(backbone, hq)))
    _write_csv(out_dir / "c1c2_by_overlap.csv", C1C2_HEADER, [
        (s.overlap, s.count, s.c1_min, f"{s.c1_mean:.6g}", s.c1_max, s.c2_min, f"{s.c2_mean:.6g}", s.c2_max)
        for s in c1c2_by_overlap(instance, backbone, hq).values()
    ])
    print(out_dir / "overlap_distribution.csv")
    print(out_dir / "c1c2_by_overlap.csv")
    return EXIT_SUCCESS


def cmd_analyze_difficulty(args: argparse.Namespace, settings: Settings) -> int:
    instance = read_dimacs(args.instance)
    solutions = _load_solutions(args.solutions, instance)
    backbone = _resolve_backbone(args, instance, settings)
    value = difficulty(instance, backbone, solutions, args.fraction)
    _emit_json({
        "instance": instance.name,
        "difficulty": value,
        "fraction": args.fraction,
        "solutions": len(solutions),
        "backbone_size": backbone.size,
    }, args.out)
    return EXIT_SUCCESS


def read_column(path: str) -> Tuple[List[str], List[float]]:
    """
    A column file holds either one value per line or 'id,value' lines.
    Blank lines and '#' comments are skipped. Ids are '' for bare values.
    """
    ids, values = [], []
    for line_number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, raw = line.rpartition(",")
        try:
            values.append(float(raw))
        except ValueError:
            raise AnalysisInputError(f"{path} line {line_number}: not a number: {raw!r}") from None
        ids.append(key.strip())
    return ids, values


def cmd_analyze_spearman(args: argparse.Namespace, settings: Settings) -> int:
    x_ids, xs = read_column(args.x)
    y_ids, ys = read_column(args.y)
    if all(x_ids) and all(y_ids) and x_ids and y_ids:
        rho, count = difficulty_study(dict(zip(x_ids, xs)), dict(zip(y_ids, ys)))
    else:
        rho, count = spearman(xs, ys), len(xs)
    _emit_json({"rho": rho, "n": count}, args.out)
    return EXIT_SUCCESS


def cmd_analyze_vig(args: argparse.Namespace, settings: Settings) -> int:
    instance = read_dimacs(args.instance)
    _emit(write_edge_list(build_vig(instance)), args.out)
    return EXIT_SUCCESS


# bench

def _bench_task(instance: Max3SatInstance, algorithm: str, seed: int,
                flip_limit: Optional[int], time_limit_ms: Optional[float]) -> BenchRow:
    config = RunConfig(algorithm=algorithm, seed=seed, flip_limit=flip_limit, time_limit_ms=time_limit_ms)
    result = run(instance, config)
    return BenchRow(
        instance=instance.name,
        algorithm=algorithm,
        seed=seed,
        success=result.success,
        best_fitness=result.best_fitness,
        flip_updates=result.flip_updates,
        full_evaluations=result.full_evaluations,
        wall_ms=result.wall_ms,
    )


def run_bench(instances: Sequence[Max3SatInstance], algorithms: Sequence[str], seeds: int,
              flip_limit: Optional[int], time_limit_ms: Optional[float], jobs: int = 1) -> List[BenchRow]:
    """Rows sorted by (instance, algorithm, seed), whatever the completion order."""
    tasks = [(instance, algorithm, seed, flip_limit, time_limit_ms)
             for instance in instances for algorithm in algorithms for seed in range(seeds)]
    logger.info(f"Benchmark: {len(tasks)} runs on {jobs} worker(s)")

    rows: List[BenchRow] = []
    if jobs <= 1:
        rows = [_bench_task(*task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = {executor.submit(_bench_task, *task): task for task in tasks}
            for future in as_completed(futures):
                try:
                    rows.append(future.result())
                except Exception as e:
                    instance, algorithm, seed = futures[future][:3]
                    logger.error(f"Bench run {instance.name}/{algorithm}/{seed} failed: {e}")
                    raise
    rows.sort(key=lambda row: (row.instance, row.algorithm, row.seed))
    return rows


def bench_summary(rows: Sequence[BenchRow]) -> Dict[str, Dict[str, object]]:
    """Per algorithm: run count, successes, solve rate, median flips among successes."""
    summary = {}
    for algorithm in sorted({row.algorithm for row in rows}):
        runs = [row for row in rows if row.algorithm == algorithm]
        wins = [row.flip_updates for row in runs if row.success]
        summary[algorithm] = {
            "runs": len(runs),
            "successes": len(wins),
            "solve_rate": len(wins) / len(runs),
            "median_flip_updates": median_effort(wins),
        }
    return summary


def bench_csv_rows(rows: Sequence[BenchRow]):
    return [
        (row.instance, row.algorithm, row.seed, "true" if row.success else "false",
         row.best_fitness, row.flip_updates, row.full_evaluations, f"{row.wall_ms:.3f}")
        for row in rows
    ]


def cmd_bench(args: argparse.Namespace, settings: Settings) -> int:
    suite = Path(args.suite)
    paths = sorted(suite.glob("*.cnf")) if suite.is_dir() else []
    if not paths:
        raise AnalysisInputError(f"suite {suite} contains no .cnf files")
    if args.flip_limit is None and args.time_limit_ms is None:
        raise RunConfigError("bench needs --flip-limit or --time-limit-ms")
    algorithms = [a.strip() for a in args.algos.split(",") if a.strip()]
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown or not algorithms:
        raise AnalysisInputError(f"unknown algorithms {unknown}, expected a subset of {ALGORITHMS}")

    instances = [read_dimacs(path) for path in paths]
    rows = run_bench(instances, algorithms, args.seeds, args.flip_limit, args.time_limit_ms, args.jobs)

    out = Path(args.out) if args.out else Path(settings.output_dir) / "bench.csv"
    _write_csv(out, BENCH_HEADER, bench_csv_rows(rows))
    _emit_json({"rows": len(rows), "report": str(out), "summary": bench_summary(rows)}, None)
    return EXIT_SUCCESS


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_ERROR; EXIT_BUDGET stays reserved for solve."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> CliParser:
    parser = CliParser(prog="max3sat", description="Gray-box Max3Sat optimization suite")
    parser.add_argument("--log-dir", default=None, help="Directory for run logs (env MAX3SAT_LOG_DIR)")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ... (env MAX3SAT_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="Generate DIMACS instances")
    gen.add_argument("--kind", choices=sorted(KIND_FLAGS), required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--cr", type=float, required=True, help="Clause ratio m/n")
    gen.add_argument("--beta", type=float, default=None, help="Scale-free exponent (> 1)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--out-dir", default=None)
    gen.set_defaults(handler=cmd_gen)

    solve = commands.add_parser("solve", help="Run one optimizer on one instance")
    solve.add_argument("--algo", choices=ALGORITHMS, required=True)
    solve.add_argument("--instance", required=True)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--time-limit-ms", type=float, default=None)
    solve.add_argument("--flip-limit", type=int, default=None)
    solve.add_argument("--target", type=int, default=None, help="Target fitness (default m)")
    solve.add_argument("--lc-steps", type=int, default=25)
    solve.add_argument("--perturbation", choices=PERTURBATIONS, default="clause")
    solve.add_argument("--archive-threshold", type=float, default=None,
                       help="Archive distinct solutions with fitness >= ceil(threshold*m)")
    solve.add_argument("--solutions-out", default=None, help="Write the archive as a solutions file")
    solve.add_argument("--out", default=None)
    solve.set_defaults(handler=cmd_solve)

    analyze = commands.add_parser("analyze", help="Backbone and difficulty analysis")
    analyses = analyze.add_subparsers(dest="analysis", required=True)

    backbone = analyses.add_parser("backbone")
    backbone.add_argument("--instance", required=True)
    backbone.add_argument("--solutions", default=None)
    backbone.add_argument("--exhaustive-limit", type=int, default=None)
    backbone.add_argument("--out", default=None)
    backbone.set_defaults(handler=cmd_analyze_backbone)

    overlap = analyses.add_parser("overlap")
    overlap.add_argument("--instance", required=True)
    overlap.add_argument("--solutions", required=True)
    overlap.add_argument("--backbone", default=None, help="Backbone JSON (default: exhaustive)")
    overlap.add_argument("--exhaustive-limit", type=int, default=None)
    overlap.add_argument("--threshold", type=float, default=HIGH_QUALITY_THRESHOLD)
    overlap.add_argument("--rounding", choices=("ceil", "floor"), default="ceil")
    overlap.add_argument("--out-dir", default=None)
    overlap.set_defaults(handler=cmd_analyze_overlap)

    diff = analyses.add_parser("difficulty")
    diff.add_argument("--instance", required=True)
    diff.add_argument("--solutions", required=True)
    diff.add_argument("--backbone", default=None, help="Backbone JSON (default: exhaustive)")
    diff.add_argument("--exhaustive-limit", type=int, default=None)
    diff.add_argument("--fraction", type=float, default=DIFFICULTY_FRACTION)
    diff.add_argument("--out", default=None)
    diff.set_defaults(handler=cmd_analyze_difficulty)

    rank = analyses.add_parser("spearman")
    rank.add_argument("--x", required=True)
    rank.add_argument("--y", required=True)
    rank.add_argument("--out", default=None)
    rank.set_defaults(handler=cmd_analyze_spearman)

    vig = analyses.add_parser("vig")
    vig.add_argument("--instance", required=True)
    vig.add_argument("--out", default=None)
    vig.set_defaults(handler=cmd_analyze_vig)

    bench = commands.add_parser("bench", help="Benchmark algorithms over a suite")
    bench.add_argument("--suite", required=True, help="Directory of .cnf files")
    bench.add_argument("--algos", default=",".join(ALGORITHMS))
    bench.add_argument("--seeds", type=int, default=5)
    bench.add_argument("--flip-limit", type=int, default=None)
    bench.add_argument("--time-limit-ms", type=float, default=None)
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--out", default=None, help="CSV report path")
    bench.set_defaults(handler=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = Settings.from_env()
    if args.log_dir:
        settings = replace(settings, log_dir=args.log_dir)
    if args.log_level:
        settings = replace(settings, log_level=args.log_level)
    log_manager = setup_logging_for_run(settings.log_dir, settings.log_level_value)

    try:
        return args.handler(args, settings)
    except (Max3SatError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        sys.stderr.write(f"error: {e}\nsee {log_manager.get_log_file_path()} for details\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
