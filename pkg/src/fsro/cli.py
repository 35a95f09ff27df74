"""Command-line front end: run experiments, compare algorithms, generate data.

Outputs are plain CSV with full-precision floats so a re-run with the same
configuration and seed reproduces summary.csv, runs.csv, and the trace files
byte for byte. Wall-clock measurements, which can never replay exactly, go to
a separate timings.csv and to stdout.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .baselines import BpsoParams, GaParams
from .bench import ALGORITHMS, run_experiment, wilcoxon_signed_rank
from .core import ConfigError, DataError, RunResult, mask_string
from .data import Dataset, generate_m_of_n, load_csv, save_csv
from .engine import FsroParams
from .fitness import FitnessParams
from .rng import RngStream


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def _parse_synthetic(spec: str):
    """Parse 'm-of-n:R,M,NOISE,INSTANCES' into generator arguments."""
    try:
        kind, rest = spec.split(":", 1)
        if kind != "m-of-n":
            raise ValueError(f"unknown synthetic kind {kind!r}")
        n_relevant, m, n_noise, n_instances = (int(v) for v in rest.split(","))
    except ValueError as e:
        raise ConfigError(f"bad --synthetic spec {spec!r} "
                          f"(expected m-of-n:R,M,NOISE,INSTANCES): {e}")
    return n_relevant, m, n_noise, n_instances


def _load_dataset(args) -> Dataset:
    if args.synthetic:
        n_relevant, m, n_noise, n_instances = _parse_synthetic(args.synthetic)
        return generate_m_of_n(n_relevant, m, n_noise, n_instances, RngStream(args.seed))
    if not args.dataset:
        raise ConfigError("either --dataset or --synthetic is required")
    label = args.label_column
    try:
        label = int(label)
    except ValueError:
        pass
    return load_csv(args.dataset, label_column=label, has_header=not args.no_header)


def _algo_params(args, algorithm: str):
    if algorithm == "fsro":
        return FsroParams(
            population_size=args.pop_size, max_iterations=args.iterations,
            max_dis=args.max_dis, decision_dis=args.decision_dis,
            w1=args.w1, w2=args.w2, d1=args.d1, d2=args.d2,
        )
    if algorithm == "ga":
        return GaParams(
            crossover_rate=args.crossover_rate, mutation_rate=args.mutation_rate,
            population_size=args.pop_size, max_iterations=args.iterations,
        )
    if algorithm == "bpso":
        return BpsoParams(
            inertia_weight=args.inertia, cognitive_factor=args.cognitive,
            social_factor=args.social,
            population_size=args.pop_size, max_iterations=args.iterations,
        )
    raise ConfigError(f"unknown algorithm {algorithm!r}")


def _fitness_params(args) -> FitnessParams:
    return FitnessParams(alpha=args.alpha, k_neighbors=args.knn_k)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _write_run_outputs(out: Path, results: list[RunResult], summary) -> None:
    _write_csv(out / "summary.csv",
               ["mean_fitness", "best_fitness", "worst_fitness", "std_fitness",
                "average_accuracy", "average_reduction", "runs"],
               [[summary.mean_fitness, summary.best_fitness, summary.worst_fitness,
                 summary.std_fitness, summary.average_accuracy,
                 summary.average_reduction, summary.runs]])
    _write_csv(out / "runs.csv",
               ["algorithm", "dataset", "seed", "best_fitness", "test_accuracy",
                "selected_count", "best_mask"],
               [[r.algorithm, r.dataset, r.seed, r.best_fitness, r.test_accuracy,
                 r.selected_count, mask_string(r.best_mask)] for r in results])
    _write_csv(out / "timings.csv",
               ["seed", "wall_time_seconds"],
               [[r.seed, r.wall_time_seconds] for r in results])
    for r in results:
        _write_csv(out / f"trace_{r.seed}.csv",
                   ["iteration", "best_fitness", "frog_count", "snake_count",
                    "predation_success"],
                   [[t.iteration, t.best_fitness, t.frog_count, t.snake_count,
                     int(t.predation_success)] for t in r.trace])


def _print_summary(dataset: Dataset, algorithm: str, summary) -> None:
    print(f"dataset={dataset.name} features={dataset.n_features} "
          f"instances={dataset.n_instances} classes={dataset.n_classes}")
    print(f"algorithm={algorithm} runs={summary.runs}")
    for name in ("mean_fitness", "best_fitness", "worst_fitness", "std_fitness",
                 "average_accuracy", "average_reduction", "average_time"):
        print(f"  {name:18s} {getattr(summary, name):.6f}")


def cmd_run(args) -> int:
    dataset = _load_dataset(args)
    algo_params = _algo_params(args, args.algorithm)
    fit_params = _fitness_params(args)
    out = Path(args.out)
    results, summary = run_experiment(args.algorithm, dataset, algo_params,
                                      fit_params, args.runs, args.seed,
                                      workers=args.workers)
    out.mkdir(parents=True, exist_ok=True)
    _write_run_outputs(out, results, summary)
    _print_summary(dataset, args.algorithm, summary)
    print(f"wrote summary.csv, runs.csv, timings.csv and {len(results)} trace files to {out}")
    return 0


def cmd_compare(args) -> int:
    algo_a, algo_b = args.algorithms
    dataset = _load_dataset(args)
    fit_params = _fitness_params(args)
    out = Path(args.out)
    results = {}
    for algo in (algo_a, algo_b):
        res, _ = run_experiment(algo, dataset, _algo_params(args, algo),
                                fit_params, args.runs, args.seed,
                                workers=args.workers)
        results[algo] = res
    if len(results[algo_a]) != len(results[algo_b]):
        raise ConfigError("comparison needs equal run counts for pairing")
    fits_a = [r.best_fitness for r in results[algo_a]]
    fits_b = [r.best_fitness for r in results[algo_b]]
    p_value, decision = wilcoxon_signed_rank(fits_a, fits_b)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "paired.csv",
               ["seed", f"fitness_{algo_a}", f"fitness_{algo_b}"],
               [[r_a.seed, r_a.best_fitness, r_b.best_fitness]
                for r_a, r_b in zip(results[algo_a], results[algo_b])])
    _write_csv(out / "comparison.csv",
               ["algorithm_a", "algorithm_b", "dataset", "runs", "p_value", "decision"],
               [[algo_a, algo_b, dataset.name, args.runs, p_value, decision.value]])
    print(f"{algo_a} vs {algo_b} on {dataset.name}: "
          f"p={p_value:.6f} decision={decision.value}")
    print(f"wrote paired.csv and comparison.csv to {out}")
    return 0


def cmd_gen(args) -> int:
    n_relevant, m, n_noise, n_instances = _parse_synthetic(args.synthetic)
    dataset = generate_m_of_n(n_relevant, m, n_noise, n_instances, RngStream(args.seed))
    path = Path(args.out)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    save_csv(dataset, path)
    print(f"wrote {dataset.n_instances}x{dataset.n_features} dataset to {path}")
    return 0


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", help="CSV file with numeric features and one label column")
    p.add_argument("--synthetic", help="synthetic spec, e.g. m-of-n:6,3,7,1000")
    p.add_argument("--label-column", default="-1",
                   help="label column index or header name (default: last column)")
    p.add_argument("--no-header", action="store_true",
                   help="treat the first CSV row as data, not a header")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--runs", type=int, default=30, help="number of seeded runs")
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--pop-size", type=int, default=40)
    p.add_argument("--seed", type=int, default=1, help="base seed; run k uses seed+k")
    p.add_argument("--alpha", type=float, default=0.9,
                   help="weight of the error term in the fitness")
    p.add_argument("--knn-k", type=int, default=5)
    p.add_argument("--out", default="fsro_out", help="output directory")
    p.add_argument("--workers", type=int, default=1, help="parallel run workers")
    p.add_argument("--config", help="key=value file; explicit flags win")
    # frog-snake engine overrides
    p.add_argument("--max-dis", type=float, default=80.0)
    p.add_argument("--decision-dis", type=float, default=6.0)
    p.add_argument("--w1", type=float, default=0.75)
    p.add_argument("--w2", type=float, default=1.0)
    p.add_argument("--d1", type=float, default=40.0)
    p.add_argument("--d2", type=float, default=20.0)
    # ga overrides
    p.add_argument("--crossover-rate", type=float, default=0.8)
    p.add_argument("--mutation-rate", type=float, default=0.3)
    # bpso overrides
    p.add_argument("--inertia", type=float, default=1.0)
    p.add_argument("--cognitive", type=float, default=2.0)
    p.add_argument("--social", type=float, default=2.0)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="fsro",
        description="Frog-snake prey-predation optimization for feature selection",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    sub_map = {}

    run_p = subs.add_parser("run", help="run one algorithm over M seeded runs")
    _add_data_flags(run_p)
    _add_run_flags(run_p)
    run_p.add_argument("--algorithm", choices=ALGORITHMS, default="fsro")
    run_p.set_defaults(func=cmd_run)
    sub_map["run"] = run_p

    cmp_p = subs.add_parser("compare", help="run two algorithms on identical seeds")
    _add_data_flags(cmp_p)
    _add_run_flags(cmp_p)
    cmp_p.add_argument("--algorithms", nargs=2, choices=ALGORITHMS,
                       metavar=("ALGO_A", "ALGO_B"), required=True)
    cmp_p.set_defaults(func=cmd_compare)
    sub_map["compare"] = cmp_p

    gen_p = subs.add_parser("gen", help="write a synthetic dataset to CSV")
    gen_p.add_argument("--synthetic", required=True, help="e.g. m-of-n:6,3,7,1000")
    gen_p.add_argument("--seed", type=int, default=1)
    gen_p.add_argument("--out", required=True, help="output CSV path")
    gen_p.set_defaults(func=cmd_gen)
    sub_map["gen"] = gen_p

    return parser, sub_map


def _config_defaults(sub: argparse.ArgumentParser, path: str) -> dict:
    """Read key=value lines and convert them with the owning flag's type."""
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    for ln, line in enumerate(lines):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln + 1}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        dest = key.replace("-", "_")
        action = actions.get(dest)
        if action is None or dest in ("config", "func", "command"):
            raise ConfigError(f"{path}:{ln + 1}: unknown option {key!r}")
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() not in ("true", "false"):
                raise ConfigError(f"{path}:{ln + 1}: {key} takes true or false")
            defaults[dest] = value.lower() == "true"
        elif action.nargs not in (None, "?"):
            defaults[dest] = value.split()
        elif action.type is not None:
            try:
                defaults[dest] = action.type(value)
            except ValueError as e:
                raise ConfigError(f"{path}:{ln + 1}: bad value for {key}: {e}")
        else:
            defaults[dest] = value
    return defaults


def main(argv=None) -> int:
    parser, sub_map = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            sub = sub_map[args.command]
            sub.set_defaults(**_config_defaults(sub, args.config))
            args = parser.parse_args(argv)  # explicit flags still win
        return args.func(args)
    except (ConfigError, DataError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
