"""Command-line entry point: cluster, recurse, vectorize, gen, oracle and alpha."""

from __future__ import annotations

import argparse
import json
import logging
import time
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from . import datasets
from .config import DEFAULT_TRIALS, DEFAULT_WINDOW, LOG_LEVELS, load_config_file, load_settings
from .errors import ConfigValidationError, GWClusterError, InputValidationError, NumericError
from .models import (
    DistanceMetric,
    PipelineConfig,
    RecurseOn,
    RunManifest,
    SolverConfig,
    TargetList,
)
from .oracle import brute_force_maxcut
from .persistence import (
    BUNDLED_CORPUS,
    bundled_path,
    load_corpus,
    load_lexicons,
    read_labels_csv,
    read_matrix_csv,
    read_points_csv,
    write_embedding,
    write_json,
    write_labels_csv,
    write_partition_csv,
    write_points_csv,
    write_vectors_csv,
)
from .pipeline import (
    IterationResult,
    compare_dimensions,
    label_agreement,
    run_gwa_once,
    run_gwa_weights,
    run_recursive,
)
from .plotting import write_scatter_svg
from .rounding import alpha_minimizer
from .vectorizer import vectorize_corpus
from .weights import PointSet

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

DEFAULT_TARGETS = "amodiaquine,human,side-effect"


class Run:
    """Collects artifacts and stage timings for the manifest of one command."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.out_dir: Path = Path(args.out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.artifacts: List[str] = []
        self.timings: Dict[str, float] = {}

    def path(self, name: str) -> Path:
        path = self.out_dir / name
        self.artifacts.append(str(path))
        return path

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round(time.perf_counter() - start, 6)

    def finish(self) -> RunManifest:
        manifest_path = self.out_dir / "manifest.json"
        manifest = RunManifest(
            command=self.args.command,
            config=_snapshot(self.args),
            seed=self.args.seed,
            artifacts=self.artifacts + [str(manifest_path)],
            timings=self.timings,
        )
        write_json(manifest_path, manifest)
        logger.info("Wrote %d artifacts to %s", len(manifest.artifacts), self.out_dir)
        return manifest


def _snapshot(args: argparse.Namespace) -> Dict[str, Any]:
    snapshot: Dict[str, Any] = {}
    for key, value in sorted(vars(args).items()):
        if key == "handler":
            continue
        if isinstance(value, Enum):
            value = value.value
        elif isinstance(value, Path):
            value = str(value)
        snapshot[key] = value
    return snapshot


def _pipeline_config(args: argparse.Namespace, *, iterations: int = 1) -> PipelineConfig:
    solver = SolverConfig(
        rank=args.rank,
        max_sweeps=args.max_sweeps,
        objective_tol=args.objective_tol,
        seed=args.seed,
    )
    return PipelineConfig(
        iterations=iterations,
        pca_dim=args.pca_dim,
        pad_to=args.pad_to,
        trials=args.trials,
        seed=args.seed,
        threads=args.threads,
        metric=args.metric,
        recurse_on=getattr(args, "recurse_on", RecurseOn.PCA),
        solver=solver,
    )


def _load_points(args: argparse.Namespace, run: Run) -> Tuple[PointSet, Optional[np.ndarray]]:
    labels = read_labels_csv(args.labels) if args.labels else None
    if args.gen:
        points, labels = _generate(args, args.gen)
        write_points_csv(run.path("points.csv"), points)
        write_labels_csv(run.path("labels.csv"), labels)
        return points, labels
    return read_points_csv(args.points, header=args.header), labels


def _generate(args: argparse.Namespace, kind: str) -> Tuple[PointSet, np.ndarray]:
    if kind == "cubes":
        return datasets.gen_two_cubes(
            count=args.count, separation=args.separation, edge=args.edge, seed=args.seed
        )
    return datasets.gen_moons(count=args.count, noise=args.noise, seed=args.seed)


def _write_iteration(run: Run, result: IterationResult, prefix: str) -> None:
    if result.points is not None:
        write_points_csv(run.path(f"{prefix}points.csv"), result.points)
    write_partition_csv(run.path(f"{prefix}partition.csv"), result.partition)
    write_points_csv(run.path(f"{prefix}pca.csv"), result.pca_coords)
    write_json(
        run.path(f"{prefix}quality.json"),
        {**result.quality.model_dump(mode="json"), "explained_variance": result.explained_variance},
    )
    write_scatter_svg(
        run.path(f"{prefix}scatter.svg"),
        result.pca_coords.points,
        result.partition.signs,
        title=f"Iteration {result.index}",
    )


def _cluster_summary(result: IterationResult, labels: Optional[np.ndarray]) -> Dict[str, Any]:
    summary: Dict[str, Any] = {
        "cut_value": result.partition.cut_value,
        "relaxed_objective": result.rounding.relaxed_objective,
        "ratio_to_relaxation": result.rounding.ratio_to_relaxation,
        "converged": result.relaxation.converged,
    }
    if labels is not None:
        summary["label_agreement"] = label_agreement(result.partition.signs, labels)
    return summary


def _emit_cluster(run: Run, result: IterationResult, labels: Optional[np.ndarray]) -> Dict[str, Any]:
    write_partition_csv(run.path("partition.csv"), result.partition)
    report = result.rounding.model_dump(mode="json")
    summary = _cluster_summary(result, labels)
    if "label_agreement" in summary:
        report["label_agreement"] = summary["label_agreement"]
    write_json(run.path("rounding_report.json"), report)
    embedding_csv = run.path("embedding.csv")
    _, sidecar = write_embedding(embedding_csv, result.embedding, result.relaxation)
    run.artifacts.append(str(sidecar))
    write_scatter_svg(run.path("scatter.svg"), result.pca_coords.points, result.partition.signs, title="GW clustering")
    return summary


def cmd_cluster(args: argparse.Namespace) -> RunManifest:
    """Run one GW pass on points or an explicit weight matrix."""

    run = Run(args)
    config = _pipeline_config(args)
    with run.stage("load"):
        if args.matrix:
            weights, points, labels = read_matrix_csv(args.matrix), None, None
            if args.labels:
                labels = read_labels_csv(args.labels)
        else:
            points, labels = _load_points(args, run)
            weights = None
    with run.stage("cluster"):
        if weights is not None:
            result = run_gwa_weights(weights, config)
        else:
            result = run_gwa_once(points, config)
    with run.stage("write"):
        summary = _emit_cluster(run, result, labels)
    print(json.dumps(summary, sort_keys=True))
    return run.finish()


def cmd_recurse(args: argparse.Namespace) -> RunManifest:
    """Recursive GW passes with per-iteration artifacts and a quality summary."""

    run = Run(args)
    config = _pipeline_config(args, iterations=args.iterations)
    with run.stage("load"):
        points, labels = _load_points(args, run)

    with run.stage("recurse"):
        results = run_recursive(points, config)
    with run.stage("write"):
        for result in results:
            _write_iteration(run, result, f"iter_{result.index}_")
        summary = {
            "iterations": [
                {
                    "index": result.index,
                    "cut_value": result.partition.cut_value,
                    "relaxed_objective": result.rounding.relaxed_objective,
                    "converged": result.relaxation.converged,
                    **result.quality.model_dump(mode="json"),
                    **(
                        {"label_agreement": label_agreement(result.partition.signs, labels)}
                        if labels is not None
                        else {}
                    ),
                }
                for result in results
            ],
            "requested_iterations": args.iterations,
            "completed_iterations": len(results),
        }
        write_json(run.path("summary.json"), summary)

    if args.compare_dims:
        with run.stage("compare_dims"):
            runs = compare_dimensions(points, config, args.compare_dims)
            comparison = {
                str(dimension): [
                    {
                        "index": result.index,
                        "relaxed_objective": result.rounding.relaxed_objective,
                        **result.quality.model_dump(mode="json"),
                    }
                    for result in dimension_results
                ]
                for dimension, dimension_results in runs.items()
            }
            write_json(run.path("dimension_summary.json"), comparison)

    print(json.dumps(summary["iterations"], sort_keys=True))
    return run.finish()


def cmd_vectorize(args: argparse.Namespace) -> RunManifest:
    """Turn a corpus into conditional-probability vectors, optionally clustering them."""

    run = Run(args)
    with run.stage("load"):
        try:
            targets = TargetList.parse(args.targets)
        except ValueError as exc:
            raise InputValidationError(f"Invalid --targets: {exc}") from exc
        lexicons = load_lexicons(args.lexicon_side_effects, args.lexicon_human)
        documents, labels = load_corpus(args.corpus)
    with run.stage("vectorize"):
        points, vectors = vectorize_corpus(
            documents, targets, lexicons, args.window, threads=args.threads
        )
    write_vectors_csv(run.path("vectors.csv"), vectors, targets)

    if args.then_cluster:
        with run.stage("cluster"):
            result = run_gwa_once(points, _pipeline_config(args))
        with run.stage("write"):
            summary = _emit_cluster(run, result, labels)
        print(json.dumps(summary, sort_keys=True))
    else:
        print(str(run.out_dir / "vectors.csv"))
    return run.finish()


def cmd_gen(args: argparse.Namespace) -> RunManifest:
    """Write a synthetic dataset as points and labels CSV."""

    run = Run(args)
    with run.stage("generate"):
        points, labels = _generate(args, args.dataset)
    write_points_csv(run.path("points.csv"), points)
    write_labels_csv(run.path("labels.csv"), labels)
    print(str(run.out_dir / "points.csv"))
    return run.finish()


def cmd_oracle(args: argparse.Namespace) -> RunManifest:
    """Exact MaxCut of a small weight matrix."""

    run = Run(args)
    weights = read_matrix_csv(args.matrix)
    with run.stage("enumerate"):
        result = brute_force_maxcut(weights, threads=args.threads)
    write_json(run.path("oracle.json"), result)
    write_partition_csv(run.path("partition.csv"), result.partition)
    print(f"value {result.value:.12g}")
    print("partition " + " ".join(f"{sign:+d}" for sign in result.partition.signs))
    return run.finish()


def cmd_alpha(args: argparse.Namespace) -> RunManifest:
    """Print the alpha constant, its minimiser and the closed-form check."""

    run = Run(args)
    with run.stage("minimize"):
        alpha = alpha_minimizer()
    payload = {"alpha": alpha.alpha, "theta": alpha.theta, "closed_form": alpha.closed_form}
    write_json(run.path("alpha.json"), payload)
    print(f"alpha {alpha.alpha:.10f}")
    print(f"theta {alpha.theta:.10f}")
    print(f"closed_form {alpha.closed_form:.10f}")
    return run.finish()


def _dimension_list(value: str) -> List[int]:
    try:
        dims = [int(part) for part in value.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{value}'") from exc
    if not dims:
        raise argparse.ArgumentTypeError("at least one dimension is required")
    return dims


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="Seed for every random choice.")
    parser.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="Rounding trials.")
    parser.add_argument("--threads", type=int, help="Worker threads (results do not depend on it).")
    parser.add_argument("--out-dir", type=Path, help="Directory receiving all artifacts.")
    parser.add_argument("--config", type=Path, help="JSON file of flag defaults.")
    parser.add_argument("--log-level", help="Logging level (DEBUG, INFO, ...).")


def _add_solver(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--metric",
        type=DistanceMetric,
        choices=list(DistanceMetric),
        default=DistanceMetric.EUCLIDEAN,
    )
    parser.add_argument("--rank", type=int, help="Rows of the embedding (default: its column count).")
    parser.add_argument("--max-sweeps", type=int, default=SolverConfig().max_sweeps)
    parser.add_argument("--objective-tol", type=float, default=SolverConfig().objective_tol)
    parser.add_argument("--pad-to", type=int, help="Pad the weight matrix with zeros to this size.")
    parser.add_argument("--pca-dim", type=int, choices=(2, 3), default=2)


def _add_generator(parser: argparse.ArgumentParser, *, required: bool) -> None:
    parser.add_argument("--count", type=int, default=datasets.DEFAULT_COUNT)
    parser.add_argument("--noise", type=float, default=datasets.DEFAULT_MOON_NOISE)
    parser.add_argument("--edge", type=float, default=datasets.DEFAULT_EDGE)
    parser.add_argument("--separation", type=float, help="Cube centre distance (default 4 * edge).")
    if required:
        parser.add_argument("dataset", choices=("cubes", "moons"))


def _add_point_input(parser: argparse.ArgumentParser, *, allow_matrix: bool) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--points", type=Path, help="CSV with one point per row.")
    if allow_matrix:
        source.add_argument("--matrix", type=Path, help="CSV weight matrix.")
    source.add_argument("--gen", choices=("cubes", "moons"), help="Generate a dataset instead.")
    parser.add_argument("--header", action="store_true", help="Skip the first CSV row.")
    parser.add_argument("--labels", type=Path, help="Labels CSV to score the partition against.")
    _add_generator(parser, required=False)


def _build_parser() -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="gwcluster",
        description="Goemans-Williamson MaxCut clustering with recursive and padded relaxations.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    cluster = commands.add_parser("cluster", help="One GW pass on points or a weight matrix.")
    _add_point_input(cluster, allow_matrix=True)
    _add_solver(cluster)
    _add_common(cluster)
    cluster.set_defaults(handler=cmd_cluster)

    recurse = commands.add_parser("recurse", help="Recursive GW passes on PCA coordinates.")
    _add_point_input(recurse, allow_matrix=False)
    _add_solver(recurse)
    recurse.add_argument("--iterations", type=int, choices=range(1, 6), default=4)
    recurse.add_argument("--recurse-on", type=RecurseOn, choices=list(RecurseOn), default=RecurseOn.PCA)
    recurse.add_argument(
        "--compare-dims",
        type=_dimension_list,
        help="Comma-separated padding sizes to compare, e.g. 100,104,109.",
    )
    _add_common(recurse)
    recurse.set_defaults(handler=cmd_recurse)

    vectorize = commands.add_parser("vectorize", help="Conditional-probability article vectors.")
    vectorize.add_argument("corpus", type=Path, nargs="?", help="Directory of .txt files or JSON lines.")
    vectorize.add_argument("--lexicon-side-effects", type=Path)
    vectorize.add_argument("--lexicon-human", type=Path)
    vectorize.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    vectorize.add_argument("--targets", default=DEFAULT_TARGETS, help="anchor,context,...")
    vectorize.add_argument("--then-cluster", action="store_true")
    _add_solver(vectorize)
    _add_common(vectorize)
    vectorize.set_defaults(handler=cmd_vectorize)

    gen = commands.add_parser("gen", help="Write a synthetic dataset.")
    _add_generator(gen, required=True)
    _add_common(gen)
    gen.set_defaults(handler=cmd_gen)

    oracle = commands.add_parser("oracle", help="Exact MaxCut by enumeration (n <= 22).")
    oracle.add_argument("matrix", type=Path)
    _add_common(oracle)
    oracle.set_defaults(handler=cmd_oracle)

    alpha = commands.add_parser("alpha", help="Print the alpha constant and its minimiser.")
    _add_common(alpha)
    alpha.set_defaults(handler=cmd_alpha)

    return parser, dict(commands.choices)


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse flags over config-file defaults over environment defaults."""

    parser, subcommands = _build_parser()
    args = parser.parse_args(argv)

    settings = load_settings()
    fallback = {
        "seed": settings.seed,
        "threads": settings.threads,
        "out_dir": settings.out_dir,
        "log_level": settings.log_level,
    }
    file_values = load_config_file(args.config) if args.config else {}

    if file_values:
        # Reparse so explicitly given flags still win over the file.
        subcommands[args.command].set_defaults(**file_values)
        args = parser.parse_args(argv)

    for key, value in fallback.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    args.log_level = str(args.log_level).upper()
    if args.log_level not in LOG_LEVELS:
        raise ConfigValidationError(f"Unsupported log level '{args.log_level}'.")

    if args.command == "vectorize" and args.corpus is None:
        args.corpus = bundled_path(BUNDLED_CORPUS)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except GWClusterError as exc:
        logging.basicConfig(level=logging.INFO, format="[%(levelname)s] %(message)s")
        logger.error("Invalid configuration: %s", exc)
        return EXIT_INPUT

    logging.basicConfig(level=args.log_level, format="[%(levelname)s] %(message)s")
    handler: Callable[[argparse.Namespace], RunManifest] = args.handler

    try:
        handler(args)
    except NumericError as exc:
        logger.error("Numeric failure: %s", exc)
        return EXIT_NUMERIC
    except (InputValidationError, ValidationError, OSError) as exc:
        logger.error("Invalid input: %s", exc)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover - CLI entry point
    raise SystemExit(main())
