"""Batch pipeline driver.

Subcommands: metrics (fixation CSV to metric table), matrix (fixation CSV
to seriated similarity-matrix SVG), synth (seeded synthetic fixtures),
serve (HTTP service). Exit codes: 0 success, 1 runtime failure, 2
usage/validation failure. Every command is deterministic given its flags
and seed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .clustering import (
    agglomerate,
    boundaries_for_cut,
    cluster_metrics,
    cut,
    leaf_order,
)
from .ingest import Dataset, parse_fixation_csv
from .layout import assign_colors, assign_subgrid, build_matrix_layout, render_svg
from .metrics import (
    METRIC_IDS,
    MetricTable,
    WeightVector,
    aggregate,
    normalize,
    table_to_csv,
)
from .similarity import combined_distance, metric_correlations, pairwise_similarity
from .synth import DEFAULT_GROUPS, generate, parse_group_spec

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad flags or unusable input; maps to exit code 2."""


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def _write_output(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(data)


def _load_dataset(args: argparse.Namespace) -> Dataset:
    data = _read_input(args.input)
    dataset, report = parse_fixation_csv(data, strict=args.strict)
    for row, msg in report.warnings:
        print(f"warning: row {row}: {msg}", file=sys.stderr)
    if dataset is None:
        for row, msg in report.errors:
            print(f"error: row {row}: {msg}", file=sys.stderr)
        raise UsageError(f"{args.input}: {len(report.errors)} validation error(s)")
    return dataset


def _load_table(args: argparse.Namespace) -> MetricTable:
    dataset = _load_dataset(args)
    try:
        return normalize(aggregate(dataset, combine=args.aggregate))
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_metrics(args: argparse.Namespace) -> int:
    table = _load_table(args)
    for msg in table.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    _write_output(args.output, table_to_csv(table, include_counts=True).encode("utf-8"))
    return EXIT_OK


def cmd_matrix(args: argparse.Namespace) -> int:
    table = _load_table(args)
    try:
        weights = WeightVector.parse(args.weights)
    except ValueError as exc:
        raise UsageError(str(exc))
    p = table.n_entities
    if args.k is not None and not 1 <= args.k <= p:
        raise UsageError(f"--k must be in [1, {p}], got {args.k}")
    if args.cell_px < 1:
        raise UsageError(f"--cell-px must be >= 1, got {args.cell_px}")

    dendro = agglomerate(combined_distance(table, weights), args.linkage)
    order = leaf_order(dendro)
    boundaries: tuple[int, ...] = ()
    if args.k is not None:
        boundaries = boundaries_for_cut(dendro, cut(dendro, args.k))

    if p < 3:
        metric_slots = tuple(range(len(METRIC_IDS)))
    else:
        metric_slots = leaf_order(cluster_metrics(metric_correlations(table)))
    metric_ids = tuple(METRIC_IDS[i] for i in metric_slots)

    subgrid = assign_subgrid(metric_ids)
    if args.cell_px < subgrid.side:
        raise UsageError(
            f"--cell-px must be >= {subgrid.side} to give each metric a pixel"
        )
    layout = build_matrix_layout(
        pairwise_similarity(table),
        order,
        subgrid,
        assign_colors(metric_ids, invert_lightness=args.invert_lightness),
        group_boundaries=boundaries,
    )
    _write_output(args.output, render_svg(layout, cell_px=args.cell_px).encode("utf-8"))
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        groups = parse_group_spec(args.groups)
        result = generate(groups, n_stimuli=args.stimuli, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    _write_output(args.output, result.csv_bytes)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(persist_dir=args.data_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_RUNTIME
        if code != 0:
            print(f"server failed to start on port {args.port}", file=sys.stderr)
            return EXIT_RUNTIME
    except OSError as exc:
        print(f"cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazegroup",
        description="Group eye-tracking entities by weighted gaze-metric similarity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True, help="fixation CSV path, or - for stdin")
        p.add_argument("--output", default=None, help="output path, or - for stdout")
        p.add_argument(
            "--aggregate",
            choices=("mean", "median"),
            default="mean",
            help="per-entity aggregation across stimuli",
        )
        p.add_argument(
            "--strict",
            action="store_true",
            help="treat recoverable input oddities as errors",
        )

    p_metrics = sub.add_parser("metrics", help="compute the per-entity metric table")
    add_io(p_metrics)
    p_metrics.set_defaults(func=cmd_metrics)

    p_matrix = sub.add_parser("matrix", help="render the seriated similarity matrix")
    add_io(p_matrix)
    p_matrix.add_argument(
        "--weights",
        required=True,
        help="Metric=weight comma list summing to 1; unlisted metrics weigh 0",
    )
    p_matrix.add_argument(
        "--linkage", choices=("single", "complete", "average"), default="average"
    )
    p_matrix.add_argument("--k", type=int, default=None, help="cut into k groups")
    p_matrix.add_argument(
        "--invert-lightness",
        action="store_true",
        help="dark-for-similar instead of bright-for-similar",
    )
    p_matrix.add_argument("--cell-px", type=int, default=24, help="cell edge in pixels")
    p_matrix.set_defaults(func=cmd_matrix)

    p_synth = sub.add_parser("synth", help="generate a synthetic fixation dataset")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument(
        "--groups",
        default=DEFAULT_GROUPS,
        help="group spec, e.g. focal:20,ambient:20 or name:size:fixlo-fixhi:saclo-sachi",
    )
    p_synth.add_argument("--stimuli", type=int, default=3, help="stimuli per participant")
    p_synth.add_argument("--output", default=None)
    p_synth.set_defaults(func=cmd_synth)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument(
        "--data-dir", default=None, help="persist uploads and layouts here"
    )
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - boundary: report, do not crash
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
