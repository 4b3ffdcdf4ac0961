"""Command line interface: dataset building, statistics, solving,
scoring and format export.

Failures exit nonzero after printing a machine-readable error object
({"error": ..., "detail": ...}) on stderr. PQA_OUT_DIR provides the
default output root.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import dataset_io, encode
from .evalharness import PredictionSet, run_agent, score
from .taskgen import GenParams
from .tasks import ALL_TASKS, TaskId


def _out_root(value: str | None) -> Path:
    return Path(value or os.environ.get("PQA_OUT_DIR", "."))


def _tasks_arg(value: str) -> list[TaskId]:
    if value.lower() == "all":
        return list(ALL_TASKS)
    return [TaskId.from_name(value)]


def _load_params(path: str | None) -> GenParams:
    if path is None:
        return GenParams()
    return GenParams.from_dict(json.loads(Path(path).read_text()))


def _iter_task_dirs(root: Path) -> list[Path]:
    if (root / "manifest.json").exists():
        return [root]
    dirs = sorted(d for d in root.iterdir() if d.is_dir() and (d / "manifest.json").exists())
    if not dirs:
        raise FileNotFoundError(f"no dataset manifests under {root}")
    return dirs


def cmd_gen(args: argparse.Namespace) -> int:
    params = _load_params(args.params)
    out = _out_root(args.out)
    for task in _tasks_arg(args.task):
        manifest = dataset_io.write_dataset(out, task, args.count, args.seed, params, jobs=args.jobs)
        print(f"{task.value}: {args.count} pairs -> {args.count // 2} episodes, checksum {manifest.checksum[:16]}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    root = Path(args.inp)
    result = {}
    for task_dir in _iter_task_dirs(root):
        manifest, episodes = dataset_io.load_dataset(task_dir)
        stats = dataset_io.compute_stats(dataset_io.episode_pairs(episodes))
        result[manifest.task.value] = stats.to_dict()
    print(json.dumps(result, indent=2))
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    root = Path(args.inp)
    merged = PredictionSet(agent=args.agent)
    for task_dir in _iter_task_dirs(root):
        _, episodes = dataset_io.load_dataset(task_dir)
        ps = run_agent(episodes, args.agent)
        merged.entries.update(ps.entries)
    Path(args.out).write_text(merged.to_json())
    print(f"{len(merged.entries)} predictions -> {args.out}")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    root = Path(args.inp)
    episodes = []
    for task_dir in _iter_task_dirs(root):
        episodes.extend(dataset_io.load_dataset(task_dir)[1])
    preds = PredictionSet.from_json(Path(args.preds).read_text())
    report = score(episodes, preds)
    print(report.format_table())
    if report.missing:
        print(f"missing predictions: {len(report.missing)}")
    if report.malformed:
        print(f"malformed predictions: {len(report.malformed)}")
    Path(args.out).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    print(f"report -> {args.out}")
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    root = Path(args.inp)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for task_dir in _iter_task_dirs(root):
        manifest, episodes = dataset_io.load_dataset(task_dir)
        tdir = out / manifest.task.value
        tdir.mkdir(parents=True, exist_ok=True)
        if args.format == "json":
            for e in episodes:
                (tdir / f"{e.episode_id.split('-')[-1]}.json").write_bytes(dataset_io.write_episode_json(e))
        elif args.format == "pixmap":
            for e in episodes:
                stem = e.episode_id.split("-")[-1]
                grids = {
                    "context_q": e.context.question,
                    "context_a": e.context.answer,
                    "test_q": e.test_question,
                    "test_a": e.test_answer,
                }
                for name, g in grids.items():
                    (tdir / f"{stem}_{name}.ppm").write_bytes(dataset_io.render_grid(g, args.cell_px))
        elif args.format == "tensors":
            grids = []
            for e in episodes:
                grids.extend([e.context.question, e.context.answer, e.test_question, e.test_answer])
            encode.export_index_batch(tdir / "grids", encode.to_indices(grids))
            encode.export_pe_table(tdir / "pe_table", d=args.d)
        print(f"{manifest.task.value}: exported {len(episodes)} episodes as {args.format}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pqa", description="Gestalt grid-puzzle dataset tools")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a verified dataset tree")
    g.add_argument("--task", required=True, help="t1..t7 or 'all'")
    g.add_argument("--count", type=int, required=True, help="pairs per task (episodes = count/2)")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", default=None, help="output root (default $PQA_OUT_DIR or .)")
    g.add_argument("--params", default=None, help="JSON file overriding generation parameters")
    g.add_argument("--jobs", type=int, default=1, help="parallel workers (output is identical)")
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("stats", help="dataset statistics as JSON")
    s.add_argument("--in", dest="inp", required=True)
    s.set_defaults(fn=cmd_stats)

    so = sub.add_parser("solve", help="run a built-in agent over a dataset")
    so.add_argument("--in", dest="inp", required=True)
    so.add_argument("--agent", choices=["oracle", "identity"], default="oracle")
    so.add_argument("--out", default="preds.json")
    so.set_defaults(fn=cmd_solve)

    sc = sub.add_parser("score", help="score a predictions file")
    sc.add_argument("--in", dest="inp", required=True)
    sc.add_argument("--preds", required=True)
    sc.add_argument("--out", default="report.json")
    sc.set_defaults(fn=cmd_score)

    e = sub.add_parser("export", help="re-export a dataset in another format")
    e.add_argument("--in", dest="inp", required=True)
    e.add_argument("--format", choices=["json", "pixmap", "tensors"], required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--cell-px", type=int, default=8)
    e.add_argument("--d", type=int, default=512, help="embedding dimension for tensor export")
    e.set_defaults(fn=cmd_export)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except Exception as exc:  # noqa: BLE001 - uniform machine-readable failure
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
