"""Command-line interface: dataset generation, goal recognition, evaluation,
and trace rendering.

Exit codes: 0 success, 2 input/parse error, 3 generation failure,
4 demonstration contract violation (simultaneous object motion).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from goalrec import __version__
from goalrec.demogen import (
    GenerationError,
    NoiseParams,
    TaskSpec,
    all_task_specs,
    dataset_seed,
    generate,
)
from goalrec.domain import DomainError, default_scene
from goalrec.evaluation import DEFAULT_METHODS, format_table, run_experiment
from goalrec.logio import (
    SCHEMA_VERSION,
    ParseError,
    file_sha256,
    read_config,
    read_demo,
    read_goal,
    read_manifest,
    write_config,
    write_demo,
    write_goal,
    write_manifest,
    write_trace,
)
from goalrec.recognizer import BASELINES, METHOD_OURS, RecognizerParams, analyze, decide
from goalrec.render import render_demo
from goalrec.segmentation import SimultaneousMotionError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_GENERATION = 3
EXIT_CONTRACT = 4

SEED_ENV_VAR = "GOALREC_MASTER_SEED"


@dataclass(frozen=True)
class DatasetEntry:
    spec: TaskSpec
    demo: object
    ground_truth: frozenset


def _load_params(args):
    if getattr(args, "config", None):
        return read_config(args.config)
    return default_scene(), RecognizerParams(), NoiseParams()


def _master_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ParseError(f"{SEED_ENV_VAR}={env!r} is not an integer") from exc
    return 0


def cmd_gen(args) -> int:
    scene, _, noise = _load_params(args)
    master_seed = _master_seed(args)
    out_dir = args.out
    try:
        os.makedirs(out_dir, exist_ok=True)
        entries = []
        specs = all_task_specs()
        total = len(specs) * args.demos_per_task
        n = 0
        for spec_index, spec in enumerate(specs):
            for j in range(args.demos_per_task):
                seed = dataset_seed(master_seed, spec_index, j)
                try:
                    g = generate(spec, seed, noise, scene, return_bowl=j % 2 == 0)
                except GenerationError as exc:
                    print(f"generation failed for task {spec.label}: {exc}",
                          file=sys.stderr)
                    return EXIT_GENERATION
                demo_file = f"demo_{n:03d}.jsonl"
                truth_file = f"truth_{n:03d}.json"
                write_demo(os.path.join(out_dir, demo_file), g.demo)
                write_goal(os.path.join(out_dir, truth_file), g.ground_truth)
                entries.append({
                    "task": spec.label,
                    "spec": {"ingredient": spec.ingredient,
                             "blocked_step": spec.blocked_step,
                             "blocker": spec.blocker,
                             "blocker_intentional": spec.blocker_intentional},
                    "demo_index": j,
                    "seed": seed,
                    "return_bowl": g.return_bowl,
                    "demo_file": demo_file,
                    "truth_file": truth_file,
                    "sha256_demo": file_sha256(os.path.join(out_dir, demo_file)),
                    "sha256_truth": file_sha256(os.path.join(out_dir, truth_file)),
                })
                n += 1
                if not args.quiet:
                    print(f"[{n}/{total}] {spec.label} seed={seed}", file=sys.stderr)
        write_config(os.path.join(out_dir, "config.json"), scene, None, noise)
        write_manifest(os.path.join(out_dir, "manifest.json"), master_seed, entries)
    except OSError as exc:
        print(f"cannot write dataset: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    print(f"wrote {len(entries)} demonstrations to {out_dir}")
    return EXIT_OK


def load_dataset(dataset_dir: str, verify: bool = True):
    """Dataset entries from a manifest directory, checksum-verified."""
    manifest = read_manifest(os.path.join(dataset_dir, "manifest.json"))
    entries = []
    for e in manifest["entries"]:
        demo_path = os.path.join(dataset_dir, e["demo_file"])
        truth_path = os.path.join(dataset_dir, e["truth_file"])
        if verify:
            for path, want in ((demo_path, e["sha256_demo"]),
                               (truth_path, e["sha256_truth"])):
                try:
                    got = file_sha256(path)
                except OSError as exc:
                    raise ParseError(f"{path}: unreadable: {exc}") from exc
                if got != want:
                    raise ParseError(f"{path}: checksum mismatch")
        demo = read_demo(demo_path)
        truth = read_goal(truth_path, demo.scene)
        spec = TaskSpec(**e["spec"])
        entries.append(DatasetEntry(spec, demo, truth))
    return manifest, entries


def cmd_recognize(args) -> int:
    _, params, _ = _load_params(args)
    demo = read_demo(args.demo)
    trace = analyze(demo, params)
    tau = params.tau if args.method == "no_motion" else None
    goal = decide(trace, params, args.method, demo.scene, tau=tau)
    for p in sorted(goal):
        print(str(p))
    if args.trace:
        write_trace(args.trace, trace, goal)
    return EXIT_OK


def cmd_eval(args) -> int:
    _, params, _ = _load_params(args)
    manifest, dataset = load_dataset(args.dataset)
    methods = tuple(args.methods.split(",")) if args.methods else DEFAULT_METHODS
    for m in methods:
        if m not in BASELINES + (METHOD_OURS,):
            raise ParseError(f"unknown method {m!r}")

    def progress(done, total):
        if not args.quiet:
            print(f"analyzed {done}/{total} demonstrations", file=sys.stderr)

    predictions: list = []
    rows = run_experiment(dataset, params, n_splits=args.splits,
                          methods=methods, split_seed=args.split_seed,
                          progress=progress, predictions_out=predictions)
    table = format_table(rows)
    print(table)
    out_path = args.out or os.path.join(args.dataset, "metrics.json")
    import json
    doc = {"version": SCHEMA_VERSION,
           "master_seed": manifest["master_seed"],
           "split_seed": args.split_seed,
           "n_splits": args.splits,
           "rows": [r.as_dict() for r in rows],
           "predictions": predictions}
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    if not args.quiet:
        print(f"metrics written to {out_path}", file=sys.stderr)
    return EXIT_OK


def cmd_render(args) -> int:
    demo = read_demo(args.demo)
    trace_doc = None
    if args.trace:
        from goalrec.logio import read_trace
        trace_doc = read_trace(args.trace)
    svg = render_demo(demo, trace_doc)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goalrec",
        description="Goal recognition for tabletop demonstrations, with a "
                    "synthetic cooking-demo simulator and evaluation harness.")
    parser.add_argument("--version", action="version",
                        version=f"goalrec {__version__} (config schema {SCHEMA_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate the demonstration dataset")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", help="config document (JSON)")
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (default: ${SEED_ENV_VAR} or 0)")
    p.add_argument("--demos-per-task", type=int, default=4)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("recognize", help="recognize the goal of one demonstration")
    p.add_argument("demo", help="demonstration log (.jsonl)")
    p.add_argument("--config", help="config document (JSON)")
    p.add_argument("--method", default=METHOD_OURS,
                   choices=(METHOD_OURS,) + BASELINES)
    p.add_argument("--trace", help="write the per-segment audit trace (JSON)")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("eval", help="run the split-evaluation protocol")
    p.add_argument("dataset", help="dataset directory with manifest.json")
    p.add_argument("--config", help="config document (JSON)")
    p.add_argument("--methods", help="comma-separated method subset")
    p.add_argument("--splits", type=int, default=10)
    p.add_argument("--split-seed", type=int, default=7)
    p.add_argument("--out", help="metrics JSON path (default: <dataset>/metrics.json)")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", help="render a demonstration (and trace) to SVG")
    p.add_argument("demo", help="demonstration log (.jsonl)")
    p.add_argument("--trace", help="trace file from `recognize --trace`")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SimultaneousMotionError as exc:
        print(f"demonstration contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except GenerationError as exc:
        print(f"generation error: {exc}", file=sys.stderr)
        return EXIT_GENERATION


if __name__ == "__main__":
    sys.exit(main())
