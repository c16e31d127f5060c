"""Command-line entry point: ``artbg <command> --config run.ini``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .config import load_config
from .pipeline import STAGES, run_pipeline, run_stage
from .verify import run_checks


def build_parser():
    p = argparse.ArgumentParser(prog="artbg", description="Artificial-background transmission eigenvalue workbench")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="run configuration file")
        sp.add_argument("--out", help="run directory (overrides [output] dir)")
        sp.add_argument("--seed", type=int, help="noise seed override")
        sp.add_argument("--alpha", type=float, help="alpha0 override")
        sp.add_argument("--jobs", type=int, default=1, help="parallel workers for per-k work")

    for name in STAGES:
        common(sub.add_parser(name, help=f"run the {name} stage"))
    pipe = sub.add_parser("pipeline", help="run all stages and write the manifest")
    common(pipe)
    pipe.add_argument("--stage", choices=STAGES, help="run only this stage")
    sub.add_parser("verify", help="run the quick oracle checks")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "verify":
        return 0 if run_checks() else 1

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = args.out or cfg.output_dir
    stage = args.command if args.command in STAGES else getattr(args, "stage", None)

    if stage is not None:
        try:
            for note in run_stage(stage, cfg, out, args.jobs, args.alpha):
                print(f"note: {note}", file=sys.stderr)
        except Exception as exc:
            print(f"error in stage {stage}: {exc}", file=sys.stderr)
            return 1
        return 0

    path, ok = run_pipeline(cfg, out, args.jobs, args.alpha)
    print(f"{'completed' if ok else 'FAILED'}: {path / 'manifest.json'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
