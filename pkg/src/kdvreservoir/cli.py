"""Command-line experiment runner.

Subcommands: run, replay, compare, export-dataset.  Flags override
values from an optional JSON config file; the effective configuration is
always written into the run manifest.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .experiments import (
    ExperimentConfig,
    compare_encodings,
    export_dataset_csv,
    replay,
    run_experiment,
)
from .tasks import sigmoid_dataset, xnor_dataset


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if args.config:
        data.update(json.loads(Path(args.config).read_text()))
    overrides = {
        "task": args.task,
        "scheme": args.scheme,
        "budget": args.budget,
        "out_dir": args.out,
        "workers": args.workers,
        "debug_fields": args.debug_fields or None,
    }
    if args.seeds:
        overrides["seeds"] = tuple(int(s) for s in args.seeds.split(","))
    data.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(data)


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--task", choices=("xnor", "regression"))
    parser.add_argument("--scheme", choices=("amplitude", "frequency"))
    parser.add_argument("--budget", type=int)
    parser.add_argument("--seeds", help="comma-separated seed list, e.g. 0,1,2")
    parser.add_argument("--config", help="JSON file with ExperimentConfig fields")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int)
    parser.add_argument(
        "--debug-fields", action="store_true", help="dump field snapshots during replay"
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="kdvreservoir")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a MAP-Elites experiment")
    _add_run_flags(run_p)

    replay_p = sub.add_parser("replay", help="re-simulate an archived genotype")
    replay_p.add_argument("manifest", help="path to a run manifest.json")
    replay_p.add_argument("--seed", type=int, required=True)
    replay_p.add_argument(
        "--genotype", default="best", help="'best' or an archive cell 'row,col'"
    )

    compare_p = sub.add_parser("compare", help="compare amplitude vs frequency archives")
    compare_p.add_argument("--amplitude", nargs="+", required=True, help="archive CSVs")
    compare_p.add_argument("--frequency", nargs="+", required=True, help="archive CSVs")
    compare_p.add_argument("--out", help="write the report JSON here")

    export_p = sub.add_parser("export-dataset", help="dump a task dataset as CSV")
    export_p.add_argument("--task", choices=("xnor", "regression"), required=True)
    export_p.add_argument("--out", required=True)

    args = parser.parse_args(argv)

    if args.command == "run":
        try:
            config = _build_config(args)
        except (ValueError, TypeError, json.JSONDecodeError) as exc:
            parser.error(f"invalid configuration: {exc}")
        manifest = run_experiment(config)
        print(f"wrote {Path(config.out_dir) / 'manifest.json'}")
        for seed, paths in manifest.seed_outputs.items():
            print(f"  seed {seed}: {paths['archive']}")
        return 0

    if args.command == "replay":
        summary = replay(Path(args.manifest), args.seed, args.genotype)
        print(json.dumps(summary, indent=2, sort_keys=True))
        return 0

    if args.command == "compare":
        report = compare_encodings(args.amplitude, args.frequency)
        payload = json.dumps(dataclasses.asdict(report), indent=2, sort_keys=True)
        if args.out:
            Path(args.out).write_text(payload + "\n")
        print(payload)
        return 0

    if args.command == "export-dataset":
        dataset = xnor_dataset() if args.task == "xnor" else sigmoid_dataset()
        export_dataset_csv(dataset, Path(args.out))
        print(f"wrote {args.out}")
        return 0

    return 2


if __name__ == "__main__":
    sys.exit(main())
