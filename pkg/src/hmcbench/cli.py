"""Command line entry points.

    hmcbench run <config.json>
    hmcbench report <store_dir> --baseline <tag> [--dataset <name>]
    hmcbench sweep <config.json> --cbd-grids ... --base-grids ...
    hmcbench sample-hierarchy --classes N --seed S
    hmcbench dissim <dataset.csv> --method rbd|cbd [options]

Outputs are UTF-8 CSV/text on stdout or under the configured output
directory.  Exit code 0 on success; failures print one machine-readable
``error:<type>:<message>`` line on stderr and exit nonzero.  The
HMCBENCH_WORKERS environment variable sizes the worker pool.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .dataio import load_csv
from .dissimilarity import CbdPlan, cbd_matrix, rbd_matrix
from .hierarchy import sample_random_hierarchy, to_newick
from .learners import ClassifierSpec
from .runner import (ResultStore, config_from_json, report, run_experiment,
                     sweep_grid)


def _load_config(path: str):
    with open(path, encoding="utf-8") as fh:
        return config_from_json(json.load(fh))


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    store = run_experiment(cfg, workers=args.workers)
    total = sum(len(store.records(ds, tag)) for ds in store.datasets()
                for tag in store.tags(ds))
    print(f"stored {total} fold records in {store.directory}")
    return 0


def _cmd_report(args) -> int:
    store = ResultStore(args.store)
    table = report(store, args.baseline, dataset=args.dataset)
    print(table.text)
    out = Path(args.store) / "report.csv"
    out.write_text(table.csv, encoding="utf-8")
    print(f"wrote {out}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    cbd_grids = json.loads(args.cbd_grids)
    base_grids = json.loads(args.base_grids)
    store, csv_text = sweep_grid(cfg, cbd_grids, base_grids,
                                 workers=args.workers)
    out = Path(store.directory) / "sweep.csv"
    out.write_text(csv_text, encoding="utf-8")
    print(csv_text)
    print(f"wrote {out}")
    return 0


def _cmd_sample_hierarchy(args) -> int:
    h = sample_random_hierarchy(args.classes, args.seed)
    print(to_newick(h))
    return 0


def _cmd_dissim(args) -> int:
    label = (int(args.label_column) if args.label_column.lstrip("-").isdigit()
             else args.label_column)
    ds = load_csv(args.dataset, label, header=not args.no_header)
    if args.method == "rbd":
        matrix = rbd_matrix(ds, args.metric)
    else:
        plan = CbdPlan(classifier=ClassifierSpec(kind=args.classifier),
                       scheme=args.scheme, mc_folds=args.mc_folds,
                       variant=args.variant)
        matrix = cbd_matrix(ds, plan, args.seed)
    sys.stdout.write(matrix.to_csv(ds.class_names))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmcbench",
        description="Benchmark hierarchical multi-class classification "
                    "methods against random-hierarchy baselines.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--workers", type=int, default=None)
    p_run.set_defaults(func=_cmd_run)

    p_rep = sub.add_parser("report", help="comparison table from a store")
    p_rep.add_argument("store")
    p_rep.add_argument("--baseline", required=True)
    p_rep.add_argument("--dataset", default=None)
    p_rep.set_defaults(func=_cmd_report)

    p_sweep = sub.add_parser("sweep", help="CBD-vs-base complexity grid")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--cbd-grids", required=True,
                         help='JSON list of cp grids, e.g. "[[0.5,0.1],[0.5,0.1,0.01]]"')
    p_sweep.add_argument("--base-grids", required=True)
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_sample = sub.add_parser("sample-hierarchy",
                              help="print a uniform random hierarchy")
    p_sample.add_argument("--classes", type=int, required=True)
    p_sample.add_argument("--seed", type=int, required=True)
    p_sample.set_defaults(func=_cmd_sample_hierarchy)

    p_dis = sub.add_parser("dissim", help="print a dissimilarity matrix CSV")
    p_dis.add_argument("dataset")
    p_dis.add_argument("--method", choices=["rbd", "cbd"], required=True)
    p_dis.add_argument("--label-column", default="label")
    p_dis.add_argument("--no-header", action="store_true")
    p_dis.add_argument("--metric", choices=["euclidean", "cosine"],
                       default="euclidean")
    p_dis.add_argument("--classifier", choices=["cart", "logistic"],
                       default="cart")
    p_dis.add_argument("--scheme", choices=["single_multiclass", "ova"],
                       default="single_multiclass")
    p_dis.add_argument("--variant",
                       choices=["ava_proxy", "confusion_subset",
                                "confusion_rows"],
                       default="ava_proxy")
    p_dis.add_argument("--mc-folds", type=int, default=10)
    p_dis.add_argument("--seed", type=int, default=0)
    p_dis.set_defaults(func=_cmd_dissim)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error:{type(exc).__name__}:{exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
