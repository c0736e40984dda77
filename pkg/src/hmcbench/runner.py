"""Config-driven benchmark execution with resumable, deterministic results.

An experiment is a JSON document: datasets, one shared Monte Carlo split
plan (shared so per-fold accuracies stay paired across methods), and a
list of tagged methods.  Every (method, fold) task derives its random
stream from (master seed, fold, crc32(tag)), so results are independent
of scheduling and of which tasks were already on disk.

Hierarchy extraction, dissimilarity estimation, and hyperparameter tuning
only ever receive the fold's training slice; provenance ids on slices are
checked against the fold's test rows at each stage and an optional probe
callback observes those checks.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .dataio import (Dataset, SplitPlan, load_csv, monte_carlo_splits,
                     zscore_apply, zscore_fit)
from .dissimilarity import CbdPlan, cbd_matrix, rbd_matrix
from .hierarchy import (best_of_50, depth_stats, from_newick, hac_build,
                        hkm_build, sample_random_hierarchy)
from .hmc import evaluate, train_hmc
from .learners import (ClassifierSpec, fit_ova, fit_single_multiclass,
                       predict_labels)
from .stats import (ComparisonReport, FoldRecord, arrow_marks, compare,
                    corrected_variance, format_mean_se)

HIERARCHY_SOURCES = ("random", "rbd", "cbd", "best_of_50", "ova_baseline",
                     "single_baseline", "fixed_newick")
WORKERS_ENV = "HMCBENCH_WORKERS"


class ConfigError(ValueError):
    """Invalid experiment configuration; raised before any work starts."""


class LeakageError(RuntimeError):
    """A pipeline stage observed rows from the fold's test portion."""


@dataclass(frozen=True)
class DatasetConfig:
    path: str
    label_column: str | int = "label"
    header: bool = True
    name: str | None = None
    zscore: bool = False


@dataclass(frozen=True)
class MethodConfig:
    tag: str
    hierarchy_source: str
    classifier: ClassifierSpec
    clustering: str = "hac"
    rbd_metric: str = "euclidean"
    cbd: CbdPlan | None = None
    newick: str | None = None
    n_candidates: int = 50
    cv_folds: int = 3

    def __post_init__(self):
        if self.hierarchy_source not in HIERARCHY_SOURCES:
            raise ConfigError(f"unknown hierarchy_source "
                              f"{self.hierarchy_source!r} for {self.tag!r}")
        if self.clustering not in ("hac", "hkm"):
            raise ConfigError(f"unknown clustering {self.clustering!r}")
        if self.hierarchy_source == "cbd" and self.cbd is None:
            raise ConfigError(f"method {self.tag!r} needs a cbd plan")
        if self.hierarchy_source == "fixed_newick" and not self.newick:
            raise ConfigError(f"method {self.tag!r} needs a newick string")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: str
    datasets: tuple[DatasetConfig, ...]
    split: SplitPlan
    methods: tuple[MethodConfig, ...]
    output_dir: str

    def __post_init__(self):
        tags = [m.tag for m in self.methods]
        if len(set(tags)) != len(tags):
            dupes = sorted({t for t in tags if tags.count(t) > 1})
            raise ConfigError(f"duplicate method tags: {dupes}")
        if not self.methods:
            raise ConfigError("no methods configured")
        if not self.datasets:
            raise ConfigError("no datasets configured")


# ---------------------------------------------------------------------------
# JSON round-trip.


def _spec_from_json(obj: dict) -> ClassifierSpec:
    known = {f for f in ClassifierSpec.__dataclass_fields__}
    extra = set(obj) - known
    if extra:
        raise ConfigError(f"unknown classifier fields: {sorted(extra)}")
    if "cart_cp_grid" in obj:
        obj = dict(obj, cart_cp_grid=tuple(obj["cart_cp_grid"]))
    return ClassifierSpec(**obj)


def _cbd_from_json(obj: dict) -> CbdPlan:
    obj = dict(obj)
    classifier = _spec_from_json(obj.pop("classifier", {}))
    return CbdPlan(classifier=classifier, **obj)


def config_from_json(obj: dict) -> ExperimentConfig:
    """Parse and fully validate a config document."""
    try:
        datasets = tuple(DatasetConfig(**d) for d in obj["datasets"])
        split = SplitPlan(**obj["split"])
        methods = []
        for m in obj["methods"]:
            m = dict(m)
            classifier = _spec_from_json(m.pop("classifier", {}))
            cbd = _cbd_from_json(m.pop("cbd")) if "cbd" in m else None
            methods.append(MethodConfig(classifier=classifier, cbd=cbd, **m))
        return ExperimentConfig(
            experiment_id=obj.get("experiment_id", "experiment"),
            datasets=datasets, split=split, methods=tuple(methods),
            output_dir=obj.get("output_dir", "results"))
    except (TypeError, KeyError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config: {exc}") from exc


def config_to_json(cfg: ExperimentConfig) -> dict:
    def spec_dict(spec: ClassifierSpec) -> dict:
        return {"kind": spec.kind, "cart_cp_grid": list(spec.cart_cp_grid),
                "cart_min_split": spec.cart_min_split,
                "cart_min_bucket": spec.cart_min_bucket,
                "cart_max_depth": spec.cart_max_depth,
                "logistic_max_iter": spec.logistic_max_iter,
                "logistic_tol": spec.logistic_tol,
                "tuning_folds": spec.tuning_folds}

    methods = []
    for m in cfg.methods:
        entry = {"tag": m.tag, "hierarchy_source": m.hierarchy_source,
                 "classifier": spec_dict(m.classifier),
                 "clustering": m.clustering, "rbd_metric": m.rbd_metric,
                 "n_candidates": m.n_candidates, "cv_folds": m.cv_folds}
        if m.cbd is not None:
            entry["cbd"] = {"classifier": spec_dict(m.cbd.classifier),
                            "scheme": m.cbd.scheme, "mc_folds": m.cbd.mc_folds,
                            "variant": m.cbd.variant}
        if m.newick is not None:
            entry["newick"] = m.newick
        methods.append(entry)
    return {"experiment_id": cfg.experiment_id,
            "datasets": [{"path": d.path, "label_column": d.label_column,
                          "header": d.header, "name": d.name,
                          "zscore": d.zscore} for d in cfg.datasets],
            "split": {"seed": cfg.split.seed, "n_folds": cfg.split.n_folds,
                      "train_fraction": cfg.split.train_fraction},
            "methods": methods, "output_dir": cfg.output_dir}


def config_hash(cfg: ExperimentConfig) -> str:
    blob = json.dumps(config_to_json(cfg), sort_keys=True,
                      separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Result store.

_CSV_FIELDS = ("dataset", "method_tag", "fold", "accuracy",
               "mean_evaluations", "wall_time_s", "max_depth",
               "mean_leaf_depth")


class ResultStore:
    """Append-only fold records under one directory, resumable by key.

    Records live in ``records.csv`` with full-precision floats; re-adding
    an existing (dataset, method, fold) key is rejected, and runners skip
    keys that are already present (idempotent resume).
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.records_path = self.directory / "records.csv"
        self.meta_path = self.directory / "meta.json"
        self._rows: dict[tuple[str, str, int], FoldRecord] = {}
        self.meta: dict = {}
        if self.meta_path.exists():
            self.meta = json.loads(self.meta_path.read_text())
        if self.records_path.exists():
            for line in self.records_path.read_text().splitlines()[1:]:
                if not line.strip():
                    continue
                cells = line.split(",")
                rec = FoldRecord(fold=int(cells[2]), method_tag=cells[1],
                                 accuracy=float(cells[3]),
                                 mean_evaluations=float(cells[4]),
                                 wall_time_s=float(cells[5]),
                                 max_depth=float(cells[6]),
                                 mean_leaf_depth=float(cells[7]))
                self._rows[(cells[0], cells[1], int(cells[2]))] = rec
        else:
            self.records_path.write_text(",".join(_CSV_FIELDS) + "\n")

    def write_meta(self, meta: dict) -> None:
        self.meta = meta
        self.meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True))

    def has(self, dataset: str, tag: str, fold: int) -> bool:
        return (dataset, tag, fold) in self._rows

    def add(self, dataset: str, record: FoldRecord) -> None:
        key = (dataset, record.method_tag, record.fold)
        if key in self._rows:
            raise ValueError(f"record already present: {key}")
        self._rows[key] = record
        cells = [dataset, record.method_tag, str(record.fold),
                 f"{record.accuracy:.17g}", f"{record.mean_evaluations:.17g}",
                 f"{record.wall_time_s:.6f}", f"{record.max_depth:.17g}",
                 f"{record.mean_leaf_depth:.17g}"]
        with open(self.records_path, "a", encoding="utf-8") as fh:
            fh.write(",".join(cells) + "\n")

    def datasets(self) -> list[str]:
        return sorted({k[0] for k in self._rows})

    def tags(self, dataset: str) -> list[str]:
        seen = []
        for (ds, tag, _fold) in self._rows:
            if ds == dataset and tag not in seen:
                seen.append(tag)
        return seen

    def records(self, dataset: str, tag: str) -> list[FoldRecord]:
        recs = [r for (ds, t, _f), r in self._rows.items()
                if ds == dataset and t == tag]
        return sorted(recs, key=lambda r: r.fold)


# ---------------------------------------------------------------------------
# Task execution.


def _assert_disjoint(stage: str, fold: int, tag: str, train_rows, test_rows,
                     probe) -> None:
    overlap = np.intersect1d(train_rows, test_rows)
    if overlap.size:
        raise LeakageError(
            f"stage {stage!r} of method {tag!r}, fold {fold}: "
            f"{overlap.size} test rows visible to training-side code")
    if probe is not None:
        probe(fold=fold, method_tag=tag, stage=stage,
              train_rows=np.asarray(train_rows), test_rows=np.asarray(test_rows))


def _task_rng(master_seed: int, fold: int, tag: str) -> np.random.Generator:
    key = zlib.crc32(tag.encode())
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(fold, key)))


def _extract_hierarchy(method: MethodConfig, train: Dataset, fold: int,
                       test_rows, gen, probe, class_names):
    if method.hierarchy_source == "random":
        return sample_random_hierarchy(train.n_classes, gen)
    if method.hierarchy_source == "fixed_newick":
        return from_newick(method.newick, class_names)
    if method.hierarchy_source == "best_of_50":
        return best_of_50(train, method.classifier,
                          n_candidates=method.n_candidates,
                          cv_folds=method.cv_folds, rng=gen)
    if method.hierarchy_source == "rbd":
        matrix = rbd_matrix(train, method.rbd_metric)
    else:  # cbd
        cbd_seed = int(gen.integers(0, 2 ** 63 - 1))
        matrix = cbd_matrix(train, method.cbd, cbd_seed)
    _assert_disjoint("dissimilarity", fold, method.tag, train.source_rows,
                     test_rows, probe)
    if method.clustering == "hac":
        return hac_build(matrix)
    return hkm_build(matrix, gen)


def run_task(ds: Dataset, method: MethodConfig, fold: int, train_idx,
             test_idx, split: SplitPlan, probe=None,
             zscore: bool = False) -> FoldRecord:
    """Run one (method, fold) cell and return its record."""
    start = time.perf_counter()
    train = ds.subset(train_idx)
    test = ds.subset(test_idx)
    if zscore:
        # standardization parameters come from the training slice only
        mean, std = zscore_fit(train.features)
        train = Dataset(zscore_apply(train.features, mean, std), train.labels,
                        train.class_names, train.name, train.source_rows)
        test = Dataset(zscore_apply(test.features, mean, std), test.labels,
                       test.class_names, test.name, test.source_rows)
    gen = _task_rng(split.seed, fold, method.tag)
    test_rows = test.source_rows

    n = ds.n_classes
    if method.hierarchy_source == "single_baseline":
        _assert_disjoint("tuning", fold, method.tag, train.source_rows,
                         test_rows, probe)
        model = fit_single_multiclass(method.classifier, train.features,
                                      train.labels, n_classes=n)
        pred = predict_labels(model, test.features)
        accuracy = float(np.mean(pred == test.labels))
        record = FoldRecord(fold, method.tag, accuracy, 1.0,
                            time.perf_counter() - start)
    elif method.hierarchy_source == "ova_baseline":
        _assert_disjoint("tuning", fold, method.tag, train.source_rows,
                         test_rows, probe)
        ensemble = fit_ova(method.classifier, train.features, train.labels,
                           n_classes=n)
        pred = ensemble.predict(test.features)
        accuracy = float(np.mean(pred == test.labels))
        record = FoldRecord(fold, method.tag, accuracy, float(n),
                            time.perf_counter() - start)
    else:
        h = _extract_hierarchy(method, train, fold, test_rows, gen, probe,
                               ds.class_names)
        _assert_disjoint("hierarchy", fold, method.tag, train.source_rows,
                         test_rows, probe)
        _assert_disjoint("tuning", fold, method.tag, train.source_rows,
                         test_rows, probe)
        trained = train_hmc(h, train, method.classifier)
        accuracy, mean_evals = evaluate(trained, test)
        stats = depth_stats(h)
        record = FoldRecord(fold, method.tag, accuracy, mean_evals,
                            time.perf_counter() - start,
                            float(stats.max_depth), stats.mean_leaf_depth)
    return record


def _prepare_dataset(ds_cfg: DatasetConfig) -> Dataset:
    return load_csv(ds_cfg.path, ds_cfg.label_column, header=ds_cfg.header,
                    name=ds_cfg.name)


_WORKER_STATE: dict = {}


def _init_worker(datasets, split, methods, zscore_flags):
    _WORKER_STATE["datasets"] = datasets
    _WORKER_STATE["split"] = split
    _WORKER_STATE["methods"] = {m.tag: m for m in methods}
    _WORKER_STATE["zscore"] = zscore_flags


def _worker_run(args):
    ds_name, tag, fold, train_idx, test_idx = args
    ds = _WORKER_STATE["datasets"][ds_name]
    method = _WORKER_STATE["methods"][tag]
    split = _WORKER_STATE["split"]
    zscore = _WORKER_STATE["zscore"][ds_name]
    return ds_name, run_task(ds, method, fold, train_idx, test_idx, split,
                             zscore=zscore)


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(WORKERS_ENV, "")
    return max(1, int(env)) if env.strip() else 1


def run_experiment(cfg: ExperimentConfig, probe=None,
                   workers: int | None = None) -> ResultStore:
    """Execute every (dataset, method, fold) cell that is not yet stored.

    Deterministic given the config: seeds derive from (master seed, fold,
    method tag), never from scheduling.  With ``workers`` > 1 (or the
    HMCBENCH_WORKERS environment variable) cells run in a process pool;
    the probe callback is only supported in-process.
    """
    digest = config_hash(cfg)
    store = ResultStore(cfg.output_dir)
    if store.meta and store.meta.get("config_hash") not in (None, digest):
        raise ConfigError(
            f"output directory {cfg.output_dir} holds results for a "
            f"different config (hash {store.meta.get('config_hash')}, "
            f"expected {digest})")

    datasets = {}
    meta_datasets = {}
    zscore_flags = {}
    frac = cfg.split.train_fraction
    for ds_cfg in cfg.datasets:
        ds = _prepare_dataset(ds_cfg)
        if ds.name in datasets:
            raise ConfigError(f"duplicate dataset name {ds.name!r}")
        datasets[ds.name] = ds
        zscore_flags[ds.name] = ds_cfg.zscore
        meta_datasets[ds.name] = {
            "n_rows": ds.n_rows, "n_classes": ds.n_classes,
            "class_names": list(ds.class_names),
            "zscore": ds_cfg.zscore,
        }
    store.write_meta({
        "experiment_id": cfg.experiment_id, "config_hash": digest,
        "config": config_to_json(cfg), "datasets": meta_datasets,
        "n_train_nominal": round(frac * 1_000_000),
        "n_test_nominal": round((1.0 - frac) * 1_000_000),
        "versions": {"hmcbench": __version__, "numpy": np.__version__},
    })

    tasks = []
    for ds_name, ds in datasets.items():
        splits = monte_carlo_splits(ds, cfg.split)
        for method in cfg.methods:
            for fold, (train_idx, test_idx) in enumerate(splits):
                if store.has(ds_name, method.tag, fold):
                    continue
                tasks.append((ds_name, method.tag, fold, train_idx, test_idx))

    n_workers = _worker_count(workers)
    if n_workers <= 1 or probe is not None:
        methods = {m.tag: m for m in cfg.methods}
        for ds_name, tag, fold, train_idx, test_idx in tasks:
            try:
                record = run_task(datasets[ds_name], methods[tag], fold,
                                  train_idx, test_idx, cfg.split, probe,
                                  zscore=zscore_flags[ds_name])
            except Exception as exc:
                raise RuntimeError(
                    f"[dataset={ds_name} method={tag} fold={fold}] "
                    f"{type(exc).__name__}: {exc}") from exc
            store.add(ds_name, record)
    else:
        with ProcessPoolExecutor(
                max_workers=n_workers, initializer=_init_worker,
                initargs=(datasets, cfg.split, cfg.methods,
                          zscore_flags)) as pool:
            for ds_name, record in pool.map(_worker_run, tasks):
                store.add(ds_name, record)
    return store


# ---------------------------------------------------------------------------
# Reporting.


@dataclass(frozen=True)
class ReportTable:
    text: str
    csv: str
    comparisons: dict


def report(store: ResultStore, baseline_tag: str,
           dataset: str | None = None) -> ReportTable:
    """Mean±corrected-SE per method with significance arrows vs a baseline."""
    names = store.datasets()
    if dataset is not None:
        names = [dataset]
    n_train = store.meta.get("n_train_nominal", 9)
    n_test = store.meta.get("n_test_nominal", 1)
    lines = []
    csv_lines = ["dataset,method,mean_accuracy,corrected_se,arrows,direction,"
                 "p_value,mean_evaluations,max_depth,mean_leaf_depth"]
    comparisons = {}
    for ds_name in names:
        tags = store.tags(ds_name)
        if baseline_tag not in tags:
            raise ValueError(f"baseline tag {baseline_tag!r} not in store "
                             f"for dataset {ds_name!r} (tags: {tags})")
        base_records = store.records(ds_name, baseline_tag)
        lines.append(f"dataset: {ds_name} (baseline: {baseline_tag})")
        header = (f"{'method':<24}{'accuracy':<20}{'p vs base':<12}"
                  f"{'evals':<8}{'depth':<12}")
        lines.append(header)
        lines.append("-" * len(header))
        for tag in tags:
            recs = store.records(ds_name, tag)
            accs = [r.accuracy for r in recs]
            mean, se = corrected_variance(accs, n_train, n_test)
            evals = float(np.mean([r.mean_evaluations for r in recs]))
            depths = [r.mean_leaf_depth for r in recs
                      if not math.isnan(r.mean_leaf_depth)]
            mean_depth = float(np.mean(depths)) if depths else float("nan")
            maxima = [r.max_depth for r in recs if not math.isnan(r.max_depth)]
            max_depth = float(np.max(maxima)) if maxima else float("nan")
            if tag == baseline_tag:
                marks, p_text, cmp_report = "", "-", None
            else:
                cmp_report = compare(recs, base_records, n_train, n_test)
                marks = arrow_marks(cmp_report.arrows, cmp_report.direction)
                p_text = f"{cmp_report.p_value:.4g}"
                comparisons[(ds_name, tag)] = cmp_report
            cell = format_mean_se(mean, se) + marks
            depth_cell = ("-" if math.isnan(mean_depth)
                          else f"{mean_depth:.2f}/{max_depth:.0f}")
            lines.append(f"{tag:<24}{cell:<20}{p_text:<12}{evals:<8.2f}"
                         f"{depth_cell:<12}")
            arrows = 0 if cmp_report is None else cmp_report.arrows
            direction = "none" if cmp_report is None else cmp_report.direction
            p_val = "" if cmp_report is None else f"{cmp_report.p_value:.17g}"
            csv_lines.append(
                f"{ds_name},{tag},{mean:.17g},{se:.17g},{arrows},{direction},"
                f"{p_val},{evals:.17g},{max_depth:.17g},{mean_depth:.17g}")
        lines.append("")
    return ReportTable("\n".join(lines).rstrip() + "\n",
                       "\n".join(csv_lines) + "\n", comparisons)


def sweep_grid(cfg: ExperimentConfig, cbd_cp_grids, base_cp_grids,
               template_tag: str | None = None, workers: int | None = None):
    """Cross CBD-classifier complexity against base-classifier complexity.

    Takes a config whose method list contains one cbd-sourced template
    method, clones it over the cartesian grid of cp grids, runs everything
    under the shared split plan, and returns (store, csv) where the CSV has
    one line per grid cell.
    """
    if not cbd_cp_grids or not base_cp_grids:
        raise ConfigError("both sweep axes must be nonempty")
    candidates = [m for m in cfg.methods if m.hierarchy_source == "cbd"]
    if template_tag is not None:
        candidates = [m for m in candidates if m.tag == template_tag]
    if len(candidates) != 1:
        raise ConfigError("sweep needs exactly one cbd template method")
    template = candidates[0]
    grid_methods = []
    for ci, cbd_grid in enumerate(cbd_cp_grids):
        for bi, base_grid in enumerate(base_cp_grids):
            cbd_spec = replace(template.cbd.classifier,
                               cart_cp_grid=tuple(cbd_grid))
            base_spec = replace(template.classifier,
                                cart_cp_grid=tuple(base_grid))
            grid_methods.append(replace(
                template, tag=f"{template.tag}_cbd{ci}_base{bi}",
                classifier=base_spec,
                cbd=replace(template.cbd, classifier=cbd_spec)))
    sweep_cfg = replace(cfg, experiment_id=cfg.experiment_id + "_sweep",
                        methods=tuple(grid_methods))
    store = run_experiment(sweep_cfg, workers=workers)
    n_train = store.meta["n_train_nominal"]
    n_test = store.meta["n_test_nominal"]
    csv_lines = ["dataset,cbd_level,base_level,cbd_cp_grid,base_cp_grid,"
                 "mean_accuracy,corrected_se"]
    for ds_name in store.datasets():
        for ci, cbd_grid in enumerate(cbd_cp_grids):
            for bi, base_grid in enumerate(base_cp_grids):
                tag = f"{template.tag}_cbd{ci}_base{bi}"
                accs = [r.accuracy for r in store.records(ds_name, tag)]
                mean, se = corrected_variance(accs, n_train, n_test)
                cbd_text = "|".join(f"{c:g}" for c in cbd_grid)
                base_text = "|".join(f"{c:g}" for c in base_grid)
                csv_lines.append(f"{ds_name},{ci},{bi},{cbd_text},{base_text},"
                                 f"{mean:.17g},{se:.17g}")
    return store, "\n".join(csv_lines) + "\n"


def emit_classcount_summary(stores, random_tag: str = "random") -> str:
    """Relative accuracy gain over the random hierarchy, per dataset/method.

    One CSV line per (dataset, method), sorted by class count ascending:
    n_classes, dataset, method, (acc - acc_random)/acc_random, p-value.
    """
    rows = []
    for store in stores:
        n_train = store.meta.get("n_train_nominal", 9)
        n_test = store.meta.get("n_test_nominal", 1)
        for ds_name in store.datasets():
            tags = store.tags(ds_name)
            if random_tag not in tags:
                raise ValueError(f"store for {ds_name!r} lacks the random "
                                 f"baseline {random_tag!r}")
            base = store.records(ds_name, random_tag)
            base_mean = float(np.mean([r.accuracy for r in base]))
            n_classes = store.meta["datasets"][ds_name]["n_classes"]
            for tag in tags:
                if tag == random_tag:
                    continue
                recs = store.records(ds_name, tag)
                mean = float(np.mean([r.accuracy for r in recs]))
                rel = (mean - base_mean) / base_mean
                p = compare(recs, base, n_train, n_test).p_value
                rows.append((n_classes, ds_name, tag, rel, p))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    lines = ["n_classes,dataset,method,relative_accuracy_diff,p_value"]
    for n_classes, ds_name, tag, rel, p in rows:
        lines.append(f"{n_classes},{ds_name},{tag},{rel:.17g},{p:.17g}")
    return "\n".join(lines) + "\n"
