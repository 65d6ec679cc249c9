"""``memclass`` command line: prepare, train, evaluate, predict, synth, report.

Commands talk to each other only through files. Exit codes: 0 success,
2 usage, 3 data, 4 model/schema.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field

from . import ingest, metrics, model_store, synth
from .classifiers import DISPLAY_NAMES, canonical_kind, parse_overrides, predict_batch, train
from .data import BINARY, MULTICLASS, LabelSchema, LabelVector
from .errors import DataError, MemclassError, ModelError, UsageError
from .fileio import atomic_write, check_writable
from .pipeline import (
    PREPARED_META,
    PreparedMeta,
    apply_minmax,
    categorical_levels,
    fit_minmax,
    read_prepared_meta,
    read_split_csv,
    split_csv_text,
    stratified_split,
)

log = logging.getLogger("memclass")

TRAIN_CSV = "train.csv"
TEST_CSV = "test.csv"


def default_seed() -> int:
    value = os.environ.get("MEMCLASS_SEED", "0")
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"MEMCLASS_SEED must be an integer, got {value!r}") from None


@dataclass
class RunConfig:
    task: str = MULTICLASS
    seed: int = 0
    ratio: float = 0.8
    input: str | None = None
    inputs: list = field(default_factory=list)
    out: str | None = None
    model: str | None = None
    model_path: str | None = None
    hyper: list = field(default_factory=list)
    fmt: str = "table"
    force: bool = False
    fit_scaler_on_all: bool = False
    drop_bad_rows: bool = False
    categorical: list = field(default_factory=list)
    drop: list = field(default_factory=list)
    class_column: str = ingest.CLASS_COLUMN
    category_column: str = ingest.CATEGORY_COLUMN
    label: str | None = None
    reference: bool = False

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise UsageError(f"--split must lie in (0, 1), got {self.ratio}")
        if self.task not in (BINARY, MULTICLASS):
            raise UsageError(f"--task must be binary or multiclass, got {self.task!r}")
        if self.model is not None:
            self.model = canonical_kind(self.model)


def _emit(text: str = "") -> None:
    print(text)


def _write_all(files: dict, force: bool) -> None:
    """Check every target first so a collision leaves nothing half-written."""
    for path in files:
        check_writable(path, force)
    for path, text in files.items():
        atomic_write(path, text, force=True)


def _split_paths(path: str, default_name: str):
    """Resolve a prepared directory or CSV path to (csv path, sidecar path)."""
    if path is None:
        raise UsageError("--input is required")
    if os.path.isdir(path):
        return os.path.join(path, default_name), os.path.join(path, PREPARED_META)
    return path, os.path.join(os.path.dirname(os.path.abspath(path)), PREPARED_META)


def cmd_prepare(cfg: RunConfig) -> dict:
    if cfg.out is None:
        raise UsageError("--out directory is required")
    schema = LabelSchema(cfg.task)
    raw = ingest.load_csv(cfg.input, drop_bad_rows=cfg.drop_bad_rows)
    if cfg.class_column not in raw.column_names:
        raise DataError(f"{cfg.input}: label column {cfg.class_column!r} not found")
    drop = [c for c in (cfg.category_column, cfg.class_column) if c in raw.column_names]
    drop += [c for c in cfg.drop if c not in drop]
    if cfg.drop_bad_rows:
        bad = set(ingest.find_bad_rows(raw, schema, drop, cfg.categorical,
                                       cfg.class_column, cfg.category_column))
        if bad:
            raw = raw.select_rows([i for i in range(raw.row_count) if i not in bad])
    if raw.dropped_rows:
        log.warning("dropped %d malformed rows", raw.dropped_rows)
    labels = ingest.derive_labels(raw, schema, cfg.class_column, cfg.category_column)
    levels = categorical_levels(raw, cfg.categorical)
    table = ingest.to_feature_table(raw, drop, cfg.categorical, levels)
    split = stratified_split(labels, cfg.ratio, cfg.seed)
    train_t, test_t = table.take(split.train_indices), table.take(split.test_indices)
    scaler = fit_minmax(table if cfg.fit_scaler_on_all else train_t)
    meta = PreparedMeta(schema, scaler, cfg.seed, cfg.ratio, levels, raw.dropped_rows,
                        "all" if cfg.fit_scaler_on_all else "train")
    files = {
        os.path.join(cfg.out, TRAIN_CSV): split_csv_text(apply_minmax(train_t, scaler),
                                                     labels.take(split.train_indices)),
        os.path.join(cfg.out, TEST_CSV): split_csv_text(apply_minmax(test_t, scaler),
                                                    labels.take(split.test_indices)),
        os.path.join(cfg.out, PREPARED_META): meta.dumps(),
    }
    _write_all(files, cfg.force)
    counts = {
        "all": labels.counts(),
        "train": labels.take(split.train_indices).counts(),
        "test": labels.take(split.test_indices).counts(),
    }
    _emit(f"rows: {raw.row_count} (dropped {raw.dropped_rows}), features: {table.column_count}")
    _emit(f"{'class':<12}{'all':>8}{'train':>8}{'test':>8}")
    for name in schema.class_names:
        _emit(f"{name:<12}{counts['all'][name]:>8}{counts['train'][name]:>8}{counts['test'][name]:>8}")
    return counts


def cmd_train(cfg: RunConfig):
    if cfg.model is None:
        raise UsageError("--model is required")
    if cfg.out is None:
        raise UsageError("--out model file is required")
    check_writable(cfg.out, cfg.force)
    csv_path, meta_path = _split_paths(cfg.input, TRAIN_CSV)
    meta = read_prepared_meta(meta_path)
    hp = parse_overrides(cfg.model, meta.schema.kind, cfg.hyper)
    table, labels = read_split_csv(csv_path, meta.schema)
    if table.column_names != meta.scaler.column_names:
        raise DataError(f"{csv_path}: columns do not match {meta_path}")
    start = time.perf_counter()
    model = train(cfg.model, table, labels, hp, cfg.seed)
    elapsed = time.perf_counter() - start
    model.categorical = meta.categorical
    model_store.save_model(model, meta.scaler, cfg.out, force=cfg.force)
    _emit(f"trained {model.kind} on {table.row_count} rows in {elapsed:.2f} s -> {cfg.out}")
    return model


def cmd_evaluate(cfg: RunConfig) -> metrics.EvalReport:
    if cfg.model_path is None or cfg.out is None:
        raise UsageError("--model and --out are required")
    model, _ = model_store.load_model(cfg.model_path)
    csv_path, meta_path = _split_paths(cfg.input, TEST_CSV)
    meta = read_prepared_meta(meta_path)
    if meta.schema != model.schema:
        raise ModelError(
            f"model is {model.schema.kind} but {csv_path} holds {meta.schema.kind} labels"
        )
    table, truth = read_split_csv(csv_path, meta.schema)
    pred = predict_batch(model, table)
    report = metrics.evaluate(
        truth, pred, model=model.kind, seed=model.seed, hyperparameters=model.hyperparams,
        label=cfg.label or DISPLAY_NAMES[model.kind],
    )
    rendered = metrics.render_report([report], "csv" if cfg.fmt == "csv" else "table")
    files = {
        os.path.join(cfg.out, "report.json"): report.dumps(),
        os.path.join(cfg.out, "report.csv" if cfg.fmt == "csv" else "report.txt"): rendered,
        os.path.join(cfg.out, "confusion.csv"): report.confusion.to_csv(model.schema.class_names),
    }
    _write_all(files, cfg.force)
    _emit(rendered.rstrip())
    return report


def cmd_predict(cfg: RunConfig) -> list:
    if cfg.model_path is None or cfg.out is None:
        raise UsageError("--model and --out are required")
    check_writable(cfg.out, cfg.force)
    model, scaler = model_store.load_model(cfg.model_path)
    raw = ingest.load_csv(cfg.input)
    drop = [c for c in (cfg.class_column, cfg.category_column) if c in raw.column_names]
    cats = [c for c in model.categorical if c in raw.column_names]
    table = ingest.to_feature_table(raw, drop, cats, model.categorical)
    try:
        table = table.reorder(model.feature_names)
    except DataError as exc:
        raise ModelError(f"{cfg.input}: {exc}") from None
    if scaler is not None:
        table = apply_minmax(table, scaler)
    pred = predict_batch(model, table)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row_index", "class_index", "class_name"])
    rows = [(i, int(c), model.schema.name_of(int(c))) for i, c in enumerate(pred.values)]
    writer.writerows(rows)
    atomic_write(cfg.out, buf.getvalue(), force=cfg.force)
    _emit(f"wrote {len(rows)} predictions -> {cfg.out}")
    return rows


def cmd_synth(classes: int, rows: int, features: int, separation: float, seed: int, out: str,
              force: bool = False) -> None:
    atomic_write(out, synth.synth_csv(classes, rows, features, separation, seed), force=force)
    _emit(f"wrote {rows} synthetic rows ({classes} classes, {features} features) -> {out}")


def merge_reports(reports: list) -> list:
    """Sort by accuracy (descending) and suffix repeated model names."""
    if not reports:
        return []
    tasks = {r.task for r in reports}
    if len(tasks) > 1:
        raise ModelError(f"cannot merge reports of different tasks: {sorted(tasks)}")
    seen: dict = {}
    for r in reports:
        name = r.display_name
        seen[name] = seen.get(name, 0) + 1
        if seen[name] > 1:
            r.label = f"{name} #{seen[name]}"
    return sorted(reports, key=lambda r: -r.accuracy)


def cmd_report(cfg: RunConfig) -> str:
    reports = []
    for path in cfg.inputs:
        try:
            with open(path, encoding="utf-8") as fh:
                reports.append(metrics.EvalReport.from_dict(json.load(fh)))
        except FileNotFoundError:
            raise DataError(f"no such report: {path}") from None
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: {exc}") from None
    merged = merge_reports(reports)
    ref = merged[0].task if (cfg.reference and merged) else None
    text = metrics.render_report(merged, cfg.fmt, reference_task=ref)
    if cfg.out:
        atomic_write(cfg.out, text, force=cfg.force)
    _emit(text.rstrip())
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="memclass", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=int, default=None,
                           help="random seed (default: $MEMCLASS_SEED or 0)")
        p.add_argument("--force", action="store_true", help="overwrite existing outputs")

    p = sub.add_parser("prepare", help="ingest, encode, split and scale a dataset CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--task", choices=(BINARY, MULTICLASS), default=MULTICLASS)
    p.add_argument("--split", type=float, default=0.8, help="train fraction")
    p.add_argument("--categorical", action="append", default=[], metavar="COLUMN")
    p.add_argument("--drop", action="append", default=[], metavar="COLUMN",
                   help="extra column to discard")
    p.add_argument("--class-column", default=ingest.CLASS_COLUMN)
    p.add_argument("--category-column", default=ingest.CATEGORY_COLUMN)
    p.add_argument("--fit-scaler-on-all", action="store_true")
    p.add_argument("--drop-bad-rows", action="store_true")
    common(p)

    p = sub.add_parser("train", help="train one model on a prepared split")
    p.add_argument("--input", required=True, help="prepared directory or train CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--hyper", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--out", required=True, help="model file")
    common(p)

    p = sub.add_parser("evaluate", help="score a model on the prepared test split")
    p.add_argument("--model", dest="model_path", required=True, help="model file")
    p.add_argument("--input", required=True, help="prepared directory or test CSV")
    p.add_argument("--out", required=True, help="report directory")
    p.add_argument("--format", dest="fmt", choices=("table", "csv"), default="table")
    p.add_argument("--label")
    common(p, seed=False)

    p = sub.add_parser("predict", help="label an unlabelled feature CSV")
    p.add_argument("--model", dest="model_path", required=True, help="model file")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    common(p, seed=False)

    p = sub.add_parser("synth", help="write a Gaussian-blob dataset in the ingest layout")
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--rows", type=int, default=2000)
    p.add_argument("--features", type=int, default=10)
    p.add_argument("--separation", type=float, default=3.0)
    p.add_argument("--out", required=True)
    common(p)

    p = sub.add_parser("report", help="merge report JSON files into one table")
    p.add_argument("--input", dest="inputs", action="append", required=True)
    p.add_argument("--format", dest="fmt", choices=("table", "csv", "json"), default="table")
    p.add_argument("--reference", action="store_true", help="append the paper-reported rows")
    p.add_argument("--out")
    common(p, seed=False)
    return parser


def _config(args) -> RunConfig:
    keys = RunConfig.__dataclass_fields__
    values = {k: v for k, v in vars(args).items() if k in keys and v is not None}
    if "split" in vars(args):
        values["ratio"] = args.split
    values.setdefault("seed", default_seed())
    return RunConfig(**values)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "synth":
            seed = args.seed if args.seed is not None else default_seed()
            cmd_synth(args.classes, args.rows, args.features, args.separation, seed, args.out,
                      args.force)
            return 0
        cfg = _config(args)
        {"prepare": cmd_prepare, "train": cmd_train, "evaluate": cmd_evaluate,
         "predict": cmd_predict, "report": cmd_report}[args.command](cfg)
    except MemclassError as exc:
        print(f"memclass {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
