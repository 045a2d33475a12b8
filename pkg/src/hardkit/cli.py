"""Command-line entry point: ``hardkit <verb> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .adaptive import adaptive_preprocess, cross_validate_ensemble, hmsmote_bagging_train, smote_bagging_train
from .complexity import complexity_profile, profiles_to_csv
from .data import load_dataset, save_dataset, stratified_folds
from .hardness.estimate import estimate_ih, run_pool
from .hardness.measures import instance_measures
from .learners.base import default_pool, load_pool, parse_learner
from .learners.cluster import cluster_pool
from .learners.metrics import cod_matrix
from .report import ReportOptions, batch_report
from .stats import hardness_histogram, spearman


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common options")
    g.add_argument("--seed", type=int, default=42, help="master seed (default 42)")
    g.add_argument("--folds", type=int, default=5)
    g.add_argument("--repeats", type=int, default=5)
    g.add_argument("--pool", help="pool file (JSON list or one spec per line) or inline 'knn;cart'")
    g.add_argument("--k", type=int, default=5, help="neighbours for kNN-based measures")
    g.add_argument("--out", "-o", help="output file (default: stdout)")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--label-col", help="label column name or index (default: last column)")
    g.add_argument("--positive-label", help="label value mapped to 1 (default: rarer value)")


def _load(args, path):
    label = args.label_col
    if label is not None and label.lstrip("-").isdigit():
        label = int(label)
    return load_dataset(path, label, args.positive_label)


def _pool(args):
    return load_pool(args.pool) if args.pool else default_pool()


def _plan(args, data):
    return stratified_folds(data, args.seed, args.repeats, args.folds)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _table_csv(columns: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    n = len(next(iter(columns.values())))
    for i in range(n):
        w.writerow([v[i] for v in columns.values()])
    return buf.getvalue()


def _plain(v):
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


# -- verbs -------------------------------------------------------------------

def cmd_analyze_dataset(args):
    profiles = [complexity_profile(_load(args, f), seed=args.seed) for f in args.files]
    if args.format == "csv":
        _emit(args, profiles_to_csv(profiles))
    else:
        body = profiles[0].to_dict() if len(profiles) == 1 else {"schema_version": 1,
                                                                 "profiles": [p.to_dict() for p in profiles]}
        _emit(args, json.dumps(body, indent=2))


def cmd_analyze_instances(args):
    data = _load(args, args.file)
    measures = instance_measures(data, k=args.k, seed=args.seed)
    cols = {"index": list(range(data.n)), "label": data.y.tolist()}
    cols.update({k: v.tolist() for k, v in measures.items()})
    if args.format == "csv":
        _emit(args, _table_csv(cols))
    else:
        _emit(args, json.dumps({"schema_version": 1, "name": data.name, "instances": cols}, indent=2))


def cmd_hardness(args):
    data = _load(args, args.file)
    report = estimate_ih(data, _pool(args), _plan(args, data), with_measures=not args.no_measures, k=args.k)
    if args.format == "csv":
        _emit(args, report.to_csv())
    else:
        body = report.to_dict()
        body["histogram"] = hardness_histogram(report, split_by_class=True).to_dict()
        _emit(args, json.dumps(body, indent=2))
    print(f"DSH={report.dsh():.4f} IDSH={report.idsh():.4f}", file=sys.stderr)


def _trainer(args, weighted: bool):
    base = parse_learner(args.base)
    if weighted:
        return lambda tr, seed: hmsmote_bagging_train(tr, args.measure, args.estimators, base, seed, args.k)
    return lambda tr, seed: smote_bagging_train(tr, args.estimators, base, seed, args.k)


def _cmd_train(args, weighted: bool):
    data = _load(args, args.file)
    trainer = _trainer(args, weighted)
    body = {"schema_version": 1, "algorithm": "hmsmote_bagging" if weighted else "smote_bagging",
            "measure": args.measure if weighted else None, "estimators": args.estimators, "base": args.base,
            "seed": args.seed}
    if not args.no_cv:
        cv = cross_validate_ensemble(data, trainer, _plan(args, data))
        body["cv_mcc"] = cv["mcc"]
        body["cv_mean_mcc"] = cv["mean"]
    if args.predict:
        model = trainer(data, args.seed)
        test = _load(args, args.predict)
        body["predictions"] = model.predict(test.X).tolist()
        body["vote_fraction"] = model.vote_fraction(test.X).tolist()
    _emit(args, json.dumps(body, indent=2))


def cmd_train_hmsb(args):
    _cmd_train(args, True)


def cmd_train_smoteb(args):
    _cmd_train(args, False)


def cmd_preprocess_adaptive(args):
    data = _load(args, args.file)
    out, plan = adaptive_preprocess(data, seed=args.seed)
    if args.plan:
        Path(args.plan).write_text(plan.to_json(), encoding="utf-8")
    if args.out:
        save_dataset(out, args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([*out.feature_names, "label"])
        for row, lbl in zip(out.X.tolist(), out.y.tolist()):
            w.writerow([*row, lbl])
        sys.stdout.write(buf.getvalue())
    if not args.plan:
        print(plan.to_json(), file=sys.stderr)


def cmd_pool_cluster(args):
    pool = _pool(args)
    blocks = []
    for f in args.files:
        data = _load(args, f)
        preds = run_pool(data, pool, _plan(args, data))
        # one long prediction vector per learner: every repeat of every dataset
        blocks.append(preds.preds.transpose(1, 0, 2).reshape(len(pool), -1))
    P = np.concatenate(blocks, axis=1)
    labels = [s.label for s in pool]
    cod = cod_matrix(P)
    clusters, dendro = cluster_pool(cod, labels, cut=args.cut)
    body = {"schema_version": 1, "learners": labels, "cod": cod.tolist(), "cut": args.cut,
            "clusters": clusters, "dendrogram": dendro.to_dict(), "newick": dendro.to_newick()}
    _emit(args, json.dumps(body, indent=2))


def _read_columns(path) -> dict:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = {}
    for j, name in enumerate(header):
        try:
            cols[name] = np.array([float(r[j]) for r in body])
        except ValueError:
            continue
    return cols


def cmd_report_correlate(args):
    ih_cols = _read_columns(args.ih_csv)
    if args.ih_column not in ih_cols:
        raise SystemExit(f"{args.ih_csv}: no numeric column {args.ih_column!r}")
    ih = ih_cols[args.ih_column]
    measures = _read_columns(args.measures_csv)
    if "index" in ih_cols and "index" in measures:
        order = np.argsort(measures["index"])
        measures = {k: v[order] for k, v in measures.items()}
        ih = ih[np.argsort(ih_cols["index"])]
    skip = {"index", "label", args.ih_column}
    rows = {name: spearman(v, ih).to_dict() for name, v in measures.items()
            if name not in skip and not name.startswith("ih_") and len(v) == len(ih)}
    if args.format == "csv":
        cols = {"measure": list(rows), **{k: [r[k] for r in rows.values()]
                                          for k in ("rho", "p_value", "n", "band", "significant")}}
        _emit(args, _table_csv(cols))
    else:
        _emit(args, json.dumps({"schema_version": 1, "target": args.ih_column, "correlations": rows}, indent=2))


def cmd_report_batch(args):
    pool = tuple(_pool(args))
    opts = ReportOptions(args.seed, args.folds, args.repeats, args.k, pool, args.label_col, args.positive_label)
    bundle = batch_report(args.files, opts, out_dir=args.dir)
    _emit(args, json.dumps(bundle, indent=2, default=_plain))


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardkit", description="Instance and dataset hardness analysis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbs = parser.add_subparsers(dest="verb", required=True)

    analyze = verbs.add_parser("analyze", help="complexity measures").add_subparsers(dest="what", required=True)
    p = analyze.add_parser("dataset", help="dataset-level complexity profile")
    p.add_argument("files", nargs="+")
    _common(p)
    p.set_defaults(func=cmd_analyze_dataset)
    p = analyze.add_parser("instances", help="the fifteen instance hardness measures")
    p.add_argument("file")
    _common(p)
    p.set_defaults(func=cmd_analyze_instances)

    p = verbs.add_parser("hardness", help="cross-validated instance hardness with the learner pool")
    p.add_argument("file")
    p.add_argument("--no-measures", action="store_true", help="skip the instance measures")
    _common(p)
    p.set_defaults(func=cmd_hardness)

    train = verbs.add_parser("train", help="SMOTE bagging ensembles").add_subparsers(dest="algo", required=True)
    for name, func, weighted in (("hmsb", cmd_train_hmsb, True), ("smoteb", cmd_train_smoteb, False)):
        p = train.add_parser(name)
        p.add_argument("file")
        if weighted:
            p.add_argument("--measure", default="kDN", help="instance measure steering the draws")
        p.add_argument("--estimators", type=int, default=50)
        p.add_argument("--base", default="cart", help="base learner spec, e.g. 'cart:max_depth=5'")
        p.add_argument("--predict", help="CSV to predict with a model trained on FILE")
        p.add_argument("--no-cv", action="store_true", help="skip cross-validation")
        _common(p)
        p.set_defaults(func=func)

    pre = verbs.add_parser("preprocess", help="preprocessing").add_subparsers(dest="what", required=True)
    p = pre.add_parser("adaptive", help="complexity-guided preprocessing selection")
    p.add_argument("file")
    p.add_argument("--plan", help="write the plan JSON here")
    _common(p)
    p.set_defaults(func=cmd_preprocess_adaptive)

    pool = verbs.add_parser("pool", help="learner pool tools").add_subparsers(dest="what", required=True)
    p = pool.add_parser("cluster", help="cluster learners by output difference")
    p.add_argument("files", nargs="+")
    p.add_argument("--cut", type=float, default=0.13)
    _common(p)
    p.set_defaults(func=cmd_pool_cluster)

    rep = verbs.add_parser("report", help="reports").add_subparsers(dest="what", required=True)
    p = rep.add_parser("correlate", help="Spearman correlation of measure columns with IH")
    p.add_argument("ih_csv")
    p.add_argument("measures_csv")
    p.add_argument("--ih-column", default="ih")
    _common(p)
    p.set_defaults(func=cmd_report_correlate)
    p = rep.add_parser("batch", help="complexity and hardness bundle over several datasets")
    p.add_argument("files", nargs="+")
    p.add_argument("--dir", help="also write per-dataset CSVs and report.json here")
    _common(p)
    p.set_defaults(func=cmd_report_batch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError) as exc:
        print(f"hardkit: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
