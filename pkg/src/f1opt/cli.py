"""Command-line entry point: ``f1opt {eval,tune,gfm,simulate,curves,casestudy}``.

Every subcommand writes its outputs plus ``manifest.json`` into the output
directory (``--out``, else ``$F1OPT_OUTPUT_DIR``, else ``./f1opt-out``).
Exit status is 0 on success, 2 on bad input, 3 when a result carries a
non-convergence warning.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import platform
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, gfm, io, theory, winners_curse
from .casestudy import REPORT_COLUMNS, CaseStudyConfig, default_config, run_case_study
from .exceptions import CSVFormatError, EnumerationBoundError, ShapeError
from .metrics import (
    confusion,
    f1_from_counts,
    instance_f1,
    jaccard,
    macro_f1,
    micro_f1,
    multilabel_accuracy,
    per_label_confusion,
)
from .thresholding import MAX_PASSES, ConvergenceWarning, predict, tune_instance, tune_macro, tune_micro

OUTPUT_ENV = "F1OPT_OUTPUT_DIR"
EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED = 0, 2, 3
CURVE_SELECTORS = ["f1-vs-tp", "accuracy-vs-tp", "f1-vs-tn", "uninformative", "winners-curse"]
DEFAULT_CURSE_RATES = [0.5, 0.1, 0.01, 0.001]


class InputError(Exception):
    pass


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUTPUT_ENV) or "f1opt-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_manifest(out: Path, args, inputs=(), extra=None) -> Path:
    resolved = {k: v for k, v in vars(args).items() if k not in ("func", "argv")}
    manifest = {
        "subcommand": args.command,
        "argv": args.argv,
        "config": resolved,
        "output_dir": str(out),
        "inputs": {str(p): _sha256(p) for p in inputs},
        "versions": {
            "f1opt": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
    }
    if extra:
        manifest.update(extra)
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    return path


def _empty(args) -> float:
    return float(args.empty_f1)


def cmd_eval(args) -> int:
    pred = io.read_label_matrix(args.pred)
    gold = io.read_label_matrix(args.gold)
    if pred.shape != gold.shape:
        raise ShapeError(f"pred shape {pred.shape} does not match gold shape {gold.shape}")
    es = _empty(args)
    pooled = confusion(pred, gold)
    report = {
        "n": int(pred.shape[0]),
        "m": int(pred.shape[1]),
        "micro_f1": micro_f1(pred, gold, es),
        "macro_f1": macro_f1(pred, gold, es),
        "instance_f1": instance_f1(pred, gold, es),
        "accuracy": multilabel_accuracy(pred, gold),
        "jaccard": jaccard(pooled, es),
        "pooled": vars(pooled),
    }
    labels = []
    for j, c in enumerate(per_label_confusion(pred, gold)):
        labels.append({"label": j, "tp": c.tp, "fp": c.fp, "fn": c.fn, "tn": c.tn,
                       "f1": f1_from_counts(c, es)})
    out = _out_dir(args)
    (out / "metrics.json").write_text(json.dumps(report, indent=2) + "\n")
    io.write_table(out / "per_label.csv", labels, ["label", "tp", "fp", "fn", "tn", "f1"])
    write_manifest(out, args, [args.pred, args.gold])

    if args.json:
        print(json.dumps({**report, "per_label": labels}, indent=2))
    else:
        for key in ("micro_f1", "macro_f1", "instance_f1", "accuracy", "jaccard"):
            print(f"{key:12s} {report[key]:.6f}")
        print(f"{'label':>6s} {'tp':>7s} {'fp':>7s} {'fn':>7s} {'tn':>7s} {'f1':>8s}")
        for r in labels:
            print(f"{r['label']:6d} {r['tp']:7d} {r['fp']:7d} {r['fn']:7d} {r['tn']:7d} {r['f1']:8.4f}")
    return EXIT_OK


def cmd_tune(args) -> int:
    scores = io.read_score_matrix(args.scores)
    out = _out_dir(args)
    es = _empty(args)
    inputs = [args.scores]
    status = EXIT_OK
    if args.objective == "instance":
        pred = tune_instance(scores, es)
        io.write_matrix(out / "predictions.csv", pred)
        report = {"objective": "instance", "n": int(pred.shape[0]), "m": int(pred.shape[1])}
        if args.gold:
            gold = io.read_label_matrix(args.gold)
            inputs.append(args.gold)
            report["instance_f1"] = instance_f1(pred, gold, es)
    else:
        if not args.gold:
            raise InputError(f"--objective {args.objective} needs a gold CSV")
        gold = io.read_label_matrix(args.gold)
        inputs.append(args.gold)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            if args.objective == "macro":
                res = tune_macro(scores, gold, es)
            else:
                res = tune_micro(scores, gold, es, max_passes=args.max_passes)
        pred = predict(scores, res.per_label)
        rows = [{"label": j, "threshold": float(t), "predicted": int(pred[:, j].sum())}
                for j, t in enumerate(res.per_label)]
        io.write_table(out / "thresholds.csv", rows, ["label", "threshold", "predicted"])
        io.write_matrix(out / "predictions.csv", pred)
        report = {
            "objective": res.objective,
            "achieved": res.achieved,
            "micro_f1": micro_f1(pred, gold, es),
            "macro_f1": macro_f1(pred, gold, es),
            "instance_f1": instance_f1(pred, gold, es),
            "converged": res.converged,
            "passes": res.passes,
        }
        if not res.converged:
            print("warning: micro tuning did not converge", file=sys.stderr)
            status = EXIT_NONCONVERGED
    (out / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    write_manifest(out, args, inputs)
    print(json.dumps(report, indent=2))
    return status


def cmd_gfm(args) -> int:
    _, rows = io.read_rows(args.probs)
    if not rows:
        raise InputError("probability file has no rows")
    out = _out_dir(args)
    es = _empty(args)
    summary, preds = [], []
    for i, row in enumerate(rows):
        p = np.asarray(row)
        if (p < 0).any() or (p > 1).any():
            raise InputError(f"row {i + 1}: probabilities must lie in [0, 1]")
        res = gfm.maximize_expected_f1(p, es)
        stop = gfm.verify_stopping_threshold(p, res)
        rec = {"row": i, "n": p.size, "c": res.c, "expected_f1": res.expected_f1,
               "half_expected_f1": stop.threshold, "stopping_rule_holds": stop.holds}
        if args.oracle:
            if p.size > gfm.MAX_ENUMERATION:
                raise EnumerationBoundError(
                    f"row {i + 1}: --oracle needs n <= {gfm.MAX_ENUMERATION}, got {p.size}")
            rec["oracle_expected_f1"] = gfm.brute_force_maximum(p, es)[1]
            rec["oracle_match"] = abs(rec["oracle_expected_f1"] - res.expected_f1) <= 1e-9
        summary.append(rec)
        preds.append(res.h)
    io.write_matrix(out / "predictions.csv", preds)
    io.write_table(out / "gfm.csv", summary)
    write_manifest(out, args, [args.probs])
    for rec, h in zip(summary, preds):
        print(f"{rec['row']}\t{rec['expected_f1']:.10f}\t{' '.join(map(str, h))}")
    if args.oracle and not all(r["oracle_match"] for r in summary):
        print("error: oracle mismatch", file=sys.stderr)
        return 1
    return EXIT_OK


def _simulate(rates, n, sigma, trials, seed, out: Path):
    trial_rows, hist_rows, thr_rows, summary = [], [], [], []
    for b in rates:
        cfg = winners_curse.CurseConfig(b, n=n, sigma=sigma, trials=trials, seed=seed)
        res = winners_curse.run_curse_simulation(cfg)
        for k in range(trials):
            trial_rows.append({
                "base_rate": b, "trial": k, "threshold": res.thresholds[k],
                "fraction_positive": res.fractions[k], "empirical_f1": res.empirical_f1[k],
                "population_f1": res.population_f1[k], "regret": res.regret[k],
            })
        for lo, hi, cnt in zip(res.bin_edges[:-1], res.bin_edges[1:], res.histogram):
            hist_rows.append({"base_rate": b, "bin_lo": lo, "bin_hi": hi, "count": int(cnt)})
        counts, edges, n_inf = res.threshold_histogram()
        for lo, hi, cnt in zip(edges[:-1], edges[1:], counts):
            thr_rows.append({"base_rate": b, "bin_lo": lo, "bin_hi": hi, "count": int(cnt)})
        thr_rows.append({"base_rate": b, "bin_lo": np.inf, "bin_hi": np.inf, "count": n_inf})
        summary.append({
            "base_rate": b, "n": n, "trials": trials,
            "curse_region": winners_curse.curse_region(b, n),
            "phase_boundary": winners_curse.phase_boundary(n),
            "mean_fraction_positive": float(res.fractions.mean()),
            "share_at_least_0.9": res.share_at_least(0.9),
            "share_below_0.1": res.share_below(0.1),
            "mean_regret": float(res.regret.mean()),
        })
    io.write_table(out / "trials.csv", trial_rows,
                   comment="winner's curse: one row per trial")
    io.write_table(out / "histogram.csv", hist_rows,
                   comment="winner's curse: histogram of fraction predicted positive")
    io.write_table(out / "threshold_histogram.csv", thr_rows,
                   comment="winner's curse: histogram of chosen thresholds (inf row counts predict-none)")
    io.write_table(out / "summary.csv", summary)
    return summary


def _curse_params(args):
    if args.paper_scale:
        return winners_curse.FULL_SCALE_N, winners_curse.FULL_SCALE_TRIALS
    return args.n, args.trials


def cmd_simulate(args) -> int:
    out = _out_dir(args)
    n, trials = _curse_params(args)
    summary = _simulate(args.base_rate, n, args.sigma, trials, args.seed, out)
    write_manifest(out, args, extra={"resolved": {"n": n, "trials": trials}})
    for s in summary:
        print(json.dumps(s))
    return EXIT_OK


def cmd_curves(args) -> int:
    out = _out_dir(args)
    sel = args.selector
    extra = {}
    if sel in theory.FIGURES:
        rows = theory.emit_f1_surface(sel, args.fixed, args.positives, args.negatives)
        io.write_table(out / f"{sel}.csv", rows, ["figure", "fixed", "x", "y"],
                       comment=f"{sel}: {theory.FIGURES[sel]}")
    elif sel == "uninformative":
        rates = args.base_rates or list(np.round(np.linspace(0.01, 0.99, 99), 2))
        rows = theory.uninformative_rows(rates)
        io.write_table(out / "uninformative.csv", rows,
                       comment="uninformative: best expected F1 of an uninformative classifier vs base rate")
    else:
        n, trials = _curse_params(args)
        _simulate(args.base_rates or DEFAULT_CURSE_RATES, n, args.sigma, trials, args.seed, out)
        extra = {"resolved": {"n": n, "trials": trials}}
    write_manifest(out, args, extra=extra)
    print(f"wrote {sel} curve data to {out}")
    return EXIT_OK


def cmd_casestudy(args) -> int:
    out = _out_dir(args)
    if args.config:
        cfg = CaseStudyConfig.from_json(args.config, seed=args.seed, n=args.n)
        inputs = [args.config]
    else:
        cfg = default_config(seed=args.seed, **({"n": args.n} if args.n else {}))
        inputs = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        report = run_case_study(cfg)
    io.write_table(out / "casestudy.csv", report.sorted_by_macro_count(), REPORT_COLUMNS,
                   comment="case study: labels by macro-tuned predicted count")
    summary = {"macro_f1": report.macro_f1, "micro_f1": report.micro_f1,
               "flagged": report.flagged, "pathology_holds": report.pathology_holds,
               "micro_converged": report.micro_converged}
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    write_manifest(out, args, inputs, extra={"case_study_config": cfg.to_dict()})
    print(json.dumps(summary, indent=2))
    return EXIT_OK if report.micro_converged else EXIT_NONCONVERGED


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="f1opt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./f1opt-out)")
    common.add_argument("--empty-f1", type=float, choices=[0.0, 1.0], default=1.0,
                        help="F1 credited when nothing is predicted and nothing is positive")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="metrics of a prediction CSV against gold")
    p.add_argument("pred")
    p.add_argument("gold")
    p.add_argument("--json", action="store_true", help="print machine-readable JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tune", parents=[common], help="tune per-label thresholds")
    p.add_argument("scores")
    p.add_argument("gold", nargs="?")
    p.add_argument("--objective", choices=["micro", "macro", "instance"], default="macro")
    p.add_argument("--max-passes", type=int, default=MAX_PASSES,
                   help="coordinate-ascent pass limit for --objective micro")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("gfm", parents=[common], help="expected-F1-optimal predictions per row")
    p.add_argument("probs")
    p.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    p.set_defaults(func=cmd_gfm)

    curse = argparse.ArgumentParser(add_help=False)
    curse.add_argument("--n", type=int, default=100_000, help="samples per trial")
    curse.add_argument("--sigma", type=float, default=1.0)
    curse.add_argument("--trials", type=int, default=500)
    curse.add_argument("--paper-scale", action="store_true",
                       help=f"use n={winners_curse.FULL_SCALE_N} and trials={winners_curse.FULL_SCALE_TRIALS}")

    p = sub.add_parser("simulate", parents=[common, curse], help="winner's-curse Monte Carlo")
    p.add_argument("--base-rate", "-b", type=float, action="append", required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("curves", parents=[common, curse], help="emit figure data as CSV")
    p.add_argument("selector", choices=CURVE_SELECTORS)
    p.add_argument("--fixed", type=_ints, default=[0, 10, 20, 40, 80],
                   help="comma-separated fixed fp (or fn) values")
    p.add_argument("--positives", type=int, default=100)
    p.add_argument("--negatives", type=int, default=100)
    p.add_argument("--base-rates", type=_floats, default=None)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("casestudy", parents=[common], help="synthetic macro/micro case study")
    p.add_argument("config", nargs="?", help="JSON config; omitted = built-in 20-label setup")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_casestudy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except (CSVFormatError, ShapeError, EnumerationBoundError, InputError, ValueError,
            FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
