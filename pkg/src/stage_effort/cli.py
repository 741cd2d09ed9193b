"""Command-line front end.

Exit codes: 0 success, 2 usage or schema problem, 3 not enough data,
4 prediction impossible.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .config import PipelineConfig, load_config, parse_outlier_policy
from .dataset import (
    STAGES,
    TARGET_STAGES,
    Dataset,
    Stage,
    filter_complete,
    find_outliers,
    read_dataset,
    remove_outliers,
    serialize_dataset,
)
from .discretize import Explicit, Fraction
from .errors import DataInsufficientError, ParameterError, PredictionError, StageEffortError, UsageError
from .evaluate import evaluate
from .pipeline import build_model, build_schemes
from .report import boxplot_csv, dumps_report, folds_csv, loads_report, validate_report
from .ranktest import wilcoxon_rank_sum
from .rules import filter_rules, format_rules, parse_rules
from .synthetic import generate_dataset

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PREDICT = 0, 2, 3, 4


def _num(x: float) -> str:
    return f"{x:.10g}"


def _pct(x: Optional[float]) -> str:
    return "n/a" if x is None else f"{100 * x:.1f}%"


def _stage_value(text: str, cast, what: str):
    stage, sep, value = text.partition("=")
    if not sep:
        raise ParameterError(f"{what}: expected STAGE=VALUE, got {text!r}")
    try:
        return Stage.parse(stage), cast(value)
    except ValueError:
        raise ParameterError(f"{what}: bad value in {text!r}") from None


def _pair(text: str) -> tuple[float, float]:
    d1, d2 = text.split(",")
    return float(d1), float(d2)


def resolve_config(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    changes: dict = {}
    if args.intervals:
        changes["intervals"] = dict(_stage_value(t, int, "--intervals") for t in args.intervals)
    padding = {}
    if args.pad_fraction is not None:
        padding = {s: Fraction(args.pad_fraction) for s in STAGES}
    for text in args.pad or ():
        stage, (d1, d2) = _stage_value(text, _pair, "--pad")
        padding[stage] = Explicit(d1, d2)
    if padding:
        changes["padding"] = padding
    if args.min_support is not None:
        changes["min_support"] = args.min_support
    if args.min_confidence is not None:
        changes["min_confidence"] = args.min_confidence
    if args.outliers is not None:
        changes["outlier_policy"] = parse_outlier_policy(args.outliers)
    return cfg.with_overrides(**changes) if changes else cfg


def prepare(args, config: PipelineConfig) -> tuple[Dataset, Dataset, dict]:
    """Read, drop incomplete records, drop outliers."""
    raw = read_dataset(args.dataset, args.unit)
    complete = filter_complete(raw)
    outliers = find_outliers(complete, config.outlier_policy)
    cleaned = remove_outliers(complete, config.outlier_policy)
    if len(cleaned) == 0:
        raise DataInsufficientError("no records left after outlier removal")
    summary = {
        "n_input": len(raw),
        "dropped_incomplete": [r.project_id for r in raw if not r.complete],
        "dropped_outliers": {pid: [s.name for s in stages] for pid, stages in outliers.items()},
    }
    return raw, cleaned, summary


def _emit(args, document, text: str) -> None:
    if getattr(args, "format", "text") == "json":
        sys.stdout.write(json.dumps(document, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    config = resolve_config(args)
    raw = read_dataset(args.dataset, args.unit)
    lines = [f"records: {len(raw)}"]
    stages = {}
    for stage in STAGES:
        column = raw.column(stage)
        info = {"missing": len(raw) - int(column.size)}
        if column.size:
            info.update(min=float(column.min()), max=float(column.max()))
            lines.append(f"{stage.name}: missing {info['missing']}, min {_num(info['min'])}, max {_num(info['max'])}")
        else:
            lines.append(f"{stage.name}: missing {info['missing']}, no values")
        stages[stage.name] = info
    incomplete = [r.project_id for r in raw if not r.complete]
    lines.append(f"dropped as incomplete: {len(incomplete)}" + (f" ({', '.join(incomplete)})" if incomplete else ""))
    document = {"records": len(raw), "stages": stages, "dropped_incomplete": incomplete}
    complete = filter_complete(raw)
    outliers = find_outliers(complete, config.outlier_policy)
    for pid, offending in outliers.items():
        lines.append(f"dropped as outlier: {pid} ({', '.join(s.name for s in offending)})")
    remaining = len(complete) - len(outliers)
    if remaining == 0:
        raise DataInsufficientError("no records left after outlier removal")
    lines.append(f"usable records: {remaining}")
    document.update(dropped_outliers={k: [s.name for s in v] for k, v in outliers.items()}, usable=remaining)
    _emit(args, document, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_discretize(args) -> int:
    config = resolve_config(args)
    _, data, _ = prepare(args, config)
    schemes = build_schemes(data, config)
    wanted = [Stage.parse(args.stage)] if args.stage else list(STAGES)
    lines, document = [], {}
    for stage in wanted:
        s = schemes[stage]
        lines.append(f"{stage.name} ({stage.display_name}): U = [{_num(s.lower)}, {_num(s.upper)}], n = {s.n}, L = {_num(s.length)}")
        for j in range(1, s.n + 1):
            lo, hi = s.interval(j)
            close = "]" if j == s.n else ")"
            lines.append(f"  W{j}  [{_num(lo)}, {_num(hi)}{close}  centre {_num(s.midpoints[j - 1])}")
        document[stage.name] = {
            "lower": s.lower,
            "upper": s.upper,
            "n": s.n,
            "length": s.length,
            "bounds": list(s.bounds),
            "midpoints": list(s.midpoints),
        }
    _emit(args, document, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_mine(args) -> int:
    config = resolve_config(args)
    target = Stage.parse(args.target)
    _, data, _ = prepare(args, config)
    model = build_model(data, config)
    kept = filter_rules(model.rules, target)
    if not kept:
        print(f"warning: no rule predicts {target} at min_support={config.min_support}, "
              f"min_confidence={config.min_confidence}", file=sys.stderr)
    text = f"rules mined: {len(model.rules)}; kept for {target}: {len(kept)}\n" + format_rules(kept)
    document = {"target": target.name, "n_rules_total": len(model.rules), "rules": [r.to_dict() for r in kept]}
    _emit(args, document, text)
    return EXIT_OK


def cmd_predict(args) -> int:
    config = resolve_config(args)
    target = Stage.parse(args.target)
    if target not in TARGET_STAGES:
        raise ParameterError(f"{target} has no prior stage and cannot be predicted")
    priors = dict(_stage_value(t, float, "--prior") for t in args.prior)
    _, data, _ = prepare(args, config)
    model = build_model(data, config)
    rules = None
    if args.rules_file:
        with open(args.rules_file, encoding="utf-8") as fh:
            rules = parse_rules(fh.read())
    midpoints = None
    if args.midpoints:
        midpoints = [float(v) for v in args.midpoints.split(",")]
        if len(midpoints) != model.schemes[target].n:
            raise ParameterError(f"--midpoints needs {model.schemes[target].n} values for {target}")
    estimate = model.estimate(target, priors, fallback=args.fallback, rules=rules, midpoints=midpoints)
    for stage in estimate.out_of_universe:
        print(f"warning: {stage} effort {_num(priors[stage])} lies outside the training universe; clamped", file=sys.stderr)
    unit = f" {data.unit_label}" if data.unit_label else ""
    lines = [f"estimate for {target}: {estimate.value:.4f}{unit}"]
    if estimate.fallback_used:
        lines.append("  (no rule matched; training median used)")
    for c in estimate.contributions:
        lines.append(f"  {c.rule}  confidence={c.confidence:.6f}  defuzzified={c.defuzzified:.6g}")
    document = dict(estimate.to_dict(), target=target.name)
    _emit(args, document, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    config = resolve_config(args)
    if bool(args.all) == bool(args.target):
        raise ParameterError("give exactly one of --target or --all")
    targets = TARGET_STAGES if args.all else (Stage.parse(args.target),)
    _, data, summary = prepare(args, config)
    if len(data) < 3:
        raise DataInsufficientError(f"jackknife needs at least 3 usable records, got {len(data)}")
    report = evaluate(data, config, targets, **summary)
    document = report.to_dict()
    validate_report(json.loads(dumps_report(document)))
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_report(document))
    if args.folds_csv:
        with open(args.folds_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(folds_csv(document))

    header = f"{'Stage':<16}{'Bias':>9}{'MMRE':>9}{'MdMRE':>9}   |{'Bias':>9}{'MMRE':>9}{'MdMRE':>9}"
    lines = [f"{'':<16}{'rule model':^27}   |{'exp. regression':^27}", header]
    for stage in report.stages:
        m, r = stage.model, stage.regression
        row = f"{stage.target.display_name:<16}{_pct(m.mean_bias):>9}{_pct(m.mmre):>9}{_pct(m.mdmre):>9}   |"
        row += f"{_pct(r.mean_bias):>9}{_pct(r.mmre):>9}{_pct(r.mdmre):>9}"
        notes = []
        if m.fallbacks:
            notes.append(f"{m.fallbacks} fallback")
        if m.failures or r.failures:
            notes.append(f"{m.failures}/{r.failures} failed")
        lines.append(row + (f"  ({'; '.join(notes)})" if notes else ""))
    lines.append(f"report written to {args.output}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_compare(args) -> int:
    with open(args.report, encoding="utf-8") as fh:
        document = loads_report(fh.read())
    lines = [f"{'Stage':<16}{'sum rank':>10}{'Z-value':>9}{'p-value':>10}{'exact p':>9}  note"]
    for stage in document["stages"]:
        name = Stage[stage["target"]].display_name
        ours = [f["model"]["abs_residual"] for f in stage["folds"] if f["model"]["abs_residual"] is not None]
        theirs = [f["regression"]["abs_residual"] for f in stage["folds"] if f["regression"]["abs_residual"] is not None]
        try:
            result = wilcoxon_rank_sum(ours, theirs)
        except StageEffortError as exc:
            lines.append(f"{name:<16}{'-':>10}{'-':>9}{'-':>10}{'-':>9}  degenerate: {exc}")
            continue
        exact = "-" if result.exact_p_value is None else f"{result.exact_p_value:.4f}"
        p = result.p_value
        flag = "significant (p < 0.05)" if p < 0.05 else ("no difference in ranks" if p == 1.0 else "")
        lines.append(f"{name:<16}{result.rank_sum:>10.1f}{result.z_value:>9.2f}{p:>10.4f}{exact:>9}  {flag}".rstrip())
    sys.stdout.write("\n".join(lines) + "\n")
    data = boxplot_csv(document)
    if args.boxplot_csv == "-":
        sys.stdout.write("\n" + data)
    elif args.boxplot_csv:
        with open(args.boxplot_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
    return EXIT_OK


def cmd_synth(args) -> int:
    text = serialize_dataset(generate_dataset(args.n, args.seed))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _pipeline_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("dataset", help="CSV with project_id,EP,ES,ED,EB,ET,EI columns")
    p.add_argument("--config", help="INI-style pipeline configuration file")
    p.add_argument("--unit", default="", help="label of the effort unit, e.g. man-months")
    p.add_argument("--intervals", action="append", metavar="STAGE=N", help="interval count for one stage (repeatable)")
    p.add_argument("--pad", action="append", metavar="STAGE=D1,D2", help="explicit universe padding for one stage")
    p.add_argument("--pad-fraction", type=float, help="fraction padding for every stage")
    p.add_argument("--min-support", type=float)
    p.add_argument("--min-confidence", type=float)
    p.add_argument("--outliers", metavar="POLICY", help="none, iqr or iqr:<k>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stage-effort", description="Stage-effort estimation from prior-stage effort records.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a dataset and report what pre-processing drops")
    _pipeline_options(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("discretize", help="print universes and intervals")
    _pipeline_options(p)
    p.add_argument("--stage")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_discretize)

    p = sub.add_parser("mine", help="mine and filter rules for a target stage")
    _pipeline_options(p)
    p.add_argument("--target", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("predict", help="estimate one stage from prior efforts")
    _pipeline_options(p)
    p.add_argument("--target", required=True)
    p.add_argument("--prior", action="append", default=[], metavar="STAGE=EFFORT", help="known prior-stage effort (repeatable)")
    p.add_argument("--rules-file", help="use these rules instead of mining them")
    p.add_argument("--midpoints", help="comma-separated interval centres overriding the target stage's")
    p.add_argument("--fallback", choices=("error", "median"), default="error")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="leave-one-out evaluation against exponential regression")
    _pipeline_options(p)
    p.add_argument("--target")
    p.add_argument("--all", action="store_true", help="evaluate every predictable stage (ES..EI)")
    p.add_argument("-o", "--output", required=True, help="path of the JSON report")
    p.add_argument("--folds-csv", help="also write per-fold rows as CSV")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="Wilcoxon table and boxplot data from a report")
    p.add_argument("report")
    p.add_argument("--boxplot-csv", help="write boxplot summaries as CSV ('-' for stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", help="write a seeded synthetic dataset")
    p.add_argument("-n", type=int, default=34)
    p.add_argument("--seed", type=int, default=2009)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataInsufficientError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except PredictionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PREDICT
    except StageEffortError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
