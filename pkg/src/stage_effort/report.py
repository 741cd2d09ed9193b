"""JSON report I/O, schema validation and CSV extracts."""

from __future__ import annotations

import csv
import io
import json
import math
from functools import lru_cache
from importlib import resources

import jsonschema

from .errors import SchemaError


@lru_cache(maxsize=1)
def report_schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("report_schema.json").read_text(encoding="utf-8"))


def validate_report(document) -> None:
    """Raise :class:`SchemaError` unless ``document`` is a valid report."""
    try:
        jsonschema.validate(document, report_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"invalid report at {where}: {exc.message}") from None


def _finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


def dumps_report(document: dict) -> str:
    return json.dumps(_finite(document), indent=2, allow_nan=False) + "\n"


def loads_report(text: str) -> dict:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"report is not valid JSON: {exc}") from None
    validate_report(document)
    return document


def folds_csv(document: dict) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["target", "project_id", "actual", "method", "estimated", "bias", "abs_residual", "fallback_used", "error"])
    for stage in document["stages"]:
        for fold in stage["folds"]:
            for method in ("model", "regression"):
                row = fold[method]
                writer.writerow(
                    [stage["target"], fold["project_id"], fold["actual"], method, _cell(row["estimated"]), _cell(row["bias"]),
                     _cell(row["abs_residual"]), row["fallback_used"], row["error"] or ""]
                )
    return out.getvalue()


def boxplot_csv(document: dict) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["target", "method", "median", "q1", "q3", "iqr", "whisker_low", "whisker_high", "outliers"])
    for stage in document["stages"]:
        for method in ("model", "regression"):
            box = stage["boxplots"][method]
            if box is None:
                writer.writerow([stage["target"], method] + [""] * 7)
                continue
            writer.writerow(
                [stage["target"], method]
                + [box[k] for k in ("median", "q1", "q3", "iqr", "whisker_low", "whisker_high")]
                + [" ".join(repr(v) for v in box["outliers"])]
            )
    return out.getvalue()


def _cell(value):
    return "" if value is None else value
