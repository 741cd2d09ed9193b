"""Pipeline configuration and its INI-style file format.

Example file (every key optional)::

    [intervals]
    EP = 7
    ES = 8

    [padding]              ; default for all stages
    mode = fraction
    fraction = 0.05

    [padding.ES]           ; per-stage override
    mode = explicit
    d1 = 12
    d2 = 8

    [mining]
    min_support = 0.01
    min_confidence = 0.8

    [preprocessing]
    outlier_policy = none  ; or iqr, or iqr:2.0

    [prediction]
    fallback = median      ; or error
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from .dataset import STAGES, IQRPolicy, Stage
from .discretize import Explicit, Fraction, PaddingPolicy
from .errors import ConfigurationError, ParameterError

DEFAULT_INTERVALS: Mapping[Stage, int] = {
    Stage.EP: 7,
    Stage.ES: 8,
    Stage.ED: 10,
    Stage.EB: 9,
    Stage.ET: 8,
    Stage.EI: 11,
}
DEFAULT_MIN_SUPPORT = 0.01
DEFAULT_MIN_CONFIDENCE = 0.8
FALLBACKS = ("median", "error")


@dataclass(frozen=True)
class PipelineConfig:
    intervals: Mapping[Stage, int] = field(default_factory=lambda: dict(DEFAULT_INTERVALS))
    padding: Mapping[Stage, PaddingPolicy] = field(default_factory=lambda: {s: Fraction(0.05) for s in STAGES})
    min_support: float = DEFAULT_MIN_SUPPORT
    min_confidence: float = DEFAULT_MIN_CONFIDENCE
    outlier_policy: Optional[IQRPolicy] = None
    fallback: str = "median"

    def __post_init__(self):
        intervals = {s: self.intervals.get(s, DEFAULT_INTERVALS[s]) for s in STAGES}
        for stage, n in intervals.items():
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise ParameterError(f"interval count for {stage} must be an integer >= 1, got {n!r}")
        padding = {s: self.padding.get(s, Fraction(0.05)) for s in STAGES}
        object.__setattr__(self, "intervals", intervals)
        object.__setattr__(self, "padding", padding)
        for name in ("min_support", "min_confidence"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ParameterError(f"{name} must lie in (0, 1], got {value}")
        if self.fallback not in FALLBACKS:
            raise ParameterError(f"fallback must be one of {FALLBACKS}, got {self.fallback!r}")

    def with_overrides(self, **changes) -> "PipelineConfig":
        if "intervals" in changes:
            changes["intervals"] = {**self.intervals, **changes["intervals"]}
        if "padding" in changes:
            changes["padding"] = {**self.padding, **changes["padding"]}
        return replace(self, **changes)

    def scaled_padding(self, factor: float) -> "PipelineConfig":
        return replace(self, padding={s: p.scaled(factor) for s, p in self.padding.items()})

    def to_dict(self) -> dict:
        return {
            "intervals": {s.name: n for s, n in self.intervals.items()},
            "padding": {s.name: padding_to_dict(p) for s, p in self.padding.items()},
            "min_support": self.min_support,
            "min_confidence": self.min_confidence,
            "outlier_policy": "none" if self.outlier_policy is None else str(self.outlier_policy),
            "fallback": self.fallback,
        }


def padding_to_dict(pad: PaddingPolicy) -> dict:
    if isinstance(pad, Explicit):
        return {"mode": "explicit", "d1": pad.d1, "d2": pad.d2}
    return {"mode": "fraction", "fraction": pad.fraction}


def parse_outlier_policy(text: str) -> Optional[IQRPolicy]:
    value = text.strip().lower()
    if value in ("", "none"):
        return None
    if value == "iqr":
        return IQRPolicy()
    if value.startswith("iqr:"):
        try:
            return IQRPolicy(float(value[4:]))
        except ValueError:
            pass
    raise ConfigurationError(f"bad outlier policy {text!r}; use none, iqr or iqr:<k>")


def _number(section, key, cast=float):
    raw = section.get(key)
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise ConfigurationError(f"[{section.name}] {key}: not a valid number: {raw!r}") from None


def _padding_section(section) -> PaddingPolicy:
    mode = section.get("mode", "fraction").strip().lower()
    unknown = set(section) - {"mode", "d1", "d2", "fraction"}
    if unknown:
        raise ConfigurationError(f"[{section.name}] unknown keys: {', '.join(sorted(unknown))}")
    try:
        if mode == "explicit":
            if "d1" not in section or "d2" not in section:
                raise ConfigurationError(f"[{section.name}] explicit padding needs d1 and d2")
            return Explicit(_number(section, "d1"), _number(section, "d2"))
        if mode == "fraction":
            return Fraction(_number(section, "fraction") if "fraction" in section else 0.05)
    except ParameterError as exc:
        raise ConfigurationError(f"[{section.name}] {exc}") from None
    raise ConfigurationError(f"[{section.name}] mode must be explicit or fraction, got {mode!r}")


_SECTIONS = {"intervals", "padding", "mining", "preprocessing", "prediction"}


def parse_config(text: str, base: Optional[PipelineConfig] = None) -> PipelineConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"unreadable config: {exc}") from None

    cfg = base or PipelineConfig()
    changes: dict = {}
    for name in parser.sections():
        head = name.split(".", 1)[0]
        if head not in _SECTIONS or (head != "padding" and "." in name):
            raise ConfigurationError(f"unknown config section [{name}]")

    if parser.has_section("intervals"):
        section = parser["intervals"]
        intervals = {}
        for key in section:
            try:
                stage = Stage.parse(key)
            except ParameterError as exc:
                raise ConfigurationError(f"[intervals] {exc}") from None
            intervals[stage] = _number(section, key, int)
        changes["intervals"] = intervals

    padding = {}
    if parser.has_section("padding"):
        default = _padding_section(parser["padding"])
        padding = {s: default for s in STAGES}
    for name in parser.sections():
        if name.startswith("padding."):
            try:
                stage = Stage.parse(name.split(".", 1)[1])
            except ParameterError as exc:
                raise ConfigurationError(f"[{name}] {exc}") from None
            padding[stage] = _padding_section(parser[name])
    if padding:
        changes["padding"] = padding

    known = {"mining": {"min_support", "min_confidence"}, "preprocessing": {"outlier_policy"}, "prediction": {"fallback"}}
    for name, keys in known.items():
        if not parser.has_section(name):
            continue
        section = parser[name]
        unknown = set(section) - keys
        if unknown:
            raise ConfigurationError(f"[{name}] unknown keys: {', '.join(sorted(unknown))}")
        for key in section:
            if key in ("min_support", "min_confidence"):
                changes[key] = _number(section, key)
            elif key == "outlier_policy":
                changes[key] = parse_outlier_policy(section[key])
            else:
                changes[key] = section[key].strip().lower()
    try:
        return cfg.with_overrides(**changes)
    except ParameterError as exc:
        raise ConfigurationError(str(exc)) from None


def load_config(path, base: Optional[PipelineConfig] = None) -> PipelineConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base)
