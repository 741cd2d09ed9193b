"""Lifecycle stages, project effort records and dataset pre-processing."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .errors import EmptyDatasetError, ParameterError, ParseError, PolicyError, SchemaError


class Stage(enum.IntEnum):
    """The six lifecycle stages, valued by their position in the pipeline."""

    EP = 1
    ES = 2
    ED = 3
    EB = 4
    ET = 5
    EI = 6

    @property
    def code(self) -> str:
        return self.name

    @property
    def ordinal(self) -> int:
        return int(self)

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]

    @classmethod
    def parse(cls, code: str) -> "Stage":
        try:
            return cls[code.strip().upper()]
        except KeyError:
            raise ParameterError(f"unknown stage {code!r}; expected one of {', '.join(STAGE_CODES)}") from None

    def predecessors(self) -> tuple["Stage", ...]:
        return tuple(s for s in Stage if s < self)

    def __str__(self) -> str:
        return self.name


_DISPLAY_NAMES = {
    Stage.EP: "Planning",
    Stage.ES: "Specification",
    Stage.ED: "Design",
    Stage.EB: "Building",
    Stage.ET: "Testing",
    Stage.EI: "Implementation",
}

STAGES: tuple[Stage, ...] = tuple(Stage)
STAGE_CODES: tuple[str, ...] = tuple(s.name for s in Stage)
# EP has no prior stage to predict from.
TARGET_STAGES: tuple[Stage, ...] = STAGES[1:]
ID_COLUMN = "project_id"


@dataclass(frozen=True)
class ProjectRecord:
    """Effort per stage for one project; ``None`` marks a missing value."""

    project_id: str
    efforts: tuple[Optional[float], ...]

    def __post_init__(self):
        if len(self.efforts) != len(STAGES):
            raise ParameterError(f"expected {len(STAGES)} stage efforts, got {len(self.efforts)}")
        for stage, value in zip(STAGES, self.efforts):
            if value is not None and not (math.isfinite(value) and value >= 0):
                raise ParameterError(f"project {self.project_id}: {stage} effort must be finite and >= 0, got {value}")

    @classmethod
    def from_mapping(cls, project_id: str, efforts: Mapping[Stage, Optional[float]]) -> "ProjectRecord":
        values = []
        for stage in STAGES:
            value = efforts.get(stage)
            values.append(None if value is None else float(value))
        return cls(str(project_id), tuple(values))

    def effort(self, stage: Stage) -> Optional[float]:
        return self.efforts[stage - 1]

    def as_dict(self) -> dict[Stage, Optional[float]]:
        return dict(zip(STAGES, self.efforts))

    @property
    def complete(self) -> bool:
        return all(v is not None for v in self.efforts)

    def missing_stages(self) -> tuple[Stage, ...]:
        return tuple(s for s, v in zip(STAGES, self.efforts) if v is None)

    def scaled(self, factor: float) -> "ProjectRecord":
        return ProjectRecord(self.project_id, tuple(None if v is None else v * factor for v in self.efforts))


@dataclass(frozen=True)
class Dataset:
    records: tuple[ProjectRecord, ...]
    unit_label: str = ""
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        index = {}
        for position, record in enumerate(self.records):
            if record.project_id in index:
                raise ParameterError(f"duplicate project_id {record.project_id!r}")
            index[record.project_id] = position
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[ProjectRecord]:
        return iter(self.records)

    def __getitem__(self, project_id: str) -> ProjectRecord:
        return self.records[self._index[project_id]]

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(r.project_id for r in self.records)

    @property
    def complete(self) -> bool:
        return all(r.complete for r in self.records)

    def column(self, stage: Stage) -> np.ndarray:
        """Present efforts of ``stage`` in record order (missing values skipped)."""
        return np.array([r.effort(stage) for r in self.records if r.effort(stage) is not None], dtype=float)

    def replace(self, records: Iterable[ProjectRecord]) -> "Dataset":
        return Dataset(tuple(records), self.unit_label)

    def without(self, project_id: str) -> "Dataset":
        return self.replace(r for r in self.records if r.project_id != project_id)

    def scaled(self, factor: float) -> "Dataset":
        return self.replace(r.scaled(factor) for r in self.records)


def parse_dataset(csv_text: str, unit_label: str = "") -> Dataset:
    """Parse CSV text with a ``project_id`` column and the six stage columns.

    Columns may come in any order. An empty field is a missing effort.
    """
    reader = csv.reader(io.StringIO(csv_text))
    header = None
    for row in reader:
        if any(cell.strip() for cell in row):
            header = [cell.strip() for cell in row]
            break
    if header is None:
        raise SchemaError("empty input: no header row")

    expected = (ID_COLUMN,) + STAGE_CODES
    seen = set()
    for name in header:
        if name not in expected:
            raise SchemaError(f"unknown column {name!r}", column=name)
        if name in seen:
            raise SchemaError(f"duplicate column {name!r}", column=name)
        seen.add(name)
    for name in expected:
        if name not in seen:
            raise SchemaError(f"missing column {name!r}", column=name)
    position = {name: header.index(name) for name in expected}

    records = []
    for line_no, row in enumerate(reader, start=2):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"line {line_no}: expected {len(header)} fields, got {len(row)}", row=line_no)
        project_id = row[position[ID_COLUMN]].strip()
        if not project_id:
            raise ParseError(f"line {line_no}: empty project_id", row=line_no, column=ID_COLUMN)
        efforts = []
        for stage in STAGES:
            raw = row[position[stage.name]].strip()
            if raw == "":
                efforts.append(None)
                continue
            try:
                value = float(raw)
            except ValueError:
                raise ParseError(
                    f"row {project_id}, column {stage.name}: not a number: {raw!r}", row=project_id, column=stage.name
                ) from None
            if not math.isfinite(value) or value < 0:
                raise ParseError(
                    f"row {project_id}, column {stage.name}: effort must be finite and >= 0, got {raw!r}",
                    row=project_id,
                    column=stage.name,
                )
            efforts.append(value)
        records.append(ProjectRecord(project_id, tuple(efforts)))
    try:
        return Dataset(tuple(records), unit_label)
    except ParameterError as exc:
        raise ParseError(str(exc)) from None


def serialize_dataset(dataset: Dataset) -> str:
    """Inverse of :func:`parse_dataset` (floats written with ``repr`` so they round-trip)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow((ID_COLUMN,) + STAGE_CODES)
    for record in dataset:
        writer.writerow([record.project_id] + ["" if v is None else repr(v) for v in record.efforts])
    return out.getvalue()


def read_dataset(path, unit_label: str = "") -> Dataset:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_dataset(fh.read(), unit_label)


def filter_complete(dataset: Dataset) -> Dataset:
    """Keep only records with all six efforts present."""
    kept = dataset.replace(r for r in dataset if r.complete)
    if len(kept) == 0:
        raise EmptyDatasetError("no complete records left after dropping missing values")
    return kept


def quartiles(values: Sequence[float]) -> tuple[float, float, float]:
    """(Q1, median, Q3) by linear interpolation between order statistics.

    The p-quantile sits at 1-based position p*(n-1)+1 of the sorted sample,
    which is numpy's default ``linear`` method.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ParameterError("quartiles of an empty sample")
    q1, q2, q3 = np.quantile(arr, [0.25, 0.5, 0.75])
    return float(q1), float(q2), float(q3)


@dataclass(frozen=True)
class IQRPolicy:
    """Drop records lying outside ``[Q1 - k*IQR, Q3 + k*IQR]`` in any stage."""

    k: float = 1.5

    def __post_init__(self):
        if not self.k >= 0:
            raise ParameterError(f"IQR multiplier must be >= 0, got {self.k}")

    def __str__(self) -> str:
        return f"iqr:{self.k!r}"


def find_outliers(dataset: Dataset, policy: Optional[IQRPolicy]) -> dict[str, tuple[Stage, ...]]:
    """Map of offending project id to the stages where it falls outside the fences."""
    if policy is None:
        return {}
    if not dataset.complete:
        raise ParameterError("outlier removal needs a complete dataset; run filter_complete first")
    if len(dataset) < 4:
        raise PolicyError(f"IQR outlier policy needs at least 4 records, got {len(dataset)}")
    offending: dict[str, list[Stage]] = {}
    for stage in STAGES:
        q1, _, q3 = quartiles(dataset.column(stage))
        spread = q3 - q1
        low, high = q1 - policy.k * spread, q3 + policy.k * spread
        for record in dataset:
            value = record.effort(stage)
            if value < low or value > high:
                offending.setdefault(record.project_id, []).append(stage)
    return {pid: tuple(stages) for pid, stages in offending.items()}


def remove_outliers(dataset: Dataset, policy: Optional[IQRPolicy]) -> Dataset:
    if policy is None:
        return dataset
    dropped = find_outliers(dataset, policy)
    return dataset.replace(r for r in dataset if r.project_id not in dropped)
