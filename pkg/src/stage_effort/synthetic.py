"""Seeded synthetic stage-effort datasets for demos and tests."""

from __future__ import annotations

import numpy as np

from .dataset import Dataset, ProjectRecord

# Typical share of each stage relative to planning effort.
_STAGE_RATIOS = (1.0, 2.5, 4.0, 8.0, 3.5, 1.5)


def generate_dataset(n_projects: int = 34, seed: int = 2009, noise: float = 0.25, unit_label: str = "man-months") -> Dataset:
    """Projects whose stage efforts follow a common profile times lognormal noise.

    The planning effort is lognormal; every later stage is its ratio times a
    project-wide scale times per-stage noise, so earlier stages carry real
    (but imperfect) information about later ones.
    """
    rng = np.random.default_rng(seed)
    records = []
    for k in range(n_projects):
        scale = rng.lognormal(mean=2.5, sigma=0.6)
        efforts = []
        for ratio in _STAGE_RATIOS:
            efforts.append(round(float(scale * ratio * rng.lognormal(0.0, noise)), 2))
        records.append(ProjectRecord(f"P{k + 1:03d}", tuple(efforts)))
    return Dataset(tuple(records), unit_label)
