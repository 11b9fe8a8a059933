"""Bundled example datasets and their deletion rules.

``growth`` is the classic Potthoff-Roy dental growth table: 27 children
(11 girls, 16 boys) measured at ages 8, 10, 12 and 14.  ``upsit`` is a
synthetic five-age-group smell-test dataset (180 subjects, 36 per
group) whose group means fall and spreads widen with age, so the
equal-variance screen rejects and Welch's ANOVA is the appropriate
one-way test.  Deletion rules reproduce the worked missing-data
patterns: the first subject of each age group loses its smell score,
and seven children (the first three of them girls) lose their age-14
measurement.
"""

from __future__ import annotations

from importlib import resources

import numpy as np
import pandas as pd

from .errors import SchemaError
from .mixedmodel import RepeatedDataset

__all__ = [
    "growth_missing_mask",
    "growth_to_repeated",
    "load_growth",
    "load_upsit",
    "upsit_missing_mask",
]

_GROWTH_DELETED_PERSONS = (1, 5, 9, 12, 16, 20, 24)
_GROWTH_DELETED_AGE = 14.0


def _data_path(name: str):
    return resources.files("mipool").joinpath("data", name)


def load_upsit() -> pd.DataFrame:
    """Smell-test scores: columns agegroup (factor "1".."5") and smell."""
    with resources.as_file(_data_path("upsit.csv")) as path:
        frame = pd.read_csv(path, dtype={"agegroup": str, "smell": float})
    if list(frame.columns) != ["agegroup", "smell"]:
        raise SchemaError(f"unexpected upsit columns: {list(frame.columns)}")
    if len(frame) != 180 or frame["agegroup"].nunique() != 5:
        raise SchemaError(
            f"upsit must have 180 rows in 5 age groups, found {len(frame)} "
            f"rows, {frame['agegroup'].nunique()} groups")
    return frame


def load_growth() -> pd.DataFrame:
    """Long-format growth data: Person, Gender, Age, y (one row per visit)."""
    with resources.as_file(_data_path("growth.csv")) as path:
        frame = pd.read_csv(
            path, dtype={"Person": int, "Gender": str, "Age": float, "y": float})
    if list(frame.columns) != ["Person", "Gender", "Age", "y"]:
        raise SchemaError(f"unexpected growth columns: {list(frame.columns)}")
    persons = frame["Person"].nunique()
    ages = frame["Age"].nunique()
    if len(frame) != 108 or persons != 27 or ages != 4:
        raise SchemaError(
            f"growth must be 27 persons x 4 ages = 108 rows, found "
            f"{len(frame)} rows, {persons} persons, {ages} ages")
    return frame


def upsit_missing_mask(frame: pd.DataFrame) -> np.ndarray:
    """Mark the first row of each age group, in file order."""
    first = frame.groupby("agegroup", sort=False).head(1).index
    mask = np.zeros(len(frame), dtype=bool)
    mask[frame.index.get_indexer(first)] = True
    return mask


def growth_missing_mask(frame: pd.DataFrame) -> np.ndarray:
    """Mark the age-14 visits of the seven designated children."""
    return (
        (frame["Age"] == _GROWTH_DELETED_AGE)
        & frame["Person"].isin(_GROWTH_DELETED_PERSONS)
    ).to_numpy()


def growth_to_repeated(frame: pd.DataFrame) -> RepeatedDataset:
    """Pivot long-format growth rows into a RepeatedDataset."""
    wide = frame.pivot(index="Person", columns="Age", values="y").sort_index()
    ages = np.array(sorted(frame["Age"].unique()))
    gender = (
        frame.drop_duplicates("Person").set_index("Person")["Gender"]
        .loc[wide.index].to_numpy()
    )
    return RepeatedDataset(
        response=wide.to_numpy(dtype=float),
        subject_factors={"Gender": gender},
        occasion_factors={"Age": ages},
        subject_ids=wide.index.to_numpy(),
    )
