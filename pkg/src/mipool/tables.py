"""Ingestion and emission of per-imputation analysis tables.

Input CSVs are shaped like the stacked per-imputation ODS tables a
stats package exports: one row per (imputation, source), headers such
as ``_Imputation_``, ``Source``/``Effect``, ``DF``, ``MS``, ``MSE``,
``NumDF``, ``DenDF``, ``FValue``, ``ChiSq``.  Header matching is
case-insensitive with leading/trailing underscores ignored, and the
whole header is validated before any numeric parsing.  Output tables
are written at 17 significant digits so a written file re-reads to
identical values; the human rendering rounds to 5 significant figures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from . import pooling
from .analyzers import FractionalFRecord, WelchResult
from .errors import (
    IntegrityError,
    InvalidArgumentError,
    SchemaError,
    ZeroStatisticError,
)
from .specfun import f_cdf, upper_tail

__all__ = [
    "ImputedTable",
    "combined_table",
    "format_value",
    "pool_chisq_table",
    "pool_fractional_table",
    "pool_tests3_table",
    "pool_welch_table",
    "read_imputed_table",
    "render_table",
    "write_table",
]

# canonical column -> accepted synonyms (after normalization)
_SYNONYMS = {
    "imputation": ("imputation",),
    "source": ("source", "effect"),
    "df": ("df",),
    "ms": ("ms",),
    "de_df": ("de_df",),
    "mse": ("mse",),
    "chisq": ("chisq",),
    "numdf": ("numdf",),
    "dendf": ("dendf",),
    "fvalue": ("fvalue",),
}

SCHEMAS: dict[str, tuple[str, ...]] = {
    "fractional-f": ("imputation", "source", "df", "ms", "de_df", "mse"),
    "chisq": ("imputation", "source", "df", "chisq"),
    "welch": ("imputation", "source", "df", "fvalue"),
    "tests3": ("imputation", "source", "numdf", "dendf", "fvalue"),
}

# columns where a missing value is tolerated (resolved during reshaping)
_OPTIONAL_CELLS = {"welch": ("fvalue",)}

_WELCH_ERROR_LABEL = "error"


@dataclass(frozen=True)
class ImputedTable:
    """Validated long-format table of per-imputation analysis rows."""

    schema: str
    data: pd.DataFrame
    m: int


def _normalize(header: str) -> str:
    return header.strip().strip("_").lower()


def _map_headers(columns: Sequence[str], schema: str) -> dict[str, str]:
    normalized = {_normalize(c): c for c in columns}
    if len(normalized) < len(columns):
        seen: dict[str, str] = {}
        for c in columns:
            key = _normalize(c)
            if key in seen:
                raise SchemaError(
                    f"columns {seen[key]!r} and {c!r} collide after "
                    "case/underscore normalization")
            seen[key] = c
    mapping: dict[str, str] = {}
    for canonical in SCHEMAS[schema]:
        for candidate in _SYNONYMS[canonical]:
            if candidate in normalized:
                mapping[canonical] = normalized[candidate]
                break
        else:
            raise SchemaError(
                f"missing required column {canonical!r} for schema "
                f"{schema!r} (accepted names: "
                f"{', '.join(_SYNONYMS[canonical])})")
    return mapping


def _parse_numeric(raw: pd.Series, name: str, allow_missing: bool) -> np.ndarray:
    cleaned = raw.astype(str).str.strip().replace({"": None, ".": None})
    values = pd.to_numeric(cleaned, errors="coerce").to_numpy(dtype=float)
    fresh_nan = np.isnan(values) & cleaned.notna().to_numpy()
    if fresh_nan.any():
        row = int(np.argmax(fresh_nan))
        raise SchemaError(
            f"column {name!r} has a non-numeric value "
            f"{raw.iloc[row]!r} in row {row + 1}")
    if not allow_missing and np.isnan(values).any():
        row = int(np.argmax(np.isnan(values)))
        raise SchemaError(f"column {name!r} has a missing value in row {row + 1}")
    return values


def read_imputed_table(source: str | pd.DataFrame, schema: str) -> ImputedTable:
    """Read and validate a per-imputation table from a CSV path or frame."""
    if schema not in SCHEMAS:
        raise InvalidArgumentError(f"unknown schema {schema!r}")
    if isinstance(source, pd.DataFrame):
        raw = source.astype(object)
    else:
        raw = pd.read_csv(source, dtype=str, keep_default_na=False)
    if raw.shape[1] == 0 or len(raw) == 0:
        raise SchemaError("table is empty")
    mapping = _map_headers(list(raw.columns), schema)
    optional = _OPTIONAL_CELLS.get(schema, ())
    data = pd.DataFrame(index=raw.index)
    for canonical in SCHEMAS[schema]:
        column = raw[mapping[canonical]]
        if canonical == "source":
            labels = column.astype(str).str.strip()
            if (labels == "").any():
                row = int((labels == "").argmax())
                raise SchemaError(f"empty source label in row {row + 1}")
            data[canonical] = labels
        else:
            data[canonical] = _parse_numeric(
                column, mapping[canonical], canonical in optional)
    imput = data["imputation"].to_numpy()
    if not np.all(imput == np.round(imput)) or imput.min() < 1:
        raise IntegrityError("imputation indices must be integers >= 1")
    data["imputation"] = imput.astype(int)
    m = int(imput.max())
    for label, block in data.groupby("source", sort=False):
        idx = np.sort(block["imputation"].to_numpy())
        if len(idx) != m or not np.array_equal(idx, np.arange(1, m + 1)):
            raise IntegrityError(
                f"source {label!r} does not cover imputations 1..{m} exactly "
                "(gap or duplicate)")
    return ImputedTable(schema=schema, data=data.reset_index(drop=True), m=m)


def _sources_in_order(data: pd.DataFrame) -> list[str]:
    return list(dict.fromkeys(data["source"]))


def pool_fractional_table(table: ImputedTable) -> list[pooling.CombinedTest]:
    """Pool a fractional-form F table, one combined test per source."""
    if table.schema != "fractional-f":
        raise InvalidArgumentError(f"expected fractional-f table, got {table.schema!r}")
    results = []
    for label in _sources_in_order(table.data):
        block = table.data[table.data["source"] == label].sort_values("imputation")
        records = [
            FractionalFRecord(source=label, num_ms=row.ms, num_df=row.df,
                              den_ms=row.mse, den_df=row.de_df,
                              imputation=int(row.imputation))
            for row in block.itertuples()
        ]
        results.append(pooling.combine_f_fractional(records))
    return results


def pool_chisq_table(table: ImputedTable,
                     scaling: pooling.ChiSqScaling = "macro") -> list[pooling.CombinedTest]:
    """Pool a chi-square table, one combined test per source."""
    if table.schema != "chisq":
        raise InvalidArgumentError(f"expected chisq table, got {table.schema!r}")
    zeros = table.data["chisq"].to_numpy() == 0.0
    if zeros.any():
        row = int(np.argmax(zeros))
        raise ZeroStatisticError(
            f"chi-square statistic is zero in row {row + 1} (source "
            f"{table.data['source'].iloc[row]!r}, imputation "
            f"{int(table.data['imputation'].iloc[row])}); reciprocal pooling "
            "undefined")
    results = []
    for label in _sources_in_order(table.data):
        block = table.data[table.data["source"] == label].sort_values("imputation")
        records = [
            pooling.ChiSqRecord(source=label, lam=row.chisq, df=row.df,
                                imputation=int(row.imputation))
            for row in block.itertuples()
        ]
        results.append(pooling.combine_chisq(records, scaling=scaling))
    return results


def pool_welch_table(table: ImputedTable) -> list[pooling.CombinedTest]:
    """Pool a stacked Welch ODS table.

    Each imputation block must hold exactly one ``Error`` row (whose DF
    is the Welch denominator df) and exactly one effect row carrying
    the F value on k-1 numerator df.
    """
    if table.schema != "welch":
        raise InvalidArgumentError(f"expected welch table, got {table.schema!r}")
    data = table.data
    is_error = data["source"].str.lower() == _WELCH_ERROR_LABEL
    records = []
    effect_labels = []
    for imp, block in data.groupby("imputation", sort=True):
        err = block[is_error.loc[block.index]]
        eff = block[~is_error.loc[block.index]]
        if len(err) != 1:
            raise SchemaError(
                f"imputation {imp} has {len(err)} Error rows; expected exactly 1")
        if len(eff) != 1:
            raise SchemaError(
                f"imputation {imp} has {len(eff)} effect rows; expected exactly 1")
        gamma = float(err["df"].iloc[0])
        f_value = float(eff["fvalue"].iloc[0])
        if math.isnan(f_value):
            raise SchemaError(f"imputation {imp} has no F value on its effect row")
        k = int(round(float(eff["df"].iloc[0]))) + 1
        label = str(eff["source"].iloc[0])
        effect_labels.append(label)
        welch = WelchResult(f_value=f_value, k=k, gamma=gamma,
                            p_value=upper_tail(f_cdf(f_value, k - 1.0, gamma)))
        records.append(pooling.welch_to_fractional(welch, imputation=int(imp),
                                                   source=label))
    if len(set(effect_labels)) > 1:
        raise SchemaError(
            f"effect rows mix sources: {sorted(set(effect_labels))}")
    return [pooling.combine_f_fractional(records)]


def pool_tests3_table(table: ImputedTable,
                      variant: pooling.SfaVariant = "macro",
                      scaling: pooling.ChiSqScaling = "macro") -> list[pooling.CombinedTest]:
    """Pool a Type-III F table through the shrinking-factor route."""
    if table.schema != "tests3":
        raise InvalidArgumentError(f"expected tests3 table, got {table.schema!r}")
    numdf = table.data["numdf"].to_numpy()
    if np.any(numdf < 1) or np.any(numdf != np.round(numdf)):
        row = int(np.argmax((numdf < 1) | (numdf != np.round(numdf))))
        raise SchemaError(
            f"NumDF must be a positive integer; row {row + 1} has "
            f"{numdf[row]!r}")
    results = []
    for label in _sources_in_order(table.data):
        block = table.data[table.data["source"] == label].sort_values("imputation")
        records = [
            pooling.sfa_transform(row.fvalue, int(row.numdf), row.dendf,
                                  variant=variant, source=label,
                                  imputation=int(row.imputation))
            for row in block.itertuples()
        ]
        results.append(pooling.combine_chisq(records, scaling=scaling))
    return results


# output-table column rosters, matching the published macro labels
_F_COLUMNS = ("Source", "Imputation number", "DF", "Error DF",
              "MI adjusted F", "p-value")
_CHISQ_COLUMNS = ("Source", "Imputation_number", "DF", "Chisq", "p_value")
_TESTS3_COLUMNS = ("Source", "Imputation number", "DF", "Chisq", "p-value")


def combined_table(results: Sequence[pooling.CombinedTest],
                   roster: str = "auto") -> pd.DataFrame:
    """Result frame for pooled tests.

    ``roster`` picks the output labels: ``"f"`` (Source, Imputation
    number, DF, Error DF, MI adjusted F, p-value), ``"chisq"``
    (Imputation_number/p_value style) or ``"tests3"``; ``"auto"``
    chooses from the statistic kind.
    """
    if not results:
        raise InvalidArgumentError("no results to tabulate")
    kinds = {r.kind for r in results}
    if roster == "auto":
        roster = "f" if kinds == {"F"} else "chisq"
    if roster == "f":
        if kinds != {"F"}:
            raise InvalidArgumentError("F roster requires F results")
        return pd.DataFrame(
            [(r.source, r.m, r.df_num, r.df_den, r.statistic, r.p_value)
             for r in results],
            columns=list(_F_COLUMNS))
    if roster not in ("chisq", "tests3"):
        raise InvalidArgumentError(f"unknown roster {roster!r}")
    if kinds != {"ChiSq"}:
        raise InvalidArgumentError("chi-square roster requires chi-square results")
    columns = _CHISQ_COLUMNS if roster == "chisq" else _TESTS3_COLUMNS
    return pd.DataFrame(
        [(r.source, r.m, r.df_num, r.statistic, r.p_value) for r in results],
        columns=list(columns))


def format_value(value: object, precision: str = "display") -> str:
    """Render one cell: 17 significant digits or a 5-significant display.

    In display mode, probabilities whose upper tail has been consumed
    to below 1e-15 render as 0.00000.
    """
    if isinstance(value, float):
        if precision == "full":
            return repr(value)
        if 0.0 <= value < 1e-15:
            return "0.00000"
        return f"{value:.5g}"
    return str(value)


def write_table(frame: pd.DataFrame, path: str) -> None:
    """Write a result table as UTF-8 CSV at full precision."""
    out = frame.copy()
    for col in out.columns:
        if out[col].dtype.kind == "f":
            out[col] = out[col].map(repr)
    out.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")


def render_table(frame: pd.DataFrame, precision: str = "display") -> str:
    """Plain-text rendering with aligned columns."""
    headers = [str(c) for c in frame.columns]
    rows = [[format_value(v, precision) for v in row]
            for row in frame.itertuples(index=False)]
    widths = [max(len(h), *(len(r[j]) for r in rows)) if rows else len(h)
              for j, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[j]) for j, h in enumerate(headers))]
    for r in rows:
        lines.append("  ".join(r[j].ljust(widths[j]) for j in range(len(headers))))
    return "\n".join(lines)
