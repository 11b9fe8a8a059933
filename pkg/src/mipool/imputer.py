"""Bayesian normal-regression imputation for a single response column
with monotone missingness.

Per imputation, on the complete cases: draw the residual variance from
its scaled inverse chi-square posterior, draw coefficients from their
normal posterior given that variance, then fill each missing cell with
its posterior-predictive draw.  Imputation l consumes its own random
stream keyed by (seed, l), so the outputs do not depend on the order in
which imputations are generated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
import pandas as pd

from . import design as design_mod
from . import specfun
from .errors import CollinearityError, InsufficientDataError, InvalidArgumentError

__all__ = ["CompletedDataset", "ImputationSpec", "delete_values", "impute_monotone_reg"]

RowRule = Union[Callable[[pd.DataFrame], np.ndarray], np.ndarray, pd.Series]


@dataclass(frozen=True)
class ImputationSpec:
    """What to impute: response column, predictor effects, M and seed."""

    response: str
    predictors: tuple[str, ...]
    m: int
    seed: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise InvalidArgumentError(f"m must be at least 1, got {self.m!r}")
        tokens = {t for eff in self.predictors for t in design_mod.parse_effect(eff)}
        if self.response in tokens:
            raise InvalidArgumentError(
                f"response {self.response!r} cannot appear among the predictors")


@dataclass(frozen=True)
class CompletedDataset:
    """One completed copy of the input with its imputation index (1..M)."""

    imputation: int
    data: pd.DataFrame


def delete_values(data: pd.DataFrame, response: str, rule: RowRule) -> pd.DataFrame:
    """Set the response to missing on the rows selected by ``rule``.

    ``rule`` is a boolean mask (array or Series aligned to ``data``) or
    a callable producing one.  Everything else is left untouched.
    """
    if response not in data.columns:
        raise InvalidArgumentError(f"no column {response!r} in dataset")
    mask = rule(data) if callable(rule) else rule
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (len(data),):
        raise InvalidArgumentError(
            f"rule selected {mask.shape} rows for a dataset of {len(data)}")
    out = data.copy()
    values = out[response].to_numpy(dtype=float, copy=True)
    values[mask] = np.nan
    out[response] = values
    return out


def _design_columns(data: pd.DataFrame, spec: ImputationSpec) -> dict[str, np.ndarray]:
    columns: dict[str, np.ndarray] = {}
    for effect in spec.predictors:
        for token in design_mod.parse_effect(effect):
            if token not in data.columns:
                raise InvalidArgumentError(
                    f"predictor {token!r} not found in dataset")
            col = data[token]
            if pd.api.types.is_numeric_dtype(col):
                arr = col.to_numpy(dtype=float)
                if np.isnan(arr).any():
                    raise InvalidArgumentError(
                        f"predictor {token!r} has missing values; predictors "
                        "must be fully observed")
                columns[token] = arr
            else:
                if col.isna().any():
                    raise InvalidArgumentError(
                        f"predictor {token!r} has missing values; predictors "
                        "must be fully observed")
                columns[token] = col.astype(str).to_numpy()
    return columns


def impute_values(x: np.ndarray, y: np.ndarray, missing: np.ndarray,
                  m: int, seed: int) -> np.ndarray:
    """Posterior-predictive draws for the missing cells.

    Returns an (m, n_missing) array; row l-1 is imputation l.  Array
    core shared by `impute_monotone_reg` and the simulation harness.
    """
    x_obs = x[~missing]
    y_obs = y[~missing]
    n_obs, p = x_obs.shape
    if n_obs < p + 2:
        raise InsufficientDataError(
            f"need at least {p + 2} complete cases for {p} design columns, "
            f"got {n_obs}")
    xtx = x_obs.T @ x_obs
    try:
        chol = np.linalg.cholesky(xtx)
    except np.linalg.LinAlgError:
        raise CollinearityError("predictor cross-product matrix is singular")
    beta_hat = np.linalg.solve(xtx, x_obs.T @ y_obs)
    rss = float(np.sum((y_obs - x_obs @ beta_hat) ** 2))
    df_res = n_obs - p
    # A A' = (X'X)^-1 via the inverse Cholesky factor
    a = np.linalg.solve(chol, np.eye(p)).T
    x_mis = x[missing]
    n_mis = int(missing.sum())
    out = np.empty((m, n_mis))
    for l in range(1, m + 1):
        stream = specfun.RngStream(seed=seed, stream_id=l)
        sigma2 = rss / specfun.draw_chisq(stream, float(df_res))
        sigma = np.sqrt(sigma2)
        beta_star = beta_hat + sigma * (
            a @ specfun.draw_standard_normal_vector(stream, p))
        noise = specfun.draw_standard_normal_vector(stream, n_mis)
        out[l - 1] = x_mis @ beta_star + sigma * noise
    return out


def impute_monotone_reg(data: pd.DataFrame, spec: ImputationSpec) -> list[CompletedDataset]:
    """Generate M completed copies of ``data``.

    Observed response cells are carried over bit-identically; a dataset
    with no missing cells comes back as M identical copies.
    """
    if spec.response not in data.columns:
        raise InvalidArgumentError(f"no response column {spec.response!r}")
    y = data[spec.response].to_numpy(dtype=float)
    missing = np.isnan(y)
    if not missing.any():
        return [CompletedDataset(imputation=l, data=data.copy())
                for l in range(1, spec.m + 1)]
    columns = _design_columns(data, spec)
    x = design_mod.effect_design(columns, list(spec.predictors)).matrix
    draws = impute_values(x, y, missing, spec.m, spec.seed)
    completed = []
    for l in range(1, spec.m + 1):
        filled = y.copy()
        filled[missing] = draws[l - 1]
        frame = data.copy()
        frame[spec.response] = filled
        completed.append(CompletedDataset(imputation=l, data=frame))
    return completed
