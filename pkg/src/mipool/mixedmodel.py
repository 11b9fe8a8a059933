"""Fixed-effects model for balanced repeated measures with unstructured
within-subject covariance, fit by maximum likelihood.

Estimation alternates a GLS step for the coefficients with the closed
form covariance update (mean outer product of per-subject residual
vectors); each half step increases the multivariate-normal likelihood,
so the trace of log-likelihood values is nondecreasing.  Per-effect
Type-III Wald F rows use the between-within denominator df convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import design as design_mod
from .errors import (
    ContrastSingularityError,
    ConvergenceError,
    InvalidArgumentError,
    ModelSpecError,
    SingularCovarianceError,
)

__all__ = [
    "MixedFit",
    "RepeatedDataset",
    "RepeatedDesign",
    "Tests3Row",
    "build_design",
    "fit_gls_unstructured",
    "type3_tests",
]

_TOL = 1e-10
_MAX_ITER = 200


@dataclass(frozen=True)
class RepeatedDataset:
    """Complete, balanced repeated-measures data.

    ``response`` is a subjects-by-occasions matrix; ``subject_factors``
    holds per-subject covariates (e.g. a gender label per subject) and
    ``occasion_factors`` per-occasion numeric covariates (e.g. the age
    at each measurement occasion).
    """

    response: np.ndarray
    subject_factors: Mapping[str, np.ndarray]
    occasion_factors: Mapping[str, np.ndarray]
    subject_ids: np.ndarray | None = None

    def __post_init__(self) -> None:
        resp = np.asarray(self.response, dtype=float)
        if resp.ndim != 2:
            raise InvalidArgumentError("response must be a 2-d matrix")
        if np.isnan(resp).any():
            raise InvalidArgumentError(
                "response contains missing cells; impute before fitting")
        object.__setattr__(self, "response", resp)
        for name, vals in self.subject_factors.items():
            if len(np.asarray(vals)) != resp.shape[0]:
                raise InvalidArgumentError(
                    f"subject factor {name!r} length does not match subjects")
        for name, vals in self.occasion_factors.items():
            if len(np.asarray(vals)) != resp.shape[1]:
                raise InvalidArgumentError(
                    f"occasion factor {name!r} length does not match occasions")

    @property
    def n_subjects(self) -> int:
        return self.response.shape[0]

    @property
    def n_occasions(self) -> int:
        return self.response.shape[1]


@dataclass(frozen=True)
class RepeatedDesign:
    """Per-subject design stack with effect metadata.

    ``within_column[j]`` marks columns that vary inside at least one
    subject; those consume within-subject residual df.
    """

    x: np.ndarray  # (n_subjects, n_occasions, p)
    column_names: tuple[str, ...]
    effect_columns: dict[str, tuple[int, ...]]
    within_column: np.ndarray

    @property
    def n_columns(self) -> int:
        return self.x.shape[2]


@dataclass(frozen=True)
class MixedFit:
    """Converged ML fit: coefficients, covariance pieces and likelihood."""

    beta: np.ndarray
    sigma: np.ndarray
    log_likelihood: float
    beta_covariance: np.ndarray
    iterations: int
    loglik_trace: tuple[float, ...]


@dataclass(frozen=True)
class Tests3Row:
    """One Type-III test row: effect, df pair, F value, imputation index."""

    effect: str
    num_df: int
    den_df: float
    f_value: float
    imputation: int

    def __post_init__(self) -> None:
        if self.num_df < 1 or self.den_df <= 0.0 or self.f_value < 0.0:
            raise InvalidArgumentError(
                f"invalid Type-III row for {self.effect!r}: num_df={self.num_df}, "
                f"den_df={self.den_df!r}, f_value={self.f_value!r}")


def build_design(dataset: RepeatedDataset, effects: Sequence[str]) -> RepeatedDesign:
    """Reference-coded design for the given effects, stacked per subject."""
    n_s, t_occ = dataset.response.shape
    columns: dict[str, np.ndarray] = {}
    for name, vals in dataset.subject_factors.items():
        columns[name] = np.repeat(np.asarray(vals), t_occ)
    for name, vals in dataset.occasion_factors.items():
        if name in columns:
            raise ModelSpecError(f"factor {name!r} defined per subject and per occasion")
        columns[name] = np.tile(np.asarray(vals, dtype=float), n_s)
    base = design_mod.effect_design(columns, effects)
    x = base.matrix.reshape(n_s, t_occ, base.n_columns)
    within = np.array([
        bool(np.any(np.ptp(x[:, :, j], axis=1) > 0.0)) for j in range(base.n_columns)
    ])
    return RepeatedDesign(x=x, column_names=base.column_names,
                          effect_columns=dict(base.effect_columns),
                          within_column=within)


def _log_likelihood(resid: np.ndarray, sigma_inv: np.ndarray,
                    logdet_sigma: float) -> float:
    n_s, t_occ = resid.shape
    quad = float(np.einsum("it,ts,is->", resid, sigma_inv, resid))
    return -0.5 * (n_s * t_occ * np.log(2.0 * np.pi) + n_s * logdet_sigma + quad)


def fit_gls_unstructured(dataset: RepeatedDataset, design: RepeatedDesign,
                         tol: float = _TOL, max_iter: int = _MAX_ITER) -> MixedFit:
    """Alternate GLS and covariance updates until both stabilize.

    Requires more subjects than design columns so the residual outer
    product can have full rank.  Raises ConvergenceError after
    ``max_iter`` sweeps and SingularCovarianceError if an update
    produces a non-positive-definite matrix.
    """
    y = dataset.response
    x = design.x
    n_s, t_occ, p = x.shape
    if n_s <= p:
        raise InvalidArgumentError(
            f"need more subjects ({n_s}) than design columns ({p})")
    sigma = np.eye(t_occ)
    beta = np.zeros(p)
    trace: list[float] = []
    iterations = 0
    delta = np.inf
    for iterations in range(1, max_iter + 1):
        try:
            np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError:
            raise SingularCovarianceError(
                f"covariance update is singular at iteration {iterations}")
        sigma_inv = np.linalg.inv(sigma)
        xtsx = np.einsum("itp,ts,isq->pq", x, sigma_inv, x)
        xtsy = np.einsum("itp,ts,is->p", x, sigma_inv, y)
        beta_new = np.linalg.solve(xtsx, xtsy)
        resid = y - np.einsum("itp,p->it", x, beta_new)
        sigma_new = resid.T @ resid / n_s
        sign, logdet = np.linalg.slogdet(sigma_new)
        if sign <= 0:
            raise SingularCovarianceError(
                f"covariance update is singular at iteration {iterations}")
        trace.append(_log_likelihood(resid, np.linalg.inv(sigma_new), logdet))
        delta = max(float(np.max(np.abs(beta_new - beta))),
                    float(np.max(np.abs(sigma_new - sigma))))
        beta, sigma = beta_new, sigma_new
        if delta < tol:
            break
    else:
        raise ConvergenceError(
            f"no convergence after {max_iter} iterations "
            f"(last max-abs change {delta:.3e})")
    sigma_inv = np.linalg.inv(sigma)
    xtsx = np.einsum("itp,ts,isq->pq", x, sigma_inv, x)
    beta_cov = np.linalg.inv(xtsx)
    return MixedFit(beta=beta, sigma=sigma, log_likelihood=trace[-1],
                    beta_covariance=beta_cov, iterations=iterations,
                    loglik_trace=tuple(trace))


def _denominator_df(design: RepeatedDesign, n_s: int, t_occ: int) -> dict[str, float]:
    n_between = int(np.sum(~design.within_column))
    n_within = design.n_columns - n_between
    between_df = float(n_s - n_between)
    within_df = float(n_s * (t_occ - 1) - n_within)
    out: dict[str, float] = {}
    for effect, cols in design.effect_columns.items():
        is_within = any(design.within_column[j] for j in cols)
        out[effect] = within_df if is_within else between_df
    return out


def type3_tests(fit: MixedFit, design: RepeatedDesign,
                imputation: int = 1) -> list[Tests3Row]:
    """Type-III Wald F for each model effect (intercept excluded).

    Each effect's contrast selects its own columns of the full-rank
    coding: F = b' V^{-1} b / rank with b the coefficient sub-vector
    and V its covariance block.  Denominator df follow the
    between-within split: subjects minus between-subject columns for
    between-subject effects, within-subject residual df minus
    within-subject columns otherwise.
    """
    n_s, t_occ, _ = design.x.shape
    den_dfs = _denominator_df(design, n_s, t_occ)
    rows: list[Tests3Row] = []
    for effect, cols in design.effect_columns.items():
        if effect == "Intercept":
            continue
        idx = list(cols)
        b = fit.beta[idx]
        v = fit.beta_covariance[np.ix_(idx, idx)]
        try:
            solved = np.linalg.solve(v, b)
        except np.linalg.LinAlgError:
            raise ContrastSingularityError(
                f"contrast covariance for effect {effect!r} is singular")
        f_value = float(b @ solved) / len(idx)
        den_df = den_dfs[effect]
        if den_df <= 0.0:
            raise InvalidArgumentError(
                f"no residual df for effect {effect!r} (den_df={den_df})")
        rows.append(Tests3Row(effect=effect, num_df=len(idx), den_df=den_df,
                              f_value=max(f_value, 0.0), imputation=imputation))
    return rows
