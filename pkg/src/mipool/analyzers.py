"""Per-dataset analyses run on each completed dataset.

Welch's heteroscedastic one-way ANOVA, the classical one-way ANOVA in
fractional form (numerator and denominator mean squares with their df),
and a mean-centered Levene screen for unequal variances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from . import specfun
from .errors import (
    DegenerateGroupError,
    EmptyInputError,
    InvalidArgumentError,
    ZeroDenominatorDfError,
    ZeroNumeratorError,
    ZeroVarianceError,
)

__all__ = [
    "FractionalFRecord",
    "GroupSummary",
    "WelchResult",
    "group_summaries",
    "levene_test",
    "oneway_anova",
    "summaries_from_arrays",
    "welch_anova",
]


@dataclass(frozen=True)
class GroupSummary:
    """Size, mean and sample variance (n-1 divisor) of one group."""

    label: str
    n: int
    mean: float
    variance: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise DegenerateGroupError(
                f"group {self.label!r} has n={self.n}; need at least 2")
        if self.variance < 0.0:
            raise InvalidArgumentError(
                f"group {self.label!r} has negative variance {self.variance!r}")


@dataclass(frozen=True)
class WelchResult:
    """Welch's ANOVA outcome: F value, group count k, denominator df gamma."""

    f_value: float
    k: int
    gamma: float
    p_value: float

    def __post_init__(self) -> None:
        if self.f_value < 0.0 or self.k < 2 or self.gamma <= 0.0:
            raise InvalidArgumentError(
                f"invalid Welch result: f={self.f_value!r}, k={self.k!r}, "
                f"gamma={self.gamma!r}")


@dataclass(frozen=True)
class FractionalFRecord:
    """One imputation's F-test in fractional form.

    Numerator mean square ``num_ms`` with df ``num_df`` over denominator
    mean square ``den_ms`` with df ``den_df``; the F value is their ratio.
    All four quantities must be strictly positive.
    """

    source: str
    num_ms: float
    num_df: float
    den_ms: float
    den_df: float
    imputation: int

    def __post_init__(self) -> None:
        for name in ("num_ms", "num_df", "den_ms", "den_df"):
            v = getattr(self, name)
            if not v > 0.0:
                raise InvalidArgumentError(
                    f"{name} must be strictly positive, got {v!r} "
                    f"(source {self.source!r}, imputation {self.imputation})")
        if self.imputation < 1:
            raise InvalidArgumentError(
                f"imputation index must be >= 1, got {self.imputation!r}")

    @property
    def f_value(self) -> float:
        return self.num_ms / self.den_ms


def summaries_from_arrays(labels: np.ndarray, values: np.ndarray) -> list[GroupSummary]:
    """Group summaries from parallel label/value arrays.

    Groups are reported in order of first appearance.  Fast path used by
    the simulation harness; `group_summaries` is the pair-based surface.
    """
    labels = np.asarray(labels)
    values = np.asarray(values, dtype=float)
    if labels.size == 0:
        raise EmptyInputError("no observations supplied")
    if labels.shape != values.shape:
        raise InvalidArgumentError("labels and values must have equal length")
    if np.isnan(values).any():
        raise InvalidArgumentError("values contain missing entries")
    uniq, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank_of = np.empty(uniq.size, dtype=int)
    rank_of[order] = np.arange(uniq.size)
    idx = rank_of[inverse]
    n = np.bincount(idx)
    if n.min() < 2:
        bad = uniq[order][int(np.argmin(n))]
        raise DegenerateGroupError(f"group {bad!r} has n={int(n.min())}; need at least 2")
    sums = np.bincount(idx, weights=values)
    means = sums / n
    sq = np.bincount(idx, weights=(values - means[idx]) ** 2)
    variances = sq / (n - 1)
    return [
        GroupSummary(label=str(uniq[order][j]), n=int(n[j]),
                     mean=float(means[j]), variance=float(variances[j]))
        for j in range(uniq.size)
    ]


def group_summaries(values: Iterable[Tuple[object, float]]) -> list[GroupSummary]:
    """Per-group n, mean and sample variance from (label, value) pairs."""
    pairs = list(values)
    if not pairs:
        raise EmptyInputError("no observations supplied")
    labels = np.array([p[0] for p in pairs], dtype=object)
    vals = np.array([p[1] for p in pairs], dtype=float)
    return summaries_from_arrays(labels, vals)


def welch_anova(groups: Sequence[GroupSummary]) -> WelchResult:
    """Welch's variance-weighted one-way ANOVA from group summaries.

    With weights w_j = n_j / s_j^2, the statistic is the weighted
    between-group mean square over 1 + (2(k-2)/(k^2-1)) * sum_j
    (1 - w_j/w)^2 / (n_j - 1), referred to F(k-1, gamma) where
    gamma = (k^2 - 1) / (3 * sum_j (1 - w_j/w)^2 / (n_j - 1)).
    """
    k = len(groups)
    if k < 2:
        raise InvalidArgumentError(f"need at least 2 groups, got {k}")
    for g in groups:
        if g.variance == 0.0:
            raise ZeroVarianceError(
                f"group {g.label!r} has zero variance; Welch weights diverge")
    w = [g.n / g.variance for g in groups]
    w_total = sum(w)
    grand = sum(wj * g.mean for wj, g in zip(w, groups)) / w_total
    numerator = sum(wj * (g.mean - grand) ** 2 for wj, g in zip(w, groups)) / (k - 1)
    spread = sum((1.0 - wj / w_total) ** 2 / (g.n - 1) for wj, g in zip(w, groups))
    denominator = 1.0 + 2.0 * (k - 2) / (k * k - 1.0) * spread
    gamma = (k * k - 1.0) / (3.0 * spread)
    f_value = numerator / denominator
    p_value = specfun.upper_tail(specfun.f_cdf(f_value, k - 1.0, gamma))
    return WelchResult(f_value=f_value, k=k, gamma=gamma, p_value=p_value)


def oneway_anova(groups: Sequence[GroupSummary], source: str = "group",
                 imputation: int = 1) -> FractionalFRecord:
    """Classical one-way ANOVA in fractional form.

    Returns the between-group mean square with df k-1 over the pooled
    within-group mean square with df n-k.
    """
    k = len(groups)
    if k < 2:
        raise InvalidArgumentError(f"need at least 2 groups, got {k}")
    n_total = sum(g.n for g in groups)
    if n_total <= k:
        raise ZeroDenominatorDfError(
            f"no residual degrees of freedom (n={n_total}, k={k})")
    grand = sum(g.n * g.mean for g in groups) / n_total
    ss_between = sum(g.n * (g.mean - grand) ** 2 for g in groups)
    ss_within = sum((g.n - 1) * g.variance for g in groups)
    if ss_within == 0.0:
        raise ZeroVarianceError("pooled within-group variance is zero")
    if ss_between == 0.0:
        raise ZeroNumeratorError(
            "between-group mean square is zero; fractional record requires "
            "positive mean squares")
    return FractionalFRecord(
        source=source,
        num_ms=ss_between / (k - 1),
        num_df=float(k - 1),
        den_ms=ss_within / (n_total - k),
        den_df=float(n_total - k),
        imputation=imputation,
    )


def levene_test(values: Iterable[Tuple[object, float]]) -> float:
    """Mean-centered Levene test p-value for equal group variances.

    One-way ANOVA applied to the absolute deviations |x_ij - mean_j|.
    A single constant group is fine (its deviations are all zero); if
    every group is constant the deviations carry no spread at all and
    the p-value degenerates to 1 (no evidence either way).
    """
    pairs = list(values)
    summaries = group_summaries(pairs)  # validates sizes
    means = {g.label: g.mean for g in summaries}
    deviations = [(label, abs(v - means[str(label)])) for label, v in pairs]
    dev_summ = group_summaries(deviations)
    k = len(dev_summ)
    n_total = sum(g.n for g in dev_summ)
    grand = sum(g.n * g.mean for g in dev_summ) / n_total
    ss_between = sum(g.n * (g.mean - grand) ** 2 for g in dev_summ)
    ss_within = sum((g.n - 1) * g.variance for g in dev_summ)
    if ss_within == 0.0:
        return 1.0 if ss_between == 0.0 else 0.0
    f_value = (ss_between / (k - 1)) / (ss_within / (n_total - k))
    return specfun.upper_tail(specfun.f_cdf(f_value, k - 1.0, float(n_total - k)))
