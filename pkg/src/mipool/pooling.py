"""Combining rules for test statistics computed on multiply imputed data.

The scalar rule pools a point estimate with within/between variance
components.  F-tests in fractional form (numerator and denominator mean
squares with their df) pool through harmonic-mean precision summaries:

    A = mean_l 1/s_l
    B = mean_l 1/(nu_l * s_l^2)
    C = var_l  1/s_l            (M-1 divisor; 0 when M = 1)

giving the adjusted statistic A_den/A_num on F(r_num, r_den) with
r = 2 A^2 / (2 B + (M+1) C / M) per side.  Chi-square statistics pool
the same way through their mean squares s = statistic/df.  Welch's
ANOVA and Type-III mixed-model F-tests do not arrive in fractional
form; adapters reconstruct one (Welch) or map F onto an approximate
chi-square via a shrinking factor (Type-III).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

from . import specfun
from .analyzers import FractionalFRecord, WelchResult
from .errors import (
    InsufficientImputationsError,
    InvalidArgumentError,
    NestingViolationError,
    ZeroNumeratorError,
    ZeroStatisticError,
)

__all__ = [
    "ChiSqRecord",
    "CombinedTest",
    "PooledScalar",
    "PrecisionTriple",
    "combine_chisq",
    "combine_f_fractional",
    "lrt_record",
    "precision_triple",
    "rubin_scalar",
    "sfa_transform",
    "welch_to_fractional",
]

ChiSqScaling = Literal["macro", "text"]
SfaVariant = Literal["macro", "text"]

_NESTING_SLACK = 1e-8


@dataclass(frozen=True)
class PooledScalar:
    """Scalar pooling components: mean estimate, variance split, t df."""

    q_bar: float
    w_bar: float
    b: float
    t_total: float
    nu_m: float
    m: int


@dataclass(frozen=True)
class PrecisionTriple:
    """Harmonic-mean precision summaries (A, B, C) of one mean-square side."""

    a: float
    b_term: float
    c: float

    def __post_init__(self) -> None:
        if not (self.a > 0.0 and self.b_term > 0.0 and self.c >= 0.0):
            raise InvalidArgumentError(
                f"invalid precision triple a={self.a!r}, b_term={self.b_term!r}, "
                f"c={self.c!r}")


@dataclass(frozen=True)
class ChiSqRecord:
    """One imputation's chi-square statistic with its degrees of freedom."""

    source: str
    lam: float
    df: float
    imputation: int

    def __post_init__(self) -> None:
        if self.lam < 0.0:
            raise InvalidArgumentError(
                f"chi-square statistic must be nonnegative, got {self.lam!r}")
        if not self.df > 0.0:
            raise InvalidArgumentError(f"df must be positive, got {self.df!r}")


@dataclass(frozen=True)
class CombinedTest:
    """A pooled test: F with (df_num, df_den), or chi-square with df_num."""

    source: str
    kind: Literal["F", "ChiSq"]
    statistic: float
    df_num: float
    df_den: Optional[float]
    p_value: float
    m: int

    def __post_init__(self) -> None:
        if self.kind == "F":
            if self.df_den is None:
                raise InvalidArgumentError("F result requires df_den")
        elif self.kind == "ChiSq":
            if self.df_den is not None:
                raise InvalidArgumentError("chi-square result must not carry df_den")
        else:
            raise InvalidArgumentError(f"unknown statistic kind {self.kind!r}")


def rubin_scalar(estimates: Sequence[float], variances: Sequence[float]) -> PooledScalar:
    """Pool a scalar estimate across imputations.

    Q_bar and W_bar are plain means, B the M-1-divisor variance of the
    estimates, T = W_bar + (1 + 1/M) B, and the t reference df is
    nu_M = (M-1) [1 + W_bar / ((1 + 1/M) B)]^2 (infinite when B = 0).
    """
    m = len(estimates)
    if len(variances) != m:
        raise InvalidArgumentError(
            f"estimates and variances differ in length ({m} vs {len(variances)})")
    if m < 2:
        raise InsufficientImputationsError(
            f"scalar pooling needs at least 2 imputations, got {m}")
    for v in variances:
        if v < 0.0:
            raise InvalidArgumentError(f"variances must be nonnegative, got {v!r}")
    q_bar = sum(estimates) / m
    w_bar = sum(variances) / m
    b = sum((q - q_bar) ** 2 for q in estimates) / (m - 1)
    t_total = w_bar + (1.0 + 1.0 / m) * b
    if b == 0.0:
        nu_m = math.inf
    else:
        nu_m = (m - 1) * (1.0 + w_bar / ((1.0 + 1.0 / m) * b)) ** 2
    return PooledScalar(q_bar=q_bar, w_bar=w_bar, b=b, t_total=t_total,
                        nu_m=nu_m, m=m)


def precision_triple(mean_squares: Sequence[float], dfs: Sequence[float],
                     m: int) -> PrecisionTriple:
    """Precision summaries of one side: A, B and C over 1/s."""
    if len(mean_squares) != m or len(dfs) != m:
        raise InvalidArgumentError(
            f"expected {m} mean squares and dfs, got {len(mean_squares)} "
            f"and {len(dfs)}")
    if m < 1:
        raise InvalidArgumentError("need at least one imputation")
    for s, nu in zip(mean_squares, dfs):
        if not (s > 0.0 and nu > 0.0):
            raise InvalidArgumentError(
                f"mean squares and dfs must be positive, got s={s!r}, nu={nu!r}")
    recip = [1.0 / s for s in mean_squares]
    a = sum(recip) / m
    b_term = sum(1.0 / (nu * s * s) for s, nu in zip(mean_squares, dfs)) / m
    c = 0.0 if m == 1 else sum((r - a) ** 2 for r in recip) / (m - 1)
    return PrecisionTriple(a=a, b_term=b_term, c=c)


def _adjusted_df(triple: PrecisionTriple, m: int) -> float:
    return 2.0 * triple.a ** 2 / (2.0 * triple.b_term + (m + 1) * triple.c / m)


def combine_f_fractional(records: Sequence[FractionalFRecord]) -> CombinedTest:
    """Pool fractional-form F-tests sharing one source label.

    The adjusted statistic is A_den/A_num with degrees of freedom
    (r_num, r_den); replicating a single test M times recovers the
    original (F, df) exactly.
    """
    if not records:
        raise InvalidArgumentError("no records to combine")
    source = records[0].source
    if any(r.source != source for r in records):
        raise InvalidArgumentError(
            "records mix sources: "
            + ", ".join(sorted({r.source for r in records})))
    m = len(records)
    num = precision_triple([r.num_ms for r in records],
                           [r.num_df for r in records], m)
    den = precision_triple([r.den_ms for r in records],
                           [r.den_df for r in records], m)
    statistic = den.a / num.a
    r_num = _adjusted_df(num, m)
    r_den = _adjusted_df(den, m)
    p = specfun.upper_tail(specfun.f_cdf(statistic, r_num, r_den))
    return CombinedTest(source=source, kind="F", statistic=statistic,
                        df_num=r_num, df_den=r_den, p_value=p, m=m)


def combine_chisq(records: Sequence[ChiSqRecord],
                  scaling: ChiSqScaling = "macro") -> CombinedTest:
    """Pool chi-square statistics sharing one source label.

    Each statistic is reduced to its mean square s = lam/df and pooled
    through the precision triple, giving reference df
    r = 2 A^2 / (2 B + (M+1) C / M).  ``scaling="macro"`` compares
    r/A against chi-square(r) and recovers the original statistic
    exactly in the replicated-records degenerate case; ``"text"``
    compares 1/A, smaller by the factor r.
    """
    if not records:
        raise InvalidArgumentError("no records to combine")
    source = records[0].source
    if any(r.source != source for r in records):
        raise InvalidArgumentError(
            "records mix sources: "
            + ", ".join(sorted({r.source for r in records})))
    if scaling not in ("macro", "text"):
        raise InvalidArgumentError(f"unknown chi-square scaling {scaling!r}")
    for r in records:
        if r.lam == 0.0:
            raise ZeroStatisticError(
                f"chi-square statistic is zero (source {source!r}, "
                f"imputation {r.imputation}); reciprocal pooling undefined")
    m = len(records)
    triple = precision_triple([r.lam / r.df for r in records],
                              [r.df for r in records], m)
    r_df = _adjusted_df(triple, m)
    statistic = r_df / triple.a if scaling == "macro" else 1.0 / triple.a
    p = specfun.upper_tail(specfun.chisq_cdf(statistic, r_df))
    return CombinedTest(source=source, kind="ChiSq", statistic=statistic,
                        df_num=r_df, df_den=None, p_value=p, m=m)


def welch_to_fractional(result: WelchResult, imputation: int,
                        source: str = "welch") -> FractionalFRecord:
    """Rewrite a Welch ANOVA outcome in fractional form.

    The implied denominator mean square is 1 + 2(k-2)/(3 gamma) on df
    gamma; the numerator is F times that on df k-1, so the ratio
    reproduces the Welch F exactly.
    """
    if result.f_value == 0.0:
        raise ZeroNumeratorError(
            "Welch F is zero; the fractional form would have a zero "
            "numerator mean square")
    den_ms = 1.0 + 2.0 * (result.k - 2) / (3.0 * result.gamma)
    return FractionalFRecord(
        source=source,
        num_ms=result.f_value * den_ms,
        num_df=float(result.k - 1),
        den_ms=den_ms,
        den_df=result.gamma,
        imputation=imputation,
    )


def sfa_transform(f_value: float, nu1: int, nu2: float,
                  variant: SfaVariant = "macro", source: str = "effect",
                  imputation: int = 1) -> ChiSqRecord:
    """Map an F(nu1, nu2) statistic to an approximate chi-square(nu1).

    The shrinking factor is
        text:  lam = (2 nu2 + nu1 x / 3) / (2 nu2 + 4 nu1 x / 3)
        macro: lam = (2 nu2 + nu1 x / 3 + nu1 - 2) / (2 nu2 + 4 nu1 x / 3)
    and the record carries lam * nu1 * x on df nu1.  The macro variant
    is the published refinement, accurate to the fourth decimal place
    for moderate nu2; the text variant drops its nu1 - 2 term.
    """
    if f_value < 0.0:
        raise InvalidArgumentError(f"f_value must be nonnegative, got {f_value!r}")
    if nu1 < 1:
        raise InvalidArgumentError(f"nu1 must be a positive count, got {nu1!r}")
    if not nu2 > 0.0:
        raise InvalidArgumentError(f"nu2 must be positive, got {nu2!r}")
    if variant not in ("macro", "text"):
        raise InvalidArgumentError(f"unknown SFA variant {variant!r}")
    third = nu1 * f_value / 3.0
    denominator = 2.0 * nu2 + 4.0 * third
    numerator = 2.0 * nu2 + third
    if variant == "macro":
        numerator += nu1 - 2.0
    lam = numerator / denominator
    return ChiSqRecord(source=source, lam=lam * nu1 * f_value,
                       df=float(nu1), imputation=imputation)


def lrt_record(loglik_full: float, loglik_reduced: float, df: int,
               source: str, imputation: int) -> ChiSqRecord:
    """Likelihood-ratio chi-square record from nested model log-likelihoods."""
    if df < 1:
        raise InvalidArgumentError(f"df must be a positive count, got {df!r}")
    gap = loglik_full - loglik_reduced
    if gap < -_NESTING_SLACK:
        raise NestingViolationError(
            f"full-model log-likelihood {loglik_full!r} is below the reduced "
            f"model's {loglik_reduced!r} by more than {_NESTING_SLACK}")
    lam = max(2.0 * gap, 0.0)
    return ChiSqRecord(source=source, lam=lam, df=float(df),
                       imputation=imputation)
