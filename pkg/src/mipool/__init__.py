"""mipool: pooled inference for F and chi-square tests computed on
multiply imputed datasets.

The combiners live in `mipool.pooling`; per-dataset analyses in
`mipool.analyzers` and `mipool.mixedmodel`; the imputer in
`mipool.imputer`; distribution numerics (with a compiled kernel core
and a pure-Python fallback) in `mipool.specfun`; CSV ingestion in
`mipool.tables`; end-to-end pipelines in `mipool.pipeline`.
"""

from .analyzers import (
    FractionalFRecord,
    GroupSummary,
    WelchResult,
    group_summaries,
    levene_test,
    oneway_anova,
    welch_anova,
)
from .pooling import (
    ChiSqRecord,
    CombinedTest,
    PooledScalar,
    PrecisionTriple,
    combine_chisq,
    combine_f_fractional,
    lrt_record,
    precision_triple,
    rubin_scalar,
    sfa_transform,
    welch_to_fractional,
)
from .specfun import backend_name, chisq_cdf, f_cdf, reg_inc_beta, reg_inc_gamma_lower

__all__ = [
    "ChiSqRecord",
    "CombinedTest",
    "FractionalFRecord",
    "GroupSummary",
    "PooledScalar",
    "PrecisionTriple",
    "WelchResult",
    "backend_name",
    "chisq_cdf",
    "combine_chisq",
    "combine_f_fractional",
    "f_cdf",
    "group_summaries",
    "levene_test",
    "lrt_record",
    "oneway_anova",
    "precision_triple",
    "reg_inc_beta",
    "reg_inc_gamma_lower",
    "rubin_scalar",
    "sfa_transform",
    "welch_anova",
    "welch_to_fractional",
]

__version__ = "1.0.0"
