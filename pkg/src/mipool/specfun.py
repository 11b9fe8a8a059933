"""Distribution numerics and seeded random streams.

The cumulative distribution functions accept real-valued (non-integer)
degrees of freedom, which the pooled tests require: adjusted df are
generally fractional and can drop below 1.

Two interchangeable kernel backends exist: a compiled extension
(``mipool._kernels``) and a pure-Python fallback (``_kernels_py``).
The compiled one is picked when importable; set ``MIPOOL_PURE_PYTHON=1``
to force the fallback.  Random draws come from counter-based Philox
streams keyed by (seed, stream_id), so distinct streams may be consumed
in any order, or in parallel, without affecting each other's sequences.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

if os.environ.get("MIPOOL_PURE_PYTHON", "").strip().lower() not in ("", "0", "false", "no"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

__all__ = [
    "RngStream",
    "backend_name",
    "chisq_cdf",
    "draw_chisq",
    "draw_chisq_vector",
    "draw_standard_normal",
    "draw_standard_normal_vector",
    "draw_uniform_vector",
    "f_cdf",
    "reg_inc_beta",
    "reg_inc_gamma_lower",
    "upper_tail",
]

_MAX_SEED = 2**64 - 1


def backend_name() -> str:
    """Name of the kernel backend in use: ``"c"`` or ``"python"``."""
    return _impl.BACKEND


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
    return value


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta I_x(a, b) for x in [0, 1], a, b > 0."""
    x = _check_finite("x", x)
    a = _check_finite("a", a)
    b = _check_finite("b", b)
    if not 0.0 <= x <= 1.0:
        raise InvalidArgumentError(f"x must lie in [0, 1], got {x!r}")
    if a <= 0.0 or b <= 0.0:
        raise InvalidArgumentError(f"a and b must be positive, got a={a!r}, b={b!r}")
    return _impl.reg_inc_beta_raw(x, a, b)


def reg_inc_gamma_lower(x: float, a: float) -> float:
    """Regularized lower incomplete gamma P(a, x) for x >= 0, a > 0."""
    x = _check_finite("x", x)
    a = _check_finite("a", a)
    if x < 0.0:
        raise InvalidArgumentError(f"x must be nonnegative, got {x!r}")
    if a <= 0.0:
        raise InvalidArgumentError(f"a must be positive, got {a!r}")
    return _impl.reg_inc_gamma_lower_raw(x, a)


def f_cdf(x: float, d1: float, d2: float) -> float:
    """CDF of the F distribution with real-valued df (d1, d2) at x >= 0."""
    x = _check_finite("x", x)
    d1 = _check_finite("d1", d1)
    d2 = _check_finite("d2", d2)
    if x < 0.0:
        raise InvalidArgumentError(f"x must be nonnegative, got {x!r}")
    if d1 <= 0.0 or d2 <= 0.0:
        raise InvalidArgumentError(
            f"degrees of freedom must be positive, got d1={d1!r}, d2={d2!r}")
    return _impl.f_cdf_raw(x, d1, d2)


def chisq_cdf(x: float, k: float) -> float:
    """CDF of the chi-square distribution with real-valued df k at x >= 0."""
    x = _check_finite("x", x)
    k = _check_finite("k", k)
    if x < 0.0:
        raise InvalidArgumentError(f"x must be nonnegative, got {x!r}")
    if k <= 0.0:
        raise InvalidArgumentError(f"k must be positive, got {k!r}")
    return _impl.chisq_cdf_raw(x, k)


def upper_tail(cdf_value: float) -> float:
    """p-value from a CDF value: 1 - cdf, clamped into [0, 1].

    Every p-value in the package is produced here.  Values whose CDF is
    within 1e-15 of 1 come out as a subnormal-or-zero tail; the display
    layer renders those as 0 while the full-precision value is kept.
    """
    p = 1.0 - cdf_value
    if p < 0.0:
        return 0.0
    if p > 1.0:
        return 1.0
    return p


@dataclass
class RngStream:
    """One reproducible random stream, keyed by (seed, stream_id).

    Streams with distinct keys are statistically independent and their
    draw sequences do not depend on the order in which other streams
    are consumed.  A single stream is single-owner: do not draw from it
    concurrently.
    """

    seed: int
    stream_id: int
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= int(self.seed) <= _MAX_SEED:
            raise InvalidArgumentError(
                f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if int(self.stream_id) < 0:
            raise InvalidArgumentError(
                f"stream_id must be nonnegative, got {self.stream_id!r}")
        self._gen = np.random.Generator(
            np.random.Philox(key=[int(self.seed), int(self.stream_id)]))


def draw_standard_normal(stream: RngStream) -> float:
    """Next standard-normal variate from the stream."""
    return float(stream._gen.standard_normal())


def draw_standard_normal_vector(stream: RngStream, n: int) -> np.ndarray:
    """Next n standard-normal variates; identical to n scalar draws."""
    return stream._gen.standard_normal(int(n))


def draw_uniform_vector(stream: RngStream, n: int) -> np.ndarray:
    """Next n uniform(0, 1) variates from the stream."""
    return stream._gen.random(int(n))


def draw_chisq(stream: RngStream, df: float) -> float:
    """Next chi-square(df) variate from the stream; df > 0."""
    df = _check_finite("df", df)
    if df <= 0.0:
        raise InvalidArgumentError(f"df must be positive, got {df!r}")
    return float(stream._gen.chisquare(df))


def draw_chisq_vector(stream: RngStream, df: float, n: int) -> np.ndarray:
    """Next n chi-square(df) variates from the stream."""
    df = _check_finite("df", df)
    if df <= 0.0:
        raise InvalidArgumentError(f"df must be positive, got {df!r}")
    return stream._gen.chisquare(df, size=int(n))
