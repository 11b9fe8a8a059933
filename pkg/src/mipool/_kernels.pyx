# cython: language_level=3, cdivision=True, boundscheck=False, wraparound=False
"""Compiled special-function kernels.

Same algorithms as ``_kernels_py`` (the pure-Python fallback); that file
is the reference for the numerical layout.  Keep the two in sync.
"""

from libc.math cimport exp, fabs, lgamma, log, log1p

cdef double _HALF_LOG_2PI = 0.9189385332046727
cdef int _MAX_BETA_ITER = 2000
cdef int _MAX_GAMMA_ITER = 200000
cdef double _CF_EPS = 1e-16
cdef double _FPMIN = 1e-300

BACKEND = "c"


cdef inline double _stirling_delta(double z) nogil:
    cdef double r = 1.0 / z
    cdef double r2 = r * r
    return r * (0.08333333333333333
                + r2 * (-0.002777777777777778
                + r2 * (0.0007936507936507937
                + r2 * (-0.0005952380952380953
                + r2 * (0.0008417508417508417
                + r2 * (-0.0019175269175269176
                + r2 * 0.00641025641025641))))))


cdef double _log_beta_prefactor(double a, double b, double x) nogil:
    cdef double y = 1.0 - x
    cdef double s = a + b
    cdef double w, u, v, ta, tb, d, log_beta
    if a >= 10.0 and b >= 10.0:
        w = b * x - a * y
        u = w / a
        ta = a * log1p(u) if -0.5 < u < 0.5 else a * log(x * s / a)
        v = -w / b
        tb = b * log1p(v) if -0.5 < v < 0.5 else b * log(y * s / b)
        return (ta + tb + 0.5 * log(a * b / s) - _HALF_LOG_2PI
                - _stirling_delta(a) - _stirling_delta(b) + _stirling_delta(s))
    if b >= 15.0 > a:
        d = (-(b - 0.5) * log1p(a / b) - a * log(s) + a
             + _stirling_delta(b) - _stirling_delta(s))
        log_beta = lgamma(a) + d
    elif a >= 15.0 > b:
        d = (-(a - 0.5) * log1p(b / a) - b * log(s) + b
             + _stirling_delta(a) - _stirling_delta(s))
        log_beta = lgamma(b) + d
    else:
        log_beta = lgamma(a) + lgamma(b) - lgamma(s)
    return a * log(x) + b * log(y) - log_beta


cdef double _beta_cont_frac(double a, double b, double x) except? -1.0:
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef int m, m2
    if fabs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_BETA_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if fabs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if fabs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(
        "incomplete beta continued fraction did not converge "
        f"(a={a!r}, b={b!r}, x={x!r})")


cpdef double reg_inc_beta_raw(double x, double a, double b) except? -1.0:
    """Regularized incomplete beta I_x(a, b); no argument validation."""
    cdef double front, result
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    front = exp(_log_beta_prefactor(a, b, x))
    if x < (a + 1.0) / (a + b + 2.0):
        result = front * _beta_cont_frac(a, b, x) / a
    else:
        result = 1.0 - front * _beta_cont_frac(b, a, 1.0 - x) / b
    if result < 0.0:
        return 0.0
    if result > 1.0:
        return 1.0
    return result


cdef double _log_gamma_prefactor(double x, double a) nogil:
    cdef double u, t
    if a < 10.0:
        return a * log(x) - x - lgamma(a)
    u = (x - a) / a
    if -0.5 < u < 0.5:
        t = a * (log1p(u) - u)
    else:
        t = a * log(x / a) + (a - x)
    return t + 0.5 * log(a) - _HALF_LOG_2PI - _stirling_delta(a)


cpdef double reg_inc_gamma_lower_raw(double x, double a) except? -1.0:
    """Regularized lower incomplete gamma P(a, x); no argument validation."""
    cdef double front, ap, term, total, b0, c, d, h, an, delta, result
    cdef int i
    cdef bint converged
    if x <= 0.0:
        return 0.0
    front = exp(_log_gamma_prefactor(x, a))
    if x < a + 1.0:
        ap = a
        term = 1.0 / a
        total = term
        converged = False
        for i in range(_MAX_GAMMA_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if fabs(term) < fabs(total) * _CF_EPS:
                converged = True
                break
        if not converged:
            raise ArithmeticError(
                f"incomplete gamma series did not converge (a={a!r}, x={x!r})")
        result = total * front
    else:
        b0 = x + 1.0 - a
        c = 1.0 / _FPMIN
        d = 1.0 / b0
        h = d
        converged = False
        for i in range(1, _MAX_GAMMA_ITER + 1):
            an = -i * (i - a)
            b0 += 2.0
            d = an * d + b0
            if fabs(d) < _FPMIN:
                d = _FPMIN
            c = b0 + an / c
            if fabs(c) < _FPMIN:
                c = _FPMIN
            d = 1.0 / d
            delta = d * c
            h *= delta
            if fabs(delta - 1.0) < _CF_EPS:
                converged = True
                break
        if not converged:
            raise ArithmeticError(
                f"incomplete gamma continued fraction did not converge "
                f"(a={a!r}, x={x!r})")
        result = 1.0 - front * h
    if result < 0.0:
        return 0.0
    if result > 1.0:
        return 1.0
    return result


cpdef double f_cdf_raw(double x, double d1, double d2) except? -1.0:
    """F(d1, d2) distribution function at x; real-valued df allowed."""
    cdef double xb
    if x <= 0.0:
        return 0.0
    xb = d1 * x / (d1 * x + d2)
    return reg_inc_beta_raw(xb, 0.5 * d1, 0.5 * d2)


cpdef double chisq_cdf_raw(double x, double k) except? -1.0:
    """Chi-square(k) distribution function at x; real-valued k allowed."""
    if x <= 0.0:
        return 0.0
    return reg_inc_gamma_lower_raw(0.5 * x, 0.5 * k)
