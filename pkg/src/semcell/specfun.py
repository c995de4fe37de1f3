"""Scalar special-function kernel.

Everything the reliability formulas need beyond the standard library:
the lower incomplete gamma function, the Kummer ratio 1F1(s; s+1; -x),
the regularized incomplete beta function with integer shape parameters
(evaluated exactly as a binomial tail) and its inverse, the principal
branch of the Lambert W function, and log-binomial coefficients.

All functions are pure, operate on Python floats, and raise ValueError
on out-of-domain input.
"""

from __future__ import annotations

import math

_MAX_ITER = 500
_BRANCH_POINT = -math.exp(-1.0)  # -1/e, lower edge of the W0 domain


def _gamma_series_sum(s: float, x: float) -> float:
    """Sum_{n>=0} x^n / (s (s+1) ... (s+n)), the series factor of gamma(s, x).

    Converges for any x >= 0 but is only fast (and numerically sane,
    no alternation) for x < s + 1.
    """
    term = 1.0 / s
    total = term
    n = 0
    while n < _MAX_ITER:
        n += 1
        term *= x / (s + n)
        total += term
        if abs(term) < abs(total) * 1e-17:
            return total
    raise ArithmeticError(f"incomplete gamma series did not converge for s={s}, x={x}")


def _upper_gamma_cf(s: float, x: float) -> float:
    """Upper incomplete gamma Gamma(s, x) by modified Lentz continued fraction.

    Valid companion of the series for x >= s + 1.
    """
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return math.exp(-x + s * math.log(x)) * h
    raise ArithmeticError(f"incomplete gamma continued fraction did not converge for s={s}, x={x}")


def lower_inc_gamma(s: float, x: float) -> float:
    """Lower incomplete gamma function gamma(s, x) = int_0^x t^(s-1) e^(-t) dt.

    Uses the power series below the x = s + 1 crossover and the
    continued-fraction complement Gamma(s) - Gamma(s, x) above it.

    Parameters
    ----------
    s : float
        Shape parameter, strictly positive.
    x : float
        Upper integration limit, nonnegative.
    """
    if not (math.isfinite(s) and math.isfinite(x)) or s <= 0.0 or x < 0.0:
        raise ValueError(f"lower_inc_gamma requires finite s > 0 and x >= 0, got s={s}, x={x}")
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return math.exp(s * math.log(x) - x) * _gamma_series_sum(s, x)
    return math.gamma(s) - _upper_gamma_cf(s, x)


def hyp1f1_ratio(s: float, x: float) -> float:
    """Confluent hypergeometric value 1F1(s; s+1; -x) for s > 0, x >= 0.

    Identical to s * x^(-s) * gamma(s, x); the series branch cancels the
    x^(-s) * x^s pair analytically, so the x -> 0 limit of 1 is exact with
    no 0/0.  Strictly decreasing in x, from 1 at x = 0 towards 0.
    """
    if not (math.isfinite(s) and math.isfinite(x)) or s <= 0.0 or x < 0.0:
        raise ValueError(f"hyp1f1_ratio requires finite s > 0 and x >= 0, got s={s}, x={x}")
    if x == 0.0:
        return 1.0
    if x < s + 1.0:
        value = s * math.exp(-x) * _gamma_series_sum(s, x)
    else:
        g = math.gamma(s) - _upper_gamma_cf(s, x)
        value = s * math.exp(-s * math.log(x)) * g
    # guard against <=1 ulp of drift outside (0, 1]
    return min(1.0, max(0.0, value))


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) via log-gamma.  Exact to ~1e-14 relative."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"log_binomial requires 0 <= k <= n, got n={n}, k={k}")
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def reg_inc_beta_int(p: float, k: int, m: int) -> float:
    """Regularized incomplete beta I_p(k, m) for positive integer shapes.

    Evaluated exactly as the binomial survival probability
    P[Binomial(k+m-1, p) >= k], with each term formed in log space so
    extreme p values stay accurate.
    """
    if k < 1 or m < 1:
        raise ValueError(f"reg_inc_beta_int requires integer k, m >= 1, got k={k}, m={m}")
    if not (math.isfinite(p) and 0.0 <= p <= 1.0):
        raise ValueError(f"reg_inc_beta_int requires p in [0, 1], got p={p}")
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    n = k + m - 1
    log, exp = math.log, math.exp
    log_p = log(p)
    log_q = math.log1p(-p)
    step = log_p - log_q
    log_term = log_binomial(n, k) + k * log_p + (n - k) * log_q
    terms = [log_term]
    for j in range(k, n):
        log_term += log((n - j) / (j + 1.0)) + step
        terms.append(log_term)
    top = max(terms)
    total = exp(top) * sum(exp(t - top) for t in terms)
    return min(1.0, total)


def inv_reg_inc_beta_int(q: float, k: int, m: int) -> float:
    """Inverse of reg_inc_beta_int in p: the p with I_p(k, m) = q.

    I_p is strictly increasing in p, so a coarse bisection bracket refined
    with safeguarded Newton steps (the derivative is the Beta(k, m)
    density) converges to machine-level residual.
    """
    if k < 1 or m < 1:
        raise ValueError(f"inv_reg_inc_beta_int requires integer k, m >= 1, got k={k}, m={m}")
    if not (0.0 < q < 1.0):
        raise ValueError(f"inv_reg_inc_beta_int requires 0 < q < 1 (the boundary solutions are degenerate), got q={q}")
    lo, hi = 0.0, 1.0
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if reg_inc_beta_int(mid, k, m) < q:
            lo = mid
        else:
            hi = mid
    p = 0.5 * (lo + hi)
    log_norm = math.lgamma(k + m) - math.lgamma(k) - math.lgamma(m)
    for _ in range(60):
        f = reg_inc_beta_int(p, k, m) - q
        if f < 0.0:
            lo = max(lo, p)
        else:
            hi = min(hi, p)
        if abs(f) <= 1e-15 * max(1.0, q):
            break
        pdf = math.exp(log_norm + (k - 1) * math.log(p) + (m - 1) * math.log1p(-p))
        if pdf <= 0.0:
            p = 0.5 * (lo + hi)
            continue
        step = f / pdf
        candidate = p - step
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)
        if candidate == p:
            break
        p = candidate
    return p


def lambert_w0(x: float) -> float:
    """Principal branch W0(x): the w >= -1 with w e^w = x, for x >= -1/e.

    Halley iteration from a branch-point series guess near -1/e and a
    log-based guess for large arguments.  Inputs within 1e-15 below the
    branch point are clamped onto it (w = -1).
    """
    if not math.isfinite(x):
        raise ValueError(f"lambert_w0 requires finite x, got x={x}")
    if x < _BRANCH_POINT:
        if _BRANCH_POINT - x <= 1e-15:
            return -1.0
        raise ValueError(f"lambert_w0 requires x >= -1/e = {_BRANCH_POINT}, got x={x}")
    if x == 0.0:
        return 0.0
    if x == _BRANCH_POINT:
        return -1.0
    if x < -0.31:
        # series in p = sqrt(2 (e x + 1)) around the branch point
        p = math.sqrt(2.0 * (math.e * x + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0
    elif x > math.e:
        l1 = math.log(x)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    else:
        w = 0.0  # first Halley step lands on x / (1 + x)
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        dw = f / denom
        w -= dw
        if abs(dw) <= 2e-16 * (1.0 + abs(w)):
            break
    return w
