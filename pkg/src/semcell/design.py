"""Inverse design of the cell radius.

Two problems are solved here:

* pick the largest radius keeping the probability of ``count_floor`` or
  more users in outage below a target (closed form via the Lambert W
  function under free-space path loss, bracketed bisection otherwise);
* pick the radius placing the number of semantically served users in a
  desired range with maximum probability, via the stationary point of
  the per-user utilization probability and the level equation obtained
  from the telescoping count-derivative identity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .linkmodel import NetworkParams, snr_scale
from .outage import binom_range_prob, sem_util_prob, sem_util_prob_deriv, utilization_window
from .ratemodel import RateThresholds, SolverError
from .specfun import hyp1f1_ratio, inv_reg_inc_beta_int, lambert_w0, log_binomial


class SolveMethod(enum.Enum):
    CLOSED_FORM_A2 = "closed_form_a2"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class DesignTarget:
    """Outage-count design target.

    ``u_th`` is the Kummer-ratio level the radius equation must hit:
    one minus the per-user outage probability at which the chance of
    ``count_floor``-or-more outages equals ``p_th``.
    """

    p_th: float
    count_floor: int
    count_ceiling: int
    u_th: float

    def __post_init__(self) -> None:
        if not (0.0 < self.p_th < 1.0):
            raise ValueError(f"p_th must lie in (0, 1), got {self.p_th}")
        if not (1 <= self.count_floor <= self.count_ceiling):
            raise ValueError(
                f"need 1 <= count_floor <= count_ceiling, got ({self.count_floor}, {self.count_ceiling})")
        if not (0.0 < self.u_th < 1.0):
            raise ValueError(f"u_th must lie strictly inside (0, 1), got {self.u_th}")

    @classmethod
    def for_outage_cap(cls, p_th: float, count_floor: int, num_users: int) -> "DesignTarget":
        """Target for 'at most probability p_th of count_floor+ users in outage'."""
        if not (1 <= count_floor <= num_users):
            raise ValueError(f"need 1 <= count_floor <= num_users, got ({count_floor}, {num_users})")
        pi_star = inv_reg_inc_beta_int(p_th, count_floor, num_users - count_floor + 1)
        return cls(p_th=p_th, count_floor=count_floor, count_ceiling=num_users, u_th=1.0 - pi_star)


@dataclass(frozen=True)
class RadiusSolution:
    radius: float
    method: SolveMethod
    residual: float


@dataclass(frozen=True)
class UtilizationRadius:
    """One candidate radius from the utilization optimality conditions."""

    radius: float
    equation: str        # "level" or "stationary"
    range_prob: float    # probability the served-count lands in range here
    residual: float


@dataclass(frozen=True)
class UtilizationDesign:
    """All candidate radii for a utilization-range design query."""

    solutions: tuple[UtilizationRadius, ...]
    level_target: float | None
    level_attainable: bool
    semantic_possible: bool

    @property
    def best(self) -> UtilizationRadius | None:
        if not self.solutions:
            return None
        return max(self.solutions, key=lambda s: s.range_prob)


def radius_closed_form_a2(y_th: float, u_th: float, params: NetworkParams) -> float:
    """Radius solving 1F1(1; 2; -(y_th/c_L) R^2) = u_th under free-space loss.

    R = sqrt((c_L / y_th) (1/u_th + W0(-(1/u_th) e^(-1/u_th)))); the W0
    argument lies in (-1/e, 0) for u_th in (0, 1), so the radicand is a
    positive root of the scalar equation e^z - 1 = u_th z.
    """
    if params.pathloss_exp != 2.0:
        raise ValueError(
            f"closed-form radius needs pathloss_exp == 2, got {params.pathloss_exp}")
    if not (0.0 < u_th < 1.0):
        raise ValueError(f"u_th must lie strictly inside (0, 1), got {u_th}")
    if y_th <= 0.0:
        raise ValueError(f"y_th must be positive, got {y_th}")
    inv_u = 1.0 / u_th
    x = inv_u + lambert_w0(-inv_u * math.exp(-inv_u))
    return math.sqrt(snr_scale(params) / y_th * x)


def _solve_kummer_level_numeric(s: float, u_th: float) -> float:
    """x > 0 with 1F1(s; s+1; -x) = u_th, by bracketed bisection.

    The ratio decreases strictly from 1 to 0, so a sign change always
    exists; bisection runs in log x and a Newton polish uses
    d/dx 1F1 = (s/x)(e^(-x) - 1F1).
    """
    f = lambda x: hyp1f1_ratio(s, x) - u_th
    x_lo = 1e-12
    if f(x_lo) <= 0.0:
        # u_th within one ulp of 1: the level is hit essentially at 0
        return x_lo
    x_hi = 1.0
    for _ in range(400):
        if f(x_hi) < 0.0:
            break
        x_hi *= 2.0
    else:
        raise SolverError(f"no bracket found for the Kummer level equation at u_th={u_th}")
    for _ in range(200):
        mid = math.sqrt(x_lo * x_hi)
        if f(mid) >= 0.0:
            x_lo = mid
        else:
            x_hi = mid
        if x_hi - x_lo <= 1e-14 * x_hi:
            break
    x = 0.5 * (x_lo + x_hi)
    for _ in range(30):
        fx = f(x)
        d = (s / x) * (math.exp(-x) - hyp1f1_ratio(s, x))
        if d == 0.0:
            break
        nxt = x - fx / d
        if not (x_lo * 0.5 <= nxt <= x_hi * 2.0) or nxt <= 0.0:
            break
        if abs(nxt - x) <= 1e-16 * x:
            x = nxt
            break
        x = nxt
    return x


def radius_for_outage_threshold(target: DesignTarget, thr: RateThresholds,
                                params: NetworkParams) -> RadiusSolution:
    """Largest radius keeping P[count_floor or more users in outage] <= p_th.

    Solves 1F1(2/a; 1+2/a; -(y_th/c_L) R^a) = u_th where y_th is the
    single CDF argument of the active outage regime; any smaller radius
    then satisfies the target strictly (the per-user outage probability
    increases with the radius).
    """
    y_th = thr.outage_cdf_argument()
    if y_th is None:
        raise SolverError(
            "outage regime has no single CDF argument (composite outage interval); "
            "radius design is not defined for this parameter corner")
    a = params.pathloss_exp
    c_l = snr_scale(params)
    if a == 2.0:
        radius = radius_closed_form_a2(y_th, target.u_th, params)
        method = SolveMethod.CLOSED_FORM_A2
    else:
        x = _solve_kummer_level_numeric(2.0 / a, target.u_th)
        radius = (x * c_l / y_th) ** (1.0 / a)
        method = SolveMethod.NUMERIC
    residual = hyp1f1_ratio(2.0 / a, y_th * radius ** a / c_l) - target.u_th
    if not (radius > 0.0 and abs(residual) <= 1e-9):
        raise SolverError(
            f"radius solve left residual {residual} at R={radius}; target may be degenerate")
    return RadiusSolution(radius=radius, method=method, residual=residual)


def _count_pmf(p: float, trials: int, count: int) -> float:
    """Binomial pmf, reusing the log-space range sum (trials may be 0)."""
    if trials == 0:
        return 1.0 if count == 0 else 0.0
    return binom_range_prob(p, trials, count, count)


def exact_count_prob(num_users: int, count: int, thr: RateThresholds,
                     params: NetworkParams) -> float:
    """Probability exactly ``count`` of ``num_users`` users are served semantically."""
    return _count_pmf(sem_util_prob(thr, params), num_users, count)


def exact_count_prob_deriv(num_users: int, count: int, thr: RateThresholds,
                           params: NetworkParams) -> float:
    """Radius derivative of :func:`exact_count_prob` by the telescoping identity.

    d f(L, m)/dR = (d pi_g/dR) L [f(L-1, m-1) - f(L-1, m)], with the
    one-sided forms at m = 0 and m = L.
    """
    if not (0 <= count <= num_users):
        raise ValueError(f"need 0 <= count <= num_users, got ({count}, {num_users})")
    dpi = sem_util_prob_deriv(thr, params)
    if dpi == 0.0:
        return 0.0
    pi_g = sem_util_prob(thr, params)
    L = num_users
    if count == 0:
        return -dpi * L * _count_pmf(pi_g, L - 1, 0)
    if count == L:
        return dpi * L * _count_pmf(pi_g, L - 1, L - 1)
    return dpi * L * (_count_pmf(pi_g, L - 1, count - 1) - _count_pmf(pi_g, L - 1, count))


def range_count_prob_deriv(num_users: int, count_lo: int, count_hi: int,
                           thr: RateThresholds, params: NetworkParams) -> float:
    """Radius derivative of the served-count range probability.

    The interior pmf derivatives cancel telescopically, leaving only the
    two boundary terms (or one of them in the extreme cases).
    """
    if not (0 <= count_lo <= count_hi <= num_users):
        raise ValueError(
            f"need 0 <= count_lo <= count_hi <= num_users, got ({count_lo}, {count_hi}, {num_users})")
    if count_lo == 0 and count_hi == num_users:
        return 0.0
    dpi = sem_util_prob_deriv(thr, params)
    if dpi == 0.0:
        return 0.0
    pi_g = sem_util_prob(thr, params)
    L = num_users
    if count_hi == L:
        return dpi * L * _count_pmf(pi_g, L - 1, count_lo - 1)
    if count_lo == 0:
        return -dpi * L * _count_pmf(pi_g, L - 1, count_hi)
    return dpi * L * (_count_pmf(pi_g, L - 1, count_lo - 1) - _count_pmf(pi_g, L - 1, count_hi))


def _at_radius(params: NetworkParams, radius: float) -> NetworkParams:
    return replace(params, cell_radius_m=radius)


def _stationary_radius(thr: RateThresholds, params: NetworkParams) -> float:
    """Radius where the per-user utilization probability peaks."""
    window = utilization_window(thr)
    assert window is not None
    g_lo, g_hi = window
    a = params.pathloss_exp
    r_char = (snr_scale(params) / g_hi) ** (1.0 / a)
    deriv = lambda r: sem_util_prob_deriv(thr, _at_radius(params, r))
    grid = r_char * np.geomspace(1e-4, 1e4, 161)
    r_lo = r_hi = None
    prev_r, prev_f = grid[0], deriv(grid[0])
    if prev_f <= 0.0:
        raise SolverError("utilization derivative is not positive at the small-radius end")
    for r in grid[1:]:
        fr = deriv(float(r))
        if prev_f > 0.0 >= fr:
            r_lo, r_hi = prev_r, float(r)
            break
        prev_r, prev_f = float(r), fr
    if r_lo is None:
        raise SolverError("no sign change found for the utilization derivative")
    for _ in range(200):
        mid = math.sqrt(r_lo * r_hi)
        if deriv(mid) > 0.0:
            r_lo = mid
        else:
            r_hi = mid
        if r_hi - r_lo <= 1e-13 * r_hi:
            break
    return 0.5 * (r_lo + r_hi)


def _level_root(thr: RateThresholds, params: NetworkParams, level: float,
                r_peak: float, side: str) -> float | None:
    """Root of pi_g(R) = level on one side of the peak, or None."""
    value = lambda r: sem_util_prob(thr, _at_radius(params, r))
    inner, f_inner = r_peak, value(r_peak)
    if f_inner < level:
        return None
    outer = r_peak
    factor = 0.5 if side == "below" else 2.0
    for _ in range(2000):
        outer *= factor
        if value(outer) < level:
            break
    else:
        return None
    lo, hi = (outer, inner) if side == "below" else (inner, outer)
    # orientation: pi_g rises with R below the peak, falls above it
    rising = side == "below"
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        above = value(mid) >= level
        if above == rising:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-14 * hi:
            break
    root = 0.5 * (lo + hi)
    for _ in range(30):
        f = value(root) - level
        d = sem_util_prob_deriv(thr, _at_radius(params, root))
        if d == 0.0:
            break
        nxt = root - f / d
        if not (lo * 0.5 <= nxt <= hi * 2.0):
            break
        if abs(nxt - root) <= 1e-16 * root:
            root = nxt
            break
        root = nxt
    return root


def optimal_sem_util_radius(num_users: int, count_lo: int, count_hi: int,
                            thr: RateThresholds, params: NetworkParams) -> UtilizationDesign:
    """Candidate radii maximizing P[count_lo <= served-count <= count_hi].

    Stationary points of the range probability are the peak of the
    per-user utilization probability plus (away from the extreme count
    ranges) the radii where it crosses the binomial level
    1 / (1 + (C(L-1, count_hi) / C(L-1, count_lo - 1))^(1/(count_hi - count_lo + 1))),
    which can hold at up to two radii, one on each side of the peak.
    Every candidate is tagged with its range probability so callers pick
    the maximizer (``.best``); when the level exceeds the utilization
    peak only the stationary radius is returned, flagged unattainable.
    """
    if not (0 <= count_lo <= count_hi <= num_users):
        raise ValueError(
            f"need 0 <= count_lo <= count_hi <= num_users, got ({count_lo}, {count_hi}, {num_users})")
    if utilization_window(thr) is None:
        return UtilizationDesign(solutions=(), level_target=None,
                                 level_attainable=False, semantic_possible=False)

    extreme = count_lo == 0 or count_hi == num_users
    level = None
    if not extreme:
        log_ratio = log_binomial(num_users - 1, count_hi) - log_binomial(num_users - 1, count_lo - 1)
        level = 1.0 / (1.0 + math.exp(log_ratio / (count_hi - count_lo + 1)))

    range_prob = lambda r: binom_range_prob(
        sem_util_prob(thr, _at_radius(params, r)), num_users, count_lo, count_hi)

    r_peak = _stationary_radius(thr, params)
    peak_residual = r_peak * sem_util_prob_deriv(thr, _at_radius(params, r_peak))
    solutions = [UtilizationRadius(radius=r_peak, equation="stationary",
                                   range_prob=range_prob(r_peak), residual=peak_residual)]

    attainable = False
    if level is not None:
        pi_peak = sem_util_prob(thr, _at_radius(params, r_peak))
        attainable = level <= pi_peak
        if attainable:
            for side in ("below", "above"):
                root = _level_root(thr, params, level, r_peak, side)
                if root is not None:
                    residual = sem_util_prob(thr, _at_radius(params, root)) - level
                    solutions.append(UtilizationRadius(
                        radius=root, equation="level",
                        range_prob=range_prob(root), residual=residual))
    solutions.sort(key=lambda s: s.radius)
    return UtilizationDesign(solutions=tuple(solutions), level_target=level,
                             level_attainable=attainable, semantic_possible=True)
