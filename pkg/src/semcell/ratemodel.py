"""Rate models and SNR breakpoints.

The semantic channel is summarized by a fitted generalized-logistic curve
mapping received SNR (in dB) to a similarity score in (a1, a2); the bit
channel by the gap-to-capacity rate log2(1 + g / gamma) / mu.  Both rates
are expressed in the same normalized units (semantic units per second,
per Hz of user bandwidth and per unit of information-per-word), which is
what lets every SNR breakpoint below come out independent of bandwidth.

Breakpoints:

* ``g_min``  -- lowest SNR meeting the similarity QoS threshold,
* ``g_max``  -- largest SNR where the semantic rate still matches the bit
  rate (above it the bit rate wins),
* ``g_bit``  -- SNR where the bit rate equals the outage rate threshold,
* ``g_sem``  -- SNR where the semantic rate equals the outage rate
  threshold (absent when the logistic floor/ceiling makes it vacuous).

Their ordering, together with how k * r_out compares to the logistic
asymptotes, selects one branch of the piecewise outage expressions; the
branch is classified once here and carried as :class:`HybridRegime`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class SolverError(RuntimeError):
    """A bracketing or iteration failure in one of the numeric solvers."""


@dataclass(frozen=True)
class SimilarityFit:
    """Logistic similarity curve constants plus symbols-per-word k."""

    a1: float
    a2: float
    c1: float
    c2: float
    k: int

    def __post_init__(self) -> None:
        if not (0.0 <= self.a1 < self.a2 <= 1.0):
            raise ValueError(f"asymptotes must satisfy 0 <= a1 < a2 <= 1, got a1={self.a1}, a2={self.a2}")
        if not (math.isfinite(self.c1) and self.c1 > 0.0):
            raise ValueError(f"logistic slope c1 must be positive, got {self.c1}")
        if not math.isfinite(self.c2):
            raise ValueError(f"logistic offset c2 must be finite, got {self.c2}")
        if self.k < 1:
            raise ValueError(f"symbols per word k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class RateConfig:
    """Bit-channel and threshold constants for one scenario."""

    mu: int
    ber: float
    m_th: float
    r_out: float
    use_capacity: bool = False
    info_per_word: float = 1.0

    def __post_init__(self) -> None:
        if self.mu < 1:
            raise ValueError(f"bit symbols per word mu must be >= 1, got {self.mu}")
        if not (0.0 < self.ber < 0.2):
            raise ValueError(f"ber must lie in (0, 0.2) so the SNR gap stays positive, got {self.ber}")
        if not (0.0 < self.m_th < 1.0):
            raise ValueError(f"similarity threshold must lie in (0, 1), got {self.m_th}")
        if not (math.isfinite(self.r_out) and self.r_out > 0.0):
            raise ValueError(f"outage rate threshold must be positive, got {self.r_out}")
        if not (math.isfinite(self.info_per_word) and self.info_per_word > 0.0):
            raise ValueError(f"info_per_word must be positive, got {self.info_per_word}")


class HybridRegime(enum.Enum):
    """Active branch of the piecewise hybrid-outage expression.

    The first seven members mirror the closed-form branch table (the SNR
    below which a hybrid user is in outage is a single CDF argument);
    ``BITCOM_COLLAPSE`` is the degenerate case where the semantic window
    is empty and the hybrid reduces to pure bit transmission;
    ``COMPOSITE_TAIL`` marks the corner where the outage event is a union
    of two SNR intervals and no single CDF argument exists.
    """

    BITCOM_COLLAPSE = "bitcom_collapse"
    BIT_BOUND_LOW_RATE = "bit_bound_low_rate"
    QOS_BOUND_LOW_RATE = "qos_bound_low_rate"
    BIT_BOUND_MID_RATE = "bit_bound_mid_rate"
    QOS_BOUND_MID_RATE = "qos_bound_mid_rate"
    SEM_BOUND_MID_RATE = "sem_bound_mid_rate"
    BIT_BOUND_ABOVE_CROSSING = "bit_bound_above_crossing"
    BIT_BOUND_SATURATED = "bit_bound_saturated"
    COMPOSITE_TAIL = "composite_tail"


_BRANCH_INDEX = {
    HybridRegime.BIT_BOUND_LOW_RATE: 1,
    HybridRegime.QOS_BOUND_LOW_RATE: 2,
    HybridRegime.BIT_BOUND_MID_RATE: 3,
    HybridRegime.QOS_BOUND_MID_RATE: 4,
    HybridRegime.SEM_BOUND_MID_RATE: 5,
    HybridRegime.BIT_BOUND_ABOVE_CROSSING: 6,
    HybridRegime.BIT_BOUND_SATURATED: 7,
}


@dataclass(frozen=True)
class RateThresholds:
    """Derived SNR breakpoints plus the classified outage regime.

    ``k_r_out`` and the fit asymptotes are carried along so downstream
    probability code can re-use the exact comparisons that selected the
    regime instead of re-deriving them.
    """

    g_min: float
    g_max: float
    g_bit: float
    g_sem: float | None
    regime: HybridRegime
    k_r_out: float
    sim_floor: float
    sim_ceiling: float

    def outage_cdf_argument(self) -> float | None:
        """SNR whose CDF value equals the hybrid outage probability.

        Returns None for the composite corner where the outage event is
        not a single interval.
        """
        regime = self.regime
        if regime is HybridRegime.COMPOSITE_TAIL:
            return None
        if regime in (HybridRegime.QOS_BOUND_LOW_RATE, HybridRegime.QOS_BOUND_MID_RATE):
            return self.g_min
        if regime is HybridRegime.SEM_BOUND_MID_RATE:
            return self.g_sem
        return self.g_bit

    @property
    def branch_index(self) -> int | None:
        """1..7 for the closed-form table branches, None otherwise."""
        return _BRANCH_INDEX.get(self.regime)


def _scalar_like(value, template):
    return float(value) if np.ndim(template) == 0 else value


def similarity(g, fit: SimilarityFit):
    """Similarity score at linear SNR g: a1 + (a2-a1) / (1 + e^-(c1*10*log10(g)+c2)).

    Accepts scalars or arrays; strictly increasing from a1 (g -> 0) to a2
    (g -> infinity).
    """
    garr = np.asarray(g, dtype=float)
    if np.any(garr <= 0.0) or np.any(np.isnan(garr)):
        raise ValueError("similarity requires strictly positive SNR")
    z = fit.c1 * 10.0 * np.log10(garr) + fit.c2
    value = fit.a1 + (fit.a2 - fit.a1) / (1.0 + np.exp(-np.clip(z, -745.0, 745.0)))
    return _scalar_like(value, g)


def inv_similarity(m: float, fit: SimilarityFit) -> float:
    """Linear SNR at which the similarity curve reaches m in (a1, a2)."""
    if not (fit.a1 < m < fit.a2):
        raise ValueError(f"inverse similarity needs a1 < m < a2, got m={m} for bounds ({fit.a1}, {fit.a2})")
    return 10.0 ** (-(math.log((fit.a2 - m) / (m - fit.a1)) + fit.c2) / (10.0 * fit.c1))


def gamma_gap(cfg: RateConfig) -> float:
    """SNR gap of the uncoded scheme: max(-ln(5 ber) / 1.5, 1); 1 at capacity."""
    if cfg.use_capacity:
        return 1.0
    if not (0.0 < cfg.ber < 0.2):
        raise ValueError(f"ber must lie in (0, 0.2), got {cfg.ber}")
    return max(1.0, -math.log(5.0 * cfg.ber) / 1.5)


def bit_rate(g, cfg: RateConfig):
    """Bit-transmission rate log2(1 + g / gamma) / mu, scaled by info_per_word.

    Zero at g = 0, strictly increasing and unbounded.
    """
    garr = np.asarray(g, dtype=float)
    if np.any(garr < 0.0) or np.any(np.isnan(garr)):
        raise ValueError("bit_rate requires nonnegative SNR")
    value = cfg.info_per_word * np.log2(1.0 + garr / gamma_gap(cfg)) / cfg.mu
    return _scalar_like(value, g)


def sem_rate(g, cfg: RateConfig, fit: SimilarityFit):
    """Semantic-transmission rate similarity(g) / k, scaled by info_per_word.

    Bounded between a1/k and a2/k; strictly increasing.
    """
    value = cfg.info_per_word * np.asarray(similarity(g, fit)) / fit.k
    return _scalar_like(value, g)


def _rate_gap(g: float, cfg: RateConfig, fit: SimilarityFit, gap: float) -> float:
    """Normalized semantic-minus-bit rate; its largest zero is g_max."""
    z = fit.c1 * 10.0 * math.log10(g) + fit.c2
    z = min(745.0, max(-745.0, z))
    m = fit.a1 + (fit.a2 - fit.a1) / (1.0 + math.exp(-z))
    return m / fit.k - math.log2(1.0 + g / gap) / cfg.mu


def _rate_gap_deriv(g: float, cfg: RateConfig, fit: SimilarityFit, gap: float) -> float:
    z = fit.c1 * 10.0 * math.log10(g) + fit.c2
    z = min(700.0, max(-700.0, z))
    sig = 1.0 / (1.0 + math.exp(-z))
    dm = (fit.a2 - fit.a1) * sig * (1.0 - sig) * fit.c1 * 10.0 / (g * math.log(10.0))
    return dm / fit.k - 1.0 / (cfg.mu * math.log(2.0) * (gap + g))


def _solve_rate_crossing(cfg: RateConfig, fit: SimilarityFit, gap: float) -> float:
    """Largest g with sem_rate(g) = bit_rate(g).

    The bit rate passes the semantic ceiling a2/k at
    g_hi = gamma (2^(mu a2 / k) - 1), so the largest crossing lies below
    g_hi; scan a log grid downwards for the first sign change, bisect,
    then polish with safeguarded Newton steps to machine residual.
    """
    try:
        g_hi = gap * (2.0 ** (cfg.mu * fit.a2 / fit.k) - 1.0)
    except OverflowError as exc:
        raise SolverError(f"rate-crossing bracket overflowed for mu={cfg.mu}, a2={fit.a2}, k={fit.k}") from exc
    if not math.isfinite(g_hi) or g_hi <= 0.0:
        raise SolverError(f"rate-crossing upper bracket is not a positive finite SNR: {g_hi}")

    f = lambda g: _rate_gap(g, cfg, fit, gap)
    hi, f_hi = g_hi, f(g_hi)
    if f_hi >= 0.0:
        # the similarity value rounds onto the ceiling a2 once the
        # logistic tail underflows, which pins the crossing at g_hi to
        # within float resolution; anything larger is a logic error
        if f_hi <= 1e-13:
            return g_hi
        raise SolverError(f"semantic rate should lie below the bit rate at g={g_hi}, got gap {f_hi}")
    lo = None
    upper = hi
    # the documented search window spans six decades below g_hi; extend
    # further only if no sign change was seen (can happen when a1 ~ 0)
    for _ in range(5):
        grid = np.geomspace(upper, upper * 1e-6, 121)
        for g in grid[1:]:
            if f(g) > 0.0:
                lo = g
                break
            upper = g
        if lo is not None:
            break
    if lo is None:
        raise SolverError(
            "no semantic/bit rate crossing found below "
            f"g={g_hi} (searched 30 decades); thresholds are inconsistent")
    hi = upper
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if f(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * hi:
            break
    g = 0.5 * (lo + hi)
    for _ in range(40):
        fg = f(g)
        if fg == 0.0:
            break
        d = _rate_gap_deriv(g, cfg, fit, gap)
        if d == 0.0:
            break
        step = fg / d
        nxt = g - step
        if not (lo * (1 - 1e-9) <= nxt <= hi * (1 + 1e-9)):
            break
        if abs(step) <= 1e-16 * g:
            g = nxt
            break
        g = nxt
    return g


def _classify(g_bit: float, g_min: float, g_sem: float | None, g_max: float,
              k_r_out: float, fit: SimilarityFit) -> HybridRegime:
    """Literal branch-table conditions, checked in order; ties fall to the
    lower-indexed branch.  Degeneracy (empty semantic window) wins over
    everything; anything matching no branch is the composite corner."""
    if g_max <= g_min:
        return HybridRegime.BITCOM_COLLAPSE
    if k_r_out <= fit.a1:
        if g_bit <= g_min:
            return HybridRegime.BIT_BOUND_LOW_RATE
        if g_bit <= g_max:
            return HybridRegime.QOS_BOUND_LOW_RATE
        return HybridRegime.COMPOSITE_TAIL
    if k_r_out >= fit.a2:
        if g_max <= g_bit:
            return HybridRegime.BIT_BOUND_SATURATED
        return HybridRegime.COMPOSITE_TAIL
    assert g_sem is not None
    if g_sem <= g_bit <= g_min:
        return HybridRegime.BIT_BOUND_MID_RATE
    if g_sem <= g_min <= g_bit <= g_max:
        return HybridRegime.QOS_BOUND_MID_RATE
    if g_min <= g_sem <= g_bit <= g_max:
        return HybridRegime.SEM_BOUND_MID_RATE
    if g_max <= g_bit <= g_sem:
        return HybridRegime.BIT_BOUND_ABOVE_CROSSING
    return HybridRegime.COMPOSITE_TAIL


def thresholds(cfg: RateConfig, fit: SimilarityFit) -> RateThresholds:
    """Compute all SNR breakpoints and classify the outage regime."""
    if not (fit.a1 < cfg.m_th < fit.a2):
        raise ValueError(
            f"similarity threshold {cfg.m_th} must lie strictly between the fit asymptotes ({fit.a1}, {fit.a2})")
    gap = gamma_gap(cfg)
    g_bit = gap * (2.0 ** (cfg.mu * cfg.r_out) - 1.0)
    g_min = inv_similarity(cfg.m_th, fit)
    k_r_out = fit.k * cfg.r_out
    g_sem = inv_similarity(k_r_out, fit) if fit.a1 < k_r_out < fit.a2 else None
    g_max = _solve_rate_crossing(cfg, fit, gap)
    regime = _classify(g_bit, g_min, g_sem, g_max, k_r_out, fit)
    return RateThresholds(
        g_min=g_min, g_max=g_max, g_bit=g_bit, g_sem=g_sem, regime=regime,
        k_r_out=k_r_out, sim_floor=fit.a1, sim_ceiling=fit.a2)


def hybrid_rate(g, thr: RateThresholds, cfg: RateConfig, fit: SimilarityFit):
    """Rate of a hybrid user: semantic inside [g_min, g_max], bit outside.

    When the semantic window is empty the hybrid degenerates to pure bit
    transmission everywhere.
    """
    rb = np.asarray(bit_rate(g, cfg))
    if thr.regime is HybridRegime.BITCOM_COLLAPSE:
        return _scalar_like(rb, g)
    rs = np.asarray(sem_rate(g, cfg, fit))
    garr = np.asarray(g, dtype=float)
    value = np.where((garr >= thr.g_min) & (garr <= thr.g_max), rs, rb)
    return _scalar_like(value, g)
