"""Monte Carlo oracle for every closed-form probability in the package.

Simulation draws raw channel realizations (area-uniform user placement,
unit-mean exponential fading power) and evaluates outage/utilization
events directly from the similarity curve and the two rate formulas --
never from the piecewise branch tables the closed forms use -- so an
agreement check between the two is a genuine cross-validation.

Reproducibility: samples are generated in fixed blocks of 2^16, each
block from a counter-based Philox stream keyed by (seed, block index).
Workers merge integer event counts, so an estimate is bit-identical for
any worker count and any partition of blocks over workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .linkmodel import NetworkParams, snr_scale
from .ratemodel import RateConfig, SimilarityFit, gamma_gap

BLOCK_SIZE = 1 << 16
_CHUNK_ROWS = 4096  # bounds per-worker memory for multi-user realizations

WORKERS_ENV_VAR = "SEMCELL_THREADS"


@dataclass(frozen=True)
class Scenario:
    """Everything the simulator needs: cell, similarity fit, rate config."""

    params: NetworkParams
    fit: SimilarityFit
    cfg: RateConfig


@dataclass(frozen=True)
class BitOutage:
    """Per-user event: bit rate at or below the outage rate threshold."""


@dataclass(frozen=True)
class SemOutage:
    """Per-user event: semantic rate at or below the threshold, or
    similarity QoS missed (outage of a pure semantic user)."""


@dataclass(frozen=True)
class HybridOutage:
    """Per-user event: the preferred mode's rate is at or below the
    threshold (semantic inside the semantic-preference window, bit
    outside it)."""


@dataclass(frozen=True)
class SemUtilization:
    """Per-user event: served semantically above the outage rate."""


UserEvent = BitOutage | SemOutage | HybridOutage | SemUtilization


@dataclass(frozen=True)
class ExactCount:
    """Cell-level event: the per-user indicator holds for exactly
    ``count`` of the L users of one realization."""

    count: int
    indicator: UserEvent = field(default_factory=HybridOutage)


@dataclass(frozen=True)
class RangeCount:
    """Cell-level event: the per-user indicator count lands in
    [count_lo, count_hi]."""

    count_lo: int
    count_hi: int
    indicator: UserEvent = field(default_factory=HybridOutage)


Event = UserEvent | ExactCount | RangeCount


@dataclass(frozen=True)
class McEstimate:
    """Probability estimate with its binomial standard error."""

    estimate: float
    n_samples: int
    std_error: float
    seed: int
    low_precision: bool = False


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit argument, else SEMCELL_THREADS, else all cores."""
    if workers is not None:
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        return workers
    env = os.environ.get(WORKERS_ENV_VAR)
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise ValueError(f"{WORKERS_ENV_VAR} must be an integer, got {env!r}") from exc
        if value < 1:
            raise ValueError(f"{WORKERS_ENV_VAR} must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def user_stream(seed: int, block_index: int) -> np.random.Generator:
    """Counter-based random stream for one sample block.

    Philox keyed directly by (seed, block index): block contents depend
    only on those two integers, never on which worker draws them.
    """
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(block_index)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_user(stream: np.random.Generator, params: NetworkParams, size=None):
    """Draw received SNR(s) of uniformly placed users with Rayleigh fading.

    r = R sqrt(U1) (area-uniform disc), |h|^2 = -ln(1 - U2) (unit-mean
    exponential by inverse transform), g = c_L |h|^2 r^(-a).
    """
    u1 = stream.random(size)
    u2 = stream.random(size)
    r = params.cell_radius_m * np.sqrt(u1)
    gain = -np.log1p(-u2)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = snr_scale(params) * gain * r ** (-params.pathloss_exp)
    # r == 0 has probability zero but a float can land on it: the SNR is +inf
    g = np.where(r == 0.0, np.inf, g)
    if size is None:
        return float(g)
    return g


def _user_event_mask(event: UserEvent, g: np.ndarray, scenario: Scenario, gap: float) -> np.ndarray:
    """Evaluate a per-user event directly from similarity and raw rates."""
    fit = scenario.fit
    cfg = scenario.cfg
    with np.errstate(divide="ignore", invalid="ignore"):
        z = fit.c1 * 10.0 * np.log10(g) + fit.c2
    z = np.where(np.isnan(z), -np.inf, z)  # g == 0 corner: similarity floor
    m = fit.a1 + (fit.a2 - fit.a1) / (1.0 + np.exp(-np.clip(z, -745.0, 745.0)))
    rate_sem = m / fit.k
    with np.errstate(invalid="ignore"):
        rate_bit = np.log2(1.0 + g / gap) / cfg.mu
    if isinstance(event, BitOutage):
        return rate_bit <= cfg.r_out
    if isinstance(event, SemOutage):
        return (rate_sem <= cfg.r_out) | (m <= cfg.m_th)
    prefers_sem = (m >= cfg.m_th) & (rate_sem >= rate_bit)
    if isinstance(event, HybridOutage):
        return np.where(prefers_sem, rate_sem <= cfg.r_out, rate_bit <= cfg.r_out)
    if isinstance(event, SemUtilization):
        return prefers_sem & (rate_sem > cfg.r_out)
    raise TypeError(f"unknown per-user event {event!r}")


def _count_matches(event: ExactCount | RangeCount, counts: np.ndarray) -> int:
    if isinstance(event, ExactCount):
        return int(np.count_nonzero(counts == event.count))
    return int(np.count_nonzero((counts >= event.count_lo) & (counts <= event.count_hi)))


def _block_hits_many(events: list[Event], block_index: int, rows_used: int,
                     seed: int, scenario: Scenario, gap: float) -> list[int]:
    """Hits of every event among the first ``rows_used`` samples of one block.

    Per-user events share one stream of single-user draws; count events
    share one stream of full-cell draws.  Both streams carry the same
    (seed, block) key, so each event sees exactly the samples it would
    see if estimated alone.
    """
    params = scenario.params
    hits = [0] * len(events)
    user_ix = [i for i, e in enumerate(events) if not isinstance(e, (ExactCount, RangeCount))]
    count_ix = [i for i, e in enumerate(events) if isinstance(e, (ExactCount, RangeCount))]
    if user_ix:
        stream = user_stream(seed, block_index)
        g = sample_user(stream, params, size=BLOCK_SIZE)
        for i in user_ix:
            mask = _user_event_mask(events[i], g, scenario, gap)
            hits[i] = int(np.count_nonzero(mask[:rows_used]))
    if count_ix:
        stream = user_stream(seed, block_index)
        num_users = params.num_users
        done = 0
        counted = [events[i] for i in count_ix]
        while done < rows_used:
            take = min(_CHUNK_ROWS, BLOCK_SIZE - done)
            g = sample_user(stream, params, size=(take, num_users))
            used = min(take, rows_used - done)
            per_indicator: dict[UserEvent, np.ndarray] = {}
            for i, event in zip(count_ix, counted):
                indicator = event.indicator
                if indicator not in per_indicator:
                    per_indicator[indicator] = _user_event_mask(
                        indicator, g, scenario, gap).sum(axis=1)
                hits[i] += _count_matches(event, per_indicator[indicator][:used])
            done += take
    return hits


def _validate_event(event: Event, num_users: int) -> None:
    if isinstance(event, ExactCount):
        if not (0 <= event.count <= num_users):
            raise ValueError(f"count must lie in [0, {num_users}], got {event.count}")
    elif isinstance(event, RangeCount):
        if not (0 <= event.count_lo <= event.count_hi <= num_users):
            raise ValueError(
                f"need 0 <= count_lo <= count_hi <= {num_users}, "
                f"got ({event.count_lo}, {event.count_hi})")
    elif not isinstance(event, (BitOutage, SemOutage, HybridOutage, SemUtilization)):
        raise TypeError(f"unknown event {event!r}")


def estimate_many(events: list[Event], n: int, seed: int, scenario: Scenario,
                  workers: int | None = None) -> list[McEstimate]:
    """Estimate several events from shared draws, one estimate per event.

    Produces exactly the estimates :func:`estimate` would produce one by
    one for the same (seed, n, scenario); sharing the draws only saves
    the cost of regenerating them per event.
    """
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    if not events:
        return []
    for event in events:
        _validate_event(event, scenario.params.num_users)
    gap = gamma_gap(scenario.cfg)
    n_blocks = -(-n // BLOCK_SIZE)
    rows = [min(BLOCK_SIZE, n - b * BLOCK_SIZE) for b in range(n_blocks)]
    n_workers = min(resolve_workers(workers), n_blocks)
    if n_workers <= 1:
        per_block = [_block_hits_many(events, b, rows[b], seed, scenario, gap)
                     for b in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            per_block = list(pool.map(
                lambda b: _block_hits_many(events, b, rows[b], seed, scenario, gap),
                range(n_blocks)))
    low = n < 10_000
    results = []
    for i in range(len(events)):
        hits = sum(block[i] for block in per_block)
        p_hat = hits / n
        results.append(McEstimate(
            estimate=p_hat, n_samples=n,
            std_error=math.sqrt(p_hat * (1.0 - p_hat) / n),
            seed=seed, low_precision=low))
    return results


def estimate(event: Event, n: int, seed: int, scenario: Scenario,
             workers: int | None = None) -> McEstimate:
    """Estimate the probability of ``event`` from n independent samples.

    A sample is one user draw for per-user events and one full-cell
    realization (num_users draws) for the count events.  Estimates with
    fewer than 10^4 samples are flagged low_precision rather than
    rejected.
    """
    return estimate_many([event], n, seed, scenario, workers=workers)[0]
