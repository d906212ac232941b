from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import ndtri

from ..config import BLOCK_TRIALS, CONSTRUCTION_TRIALS
from ..constants import ROLE_BAD, ROLE_FER, ROLE_GOOD
from ..errors import DomainError
from .channel import ChannelParams, likelihoods, make_rng, transmit
from .kernel import Kernel
from .montecarlo import block_sizes, run_blocks
from .polar import PolarCodeConfig, encode, genie_reliabilities, sc_decode, select_information_set
from .signal_set import SignalSet
from .spectrum import DistanceSpectrum, snr_db_to_linear, union_bound

log = logging.getLogger("polarkit.sim")

# construction streams sit far above any SNR index
CONSTRUCTION_STREAM_OFFSET = 1 << 20


@dataclass(frozen=True)
class SimPoint:
    snr_db: float
    trials: int
    errors: int
    rate: float
    ci_lo: float
    ci_hi: float
    bound: Optional[float] = None


@dataclass(frozen=True)
class SimResult:
    role: str
    points: Tuple[SimPoint, ...]
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def has_bound(self) -> bool:
        return bool(self.points) and all(p.bound is not None for p in self.points)


def wilson_interval(errors: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if not 0 <= errors <= trials:
        raise DomainError(f"errors must lie in 0..{trials}, got {errors}")
    z = float(ndtri(1.0 - (1.0 - confidence) / 2.0))
    p = errors / trials
    z2n = z * z / trials
    center = (p + z2n / 2.0) / (1.0 + z2n)
    half = z * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials)) / (1.0 + z2n)
    lo = 0.0 if errors == 0 else max(0.0, center - half)
    hi = 1.0 if errors == trials else min(1.0, center + half)
    return lo, hi


def _point(snr_db: float, trials: int, errors: int) -> SimPoint:
    lo, hi = wilson_interval(errors, trials)
    return SimPoint(snr_db=float(snr_db), trials=trials, errors=errors, rate=errors / trials, ci_lo=lo, ci_hi=hi)


def _check_snr_list(snr_list: Sequence[float]) -> List[float]:
    values = [float(s) for s in snr_list]
    if not values:
        raise DomainError("snr list must not be empty")
    if any(math.isnan(s) for s in values):
        raise DomainError("snr values must be numbers")
    return values


def _sweep(
    snr_list: Sequence[float],
    trials: int,
    block_task: Callable[[int, float, int, int], int],
    *,
    threads: Optional[int],
    block_trials: int,
    early_stop: Optional[int],
    label: str,
) -> Tuple[SimPoint, ...]:
    sizes = block_sizes(trials, block_trials)
    points = []
    for index, snr_db in enumerate(snr_list):
        results = run_blocks(
            lambda b, size: (size, block_task(index, snr_db, b, size)),
            sizes,
            threads=threads,
            errors_of=lambda r: r[1],
            early_stop=early_stop,
        )
        done = sum(size for size, _ in results)
        errors = sum(count for _, count in results)
        point = _point(snr_db, done, errors)
        log.info("%s snr_db=%.6g trials=%s errors=%s rate=%.6g", label, snr_db, done, errors, point.rate)
        points.append(point)
    return tuple(points)


def _one_step_metadata(role: str, signal_set: SignalSet, kernel: Kernel, trials: int, seed: int,
                       block_trials: int, early_stop: Optional[int]) -> Dict[str, Any]:
    return {
        "role": role,
        "signal_set": signal_set.name,
        "q": signal_set.q,
        "kernel": kernel.name,
        "trials_per_point": trials,
        "seed": seed,
        "block_trials": block_trials,
        "early_stop_errors": early_stop,
    }


def _one_step_block(signal_set: SignalSet, kernel: Kernel, seed: int, role: str):
    table = kernel.table
    q = signal_set.q

    def task(index: int, snr_db: float, block: int, size: int) -> int:
        rng = make_rng(seed, index, block)
        u1 = rng.integers(0, q, size=size)
        u2 = rng.integers(0, q, size=size)
        params = ChannelParams(snr_db, signal_set.es)
        y = transmit(signal_set, np.stack([table[u1, u2], u2], axis=1), params, rng)
        probs = likelihoods(signal_set, y, params)
        w1, w2 = probs[:, 0, :], probs[:, 1, :]
        if role == ROLE_GOOD:
            # u1 known: score(c) = W1(f(u1, c)) W2(c)
            score = w1[np.arange(size)[:, None], table[u1]] * w2
            return int(np.count_nonzero(np.argmax(score, axis=1) != u2))
        # u2 unknown: score(a) = sum_c W1(f(a, c)) W2(c)
        score = np.sum(w1[:, table] * w2[:, None, :], axis=-1)
        return int(np.count_nonzero(np.argmax(score, axis=1) != u1))

    return task


def _simulate_one_step(
    role: str,
    signal_set: SignalSet,
    kernel: Kernel,
    snr_list: Sequence[float],
    trials: int,
    seed: int,
    threads: Optional[int],
    block_trials: int,
    early_stop: Optional[int],
) -> SimResult:
    if signal_set.q != kernel.q:
        raise DomainError(f"signal set has q={signal_set.q} but kernel has q={kernel.q}")
    snr_values = _check_snr_list(snr_list)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    points = _sweep(
        snr_values,
        trials,
        _one_step_block(signal_set, kernel, seed, role),
        threads=threads,
        block_trials=block_trials,
        early_stop=early_stop,
        label=f"{role} {kernel.name}",
    )
    metadata = _one_step_metadata(role, signal_set, kernel, trials, seed, block_trials, early_stop)
    return SimResult(role=role, points=points, metadata=metadata)


def simulate_good_channel(
    signal_set: SignalSet,
    kernel: Kernel,
    snr_list: Sequence[float],
    trials: int,
    seed: int,
    *,
    threads: Optional[int] = None,
    block_trials: int = BLOCK_TRIALS,
    early_stop: Optional[int] = None,
) -> SimResult:
    """Symbol error rate of u2 given the true u1 over one kernel use."""
    return _simulate_one_step(ROLE_GOOD, signal_set, kernel, snr_list, trials, seed, threads, block_trials, early_stop)


def simulate_bad_channel(
    signal_set: SignalSet,
    kernel: Kernel,
    snr_list: Sequence[float],
    trials: int,
    seed: int,
    *,
    threads: Optional[int] = None,
    block_trials: int = BLOCK_TRIALS,
    early_stop: Optional[int] = None,
) -> SimResult:
    """Symbol error rate of u1 with u2 marginalized over one kernel use."""
    return _simulate_one_step(ROLE_BAD, signal_set, kernel, snr_list, trials, seed, threads, block_trials, early_stop)


def _construct(
    config: PolarCodeConfig,
    K: int,
    snr_db: float,
    seed: int,
    stream_id: int,
    construction_trials: int,
    threads: Optional[int],
    block_trials: int,
) -> PolarCodeConfig:
    params = ChannelParams(snr_db, config.signal_set.es)
    table = genie_reliabilities(
        config, params, construction_trials, seed, threads=threads, block_trials=block_trials, stream_id=stream_id
    )
    frozen = select_information_set(table, K)
    log.info("construction snr_db=%.6g K=%s frozen=%s", snr_db, K, len(frozen))
    return config.with_frozen(frozen)


def simulate_fer(
    config: PolarCodeConfig,
    K: int,
    snr_list: Sequence[float],
    trials: int,
    seed: int,
    *,
    construction_snr_db: Optional[float] = None,
    construction_trials: int = CONSTRUCTION_TRIALS,
    threads: Optional[int] = None,
    block_trials: int = BLOCK_TRIALS,
    early_stop: Optional[int] = None,
) -> SimResult:
    """Frame error rate of SC decoding.

    The information set comes from genie reliabilities measured at each
    simulated SNR, or once at ``construction_snr_db`` when given. A config
    that already freezes exactly N-K indices is used as is unless
    ``construction_snr_db`` asks for a new construction.
    """
    length = config.length
    if not isinstance(K, (int, np.integer)) or not 0 <= K <= length:
        raise DomainError(f"K must be an integer in 0..{length}, got {K!r}")
    snr_values = _check_snr_list(snr_list)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")

    fixed: Optional[PolarCodeConfig] = None
    if construction_snr_db is None and config.frozen and len(config.frozen) == length - K:
        log.info("using the configured information set, K=%s", K)
        fixed = config
    elif construction_snr_db is not None and K > 0:
        fixed = _construct(config, K, construction_snr_db, seed, CONSTRUCTION_STREAM_OFFSET,
                           construction_trials, threads, block_trials)
    codes: Dict[int, PolarCodeConfig] = {}

    def code_for(index: int, snr_db: float) -> PolarCodeConfig:
        if fixed is not None:
            return fixed
        if index not in codes:
            codes[index] = _construct(config, K, snr_db, seed, CONSTRUCTION_STREAM_OFFSET + 1 + index,
                                      construction_trials, threads, block_trials)
        return codes[index]

    q = config.q

    def task(index: int, snr_db: float, block: int, size: int) -> int:
        code = codes[index] if fixed is None else fixed
        info = code.information_set
        rng = make_rng(seed, index, block)
        u = np.full((size, length), code.frozen_value, dtype=np.int64)
        u[:, info] = rng.integers(0, q, size=(size, len(info)))
        params = ChannelParams(snr_db, code.signal_set.es)
        y = transmit(code.signal_set, encode(code, u), params, rng)
        u_hat = sc_decode(code, likelihoods(code.signal_set, y, params))
        return int(np.count_nonzero(np.any(u_hat[:, info] != u[:, info], axis=1)))

    if K == 0:
        points = tuple(_point(s, trials, 0) for s in snr_values)
    else:
        points_list = []
        for index, snr_db in enumerate(snr_values):
            code_for(index, snr_db)
            # one point per sweep so every point reuses its own construction
            (point,) = _sweep(
                [snr_db], trials,
                lambda _i, s, b, size, index=index: task(index, s, b, size),
                threads=threads, block_trials=block_trials, early_stop=early_stop,
                label=f"fer K={K}",
            )
            points_list.append(point)
        points = tuple(points_list)

    metadata = {
        "role": ROLE_FER,
        "config": config.describe(),
        "K": int(K),
        "trials_per_point": trials,
        "seed": seed,
        "block_trials": block_trials,
        "early_stop_errors": early_stop,
        "construction": "given" if fixed is config else ("per-snr" if construction_snr_db is None else "fixed"),
        "construction_snr_db": construction_snr_db,
        "construction_trials": construction_trials,
    }
    return SimResult(role=ROLE_FER, points=points, metadata=metadata)


def overlay_bounds(result: SimResult, spectrum: DistanceSpectrum) -> SimResult:
    """Attach union-bound values at each simulated SNR; a role mismatch is logged and recorded."""
    metadata = dict(result.metadata)
    if spectrum.channel_role != result.role:
        log.warning("bound from the %s channel overlaid on a %s result", spectrum.channel_role, result.role)
        metadata["bound_role_mismatch"] = True
    metadata["bound_role"] = spectrum.channel_role
    points = tuple(
        replace(p, bound=union_bound(spectrum, snr_db_to_linear(p.snr_db))) for p in result.points
    )
    return replace(result, points=points, metadata=metadata)


def crossing_snr(result: SimResult, target_rate: float) -> Optional[float]:
    """SNR where the rate curve first falls through ``target_rate``, by log-linear interpolation."""
    if not 0 < target_rate < 1:
        raise DomainError(f"target rate must lie in (0, 1), got {target_rate}")
    points = sorted(result.points, key=lambda p: p.snr_db)
    for a, b in zip(points, points[1:]):
        if a.rate >= target_rate > b.rate:
            if b.rate <= 0.0:
                return b.snr_db
            t = (math.log(target_rate) - math.log(a.rate)) / (math.log(b.rate) - math.log(a.rate))
            return a.snr_db + t * (b.snr_db - a.snr_db)
    return None
