from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import DomainError
from .signal_set import SignalSet

log = logging.getLogger("polarkit.channel")

RngLike = Union[np.random.Generator, int]


@dataclass(frozen=True)
class ChannelParams:
    """AWGN channel at Es/N0 = ``snr_db``; ``snr_db = inf`` is the noiseless limit."""

    snr_db: float
    es: float = 1.0

    def __post_init__(self) -> None:
        snr_db = float(self.snr_db)
        if math.isnan(snr_db) or snr_db == -math.inf:
            raise DomainError(f"snr_db must be a number or +inf, got {self.snr_db!r}")
        if not self.es > 0:
            raise DomainError(f"es must be positive, got {self.es}")
        object.__setattr__(self, "snr_db", snr_db)
        object.__setattr__(self, "es", float(self.es))

    @property
    def snr_linear(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)

    @property
    def n0(self) -> float:
        """Noise power per two real dimensions."""
        if math.isinf(self.snr_db):
            return 0.0
        return self.es / self.snr_linear

    @property
    def sigma1_sq(self) -> float:
        return self.n0 / 2.0


def make_rng(seed: int, stream_id: int = 0, block: int = 0) -> np.random.Generator:
    """Independent generator for (campaign seed, stream, block)."""
    if int(seed) < 0 or int(stream_id) < 0 or int(block) < 0:
        raise DomainError("seed, stream_id and block must be non-negative")
    sequence = np.random.SeedSequence(int(seed), spawn_key=(int(stream_id), int(block)))
    return np.random.Generator(np.random.PCG64(sequence))


def _as_rng(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return make_rng(int(rng))


def _check_labels(signal_set: SignalSet, symbols: np.ndarray) -> np.ndarray:
    labels = np.asarray(symbols)
    if labels.size and (not np.issubdtype(labels.dtype, np.integer) or labels.min() < 0 or labels.max() >= signal_set.q):
        raise DomainError(f"symbols must be integer labels in 0..{signal_set.q - 1}")
    return labels.astype(np.int64, copy=False)


def _as_observations(signal_set: SignalSet, y) -> np.ndarray:
    obs = np.asarray(y, dtype=float)
    if signal_set.dimension == 1 and (obs.ndim == 0 or obs.shape[-1] != 1):
        obs = obs[..., None]
    if obs.ndim == 0 or obs.shape[-1] != signal_set.dimension:
        raise DomainError(f"observations must have trailing dimension {signal_set.dimension}, got shape {obs.shape}")
    if not np.all(np.isfinite(obs)):
        raise DomainError("observations must be finite")
    return obs


def transmit(signal_set: SignalSet, symbols, params: ChannelParams, rng: RngLike) -> np.ndarray:
    """y = s_x + n with i.i.d. N(0, N0/2) noise per real dimension.

    Output shape is ``symbols.shape + (dimension,)``.
    """
    labels = _check_labels(signal_set, symbols)
    clean = signal_set.points[labels]
    if params.sigma1_sq == 0.0:
        return clean.copy()
    noise = _as_rng(rng).standard_normal(clean.shape)
    return clean + math.sqrt(params.sigma1_sq) * noise


def _distances_sq(signal_set: SignalSet, obs: np.ndarray) -> np.ndarray:
    diff = obs[..., None, :] - signal_set.points
    return np.sum(diff * diff, axis=-1)


def likelihoods(signal_set: SignalSet, y, params: ChannelParams) -> np.ndarray:
    """Normalized W(y|x) over the q labels, shape ``y.shape[:-1] + (q,)``.

    W(y|x) is proportional to exp(-||y - s_x||^2 / N0) in one and two
    dimensions alike, since 2 sigma_1^2 = N0.
    """
    obs = _as_observations(signal_set, y)
    d2 = _distances_sq(signal_set, obs)
    if params.n0 == 0.0:
        return np.eye(signal_set.q)[np.argmin(d2, axis=-1)]
    logits = -d2 / params.n0
    logits -= logits.max(axis=-1, keepdims=True)
    probs = np.exp(logits)
    probs /= probs.sum(axis=-1, keepdims=True)
    return probs


def hard_decision(signal_set: SignalSet, y) -> np.ndarray:
    """Nearest-neighbour labels (lowest label on ties)."""
    obs = _as_observations(signal_set, y)
    return np.argmin(_distances_sq(signal_set, obs), axis=-1)
