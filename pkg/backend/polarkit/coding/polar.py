from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import BLOCK_TRIALS
from ..errors import DomainError
from .channel import ChannelParams, likelihoods, make_rng, transmit
from .kernel import Kernel, standard_kernel, validate
from .montecarlo import block_sizes, run_blocks
from .signal_set import SignalSet

log = logging.getLogger("polarkit.polar")

# codewords decoded together; bounds the (rows, N, q, q) merge temporaries
DECODE_CHUNK = 256


@dataclass(frozen=True)
class StageAssignment:
    """Which kernel sits at each of the n stages (stage 1 = input side, stage n = channel side)."""

    kind: str
    kernels: Tuple[Kernel, ...]

    @classmethod
    def uniform(cls, kernel: Kernel) -> "StageAssignment":
        return cls("uniform", (kernel,))

    @classmethod
    def channel_stage_only(cls, special: Kernel) -> "StageAssignment":
        return cls("channel_stage_only", (special,))

    @classmethod
    def all_standard(cls, q: int) -> "StageAssignment":
        return cls("uniform", (standard_kernel(q),))

    @classmethod
    def explicit(cls, kernels: Sequence[Kernel]) -> "StageAssignment":
        if not kernels:
            raise DomainError("explicit stage assignment needs at least one kernel")
        return cls("explicit", tuple(kernels))

    def expand(self, n: int) -> Tuple[Kernel, ...]:
        if n < 1:
            raise DomainError(f"stage count must be >= 1, got {n}")
        if self.kind == "uniform":
            return self.kernels * n
        if self.kind == "channel_stage_only":
            special = self.kernels[0]
            return (standard_kernel(special.q),) * (n - 1) + (special,)
        if self.kind == "explicit":
            if len(self.kernels) != n:
                raise DomainError(f"explicit assignment has {len(self.kernels)} kernels for {n} stages")
            return self.kernels
        raise DomainError(f"unknown stage assignment {self.kind!r}")


@dataclass(frozen=True)
class PolarCodeConfig:
    q: int
    n: int
    stage_kernels: Tuple[Kernel, ...]
    signal_set: SignalSet
    frozen: FrozenSet[int] = field(default_factory=frozenset)
    frozen_value: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"stage count must be >= 1, got {self.n}")
        kernels = tuple(self.stage_kernels)
        if len(kernels) != self.n:
            raise DomainError(f"{len(kernels)} stage kernels given for n={self.n}")
        for stage, kernel in enumerate(kernels, start=1):
            if kernel.q != self.q:
                raise DomainError(f"stage {stage} kernel has q={kernel.q}, code has q={self.q}")
            if not validate(kernel):
                raise DomainError(f"stage {stage} kernel {kernel.name} is not invertible")
        if self.signal_set.q != self.q:
            raise DomainError(f"signal set has q={self.signal_set.q}, code has q={self.q}")
        frozen = frozenset(int(i) for i in self.frozen)
        if any(not 0 <= i < self.length for i in frozen):
            raise DomainError(f"frozen indices must lie in 0..{self.length - 1}")
        if not 0 <= self.frozen_value < self.q:
            raise DomainError(f"frozen value must lie in 0..{self.q - 1}")
        object.__setattr__(self, "stage_kernels", kernels)
        object.__setattr__(self, "frozen", frozen)

    @classmethod
    def build(
        cls,
        signal_set: SignalSet,
        n: int,
        assignment: StageAssignment,
        frozen: Iterable[int] = (),
        frozen_value: int = 0,
    ) -> "PolarCodeConfig":
        return cls(
            q=signal_set.q,
            n=n,
            stage_kernels=assignment.expand(n),
            signal_set=signal_set,
            frozen=frozenset(frozen),
            frozen_value=frozen_value,
        )

    @property
    def length(self) -> int:
        return 1 << self.n

    @property
    def information_set(self) -> List[int]:
        return [i for i in range(self.length) if i not in self.frozen]

    def with_frozen(self, frozen: Iterable[int]) -> "PolarCodeConfig":
        return replace(self, frozen=frozenset(frozen))

    def describe(self) -> Dict[str, object]:
        return {
            "q": self.q,
            "n": self.n,
            "N": self.length,
            "stage_kernels": [k.name for k in self.stage_kernels],
            "signal_set": self.signal_set.name,
            "K": self.length - len(self.frozen),
            "frozen_value": self.frozen_value,
        }


def _encode(u: np.ndarray, kernels: Sequence[Kernel]) -> np.ndarray:
    if not kernels:
        return u
    half = u.shape[-1] // 2
    inner = kernels[:-1]
    m = _encode(u[..., :half], inner)
    p = _encode(u[..., half:], inner)
    x = np.empty_like(u)
    x[..., 0::2] = kernels[-1].table[m, p]
    x[..., 1::2] = p
    return x


def encode(config: PolarCodeConfig, u) -> np.ndarray:
    """Map u to x through the n butterfly stages; a leading batch axis is allowed.

    Stage n pairs (m_i, p_i), the outputs of the two half-size encoders,
    into x[2i] = f_n(m_i, p_i) and x[2i+1] = p_i.
    """
    arr = np.asarray(u)
    if arr.ndim == 0 or arr.shape[-1] != config.length:
        raise DomainError(f"input length must be N={config.length}, got shape {arr.shape}")
    if arr.size and (not np.issubdtype(arr.dtype, np.integer) or arr.min() < 0 or arr.max() >= config.q):
        raise DomainError(f"symbols must be integers in 0..{config.q - 1}")
    arr = arr.astype(np.int64, copy=False)
    if config.frozen:
        frozen = sorted(config.frozen)
        if np.any(arr[..., frozen] != config.frozen_value):
            raise DomainError(f"frozen positions must carry {config.frozen_value}")
    return _encode(arr, config.stage_kernels)


def _renormalize(probs: np.ndarray) -> np.ndarray:
    total = probs.sum(axis=-1, keepdims=True)
    q = probs.shape[-1]
    dead = total <= 0.0
    return np.where(dead, 1.0 / q, probs / np.where(dead, 1.0, total))


def _bad_merge(table: np.ndarray, l1: np.ndarray, l2: np.ndarray) -> np.ndarray:
    """P(a) proportional to sum_c W1(f(a, c)) W2(c); the 1/q factor is dropped."""
    q = table.shape[0]
    out = np.empty_like(l1)
    for a in range(q):
        out[..., a] = np.sum(l1[..., table[a]] * l2, axis=-1)
    return _renormalize(out)


def _good_merge(table: np.ndarray, l1: np.ndarray, l2: np.ndarray, decided: np.ndarray) -> np.ndarray:
    """P(c) proportional to W1(f(a_hat, c)) W2(c)."""
    return _renormalize(np.take_along_axis(l1, table[decided], axis=-1) * l2)


class _Decoder:
    def __init__(self, config: PolarCodeConfig, frozen: FrozenSet[int], truth: Optional[np.ndarray]):
        self.tables = [k.table for k in config.stage_kernels]
        self.frozen = frozen
        self.frozen_value = config.frozen_value
        self.truth = truth
        self.u_hat: Optional[np.ndarray] = None
        self.errors: Optional[np.ndarray] = None

    def run(self, probs: np.ndarray) -> np.ndarray:
        rows, length, _ = probs.shape
        self.u_hat = np.zeros((rows, length), dtype=np.int64)
        if self.truth is not None:
            self.errors = np.zeros((rows, length), dtype=bool)
        self._node(probs, len(self.tables), 0)
        return self.u_hat

    def _leaf(self, probs: np.ndarray, index: int) -> np.ndarray:
        if self.truth is not None:
            self.errors[:, index] = np.argmax(probs, axis=-1) != self.truth[:, index]
            decision = self.truth[:, index]
        elif index in self.frozen:
            decision = np.full(probs.shape[0], self.frozen_value, dtype=np.int64)
        else:
            decision = np.argmax(probs, axis=-1)
        self.u_hat[:, index] = decision
        return decision[:, None]

    def _node(self, probs: np.ndarray, depth: int, offset: int) -> np.ndarray:
        """Decode the sub-code at ``offset`` of size 2**depth; returns its re-encoded x."""
        if depth == 0:
            return self._leaf(probs[:, 0, :], offset)
        table = self.tables[depth - 1]
        l1 = probs[:, 0::2, :]
        l2 = probs[:, 1::2, :]
        half = 1 << (depth - 1)
        m = self._node(_bad_merge(table, l1, l2), depth - 1, offset)
        p = self._node(_good_merge(table, l1, l2, m), depth - 1, offset + half)
        x = np.empty((probs.shape[0], 2 * half), dtype=np.int64)
        x[:, 0::2] = table[m, p]
        x[:, 1::2] = p
        return x


def _check_channel(config: PolarCodeConfig, channel_likelihoods) -> Tuple[np.ndarray, bool]:
    probs = np.asarray(channel_likelihoods, dtype=float)
    single = probs.ndim == 2
    if single:
        probs = probs[None]
    if probs.ndim != 3 or probs.shape[1:] != (config.length, config.q):
        raise DomainError(
            f"channel likelihoods must have shape (N={config.length}, q={config.q}), got {np.shape(channel_likelihoods)}"
        )
    if not np.all(np.isfinite(probs)) or np.any(probs < 0):
        raise DomainError("channel likelihoods must be finite and non-negative")
    return _renormalize(probs), single


def sc_decode(
    config: PolarCodeConfig,
    channel_likelihoods,
    frozen: Optional[Iterable[int]] = None,
) -> np.ndarray:
    """Successive cancellation in natural index order.

    ``channel_likelihoods`` has shape (N, q) or (batch, N, q). Frozen indices
    take the configured frozen value; information indices take the argmax
    with ties to the lower symbol.
    """
    probs, single = _check_channel(config, channel_likelihoods)
    frozen_set = config.frozen if frozen is None else frozenset(int(i) for i in frozen)
    if any(not 0 <= i < config.length for i in frozen_set):
        raise DomainError(f"frozen indices must lie in 0..{config.length - 1}")
    out = np.empty(probs.shape[:2], dtype=np.int64)
    for start in range(0, probs.shape[0], DECODE_CHUNK):
        chunk = probs[start : start + DECODE_CHUNK]
        out[start : start + DECODE_CHUNK] = _Decoder(config, frozen_set, None).run(chunk)
    return out[0] if single else out


def genie_decisions(config: PolarCodeConfig, channel_likelihoods, u) -> np.ndarray:
    """Per-index first-decision errors when every earlier symbol is the true one."""
    probs, single = _check_channel(config, channel_likelihoods)
    truth = np.asarray(u, dtype=np.int64).reshape(probs.shape[:2])
    errors = np.empty(probs.shape[:2], dtype=bool)
    for start in range(0, probs.shape[0], DECODE_CHUNK):
        decoder = _Decoder(config, frozenset(), truth[start : start + DECODE_CHUNK])
        decoder.run(probs[start : start + DECODE_CHUNK])
        errors[start : start + DECODE_CHUNK] = decoder.errors
    return errors[0] if single else errors


@dataclass(frozen=True)
class ReliabilityTable:
    error_rates: np.ndarray
    stderr: np.ndarray
    trials: int
    snr_db: float

    def rows(self) -> List[Tuple[int, float, float]]:
        return [(i, float(r), float(s)) for i, (r, s) in enumerate(zip(self.error_rates, self.stderr))]


def genie_reliabilities(
    config: PolarCodeConfig,
    params: ChannelParams,
    trials: int,
    seed: int,
    *,
    threads: Optional[int] = None,
    block_trials: int = BLOCK_TRIALS,
    stream_id: int = 0,
) -> ReliabilityTable:
    """Genie-aided SC error rate of each synthetic channel, with Monte Carlo standard errors."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    length, q = config.length, config.q

    def block(index: int, size: int) -> np.ndarray:
        rng = make_rng(seed, stream_id, index)
        u = rng.integers(0, q, size=(size, length))
        y = transmit(config.signal_set, encode(config.with_frozen(()), u), params, rng)
        probs = likelihoods(config.signal_set, y, params)
        return genie_decisions(config, probs, u).sum(axis=0)

    counts = run_blocks(block, block_sizes(trials, block_trials), threads=threads)
    errors = np.sum(counts, axis=0)
    rates = errors / trials
    stderr = np.sqrt(rates * (1.0 - rates) / trials)
    log.info("genie reliabilities N=%s q=%s snr_db=%s trials=%s", length, q, params.snr_db, trials)
    return ReliabilityTable(error_rates=rates, stderr=stderr, trials=trials, snr_db=params.snr_db)


def select_information_set(reliabilities, K: int) -> FrozenSet[int]:
    """Freeze the N-K least reliable indices; on equal rates the lower index is frozen first."""
    rates = np.asarray(getattr(reliabilities, "error_rates", reliabilities), dtype=float)
    length = rates.shape[0]
    if not 0 <= K <= length:
        raise DomainError(f"K must lie in 0..{length}, got {K}")
    order = sorted(range(length), key=lambda i: (-rates[i], i))
    return frozenset(order[: length - K])


@dataclass(frozen=True)
class PlacementComparison:
    """Genie reliabilities of the four kernel placements.

    A: special kernel at all stages, B: special kernel at the channel stage
    only, C: alternative kernel at all stages, D: alternative kernel at the
    channel stage only.
    """

    tables: Dict[str, ReliabilityTable]

    def agreement(self, first: str, second: str, z: float = 1.96) -> float:
        a, b = self.tables[first], self.tables[second]
        spread = z * np.sqrt(a.stderr**2 + b.stderr**2)
        close = np.abs(a.error_rates - b.error_rates) <= spread
        return float(np.mean(close))


def placement_comparison(
    signal_set: SignalSet,
    n: int,
    special: Kernel,
    alternative: Kernel,
    params: ChannelParams,
    trials: int,
    seed: int,
    *,
    threads: Optional[int] = None,
) -> PlacementComparison:
    placements = {
        "A": StageAssignment.uniform(special),
        "B": StageAssignment.channel_stage_only(special),
        "C": StageAssignment.uniform(alternative),
        "D": StageAssignment.channel_stage_only(alternative),
    }
    tables = {}
    # one stream for all placements: same messages and noise in every configuration
    for label, assignment in placements.items():
        config = PolarCodeConfig.build(signal_set, n, assignment)
        tables[label] = genie_reliabilities(config, params, trials, seed, threads=threads)
    comparison = PlacementComparison(tables)
    log.info(
        "placement agreement A~B=%.3f C~D=%.3f",
        comparison.agreement("A", "B"),
        comparison.agreement("C", "D"),
    )
    return comparison


def log2_length(length: int) -> int:
    n = int(round(math.log2(length))) if length > 0 else -1
    if n < 1 or (1 << n) != length:
        raise DomainError(f"code length must be a power of two >= 2, got {length}")
    return n
