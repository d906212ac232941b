"""Block-partitioned Monte Carlo execution.

Trials are cut into fixed-size blocks; block ``b`` of stream ``s`` always
draws from ``make_rng(seed, s, b)``. Blocks run on a thread pool and are
merged in block order, so results do not depend on the worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from ..config import BLOCK_TRIALS, DEFAULT_THREADS
from ..errors import DomainError

log = logging.getLogger("polarkit.montecarlo")

T = TypeVar("T")

# blocks scheduled between early-stop checks; fixed so the stopping block never depends on threads
WAVE_BLOCKS = 16


def block_sizes(trials: int, block_trials: int = BLOCK_TRIALS) -> List[int]:
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if block_trials < 1:
        raise DomainError(f"block size must be >= 1, got {block_trials}")
    full, rest = divmod(trials, block_trials)
    return [block_trials] * full + ([rest] if rest else [])


def run_blocks(
    task: Callable[[int, int], T],
    sizes: Sequence[int],
    *,
    threads: Optional[int] = None,
    errors_of: Optional[Callable[[T], int]] = None,
    early_stop: Optional[int] = None,
) -> List[T]:
    """Run ``task(block_index, size)`` for each block and return results in block order.

    With ``early_stop`` the list is cut after the first block at which the
    running error count reaches the threshold.
    """
    workers = max(1, int(threads or DEFAULT_THREADS))
    stopping = early_stop is not None and errors_of is not None
    wave = WAVE_BLOCKS if stopping else max(1, len(sizes))
    results: List[T] = []
    errors = 0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, len(sizes), wave):
            indices = range(start, min(start + wave, len(sizes)))
            wave_results = list(pool.map(lambda b: task(b, sizes[b]), indices))
            if not stopping:
                results.extend(wave_results)
                continue
            for result in wave_results:
                results.append(result)
                errors += errors_of(result)
                if errors >= early_stop:
                    log.debug("early stop after %s blocks with %s errors", len(results), errors)
                    return results
    return results
