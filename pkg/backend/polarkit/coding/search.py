from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np
from scipy.optimize import bisect, brentq

from ..config import SEARCH_MAX_Q
from ..constants import CERT_ALMOST_EQUIDISTANT, CERT_BEST_FOUND, CERT_EQUIDISTANT
from ..errors import DomainError, SearchRefusedError
from .kernel import Permutation, permutation_kernel
from .signal_set import SignalSet, distance_matrix, pam3_from_gaps, rotated_quad
from .spectrum import DistanceSpectrum, good_spectrum, is_equidistant

log = logging.getLogger("polarkit.search")

BATCH_CANDIDATES = 2048
_ROUND_DECIMALS = 9


@dataclass(frozen=True)
class SearchResult:
    best_pi: Permutation
    spectrum: DistanceSpectrum
    certificate: str
    explored: int
    optima: Tuple[Permutation, ...] = field(default=())


def _candidates(q: int, canonical: bool) -> Iterator[Tuple[int, ...]]:
    if canonical:
        for tail in itertools.permutations(range(1, q)):
            yield (0,) + tail
    else:
        yield from itertools.permutations(range(q))


def _batches(iterator: Iterator[Tuple[int, ...]], size: int) -> Iterator[np.ndarray]:
    while True:
        chunk = list(itertools.islice(iterator, size))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.int64)


def _sorted_rows(dist: np.ndarray, perms: np.ndarray, es: float) -> np.ndarray:
    """Ascending good-channel squared distances per (candidate, u1, u2), shape (M, q*q, q-1)."""
    m, q = perms.shape
    u = np.arange(q)
    tables = (u[None, :, None] + perms[:, None, :]) % q  # (M, u1, u2)
    grid = dist[tables[:, :, :, None], tables[:, :, None, :]] + dist[None, None, :, :]
    grid = grid / es
    eye = np.eye(q, dtype=bool)[None, None, :, :]
    grid = np.where(eye, np.inf, grid)
    rows = np.sort(grid, axis=-1)[..., : q - 1]
    return np.round(rows.reshape(m, q * q, q - 1), _ROUND_DECIMALS)


def _rank_codes(rows: np.ndarray) -> Optional[np.ndarray]:
    """Encode each sorted row as one integer preserving lexicographic order."""
    values, ranks = np.unique(rows, return_inverse=True)
    ranks = ranks.reshape(rows.shape)
    base = len(values)
    width = rows.shape[-1]
    if base ** width >= 2**62:
        return None
    weights = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (ranks.astype(np.int64) * weights).sum(axis=-1)


def _worst_rows(rows: np.ndarray) -> Tuple[np.ndarray, List[Tuple[float, ...]]]:
    """Per candidate: index of the worst reference and its row as a tuple."""
    codes = _rank_codes(rows)
    if codes is not None:
        worst_idx = codes.argmin(axis=1)
    else:
        worst_idx = np.array([min(range(r.shape[0]), key=lambda i: tuple(r[i])) for r in rows])
    worst = [tuple(rows[k, worst_idx[k]]) for k in range(rows.shape[0])]
    return worst_idx, worst


def _certificate(signal_set: SignalSet, pi: Permutation, worst: DistanceSpectrum) -> str:
    q = signal_set.q
    if is_equidistant(signal_set, permutation_kernel(q, pi)):
        return CERT_EQUIDISTANT
    # one competitor pushed off the minimum-distance line
    if q > 2 and worst.n_min == q - 2:
        return CERT_ALMOST_EQUIDISTANT
    return CERT_BEST_FOUND


def search_permutations(
    signal_set: SignalSet,
    *,
    canonical: bool = True,
    all_optima: bool = False,
    max_q: int = SEARCH_MAX_Q,
) -> SearchResult:
    """Exhaustive search of u1 + pi(u2) kernels for the best worst-reference good spectrum.

    Spectra are ranked by their ascending squared distances compared
    lexicographically (larger d_min first, then fewer neighbours at d_min,
    and so on); ties go to the lexicographically smallest pi. With
    ``canonical`` only pi(0) = 0 is enumerated, which loses nothing because
    adding a constant to pi only reorders the kernel rows.
    """
    q = signal_set.q
    if q > max_q:
        raise SearchRefusedError(
            f"exhaustive search over {math.factorial(q - 1)} permutations for q={q} exceeds q <= {max_q}; "
            "restrict to smaller alphabets or raise POLARKIT_SEARCH_MAX_Q"
        )
    dist = distance_matrix(signal_set)
    best_key: Optional[Tuple[float, ...]] = None
    best_pi: Optional[Tuple[int, ...]] = None
    best_ref = (0, 0)
    optima: List[Tuple[int, ...]] = []
    explored = 0
    for perms in _batches(_candidates(q, canonical), BATCH_CANDIDATES):
        rows = _sorted_rows(dist, perms, signal_set.es)
        worst_idx, worst = _worst_rows(rows)
        for k, key in enumerate(worst):
            if best_key is None or key > best_key:
                best_key, best_pi = key, tuple(int(v) for v in perms[k])
                best_ref = divmod(int(worst_idx[k]), q)
                optima = [best_pi]
            elif all_optima and key == best_key:
                optima.append(tuple(int(v) for v in perms[k]))
        explored += len(perms)
        log.debug("search q=%s explored=%s best=%s", q, explored, best_pi)

    pi = Permutation(q, best_pi)
    spectrum = good_spectrum(signal_set, permutation_kernel(q, pi), *best_ref)
    certificate = _certificate(signal_set, pi, spectrum)
    log.info(
        "search set=%s explored=%s best_pi=%s d_min=%.6g N=%s certificate=%s",
        signal_set.name, explored, pi.image, spectrum.d_min, spectrum.n_min, certificate,
    )
    return SearchResult(
        best_pi=pi,
        spectrum=spectrum,
        certificate=certificate,
        explored=explored,
        optima=tuple(Permutation(q, p) for p in optima) if all_optima else (pi,),
    )


def brute_force_optimum(signal_set: SignalSet) -> SearchResult:
    """Reference search over all q! permutations without canonicalization."""
    return search_permutations(signal_set, canonical=False, all_optima=True)


def quad_residual(x: float) -> float:
    """||s0-s1||^2 + ||s0-s2||^2 - 2||s0-s3||^2 on the rotated 4-point family (Es = 1)."""
    dist = distance_matrix(rotated_quad(x))
    return float(dist[0, 1] + dist[0, 2] - 2.0 * dist[0, 3])


def optimize_quad_rotation(tol: float = 1e-12) -> Tuple[float, SignalSet]:
    """Rotation making u1 + pi(u2), pi = (0, 2, 1, 3), equidistant on the 4-point family."""
    lo, hi = 0.5, 1.9
    x = brentq(quad_residual, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    oracle = bisect(quad_residual, lo, hi, xtol=1e-15)
    closed_form = 2.0 / math.sqrt(3.0)
    if abs(x - oracle) > tol or abs(x - closed_form) > tol:
        raise DomainError(f"rotation solve disagrees: brentq={x!r} bisect={oracle!r} closed={closed_form!r}")
    return x, rotated_quad(x)


def pam3_residual(ratio: float) -> float:
    """||s0-s1||^2 + ||s0-s2||^2 - 2||s1-s2||^2 for gaps alpha = 1, beta = ratio."""
    dist = distance_matrix(pam3_from_gaps(1.0, ratio))
    return float(dist[0, 1] + dist[0, 2] - 2.0 * dist[1, 2])


def optimize_pam3_shift(tol: float = 1e-12) -> Tuple[float, SignalSet]:
    """Gap ratio beta/alpha making pi = (0, 2, 1) equidistant at u1 = 0 on collinear 3-point sets."""
    lo, hi = 1.0, 4.0
    ratio = brentq(pam3_residual, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    oracle = bisect(pam3_residual, lo, hi, xtol=1e-15)
    closed_form = 1.0 + math.sqrt(3.0)
    if abs(ratio - oracle) > tol or abs(ratio - closed_form) > tol:
        raise DomainError(f"shift solve disagrees: brentq={ratio!r} bisect={oracle!r} closed={closed_form!r}")
    return ratio, pam3_from_gaps(1.0, ratio)
