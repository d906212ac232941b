from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import erfc

from ..config import PROBE_SNR_DB
from ..constants import DISTANCE_RTOL, ROLE_BAD, ROLE_GOOD
from ..errors import DomainError
from .kernel import Kernel
from .signal_set import SignalSet, distance_matrix

log = logging.getLogger("polarkit.spectrum")

Reference = Tuple[int, int]
SpectrumLine = Tuple[float, int]


@dataclass(frozen=True)
class DistanceSpectrum:
    """Multiset of competitor distances seen from one reference input.

    ``entries`` hold (squared distance / Es, count), ascending.
    """

    entries: Tuple[SpectrumLine, ...]
    reference: Reference
    channel_role: str

    @property
    def d_min(self) -> float:
        """Minimum distance in units of sqrt(Es)."""
        return math.sqrt(self.entries[0][0])

    @property
    def n_min(self) -> int:
        return self.entries[0][1]

    @property
    def total(self) -> int:
        return sum(count for _, count in self.entries)

    def lines(self) -> List[Tuple[float, int]]:
        """(d / sqrt(Es), count) pairs."""
        return [(math.sqrt(d_sq), count) for d_sq, count in self.entries]

    def same_lines(self, other: "DistanceSpectrum", tol: float = DISTANCE_RTOL) -> bool:
        if len(self.entries) != len(other.entries):
            return False
        return all(
            c1 == c2 and abs(d1 - d2) <= tol * max(1.0, d1)
            for (d1, c1), (d2, c2) in zip(self.entries, other.entries)
        )


@dataclass(frozen=True)
class SpectrumReport:
    channel_role: str
    spectra: Dict[Reference, DistanceSpectrum] = field(repr=False)
    worst_reference: Reference
    uniform: bool
    probe_snr_db: float

    @property
    def worst(self) -> DistanceSpectrum:
        return self.spectra[self.worst_reference]


def _check_pair(signal_set: SignalSet, kernel: Kernel) -> None:
    if signal_set.q != kernel.q:
        raise DomainError(f"signal set has q={signal_set.q} but kernel has q={kernel.q}")


def _check_symbols(q: int, *values: int) -> None:
    for value in values:
        if not isinstance(value, (int, np.integer)) or not 0 <= value < q:
            raise DomainError(f"symbol {value!r} out of range 0..{q - 1}")


def bin_distances(values: Iterable[float], rtol: float = DISTANCE_RTOL) -> Tuple[SpectrumLine, ...]:
    """Group nearly equal squared distances into (value, count) lines."""
    ordered = sorted(float(v) for v in values)
    lines: List[List[float]] = []
    for value in ordered:
        if lines and value - lines[-1][0] <= rtol * max(1.0, abs(lines[-1][0])):
            lines[-1].append(value)
        else:
            lines.append([value])
    return tuple((float(np.mean(group)), len(group)) for group in lines)


def good_distance_grid(signal_set: SignalSet, kernel: Kernel) -> np.ndarray:
    """Raw squared distances G[u1, u2, u2'] of the synthetic good channel."""
    _check_pair(signal_set, kernel)
    dist = distance_matrix(signal_set)
    table = kernel.table
    x1 = table[:, :, None]
    x1_alt = table[:, None, :]
    return dist[x1, x1_alt] + dist[None, :, :]


def good_distance(signal_set: SignalSet, kernel: Kernel, u1: int, u2: int, u2_alt: int) -> float:
    """d^2 = ||s_f(u1,u2) - s_f(u1,u2')||^2 + ||s_u2 - s_u2'||^2 for a known u1."""
    _check_pair(signal_set, kernel)
    _check_symbols(kernel.q, u1, u2, u2_alt)
    if u2 == u2_alt:
        raise DomainError("competitor u2' must differ from u2")
    dist = distance_matrix(signal_set)
    t = kernel.table
    return float(dist[t[u1, u2], t[u1, u2_alt]] + dist[u2, u2_alt])


def bad_distance(signal_set: SignalSet, kernel: Kernel, u1: int, u2: int, u1_alt: int, u2_alt: int) -> float:
    _check_pair(signal_set, kernel)
    _check_symbols(kernel.q, u1, u2, u1_alt, u2_alt)
    if u1 == u1_alt:
        raise DomainError("competitor u1' must differ from u1")
    dist = distance_matrix(signal_set)
    t = kernel.table
    return float(dist[t[u1, u2], t[u1_alt, u2_alt]] + dist[u2, u2_alt])


def good_spectrum(signal_set: SignalSet, kernel: Kernel, u1: int, u2: int) -> DistanceSpectrum:
    _check_pair(signal_set, kernel)
    _check_symbols(kernel.q, u1, u2)
    row = good_distance_grid(signal_set, kernel)[u1, u2]
    values = np.delete(row, u2) / signal_set.es
    return DistanceSpectrum(bin_distances(values), (int(u1), int(u2)), ROLE_GOOD)


def bad_spectrum(signal_set: SignalSet, kernel: Kernel, u1: int, u2: int) -> DistanceSpectrum:
    _check_pair(signal_set, kernel)
    _check_symbols(kernel.q, u1, u2)
    dist = distance_matrix(signal_set)
    t = kernel.table
    # D[u1', u2'] over all competitors
    grid = dist[t[u1, u2], t] + dist[u2][None, :]
    values = np.delete(grid, u1, axis=0).ravel() / signal_set.es
    return DistanceSpectrum(bin_distances(values), (int(u1), int(u2)), ROLE_BAD)


def good_spectra_all(signal_set: SignalSet, kernel: Kernel) -> Dict[Reference, DistanceSpectrum]:
    grid = good_distance_grid(signal_set, kernel) / signal_set.es
    q = kernel.q
    spectra: Dict[Reference, DistanceSpectrum] = {}
    for u1 in range(q):
        for u2 in range(q):
            values = np.delete(grid[u1, u2], u2)
            spectra[(u1, u2)] = DistanceSpectrum(bin_distances(values), (u1, u2), ROLE_GOOD)
    return spectra


def _spectra_for_role(signal_set: SignalSet, kernel: Kernel, role: str) -> Dict[Reference, DistanceSpectrum]:
    if role == ROLE_GOOD:
        return good_spectra_all(signal_set, kernel)
    if role == ROLE_BAD:
        q = kernel.q
        return {(u1, u2): bad_spectrum(signal_set, kernel, u1, u2) for u1 in range(q) for u2 in range(q)}
    raise DomainError(f"unknown channel role {role!r}")


def report(
    signal_set: SignalSet,
    kernel: Kernel,
    role: str = ROLE_GOOD,
    *,
    probe_snr_db: float = PROBE_SNR_DB,
) -> SpectrumReport:
    """Spectra for all q^2 references, the worst one under the union bound, and uniformity."""
    _check_pair(signal_set, kernel)
    spectra = _spectra_for_role(signal_set, kernel, role)
    probe = snr_db_to_linear(probe_snr_db)
    worst_reference = None
    worst_bound = -1.0
    for reference in sorted(spectra):
        bound = union_bound(spectra[reference], probe)
        if bound > worst_bound:
            worst_reference, worst_bound = reference, bound
    first = spectra[(0, 0)]
    uniform = all(first.same_lines(s) for s in spectra.values())
    log.debug(
        "report role=%s set=%s kernel=%s uniform=%s worst=%s",
        role, signal_set.name, kernel.name, uniform, worst_reference,
    )
    return SpectrumReport(
        channel_role=role,
        spectra=spectra,
        worst_reference=worst_reference,
        uniform=uniform,
        probe_snr_db=probe_snr_db,
    )


def is_equidistant(
    signal_set: SignalSet,
    kernel: Kernel,
    policy: str = "all-references",
    u1: Optional[int] = None,
) -> bool:
    """Every good-channel spectrum under the policy is one line of multiplicity q-1.

    ``policy`` is "all-references" or "fixed-u1" (with ``u1``); passing ``u1``
    alone selects the fixed-u1 policy.
    """
    spectra = good_spectra_all(signal_set, kernel)
    if u1 is not None or policy == "fixed-u1":
        if u1 is None:
            raise DomainError("fixed-u1 policy needs a u1 value")
        _check_symbols(kernel.q, u1)
        selected = [s for (a, _), s in spectra.items() if a == u1]
    elif policy == "all-references":
        selected = list(spectra.values())
    else:
        raise DomainError(f"unknown equidistance policy {policy!r}")
    return all(len(s.entries) == 1 and s.n_min == kernel.q - 1 for s in selected)


def is_group_matched(signal_set: SignalSet, atol: float = 1e-9) -> bool:
    """||s_{l+k} - s_l|| = ||s_k - s_0|| for all l, k (labels mod q)."""
    q = signal_set.q
    dist = distance_matrix(signal_set)
    idx = np.arange(q)
    shifted = dist[(idx[:, None] + idx[None, :]) % q, idx[:, None]]
    return bool(np.allclose(shifted, dist[idx, 0][None, :], atol=atol * max(1.0, signal_set.es)))


def conservation_sum(signal_set: SignalSet, kernel: Kernel, u1: int, u2: int) -> float:
    """Sum over all u2' of the good-channel squared distance from (u1, u2)."""
    _check_pair(signal_set, kernel)
    _check_symbols(kernel.q, u1, u2)
    if not is_group_matched(signal_set):
        log.warning("signal set %s is not group matched; distance conservation need not hold", signal_set.name)
    return float(good_distance_grid(signal_set, kernel)[u1, u2].sum())


def equidistant_bound(signal_set: SignalSet) -> float:
    """Upper limit on the good-channel d_min: sqrt(2/(q-1) * sum_k ||s_k - s_0||^2)."""
    q = signal_set.q
    total = float(distance_matrix(signal_set)[0, 1:].sum())
    return math.sqrt(2.0 * total / (q - 1))


def q_function(x):
    """Gaussian tail probability Q(x)."""
    value = 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(value) if np.ndim(value) == 0 else value


def snr_db_to_linear(snr_db: float) -> float:
    return 10.0 ** (float(snr_db) / 10.0)


def union_bound(spectrum: DistanceSpectrum, snr_linear: float) -> float:
    """Sum of N(d) * Q((d / sqrt(Es)) * sqrt(SNR / 2)) with SNR = Es/N0.

    The per-dimension noise variance is N0/2, so Q(d / (2 sigma_1)) reduces
    to the expression above.
    """
    if not snr_linear > 0:
        raise DomainError(f"SNR must be positive, got {snr_linear}")
    scale = math.sqrt(snr_linear / 2.0)
    return float(sum(count * q_function(math.sqrt(d_sq) * scale) for d_sq, count in spectrum.entries))


def bound_curve(spectrum: DistanceSpectrum, snr_db_list: Sequence[float]) -> List[Tuple[float, float]]:
    return [(float(snr_db), union_bound(spectrum, snr_db_to_linear(snr_db))) for snr_db in snr_db_list]
