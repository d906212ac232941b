from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..constants import ENERGY_RTOL
from ..errors import DomainError

log = logging.getLogger("polarkit.signal_set")


@dataclass(frozen=True, eq=False)
class SignalSet:
    """q labeled points in one or two real dimensions.

    Complex PSK points are stored as 2-D real vectors. ``es`` is the mean
    (not peak) squared norm of the points.
    """

    q: int
    dimension: int
    points: np.ndarray
    es: float
    name: str = field(default="custom")

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if self.q < 2:
            raise DomainError(f"signal set needs q >= 2, got {self.q}")
        if self.dimension not in (1, 2):
            raise DomainError(f"dimension must be 1 or 2, got {self.dimension}")
        if points.shape != (self.q, self.dimension):
            raise DomainError(
                f"expected {self.q} points of dimension {self.dimension}, got shape {points.shape}"
            )
        if not np.all(np.isfinite(points)):
            raise DomainError("signal points must be finite")
        energy = float(np.mean(np.sum(points**2, axis=1)))
        if not math.isclose(energy, self.es, rel_tol=ENERGY_RTOL, abs_tol=0.0):
            raise DomainError(f"mean energy {energy!r} does not match es={self.es!r}")
        gaps = _pairwise_sq(points)
        np.fill_diagonal(gaps, np.inf)
        if float(gaps.min()) <= 0.0:
            raise DomainError("signal points must be pairwise distinct")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "es", float(self.es))

    def allclose(self, other: "SignalSet", atol: float = 1e-12) -> bool:
        return (
            self.q == other.q
            and self.dimension == other.dimension
            and bool(np.allclose(self.points, other.points, rtol=0.0, atol=atol))
        )


def _pairwise_sq(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sum(diff**2, axis=-1)


def from_points(points, es: Optional[float] = None, name: str = "custom") -> SignalSet:
    """Build a set from raw coordinates; ``es`` defaults to the measured mean energy."""
    arr = np.array(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DomainError("points must be a list of coordinate vectors")
    measured = float(np.mean(np.sum(arr**2, axis=1)))
    return SignalSet(
        q=arr.shape[0],
        dimension=arr.shape[1],
        points=arr,
        es=measured if es is None else es,
        name=name,
    )


def psk(q: int, es: float = 1.0) -> SignalSet:
    if q < 2:
        raise DomainError(f"PSK needs q >= 2, got {q}")
    if not es > 0:
        raise DomainError(f"es must be positive, got {es}")
    angles = 2.0 * np.pi * np.arange(q) / q
    points = math.sqrt(es) * np.column_stack([np.cos(angles), np.sin(angles)])
    # mean energy is es up to rounding; keep the requested value exactly
    return SignalSet(q=q, dimension=2, points=points, es=es, name=f"psk:{q}")


def rotated_quad(x: float, es: float = 1.0) -> SignalSet:
    """4-point set on a circle with ||s0-s1|| = x*sqrt(es) and ||s0-s3|| = sqrt(4-x^2)*sqrt(es).

    s0 and s2 stay antipodal on the real axis; s1 and s3 are rotated by the
    same angle, so x = sqrt(2) is plain 4-PSK.
    """
    if not 0.0 < x < 2.0:
        raise DomainError(f"rotation parameter x must lie in (0, 2), got {x}")
    if not es > 0:
        raise DomainError(f"es must be positive, got {es}")
    cos_t = 1.0 - x * x / 2.0
    sin_t = math.sqrt(max(0.0, 1.0 - cos_t * cos_t))
    points = math.sqrt(es) * np.array(
        [[1.0, 0.0], [cos_t, sin_t], [-1.0, 0.0], [-cos_t, -sin_t]]
    )
    return SignalSet(q=4, dimension=2, points=points, es=es, name=f"quad-rot:{x:.12g}")


def equidistant_quad(es: float = 1.0) -> SignalSet:
    if not es > 0:
        raise DomainError(f"es must be positive, got {es}")
    r = 2.0 * math.sqrt(2.0) / 3.0
    points = math.sqrt(es) * np.array(
        [[1.0, 0.0], [1.0 / 3.0, r], [-1.0, 0.0], [-1.0 / 3.0, -r]]
    )
    return SignalSet(q=4, dimension=2, points=points, es=es, name="quad-eq")


def pam3_from_gaps(alpha: float, beta: float) -> SignalSet:
    """Collinear 3-point set with gaps alpha (s0-s1) and beta (s1-s2).

    s0 and s2 sit symmetrically about the origin.
    """
    if not (alpha > 0 and beta > 0):
        raise DomainError(f"gaps must be positive, got alpha={alpha}, beta={beta}")
    half = (alpha + beta) / 2.0
    points = np.array([[-half], [-half + alpha], [half]])
    return from_points(points, name=f"pam3:{beta / alpha:.12g}")


def equidistant_pam3() -> SignalSet:
    s = pam3_from_gaps(1.0, 1.0 + math.sqrt(3.0))
    return SignalSet(q=3, dimension=1, points=s.points, es=s.es, name="pam3-eq")


def normalize(signal_set: SignalSet, es: float) -> SignalSet:
    """Rescale a set to mean energy ``es``."""
    if not es > 0:
        raise DomainError(f"es must be positive, got {es}")
    scale = math.sqrt(es / signal_set.es)
    return SignalSet(
        q=signal_set.q,
        dimension=signal_set.dimension,
        points=signal_set.points * scale,
        es=es,
        name=signal_set.name,
    )


def _check_label(signal_set: SignalSet, label: int) -> int:
    if not isinstance(label, (int, np.integer)) or not 0 <= label < signal_set.q:
        raise DomainError(f"label {label!r} out of range 0..{signal_set.q - 1}")
    return int(label)


def distance_sq(signal_set: SignalSet, i: int, j: int) -> float:
    i = _check_label(signal_set, i)
    j = _check_label(signal_set, j)
    diff = signal_set.points[i] - signal_set.points[j]
    return float(np.dot(diff, diff))


def distance_matrix(signal_set: SignalSet) -> np.ndarray:
    """All pairwise squared distances, shape (q, q)."""
    return _pairwise_sq(signal_set.points)


def min_distance(signal_set: SignalSet) -> float:
    gaps = distance_matrix(signal_set)
    np.fill_diagonal(gaps, np.inf)
    return math.sqrt(float(gaps.min()))


def psk_standard_dmin(q: int, es: float = 1.0) -> float:
    """Good-channel minimum distance of q-PSK under the standard kernel."""
    if q < 2:
        raise DomainError(f"PSK needs q >= 2, got {q}")
    return 2.0 * math.sqrt(2.0) * math.sin(math.pi / q) * math.sqrt(es)
