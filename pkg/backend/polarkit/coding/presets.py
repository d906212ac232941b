"""Parsing of the textual forms used on the command line and over HTTP."""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Union

from pydantic import ValidationError

from ..constants import DISTANCE_RTOL, PRESET_PAM3_EQ, PRESET_PSK_PREFIX, PRESET_QUAD_EQ, PRESETS
from ..errors import DomainError
from ..models.codes import PolarCodeDocument
from ..models.kernels import KernelFile
from ..models.signalsets import SignalSetFile
from .kernel import Kernel, Permutation, identity_permutation, kernel_from_table, permutation_kernel, reed_solomon_kernel
from .polar import PolarCodeConfig
from .signal_set import SignalSet, equidistant_pam3, equidistant_quad, from_points, min_distance, psk

log = logging.getLogger("polarkit.presets")


def is_preset(text: str) -> bool:
    value = text.strip()
    return value.startswith(PRESET_PSK_PREFIX) or value in PRESETS


def parse_signal_set(text: str) -> SignalSet:
    """``psk:<q>``, ``quad-eq``, ``pam3-eq`` or a path to a JSON point list."""
    value = text.strip()
    if value.startswith(PRESET_PSK_PREFIX):
        order = value[len(PRESET_PSK_PREFIX):]
        try:
            q = int(order)
        except ValueError:
            raise DomainError(f"malformed PSK preset {text!r}; expected psk:<q>") from None
        return psk(q)
    if value == PRESET_QUAD_EQ:
        return equidistant_quad()
    if value == PRESET_PAM3_EQ:
        return equidistant_pam3()
    path = Path(value)
    if path.suffix == ".json" and path.is_file():
        return load_signal_set(path)
    raise DomainError(f"unknown signal set {text!r}; use psk:<q>, quad-eq, pam3-eq or a .json file")


def load_signal_set(path: Union[str, Path]) -> SignalSet:
    try:
        document = SignalSetFile.model_validate_json(Path(path).read_text())
    except (OSError, ValidationError) as exc:
        raise DomainError(f"cannot read signal set from {path}: {exc}") from exc
    signal_set = from_points(document.points, es=document.es, name=document.name or Path(path).stem)
    if document.min_distance is not None:
        derived = min_distance(signal_set)
        if not math.isclose(document.min_distance, derived, rel_tol=DISTANCE_RTOL):
            raise DomainError(f"min_distance {document.min_distance!r} in {path} does not match the points ({derived!r})")
    return signal_set


def load_kernel(path: Union[str, Path]) -> Kernel:
    """Kernel from a ``{q, table}`` document such as ``kernel --out`` writes."""
    try:
        document = KernelFile.model_validate_json(Path(path).read_text())
    except (OSError, ValidationError) as exc:
        raise DomainError(f"cannot read kernel from {path}: {exc}") from exc
    return kernel_from_table(document.table, name=document.name or Path(path).stem)


def load_code_config(path: Union[str, Path]) -> PolarCodeConfig:
    try:
        document = PolarCodeDocument.model_validate_json(Path(path).read_text())
    except (OSError, ValidationError) as exc:
        raise DomainError(f"cannot read polar code from {path}: {exc}") from exc
    if document.N != 1 << document.n:
        raise DomainError(f"N={document.N} does not match n={document.n}")
    if document.K != document.N - len(set(document.frozen)):
        raise DomainError(f"K={document.K} does not match {len(set(document.frozen))} frozen indices")
    kernels = tuple(kernel_from_table(k.table, name=k.name or "custom") for k in document.stage_kernels)
    s = document.signal_set
    return PolarCodeConfig(
        q=document.q,
        n=document.n,
        stage_kernels=kernels,
        signal_set=from_points(s.points, es=s.es, name=s.name or "custom"),
        frozen=frozenset(document.frozen),
        frozen_value=document.frozen_value,
    )


def parse_permutation(text: Union[str, Sequence[int]], q: int) -> Permutation:
    """``identity`` or comma-separated images such as ``0,2,4,1,3``."""
    if isinstance(text, str):
        value = text.strip()
        if value == "identity":
            return identity_permutation(q)
        try:
            image = [int(part) for part in value.split(",") if part.strip()]
        except ValueError:
            raise DomainError(f"malformed permutation {text!r}") from None
    else:
        image = [int(v) for v in text]
    if len(image) != q:
        raise DomainError(f"permutation {list(image)} has {len(image)} entries, signal set has q={q}")
    return Permutation(q, tuple(image))


def resolve_kernel(
    q: int,
    pi: Optional[Union[str, Sequence[int]]] = None,
    gamma: Optional[int] = None,
    table: Optional[Sequence[Sequence[int]]] = None,
) -> Kernel:
    """At most one of ``pi``, ``gamma`` and ``table``; none gives the standard kernel."""
    given = [name for name, value in (("pi", pi), ("gamma", gamma), ("table", table)) if value is not None]
    if len(given) > 1:
        raise DomainError(f"give only one of pi, gamma, table (got {', '.join(given)})")
    if gamma is not None:
        return reed_solomon_kernel(q, int(gamma))
    if table is not None:
        kernel = kernel_from_table(table)
        if kernel.q != q:
            raise DomainError(f"kernel table has q={kernel.q}, signal set has q={q}")
        return kernel
    return permutation_kernel(q, parse_permutation(pi if pi is not None else "identity", q))


def parse_snr_grid(text: str) -> List[float]:
    """``start:stop:step`` (stop included), a comma list, or one value."""
    value = text.strip()
    try:
        if ":" in value:
            start, stop, step = (float(part) for part in value.split(":"))
        else:
            grid = [float(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise DomainError(f"malformed SNR grid {text!r}") from None
    if ":" in value:
        if step <= 0 or stop < start:
            raise DomainError(f"SNR grid {text!r} needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(count)]
    if not grid:
        raise DomainError("SNR grid is empty")
    return grid

