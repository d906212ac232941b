from __future__ import annotations

import csv
import logging
import sys
from pathlib import Path
from typing import IO, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from ..constants import BOUND_COLUMNS, RELIABILITY_COLUMNS, SIM_COLUMNS, SPECTRUM_COLUMNS
from .polar import ReliabilityTable
from .sim import SimResult
from .spectrum import DistanceSpectrum

log = logging.getLogger("polarkit.io")

Cell = Union[int, float, str, None]
Target = Union[str, Path, IO[str], None]


def format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.6g" % value
    return str(value)


def spectrum_rows(spectrum: DistanceSpectrum) -> List[Tuple[Cell, ...]]:
    return [(d, count) for d, count in spectrum.lines()]


def bound_rows(curve: Iterable[Tuple[float, float]]) -> List[Tuple[Cell, ...]]:
    return [(snr_db, value) for snr_db, value in curve]


def sim_rows(result: SimResult) -> List[Tuple[Cell, ...]]:
    return [(p.snr_db, p.trials, p.errors, p.rate, p.ci_lo, p.ci_hi, p.bound) for p in result.points]


def reliability_rows(table: ReliabilityTable) -> List[Tuple[Cell, ...]]:
    return table.rows()


def write_csv(columns: Sequence[str], rows: Iterable[Sequence[Cell]], target: Target = None) -> None:
    """Write a header and rows; ``None`` means stdout."""
    if target is None or hasattr(target, "write"):
        _write_rows(target or sys.stdout, columns, rows)
        return
    path = Path(target)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        _write_rows(handle, columns, rows)
    log.info("wrote %s", path)


def _write_rows(handle: IO[str], columns: Sequence[str], rows: Iterable[Sequence[Cell]]) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])


def write_json(document: BaseModel, target: Target = None) -> None:
    text = document.model_dump_json(indent=2) + "\n"
    if target is None or hasattr(target, "write"):
        (target or sys.stdout).write(text)
        return
    path = Path(target)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info("wrote %s", path)


def campaign_path(out_dir: Union[str, Path], campaign: str, role: str, suffix: str = "csv") -> Path:
    """``<out_dir>/<campaign>.<role>.<suffix>``."""
    return Path(out_dir) / f"{campaign}.{role}.{suffix}"


def write_sim_result(result: SimResult, target: Target = None) -> None:
    write_csv(SIM_COLUMNS, sim_rows(result), target)


def write_spectrum(spectrum: DistanceSpectrum, target: Target = None) -> None:
    write_csv(SPECTRUM_COLUMNS, spectrum_rows(spectrum), target)


def write_bound(curve: Iterable[Tuple[float, float]], target: Target = None) -> None:
    write_csv(BOUND_COLUMNS, bound_rows(curve), target)


def write_reliabilities(table: ReliabilityTable, target: Optional[Target] = None) -> None:
    write_csv(RELIABILITY_COLUMNS, reliability_rows(table), target)
