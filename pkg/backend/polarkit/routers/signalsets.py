from __future__ import annotations

import logging

from fastapi import APIRouter, HTTPException, status

from ..coding.presets import is_preset, parse_signal_set
from ..coding.signal_set import min_distance
from ..constants import SIGNALSETS_PREFIX
from ..errors import DomainError
from ..models import SignalSetModel

log = logging.getLogger("polarkit.signalsets.router")

router = APIRouter(prefix=SIGNALSETS_PREFIX, tags=["signalsets"])


@router.get("/{preset}", response_model=SignalSetModel)
def get_signal_set(preset: str):
    # named presets only; point files are a command-line feature
    if not is_preset(preset):
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=f"unknown preset {preset!r}")
    try:
        signal_set = parse_signal_set(preset)
    except DomainError as exc:
        log.warning("preset rejected: %s", exc)
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(exc))
    model = SignalSetModel.model_validate(signal_set)
    model.min_distance = min_distance(signal_set)
    return model
