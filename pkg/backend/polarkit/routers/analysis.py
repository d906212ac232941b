from __future__ import annotations

import logging

from fastapi import APIRouter, HTTPException

from ..coding.presets import is_preset, parse_signal_set, resolve_kernel
from ..coding.search import search_permutations
from ..coding.spectrum import bad_spectrum, bound_curve, equidistant_bound, good_spectrum, report
from ..constants import ANALYSIS_PREFIX, HTTP_CONTENT_TOO_LARGE, HTTP_UNPROCESSABLE_CONTENT, ROLE_BAD, ROLE_GOOD
from ..errors import DomainError, SearchRefusedError
from ..models import (
    BoundPointModel,
    BoundRequest,
    BoundResponse,
    SearchRequest,
    SearchResultModel,
    SpectrumModel,
    SpectrumReportModel,
    SpectrumRequest,
)

log = logging.getLogger("polarkit.analysis.router")

router = APIRouter(prefix=ANALYSIS_PREFIX, tags=["analysis"])


def _unprocessable(exc: DomainError) -> HTTPException:
    log.warning("request rejected: %s", exc)
    return HTTPException(status_code=HTTP_UNPROCESSABLE_CONTENT, detail=str(exc))


def _signal_set(set_name: str):
    if not is_preset(set_name):
        raise DomainError(f"unknown signal set {set_name!r}; use psk:<q>, quad-eq or pam3-eq")
    return parse_signal_set(set_name)


def _set_and_kernel(set_name: str, pi, gamma):
    signal_set = _signal_set(set_name)
    return signal_set, resolve_kernel(signal_set.q, pi=pi, gamma=gamma)


@router.post("/spectrum")
def spectrum(req: SpectrumRequest):
    try:
        signal_set, kernel = _set_and_kernel(req.set, req.pi, req.gamma)
        if req.role not in (ROLE_GOOD, ROLE_BAD):
            raise DomainError(f"role must be {ROLE_GOOD!r} or {ROLE_BAD!r}, got {req.role!r}")
        if req.u1 is not None or req.u2 is not None:
            single = good_spectrum if req.role == ROLE_GOOD else bad_spectrum
            return SpectrumModel.from_spectrum(single(signal_set, kernel, req.u1 or 0, req.u2 or 0))
        result = report(signal_set, kernel, req.role)
    except DomainError as exc:
        raise _unprocessable(exc)
    return SpectrumReportModel.from_report(result, signal_set.name, kernel.name)


@router.post("/bound", response_model=BoundResponse)
def bound(req: BoundRequest):
    try:
        signal_set, kernel = _set_and_kernel(req.set, req.pi, req.gamma)
        if req.role not in (ROLE_GOOD, ROLE_BAD):
            raise DomainError(f"role must be {ROLE_GOOD!r} or {ROLE_BAD!r}, got {req.role!r}")
        worst = report(signal_set, kernel, req.role).worst
        curve = bound_curve(worst, req.snr_db)
    except DomainError as exc:
        raise _unprocessable(exc)
    return BoundResponse(
        signal_set=signal_set.name,
        kernel=kernel.name,
        spectrum=SpectrumModel.from_spectrum(worst),
        points=[BoundPointModel(snr_db=s, pe_bound=p) for s, p in curve],
    )


@router.post("/search", response_model=SearchResultModel)
def search(req: SearchRequest):
    try:
        signal_set = _signal_set(req.set)
        result = search_permutations(signal_set, all_optima=req.all_optima)
    except SearchRefusedError as exc:
        log.error("search refused: %s", exc)
        raise HTTPException(status_code=HTTP_CONTENT_TOO_LARGE, detail=str(exc))
    except DomainError as exc:
        raise _unprocessable(exc)
    return SearchResultModel.from_result(result, signal_set.name, equidistant_bound(signal_set))
