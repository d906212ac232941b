from __future__ import annotations

import logging

from fastapi import APIRouter, HTTPException

from ..coding.kernel import gamma_notes, is_permutation_kernel, validate
from ..coding.presets import resolve_kernel
from ..constants import HTTP_UNPROCESSABLE_CONTENT, KERNELS_PREFIX
from ..errors import DomainError
from ..models import KernelModel, KernelRequest

log = logging.getLogger("polarkit.kernels.router")

router = APIRouter(prefix=KERNELS_PREFIX, tags=["kernels"])


@router.post("", response_model=KernelModel)
def create_kernel(req: KernelRequest):
    try:
        kernel = resolve_kernel(req.q, pi=req.pi, gamma=req.gamma, table=req.table)
    except DomainError as exc:
        log.warning("kernel rejected: %s", exc)
        raise HTTPException(status_code=HTTP_UNPROCESSABLE_CONTENT, detail=str(exc))
    pi = is_permutation_kernel(kernel)
    model = KernelModel.model_validate(kernel)
    model.valid = validate(kernel)
    model.permutation = list(pi.image) if pi is not None else None
    if req.gamma is not None:
        model.notes = gamma_notes(req.gamma)
    return model
