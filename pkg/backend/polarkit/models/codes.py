from typing import Any, List

from pydantic import BaseModel, ConfigDict, Field

from .kernels import KernelFile
from .signalsets import SignalSetFile


class PolarCodeDocument(BaseModel):
    """A polar code with its stage kernels, signal set and frozen indices."""

    model_config = ConfigDict(extra="forbid")

    q: int = Field(ge=2)
    n: int = Field(ge=1, le=16)
    N: int = Field(ge=2)
    K: int = Field(ge=0)
    stage_kernels: List[KernelFile] = Field(min_length=1)
    signal_set: SignalSetFile
    frozen: List[int] = Field(default_factory=list)
    frozen_value: int = Field(default=0, ge=0)

    @classmethod
    def from_config(cls, config: Any) -> "PolarCodeDocument":
        signal_set = config.signal_set
        return cls(
            q=config.q,
            n=config.n,
            N=config.length,
            K=config.length - len(config.frozen),
            stage_kernels=[KernelFile(q=k.q, table=k.table.tolist(), name=k.name) for k in config.stage_kernels],
            signal_set=SignalSetFile(
                points=signal_set.points.tolist(),
                es=signal_set.es,
                name=signal_set.name,
                q=signal_set.q,
                dimension=signal_set.dimension,
            ),
            frozen=sorted(config.frozen),
            frozen_value=config.frozen_value,
        )
