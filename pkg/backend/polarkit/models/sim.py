from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict


class SimPointModel(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    snr_db: float
    trials: int
    errors: int
    rate: float
    ci_lo: float
    ci_hi: float
    bound: Optional[float] = None


class SimResultModel(BaseModel):
    """Monte Carlo campaign result with full metadata."""

    model_config = ConfigDict(from_attributes=True)

    role: str
    points: List[SimPointModel]
    metadata: Dict[str, Any]


class ReliabilityTableModel(BaseModel):
    trials: int
    snr_db: float
    error_rates: List[float]
    stderr: List[float]
    information_set: Optional[List[int]] = None

    @classmethod
    def from_table(cls, table: Any, information_set: Optional[List[int]] = None) -> "ReliabilityTableModel":
        return cls(
            trials=table.trials,
            snr_db=table.snr_db,
            error_rates=[float(v) for v in table.error_rates],
            stderr=[float(v) for v in table.stderr],
            information_set=information_set,
        )


class PlacementComparisonModel(BaseModel):
    """Genie reliabilities of the A/B/C/D kernel placements with CI agreement fractions."""

    special: str
    alternative: str
    agreement_ab: float
    agreement_cd: float
    tables: Dict[str, ReliabilityTableModel]
