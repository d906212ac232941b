from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..constants import ROLE_GOOD


class SpectrumLineModel(BaseModel):
    d_over_sqrt_es: float
    count: int


class SpectrumModel(BaseModel):
    channel_role: str
    reference: Tuple[int, int]
    d_min: float
    n_min: int
    lines: List[SpectrumLineModel]

    @classmethod
    def from_spectrum(cls, spectrum: Any) -> "SpectrumModel":
        return cls(
            channel_role=spectrum.channel_role,
            reference=spectrum.reference,
            d_min=spectrum.d_min,
            n_min=spectrum.n_min,
            lines=[SpectrumLineModel(d_over_sqrt_es=d, count=c) for d, c in spectrum.lines()],
        )


class SpectrumReportModel(BaseModel):
    """Summary of all q^2 reference spectra."""

    channel_role: str
    signal_set: str
    kernel: str
    uniform: bool
    probe_snr_db: float
    worst_reference: Tuple[int, int]
    worst: SpectrumModel
    d_min: float
    n_min: int

    @classmethod
    def from_report(cls, report: Any, signal_set: str, kernel: str) -> "SpectrumReportModel":
        worst = SpectrumModel.from_spectrum(report.worst)
        return cls(
            channel_role=report.channel_role,
            signal_set=signal_set,
            kernel=kernel,
            uniform=report.uniform,
            probe_snr_db=report.probe_snr_db,
            worst_reference=report.worst_reference,
            worst=worst,
            d_min=worst.d_min,
            n_min=worst.n_min,
        )


class SpectrumRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    set: str
    pi: Optional[str] = None
    gamma: Optional[int] = None
    role: str = ROLE_GOOD
    u1: Optional[int] = None
    u2: Optional[int] = None


class BoundPointModel(BaseModel):
    snr_db: float
    pe_bound: float


class BoundRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    set: str
    pi: Optional[str] = None
    gamma: Optional[int] = None
    role: str = ROLE_GOOD
    snr_db: List[float] = Field(min_length=1)


class BoundResponse(BaseModel):
    signal_set: str
    kernel: str
    spectrum: SpectrumModel
    points: List[BoundPointModel]


class SearchRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    set: str
    all_optima: bool = False


class SearchResultModel(BaseModel):
    signal_set: str
    best_pi: List[int]
    certificate: str
    explored: int
    spectrum: SpectrumModel
    equidistant_bound: float
    optima: List[List[int]] = Field(default_factory=list)

    @classmethod
    def from_result(cls, result: Any, signal_set: str, equidistant_bound: float) -> "SearchResultModel":
        return cls(
            signal_set=signal_set,
            best_pi=list(result.best_pi.image),
            certificate=result.certificate,
            explored=result.explored,
            spectrum=SpectrumModel.from_spectrum(result.spectrum),
            equidistant_bound=equidistant_bound,
            optima=[list(p.image) for p in result.optima],
        )


class DesignModel(BaseModel):
    """Result of a one-parameter signal-set solve."""

    parameter: str
    value: float
    d_min: float
    n_min: int
    es: float
    points: List[List[float]]
    extra: Dict[str, Any] = Field(default_factory=dict)
