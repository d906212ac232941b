from .signalsets import SignalSetFile, SignalSetModel
from .kernels import KernelFile, KernelRequest, KernelModel
from .analysis import (
    BoundPointModel,
    BoundRequest,
    BoundResponse,
    DesignModel,
    SearchRequest,
    SearchResultModel,
    SpectrumLineModel,
    SpectrumModel,
    SpectrumReportModel,
    SpectrumRequest,
)
from .sim import PlacementComparisonModel, ReliabilityTableModel, SimPointModel, SimResultModel
from .codes import PolarCodeDocument
from .campaigns import CampaignConfig

__all__ = [
    # Signal sets
    "SignalSetFile",
    "SignalSetModel",

    # Kernels
    "KernelFile",
    "KernelRequest",
    "KernelModel",

    # Spectra, bounds, search
    "BoundPointModel",
    "BoundRequest",
    "BoundResponse",
    "DesignModel",
    "SearchRequest",
    "SearchResultModel",
    "SpectrumLineModel",
    "SpectrumModel",
    "SpectrumReportModel",
    "SpectrumRequest",

    # Monte Carlo
    "PlacementComparisonModel",
    "ReliabilityTableModel",
    "SimPointModel",
    "SimResultModel",

    # Codes
    "PolarCodeDocument",

    # CLI
    "CampaignConfig",
]
