from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from ..constants import ROLE_GOOD

Command = Literal["signalset", "kernel", "spectrum", "bound", "search", "simulate", "construct", "fer", "serve"]


class CampaignConfig(BaseModel):
    """Declarative mirror of the subcommand flags; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")

    command: Optional[Command] = None
    set: Optional[str] = None
    pi: Optional[Union[str, List[int]]] = None
    gamma: Optional[int] = None
    kernel: Optional[str] = None
    q: Optional[int] = Field(default=None, ge=2)
    alt_pi: Optional[Union[str, List[int]]] = None
    role: str = ROLE_GOOD
    snr_db: Optional[Union[List[float], float, str]] = None
    trials: int = Field(default=10_000, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    threads: Optional[int] = Field(default=None, ge=1)
    out: Optional[str] = None
    format: Optional[Literal["json", "csv"]] = None
    campaign: str = "campaign"
    u1: Optional[int] = Field(default=None, ge=0)
    u2: Optional[int] = Field(default=None, ge=0)
    all_optima: bool = False
    design: Optional[Literal["quad", "pam3"]] = None
    n: int = Field(default=8, ge=1, le=16)
    K: Optional[int] = Field(default=None, ge=0)
    placement: Literal["channel-stage", "all-stages", "all-standard"] = "channel-stage"
    construction_snr_db: Optional[float] = None
    construction_trials: Optional[int] = Field(default=None, ge=1)
    early_stop: bool = False
    compare_placements: bool = False
    save_code: Optional[str] = None
    code: Optional[str] = None
    host: Optional[str] = None
    port: Optional[int] = Field(default=None, ge=1, le=65535)
