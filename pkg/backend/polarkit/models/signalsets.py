from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


####################
# Signal set documents
####################


class SignalSetFile(BaseModel):
    """Signal set read from a JSON file: one coordinate list per label.

    ``q`` and ``dimension`` are optional and must agree with ``points``.
    ``min_distance`` is derived; it is accepted so that ``signalset`` output
    loads back, and checked against the points by the loader.
    """

    model_config = ConfigDict(extra="forbid")

    points: List[List[float]] = Field(min_length=2)
    es: Optional[float] = Field(default=None, gt=0)
    name: Optional[str] = None
    q: Optional[int] = Field(default=None, ge=2)
    dimension: Optional[int] = Field(default=None, ge=1, le=2)
    min_distance: Optional[float] = Field(default=None, gt=0)

    @field_validator("points", mode="before")
    @classmethod
    def _scalars_to_vectors(cls, value):
        if isinstance(value, list):
            return [p if isinstance(p, list) else [p] for p in value]
        return value

    @model_validator(mode="after")
    def _check_shape(self):
        if self.q is not None and self.q != len(self.points):
            raise ValueError(f"q={self.q} but {len(self.points)} points given")
        widths = {len(p) for p in self.points}
        if self.dimension is not None and widths != {self.dimension}:
            raise ValueError(f"dimension={self.dimension} but point widths are {sorted(widths)}")
        return self


class SignalSetModel(BaseModel):
    """Signal set response model"""

    model_config = ConfigDict(from_attributes=True)

    name: str
    q: int
    dimension: int
    es: float
    points: List[List[float]]
    min_distance: Optional[float] = None

    @field_validator("points", mode="before")
    @classmethod
    def _array_to_list(cls, value):
        return value.tolist() if hasattr(value, "tolist") else value
