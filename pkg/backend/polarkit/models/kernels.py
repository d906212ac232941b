from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class KernelRequest(BaseModel):
    """Kernel creation model: one of pi, gamma or table (none means standard)."""

    q: int
    pi: Optional[str] = None
    gamma: Optional[int] = None
    table: Optional[List[List[int]]] = None


class KernelModel(BaseModel):
    """Kernel response model"""

    model_config = ConfigDict(from_attributes=True)

    name: str
    q: int
    table: List[List[int]]
    valid: bool = True
    permutation: Optional[List[int]] = None
    notes: List[str] = Field(default_factory=list)

    @field_validator("table", mode="before")
    @classmethod
    def _array_to_list(cls, value):
        return value.tolist() if hasattr(value, "tolist") else value


class KernelFile(BaseModel):
    """Kernel read from a JSON file; ``kernel --out`` output loads as is."""

    q: int = Field(ge=2)
    table: List[List[int]] = Field(min_length=2)
    name: Optional[str] = None

    @model_validator(mode="after")
    def _check_square(self):
        if len(self.table) != self.q or any(len(row) != self.q for row in self.table):
            raise ValueError(f"table must be {self.q}x{self.q}")
        return self
