"""
Run-level models: random body generators and CLI run configuration.
"""

from enum import Enum
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from wbm.config import settings


class BodyFamily(str, Enum):
    POLYGON = "polygon"
    ZONOTOPE = "zonotope"
    BALL = "ball"
    SEGMENT = "segment"
    INTERVAL = "interval"


class SearchDirection(str, Enum):
    """Verdict a counterexample search is looking for."""

    VIOLATED = "violated"
    HOLDS = "holds"


class BodyClass(str, Enum):
    """Class predicate the generated bodies must satisfy."""

    ANY = "any"
    SYMMETRIC = "symmetric"
    CONTAINS_ORIGIN = "contains_origin"
    SYMMETRIC_ABOUT_CENTER_CONTAINS_ORIGIN = "symmetric_about_center_contains_origin"


class GeneratorConfig(BaseModel):
    """Random convex body generator parameters."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: BodyFamily = Field(BodyFamily.POLYGON, description="Body family")
    body_class: BodyClass = Field(BodyClass.ANY, description="Class predicate")
    dim: int = Field(2, ge=1, description="Ambient dimension")
    k_range: Tuple[int, int] = Field((4, 10), description="Number of hull points (polygons)")
    m_range: Tuple[int, int] = Field((2, 4), description="Number of generators (zonotopes)")
    box: float = Field(1.0, gt=0, description="Half-width of the sampling box")
    radius_range: Tuple[float, float] = Field((0.2, 1.5), description="Ball radius range")
    dilation_range: Optional[Tuple[float, float]] = Field(
        None, description="Random dilation applied after sampling"
    )

    @model_validator(mode="after")
    def validate_ranges(self):
        for lo, hi in (self.k_range, self.m_range, self.radius_range):
            if lo > hi:
                raise ValueError("Range bounds must be ordered")
        if self.family == BodyFamily.POLYGON and self.dim != 2:
            raise ValueError("Polygon family is planar")
        if self.family == BodyFamily.INTERVAL and self.dim != 1:
            raise ValueError("Interval family lives in R^1")
        return self


class RunConfig(BaseModel):
    """Effective configuration of a CLI run, echoed into report headers."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    subcommand: Literal["body", "measure", "surface", "mixed", "check", "search", "convexfn", "repro"]
    seed: int = Field(settings.SEED, ge=0, lt=2**64, description="Master seed")
    out: Optional[str] = Field(None, description="Output path; stdout when absent")
    format: Literal["csv", "json"] = Field("csv", description="Output format")
    budget: Optional[int] = Field(None, ge=1, description="Search or sweep budget")
    tolerance_scale: float = Field(1.0, gt=0, description="Multiplier on verdict error budgets")

    def header(self) -> dict:
        return self.model_dump(exclude_none=True)
