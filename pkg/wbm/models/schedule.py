"""
Finite-difference schedules.
"""

from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from wbm.config import settings


class FDSchedule(BaseModel):
    """Decreasing step grid for one-sided difference quotients."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    epsilons: Tuple[float, ...] = Field(..., min_length=3, description="Decreasing positive steps")
    extrapolation: int = Field(3, ge=1, description="Richardson window length (levels)")
    two_sided: bool = Field(
        True, description="Compare coarse-half and fine-half estimates and flag disagreement"
    )
    coupling: Literal["diagonal", "product"] = Field(
        "diagonal", description="s=t coupling or (s,t) product grid for second differences"
    )

    @field_validator("epsilons")
    @classmethod
    def validate_epsilons(cls, v):
        if any(e <= 0 for e in v):
            raise ValueError("All epsilons must be positive")
        if any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError("Epsilons must be strictly decreasing")
        ratios = [a / b for a, b in zip(v, v[1:])]
        if max(ratios) - min(ratios) > 1e-9 * max(ratios):
            raise ValueError("Epsilons must form a geometric grid")
        return tuple(float(e) for e in v)

    @classmethod
    def default(cls, **overrides) -> "FDSchedule":
        eps = tuple(settings.FD_EPS0 * 2.0**-k for k in range(settings.FD_LEVELS))
        params = {"epsilons": eps, "extrapolation": settings.FD_RICHARDSON_LEVELS}
        params.update(overrides)
        return cls(**params)

    @property
    def ratio(self) -> float:
        """Common ratio of a geometric grid."""
        return self.epsilons[0] / self.epsilons[1]
