"""
Piecewise-linear convex functions on an interval.
"""

import math
from typing import Callable, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from wbm.exceptions import Negative, NotConvex

CONVEXITY_TOL = 1e-12


class ConvexPL(BaseModel):
    """Convex piecewise-linear interpolant of (breakpoints, values).

    Convexity is a finite check on slopes. When ``nonnegative`` is set the
    values must be >= 0 as well.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    breakpoints: Tuple[float, ...] = Field(..., min_length=2, description="Increasing x grid")
    values: Tuple[float, ...] = Field(..., min_length=2, description="Function values at breakpoints")
    nonnegative: bool = Field(False, description="Require h >= 0")

    @model_validator(mode="after")
    def validate_shape(self):
        if len(self.breakpoints) != len(self.values):
            raise ValueError("breakpoints and values must have equal length")
        x = np.asarray(self.breakpoints)
        if np.any(np.diff(x) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        slopes = np.diff(self.values) / np.diff(x)
        scale = max(1.0, float(np.max(np.abs(slopes))))
        if np.any(np.diff(slopes) < -CONVEXITY_TOL * scale):
            raise NotConvex("Piecewise-linear function is not convex", worst=float(np.min(np.diff(slopes))))
        if self.nonnegative and min(self.values) < 0:
            raise Negative("Function takes negative values", minimum=float(min(self.values)))
        return self

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], a: float, b: float, k: int = 65, **kw) -> "ConvexPL":
        """Interpolate a convex function on k equispaced nodes."""
        x = np.linspace(a, b, k)
        return cls(breakpoints=tuple(x.tolist()), values=tuple(np.asarray(fn(x), dtype=float).tolist()), **kw)

    @classmethod
    def linear(cls, a: float, b: float, ha: float, hb: float) -> "ConvexPL":
        return cls(breakpoints=(a, b), values=(ha, hb))

    # ------------------------------------------------------------------
    # Closed forms
    # ------------------------------------------------------------------

    @property
    def x(self) -> np.ndarray:
        return np.asarray(self.breakpoints, dtype=float)

    @property
    def y(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    @property
    def a(self) -> float:
        return self.breakpoints[0]

    @property
    def b(self) -> float:
        return self.breakpoints[-1]

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.y) / np.diff(self.x)

    def __call__(self, t):
        return np.interp(t, self.x, self.y)

    def arc_length(self) -> float:
        """L(h) = sum over pieces of sqrt(dx^2 + dy^2)."""
        return float(np.sum(np.hypot(np.diff(self.x), np.diff(self.y))))

    def weighted_arc_integral(self, weight_shift: float = 0.0) -> float:
        """Integral of (h - shift) * sqrt(1 + h'^2); exact per piece."""
        dx = np.diff(self.x)
        speed = np.sqrt(1.0 + self.slopes**2)
        trap = 0.5 * (self.y[:-1] + self.y[1:]) - weight_shift
        return float(np.sum(speed * dx * trap))

    def linear_interpolant(self) -> "ConvexPL":
        """h_lin: the chord between the endpoint values."""
        return ConvexPL.linear(self.a, self.b, self.values[0], self.values[-1])

    def shifted(self, c: float) -> "ConvexPL":
        return ConvexPL(breakpoints=self.breakpoints, values=tuple(v + c for v in self.values))

    def refined(self, factor: int = 2) -> "ConvexPL":
        """Same function on a finer grid."""
        pieces = [np.linspace(x0, x1, factor + 1)[:-1] for x0, x1 in zip(self.x[:-1], self.x[1:])]
        x = np.concatenate(pieces + [self.x[-1:]])
        return ConvexPL(breakpoints=tuple(x.tolist()), values=tuple(self(x).tolist()), nonnegative=self.nonnegative)

    def normalized(self) -> "ConvexPL":
        """h~ on [0,1] with h~(x) = h((b-a)x + a) / (b-a)."""
        width = self.b - self.a
        x = (self.x - self.a) / width
        return ConvexPL(
            breakpoints=tuple(x.tolist()), values=tuple((self.y / width).tolist()), nonnegative=self.nonnegative
        )

    def is_nonnegative(self) -> bool:
        return min(self.values) >= 0 and not math.isnan(min(self.values))
