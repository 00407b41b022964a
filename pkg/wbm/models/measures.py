"""
Pydantic models for weighted measures.

Measure specification format:
    {"type": "lebesgue"} | {"type": "gaussian"} | {"type": "radial_power", "p": 2}
    | {"type": "radial_exp", "family": "power", "q": 1.5}
"""

import math
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator
from scipy.special import beta, gamma

from wbm.exceptions import DimensionMismatch


def sphere_area(n: int) -> float:
    """(n-1)-dimensional area of the unit sphere in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / gamma(n / 2.0)


def ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / gamma(n / 2.0 + 1.0)


class MeasureBase(BaseModel):
    """Density-based measure; ``dim`` is optional and checked against bodies."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dim: Optional[int] = Field(None, ge=1, description="Ambient dimension, if pinned")

    def check_dim(self, n: int) -> None:
        if self.dim is not None and self.dim != n:
            raise DimensionMismatch(f"Measure is defined on R^{self.dim}, body lives in R^{n}")

    def density(self, x: np.ndarray) -> np.ndarray:
        """Density at points x of shape (m, n)."""
        x = np.atleast_2d(x)
        r = np.linalg.norm(x, axis=1)
        return self.radial_profile(r, x.shape[1])

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """Density gradient at points x of shape (m, n)."""
        x = np.atleast_2d(x)
        n = x.shape[1]
        r = np.linalg.norm(x, axis=1)
        dv = self.radial_derivative(r, n)
        safe = np.where(r > 0, r, 1.0)
        factor = np.where(r > 0, dv / safe, 0.0)
        return factor[:, None] * x

    def radial_profile(self, r: np.ndarray, n: int) -> np.ndarray:
        raise NotImplementedError

    def radial_derivative(self, r: np.ndarray, n: int) -> np.ndarray:
        raise NotImplementedError

    def homogeneity_degree(self, n: int) -> Optional[float]:
        """alpha with mu(tK) = t^alpha mu(K), or None."""
        return None

    def total_mass(self, n: int) -> float:
        """mu(R^n); math.inf when the density is not integrable."""
        return math.inf

    @property
    def is_log_concave(self) -> bool:
        return False

    @property
    def is_constant(self) -> bool:
        return False

    def polynomial_degree(self) -> Optional[int]:
        """Degree of the density as a polynomial in x, or None."""
        return None

    def label(self) -> str:
        return self.type  # type: ignore[attr-defined]


class Lebesgue(MeasureBase):
    type: Literal["lebesgue"] = "lebesgue"

    def radial_profile(self, r, n):
        return np.ones_like(np.asarray(r, dtype=float))

    def radial_derivative(self, r, n):
        return np.zeros_like(np.asarray(r, dtype=float))

    def gradient(self, x):
        return np.zeros_like(np.atleast_2d(x), dtype=float)

    def homogeneity_degree(self, n):
        return float(n)

    @property
    def is_log_concave(self):
        return True

    @property
    def is_constant(self):
        return True

    def polynomial_degree(self):
        return 0


class Gaussian(MeasureBase):
    """Standard Gaussian measure, density (2 pi)^{-n/2} exp(-|x|^2 / 2)."""

    type: Literal["gaussian"] = "gaussian"

    def radial_profile(self, r, n):
        r = np.asarray(r, dtype=float)
        return (2.0 * math.pi) ** (-n / 2.0) * np.exp(-0.5 * r * r)

    def radial_derivative(self, r, n):
        r = np.asarray(r, dtype=float)
        return -r * self.radial_profile(r, n)

    def gradient(self, x):
        x = np.atleast_2d(x)
        return -x * self.density(x)[:, None]

    def total_mass(self, n):
        return 1.0

    @property
    def is_log_concave(self):
        return True

    def label(self):
        return "gaussian"


class RadialPower(MeasureBase):
    """Density |x|^p."""

    type: Literal["radial_power"] = "radial_power"
    p: float = Field(..., ge=0, description="Exponent of |x|")

    def radial_profile(self, r, n):
        r = np.asarray(r, dtype=float)
        if self.p == 0:
            return np.ones_like(r)
        return np.power(r, self.p)

    def radial_derivative(self, r, n):
        r = np.asarray(r, dtype=float)
        if self.p == 0:
            return np.zeros_like(r)
        safe = np.where(r > 0, r, 1.0)
        return np.where(r > 0, self.p * np.power(safe, self.p - 1.0), 0.0)

    def homogeneity_degree(self, n):
        return float(n) + self.p

    @property
    def is_constant(self):
        return self.p == 0

    @property
    def is_log_concave(self):
        return self.p == 0

    def polynomial_degree(self):
        if float(self.p).is_integer() and int(self.p) % 2 == 0:
            return int(self.p)
        return None

    def label(self):
        return f"radial_power(p={self.p:g})"


class RadialExp(MeasureBase):
    """Density exp(-W(|x|)) for a named increasing W.

    Families: gaussian W = r^2/2, power W = r^q (q >= 1), log W = c log(1 + r).
    """

    type: Literal["radial_exp"] = "radial_exp"
    family: Literal["gaussian", "power", "log"] = Field(..., description="Named W family")
    q: float = Field(1.0, ge=1.0, description="Exponent for the power family")
    c: float = Field(1.0, gt=0, description="Coefficient for the log family")

    @model_validator(mode="after")
    def validate_class_mn(self):
        t = np.linspace(-8.0, 8.0, 401)
        w = self.W(np.exp(t))
        if np.any(np.diff(w) < -1e-12):
            raise ValueError("W must be increasing")
        second = w[2:] - 2.0 * w[1:-1] + w[:-2]
        if np.any(second < -1e-9 * np.maximum(1.0, np.abs(w[1:-1]))):
            raise ValueError("t -> W(e^t) must be convex")
        return self

    def W(self, r):
        r = np.asarray(r, dtype=float)
        if self.family == "gaussian":
            return 0.5 * r * r
        if self.family == "power":
            return np.power(r, self.q)
        return self.c * np.log1p(r)

    def dW(self, r):
        r = np.asarray(r, dtype=float)
        if self.family == "gaussian":
            return r
        if self.family == "power":
            return self.q * np.power(r, self.q - 1.0)
        return self.c / (1.0 + r)

    def radial_profile(self, r, n):
        return np.exp(-self.W(r))

    def radial_derivative(self, r, n):
        return -self.dW(r) * self.radial_profile(r, n)

    def total_mass(self, n):
        if self.family == "gaussian":
            return (2.0 * math.pi) ** (n / 2.0)
        if self.family == "power":
            return sphere_area(n) * float(gamma(n / self.q)) / self.q
        # integral of r^(n-1) (1 + r)^(-c) is B(n, c - n)
        if self.c <= n:
            return math.inf
        return sphere_area(n) * float(beta(n, self.c - n))

    @property
    def is_log_concave(self):
        # W convex in r
        return self.family in ("gaussian", "power")

    def label(self):
        if self.family == "power":
            return f"radial_exp(power,q={self.q:g})"
        if self.family == "log":
            return f"radial_exp(log,c={self.c:g})"
        return "radial_exp(gaussian)"


MeasureSpec = Annotated[
    Union[Lebesgue, Gaussian, RadialPower, RadialExp],
    Field(discriminator="type"),
]

measure_adapter: TypeAdapter = TypeAdapter(MeasureSpec)


def parse_measure(data: Union[str, bytes, dict]):
    """Parse a measure from a JSON document or mapping."""
    if isinstance(data, (str, bytes)):
        return measure_adapter.validate_json(data)
    return measure_adapter.validate_python(data)
