"""
F-concavity specifications: F(x) = x^s, log x, or the inverse normal CDF.
"""

import math
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator
from scipy.special import ndtr, ndtri

_SQRT_2PI = math.sqrt(2.0 * math.pi)


class FConcavityBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    def F(self, x: float) -> float:
        raise NotImplementedError

    def F_inv(self, y: float) -> float:
        raise NotImplementedError

    def dF(self, x: float) -> float:
        raise NotImplementedError

    def d2F(self, x: float) -> float:
        raise NotImplementedError

    def dF_inv(self, y: float) -> float:
        return 1.0 / self.dF(self.F_inv(y))

    @property
    def increasing(self) -> bool:
        return True


class Power(FConcavityBase):
    """F(x) = x^s, s != 0."""

    kind: Literal["power"] = "power"
    s: float = Field(..., description="Concavity exponent")

    @field_validator("s")
    @classmethod
    def validate_s(cls, v):
        if v == 0:
            raise ValueError("Use Log for s = 0")
        return v

    def F(self, x):
        return x**self.s

    def F_inv(self, y):
        return y ** (1.0 / self.s)

    def dF(self, x):
        return self.s * x ** (self.s - 1.0)

    def d2F(self, x):
        return self.s * (self.s - 1.0) * x ** (self.s - 2.0)

    @property
    def increasing(self):
        return self.s > 0

    def label(self):
        return f"power(s={self.s:g})"


class Log(FConcavityBase):
    kind: Literal["log"] = "log"

    def F(self, x):
        return math.log(x)

    def F_inv(self, y):
        return math.exp(y)

    def dF(self, x):
        return 1.0 / x

    def d2F(self, x):
        return -1.0 / (x * x)

    def label(self):
        return "log"


class NormalInv(FConcavityBase):
    """F = Phi^{-1}; only meaningful for probability measures."""

    kind: Literal["normal_inv"] = "normal_inv"

    def F(self, x):
        return float(ndtri(x))

    def F_inv(self, y):
        return float(ndtr(y))

    def dF(self, x):
        z = float(ndtri(x))
        return _SQRT_2PI * math.exp(0.5 * z * z)

    def d2F(self, x):
        z = float(ndtri(x))
        d = _SQRT_2PI * math.exp(0.5 * z * z)
        return z * d * d

    def label(self):
        return "normal_inv"


FConcavitySpec = Annotated[Union[Power, Log, NormalInv], Field(discriminator="kind")]

concavity_adapter: TypeAdapter = TypeAdapter(FConcavitySpec)


def power_or_log(s: float) -> Union[Power, Log]:
    """The F for s-concavity, with s = 0 meaning log-concavity."""
    return Log() if s == 0 else Power(s=s)
