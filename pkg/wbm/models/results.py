"""
Numeric results with error estimates and provenance.
"""

import math
from enum import Enum
from typing import Callable, Iterable, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

_TINY = float(np.finfo(float).tiny)


class EvalMethod(str, Enum):
    """Provenance of a value, ordered from most to least trustworthy."""

    EXACT = "exact"
    QUADRATURE = "quadrature"
    QMC = "qmc"
    FD_EXTRAPOLATED = "fd_extrapolated"

    @property
    def rank(self) -> int:
        return _METHOD_RANK[self]

    @classmethod
    def worst(cls, methods: Iterable["EvalMethod"]) -> "EvalMethod":
        return max(methods, key=lambda m: m.rank, default=cls.EXACT)


_METHOD_RANK = {
    EvalMethod.EXACT: 0,
    EvalMethod.QUADRATURE: 1,
    EvalMethod.QMC: 2,
    EvalMethod.FD_EXTRAPOLATED: 3,
}

Number = Union[int, float]


class EvalResult(BaseModel):
    """A value with an absolute error estimate; abs_error is 0 iff the method is exact.

    Arithmetic propagates errors to first order and keeps the least
    trustworthy method of the operands.
    """

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., description="Point estimate")
    abs_error: float = Field(0.0, ge=0, description="Absolute error estimate")
    method: EvalMethod = Field(EvalMethod.EXACT, description="Provenance tag")

    @model_validator(mode="after")
    def validate_error_tag(self):
        if (self.abs_error == 0.0) != (self.method == EvalMethod.EXACT):
            raise ValueError("abs_error must be 0 exactly when method is exact")
        return self

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def exact(cls, value: Number) -> "EvalResult":
        return cls(value=float(value), abs_error=0.0, method=EvalMethod.EXACT)

    @classmethod
    def estimate(cls, value: Number, abs_error: Number, method: EvalMethod) -> "EvalResult":
        """Build a result, flooring the error so a non-exact method never reports 0."""
        if method == EvalMethod.EXACT:
            return cls.exact(value)
        err = float(abs_error)
        if not math.isfinite(err):
            err = float("inf")
        return cls(value=float(value), abs_error=max(err, _TINY), method=method)

    @classmethod
    def coerce(cls, other: Union["EvalResult", Number]) -> "EvalResult":
        if isinstance(other, EvalResult):
            return other
        return cls.exact(other)

    @classmethod
    def _combine(cls, value: float, err: float, *operands: "EvalResult") -> "EvalResult":
        method = EvalMethod.worst(op.method for op in operands)
        return cls.estimate(value, err, method)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other):
        o = self.coerce(other)
        return self._combine(self.value + o.value, self.abs_error + o.abs_error, self, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self.coerce(other)
        return self._combine(self.value - o.value, self.abs_error + o.abs_error, self, o)

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __neg__(self):
        return self._combine(-self.value, self.abs_error, self)

    def __mul__(self, other):
        o = self.coerce(other)
        err = abs(o.value) * self.abs_error + abs(self.value) * o.abs_error
        return self._combine(self.value * o.value, err, self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self.coerce(other)
        if o.value == 0:
            raise ZeroDivisionError("division by an EvalResult with value 0")
        q = self.value / o.value
        err = (self.abs_error + abs(q) * o.abs_error) / abs(o.value)
        return self._combine(q, err, self, o)

    def __rtruediv__(self, other):
        return self.coerce(other) / self

    def __pow__(self, exponent: Number):
        value = self.value**exponent
        err = abs(exponent * self.value ** (exponent - 1)) * self.abs_error if self.abs_error else 0.0
        return self._combine(value, err, self)

    def map(self, fn: Callable[[float], float], dfn: Callable[[float], float]) -> "EvalResult":
        """Apply a scalar function, propagating the error through its derivative."""
        value = fn(self.value)
        err = abs(dfn(self.value)) * self.abs_error if self.abs_error else 0.0
        return self._combine(value, err, self)

    @property
    def relative_error(self) -> float:
        return self.abs_error / abs(self.value) if self.value else math.inf

    def agrees_with(self, other: "EvalResult", sigma: float = 3.0, rtol: float = 0.0) -> bool:
        """Whether two estimates of one quantity agree within error bars or rtol."""
        gap = abs(self.value - other.value)
        scale = max(abs(self.value), abs(other.value))
        return gap <= sigma * (self.abs_error + other.abs_error) + rtol * scale + 64 * np.finfo(float).eps * scale

    def to_dict(self):
        return {"value": self.value, "abs_error": self.abs_error, "method": self.method.value}


def total(results: Iterable[EvalResult]) -> EvalResult:
    out = EvalResult.exact(0.0)
    for r in results:
        out = out + r
    return out
