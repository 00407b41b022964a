"""
Error hierarchy.

Every error carries a machine-readable ``error`` code and a human-readable
``error_description``; the CLI prints ``to_dict()`` on stderr.
"""

from typing import Any, Dict, List, Optional


class WBMError(Exception):
    """Base class for toolkit errors."""

    error = "wbm_error"

    def __init__(self, error_description: str, **details: Any):
        super().__init__(error_description)
        self.error_description = error_description
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "error": self.error,
            "error_description": self.error_description,
        }
        if self.details:
            payload["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return payload


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


class DimensionMismatch(WBMError):
    error = "dimension_mismatch"


class OriginNotContained(WBMError):
    error = "origin_not_contained"


class UnboundedBody(WBMError):
    error = "unbounded_body"


class UnsupportedRepresentation(WBMError):
    error = "unsupported_representation"


class UnsupportedCase(UnsupportedRepresentation):
    error = "unsupported_case"


class UnsupportedConfiguration(WBMError):
    error = "unsupported_configuration"


class Inconclusive(WBMError):
    """Finite-difference extrapolants failed to contract."""

    error = "inconclusive"


class NonPositiveMeasure(WBMError):
    error = "non_positive_measure"


class DegenerateDerivative(WBMError):
    """F'(mu(K)) vanished; ``case`` names the degenerate interpretation."""

    error = "degenerate_derivative"

    def __init__(self, error_description: str, case: str, **details: Any):
        super().__init__(error_description, case=case, **details)
        self.case = case


class ZeroMeasureBase(WBMError):
    error = "zero_measure_base"


class NonPositiveMixed(WBMError):
    error = "non_positive_mixed"


class BudgetExhausted(WBMError):
    """No violation found within the search budget. Not a proof of validity."""

    error = "budget_exhausted"

    def __init__(self, error_description: str, searched: int, reports: Optional[List[Any]] = None):
        super().__init__(error_description, searched=searched)
        self.searched = searched
        self.reports = reports or []


class NotConvex(WBMError):
    error = "not_convex"


class Negative(WBMError):
    error = "negative"


class InvalidConfig(WBMError):
    error = "invalid_config"
