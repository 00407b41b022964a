"""
Pydantic models for convex body specifications.

One document per body:
    {"type": "polytope", "vertices": [[x, y], ...]}
    {"type": "zonotope", "center": [...], "generators": [[...], ...]}
    {"type": "ball", "center": [...], "radius": r}
    {"type": "segment", "a": [...], "b": [...]}
    {"type": "sum", "terms": [{"scale": s, "body": {...}}, ...]}
"""

import json
import math
from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator

Point = Tuple[float, ...]


def _as_point(values: Sequence[float]) -> Point:
    return tuple(float(v) for v in values)


def _check_not_nan(point: Point) -> Point:
    if any(math.isnan(c) for c in point):
        raise ValueError("Coordinates must not be NaN")
    return point


class BodyBase(BaseModel):
    """Fields and helpers shared by every body type."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: Optional[str] = Field(None, description="Optional identifier echoed in reports")

    @property
    def dim(self) -> int:  # pragma: no cover - overridden
        raise NotImplementedError

    def label(self) -> str:
        return self.name or self.type  # type: ignore[attr-defined]


class Polytope(BodyBase):
    """Convex hull of finitely many points."""

    type: Literal["polytope"] = "polytope"
    vertices: Tuple[Point, ...] = Field(..., min_length=1, description="Points whose hull is the body")

    @field_validator("vertices")
    @classmethod
    def validate_vertices(cls, v):
        dims = {len(p) for p in v}
        if len(dims) != 1 or 0 in dims:
            raise ValueError("All vertices must share one positive dimension")
        return tuple(_check_not_nan(p) for p in v)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @classmethod
    def from_points(cls, points: Any, name: Optional[str] = None) -> "Polytope":
        return cls(vertices=tuple(_as_point(p) for p in points), name=name)

    @classmethod
    def box(cls, lower: Sequence[float], upper: Sequence[float], name: Optional[str] = None) -> "Polytope":
        """Axis-aligned box with the given corners."""
        n = len(lower)
        corners = []
        for mask in range(2**n):
            corners.append(tuple(upper[i] if mask >> i & 1 else lower[i] for i in range(n)))
        return cls(vertices=tuple(_as_point(c) for c in corners), name=name)


class Zonotope(BodyBase):
    """center + sum of [-g, g] over the generators."""

    type: Literal["zonotope"] = "zonotope"
    center: Point = Field(..., min_length=1, description="Center of symmetry")
    generators: Tuple[Point, ...] = Field(default=(), description="Half-length generator vectors")

    @model_validator(mode="after")
    def validate_generators(self):
        _check_not_nan(self.center)
        for g in self.generators:
            if len(g) != len(self.center):
                raise ValueError("Generators must match the center dimension")
            _check_not_nan(g)
            if all(c == 0 for c in g):
                raise ValueError("Zonotope generators must be nonzero")
        return self

    @property
    def dim(self) -> int:
        return len(self.center)


class Ball(BodyBase):
    """Euclidean ball."""

    type: Literal["ball"] = "ball"
    center: Point = Field(..., min_length=1, description="Center")
    radius: float = Field(..., ge=0, description="Radius")

    @field_validator("center")
    @classmethod
    def validate_center(cls, v):
        return _check_not_nan(v)

    @property
    def dim(self) -> int:
        return len(self.center)

    @classmethod
    def unit(cls, n: int, radius: float = 1.0, name: Optional[str] = None) -> "Ball":
        return cls(center=(0.0,) * n, radius=radius, name=name)


class Segment(BodyBase):
    """Closed segment [a, b]."""

    type: Literal["segment"] = "segment"
    a: Point = Field(..., min_length=1, description="First endpoint")
    b: Point = Field(..., min_length=1, description="Second endpoint")

    @model_validator(mode="after")
    def validate_endpoints(self):
        if len(self.a) != len(self.b):
            raise ValueError("Segment endpoints must share a dimension")
        _check_not_nan(self.a)
        _check_not_nan(self.b)
        return self

    @property
    def dim(self) -> int:
        return len(self.a)

    @classmethod
    def from_origin(cls, v: Sequence[float], name: Optional[str] = None) -> "Segment":
        """The segment [0, v]."""
        return cls(a=(0.0,) * len(v), b=_as_point(v), name=name)

    @classmethod
    def symmetric(cls, v: Sequence[float], name: Optional[str] = None) -> "Segment":
        """The segment [-v, v]."""
        return cls(a=tuple(-float(c) for c in v), b=_as_point(v), name=name)


class SumTerm(BaseModel):
    """One scaled summand of a ScaledSum."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scale: float = Field(..., ge=0, description="Nonnegative dilation factor")
    body: "ConvexBodySpec" = Field(..., description="Summand")


class ScaledSum(BodyBase):
    """Symbolic Minkowski combination sum(scale_i * body_i)."""

    type: Literal["sum"] = "sum"
    terms: Tuple[SumTerm, ...] = Field(..., min_length=1, description="Scaled summands")

    @model_validator(mode="after")
    def validate_terms(self):
        dims = {t.body.dim for t in self.terms}
        if len(dims) != 1:
            raise ValueError("All terms of a sum must share the ambient dimension")
        return self

    @property
    def dim(self) -> int:
        return self.terms[0].body.dim


ConvexBodySpec = Annotated[
    Union[Polytope, Zonotope, Ball, Segment, ScaledSum],
    Field(discriminator="type"),
]

SumTerm.model_rebuild()
ScaledSum.model_rebuild()

body_adapter: TypeAdapter = TypeAdapter(ConvexBodySpec)


def parse_body(data: Union[str, bytes, dict]) -> Union[Polytope, Zonotope, Ball, Segment, ScaledSum]:
    """Parse a body from a JSON document or an already-decoded mapping."""
    if isinstance(data, (str, bytes)):
        return body_adapter.validate_json(data)
    return body_adapter.validate_python(data)


def load_body(path: Union[str, Path]):
    """Load a body specification file."""
    path = Path(path)
    body = parse_body(path.read_text())
    if body.name is None:
        body = body.model_copy(update={"name": path.stem})
    return body


def dump_body(body) -> str:
    return json.dumps(body.model_dump(exclude_none=True))
