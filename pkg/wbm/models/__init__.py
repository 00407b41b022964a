"""
Data models for bodies, measures, results and run configuration.
"""

from wbm.models.bodies import (  # noqa: F401
    Ball,
    ConvexBodySpec,
    Polytope,
    ScaledSum,
    Segment,
    SumTerm,
    Zonotope,
    load_body,
    parse_body,
)
from wbm.models.concavity import FConcavitySpec, Log, NormalInv, Power  # noqa: F401
from wbm.models.convexfn import ConvexPL  # noqa: F401
from wbm.models.measures import Gaussian, Lebesgue, MeasureSpec, RadialExp, RadialPower, parse_measure  # noqa: F401
from wbm.models.results import EvalMethod, EvalResult  # noqa: F401
from wbm.models.runs import BodyClass, BodyFamily, GeneratorConfig, RunConfig, SearchDirection  # noqa: F401
from wbm.models.schedule import FDSchedule  # noqa: F401
