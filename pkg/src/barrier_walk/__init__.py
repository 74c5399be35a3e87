"""Random walks on graphs with multiple-function barriers.

Exact expected visits, absorption probabilities and mean absorption times
for walks on graphs built from finite intervals and half-lines joined at
barriers, plus a Monte Carlo simulator to cross-check them.
"""

from .absorption import AbsorptionReport, absorption_report, lemma1_profile
from .arrival import ArrivalProfile, arrival_profile, visit_probability
from .errors import (
    BarrierWalkError,
    ConfigError,
    GraphError,
    InfiniteTime,
    InternalConsistencyError,
    ParseError,
    SingularSystem,
)
from .model import (
    AtBarrier,
    Barrier,
    HalfLine,
    IntervalEdge,
    OnHalfLine,
    OnInterval,
    WalkGraph,
    validate,
)
from .timing import TimeReport, expected_time, time_report

__all__ = [
    "AbsorptionReport", "absorption_report", "lemma1_profile",
    "ArrivalProfile", "arrival_profile", "visit_probability",
    "BarrierWalkError", "ConfigError", "GraphError", "InfiniteTime",
    "InternalConsistencyError", "ParseError", "SingularSystem",
    "AtBarrier", "Barrier", "HalfLine", "IntervalEdge", "OnHalfLine", "OnInterval",
    "WalkGraph", "validate",
    "TimeReport", "expected_time", "time_report",
]
__version__ = "0.1.0"
