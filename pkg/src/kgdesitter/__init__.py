"""Numerical laboratory for weighted Strichartz estimates of the conformal
Klein-Gordon equation on asymptotically de Sitter spaces."""

__version__ = "0.1.0"

from .errors import ConfigurationError, DomainError, SingularPotentialWarning, SolverError  # noqa: E402
from .exponents import AdmissibleTriple, DualPair, dual_for, validate, weight_exponents  # noqa: E402
from .geometry import MetricSpec, build_chart, check_short_range  # noqa: E402
from .operators import BoundaryChartOperator, ReducedOperator, conjugate  # noqa: E402
from .solver import StateVector, TrajectoryRecord, solve_reduced  # noqa: E402

__all__ = [
    "AdmissibleTriple",
    "BoundaryChartOperator",
    "ConfigurationError",
    "DomainError",
    "DualPair",
    "MetricSpec",
    "ReducedOperator",
    "SingularPotentialWarning",
    "SolverError",
    "StateVector",
    "TrajectoryRecord",
    "build_chart",
    "check_short_range",
    "conjugate",
    "dual_for",
    "solve_reduced",
    "validate",
    "weight_exponents",
]
