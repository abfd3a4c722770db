"""Numerical and exact verification of convexity and three-point inequalities."""

__version__ = "0.1.0"

from .convexity import (
    DEFAULT_TOL,
    Certificate,
    CheckResult,
    Triple,
    TripleClass,
    Verdict,
    Witness,
    certify_concave,
    certify_convex,
    find_violation_witness,
    three_point_gap,
    three_point_gaps,
)
from .errors import ConvexCertError, DomainError, ParseError, PreconditionError
from .fnspec import FunctionSpec, Interval, parse_function, parse_interval

__all__ = [
    "__version__",
    "DEFAULT_TOL",
    "Certificate",
    "CheckResult",
    "Triple",
    "TripleClass",
    "Verdict",
    "Witness",
    "certify_concave",
    "certify_convex",
    "find_violation_witness",
    "three_point_gap",
    "three_point_gaps",
    "ConvexCertError",
    "DomainError",
    "ParseError",
    "PreconditionError",
    "FunctionSpec",
    "Interval",
    "parse_function",
    "parse_interval",
]
