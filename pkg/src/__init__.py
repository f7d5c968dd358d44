from .config import DEFAULT_CONFIG, SolverConfig
from .errors import (
    CoincidentPoints, DegeneratePolygon, DivisionDegeneracy, EventBudgetExceeded, FeedLinkError,
    FocusOnBoundary, GeometryError, InputFormatError, NoEventFound, PreconditionViolated,
    SweepError, TerminalStateMismatch, TooFewVertices,
)
from .geom_core import Point, PolygonChain, SegmentTable, build_chain, hyperbola_params, point_at
from .merge import FeedLinkResult, Solution, dilation_profile, optimal_feedlink, solve
from .oracle import OracleConfig, dilation_of, dilation_via, grid_best

__all__ = [
    "DEFAULT_CONFIG", "SolverConfig",
    "FeedLinkError", "GeometryError", "TooFewVertices", "DegeneratePolygon", "FocusOnBoundary",
    "InputFormatError", "DivisionDegeneracy", "PreconditionViolated", "CoincidentPoints",
    "SweepError", "NoEventFound", "EventBudgetExceeded", "TerminalStateMismatch",
    "Point", "PolygonChain", "SegmentTable", "build_chain", "hyperbola_params", "point_at",
    "FeedLinkResult", "Solution", "dilation_profile", "optimal_feedlink", "solve",
    "OracleConfig", "dilation_of", "dilation_via", "grid_best",
]
