"""Chern curvature invariants and projectively flat classification of Hermitian metrics."""

from ._chernlab import (
    ChartSingularity,
    Geometry,
    ParseError,
    SingularMetric,
    Spec,
    analyze_report,
    builtin,
    builtin_names,
    classify,
    parse_spec,
)

__all__ = [
    "ChartSingularity",
    "Geometry",
    "ParseError",
    "SingularMetric",
    "Spec",
    "analyze_report",
    "builtin",
    "builtin_names",
    "classify",
    "parse_spec",
]
