"""Set distances between finite sets of state vectors.

Implements the OSPA, GOSPA and COSPA families with per-metric error
decompositions, target association diagnostics, analytic benchmark
scenarios, a seeded track simulator and CSV/JSON track I/O.
"""

from .assignment import Assignment, CostMatrix, brute_force_assignment, solve_assignment
from .core import (
    DimensionMismatchError,
    MetricParams,
    MetricResult,
    ParameterError,
    PointSet,
    UnsupportedOrderError,
    base_distance,
    cutoff_distance,
    validate_params,
)
from .metrics import (
    METRIC_NAMES,
    AssociationReport,
    StepResult,
    classify_associations,
    cospa,
    eval_series,
    gospa,
    gospa_alt_alpha2,
    ospa,
)
from .scenarios import (
    DELTA_FRACTIONS,
    FIGURE_IDS,
    AnalyticScenario,
    ScenarioError,
    SimConfig,
    TableCell,
    VerdictRow,
    evaluate_scenario,
    make_figure_scenario,
    simulate_tracks,
    table_report,
)
from .trackio import (
    RESULT_COLUMNS,
    TrackFile,
    TrackFormatError,
    TrackRecord,
    read_tracks,
    write_results,
    write_tracks,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "AssociationReport",
    "AnalyticScenario",
    "CostMatrix",
    "DELTA_FRACTIONS",
    "DimensionMismatchError",
    "FIGURE_IDS",
    "METRIC_NAMES",
    "MetricParams",
    "MetricResult",
    "ParameterError",
    "PointSet",
    "RESULT_COLUMNS",
    "ScenarioError",
    "SimConfig",
    "StepResult",
    "TableCell",
    "TrackFile",
    "TrackFormatError",
    "TrackRecord",
    "UnsupportedOrderError",
    "VerdictRow",
    "base_distance",
    "brute_force_assignment",
    "classify_associations",
    "cospa",
    "cutoff_distance",
    "eval_series",
    "evaluate_scenario",
    "gospa",
    "gospa_alt_alpha2",
    "make_figure_scenario",
    "ospa",
    "read_tracks",
    "simulate_tracks",
    "solve_assignment",
    "table_report",
    "validate_params",
    "write_results",
    "write_tracks",
    "__version__",
]
