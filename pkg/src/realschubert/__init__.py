"""Numerical special Schubert calculus with osculating flags.

Enumerates, solves, and certifies special Schubert problems whose flags
osculate the rational normal curve, and applies the all-ones case to real
pole placement by static output feedback.
"""

from .feedback import (
    FeedbackLaw,
    Plant,
    closed_loop_poles,
    place_poles,
    plant_from_osculating,
    stability_report,
)
from .osculating import (
    flag_at_infinity,
    gamma_point,
    osculating_plane,
    translation_matrix,
)
from .partitions import (
    BoxShape,
    ConditionKind,
    SpecialCondition,
    codimension,
    column,
    degree,
    hook_length_count,
    pieri_column,
    pieri_row,
    row,
)
from .reality import (
    RealityReport,
    ScheduleConfig,
    Verdict,
    classify,
    shapiro_experiment,
    theorem_schedule_run,
    transversality,
)
from .systems import LocalChart, SchubertProblem, build_system
from .tracking import (
    SolutionSet,
    TrackerConfig,
    degeneration_probe,
    parameter_sweep,
    solve,
)

__all__ = [
    "BoxShape",
    "ConditionKind",
    "FeedbackLaw",
    "LocalChart",
    "Plant",
    "RealityReport",
    "ScheduleConfig",
    "SchubertProblem",
    "SolutionSet",
    "SpecialCondition",
    "TrackerConfig",
    "Verdict",
    "build_system",
    "classify",
    "closed_loop_poles",
    "codimension",
    "column",
    "degeneration_probe",
    "degree",
    "flag_at_infinity",
    "gamma_point",
    "hook_length_count",
    "osculating_plane",
    "parameter_sweep",
    "pieri_column",
    "pieri_row",
    "place_poles",
    "plant_from_osculating",
    "row",
    "shapiro_experiment",
    "solve",
    "stability_report",
    "theorem_schedule_run",
    "translation_matrix",
    "transversality",
]

__version__ = "0.1.0"
