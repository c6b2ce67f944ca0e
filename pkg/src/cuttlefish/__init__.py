"""Cuttlefish: optimal home scheduling against a dynamic tariff.

Plans one battery and a set of appliances over a fixed horizon,
minimising the bill under per-timestep import/export prices, and
answers contrastive what-if questions about the schedule it found.
"""

from .explain import (
    ContrastiveExplanation,
    ContrastiveQuestion,
    QuestionError,
    RequirementAddition,
    answer_contrastive,
    restrict,
    satisfies,
)
from .model import (
    ApplianceSpec,
    BatterySpec,
    DynamicTariff,
    HomeModel,
    JointAction,
    JointState,
    ModelError,
    Plan,
    PrimitiveRequirement,
)
from .oracle import OracleCapacityError, brute_force_solve, enumerate_valid_plans
from .planner import (
    SearchBudget,
    SearchStats,
    SolveOutcome,
    SolveStatus,
    astar_solve,
    heuristic,
    normalize_costs,
)
from .semantics import simulate, validate_plan
from .units import PrecisionError, format_pence, kwh, pence, price_per_kwh

__all__ = [
    "ApplianceSpec",
    "BatterySpec",
    "ContrastiveExplanation",
    "ContrastiveQuestion",
    "DynamicTariff",
    "HomeModel",
    "JointAction",
    "JointState",
    "ModelError",
    "OracleCapacityError",
    "Plan",
    "PrecisionError",
    "PrimitiveRequirement",
    "QuestionError",
    "RequirementAddition",
    "SearchBudget",
    "SearchStats",
    "SolveOutcome",
    "SolveStatus",
    "answer_contrastive",
    "astar_solve",
    "brute_force_solve",
    "enumerate_valid_plans",
    "format_pence",
    "heuristic",
    "kwh",
    "normalize_costs",
    "pence",
    "price_per_kwh",
    "restrict",
    "satisfies",
    "simulate",
    "validate_plan",
]

__version__ = "0.1.0"
