"""Avatar-mediated socialization time model.

Generate layered ego networks, decide how much of each contact's time to
delegate to an independent avatar, and sweep the debriefing cost.
"""

from .allocation import (
    AllocationPlan,
    AllocationProblem,
    build_lp,
    classify_regime,
    solve,
    spare_time_closed_form,
)
from .egonet import Alter, EgoNetwork, LayerSpec, generate, layer_totals, load
from .params import ModelParams
from .simplex import LpProblem, LpSolution, solve_lp

__all__ = [
    "AllocationPlan",
    "AllocationProblem",
    "Alter",
    "EgoNetwork",
    "LayerSpec",
    "LpProblem",
    "LpSolution",
    "ModelParams",
    "build_lp",
    "classify_regime",
    "generate",
    "layer_totals",
    "load",
    "solve",
    "solve_lp",
    "spare_time_closed_form",
]
