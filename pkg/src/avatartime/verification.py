"""Cross-check the closed-form allocation against the simplex oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .allocation import AllocationPlan, AllocationProblem, build_lp, constraint_residuals, solve
from .egonet import Alter, EgoNetwork
from .params import HOURS_PER_YEAR, ModelParams
from .simplex import LpSolution, solve_lp

OBJECTIVE_RTOL = 1e-6
RESIDUAL_TOL = 1e-9


def random_problem(
    rng: np.random.Generator,
    max_n: int = 200,
    beta_range: tuple[float, float] = (1.0, 3.0),
    gamma_range: tuple[float, float] = (0.0, 1.2),
) -> AllocationProblem:
    """Random instance: ``x~ in (0, 100]``, budgets uniform in ``[0, 2 X~]``."""
    n = int(rng.integers(1, max_n + 1))
    x_tilde = 100.0 - rng.uniform(0.0, 100.0, n)  # (0, 100]
    beta = rng.uniform(*beta_range, n)
    gamma = float(rng.uniform(*gamma_range))
    total = float(x_tilde.sum())
    Y = float(rng.uniform(0.0, 2 * total))
    Z = float(rng.uniform(0.0, 2 * total))
    net = EgoNetwork(tuple(
        Alter(i, "active_network", float(x), float(b)) for i, (x, b) in enumerate(zip(x_tilde, beta))
    ))
    params = ModelParams(
        avatar_capacity_Y=Y,
        debrief_budget_Z=Z,
        debrief_cap_Zmax=Z,
        horizon_hours=max(HOURS_PER_YEAR, Y),
        gamma_override=gamma,
    )
    return AllocationProblem(net, params)


@dataclass(frozen=True)
class Comparison:
    problem: AllocationProblem = field(repr=False)
    plan: AllocationPlan = field(repr=False)
    oracle: LpSolution = field(repr=False)
    objective_gap: float
    max_residual: float

    @property
    def ok(self) -> bool:
        scale = max(1.0, abs(self.oracle.objective)) if self.oracle.optimal else 1.0
        return (
            self.oracle.optimal
            and self.objective_gap <= OBJECTIVE_RTOL * scale
            and self.max_residual <= RESIDUAL_TOL
        )


def compare(problem: AllocationProblem) -> Comparison:
    plan = solve(problem)
    oracle = solve_lp(build_lp(problem))
    gap = abs(plan.objective_value - oracle.objective) if oracle.optimal else float("inf")
    res = constraint_residuals(problem, plan)
    return Comparison(problem, plan, oracle, gap, max(res.values()))


@dataclass(frozen=True)
class VerificationReport:
    instances: int
    failures: int
    worst_relative_gap: float
    worst_residual: float
    regimes: dict[str, int]

    @property
    def ok(self) -> bool:
        return self.failures == 0


def verify_oracle(instances: int, seed: int, max_n: int = 200) -> VerificationReport:
    rng = np.random.default_rng(seed)
    failures = 0
    worst_gap = worst_res = 0.0
    regimes: dict[str, int] = {}
    for _ in range(instances):
        c = compare(random_problem(rng, max_n))
        failures += not c.ok
        worst_gap = max(worst_gap, c.objective_gap / max(1.0, abs(c.plan.objective_value)))
        worst_res = max(worst_res, c.max_residual)
        regimes[c.plan.regime] = regimes.get(c.plan.regime, 0) + 1
    return VerificationReport(instances, failures, worst_gap, worst_res, dict(sorted(regimes.items())))
