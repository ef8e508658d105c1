"""Spare-time maximisation: split each contact's time between ego and avatar.

The full LP is over ``(x_v, y_v)``: minimise ``sum(x_v + gamma*y_v)`` subject
to per-alter presence (``x_v + y_v/beta_v >= x~_v``), the ego's time
(``sum(x_v + gamma*y_v) <= X~``), avatar capacity (``sum y_v <= Y``) and
the debrief budget (``gamma*sum y_v <= Z``). The presence rows are tight at
any optimum, so ``x_v`` can be eliminated and what remains is a continuous
knapsack in ``y`` with unit weights, value ``1/beta_v - gamma`` per hour,
per-alter caps ``beta_v*x~_v`` and one shared budget ``min(Y, Z/gamma)``.
:func:`solve` fills that knapsack greedily; :func:`build_lp` emits the
original LP for cross-checking with :mod:`avatartime.simplex`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .egonet import AlterId, EgoNetwork
from .params import ModelParams, ParameterError
from .simplex import LpProblem

REGIME_A = "A"
REGIME_B = "B"
BOUNDARY = "boundary"

AVATAR_CAPACITY = "avatar_capacity"
DEBRIEF_BUDGET = "debrief_budget"
PRESENCE_CAPS = "presence_caps"
NO_BUDGET = "none"

TOL = 1e-9


def classify_regime(beta_v: Sequence[float], gamma: float) -> str:
    """``A`` if some alter gains from delegation, ``B`` if none does.

    Exact zero best-case gain is ``boundary``. An empty list is ``B``:
    there is no one to delegate to.
    """
    if gamma < 0 or any(b <= 0 for b in beta_v):
        raise ParameterError("need gamma >= 0 and all beta > 0")
    if len(beta_v) == 0:
        return REGIME_B
    best = max(1.0 / b for b in beta_v) - gamma
    if best > 0:
        return REGIME_A
    if best < 0:
        return REGIME_B
    return BOUNDARY


@dataclass(frozen=True)
class AllocationProblem:
    network: EgoNetwork
    params: ModelParams
    allow_empty: bool = False

    def __post_init__(self) -> None:
        if len(self.network) == 0 and not self.allow_empty:
            raise ParameterError("empty ego network (pass allow_empty=True for the trivial plan)")


@dataclass(frozen=True)
class AllocationRow:
    id: AlterId
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class AllocationPlan:
    rows: tuple[AllocationRow, ...]
    X: float
    Y_used: float
    Z_used: float
    objective_value: float
    spare_time: float
    regime: str
    binding_budget: str
    x_tilde_total: float
    gamma: float
    Y: float
    Z: float

    @property
    def x(self) -> np.ndarray:
        return np.array([r.x for r in self.rows], dtype=float)

    @property
    def y(self) -> np.ndarray:
        return np.array([r.y for r in self.rows], dtype=float)

    @property
    def z(self) -> np.ndarray:
        return np.array([r.z for r in self.rows], dtype=float)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "binding_budget": self.binding_budget,
            "gamma": self.gamma,
            "Y": self.Y,
            "Z": self.Z,
            "x_tilde_total": self.x_tilde_total,
            "objective": self.objective_value,
            "spare_time": self.spare_time,
            "totals": {"X": self.X, "Y_used": self.Y_used, "Z_used": self.Z_used},
            "alters": [{"id": r.id, "x": r.x, "y": r.y, "z": r.z} for r in self.rows],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AllocationPlan":
        return cls(
            rows=tuple(AllocationRow(r["id"], r["x"], r["y"], r["z"]) for r in d["alters"]),
            X=d["totals"]["X"],
            Y_used=d["totals"]["Y_used"],
            Z_used=d["totals"]["Z_used"],
            objective_value=d["objective"],
            spare_time=d["spare_time"],
            regime=d["regime"],
            binding_budget=d["binding_budget"],
            x_tilde_total=d["x_tilde_total"],
            gamma=d["gamma"],
            Y=d["Y"],
            Z=d["Z"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8", newline="\n")

    def summary(self) -> str:
        lines = [
            f"regime:          {self.regime}",
            f"objective:       {self.objective_value:.6f} h",
            f"spare time:      {self.spare_time:.6f} h",
            f"avatar time:     {self.Y_used:.6f} h of {self.Y:.6f} h",
            f"debrief time:    {self.Z_used:.6f} h of {self.Z:.6f} h",
            f"binding budget:  {self.binding_budget}",
        ]
        if self.Y_used == 0:
            lines.append("note: avatar not used (delegation would not save time)"
                         if self.regime != REGIME_A else "note: avatar not used (no budget)")
        return "\n".join(lines)


def _budget_limits(problem: AllocationProblem, caps_total: float) -> dict[str, float]:
    p = problem.params
    return {
        AVATAR_CAPACITY: p.avatar_capacity_Y,
        DEBRIEF_BUDGET: p.debrief_limited_avatar_time,
        PRESENCE_CAPS: caps_total,
    }


def solve(problem: AllocationProblem) -> AllocationPlan:
    """Optimal plan via the reduced problem.

    Alters whose benefit ``1/beta_v - gamma`` ties share the remaining budget
    in proportion to their caps; alters with zero benefit get no avatar time.
    """
    net, p = problem.network, problem.params
    gamma = p.gamma
    x_t = net.x_tilde
    beta = net.beta
    benefit = 1.0 / beta - gamma
    caps = beta * x_t
    y = np.zeros(len(net))

    regime = classify_regime(beta.tolist(), gamma)
    helped = benefit > 0
    limits = _budget_limits(problem, math.fsum(caps[helped]))
    binding = NO_BUDGET
    if regime == REGIME_A:
        binding = min(limits, key=limits.__getitem__)  # ties: dict order
        remaining = min(limits[AVATAR_CAPACITY], limits[DEBRIEF_BUDGET])
        order = np.argsort(-benefit, kind="stable")
        order = order[helped[order]]
        start = 0
        while start < order.size and remaining > 0:
            stop = start
            while stop < order.size and benefit[order[stop]] == benefit[order[start]]:
                stop += 1
            group = order[start:stop]
            need = math.fsum(caps[group])
            if need <= remaining:
                y[group] = caps[group]
                remaining -= need
            else:
                y[group] = caps[group] * (remaining / need)
                remaining = 0.0
            start = stop

    full = y == caps
    x = np.where(full, 0.0, np.maximum(x_t - y / beta, 0.0))
    z = gamma * y
    spare = math.fsum(benefit * y)
    X_t = net.total_x_tilde
    rows = tuple(
        AllocationRow(a.id, float(xv), float(yv), float(zv))
        for a, xv, yv, zv in zip(net.alters, x, y, z)
    )
    plan = AllocationPlan(
        rows=rows,
        X=math.fsum(x),
        Y_used=math.fsum(y),
        Z_used=math.fsum(z),
        objective_value=X_t - spare,
        spare_time=spare,
        regime=regime,
        binding_budget=binding,
        x_tilde_total=X_t,
        gamma=gamma,
        Y=p.avatar_capacity_Y,
        Z=p.debrief_budget_Z,
    )
    check_plan(problem, plan)
    return plan


def spare_time_closed_form(
    x_tilde_total: float, beta: float, gamma: float, Y: float, Z: float
) -> float:
    """Spare hours when every alter shares the same ``beta``."""
    if beta <= 0 or gamma < 0 or Y < 0 or Z < 0 or x_tilde_total < 0:
        raise ParameterError("need beta > 0 and nonnegative gamma, budgets, X~")
    if gamma > 1.0 / beta:
        raise ParameterError(f"gamma {gamma} exceeds 1/beta {1.0 / beta}; use solve()")
    z_limit = math.inf if gamma == 0 else Z / gamma
    return (1.0 / beta - gamma) * min(Y, z_limit, beta * x_tilde_total)


def build_lp(problem: AllocationProblem) -> LpProblem:
    """The original (un-reduced) LP over ``[x_1..x_n, y_1..y_n]``."""
    net, p = problem.network, problem.params
    n = len(net)
    g = p.gamma
    A = np.zeros((n + 3, 2 * n))
    b = np.zeros(n + 3)
    idx = np.arange(n)
    A[idx, idx] = 1.0
    A[idx, n + idx] = 1.0 / net.beta
    b[:n] = net.x_tilde
    A[n, :n] = 1.0
    A[n, n:] = g
    b[n] = net.total_x_tilde
    A[n + 1, n:] = 1.0
    b[n + 1] = p.avatar_capacity_Y
    A[n + 2, n:] = g
    b[n + 2] = p.debrief_budget_Z
    return LpProblem(
        objective_coefficients=np.concatenate([np.ones(n), np.full(n, g)]),
        constraint_matrix=A,
        constraint_senses=(">=",) * n + ("<=",) * 3,
        right_hand_sides=b,
    )


def constraint_residuals(problem: AllocationProblem, plan: AllocationPlan) -> dict[str, float]:
    """Worst violation per constraint family (<= 0 means satisfied).

    ``presence_equality`` is the largest ``|x_v + y_v/beta_v - x~_v|``.
    """
    net, g = problem.network, problem.params.gamma
    x, y = plan.x, plan.y
    gap = x + y / net.beta - net.x_tilde if len(net) else np.zeros(0)

    def worst(a: np.ndarray) -> float:
        return float(a.max()) if a.size else 0.0

    return {
        "presence": worst(-gap),
        "presence_equality": worst(np.abs(gap)),
        "user_time": math.fsum(x) + g * math.fsum(y) - net.total_x_tilde,
        "avatar_capacity": math.fsum(y) - problem.params.avatar_capacity_Y,
        "debrief_budget": g * math.fsum(y) - problem.params.debrief_budget_Z,
        "x_nonneg": worst(-x),
        "y_nonneg": worst(-y),
    }


class PlanError(AssertionError):
    """A computed plan breaks one of the model's constraints."""


def check_plan(problem: AllocationProblem, plan: AllocationPlan, tol: float = TOL) -> None:
    res = constraint_residuals(problem, plan)
    bad = {k: v for k, v in res.items() if v > tol}
    if bad:
        raise PlanError(f"plan violates constraints: {bad}")
    if any(r.z != plan.gamma * r.y for r in plan.rows):
        raise PlanError("debrief time differs from gamma * avatar time")
    if plan.spare_time < -tol:
        raise PlanError(f"negative spare time {plan.spare_time}")
    if abs(plan.x_tilde_total - plan.objective_value - plan.spare_time) > tol:
        raise PlanError("spare time does not match X~ - objective")
