"""Dense two-phase simplex with Bland's rule.

Small, deterministic LP solver used as the reference oracle for the
closed-form allocation solver. Instances here are tiny (a few hundred
variables), so the tableau is kept dense and no presolve is attempted.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-10
FEASIBILITY_TOL = 1e-7

SENSES = ("<=", ">=", "=")
DIRECTIONS = ("minimize", "maximize")


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LpProblem:
    """Linear program ``min/max c.x  s.t.  A x (<=|>=|=) b,  lb <= x <= ub``."""

    objective_coefficients: np.ndarray
    constraint_matrix: np.ndarray
    constraint_senses: tuple[str, ...]
    right_hand_sides: np.ndarray
    variable_lower_bounds: np.ndarray | None = None
    variable_upper_bounds: np.ndarray | None = None
    direction: str = "minimize"

    def __post_init__(self) -> None:
        c = np.array(self.objective_coefficients, dtype=float).reshape(-1)
        n = c.size
        A = np.array(self.constraint_matrix, dtype=float)
        if A.ndim == 1 and A.size == 0:
            A = A.reshape(0, n)
        if A.ndim != 2:
            raise ValueError("constraint_matrix must be 2-D")
        m = A.shape[0]
        if A.shape[1] != n:
            raise ValueError(
                f"constraint_matrix has {A.shape[1]} columns, expected {n}"
            )
        b = np.array(self.right_hand_sides, dtype=float).reshape(-1)
        if b.size != m:
            raise ValueError(f"right_hand_sides has {b.size} entries, expected {m}")
        senses = tuple(self.constraint_senses)
        if len(senses) != m:
            raise ValueError(f"constraint_senses has {len(senses)} entries, expected {m}")
        bad = [s for s in senses if s not in SENSES]
        if bad:
            raise ValueError(f"unknown constraint sense(s): {bad}")
        lb = (
            np.zeros(n)
            if self.variable_lower_bounds is None
            else np.array(self.variable_lower_bounds, dtype=float).reshape(-1)
        )
        ub = (
            np.full(n, np.inf)
            if self.variable_upper_bounds is None
            else np.array(self.variable_upper_bounds, dtype=float).reshape(-1)
        )
        if lb.size != n or ub.size != n:
            raise ValueError("bound vectors must match the number of variables")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")

        for name, arr in (("objective_coefficients", c), ("constraint_matrix", A),
                          ("right_hand_sides", b)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains NaN or infinite entries")
        if np.any(np.isnan(lb)) or np.any(np.isnan(ub)):
            raise ValueError("variable bounds contain NaN")
        if np.any(lb == np.inf) or np.any(ub == -np.inf):
            raise ValueError("lower bounds cannot be +inf nor upper bounds -inf")
        if np.any(lb > ub):
            j = int(np.argmax(lb > ub))
            raise ValueError(f"variable {j}: lower bound {lb[j]} exceeds upper bound {ub[j]}")

        object.__setattr__(self, "objective_coefficients", _frozen(c))
        object.__setattr__(self, "constraint_matrix", _frozen(A))
        object.__setattr__(self, "constraint_senses", senses)
        object.__setattr__(self, "right_hand_sides", _frozen(b))
        object.__setattr__(self, "variable_lower_bounds", _frozen(lb))
        object.__setattr__(self, "variable_upper_bounds", _frozen(ub))

    @property
    def num_variables(self) -> int:
        return self.objective_coefficients.size

    @property
    def num_constraints(self) -> int:
        return self.right_hand_sides.size

    def objective_at(self, x: np.ndarray) -> float:
        return float(self.objective_coefficients @ x)

    def max_violation(self, x: np.ndarray) -> float:
        """Largest absolute constraint or bound violation at ``x`` (0 if feasible)."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.num_constraints:
            lhs = self.constraint_matrix @ x
            for s, l, r in zip(self.constraint_senses, lhs, self.right_hand_sides):
                if s == "<=":
                    worst = max(worst, l - r)
                elif s == ">=":
                    worst = max(worst, r - l)
                else:
                    worst = max(worst, abs(l - r))
        if x.size:
            worst = max(worst, float(np.max(self.variable_lower_bounds - x)))
            worst = max(worst, float(np.max(x - self.variable_upper_bounds)))
        return worst


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    objective: float
    variable_values: np.ndarray = field(repr=False)
    iterations: int
    pivots: tuple[tuple[int, int], ...] = field(default=(), repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    """Tableau rows ``[A | b]`` with a trailing reduced-cost row ``[d | -z]``."""

    def __init__(self, T: np.ndarray, basis: list[int], verbose: bool) -> None:
        self.T = T
        self.basis = basis
        self.verbose = verbose
        self.pivots: list[tuple[int, int]] = []

    @property
    def m(self) -> int:
        return self.T.shape[0] - 1

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        rows = np.nonzero(col)[0]
        if rows.size:
            T[rows] -= np.outer(col[rows], T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0
        self.basis[r] = j
        self.pivots.append((r, j))
        if self.verbose and logger.isEnabledFor(logging.DEBUG):
            logger.debug("pivot %d: row %d, column %d\n%s",
                         len(self.pivots), r, j, np.array2string(T, precision=4))

    def run(self, allowed: np.ndarray) -> str:
        """Bland's-rule iterations until optimal or unbounded."""
        T = self.T
        m = self.m
        while True:
            d = T[-1, :-1]
            cand = np.nonzero((d < -PIVOT_TOL) & allowed)[0]
            if cand.size == 0:
                return "optimal"
            j = int(cand[0])
            col = T[:m, j]
            pos = np.nonzero(col > PIVOT_TOL)[0]
            if pos.size == 0:
                return "unbounded"
            ratios = T[pos, -1] / col[pos]
            best = ratios.min()
            tie = pos[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = int(min(tie, key=lambda i: self.basis[i]))
            self.pivot(r, j)


def _standardize(problem: LpProblem):
    """Rewrite in terms of nonnegative variables: ``x = offset + M @ x'``."""
    n = problem.num_variables
    lb, ub = problem.variable_lower_bounds, problem.variable_upper_bounds
    offset = np.zeros(n)
    cols: list[np.ndarray] = []
    extra_rows: list[tuple[int, float]] = []  # (column index in x', upper bound)
    for j in range(n):
        e = np.zeros(n)
        if np.isfinite(lb[j]):
            offset[j] = lb[j]
            e[j] = 1.0
            cols.append(e)
            if np.isfinite(ub[j]):
                extra_rows.append((len(cols) - 1, ub[j] - lb[j]))
        elif np.isfinite(ub[j]):
            offset[j] = ub[j]
            e[j] = -1.0
            cols.append(e)
        else:
            e[j] = 1.0
            cols.append(e)
            cols.append(-e)
    M = np.column_stack(cols) if cols else np.zeros((n, 0))
    k = M.shape[1]

    A = problem.constraint_matrix @ M if problem.num_constraints else np.zeros((0, k))
    b = problem.right_hand_sides - problem.constraint_matrix @ offset
    senses = list(problem.constraint_senses)
    if extra_rows:
        B = np.zeros((len(extra_rows), k))
        for i, (col, bound) in enumerate(extra_rows):
            B[i, col] = 1.0
        A = np.vstack([A, B])
        b = np.concatenate([b, [bound for _, bound in extra_rows]])
        senses += ["<="] * len(extra_rows)

    c = problem.objective_coefficients
    if problem.direction == "maximize":
        c = -c
    return c @ M, float(c @ offset), A, b, senses, M, offset


def solve_lp(problem: LpProblem, verbose: bool = False) -> LpSolution:
    """Solve ``problem`` by the two-phase simplex method.

    Returns a basic optimal solution, or a solution with status
    ``infeasible``/``unbounded``. With ``verbose`` the tableau after every
    pivot is logged at DEBUG level.
    """
    c, c0, A, b, senses, M, offset = _standardize(problem)
    m, k = A.shape
    nan = np.full(problem.num_variables, np.nan)

    if m == 0:
        if np.any(c < -PIVOT_TOL):
            return LpSolution("unbounded", _signed(problem, -np.inf), nan, 0)
        x = offset.copy()
        return LpSolution("optimal", problem.objective_at(x), x, 0)

    flip = b < 0
    A = np.where(flip[:, None], -A, A)
    b = np.abs(b)
    senses = [
        {"<=": ">=", ">=": "<=", "=": "="}[s] if f else s for s, f in zip(senses, flip)
    ]

    n_slack = sum(s != "=" for s in senses)
    n_art = sum(s != "<=" for s in senses)
    ncol = k + n_slack + n_art
    T = np.zeros((m + 1, ncol + 1))
    T[:m, :k] = A
    T[:m, -1] = b
    basis: list[int] = []
    s_idx, a_idx = k, k + n_slack
    for i, s in enumerate(senses):
        if s == "<=":
            T[i, s_idx] = 1.0
            basis.append(s_idx)
            s_idx += 1
        elif s == ">=":
            T[i, s_idx] = -1.0
            s_idx += 1
            T[i, a_idx] = 1.0
            basis.append(a_idx)
            a_idx += 1
        else:
            T[i, a_idx] = 1.0
            basis.append(a_idx)
            a_idx += 1
    artificial = np.zeros(ncol, dtype=bool)
    artificial[k + n_slack:] = True

    tab = _Tableau(T, basis, verbose)

    # phase 1: minimise the sum of artificials
    if n_art:
        art_rows = [i for i, j in enumerate(basis) if artificial[j]]
        T[-1, :] = -T[art_rows].sum(axis=0)
        T[-1, :ncol][artificial] = 0.0
        tab.run(np.ones(ncol, dtype=bool))
        scale = max(1.0, float(np.max(b)))
        if -T[-1, -1] > FEASIBILITY_TOL * scale:
            return LpSolution("infeasible", np.nan, nan, len(tab.pivots), tuple(tab.pivots))
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if artificial[tab.basis[i]]:
                row = T[i, :ncol]
                cand = np.nonzero((np.abs(row) > PIVOT_TOL) & ~artificial)[0]
                if cand.size:
                    tab.pivot(i, int(cand[0]))
                    keep.append(i)
            else:
                keep.append(i)
        if len(keep) < m:
            tab.T = T = np.vstack([T[keep], T[-1:]])
            tab.basis = [tab.basis[i] for i in keep]
            m = len(keep)

    # phase 2
    cost = np.zeros(ncol)
    cost[:k] = c
    T[-1, :] = 0.0
    T[-1, :ncol] = cost
    for i, j in enumerate(tab.basis):
        if cost[j] != 0.0:
            T[-1] -= cost[j] * T[i]
    status = tab.run(~artificial)
    iters = len(tab.pivots)
    if status == "unbounded":
        return LpSolution("unbounded", _signed(problem, -np.inf), nan, iters, tuple(tab.pivots))

    xs = np.zeros(ncol)
    for i, j in enumerate(tab.basis):
        xs[j] = T[i, -1]
    x = offset + M @ xs[:k]
    x = np.clip(x, problem.variable_lower_bounds, problem.variable_upper_bounds)
    return LpSolution("optimal", problem.objective_at(x), x, iters, tuple(tab.pivots))


def _signed(problem: LpProblem, value: float) -> float:
    return -value if problem.direction == "maximize" else value


def lp(
    c: Sequence[float],
    rows: Sequence[tuple[Sequence[float], str, float]] = (),
    *,
    lower: Sequence[float] | None = None,
    upper: Sequence[float] | None = None,
    maximize: bool = False,
) -> LpProblem:
    """Convenience constructor from ``(coefficients, sense, rhs)`` rows."""
    n = len(c)
    A = np.array([r[0] for r in rows], dtype=float).reshape(len(rows), n)
    return LpProblem(
        objective_coefficients=np.asarray(c, dtype=float),
        constraint_matrix=A,
        constraint_senses=tuple(r[1] for r in rows),
        right_hand_sides=np.array([r[2] for r in rows], dtype=float),
        variable_lower_bounds=None if lower is None else np.asarray(lower, dtype=float),
        variable_upper_bounds=None if upper is None else np.asarray(upper, dtype=float),
        direction="maximize" if maximize else "minimize",
    )
