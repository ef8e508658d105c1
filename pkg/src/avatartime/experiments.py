"""Gamma sweeps over avatar-capacity scenarios and reinvestment arithmetic."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from . import egonet
from .allocation import AllocationProblem, build_lp, solve
from .egonet import DEFAULT_LAYERS, EgoNetwork, LayerSpec, exclusive_size_means
from .params import DEFAULT_BETA, DEFAULT_ZMAX, HOURS_PER_YEAR, ModelParams, ParameterError
from .simplex import solve_lp

GAMMA_GAP = 1e-6
DEFAULT_POINTS = 40
DEFAULT_Y_MULTIPLIERS = (0.5, 1.0, 2.0)
FIG4_Z = 300.0
ORACLE_RTOL = 1e-6

SWEEP_HEADER = ["gamma", "Y", "spare_hours", "total_y_hours", "binding_budget"]
REINVEST_HEADER = ["layer", "spare_hours", "new_alters", "current_layer_size"]

NetworkSource = Union[str, int]


def default_gamma_grid(
    beta: float, points: int = DEFAULT_POINTS, gamma_min: float = 0.0,
    gamma_max: float | None = None,
) -> tuple[float, ...]:
    """Evenly spaced gammas stopping just short of ``1/beta``."""
    if gamma_max is None:
        gamma_max = 1.0 / beta - GAMMA_GAP
    if points <= 0:
        return ()
    return tuple(float(g) for g in np.linspace(gamma_min, gamma_max, points))


@dataclass(frozen=True)
class SweepConfig:
    gamma_grid: tuple[float, ...]
    y_scenarios: tuple[float, ...]
    Z: float = FIG4_Z
    beta: float = DEFAULT_BETA
    network_source: NetworkSource = "fixture:fig4"
    debrief_cap_Zmax: float = DEFAULT_ZMAX

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma_grid", tuple(float(g) for g in self.gamma_grid))
        object.__setattr__(self, "y_scenarios", tuple(float(y) for y in self.y_scenarios))
        if not self.beta > 0:
            raise ParameterError(f"beta must be positive, got {self.beta}")
        limit = 1.0 / self.beta
        for g in self.gamma_grid:
            if not (0.0 <= g < limit):
                raise ParameterError(
                    f"gamma {g} outside [0, 1/beta) = [0, {limit:.6f}); "
                    "the sweep must stay where delegation pays off"
                )
        for y in self.y_scenarios:
            if not (math.isfinite(y) and y >= 0):
                raise ParameterError(f"avatar capacity must be nonnegative, got {y}")
        if not 0 <= self.Z <= self.debrief_cap_Zmax:
            raise ParameterError(f"Z {self.Z} must lie in [0, Z_max={self.debrief_cap_Zmax}]")


@dataclass(frozen=True)
class SweepRecord:
    gamma: float
    Y: float
    spare_time: float
    total_y: float
    binding_budget: str
    oracle_ok: bool | None = None


def load_network(source: NetworkSource) -> EgoNetwork:
    if isinstance(source, int):
        return egonet.generate(source)
    return egonet.resolve_network(source)


def sweep_config_for(
    net: EgoNetwork,
    network_source: NetworkSource = "fixture:fig4",
    beta: float = DEFAULT_BETA,
    Z: float = FIG4_Z,
    points: int = DEFAULT_POINTS,
    y_multipliers: Sequence[float] = DEFAULT_Y_MULTIPLIERS,
    gamma_min: float = 0.0,
    gamma_max: float | None = None,
    debrief_cap_Zmax: float = DEFAULT_ZMAX,
) -> SweepConfig:
    """Config whose avatar-capacity scenarios are multiples of the network's X~."""
    return SweepConfig(
        gamma_grid=default_gamma_grid(beta, points, gamma_min, gamma_max),
        y_scenarios=tuple(m * net.total_x_tilde for m in y_multipliers),
        Z=Z,
        beta=beta,
        network_source=network_source,
        debrief_cap_Zmax=debrief_cap_Zmax,
    )


def sweep_params(config: SweepConfig, gamma: float, Y: float) -> ModelParams:
    return ModelParams(
        avatar_capacity_Y=Y,
        debrief_budget_Z=config.Z,
        debrief_cap_Zmax=config.debrief_cap_Zmax,
        horizon_hours=max(HOURS_PER_YEAR, Y),
        gamma_override=gamma,
        default_beta=config.beta,
    )


def run_sweep(
    config: SweepConfig, network: EgoNetwork | None = None, verify: bool = False
) -> list[SweepRecord]:
    """One record per (Y, gamma), sorted by Y then gamma.

    Every alter's beta is set to ``config.beta``. With ``verify`` each point
    is also solved by the simplex oracle and flagged in ``oracle_ok``.
    """
    net = network if network is not None else load_network(config.network_source)
    net = net.with_beta(config.beta)
    records = []
    for Y in sorted(config.y_scenarios):
        for gamma in sorted(config.gamma_grid):
            problem = AllocationProblem(net, sweep_params(config, gamma, Y), allow_empty=True)
            plan = solve(problem)
            ok = None
            if verify:
                sol = solve_lp(build_lp(problem))
                ok = sol.optimal and abs(sol.objective - plan.objective_value) <= (
                    ORACLE_RTOL * max(1.0, abs(plan.objective_value))
                )
            records.append(
                SweepRecord(gamma, Y, plan.spare_time, plan.Y_used, plan.binding_budget, ok)
            )
    return records


def reinvest_capacity(
    spare: float, layer_specs: Sequence[LayerSpec] = DEFAULT_LAYERS
) -> dict[str, int]:
    """Whole new alters per layer that ``spare`` hours could sustain."""
    if not spare >= 0:
        raise ParameterError(f"spare time must be nonnegative, got {spare}")
    return {s.name: math.floor(spare / s.per_alter_time_mean) for s in layer_specs}


@dataclass(frozen=True)
class ReinvestmentRow:
    layer: str
    spare_hours: float
    new_alters: int
    current_layer_size: float


def reinvestment_rows(
    spare: float, layer_specs: Sequence[LayerSpec] = DEFAULT_LAYERS
) -> list[ReinvestmentRow]:
    counts = reinvest_capacity(spare, layer_specs)
    return [
        ReinvestmentRow(s.name, spare, counts[s.name], size)
        for s, size in zip(layer_specs, exclusive_size_means(layer_specs))
    ]


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def _open_for_write(path: str | Path):
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror}") from e


def export_records(records: Iterable[SweepRecord], path: str | Path) -> None:
    """Write sweep records as CSV; an ``oracle_ok`` column is added when verified."""
    records = list(records)
    verified = any(r.oracle_ok is not None for r in records)
    header = SWEEP_HEADER + (["oracle_ok"] if verified else [])
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in records:
            row = [_fmt(r.gamma), _fmt(r.Y), _fmt(r.spare_time), _fmt(r.total_y),
                   r.binding_budget]
            if verified:
                row.append("" if r.oracle_ok is None else str(r.oracle_ok).lower())
            w.writerow(row)


def parse_records(path: str | Path) -> list[SweepRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or reader.fieldnames[:5] != SWEEP_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        out = []
        for row in reader:
            flag = row.get("oracle_ok")
            out.append(SweepRecord(
                gamma=float(row["gamma"]),
                Y=float(row["Y"]),
                spare_time=float(row["spare_hours"]),
                total_y=float(row["total_y_hours"]),
                binding_budget=row["binding_budget"],
                oracle_ok=None if not flag else flag == "true",
            ))
        return out


def export_reinvestment(rows: Iterable[ReinvestmentRow], path: str | Path) -> None:
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REINVEST_HEADER)
        for r in rows:
            w.writerow([r.layer, _fmt(r.spare_hours), r.new_alters, _fmt(r.current_layer_size)])
