"""Synthetic layered ego networks and their JSON file format.

Layer sizes and per-alter yearly contact times follow published averages
for three concentric circles (support clique, sympathy group, active
network). Exclusive layer sizes are Poisson; per-alter times are Gamma
with the layer mean and a fixed coefficient of variation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .params import DEFAULT_BETA

MIN_ALTER_TIME = 0.01
DEFAULT_TIME_CV = 0.5


class NetworkError(ValueError):
    """Invalid ego network, layer specification, or network file."""


@dataclass(frozen=True)
class LayerSpec:
    name: str
    cumulative_size_mean: float
    per_alter_time_mean: float  # hours/year


DEFAULT_LAYERS: tuple[LayerSpec, ...] = (
    LayerSpec("support_clique", 4.6, 74.0),
    LayerSpec("sympathy_group", 14.3, 38.72),
    LayerSpec("active_network", 132.5, 8.81),
)

# reported per-layer totals (hours/year), rounded at the source
PUBLISHED_LAYER_TOTALS = {
    "support_clique": 340.65,
    "sympathy_group": 375.83,
    "active_network": 1041.51,
}


def exclusive_size_means(specs: Sequence[LayerSpec]) -> list[float]:
    out, prev = [], 0.0
    for s in specs:
        out.append(s.cumulative_size_mean - prev)
        prev = s.cumulative_size_mean
    return out


def expected_total_time(specs: Sequence[LayerSpec]) -> float:
    return sum(
        n * s.per_alter_time_mean for n, s in zip(exclusive_size_means(specs), specs)
    )


def validate_layer_specs(specs: Sequence[LayerSpec]) -> None:
    """Check ordering constraints; an all-zero spec is accepted as degenerate."""
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise NetworkError(f"duplicate layer names: {names}")
    for s in specs:
        if not (math.isfinite(s.cumulative_size_mean) and math.isfinite(s.per_alter_time_mean)):
            raise NetworkError(f"layer {s.name!r}: non-finite mean")
        if s.cumulative_size_mean < 0 or s.per_alter_time_mean < 0:
            raise NetworkError(f"layer {s.name!r}: negative mean")
    if all(s.cumulative_size_mean == 0 for s in specs):
        return
    for inner, outer in zip(specs, specs[1:]):
        if not outer.cumulative_size_mean > inner.cumulative_size_mean:
            raise NetworkError(
                f"cumulative size must increase outward: {inner.name!r} "
                f"{inner.cumulative_size_mean} -> {outer.name!r} {outer.cumulative_size_mean}"
            )
        if not outer.per_alter_time_mean < inner.per_alter_time_mean:
            raise NetworkError(
                f"per-alter time must decrease outward: {inner.name!r} "
                f"{inner.per_alter_time_mean} -> {outer.name!r} {outer.per_alter_time_mean}"
            )
    for s, n in zip(specs, exclusive_size_means(specs)):
        if n > 0 and s.per_alter_time_mean <= 0:
            raise NetworkError(f"layer {s.name!r}: populated layer needs a positive time mean")


AlterId = Union[int, str]


@dataclass(frozen=True)
class Alter:
    id: AlterId
    layer: str
    x_tilde: float  # baseline yearly hours with this contact, no avatar
    beta: float

    def __post_init__(self) -> None:
        if not (isinstance(self.x_tilde, (int, float)) and math.isfinite(self.x_tilde)
                and self.x_tilde > 0):
            raise NetworkError(f"alter {self.id!r}: x_tilde must be a positive number, "
                               f"got {self.x_tilde!r}")
        if not (isinstance(self.beta, (int, float)) and math.isfinite(self.beta)
                and self.beta >= 1):
            raise NetworkError(f"alter {self.id!r}: beta must be >= 1, got {self.beta!r}")
        object.__setattr__(self, "x_tilde", float(self.x_tilde))
        object.__setattr__(self, "beta", float(self.beta))


@dataclass(frozen=True)
class EgoNetwork:
    alters: tuple[Alter, ...]
    seed: int | None = None
    total_x_tilde: float = field(init=False)

    def __post_init__(self) -> None:
        alters = tuple(self.alters)
        ids = [a.id for a in alters]
        if len(set(ids)) != len(ids):
            seen: set = set()
            dup = next(i for i in ids if i in seen or seen.add(i))
            raise NetworkError(f"duplicate alter id {dup!r}")
        object.__setattr__(self, "alters", alters)
        object.__setattr__(self, "total_x_tilde", math.fsum(a.x_tilde for a in alters))

    def __len__(self) -> int:
        return len(self.alters)

    @property
    def x_tilde(self) -> np.ndarray:
        return np.array([a.x_tilde for a in self.alters], dtype=float)

    @property
    def beta(self) -> np.ndarray:
        return np.array([a.beta for a in self.alters], dtype=float)

    def layer_sizes(self) -> dict[str, int]:
        sizes: dict[str, int] = {}
        for a in self.alters:
            sizes[a.layer] = sizes.get(a.layer, 0) + 1
        return sizes

    def with_beta(self, beta: float) -> "EgoNetwork":
        return EgoNetwork(tuple(replace(a, beta=beta) for a in self.alters), self.seed)

    def scaled(self, k: float) -> "EgoNetwork":
        return EgoNetwork(tuple(replace(a, x_tilde=a.x_tilde * k) for a in self.alters),
                          self.seed)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "alters": [
                {"id": a.id, "layer": a.layer, "x_tilde": a.x_tilde, "beta": a.beta}
                for a in self.alters
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8", newline="\n")

    @classmethod
    def from_dict(cls, data: object) -> "EgoNetwork":
        if not isinstance(data, dict):
            raise NetworkError("network file must hold a JSON object")
        extra = set(data) - {"seed", "alters"}
        if extra:
            raise NetworkError(f"unknown top-level field(s): {sorted(extra)}")
        if "alters" not in data:
            raise NetworkError("missing field 'alters'")
        seed = data.get("seed")
        if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
            raise NetworkError(f"seed must be an integer or null, got {seed!r}")
        if not isinstance(data["alters"], list):
            raise NetworkError("'alters' must be a list")
        alters = []
        for i, row in enumerate(data["alters"]):
            if not isinstance(row, dict):
                raise NetworkError(f"alter #{i}: expected an object")
            aid = row.get("id", f"#{i}")
            keys = set(row)
            if keys != {"id", "layer", "x_tilde", "beta"}:
                missing = {"id", "layer", "x_tilde", "beta"} - keys
                detail = (f"missing field(s) {sorted(missing)}" if missing
                          else f"unknown field(s) {sorted(keys - {'id', 'layer', 'x_tilde', 'beta'})}")
                raise NetworkError(f"alter {aid!r}: {detail}")
            if isinstance(aid, bool) or not isinstance(aid, (int, str)):
                raise NetworkError(f"alter #{i}: id must be an integer or string")
            if not isinstance(row["layer"], str):
                raise NetworkError(f"alter {aid!r}: field 'layer' must be a string")
            for key in ("x_tilde", "beta"):
                if isinstance(row[key], bool) or not isinstance(row[key], (int, float)):
                    raise NetworkError(f"alter {aid!r}: field {key!r} must be a number")
            alters.append(Alter(aid, row["layer"], float(row["x_tilde"]), float(row["beta"])))
        return cls(tuple(alters), seed)


def load(path: str | Path) -> EgoNetwork:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot read network file {path}: {e.strerror}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise NetworkError(f"{path}: invalid JSON ({e})") from e
    try:
        return EgoNetwork.from_dict(data)
    except NetworkError as e:
        raise NetworkError(f"{path}: {e}") from e


def load_fixture(name: str) -> EgoNetwork:
    """Load a bundled network (``"fig3"`` two-alter example or ``"fig4"``)."""
    res = resources.files("avatartime") / "data" / f"{name}.json"
    if not res.is_file():
        raise NetworkError(f"no bundled fixture named {name!r}")
    return EgoNetwork.from_dict(json.loads(res.read_text(encoding="utf-8")))


def resolve_network(source: str) -> EgoNetwork:
    """``fixture:<name>`` refers to a bundled network, anything else is a path."""
    if source.startswith("fixture:"):
        return load_fixture(source.split(":", 1)[1])
    return load(source)


def generate(
    seed: int,
    layer_specs: Sequence[LayerSpec] = DEFAULT_LAYERS,
    default_beta: float = DEFAULT_BETA,
    time_cv: float = DEFAULT_TIME_CV,
) -> EgoNetwork:
    """Sample one ego network; the same arguments always give the same network.

    Alters get sequential integer ids from the innermost layer outward.
    """
    validate_layer_specs(layer_specs)
    if not time_cv > 0:
        raise NetworkError(f"time_cv must be positive, got {time_cv}")
    shape = 1.0 / time_cv**2
    rng = np.random.default_rng(seed)
    alters: list[Alter] = []
    for spec, size_mean in zip(layer_specs, exclusive_size_means(layer_specs)):
        size = int(rng.poisson(size_mean)) if size_mean > 0 else 0
        if size == 0:
            continue
        times = rng.gamma(shape, spec.per_alter_time_mean / shape, size)
        times = np.maximum(times, MIN_ALTER_TIME)
        for t in times:
            alters.append(Alter(len(alters), spec.name, float(t), default_beta))
    return EgoNetwork(tuple(alters), seed)


def layer_totals(
    net: EgoNetwork, layers: Iterable[str] | None = None
) -> dict[str, float]:
    """Total baseline hours per layer; listed ``layers`` appear even when empty."""
    names = list(layers) if layers is not None else [s.name for s in DEFAULT_LAYERS]
    totals = {name: [] for name in names}
    for a in net.alters:
        totals.setdefault(a.layer, []).append(a.x_tilde)
    return {name: math.fsum(ts) for name, ts in totals.items()}


def build_size_matched_network(
    size: int,
    total: float,
    start_seed: int = 0,
    layer_specs: Sequence[LayerSpec] = DEFAULT_LAYERS,
    default_beta: float = DEFAULT_BETA,
    max_tries: int = 100_000,
) -> EgoNetwork:
    """First generated network with exactly ``size`` alters, rescaled to ``total`` hours."""
    for seed in range(start_seed, start_seed + max_tries):
        net = generate(seed, layer_specs, default_beta)
        if len(net) == size:
            return net.scaled(total / net.total_x_tilde)
    raise NetworkError(f"no network with {size} alters in {max_tries} seeds")
