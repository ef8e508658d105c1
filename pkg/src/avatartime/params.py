"""Scalar model constants and the calibration formulas that derive them.

All times are in hours over a common horizon (one year by default).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

HOURS_PER_YEAR = 8760.0
SOCIALIZING_FRACTION = 0.2

# presence scores for human-human vs human-computer interaction
PRESENCE_HUMAN = 4.182
PRESENCE_AVATAR = 3.236
COMPRESSION_RATIO = 0.54
ANTHROPOMORPHISM = 7.0 / 6.0
DAILY_ATTENTION_MINUTES = 50.0


class ParameterError(ValueError):
    """A model parameter violates its domain."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParameterError(msg)


def _finite(name: str, value: float) -> float:
    value = float(value)
    _require(math.isfinite(value), f"{name} must be finite, got {value!r}")
    return value


def expected_socializing_time(horizon: float, fraction: float) -> float:
    """Hours spent socializing over ``horizon`` at the given time fraction."""
    horizon = _finite("horizon", horizon)
    fraction = _finite("fraction", fraction)
    _require(horizon > 0, f"horizon must be positive, got {horizon}")
    _require(0.0 <= fraction <= 1.0, f"fraction must lie in [0, 1], got {fraction}")
    return horizon * fraction


def beta_from_presence_scores(sp_human: float, sp_avatar: float) -> float:
    """Avatar-time multiplier giving the same presence as face-to-face time.

    An avatar needs ``beta`` hours to match one hour of direct contact,
    so ``beta = sp_human / sp_avatar`` and is at least 1.
    """
    sp_human = _finite("sp_human", sp_human)
    sp_avatar = _finite("sp_avatar", sp_avatar)
    _require(sp_avatar > 0, f"avatar presence score must be positive, got {sp_avatar}")
    _require(
        sp_human >= sp_avatar,
        f"human presence score {sp_human} is below avatar score {sp_avatar}",
    )
    return sp_human / sp_avatar


def gamma_from_cues(compression_c: float, delta: float) -> float:
    """Debriefing cost per hour of avatar socialization: ``c * delta``."""
    compression_c = _finite("compression_c", compression_c)
    delta = _finite("delta", delta)
    _require(0 < compression_c <= 1, f"compression ratio must lie in (0, 1], got {compression_c}")
    _require(delta > 0, f"anthropomorphism factor must be positive, got {delta}")
    return compression_c * delta


def debrief_time(y_v: float, gamma: float) -> float:
    y_v = _finite("y_v", y_v)
    gamma = _finite("gamma", gamma)
    _require(y_v >= 0, f"avatar time must be nonnegative, got {y_v}")
    _require(gamma >= 0, f"gamma must be nonnegative, got {gamma}")
    return gamma * y_v


def zmax_from_attention(daily_minutes: float, days: float) -> float:
    """Debriefing cap in hours from a daily attention threshold in minutes."""
    daily_minutes = _finite("daily_minutes", daily_minutes)
    days = _finite("days", days)
    _require(daily_minutes >= 0, f"daily_minutes must be nonnegative, got {daily_minutes}")
    _require(days >= 0, f"days must be nonnegative, got {days}")
    return daily_minutes * days / 60.0


# presence ratio 4.182/3.236, rounded as used for the sweeps
DEFAULT_BETA = 1.29
DEFAULT_ZMAX = zmax_from_attention(DAILY_ATTENTION_MINUTES, 365)


@dataclass(frozen=True)
class ModelParams:
    """Per-ego model constants.

    ``gamma`` is derived as ``compression_c * anthropomorphism_delta`` unless
    ``gamma_override`` is given (0 is a legal override). Construction fails
    on any out-of-domain value; nothing is clamped.
    """

    avatar_capacity_Y: float = HOURS_PER_YEAR
    debrief_budget_Z: float = DEFAULT_ZMAX
    debrief_cap_Zmax: float = DEFAULT_ZMAX
    horizon_hours: float = HOURS_PER_YEAR
    socializing_fraction: float = SOCIALIZING_FRACTION
    compression_c: float = COMPRESSION_RATIO
    anthropomorphism_delta: float = ANTHROPOMORPHISM
    gamma_override: float | None = None
    default_beta: float = DEFAULT_BETA

    def __post_init__(self) -> None:
        for name in ("avatar_capacity_Y", "debrief_budget_Z", "debrief_cap_Zmax",
                     "horizon_hours", "socializing_fraction", "compression_c",
                     "anthropomorphism_delta", "default_beta"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        _require(self.horizon_hours > 0, "horizon_hours must be positive")
        _require(0 <= self.socializing_fraction <= 1, "socializing_fraction must lie in [0, 1]")
        _require(0 < self.compression_c <= 1,
                 f"compression_c must lie in (0, 1], got {self.compression_c}")
        _require(self.anthropomorphism_delta > 0,
                 f"anthropomorphism_delta must be positive, got {self.anthropomorphism_delta}")
        if self.gamma_override is not None:
            g = _finite("gamma_override", self.gamma_override)
            _require(g >= 0, f"gamma must be nonnegative, got {g}")
            object.__setattr__(self, "gamma_override", g)
        _require(self.avatar_capacity_Y >= 0,
                 f"avatar_capacity_Y must be nonnegative, got {self.avatar_capacity_Y}")
        _require(self.avatar_capacity_Y <= self.horizon_hours,
                 f"avatar_capacity_Y {self.avatar_capacity_Y} exceeds horizon {self.horizon_hours}")
        _require(self.debrief_budget_Z >= 0,
                 f"debrief_budget_Z must be nonnegative, got {self.debrief_budget_Z}")
        _require(self.debrief_budget_Z <= self.debrief_cap_Zmax,
                 f"debrief_budget_Z {self.debrief_budget_Z} exceeds Z_max {self.debrief_cap_Zmax}")
        _require(self.default_beta >= 1, f"default_beta must be >= 1, got {self.default_beta}")

    @property
    def gamma(self) -> float:
        if self.gamma_override is not None:
            return self.gamma_override
        return gamma_from_cues(self.compression_c, self.anthropomorphism_delta)

    @property
    def x_tilde_total_expected(self) -> float:
        return expected_socializing_time(self.horizon_hours, self.socializing_fraction)

    @property
    def debrief_limited_avatar_time(self) -> float:
        """``Z / gamma``: avatar hours the debrief budget can absorb (inf if gamma is 0)."""
        if self.gamma == 0:
            return math.inf
        return self.debrief_budget_Z / self.gamma

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        unknown = set(data) - set(cls.__dataclass_fields__)
        _require(not unknown, f"unknown model parameter(s): {sorted(unknown)}")
        return cls(**data)
