"""Physical parameters, dimensionless coordinates and the short-pulse regime check.

Dimensionless time is ``t~ = |Omega| t``, the dimensionless depth is the
effective optical depth ``z~ = 2 g^2 N z / |Omega|`` and the interaction
coefficient is ``p = g N / |Omega|``. Detunings are fixed at zero.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

C_LIGHT = 299792458.0
REGIME_MARGIN = 0.1
DEFAULT_NT = 200
DEFAULT_NZ = 400


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional constants of the ensemble and the drive (SI units)."""

    coupling_g: float
    density_N: float
    rabi_omega_abs: float
    length_L: float
    gamma: float
    k_signal: float
    area_S: float
    c_light: float = C_LIGHT

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"{f.name} must be a finite positive number, got {v!r}")

    @property
    def depth_rate(self) -> float:
        """2 g^2 N / |Omega|: effective optical depth per metre."""
        return 2.0 * self.coupling_g**2 * self.density_N / self.rabi_omega_abs

    @property
    def p_coeff(self) -> float:
        return self.coupling_g * self.density_N / self.rabi_omega_abs

    @classmethod
    def from_dict(cls, data: dict) -> "PhysicalParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
        missing = {f.name for f in fields(cls) if f.name != "c_light"} - set(data)
        if missing:
            raise ValueError(f"missing parameter keys: {sorted(missing)}")
        return cls(**{k: float(v) for k, v in data.items()})

    @classmethod
    def from_json(cls, path) -> "PhysicalParams":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DimensionlessConfig:
    """Coordinates and grid for all solvers.

    ``nt`` is the number of time steps across the writing window, so
    ``dt = Tw_tilde / nt``; the read-out stage reuses the same step. ``nz`` is
    the number of depth steps across the medium, ``dz = L_tilde / nz``.
    ``L_tilde = 0`` is allowed and describes an empty cell.
    """

    L_tilde: float
    Tw_tilde: float
    Tr_tilde: float | None = None
    p_coeff: float = 1.0
    nt: int = DEFAULT_NT
    nz: int = DEFAULT_NZ

    def __post_init__(self):
        if self.Tr_tilde is None:
            object.__setattr__(self, "Tr_tilde", self.Tw_tilde)
        for name in ("L_tilde", "Tw_tilde", "Tr_tilde", "p_coeff"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
        if self.L_tilde < 0:
            raise ValueError("L_tilde must be non-negative")
        if self.Tw_tilde <= 0 or self.Tr_tilde <= 0:
            raise ValueError("durations must be positive")
        if int(self.nt) != self.nt or int(self.nz) != self.nz or self.nt < 2 or self.nz < 2:
            raise ValueError("nt and nz must be integers >= 2")

    @property
    def dt(self) -> float:
        return self.Tw_tilde / self.nt

    @property
    def dz(self) -> float:
        return self.L_tilde / self.nz

    @property
    def read_steps(self) -> int:
        """Number of time steps covering the read-out window on the shared step."""
        return steps_for(self.Tr_tilde, self.dt)

    def with_(self, **changes) -> "DimensionlessConfig":
        data = asdict(self)
        data.update(changes)
        return DimensionlessConfig(**data)


def steps_for(window: float, dt: float) -> int:
    """Whole number of steps of size ``dt`` covering ``window`` (rounding off float noise)."""
    n = window / dt
    k = int(round(n))
    if abs(n - k) > 1e-9 * max(1.0, n):
        k = int(math.ceil(n))
    return max(k, 1)


def to_dimensionless(
    params: PhysicalParams, Tw: float, Tr: float | None = None, nt: int = DEFAULT_NT, nz: int = DEFAULT_NZ
) -> DimensionlessConfig:
    if Tr is None:
        Tr = Tw
    if not (Tw > 0 and Tr > 0 and math.isfinite(Tw) and math.isfinite(Tr)):
        raise ValueError("pulse durations must be finite and positive")
    w = params.rabi_omega_abs
    return DimensionlessConfig(
        L_tilde=params.depth_rate * params.length_L,
        Tw_tilde=w * Tw,
        Tr_tilde=w * Tr,
        p_coeff=params.p_coeff,
        nt=nt,
        nz=nz,
    )


def from_dimensionless(config: DimensionlessConfig, params: PhysicalParams) -> dict:
    """Invert ``to_dimensionless`` given the same drive and density: SI durations and length."""
    w = params.rabi_omega_abs
    return {
        "Tw": config.Tw_tilde / w,
        "Tr": config.Tr_tilde / w,
        "length_L": config.L_tilde / params.depth_rate,
    }


@dataclass(frozen=True)
class RegimeReport:
    ok: bool
    decay_ratio: float  # gamma * T
    transit_ratio: float  # L / (c T)
    margin: float

    def to_dict(self) -> dict:
        return asdict(self)


def validate_regime(params: PhysicalParams, T: float, margin: float = REGIME_MARGIN) -> RegimeReport:
    """Check ``1/gamma >> T >> L/c`` with "much" meaning a factor ``1/margin``."""
    decay = params.gamma * T
    transit = params.length_L / (params.c_light * T)
    return RegimeReport(decay <= margin and transit <= margin, decay, transit, margin)
