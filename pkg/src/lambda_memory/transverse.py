"""Transverse Fourier modes, their paraxial phase factors and capacity bounds.

No transverse propagation is simulated: a mode ``q`` only changes the
retrieved field through a phase, global for forward read-out and inside the
depth integral for backward read-out. Capacity figures are geometric bounds.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import asdict, dataclass

PARAXIAL_LIMIT = 0.1
PLACEMENTS = ("global", "in_integral")


@dataclass(frozen=True)
class TransverseMode:
    qx: float
    qy: float

    def __post_init__(self):
        if not (math.isfinite(self.qx) and math.isfinite(self.qy)):
            raise ValueError("wavevector components must be finite")

    @property
    def q2(self) -> float:
        return self.qx * self.qx + self.qy * self.qy

    @property
    def q(self) -> float:
        return math.hypot(self.qx, self.qy)


def diffraction_phase(mode: TransverseMode, z: float, k_s: float, placement: str = "global") -> complex:
    """Paraxial phase of mode ``q`` over a path ``z`` (metres).

    ``global``: ``exp(-i q^2 z / (2 k_s))`` with ``z`` the cell length, the
    common factor of forward read-out. ``in_integral``: ``exp(-i q^2 z / k_s)``
    at slice position ``z``, the weight inside the backward depth integral.
    """
    if not k_s > 0:
        raise ValueError("k_s must be positive")
    if placement not in PLACEMENTS:
        raise ValueError(f"placement must be one of {PLACEMENTS}")
    q2 = mode.q2
    if q2 == 0.0:
        return 1.0 + 0.0j
    arg = q2 * z / k_s
    if placement == "global":
        arg *= 0.5
    return cmath.exp(-1j * arg)


def paraxial_parameter(mode: TransverseMode, L: float, k_s: float) -> float:
    """q^2 L / k_s."""
    if not (k_s > 0 and L >= 0):
        raise ValueError("need k_s > 0 and L >= 0")
    return mode.q2 * L / k_s


def paraxial_ok(mode: TransverseMode, L: float, k_s: float, limit: float = PARAXIAL_LIMIT) -> bool:
    return paraxial_parameter(mode, L, k_s) <= limit


@dataclass(frozen=True)
class CapacityReport:
    fresnel: float
    n_max_backward: float
    n_max_forward: float
    grain_d: float
    output_grain_D: float
    n_naive: float

    def to_dict(self) -> dict:
        return asdict(self)


def mode_capacity(S: float, lam: float, L: float, d: float | None = None) -> CapacityReport:
    """Fresnel-number bounds for a cell of area ``S`` and length ``L`` at wavelength ``lam``.

    ``d`` is the input grain size; it defaults to ``sqrt(L lam)``, the grain
    that diffraction maps onto itself (``D = d``). ``D = L lam / d`` is the
    grain after diffraction over the cell and ``S / d^2`` the naive count.
    """
    if d is None:
        d = math.sqrt(L * lam)
    for name, v in (("S", S), ("lambda", lam), ("L", L), ("d", d)):
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be finite and positive, got {v!r}")
    if d * d > S:
        raise ValueError(f"grain d={d} does not fit in area S={S}")
    fresnel = S / (lam * L)
    return CapacityReport(
        fresnel=fresnel,
        n_max_backward=fresnel,
        n_max_forward=fresnel * fresnel,
        grain_d=d,
        output_grain_D=L * lam / d,
        n_naive=S / (d * d),
    )


def capacity_json(report: CapacityReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
