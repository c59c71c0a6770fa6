"""Finite-difference integrator of the reduced equations, for cross-checks only.

Method of lines: the coherences at every depth sample are advanced in time by
classical RK4; at each stage the field is rebuilt from the input boundary by a
cumulative trapezoid of ``da/dz = -sigma13/2``. Variables use the writing
normalization (see :mod:`lambda_memory.writing`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .writing import cumtrapz


@dataclass(frozen=True)
class OracleRun:
    t: np.ndarray
    z: np.ndarray
    a: np.ndarray
    sigma13: np.ndarray
    sigma12: np.ndarray
    boundary: np.ndarray
    initial13: np.ndarray
    initial12: np.ndarray

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0])

    @property
    def dz(self) -> float:
        return float(self.z[1] - self.z[0])


def integrate(
    boundary: float | Callable[[float], complex],
    initial12,
    initial13,
    T: float,
    L: float,
    nt: int,
) -> OracleRun:
    """March the reduced system over ``[0, T] x [0, L]``.

    ``boundary`` is the input field a(t, 0), a constant or a callable;
    ``initial12`` / ``initial13`` are the coherence profiles at t = 0 on a
    uniform depth grid spanning ``[0, L]`` (their length fixes ``nz``).
    """
    s12 = np.array(initial12, dtype=complex)
    s13 = np.array(initial13, dtype=complex)
    if s12.ndim != 1 or s12.shape != s13.shape or s12.size < 2:
        raise ValueError("initial profiles must be 1-D arrays of equal length >= 2")
    if nt < 1 or T <= 0 or L < 0:
        raise ValueError("need T > 0, L >= 0 and nt >= 1")
    bfun = boundary if callable(boundary) else (lambda _t, _b=complex(boundary): _b)
    z = np.linspace(0.0, L, s12.size)
    dz = z[1] - z[0]
    dt = T / nt
    t = dt * np.arange(nt + 1)

    def field(tt, c13):
        return bfun(tt) - 0.5 * cumtrapz(c13, dz)

    def rhs(tt, c13, c12):
        return field(tt, c13) - 2.0 * c12, 0.5 * c13

    A = np.empty((nt + 1, z.size), dtype=complex)
    S13 = np.empty_like(A)
    S12 = np.empty_like(A)
    S13[0], S12[0] = s13, s12
    A[0] = field(0.0, s13)
    for n in range(nt):
        tn = t[n]
        k1 = rhs(tn, s13, s12)
        k2 = rhs(tn + 0.5 * dt, s13 + 0.5 * dt * k1[0], s12 + 0.5 * dt * k1[1])
        k3 = rhs(tn + 0.5 * dt, s13 + 0.5 * dt * k2[0], s12 + 0.5 * dt * k2[1])
        k4 = rhs(tn + dt, s13 + dt * k3[0], s12 + dt * k3[1])
        s13 = s13 + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        s12 = s12 + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        S13[n + 1], S12[n + 1] = s13, s12
        A[n + 1] = field(t[n + 1], s13)
    return OracleRun(
        t=t,
        z=z,
        a=A,
        sigma13=S13,
        sigma12=S12,
        boundary=np.array([bfun(tt) for tt in t], dtype=complex),
        initial13=np.array(initial13, dtype=complex),
        initial12=np.array(initial12, dtype=complex),
    )


def excitation(run: OracleRun) -> np.ndarray:
    """int (|sigma12|^2 + |sigma13|^2/4) dz at every time level."""
    dens = np.abs(run.sigma12) ** 2 + 0.25 * np.abs(run.sigma13) ** 2
    return np.trapezoid(dens, dx=run.dz, axis=1)


def flux_imbalance(run: OracleRun) -> np.ndarray:
    """(|a(t,0)|^2 - |a(t,L)|^2) / 2, the rate the excitation must grow at."""
    return 0.5 * (np.abs(run.a[:, 0]) ** 2 - np.abs(run.a[:, -1]) ** 2)
