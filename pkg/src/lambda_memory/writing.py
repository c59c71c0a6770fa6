"""Writing stage for a flat-top signal pulse.

All fields are stored normalized:

* ``a_field``  = a^W / a_in
* ``sigma12``  = -sigma^W_12 / (2 p a_in)   (equals 1 at z~ = 0, t~ = pi)
* ``sigma13``  =  sigma^W_13 / (p a_in)

With these normalizations the reduced equations read

    da/dz = -sigma13 / 2,   dsigma13/dt = a - 2 sigma12,   dsigma12/dt = sigma13 / 2

and the closed-form solutions are time convolutions of the kernel, evaluated
here by cumulative trapezoid on the table grid. Trig convolutions are split
as cos(t - tau) = cos t cos tau + sin t sin tau so every convolution costs one
cumulative sum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import KernelTable, build_table
from .params import DimensionlessConfig


def cumtrapz(f: np.ndarray, dx: float, axis: int = 0, corrected: bool = False) -> np.ndarray:
    """Cumulative trapezoid with a leading zero (same length as ``f``).

    With ``corrected=True`` the endpoint term ``-(dx^2/12) (f'(x_n) - f'(x_0))``
    is subtracted, using second-order difference estimates of ``f'``; this
    lifts the error from O(dx^2) to O(dx^4) on smooth integrands.
    """
    f = np.moveaxis(np.asarray(f), axis, 0)
    out = np.zeros_like(f, dtype=np.result_type(f, float))
    n = f.shape[0]
    if n > 1:
        np.cumsum(0.5 * dx * (f[1:] + f[:-1]), axis=0, out=out[1:])
    if corrected and n > 2:
        d = np.empty_like(out)
        d[0] = -3.0 * f[0] + 4.0 * f[1] - f[2]
        d[1:-1] = f[2:] - f[:-2]
        d[-1] = 3.0 * f[-1] - 4.0 * f[-2] + f[-3]
        out -= (dx / 24.0) * (d - d[0])
    return np.moveaxis(out, 0, axis)


def trapezoid(f: np.ndarray, dx: float, axis: int = 0):
    return np.trapezoid(f, dx=dx, axis=axis)


def kernel_moments(D: np.ndarray, t: np.ndarray, dt: float):
    """Cumulative integrals of D, D cos t and D sin t along the time axis."""
    c = np.cos(t)[:, None]
    s = np.sin(t)[:, None]
    return (cumtrapz(D, dt, corrected=True), cumtrapz(D * c, dt, corrected=True),
            cumtrapz(D * s, dt, corrected=True))


def check_grid(table: KernelTable, config: DimensionlessConfig, steps: int):
    """Raise if the table does not share the config's grid or is too short."""
    if table.nz != config.nz or not np.isclose(table.L_tilde, config.L_tilde, rtol=1e-12, atol=0):
        raise ValueError("kernel table z-grid does not match the configuration")
    if not np.isclose(table.dt, config.dt, rtol=1e-9, atol=0):
        raise ValueError("kernel table time step does not match the configuration")
    if table.nt < steps:
        raise ValueError(f"kernel table covers {table.nt} steps, {steps} needed")


@dataclass(frozen=True)
class WriteSolution:
    t: np.ndarray
    z: np.ndarray
    a_field: np.ndarray
    sigma12: np.ndarray
    sigma13: np.ndarray
    config: DimensionlessConfig

    @property
    def stored_profile(self) -> np.ndarray:
        """sigma12 at the end of the writing pulse, the input of the read-out."""
        return self.sigma12[-1]


def solve_write(table: KernelTable, config: DimensionlessConfig) -> WriteSolution:
    nt = config.nt
    check_grid(table, config, nt)
    t = table.t[: nt + 1]
    D = table.values[: nt + 1]
    i0, ic, is_ = kernel_moments(D, t, config.dt)
    c = np.cos(t)[:, None]
    s = np.sin(t)[:, None]
    a = 1.0 + i0
    # int_0^t (1 - cos(t - tau)) D dtau and int_0^t sin(t - tau) D dtau
    s12 = 0.5 * ((1.0 - c) + i0 - (c * ic + s * is_))
    s13 = s + (s * ic - c * is_)
    a = a.astype(complex)
    s12 = np.broadcast_to(s12, a.shape).astype(complex)
    s13 = np.broadcast_to(s13, a.shape).astype(complex)
    return WriteSolution(t=t.copy(), z=table.z.copy(), a_field=a, sigma12=s12, sigma13=s13, config=config)


def write(config: DimensionlessConfig, table: KernelTable | None = None) -> WriteSolution:
    """Convenience: build (or reuse) a table and solve the writing stage."""
    if table is None:
        table = build_table(config)
    return solve_write(table, config)


def leakage_series(sol: WriteSolution):
    """(t, a^W(t, L)) over the writing window."""
    return sol.t, sol.a_field[:, -1]


def write_loss(sol: WriteSolution) -> float:
    """Leaked fraction of the input energy, in percent (flat input, |a_in| = 1)."""
    _, out = leakage_series(sol)
    # the input energy uses the same quadrature, so an empty cell gives exactly 100
    energy_in = trapezoid(np.ones_like(sol.t), sol.config.dt)
    return float(100.0 * trapezoid(np.abs(out) ** 2, sol.config.dt) / energy_in)


def stored_excitation(sol: WriteSolution) -> np.ndarray:
    """Excitation stored in the medium versus time, in units of the input energy density.

    ``int (|sigma12|^2 + |sigma13|^2 / 4) dz``; twice its value equals the
    absorbed energy ``int (1 - |a(t, L)|^2) dt`` for exact solutions.
    """
    dens = np.abs(sol.sigma12) ** 2 + 0.25 * np.abs(sol.sigma13) ** 2
    if sol.config.L_tilde == 0:
        return np.zeros(sol.t.size)
    return trapezoid(dens, sol.config.dz, axis=1)


def coherence_map(sol: WriteSolution) -> np.ndarray:
    """|sigma12|(t, z)."""
    return np.abs(sol.sigma12)


def coherence_peak(sol: WriteSolution, t: float) -> float:
    """Depth of the |sigma12| maximum at the grid time nearest ``t``.

    Refined by a parabola through the three samples around the grid argmax.
    """
    i = int(round(t / sol.config.dt))
    if not 0 <= i < sol.t.size:
        raise ValueError(f"t={t} outside the solution window")
    row = np.abs(sol.sigma12[i])
    j = int(np.argmax(row))
    if 0 < j < row.size - 1:
        y0, y1, y2 = row[j - 1], row[j], row[j + 1]
        den = y0 - 2 * y1 + y2
        shift = 0.5 * (y0 - y2) / den if den != 0 else 0.0
        return float(sol.z[j] + shift * sol.config.dz)
    return float(sol.z[j])


WRITE_CSV_COLUMNS = ("t_tilde", "z_tilde", "re_a", "im_a", "re_s12", "im_s12", "re_s13", "im_s13")


def write_csv(sol: WriteSolution, path) -> None:
    tt, zz = np.meshgrid(sol.t, sol.z, indexing="ij")
    cols = [tt, zz, sol.a_field.real, sol.a_field.imag, sol.sigma12.real, sol.sigma12.imag,
            sol.sigma13.real, sol.sigma13.imag]
    rows = np.stack([c.ravel() for c in cols], axis=1)
    np.savetxt(path, rows, fmt="%.17g", delimiter=",", header=",".join(WRITE_CSV_COLUMNS), comments="")
