"""Read-out of a stored spin-coherence profile, forward or backward.

The read pulse starts with no signal at the input face and no optical
coherence; the spin coherence equals the stored profile. In the reader's own
frame (depth ``zeta`` measured from the face the read drive enters)

    a^R(t, zeta) = int_0^zeta dzeta' P(zeta') G(t, zeta - zeta'),
    G(t, Z) = sin t + int_0^t sin(t - tau) Dt(tau, Z) dtau

where ``P`` is the stored profile expressed in reader coordinates: the
writing profile itself for forward retrieval, its mirror image ``L - z`` for
backward retrieval. Profiles use the writing normalization of sigma12
(``-sigma12 / (2 p a_in)``), so ``a^R`` comes out normalized by ``a_in``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .kernel import KernelTable, build_table
from .params import DimensionlessConfig
from .writing import check_grid, cumtrapz, kernel_moments, solve_write, trapezoid, write_loss

DIRECTIONS = ("forward", "backward")
TR_PRESETS = (1, 3, 10)


@dataclass(frozen=True)
class RetrievalResult:
    direction: str
    t: np.ndarray
    out_field: np.ndarray
    envelope: np.ndarray  # out_field before any global phase factor
    q_mode: float
    k_signal: float | None
    length_L: float | None
    efficiency: float
    L_tilde: float
    Tw_tilde: float
    Tr_tilde: float

    @property
    def intensity(self) -> np.ndarray:
        # a global phase never touches the intensity, bit for bit
        return np.abs(self.envelope) ** 2


def _response(table: KernelTable, steps: int) -> np.ndarray:
    """G(t, Z) on the table grid for the first ``steps`` time steps."""
    t = table.t[: steps + 1]
    D = table.values[: steps + 1]
    _, ic, is_ = kernel_moments(D, t, table.dt)
    s = np.sin(t)[:, None]
    c = np.cos(t)[:, None]
    return s + (s * ic - c * is_)


def _reader_profile(profile, table: KernelTable, direction: str) -> np.ndarray:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    p = np.asarray(profile, dtype=complex)
    if p.shape != table.z.shape:
        raise ValueError(f"profile has shape {p.shape}, table z-grid has {table.z.shape}")
    return p if direction == "forward" else p[::-1].copy()


def diffraction_parameter(q_mode: float, k_signal: float | None, length_L: float | None) -> float:
    """q^2 L / k_s (zero for q = 0)."""
    if q_mode == 0:
        return 0.0
    if not k_signal or not length_L:
        raise ValueError("a nonzero q needs k_signal and length_L")
    return q_mode**2 * length_L / k_signal


def retrieve(
    sigma12_profile,
    table: KernelTable,
    config: DimensionlessConfig,
    direction: str = "forward",
    q_mode: float = 0.0,
    k_signal: float | None = None,
    length_L: float | None = None,
) -> RetrievalResult:
    """Output field a^R(t~, L~; q) / a_in over the read window.

    Forward retrieval carries the common phase ``exp(-i q^2 L / (2 k_s))``;
    backward retrieval carries ``exp(-i q^2 z' / k_s)`` inside the depth
    integral, ``z'`` being the writing-frame position of the stored slice.
    """
    steps = config.read_steps
    check_grid(table, config, steps)
    P = _reader_profile(sigma12_profile, table, direction)
    G = _response(table, steps)
    phi = diffraction_parameter(q_mode, k_signal, length_L)
    n = table.nz
    if config.L_tilde == 0:
        out = np.zeros(steps + 1, dtype=complex)
    else:
        # reader depth zeta_i sees the output face at distance L - zeta_i
        src = P
        if direction == "backward" and phi != 0.0:
            z_write = 1.0 - table.z / config.L_tilde  # z'/L for reader slice i
            src = P * np.exp(-1j * phi * z_write)
        out = trapezoid(src[None, :] * G[:, ::-1], table.dz, axis=1)
    envelope = out
    if direction == "forward" and phi != 0.0:
        out = out * np.exp(-0.5j * phi)
    eff = 100.0 * trapezoid(np.abs(envelope) ** 2, table.dt) / config.Tw_tilde
    return RetrievalResult(
        direction=direction,
        t=table.t[: steps + 1].copy(),
        out_field=out,
        envelope=envelope,
        q_mode=float(q_mode),
        k_signal=k_signal,
        length_L=length_L,
        efficiency=float(eff),
        L_tilde=config.L_tilde,
        Tw_tilde=config.Tw_tilde,
        Tr_tilde=steps * table.dt,
    )


def retrieval_efficiency(result: RetrievalResult, Tw_tilde: float | None = None) -> float:
    """Retrieved energy over input energy in percent: (1/Tw) int_0^Tr |a^R|^2 dt."""
    if Tw_tilde is None:
        Tw_tilde = result.Tw_tilde
    dt = float(result.t[1] - result.t[0])
    return float(100.0 * trapezoid(result.intensity, dt) / Tw_tilde)


def readout_coherences(sigma12_profile, table: KernelTable, config: DimensionlessConfig, direction: str = "forward"):
    """Field and coherences during read-out, in the reader's frame.

    Returns ``(a, sigma12, sigma13)`` over (t~, zeta). ``sigma12`` and
    ``sigma13`` share the normalization of the input profile, so at zeta = 0
    they are ``P cos t`` and ``P sin t``:

        sigma13 = P sin t - (1/2) int_0^t cos(t - t') a dt'
        sigma12 = P cos t + (1/2) int_0^t sin(t - t') a dt'
    """
    steps = config.read_steps
    check_grid(table, config, steps)
    P = _reader_profile(sigma12_profile, table, direction)
    G = _response(table, steps)
    t = table.t[: steps + 1]
    dz = table.dz
    if config.L_tilde == 0:
        a = np.zeros_like(G, dtype=complex)
    else:
        # trapezoid of P(zeta') G(t, zeta - zeta') over [0, zeta] for every zeta
        full = fftconvolve(G, P[None, :], axes=1)[:, : P.size]
        ends = P[0] * G + P[None, :] * G[:, :1]
        a = dz * (full - 0.5 * ends)
        a[:, 0] = 0.0
    c = np.cos(t)[:, None]
    s = np.sin(t)[:, None]
    ac = cumtrapz(a * c, table.dt)
    as_ = cumtrapz(a * s, table.dt)
    conv_cos = c * ac + s * as_  # int cos(t - t') a dt'
    conv_sin = s * ac - c * as_  # int sin(t - t') a dt'
    sigma13 = P[None, :] * s - 0.5 * conv_cos
    sigma12 = P[None, :] * c + 0.5 * conv_sin
    return a, sigma12, sigma13


@dataclass(frozen=True)
class MemoryRun:
    """Writing followed by one read-out, sharing one kernel table."""

    config: DimensionlessConfig
    loss: float
    result: RetrievalResult


def write_then_read(
    L_tilde: float,
    Tw_tilde: float,
    Tr_tilde: float | None = None,
    direction: str = "forward",
    q_mode: float = 0.0,
    k_signal: float | None = None,
    length_L: float | None = None,
    nt: int | None = None,
    nz: int | None = None,
    table: KernelTable | None = None,
) -> MemoryRun:
    kw = {k: v for k, v in (("nt", nt), ("nz", nz)) if v is not None}
    config = DimensionlessConfig(L_tilde=L_tilde, Tw_tilde=Tw_tilde, Tr_tilde=Tr_tilde, **kw)
    if table is None:
        table = build_table(config)
    sol = solve_write(table, config)
    res = retrieve(sol.stored_profile, table, config, direction, q_mode, k_signal, length_L)
    return MemoryRun(config=config, loss=write_loss(sol), result=res)


SERIES_CSV_COLUMNS = ("t_tilde", "re_a", "im_a", "intensity")


def retrieval_csv(result: RetrievalResult, path) -> None:
    rows = np.column_stack([result.t, result.out_field.real, result.out_field.imag, result.intensity])
    np.savetxt(path, rows, fmt="%.17g", delimiter=",", header=",".join(SERIES_CSV_COLUMNS), comments="")


def retrieval_summary(result: RetrievalResult, loss: float | None = None) -> dict:
    out = {
        "direction": result.direction,
        "q": result.q_mode,
        "diffraction_parameter": diffraction_parameter(result.q_mode, result.k_signal, result.length_L),
        "L_tilde": result.L_tilde,
        "Tw_tilde": result.Tw_tilde,
        "Tr_tilde": result.Tr_tilde,
        "eff_percent": result.efficiency,
    }
    if loss is not None:
        out["loss_percent"] = loss
    if not all(math.isfinite(v) for v in out.values() if isinstance(v, float)):
        raise FloatingPointError("non-finite retrieval summary")
    return out


def retrieval_json(result: RetrievalResult, path, loss: float | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(retrieval_summary(result, loss), fh, indent=2, sort_keys=True)
        fh.write("\n")
