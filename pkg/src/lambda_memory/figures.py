"""Data behind each reproduced figure, as plain arrays plus a plotting note.

Every builder returns a list of ``(schema, rows)`` pairs and a description.
All coordinates are dimensionless, so the data carry no physical units.
"""

from __future__ import annotations

import math

import numpy as np

from .kernel import build_table
from .optimize import optimize_write_duration, scan_durations, sweep_loss_vs_length
from .params import DEFAULT_NT, DEFAULT_NZ, DimensionlessConfig
from .readout import retrieve
from .writing import solve_write

FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig8", "fig9")

DEEP_L = 20.0
OPERATING_L = 10.3
OPERATING_TW = 4.2


def _final_row(L, T, nt, nz):
    cfg = DimensionlessConfig(L_tilde=L, Tw_tilde=T, nt=nt, nz=nz)
    sol = solve_write(build_table(cfg), cfg)
    return sol.z, sol.a_field[-1].real, sol.sigma12[-1].real


def fig2(nt=DEFAULT_NT, nz=DEFAULT_NZ):
    a_cols, s_cols = [], []
    for T in (0.5, 1.0, math.pi):
        z, a, s = _final_row(DEEP_L, T, nt, nz)
        a_cols.append(a)
        s_cols.append(s)
    rows = np.column_stack([z] + a_cols + s_cols)
    text = f"""fig2: field and spin coherence along the medium at three instants
data: fig2.csv, L_tilde = {DEEP_L}
x axis: z_tilde (effective optical depth)
panels: a_t* (normalized signal amplitude) and s12_t* (normalized spin coherence) at t_tilde = 0.5, 1, pi
expect: a = 1 at z = 0 with damped oscillations in depth; s12 builds up near the input face,
reaching 1 at z = 0 for t = pi and staying close to 0 deep in the medium
"""
    return [("fig2", rows)], text


def fig3(nt=DEFAULT_NT, nz=DEFAULT_NZ):
    cfg = DimensionlessConfig(L_tilde=OPERATING_L, Tw_tilde=OPERATING_TW, nt=nt, nz=nz)
    sol = solve_write(build_table(cfg), cfg)
    a = sol.a_field[:, -1].real
    rows = np.column_stack([sol.t, a, a * a])
    text = f"""fig3: leakage at the output face during writing
data: fig3.csv, L_tilde = {OPERATING_L}, Tw_tilde = {OPERATING_TW}
x axis: t_tilde; y axis: a_out = a^W(t, L) / a_in and its square
expect: starts at 1, drops quickly as the medium absorbs, then small oscillations
"""
    return [("fig3", rows)], text


def fig4(nt=DEFAULT_NT, nz=DEFAULT_NZ, step=0.1):
    Ls = (5.0, OPERATING_L, 15.0)
    lo, hi = 0.5 * math.pi, 3.0 * math.pi
    Tw = np.linspace(lo, hi, int(math.ceil((hi - lo) / step)) + 1)
    losses = [scan_durations(L, Tw, nt)[:, 1] for L in Ls]
    loss_rows = np.column_stack([Tw] + losses)
    coh = []
    for L in Ls:
        rep = optimize_write_duration(L, nt=nt)
        z, _, s = _final_row(L, rep.Tw_opt, nt, nz)
        coh.append(np.column_stack([np.full(z.size, L), np.full(z.size, rep.Tw_opt), z, s]))
    text = """fig4: writing loss versus pulse duration and the optimal stored coherence
data: fig4_loss.csv (Tw_tilde against loss in percent for L_tilde = 5, 10.3, 15);
      fig4_coherence.csv (long format: L_tilde, Tw_opt, z_tilde, s12 at the end of the optimal pulse)
expect: each loss curve has one clear minimum that moves to longer pulses and lower loss
as L grows; optimal L_tilde / Tw_tilde close to 2.5
"""
    return [("fig4_loss", loss_rows), ("fig4_coherence", np.vstack(coh))], text


def fig5(nt=DEFAULT_NT, nz=DEFAULT_NZ, t_stride=2, z_stride=4):
    cfg = DimensionlessConfig(L_tilde=DEEP_L, Tw_tilde=4 * math.pi, nt=nt, nz=nz)
    sol = solve_write(build_table(cfg), cfg)
    t = sol.t[::t_stride]
    z = sol.z[::z_stride]
    s = sol.sigma12.real[::t_stride, ::z_stride]
    tt, zz = np.meshgrid(t, z, indexing="ij")
    rows = np.column_stack([tt.ravel(), zz.ravel(), s.ravel()])
    text = f"""fig5: spin coherence over time and depth (surface or heat map)
data: fig5.csv in long format (t_tilde, z_tilde, s12), L_tilde = {DEEP_L}, t_tilde up to 4 pi
expect: rises near z = 0 up to t = pi, then decays there while a ridge moves deeper
"""
    return [("fig5", rows)], text


def fig6(nt=DEFAULT_NT, nz=DEFAULT_NZ):
    if nt % 4:
        raise ValueError("fig6 needs nt divisible by 4 so multiples of pi fall on the grid")
    cfg = DimensionlessConfig(L_tilde=DEEP_L, Tw_tilde=4 * math.pi, nt=nt, nz=nz)
    sol = solve_write(build_table(cfg), cfg)
    idx = [k * nt // 4 for k in (1, 2, 3, 4)]
    rows = np.column_stack([sol.z] + [sol.sigma12[i].real for i in idx])
    text = f"""fig6: spin coherence along the medium at t_tilde = pi, 2 pi, 3 pi, 4 pi
data: fig6.csv, L_tilde = {DEEP_L}
x axis: z_tilde; one curve per instant
expect: the maximum sits at z = 0 for t = pi and moves deeper at each later instant
"""
    return [("fig6", rows)], text


def fig8(nt=DEFAULT_NT, steps=40):
    rows = sweep_loss_vs_length(math.pi, (1.0, 20.0), steps, nt)
    text = """fig8: writing loss versus medium length for Tw_tilde = pi
data: fig8.csv (L_tilde, loss_percent)
expect: strictly decreasing loss, flattening at large L
"""
    return [("fig8", rows)], text


def fig9(nt=DEFAULT_NT, nz=DEFAULT_NZ, tr_mult=10):
    cfg = DimensionlessConfig(L_tilde=OPERATING_L, Tw_tilde=OPERATING_TW, Tr_tilde=tr_mult * OPERATING_TW,
                              nt=nt, nz=nz)
    table = build_table(cfg)
    sol = solve_write(table, cfg)
    fw = retrieve(sol.stored_profile, table, cfg, "forward")
    bw = retrieve(sol.stored_profile, table, cfg, "backward")
    rows = np.column_stack([fw.t, fw.intensity, bw.intensity])
    text = f"""fig9: retrieved intensity at the output face, forward and backward read-out
data: fig9.csv, L_tilde = {OPERATING_L}, Tw_tilde = {OPERATING_TW}, read window {tr_mult} x Tw_tilde
x axis: t_tilde from the start of reading; y axis: |a^R|^2 in units of the input intensity
expect: forward shows a delayed, oscillating pulse; backward a faster smooth pulse with no oscillation
"""
    return [("fig9", rows)], text


def build(name: str, nt: int = DEFAULT_NT, nz: int = DEFAULT_NZ):
    if name not in FIGURES:
        raise ValueError(f"unknown figure {name!r}; choose from {FIGURES}")
    fn = globals()[name]
    if name == "fig8":
        return fn(nt=nt)
    return fn(nt=nt, nz=nz)

