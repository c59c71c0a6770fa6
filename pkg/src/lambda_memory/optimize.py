"""Writing loss as a function of pulse duration and medium length.

The leakage at the output face only needs the kernel column at ``z~ = L~``:
``a(t, L) = 1 + int_0^t Dt(tau, L) dtau``. Each loss evaluation therefore
tabulates one column on the same grid ``solve_write`` would use
(``dt = Tw / nt``, the same quadrature order), and reproduces its loss.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .kernel import select_order, tabulate
from .params import DEFAULT_NT
from .writing import cumtrapz, trapezoid

SCAN_RANGE = (0.5 * math.pi, 3.0 * math.pi)
SCAN_STEP = 0.1
REFINE_TOL = 0.01
NEAR_MINIMUM = 0.2  # percentage points


def loss_column(L_tilde: float, Tw_tilde: float, nt: int = DEFAULT_NT, order: int | None = None) -> float:
    """Loss in percent for a flat pulse of length ``Tw_tilde`` through depth ``L_tilde``."""
    return float(loss_for_lengths([L_tilde], Tw_tilde, nt, order)[0])


def loss_for_lengths(L_values, Tw_tilde: float, nt: int = DEFAULT_NT, order: int | None = None) -> np.ndarray:
    """Loss for several depths sharing one time grid (one kernel tabulation)."""
    L = np.asarray(L_values, dtype=float)
    if L.ndim != 1 or np.any(L < 0) or not np.all(np.isfinite(L)):
        raise ValueError("lengths must be a 1-D array of finite non-negative values")
    if not (Tw_tilde > 0 and math.isfinite(Tw_tilde)):
        raise ValueError("Tw_tilde must be finite and positive")
    dt = Tw_tilde / nt
    t = dt * np.arange(nt + 1)
    if order is None:
        order = select_order(t[-1], float(L.max()) if L.size else 0.0)
    D = tabulate(t, L, order)
    a = 1.0 + cumtrapz(D, dt, corrected=True)
    return 100.0 * trapezoid(np.abs(a) ** 2, dt, axis=0) / trapezoid(np.ones_like(t), dt)


@dataclass(frozen=True)
class OptimizationReport:
    L_tilde: float
    Tw_opt: float
    loss_opt: float
    scan: np.ndarray = field(repr=False)  # columns (Tw_tilde, loss_percent)
    converged: bool
    multiple_minima: bool
    local_minima: tuple = ()

    @property
    def ratio(self) -> float:
        """L~ / Tw~ at the optimum."""
        return self.L_tilde / self.Tw_opt

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("scan")
        d["local_minima"] = [list(m) for m in self.local_minima]
        d["ratio"] = self.ratio
        d["scan_points"] = int(self.scan.shape[0])
        return d


def scan_durations(L_tilde: float, Tw_values, nt: int = DEFAULT_NT) -> np.ndarray:
    """(Tw, Loss) samples, one kernel column per duration."""
    Tw = np.asarray(Tw_values, dtype=float)
    losses = np.array([loss_column(L_tilde, T, nt) for T in Tw])
    return np.column_stack([Tw, losses])


def _local_minima(scan: np.ndarray):
    y = scan[:, 1]
    idx = [i for i in range(1, y.size - 1) if y[i] <= y[i - 1] and y[i] <= y[i + 1]]
    return [(float(scan[i, 0]), float(y[i])) for i in idx]


def optimize_write_duration(
    L_tilde: float,
    scan_range: tuple[float, float] = SCAN_RANGE,
    step: float = SCAN_STEP,
    tol: float = REFINE_TOL,
    nt: int = DEFAULT_NT,
) -> OptimizationReport:
    """Coarse scan of Loss(Tw) followed by golden-section refinement.

    The scan brackets the best sample between its neighbours; the refinement
    stops once the bracket is narrower than ``tol``. When the best sample sits
    on the scan boundary no refinement is done and ``converged`` is False.
    """
    lo, hi = scan_range
    if not L_tilde > 0:
        raise ValueError("L_tilde must be positive")
    if not (0 < lo <= SCAN_RANGE[0] and hi >= SCAN_RANGE[1]):
        raise ValueError("the scan range must cover [pi/2, 3 pi]")
    if not 0 < step <= SCAN_STEP + 1e-12:
        raise ValueError("need 0 < step <= 0.1")
    n = int(math.ceil((hi - lo) / step))
    Tw = np.linspace(lo, hi, n + 1)
    scan = scan_durations(L_tilde, Tw, nt)
    y = scan[:, 1]
    i = int(np.argmin(y))
    minima = _local_minima(scan)
    best = y[i]
    others = tuple(m for m in minima if m[0] != Tw[i] and m[1] - best <= NEAR_MINIMUM)
    if i == 0 or i == y.size - 1:
        return OptimizationReport(L_tilde, float(Tw[i]), float(best), scan, False, bool(others), others)

    a, b, c = Tw[i - 1], Tw[i], Tw[i + 1]
    res = minimize_scalar(
        lambda T: loss_column(L_tilde, T, nt),
        bracket=(a, b, c),
        method="golden",
        options={"xtol": tol / (2.0 * c)},
    )
    T_opt, L_opt = float(res.x), float(res.fun)
    if not (a <= T_opt <= c) or L_opt > best:
        T_opt, L_opt = float(b), float(best)
    return OptimizationReport(L_tilde, T_opt, L_opt, scan, True, bool(others), others)


def sweep_loss_vs_length(
    Tw_tilde: float,
    L_range: tuple[float, float] = (1.0, 20.0),
    steps: int = 40,
    nt: int = DEFAULT_NT,
) -> np.ndarray:
    """(L~, Loss) at ``steps`` evenly spaced depths; all columns share one table."""
    lo, hi = L_range
    if lo < 0 or hi < lo or steps < 1:
        raise ValueError("need 0 <= lo <= hi and steps >= 1")
    L = np.linspace(lo, hi, steps) if steps > 1 else np.array([float(lo)])
    return np.column_stack([L, loss_for_lengths(L, Tw_tilde, nt)])


SCAN_CSV_COLUMNS = ("Tw_tilde", "loss_percent")
SWEEP_CSV_COLUMNS = ("L_tilde", "loss_percent")


def save_columns(rows: np.ndarray, columns, path) -> None:
    np.savetxt(path, rows, fmt="%.17g", delimiter=",", header=",".join(columns), comments="")


def report_json(report: OptimizationReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
