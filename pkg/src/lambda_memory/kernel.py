"""The regular part of the propagation kernel and its tabulation.

The full kernel is ``|Omega| [delta(t~) + Dt(t~, z~)]`` with

    Dt(t, z) = -cos(t) sqrt(z/t) J1(sqrt(z t))
               + (z/4) int_0^t [e^{-it'} J1(sqrt(z t'))/sqrt(t')]
                               [e^{i(t-t')} J1(sqrt(z (t-t')))/sqrt(t-t')] dt'

The delta term is never sampled; consumers add it analytically. Substituting
``t' = t sin^2(theta)`` turns the convolution into

    2 int_0^{pi/2} J1(u sin theta) J1(u cos theta) exp(i t cos 2 theta) dtheta,   u = sqrt(z t)

with a bounded, smooth integrand, which is integrated by fixed-order
Gauss-Legendre. The imaginary part cancels between theta and pi/2 - theta.
"""

from __future__ import annotations

import hashlib
import math
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numba
import numpy as np
from numba import njit, prange

from .params import DimensionlessConfig, steps_for
from .specfun import j1_scalar

# skip the TBB layer unless asked for; old TBB builds only emit a warning
if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

BASE_ORDER = 64
MAX_ORDER = 4096
QUAD_TOL = 1e-8
DEFAULT_MAX_BYTES = 2 * 1024**3
CACHE_ENV = "LAMBDA_MEMORY_CACHE_DIR"
_HEADER = struct.Struct("<ddqqq")


def _legendre_theta(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    # exact mirror symmetry so that cos(theta_k) == sin(theta_{n-1-k})
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    theta = 0.25 * np.pi * (x + 1.0)
    return np.sin(theta), np.cos(2.0 * theta), 0.25 * np.pi * w


_NODE_CACHE: dict[int, tuple] = {}


def _nodes(order: int):
    if order not in _NODE_CACHE:
        _NODE_CACHE[order] = _legendre_theta(order)
    return _NODE_CACHE[order]


@njit(cache=True)
def _kernel_value(t, z, sin_th, cos2th, w, jbuf):
    if z == 0.0:
        return 0.0 + 0.0j
    u = math.sqrt(z * t)
    first = -math.cos(t) * math.sqrt(z / t) * j1_scalar(u)
    n = sin_th.shape[0]
    for k in range(n):
        jbuf[k] = j1_scalar(u * sin_th[k])
    re = 0.0
    im = 0.0
    for k in range(n):
        # J1(u cos theta_k) == J1(u sin theta_{n-1-k}) on the mirrored node set
        p = w[k] * jbuf[k] * jbuf[n - 1 - k]
        ph = t * cos2th[k]
        re += p * math.cos(ph)
        im += p * math.sin(ph)
    return first + 0.5 * z * (re + 1j * im)


@njit(cache=True, parallel=True)
def _table_values(t, z, sin_th, cos2th, w):
    nt = t.shape[0]
    nz = z.shape[0]
    n = sin_th.shape[0]
    out = np.empty((nt, nz), dtype=np.complex128)
    for j in prange(nz):
        jbuf = np.empty(n)
        for i in range(nt):
            if t[i] == 0.0:
                out[i, j] = -0.5 * z[j]
            else:
                out[i, j] = _kernel_value(t[i], z[j], sin_th, cos2th, w, jbuf)
    return out


def clenshaw_curtis(n: int):
    """Nodes and weights of the (n+1)-point Clenshaw-Curtis rule on [-1, 1], n even."""
    if n % 2:
        n += 1
    k = np.arange(n + 1)
    x = np.cos(np.pi * k / n)
    w = np.ones(n + 1)
    for j in range(1, n // 2 + 1):
        b = 1.0 if 2 * j == n else 2.0
        w -= b * np.cos(2.0 * j * np.pi * k / n) / (4.0 * j * j - 1.0)
    w *= 2.0 / n
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w


@njit(cache=True)
def _bessel_ratio(z, s):
    # J1(sqrt(z s)) / sqrt(s), analytic in s with value sqrt(z)/2 at s = 0
    if s <= 0.0:
        return 0.5 * math.sqrt(z)
    return j1_scalar(math.sqrt(z * s)) / math.sqrt(s)


@njit(cache=True)
def _kernel_cc(t, z, x, w):
    if z == 0.0:
        return 0.0 + 0.0j
    first = -math.cos(t) * math.sqrt(z / t) * j1_scalar(math.sqrt(z * t))
    acc = 0.0 + 0.0j
    for k in range(x.shape[0]):
        tp = 0.5 * t * (1.0 + x[k])
        f = _bessel_ratio(z, tp) * _bessel_ratio(z, t - tp)
        ph = t - 2.0 * tp
        acc += w[k] * f * (math.cos(ph) + 1j * math.sin(ph))
    return first + 0.25 * z * 0.5 * t * acc


def _check_point(t: float, z: float):
    if not (math.isfinite(t) and t > 0):
        raise ValueError("kernel_point needs t > 0; the delta term at t = 0 is handled analytically")
    if not (math.isfinite(z) and z >= 0):
        raise ValueError("kernel_point needs z >= 0")


def _eval(t: float, z: float, order: int) -> complex:
    s, c2, w = _nodes(order)
    return complex(_kernel_value(float(t), float(z), s, c2, w, np.empty(order)))


def select_order(t_max: float, z_max: float, tol: float = QUAD_TOL, start: int = BASE_ORDER) -> int:
    """Smallest Gauss-Legendre order (64 doubled) whose doubling changes the kernel by < tol.

    Probed along the top edges of the (t, z) rectangle, where the integrand is
    most oscillatory.
    """
    if t_max <= 0 or z_max <= 0:
        return start
    probes = [(t_max, z_max), (t_max, 0.5 * z_max), (0.5 * t_max, z_max), (t_max, 0.1 * z_max)]
    order = start
    while order < MAX_ORDER:
        change = max(abs(_eval(t, z, 2 * order) - _eval(t, z, order)) for t, z in probes)
        if change < tol:
            return order
        order *= 2
    return MAX_ORDER


def kernel_point(t: float, z: float, order: int | None = None, rule: str = "legendre") -> complex:
    """Regular kernel part Dt(t~, z~) at a single point.

    ``rule="clenshaw_curtis"`` integrates the untransformed convolution on
    Chebyshev points instead; it shares no nodes with the default and serves
    as an independent check. The factors J1(sqrt(z t'))/sqrt(t') are analytic
    at the endpoints, so both rules converge geometrically.
    """
    _check_point(t, z)
    if order is None:
        order = select_order(t, z)
    if rule == "legendre":
        return _eval(t, z, order)
    if rule == "clenshaw_curtis":
        x, w = clenshaw_curtis(int(order))
        return complex(_kernel_cc(float(t), float(z), x, w))
    raise ValueError(f"unknown quadrature rule {rule!r}")


@dataclass(frozen=True)
class KernelTable:
    """Kernel samples on the uniform grid ``t = k dt`` (k = 0..nt), ``z = j dz`` (j = 0..nz).

    Row 0 holds the right limit ``Dt(0+, z) = -z/2`` of the regular part; the
    delta term (weight ``delta_weight``) is never stored.
    """

    t: np.ndarray
    z: np.ndarray
    values: np.ndarray
    order: int
    delta_weight: float = 1.0

    @property
    def nt(self) -> int:
        return self.t.size - 1

    @property
    def nz(self) -> int:
        return self.z.size - 1

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0])

    @property
    def dz(self) -> float:
        return float(self.z[1] - self.z[0])

    @property
    def t_max(self) -> float:
        return float(self.t[-1])

    @property
    def L_tilde(self) -> float:
        return float(self.z[-1])

    def interpolate(self, t, z):
        """Off-grid values: cubic Lagrange in t and in z (4-point stencils).

        Queries at t = 0 return the regular-part limit -z/2.
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        z = np.atleast_1d(np.asarray(z, dtype=float))
        t, z = np.broadcast_arrays(t, z)
        if np.any(t < 0) or np.any(t > self.t_max * (1 + 1e-12)):
            raise ValueError("t outside table range")
        if np.any(z < 0) or np.any(z > self.L_tilde * (1 + 1e-12)):
            raise ValueError("z outside table range")
        it, wt = _lagrange4(t, self.dt, self.nt)
        if self.L_tilde == 0.0:
            return np.zeros(t.shape, dtype=complex)
        iz, wz = _lagrange4(z, self.dz, self.nz)
        out = np.zeros(t.shape, dtype=complex)
        for a in range(4):
            for b in range(4):
                out += wt[a] * wz[b] * self.values[it + a, iz + b]
        return out


def _lagrange4(x, h, n):
    # 4-point stencil start index and weights on the grid 0, h, ..., n h
    if n < 3:
        raise ValueError("cubic interpolation needs at least 4 grid points per axis")
    i0 = np.clip(np.floor(x / h).astype(int) - 1, 0, n - 3)
    s = x / h - i0
    w = []
    for a in range(4):
        num = np.ones_like(s)
        den = 1.0
        for b in range(4):
            if b != a:
                num = num * (s - b)
                den *= a - b
        w.append(num / den)
    return i0, w


def cache_key(L_tilde: float, t_max: float, nt: int, nz: int, order: int) -> str:
    raw = _HEADER.pack(float(L_tilde), float(t_max), int(nt), int(nz), int(order))
    return hashlib.sha256(raw).hexdigest()[:24]


def save_table(table: KernelTable, path) -> Path:
    """Binary cache: 5-field little-endian header then row-major (re, im) float64 pairs."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _HEADER.pack(table.L_tilde, table.t_max, table.nt, table.nz, table.order)
    body = np.ascontiguousarray(table.values, dtype="<c16").tobytes()
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(header + body)
    os.replace(tmp, path)
    return path


def load_table(path) -> KernelTable:
    raw = Path(path).read_bytes()
    L, t_max, nt, nz, order = _HEADER.unpack_from(raw)
    values = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size)
    if values.size != (nt + 1) * (nz + 1):
        raise ValueError(f"corrupt kernel cache {path}")
    values = values.reshape(nt + 1, nz + 1).astype(np.complex128)
    return KernelTable(
        t=np.linspace(0.0, t_max, nt + 1), z=np.linspace(0.0, L, nz + 1), values=values, order=order
    )


def tabulate(t: np.ndarray, z: np.ndarray, order: int) -> np.ndarray:
    """Kernel on the outer product of ``t`` (may contain 0) and ``z`` grids."""
    s, c2, w = _nodes(order)
    return _table_values(np.ascontiguousarray(t, float), np.ascontiguousarray(z, float), s, c2, w)


def build_table(
    config: DimensionlessConfig,
    t_max: float | None = None,
    order: int | None = None,
    max_bytes: int = DEFAULT_MAX_BYTES,
    cache_dir=None,
) -> KernelTable:
    """Tabulate the kernel for ``config`` up to ``t_max`` on the shared time step.

    ``t_max`` defaults to ``max(Tw, Tr)`` and is rounded up to whole steps.
    When ``cache_dir`` (or the ``LAMBDA_MEMORY_CACHE_DIR`` environment
    variable) is set, tables are read from / written to a binary cache.
    """
    need = max(config.Tw_tilde, config.Tr_tilde)
    if t_max is None:
        t_max = need
    if t_max < need * (1 - 1e-12):
        raise ValueError(f"t_max={t_max} does not cover the windows (need {need})")
    dt = config.dt
    nt = steps_for(t_max, dt)
    nz = config.nz
    nbytes = (nt + 1) * (nz + 1) * 16
    if nbytes > max_bytes:
        raise MemoryError(f"kernel table of {nbytes} bytes exceeds budget {max_bytes}")
    t_grid = dt * np.arange(nt + 1)
    z_grid = np.linspace(0.0, config.L_tilde, nz + 1)
    if order is None:
        order = select_order(t_grid[-1], config.L_tilde)

    if cache_dir is None:
        cache_dir = os.environ.get(CACHE_ENV)
    path = None
    if cache_dir:
        path = Path(cache_dir) / f"kernel_{cache_key(config.L_tilde, t_grid[-1], nt, nz, order)}.bin"
        if path.exists():
            table = load_table(path)
            if table.nt == nt and table.nz == nz and table.order == order:
                return table

    values = tabulate(t_grid, z_grid, order)
    table = KernelTable(t=t_grid, z=z_grid, values=values, order=order)
    if path is not None:
        save_table(table, path)
    return table
