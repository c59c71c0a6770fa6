"""Bessel functions J0 and J1 of real non-negative argument.

Three regimes, each accurate to a few ulp of the local amplitude:

* ``x < SERIES_MAX``      ascending power series (relative accuracy near 0)
* ``x < ASYMPTOTIC_MIN``  piecewise Chebyshev expansions, built at import time
                          from the trapezoidal rule applied to Bessel's
                          integral, which converges geometrically for a
                          periodic analytic integrand
* otherwise               Hankel asymptotic expansion

The scalar kernels are numba-compiled so the kernel quadrature can call them
from inside its own compiled loops.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

SERIES_MAX = 2.0
ASYMPTOTIC_MIN = 40.0
J1_ABS_MAX = 0.5818652242815963  # global max of |J1|, attained at x ~ 1.8412

_PIECE_WIDTH = 1.0
_CHEB_DEGREE = 16
_N_PIECES = int(round((ASYMPTOTIC_MIN - SERIES_MAX) / _PIECE_WIDTH))


def bessel_jn_trapezoid(n: int, x, points: int | None = None):
    """J_n(x) for integer ``n`` from Bessel's integral by the trapezoidal rule.

    ``J_n(x) = (1/pi) int_0^pi cos(n*theta - x*sin(theta)) dtheta``. The full-period
    integrand is analytic and periodic so the error decays like J_{M-n}(x)
    for M nodes per period. Slow (O(x) work) but accurate to ~1e-15 absolute;
    used to seed the Chebyshev tables and as an independent reference.
    """
    x = np.asarray(x, dtype=float)
    if points is None:
        points = int(np.max(x, initial=0.0)) + 64
    theta = np.linspace(0.0, np.pi, points + 1)
    w = np.full(points + 1, 1.0 / points)
    w[0] = w[-1] = 0.5 / points
    vals = np.cos(n * theta - np.multiply.outer(x, np.sin(theta)))
    return vals @ w


def _chebyshev_pieces(n: int) -> np.ndarray:
    m = _CHEB_DEGREE + 1
    k = np.arange(m)
    nodes = np.cos(np.pi * (k + 0.5) / m)
    basis = np.cos(np.pi * np.outer(k, k + 0.5) / m)
    coeffs = np.empty((_N_PIECES, m))
    for i in range(_N_PIECES):
        lo = SERIES_MAX + i * _PIECE_WIDTH
        x = lo + 0.5 * _PIECE_WIDTH * (nodes + 1.0)
        f = bessel_jn_trapezoid(n, x, points=96)
        c = (2.0 / m) * (basis @ f)
        c[0] *= 0.5
        coeffs[i] = c
    return coeffs


_CHEB_J0 = _chebyshev_pieces(0)
_CHEB_J1 = _chebyshev_pieces(1)


_SERIES_TERMS = 24
# ratio of consecutive series terms is -(x/2)^2 / (k (k + n))
_SERIES_RECIP = np.array(
    [[1.0 / (k * (k + n)) if k else 0.0 for k in range(_SERIES_TERMS)] for n in range(2)]
)


@njit(cache=True)
def _series(n, x):
    # sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
    h = 0.5 * x
    term = 1.0
    for j in range(1, n + 1):
        term *= h / j
    total = term
    h2 = h * h
    recip = _SERIES_RECIP[n] if n < 2 else _SERIES_RECIP[1]
    for k in range(1, _SERIES_TERMS):
        term *= -h2 * recip[k]
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


@njit(cache=True)
def _clenshaw(c, u):
    b1 = 0.0
    b2 = 0.0
    u2 = 2.0 * u
    for k in range(c.shape[0] - 1, 0, -1):
        b1, b2 = u2 * b1 - b2 + c[k], b1
    return u * b1 - b2 + c[0]


@njit(cache=True)
def _chebyshev(table, x):
    i = int((x - SERIES_MAX) / _PIECE_WIDTH)
    if i >= table.shape[0]:
        i = table.shape[0] - 1
    lo = SERIES_MAX + i * _PIECE_WIDTH
    u = 2.0 * (x - lo) / _PIECE_WIDTH - 1.0
    return _clenshaw(table[i], u)


_HANKEL_TERMS = 40
# a_k = prod_{j<=k} (4n^2 - (2j-1)^2) / (8j); the k-th term is a_k / x^k
_HANKEL_RATIO = np.array(
    [[(4.0 * n * n - (2 * k - 1) ** 2) / (8.0 * k) if k else 0.0 for k in range(_HANKEL_TERMS)]
     for n in range(2)]
)


@njit(cache=True)
def _hankel(n, x):
    ratio = _HANKEL_RATIO[n]
    inv_x = 1.0 / x
    p = 1.0
    q = 0.0
    term = 1.0
    for k in range(1, _HANKEL_TERMS):
        term *= ratio[k] * inv_x
        if k % 4 == 1:
            q += term
        elif k % 4 == 2:
            p -= term
        elif k % 4 == 3:
            q -= term
        else:
            p += term
        if abs(term) < 1e-18:
            break
    chi = x - (0.5 * n + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


@njit(cache=True)
def j1_scalar(x):
    """J1(x) for finite x >= 0 (no argument checking)."""
    if x < SERIES_MAX:
        return _series(1, x)
    if x < ASYMPTOTIC_MIN:
        return _chebyshev(_CHEB_J1, x)
    return _hankel(1, x)


@njit(cache=True)
def j0_scalar(x):
    """J0(x) for finite x >= 0 (no argument checking)."""
    if x < SERIES_MAX:
        return _series(0, x)
    if x < ASYMPTOTIC_MIN:
        return _chebyshev(_CHEB_J0, x)
    return _hankel(0, x)


@njit(cache=True)
def _apply_j1(x):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = j1_scalar(x[i])
    return out


@njit(cache=True)
def _apply_j0(x):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = j0_scalar(x[i])
    return out


def _checked(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("Bessel argument must be finite")
    if np.any(arr < 0):
        raise ValueError("Bessel argument must be non-negative")
    return arr


def bessel_j1(x):
    """First-order Bessel function of the first kind for real ``x >= 0``.

    Accepts a scalar or array; returns the same shape (a Python float for
    scalar input). Raises ``ValueError`` on negative or non-finite input.
    """
    arr = _checked(x)
    out = _apply_j1(arr.ravel()).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def bessel_j0(x):
    """Zeroth-order Bessel function of the first kind for real ``x >= 0``."""
    arr = _checked(x)
    out = _apply_j0(arr.ravel()).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def bessel_j1_series(x: float) -> float:
    """Plain power series for J1, usable at any x (cancellation grows like I1(x))."""
    return float(_series(1, float(x)))


def bessel_j1_asymptotic(x: float) -> float:
    """Hankel asymptotic expansion for J1; only meaningful for large x."""
    if x <= 0:
        raise ValueError("asymptotic expansion needs x > 0")
    return float(_hankel(1, float(x)))
