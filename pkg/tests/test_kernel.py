import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import j1

from lambda_memory.kernel import (
    BASE_ORDER,
    CACHE_ENV,
    KernelTable,
    build_table,
    cache_key,
    clenshaw_curtis,
    kernel_point,
    load_table,
    save_table,
    select_order,
    tabulate,
)
from lambda_memory.params import DimensionlessConfig


def brute_force(t, z):
    """Untransformed definition integrated adaptively with scipy's J1."""

    def r(s):
        return math.sqrt(z) / 2 if s == 0 else j1(math.sqrt(z * s)) / math.sqrt(s)

    def part(fn):
        return quad(lambda tp: fn(cmath.exp(1j * (t - 2 * tp)) * r(tp) * r(t - tp)), 0, t,
                    limit=400, epsabs=1e-13, epsrel=1e-13)[0]

    conv = part(lambda v: v.real) + 1j * part(lambda v: v.imag)
    return -math.cos(t) * math.sqrt(z / t) * j1(math.sqrt(z * t)) + 0.25 * z * conv


def test_zero_depth_is_zero():
    assert kernel_point(1.0, 0.0) == 0
    assert kernel_point(37.0, 0.0) == 0


@pytest.mark.parametrize("z", [1.0, 5.0, 10.3])
def test_short_time_limit(z):
    assert abs(kernel_point(1e-6, z) - (-z / 2)) <= 1e-4 * z
    assert kernel_point(1e-6, 10.3).real == pytest.approx(-5.15, abs=1e-4)


@pytest.mark.parametrize("t,z", [(3.0, 10.3), (0.7, 2.0), (8.0, 15.0), (12.6, 20.0), (40.0, 10.3)])
def test_against_brute_force(t, z):
    val = kernel_point(t, z)
    ref = brute_force(t, z)
    assert abs(val - ref) <= 1e-8
    assert abs(val.imag) <= 1e-8


def test_rule_independence_at_random_points():
    rng = np.random.default_rng(20)
    pts = np.column_stack([rng.uniform(0.01, 42.0, 20), rng.uniform(0.0, 20.0, 20)])
    for t, z in pts:
        a = kernel_point(t, z)
        b = kernel_point(t, z, rule="clenshaw_curtis")
        assert abs(a - b) <= 1e-7


def test_clenshaw_curtis_integrates_polynomials():
    x, w = clenshaw_curtis(16)
    assert w.sum() == pytest.approx(2.0, abs=1e-14)
    for k in range(0, 16, 2):
        assert np.dot(w, x**k) == pytest.approx(2.0 / (k + 1), abs=1e-13)


@pytest.mark.parametrize("t", [0.5, 4.2, 20.0])
def test_linear_vanishing_in_depth(t):
    e1, e2 = 1e-4, 2e-4
    c1 = abs(kernel_point(t, e1)) / e1
    c2 = abs(kernel_point(t, e2)) / e2
    assert c1 == pytest.approx(c2, rel=1e-3)
    for eps in (1e-6, 1e-8):
        assert abs(kernel_point(t, eps)) <= 1.01 * max(c1, c2) * eps


@pytest.mark.parametrize("t,z", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.1), (math.nan, 1.0)])
def test_rejects_bad_points(t, z):
    with pytest.raises(ValueError):
        kernel_point(t, z)


def test_rejects_unknown_rule():
    with pytest.raises(ValueError):
        kernel_point(1.0, 1.0, rule="simpson")


def test_table_realness_and_edges(op_table):
    v = op_table.values
    assert np.abs(v.imag).max() <= 1e-8 * np.abs(v.real).max()
    assert np.all(v[:, 0] == 0)
    assert np.allclose(v[0], -op_table.z / 2, rtol=0, atol=0)
    assert op_table.delta_weight == 1.0


def test_table_matches_points(op_table):
    for i, j in [(1, 1), (200, 400), (1000, 123), (2000, 400)]:
        assert op_table.values[i, j] == kernel_point(op_table.t[i], op_table.z[j], order=op_table.order)


def test_degenerate_table_is_zero():
    cfg = DimensionlessConfig(L_tilde=0.0, Tw_tilde=1.0, nt=4, nz=2)
    tab = build_table(cfg)
    assert tab.values.shape == (5, 3)
    assert np.all(tab.values == 0)


def test_table_deterministic():
    cfg = DimensionlessConfig(L_tilde=3.0, Tw_tilde=2.0, nt=20, nz=10)
    a, b = build_table(cfg), build_table(cfg)
    assert np.array_equal(a.values, b.values)


def test_table_rejects_short_window_and_budget():
    cfg = DimensionlessConfig(L_tilde=3.0, Tw_tilde=2.0, Tr_tilde=5.0, nt=20, nz=10)
    with pytest.raises(ValueError):
        build_table(cfg, t_max=4.0)
    with pytest.raises(MemoryError):
        build_table(cfg, max_bytes=1000)


def test_order_selection():
    assert select_order(4.2, 10.3) == BASE_ORDER
    assert select_order(0.0, 1.0) == BASE_ORDER
    high = select_order(200.0, 200.0)
    assert high > BASE_ORDER
    t, z = 200.0, 200.0
    assert abs(kernel_point(t, z, order=high) - kernel_point(t, z, order=2 * high)) < 1e-8


def test_cache_round_trip(tmp_path, monkeypatch):
    cfg = DimensionlessConfig(L_tilde=2.0, Tw_tilde=1.5, nt=12, nz=6)
    tab = build_table(cfg)
    path = save_table(tab, tmp_path / "k.bin")
    back = load_table(path)
    assert np.array_equal(back.values, tab.values)
    assert np.array_equal(back.t, tab.t) and np.array_equal(back.z, tab.z)
    assert back.order == tab.order

    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "cache"))
    (tmp_path / "cache").mkdir()
    first = build_table(cfg)
    files = list((tmp_path / "cache").iterdir())
    assert len(files) == 1
    assert cache_key(cfg.L_tilde, first.t_max, first.nt, first.nz, first.order) in files[0].name
    second = build_table(cfg)
    assert np.array_equal(first.values, second.values)


def test_cache_header_layout(tmp_path):
    import struct

    cfg = DimensionlessConfig(L_tilde=2.0, Tw_tilde=1.5, nt=4, nz=2)
    tab = build_table(cfg)
    raw = save_table(tab, tmp_path / "k.bin").read_bytes()
    L, tmax, nt, nz, order = struct.unpack_from("<ddqqq", raw)
    assert (L, nt, nz, order) == (2.0, 4, 2, tab.order)
    assert tmax == pytest.approx(1.5)
    body = np.frombuffer(raw[40:], dtype="<c16").reshape(5, 3)
    assert np.array_equal(body, tab.values)


def test_interpolation_on_and_off_grid(op_table):
    assert abs(op_table.interpolate(op_table.t[7], op_table.z[9])[0] - op_table.values[7, 9]) <= 1e-15
    rng = np.random.default_rng(3)
    t = rng.uniform(0.1, 41.0, 15)
    z = rng.uniform(0.1, 10.2, 15)
    got = op_table.interpolate(t, z)
    ref = np.array([kernel_point(a, b, order=op_table.order) for a, b in zip(t, z)])
    assert np.abs(got - ref).max() <= 1e-6
    assert op_table.interpolate(0.0, 4.0)[0] == pytest.approx(-2.0, abs=1e-12)
    with pytest.raises(ValueError):
        op_table.interpolate(50.0, 1.0)


@given(t=st.floats(0.05, 30.0), z=st.floats(0.0, 20.0))
def test_tabulate_agrees_with_point(t, z):
    v = tabulate(np.array([t]), np.array([z]), BASE_ORDER)[0, 0]
    assert v == kernel_point(t, z, order=BASE_ORDER)
    assert abs(v.imag) <= 1e-12 * max(1.0, abs(v.real))


def test_table_is_immutable_type():
    tab = build_table(DimensionlessConfig(L_tilde=1.0, Tw_tilde=1.0, nt=4, nz=4))
    assert isinstance(tab, KernelTable)
    with pytest.raises(AttributeError):
        tab.order = 3
