import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lambda_memory.optimize import (
    NEAR_MINIMUM,
    SCAN_CSV_COLUMNS,
    _local_minima,
    loss_column,
    loss_for_lengths,
    optimize_write_duration,
    report_json,
    save_columns,
    scan_durations,
    sweep_loss_vs_length,
)
from lambda_memory.params import DimensionlessConfig
from lambda_memory.writing import write, write_loss

# Optimum at L = 10.3 on the default grid (independently bracketed by a 0.01
# dense scan below).
TW_OPT_DEFAULT = 4.170
LOSS_OPT_DEFAULT = 4.6363


@pytest.fixture(scope="module")
def report():
    return optimize_write_duration(10.3)


def test_optimum(report):
    assert report.converged
    assert report.Tw_opt == pytest.approx(TW_OPT_DEFAULT, abs=0.01)
    assert report.loss_opt == pytest.approx(LOSS_OPT_DEFAULT, abs=1e-3)
    assert report.ratio == pytest.approx(10.3 / report.Tw_opt)
    assert not report.multiple_minima


def test_optimum_inside_scan_and_below_samples(report):
    lo, hi = report.scan[0, 0], report.scan[-1, 0]
    assert lo < report.Tw_opt < hi
    assert report.loss_opt <= report.scan[:, 1].min() + 1e-12
    assert report.scan[:, 1].min() - report.loss_opt < 0.01
    assert np.all(np.diff(report.scan[:, 0]) <= 0.1 + 1e-12)


def test_matches_dense_scan(report):
    dense = scan_durations(10.3, np.arange(3.5, 5.0, 0.01))
    assert abs(dense[np.argmin(dense[:, 1]), 0] - report.Tw_opt) <= 0.1
    assert abs(dense[np.argmin(dense[:, 1]), 0] - report.Tw_opt) <= 0.011


def test_column_loss_equals_full_solution():
    cfg = DimensionlessConfig(L_tilde=7.0, Tw_tilde=3.3)
    assert loss_column(7.0, 3.3) == write_loss(write(cfg))


def test_shorter_medium_loses_more(report):
    short = optimize_write_duration(5.0)
    assert short.converged
    assert short.loss_opt > report.loss_opt
    assert short.Tw_opt < report.Tw_opt


def test_boundary_minimum_not_converged():
    rep = optimize_write_duration(30.0)
    assert not rep.converged
    assert rep.Tw_opt == pytest.approx(3 * math.pi)


def test_deterministic(report):
    again = optimize_write_duration(10.3)
    assert again.to_dict() == report.to_dict()
    assert np.array_equal(again.scan, report.scan)


@pytest.mark.parametrize("kw", [dict(L_tilde=0.0), dict(L_tilde=5.0, step=0.2),
                                dict(L_tilde=5.0, scan_range=(2.0, 10.0)), dict(L_tilde=5.0, scan_range=(1.0, 9.0))])
def test_rejects(kw):
    with pytest.raises(ValueError):
        optimize_write_duration(**kw)


def test_local_minima_detection():
    Tw = np.arange(10.0)
    y = np.array([5, 4, 3, 4, 5, 4, 3.1, 4, 5, 6.0])
    mins = _local_minima(np.column_stack([Tw, y]))
    assert mins == [(2.0, 3.0), (6.0, 3.1)]
    assert mins[1][1] - mins[0][1] <= NEAR_MINIMUM


def test_sweep_monotone_and_shared_table():
    rows = sweep_loss_vs_length(math.pi, (1.0, 20.0), 40)
    assert rows.shape == (40, 2)
    assert np.all(np.diff(rows[:, 1]) < 0)
    assert rows[0, 0] == 1.0 and rows[-1, 0] == 20.0
    one = loss_for_lengths([rows[7, 0]], math.pi, order=64)[0]
    assert one == pytest.approx(rows[7, 1], abs=1e-12)


def test_sweep_zero_length_is_total_loss():
    assert sweep_loss_vs_length(1.0, (0.0, 0.0), 1)[0, 1] == 100.0


def test_sweep_grid_convergence():
    a = sweep_loss_vs_length(math.pi, (1.0, 20.0), 10, nt=200)
    b = sweep_loss_vs_length(math.pi, (1.0, 20.0), 10, nt=400)
    assert np.abs(a[:, 1] - b[:, 1]).max() < 0.1


def test_sweep_rejects():
    with pytest.raises(ValueError):
        sweep_loss_vs_length(1.0, (-1.0, 2.0), 5)
    with pytest.raises(ValueError):
        sweep_loss_vs_length(0.0, (1.0, 2.0), 5)


def test_outputs(tmp_path, report):
    report_json(report, tmp_path / "o.json")
    obj = json.loads((tmp_path / "o.json").read_text())
    assert obj["Tw_opt"] == report.Tw_opt and obj["scan_points"] == report.scan.shape[0]
    save_columns(report.scan, SCAN_CSV_COLUMNS, tmp_path / "s.csv")
    assert (tmp_path / "s.csv").read_text().startswith("Tw_tilde,loss_percent\n")


@given(L=st.floats(0.5, 20.0), Tw=st.floats(0.2, 9.0))
def test_loss_is_a_percentage(L, Tw):
    v = loss_column(L, Tw, nt=40)
    assert 0.0 <= v <= 100.0 + 1e-9
