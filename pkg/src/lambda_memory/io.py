"""Schemas and parsers for every file the command line emits.

CSV files carry one header line of column names followed by ``%.17g`` rows,
so parsing them back reproduces the arrays bit for bit. JSON summaries are
flat objects with sorted keys.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .optimize import SCAN_CSV_COLUMNS, SWEEP_CSV_COLUMNS
from .readout import SERIES_CSV_COLUMNS
from .writing import WRITE_CSV_COLUMNS

CSV_SCHEMAS = {
    "write": WRITE_CSV_COLUMNS,
    "retrieve": SERIES_CSV_COLUMNS,
    "optimize_scan": SCAN_CSV_COLUMNS,
    "loss_vs_length": SWEEP_CSV_COLUMNS,
    "fig2": ("z_tilde", "a_t0.5", "a_t1", "a_tpi", "s12_t0.5", "s12_t1", "s12_tpi"),
    "fig3": ("t_tilde", "a_out", "intensity"),
    "fig4_loss": ("Tw_tilde", "loss_L5", "loss_L10.3", "loss_L15"),
    "fig4_coherence": ("L_tilde", "Tw_opt", "z_tilde", "s12"),
    "fig5": ("t_tilde", "z_tilde", "s12"),
    "fig6": ("z_tilde", "s12_tpi", "s12_t2pi", "s12_t3pi", "s12_t4pi"),
    "fig8": SWEEP_CSV_COLUMNS,
    "fig9": ("t_tilde", "intensity_forward", "intensity_backward"),
}

JSON_SCHEMAS = {
    "write": {"L_tilde": float, "Tw_tilde": float, "loss_percent": float, "nt": int, "nz": int},
    "retrieve": {
        "direction": str, "q": float, "diffraction_parameter": float, "L_tilde": float, "Tw_tilde": float,
        "Tr_tilde": float, "eff_percent": float, "loss_percent": float,
    },
    "optimize": {
        "L_tilde": float, "Tw_opt": float, "loss_opt": float, "converged": bool, "multiple_minima": bool,
        "local_minima": list, "ratio": float, "scan_points": int,
    },
    "capacity": {
        "fresnel": float, "n_max_backward": float, "n_max_forward": float, "grain_d": float,
        "output_grain_D": float, "n_naive": float,
    },
}


class SchemaError(ValueError):
    pass


def save_csv(rows, schema: str, path) -> Path:
    cols = CSV_SCHEMAS[schema]
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != len(cols):
        raise SchemaError(f"{schema}: expected {len(cols)} columns, got shape {rows.shape}")
    np.savetxt(path, rows, fmt="%.17g", delimiter=",", header=",".join(cols), comments="")
    return Path(path)


def read_csv(path, schema: str) -> dict[str, np.ndarray]:
    """Parse a CSV file and check its header against ``schema``."""
    cols = CSV_SCHEMAS[schema]
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != tuple(cols):
            raise SchemaError(f"{schema}: header {header} does not match {list(cols)}")
        body = fh.read()
    if body.strip():
        data = np.loadtxt(body.splitlines(), delimiter=",", ndmin=2)
    else:
        data = np.empty((0, len(cols)))
    if data.shape[1] != len(cols):
        raise SchemaError(f"{schema}: rows have {data.shape[1]} fields")
    return {c: data[:, i] for i, c in enumerate(cols)}


def save_json(obj: dict, path) -> Path:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return Path(path)


def read_json(path, schema: str) -> dict:
    """Load a JSON summary and check keys and value types."""
    types = JSON_SCHEMAS[schema]
    obj = json.loads(Path(path).read_text())
    if not isinstance(obj, dict):
        raise SchemaError(f"{schema}: expected an object")
    if set(obj) != set(types):
        raise SchemaError(f"{schema}: keys {sorted(obj)} do not match {sorted(types)}")
    for k, typ in types.items():
        v = obj[k]
        ok = isinstance(v, typ) and not (typ is int and isinstance(v, bool))
        if typ is float:
            ok = isinstance(v, (int, float)) and not isinstance(v, bool)
        if not ok:
            raise SchemaError(f"{schema}: {k} should be {typ.__name__}, got {v!r}")
    return obj
