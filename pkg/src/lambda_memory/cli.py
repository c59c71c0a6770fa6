"""Command-line front end.

Sub-commands: ``write``, ``retrieve``, ``optimize``, ``capacity`` and
``figure NAME``. Every option can also come from a JSON file given with
``--config``; its keys are the flag names (``"L-tilde"`` or ``"L_tilde"``) and
flags on the command line win. Exit status: 0 on success, 2 on a
configuration error, 3 on a numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import figures, io
from .kernel import build_table
from .optimize import optimize_write_duration
from .params import DEFAULT_NT, DEFAULT_NZ, DimensionlessConfig, PhysicalParams, to_dimensionless, validate_regime
from .readout import DIRECTIONS, retrieval_summary, retrieve
from .transverse import mode_capacity
from .writing import solve_write, write_csv, write_loss

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _common(p):
    p.add_argument("--config", help="JSON file whose keys mirror the flag names")
    p.add_argument("--out-dir", help="directory for output files (default: current)")
    p.add_argument("--nt", type=int, help=f"time steps per writing window (default {DEFAULT_NT})")
    p.add_argument("--nz", type=int, help=f"depth steps across the medium (default {DEFAULT_NZ})")


def _problem(p):
    p.add_argument("--L-tilde", type=float, help="effective optical depth of the medium")
    p.add_argument("--Tw-tilde", type=float, help="writing pulse duration, |Omega| Tw")
    p.add_argument("--params", help="JSON file of physical parameters (alternative to --L-tilde)")
    p.add_argument("--Tw", type=float, help="writing duration in seconds (with --params)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lambda-memory", description="Short-pulse Lambda-memory simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("write", help="writing stage: fields, coherences and loss")
    _common(p)
    _problem(p)

    p = sub.add_parser("retrieve", help="write then read out, forward or backward")
    _common(p)
    _problem(p)
    p.add_argument("--direction", choices=DIRECTIONS)
    p.add_argument("--Tr-mult", type=float, help="read window as a multiple of the writing window")
    p.add_argument("--Tr-tilde", type=float, help="read window, |Omega| Tr")
    p.add_argument("--Tr", type=float, help="read window in seconds (with --params)")
    p.add_argument("--q", type=float, help="transverse wavevector magnitude, rad/m")
    p.add_argument("--k-signal", type=float, help="signal wavenumber, rad/m")
    p.add_argument("--length-L", type=float, help="medium length, m")
    p.add_argument("--phi", type=float, help="diffraction parameter q^2 L / k_s (instead of --q)")

    p = sub.add_parser("optimize", help="optimal writing duration at fixed depth")
    _common(p)
    p.add_argument("--L-tilde", type=float)
    p.add_argument("--scan-min", type=float, help="default pi/2")
    p.add_argument("--scan-max", type=float, help="default 3 pi")
    p.add_argument("--step", type=float, help="coarse scan step (default 0.1)")
    p.add_argument("--tol", type=float, help="refinement tolerance (default 0.01)")

    p = sub.add_parser("capacity", help="Fresnel-number mode capacity")
    _common(p)
    p.add_argument("--S", type=float, help="transverse area, m^2")
    p.add_argument("--lambda", dest="lam", type=float, help="wavelength, m")
    p.add_argument("--L", type=float, help="medium length, m")
    p.add_argument("--d", type=float, help="input grain size, m (default sqrt(L lambda))")

    p = sub.add_parser("figure", help="data files for one reproduced figure")
    _common(p)
    p.add_argument("name", choices=figures.FIGURES)
    return parser


DEFAULTS = {
    "out_dir": ".",
    "nt": DEFAULT_NT,
    "nz": DEFAULT_NZ,
    "scan_min": 0.5 * math.pi,
    "scan_max": 3.0 * math.pi,
    "step": 0.1,
    "tol": 0.01,
}


def _subparser(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def _merge_config(parser, args) -> argparse.Namespace:
    """Fill unset options from ``--config`` and then from the defaults."""
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        sp = _subparser(parser, args.command)
        dests = {}
        for action in sp._actions:
            for opt in action.option_strings:
                dests[opt.lstrip("-").replace("-", "_")] = action
        for key, value in data.items():
            action = dests.get(key.lstrip("-").replace("-", "_"))
            if action is None or action.dest in ("config", "help"):
                raise ConfigError(f"unknown config key {key!r}")
            if getattr(args, action.dest) is None:
                if action.choices is not None and value not in action.choices:
                    raise ConfigError(f"{key}: {value!r} not in {list(action.choices)}")
                if action.type is not None and value is not None:
                    try:
                        value = action.type(value)
                    except (TypeError, ValueError) as exc:
                        raise ConfigError(f"{key}: {exc}") from exc
                setattr(args, action.dest, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, "absent") is None:
            setattr(args, key, value)
    return args


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ConfigError(f"missing required option(s): {flags}")


def _resolve_problem(args, read=False):
    """Return (config, physical params or None) from either input style."""
    dimless = args.L_tilde is not None or args.Tw_tilde is not None
    physical = args.params is not None or args.Tw is not None
    if dimless and physical:
        raise ConfigError("give either --L-tilde/--Tw-tilde or --params/--Tw, not both")
    params = None
    try:
        if physical:
            _require(args, "params", "Tw")
            params = PhysicalParams.from_json(args.params)
            Tr = None
            if read:
                Tr = _read_window_seconds(args)
            cfg = to_dimensionless(params, args.Tw, Tr, nt=args.nt, nz=args.nz)
            rep = validate_regime(params, args.Tw)
            if not rep.ok:
                print(
                    f"warning: outside the short-pulse regime (gamma T = {rep.decay_ratio:.3g}, "
                    f"L/(cT) = {rep.transit_ratio:.3g})",
                    file=sys.stderr,
                )
        else:
            _require(args, "L_tilde", "Tw_tilde")
            Tr = _read_window_tilde(args) if read else None
            cfg = DimensionlessConfig(L_tilde=args.L_tilde, Tw_tilde=args.Tw_tilde, Tr_tilde=Tr,
                                      nt=args.nt, nz=args.nz)
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg, params


def _read_window_tilde(args):
    if args.Tr_mult is not None and args.Tr_tilde is not None:
        raise ConfigError("give --Tr-mult or --Tr-tilde, not both")
    if args.Tr is not None:
        raise ConfigError("--Tr (seconds) needs --params")
    if args.Tr_tilde is not None:
        return args.Tr_tilde
    return (1.0 if args.Tr_mult is None else args.Tr_mult) * args.Tw_tilde


def _read_window_seconds(args):
    if args.Tr_tilde is not None:
        raise ConfigError("--Tr-tilde cannot be combined with --params; use --Tr or --Tr-mult")
    if args.Tr_mult is not None and args.Tr is not None:
        raise ConfigError("give --Tr-mult or --Tr, not both")
    if args.Tr is not None:
        return args.Tr
    return (1.0 if args.Tr_mult is None else args.Tr_mult) * args.Tw


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from exc
    return out


def _check_finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise FloatingPointError("non-finite result")


def cmd_write(args) -> int:
    cfg, _ = _resolve_problem(args)
    table = build_table(cfg)
    sol = solve_write(table, cfg)
    loss = write_loss(sol)
    _check_finite(loss, sol.a_field, sol.sigma12, sol.sigma13)
    out = _out_dir(args)
    write_csv(sol, out / "write.csv")
    io.save_json(
        {"L_tilde": cfg.L_tilde, "Tw_tilde": cfg.Tw_tilde, "loss_percent": loss, "nt": cfg.nt, "nz": cfg.nz},
        out / "write.json",
    )
    return EXIT_OK


def cmd_retrieve(args) -> int:
    if args.direction is None:
        args.direction = "forward"
    cfg, params = _resolve_problem(args, read=True)
    q, k_s, length = 0.0, None, None
    if args.phi is not None and args.q is not None:
        raise ConfigError("give --q or --phi, not both")
    if args.phi is not None:
        if args.phi < 0 or not math.isfinite(args.phi):
            raise ConfigError("--phi must be finite and non-negative")
        q, k_s, length = math.sqrt(args.phi), 1.0, 1.0
    elif args.q is not None:
        k_s = args.k_signal if args.k_signal is not None else (params.k_signal if params else None)
        length = args.length_L if args.length_L is not None else (params.length_L if params else None)
        if args.q != 0 and (k_s is None or length is None):
            raise ConfigError("--q needs --k-signal and --length-L (or --params)")
        if args.q != 0 and not (k_s > 0 and length > 0):
            raise ConfigError("--k-signal and --length-L must be positive")
        q = args.q
    table = build_table(cfg)
    sol = solve_write(table, cfg)
    loss = write_loss(sol)
    res = retrieve(sol.stored_profile, table, cfg, args.direction, q, k_s, length)
    _check_finite(loss, res.out_field, res.efficiency)
    out = _out_dir(args)
    rows = np.column_stack([res.t, res.out_field.real, res.out_field.imag, res.intensity])
    io.save_csv(rows, "retrieve", out / "retrieve.csv")
    io.save_json(retrieval_summary(res, loss), out / "retrieve.json")
    return EXIT_OK


def cmd_optimize(args) -> int:
    _require(args, "L_tilde")
    try:
        rep = optimize_write_duration(args.L_tilde, (args.scan_min, args.scan_max), args.step, args.tol, args.nt)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _check_finite(rep.Tw_opt, rep.loss_opt, rep.scan)
    if not rep.converged:
        print("warning: minimum on the scan boundary; widen the scan range", file=sys.stderr)
    out = _out_dir(args)
    io.save_json(rep.to_dict(), out / "optimize.json")
    io.save_csv(rep.scan, "optimize_scan", out / "optimize_scan.csv")
    return EXIT_OK


def cmd_capacity(args) -> int:
    _require(args, "S", "lam", "L")
    try:
        rep = mode_capacity(args.S, args.lam, args.L, args.d)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = _out_dir(args)
    io.save_json(rep.to_dict(), out / "capacity.json")
    return EXIT_OK


def cmd_figure(args) -> int:
    try:
        parts, text = figures.build(args.name, nt=args.nt, nz=args.nz)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    for _, rows in parts:
        _check_finite(rows)
    out = _out_dir(args)
    for schema, rows in parts:
        io.save_csv(rows, schema, out / f"{schema}.csv")
    (out / f"{args.name}.txt").write_text(text)
    return EXIT_OK


COMMANDS = {
    "write": cmd_write,
    "retrieve": cmd_retrieve,
    "optimize": cmd_optimize,
    "capacity": cmd_capacity,
    "figure": cmd_figure,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(parser, args)
        if args.nt < 2 or args.nz < 2:
            raise ConfigError("--nt and --nz must be at least 2")
        return COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FloatingPointError, MemoryError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
