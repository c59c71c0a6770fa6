"""Grid refinement of the writing loss and the retrieval efficiency at the operating point.

Prints one line per grid with the change relative to the previous one and the
observed order. Also compares against the independent finite-difference oracle.
"""

import argparse
import math

import numpy as np

from lambda_memory.kernel import build_table
from lambda_memory.oracle import integrate
from lambda_memory.params import DimensionlessConfig
from lambda_memory.readout import retrieve
from lambda_memory.writing import solve_write, write_loss


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=float, default=10.3)
    ap.add_argument("--Tw", type=float, default=4.2)
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args()

    prev, prev_d = None, None
    print(f"{'nt':>5} {'nz':>5} {'loss %':>12} {'eff fwd %':>12} {'eff bwd %':>12} {'oracle err':>11} {'order':>6}")
    for k in range(args.levels):
        nt, nz = 50 * 2**k, 100 * 2**k
        cfg = DimensionlessConfig(L_tilde=args.L, Tw_tilde=args.Tw, nt=nt, nz=nz)
        table = build_table(cfg)
        sol = solve_write(table, cfg)
        vals = np.array([write_loss(sol)] + [retrieve(sol.stored_profile, table, cfg, d).efficiency
                                             for d in ("forward", "backward")])
        run = integrate(1.0, np.zeros(nz + 1), np.zeros(nz + 1), args.Tw, args.L, nt)
        err = np.abs(run.a - sol.a_field).max()
        order = ""
        if prev is not None:
            d = np.abs(vals - prev).max()
            if prev_d:
                order = f"{math.log2(prev_d / d):.2f}"
            prev_d = d
        prev = vals
        print(f"{nt:5d} {nz:5d} {vals[0]:12.6f} {vals[1]:12.6f} {vals[2]:12.6f} {err:11.2e} {order:>6}")


if __name__ == "__main__":
    main()
