"""Print the headline numbers: optimal writing point, retrieval efficiencies and capacity."""

import argparse

from lambda_memory.kernel import build_table
from lambda_memory.optimize import optimize_write_duration
from lambda_memory.params import DimensionlessConfig
from lambda_memory.readout import TR_PRESETS, retrieve
from lambda_memory.transverse import mode_capacity
from lambda_memory.writing import solve_write, write_loss


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nt", type=int, default=200)
    ap.add_argument("--nz", type=int, default=400)
    args = ap.parse_args()

    print("optimal writing duration")
    for L in (5.0, 10.3, 15.0):
        rep = optimize_write_duration(L, nt=args.nt)
        print(f"  L = {L:5.1f}: Tw* = {rep.Tw_opt:.4f}  Loss* = {rep.loss_opt:.4f} %  L/Tw* = {rep.ratio:.4f}"
              f"  converged = {rep.converged}")

    L, Tw = 10.3, 4.2
    cfg = DimensionlessConfig(L_tilde=L, Tw_tilde=Tw, Tr_tilde=max(TR_PRESETS) * Tw, nt=args.nt, nz=args.nz)
    table = build_table(cfg)
    sol = solve_write(table, cfg.with_(Tr_tilde=Tw))
    loss = write_loss(sol)
    print(f"\nretrieval at L = {L}, Tw = {Tw} (writing loss {loss:.4f} %)")
    for d in ("forward", "backward"):
        for m in TR_PRESETS:
            eff = retrieve(sol.stored_profile, table, cfg.with_(Tr_tilde=m * Tw), d).efficiency
            print(f"  {d:8s} Tr = {m:2d} Tw: {eff:.3f} %")

    rep = mode_capacity(1e-4, 7.95e-7, 1e-2)
    print(f"\ncapacity for S = 1 cm^2, lambda = 795 nm, L = 1 cm: F_N = {rep.fresnel:.1f}, "
          f"forward bound {rep.n_max_forward:.3e}")


if __name__ == "__main__":
    main()
