"""Write the data files for every reproduced figure into one directory."""

import argparse
from pathlib import Path

from lambda_memory import io
from lambda_memory.figures import FIGURES, build


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="figure_data")
    ap.add_argument("--nt", type=int, default=200)
    ap.add_argument("--nz", type=int, default=400)
    ap.add_argument("names", nargs="*", default=list(FIGURES))
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.names:
        parts, text = build(name, nt=args.nt, nz=args.nz)
        for schema, rows in parts:
            io.save_csv(rows, schema, out / f"{schema}.csv")
        (out / f"{name}.txt").write_text(text)
        print(f"{name}: {', '.join(s + '.csv' for s, _ in parts)}")


if __name__ == "__main__":
    main()
