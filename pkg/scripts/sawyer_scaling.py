"""Sawyer constants of the corpus against grid size, for each weight pair.

Writes sawyer_scaling.csv and sawyer_scaling.svg to --out.
"""

import argparse
import csv
from pathlib import Path

from orlab.extrap import verify_sawyer
from orlab.grid import Grid1D, corpus
from orlab.suites import SAWYER_PAIRS
from orlab.svg import loglog_svg


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[256, 512, 1024, 2048, 4096])
    ap.add_argument("--out", default="out/scripts")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = []
    for n in args.n:
        C = corpus(Grid1D.symmetric(n))
        for pname in SAWYER_PAIRS:
            u, v = C.pair(pname)
            for fname, f in sorted(C.functions.items()):
                table.append((pname, fname, n, verify_sawyer(u, v, f)))
                print(f"{pname:<18} {fname:<10} n={n:<5} {table[-1][3]:.4f}")
    with open(out / "sawyer_scaling.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["pair", "function", "n", "constant"])
        w.writerows(table)
    series = {}
    for pname, fname, n, c in table:
        xs, ys = series.setdefault(f"{fname} {pname}", ([], []))
        xs.append(n)
        ys.append(c)
    (out / "sawyer_scaling.svg").write_text(loglog_svg(series, "Sawyer constant vs n", "n", "constant"))


if __name__ == "__main__":
    main()
