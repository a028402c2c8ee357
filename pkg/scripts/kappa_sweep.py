"""(1/p0 - 1/r') kappa(s) for the Psi growth functions over s and r'.

Shows how the scaled constant moves with s and that its sup is roughly
independent of r'.  Writes kappa_sweep.csv and kappa_sweep.svg.
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from orlab.extrap import kappa_integral
from orlab.svg import loglog_svg
from orlab.young import PsiConjugate


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--rho", type=float, nargs="+", default=[1.0, 2.0])
    ap.add_argument("--p0", type=float, nargs="+", default=[3.0, 5.0])
    ap.add_argument("--out", default="out/scripts")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    s_grid = np.logspace(-8, 8, 33)
    rows, series = [], {}
    for rho in args.rho:
        for p0 in args.p0:
            for rp in (2 * p0 + 1, 3 * p0, 10 * p0):
                A = PsiConjugate.from_conjugate_exponent(rho, rp)
                scaled = [(1 / p0 - 1 / rp) * kappa_integral(A, p0, s) for s in s_grid]
                rows += [(rho, p0, rp, s, c) for s, c in zip(s_grid, scaled)]
                series[f"rho={rho:g} p0={p0:g} r'={rp:g}"] = (list(s_grid), scaled)
                print(f"rho={rho:g} p0={p0:g} r'={rp:<5g} sup={max(scaled):.3f} min={min(scaled):.3f}")
    with open(out / "kappa_sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rho", "p0", "r_prime", "s", "scaled_kappa"])
        w.writerows(rows)
    (out / "kappa_sweep.svg").write_text(loglog_svg(series, "scaled kappa vs s", "s", "(1/p0 - 1/r') kappa"))


if __name__ == "__main__":
    main()
