"""Rubio de Francia majorant of one corpus function under u = |x|^{-1/2}.

Prints the measured configuration and, per truncation depth, how far the
truncated majorant is from satisfying S(Rh) <= 2 K0 Rh.
"""

import argparse

import numpy as np

from orlab.extrap import rubio_de_francia
from orlab.grid import Grid1D, corpus
from orlab.ops import sawyer_S
from orlab.suites import build_rdf_config


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1024)
    ap.add_argument("--fn", default="triangle")
    args = ap.parse_args()
    g = Grid1D.symmetric(args.n)
    C = corpus(g)
    cfg, u, _ = build_rdf_config(g, C.functions.values())
    print("config:", {k: round(v, 4) if isinstance(v, float) else v for k, v in cfg.to_json().items()})
    h = abs(C.function(args.fn))
    for depth in (1, 2, 5, 10, 20, 40):
        R = rubio_de_francia(h, u, cfg.K0, depth)
        ratio = float(np.max(sawyer_S(R, u).values / (2 * cfg.K0 * R.values)))
        print(f"depth={depth:<3} max S(Rh)/(2 K0 Rh) = {ratio:.12f}  max Rh/h = {float(np.max(R.values[h.values > 0] / h.values[h.values > 0])):.6f}")


if __name__ == "__main__":
    main()
