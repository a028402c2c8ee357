"""Run every config in configs/ and print one summary line per suite.

    python3 scripts/run_all_suites.py [--configs configs] [--out out]
"""

import argparse
import sys
import time
from pathlib import Path

from orlab.cli import ExperimentConfig, load_config, run


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--configs", default="configs")
    ap.add_argument("--out", default="out")
    args = ap.parse_args()
    worst = 0
    for path in sorted(Path(args.configs).glob("*.json")):
        cfg = load_config(str(path))
        cfg = ExperimentConfig(**{**cfg.__dict__, "output_dir": str(Path(args.out) / cfg.suite)})
        t0 = time.perf_counter()
        bundle = run(cfg)
        s = bundle.body["summary"]
        print(f"{cfg.suite:<24} n={list(cfg.n_list)} rows={s['rows']:<4} failed={s['failed']:<3} {time.perf_counter() - t0:6.1f} s")
        worst = max(worst, bundle.exit_code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
