"""Command-line experiment runner.

    orlab run <config.json>
    orlab list-suites
    orlab norm --fn <name> --growth <json> --measure <weight>
    orlab weight-constant --weight <name> --p <real>

Exit codes: 0 all rows pass, 1 a row failed or a counterexample candidate
was flagged, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import extrap as X
from . import suites as S
from .grid import Grid1D, Weight, WeightedMeasure, a1_constant, ap_constant, corpus
from .norms import luxemburg, orlicz_lorentz_B1, weak_orlicz
from .svg import loglog_svg
from .young import GrowthFunction

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
ROW_KEYS = ("suite", "entry", "quantity", "n", "anchor", "constant", "tolerance", "pass")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    suite: str
    grid_lo: float
    grid_hi: float
    n_list: tuple
    output_dir: str
    corpus_names: Optional[tuple] = None
    growth: Optional[GrowthFunction] = None
    extrap: Optional[X.ExtrapolationConfig] = None
    seed: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.suite not in S.SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; registered: {sorted(S.SUITES)}")
        if not self.n_list:
            raise ConfigError("grid.n_list must be nonempty")
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ConfigError("grid.n_list must be strictly increasing")

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        try:
            grid = obj["grid"]
            names = obj.get("corpus_names")
            if names in (None, "all"):
                names = None
            growth = GrowthFunction.from_json(obj["growth"]) if obj.get("growth") else None
            extrap = X.ExtrapolationConfig.from_json(obj["extrap"]) if obj.get("extrap") else None
            return cls(
                suite=obj["suite"],
                grid_lo=float(grid.get("lo", -1.0)),
                grid_hi=float(grid.get("hi", 1.0)),
                n_list=tuple(int(n) for n in grid["n_list"]),
                output_dir=str(obj.get("output_dir", "out")),
                corpus_names=tuple(names) if names is not None else None,
                growth=growth,
                extrap=extrap,
                seed=int(obj.get("seed", 0)),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "corpus_names": list(self.corpus_names) if self.corpus_names else "all",
            "grid": {"lo": self.grid_lo, "hi": self.grid_hi, "n_list": list(self.n_list)},
            "growth": self.growth.to_json() if self.growth else None,
            "extrap": self.extrap.to_json() if self.extrap else None,
            "output_dir": self.output_dir,
            "seed": self.seed,
        }


@dataclass
class ReportBundle:
    header: dict
    body: dict
    files: list

    @property
    def rows(self) -> list:
        return self.body["rows"]

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.body["summary"]["pass"] else EXIT_FAIL


def _threads() -> int:
    raw = os.environ.get("ORLAB_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError(f"ORLAB_THREADS must be an integer, got {raw!r}") from None
    return min(4, os.cpu_count() or 1)


def _safe_entry(suite: S.Suite, ctx: S.Context, name: str) -> list:
    try:
        return suite.entry(ctx, name)
    except X.CounterexampleCandidate as exc:
        return [S.row(name, "counterexample", math.inf, None, False, counterexample=True, detail=str(exc))]
    except X.DegenerateInput as exc:
        return [S.row(name, "degenerate-input", math.nan, None, False, detail=str(exc))]


def _sort_key(r: dict):
    return (r["suite"], r["entry"], r["quantity"], r["n"])


def execute(cfg: ExperimentConfig, threads: Optional[int] = None) -> list:
    """All rows for the configured suite, in canonical order."""
    suite = S.get_suite(cfg.suite)
    threads = threads or _threads()
    contexts = []
    for n in cfg.n_list:
        grid = Grid1D(cfg.grid_lo, cfg.grid_hi, n)
        try:
            ctx, entries = S.make_context(
                suite, grid, list(cfg.corpus_names) if cfg.corpus_names else None, cfg.growth, cfg.extrap, cfg.seed
            )
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None
        contexts.append((n, ctx, entries))
    tasks = [(n, ctx, name) for n, ctx, entries in contexts for name in entries]

    def work(task):
        n, ctx, name = task
        return [dict(r, n=n) for r in _safe_entry(suite, ctx, name)]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(work, tasks))
    else:
        chunks = [work(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    extra = S.SUITE_EXTRAS.get(suite.name)
    if extra:
        for n, ctx, _ in contexts:
            rows.extend(dict(r, n=n) for r in extra(ctx))
    rows.extend(S.refinement_rows(suite, rows))
    for r in rows:
        r["suite"] = suite.name
        r["anchor"] = suite.anchor
    return sorted(rows, key=_sort_key)


def _summary(rows: list) -> dict:
    failed = [r for r in rows if not r["pass"]]
    flagged = [r for r in rows if r.get("counterexample")]
    return {"rows": len(rows), "failed": len(failed), "counterexamples": len(flagged), "pass": not failed}


def _json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def _write_csv(path: Path, rows: list) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(ROW_KEYS)
        for r in rows:
            w.writerow([_json_value(r.get(k)) for k in ROW_KEYS])


def _plot_name(quantity: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", quantity)


def _write_plots(out: Path, cfg: ExperimentConfig, rows: list) -> list:
    files = []
    by_q = {}
    for r in rows:
        by_q.setdefault(r["quantity"], {}).setdefault(r["entry"], []).append((r["n"], r["constant"]))
    for q, series in sorted(by_q.items()):
        data = {e: ([p[0] for p in pts], [p[1] for p in pts]) for e, pts in series.items()}
        svg = loglog_svg(data, f"{cfg.suite}: {q}", "n", q)
        if svg:
            p = out / f"{_plot_name(q)}.svg"
            p.write_text(svg)
            files.append(p.name)
    if cfg.suite == "sawyer":
        files.extend(_write_level_curves(out, cfg))
    return files


def _write_level_curves(out: Path, cfg: ExperimentConfig) -> list:
    grid = Grid1D(cfg.grid_lo, cfg.grid_hi, cfg.n_list[-1])
    C = corpus(grid)
    names = list(cfg.corpus_names) if cfg.corpus_names else sorted(C.functions)
    fs = S.resolve_functions(grid, names, cfg.seed)
    files = []
    for pname in S.SAWYER_PAIRS:
        u, v = C.pair(pname)
        mu = WeightedMeasure(Weight.of(u * v))
        series = {}
        for name, f in fs.items():
            t, tm = X.level_curve(X.sawyer_output(u, v, f), mu)
            series[name] = (t.tolist(), tm.tolist())
        svg = loglog_svg(series, f"level curves, (u|v) = {pname}, n = {grid.n}", "t", "t * uv({M(fv)/v > t})")
        if svg:
            p = out / f"level_curve_{_plot_name(pname)}.svg"
            p.write_text(svg)
            files.append(p.name)
    return files


def run(cfg: ExperimentConfig, threads: Optional[int] = None) -> ReportBundle:
    rows = execute(cfg, threads)
    body = {
        "config": cfg.to_json(),
        "suite": S.get_suite(cfg.suite).describe(),
        "rows": [{k: _json_value(v) for k, v in r.items()} for r in rows],
        "summary": _summary(rows),
    }
    header = {"tool": "orlab", "timestamp": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")}
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps({"header": header, "body": body}, indent=2, sort_keys=True) + "\n")
    _write_csv(out / "summary.csv", rows)
    files = ["report.json", "summary.csv"] + _write_plots(out, cfg, rows)
    return ReportBundle(header, body, files)


def load_config(path: str) -> ExperimentConfig:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return ExperimentConfig.from_json(obj)


# -- subcommands --------------------------------------------------------------


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.output_dir:
        cfg = ExperimentConfig(**{**cfg.__dict__, "output_dir": args.output_dir})
    bundle = run(cfg)
    s = bundle.body["summary"]
    print(f"{cfg.suite}: {s['rows']} rows, {s['failed']} failed, {s['counterexamples']} counterexample candidates")
    for r in bundle.rows:
        if not r["pass"]:
            print(f"  FAIL {r['entry']} {r['quantity']} n={r['n']} constant={r['constant']} tol={r['tolerance']}")
    print(f"wrote {', '.join(bundle.files)} to {cfg.output_dir}")
    return bundle.exit_code


def _cmd_list(args) -> int:
    for s in S.list_suites():
        print(f"{s['name']:<24} {s['anchor']:<40} {s['description']}")
    return EXIT_OK


def _cmd_norm(args) -> int:
    grid = Grid1D.symmetric(args.n)
    C = corpus(grid)
    try:
        f = S.resolve_functions(grid, [args.fn], args.seed)[args.fn]
        w = C.weight(args.measure)
        A = GrowthFunction.from_json(json.loads(args.growth))
    except (KeyError, ValueError, TypeError, AttributeError) as exc:
        raise ConfigError(str(exc.args[0]) if exc.args else str(exc)) from None
    mu = WeightedMeasure(w)
    out = {
        "fn": args.fn,
        "measure": args.measure,
        "n": args.n,
        "growth": A.to_json(),
        "luxemburg": luxemburg(f, A, mu).to_json(),
        "weak_orlicz": weak_orlicz(f, A, mu).to_json(),
        "orlicz_lorentz_1": orlicz_lorentz_B1(f, A, mu).to_json(),
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _cmd_weight(args) -> int:
    grid = Grid1D.symmetric(args.n)
    try:
        w = corpus(grid).weight(args.weight)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    if args.p < 1:
        raise ConfigError("p must be >= 1")
    value = a1_constant(w) if args.p == 1 else ap_constant(w, args.p)
    print(json.dumps({"weight": args.weight, "p": args.p, "n": args.n, "constant": value}, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orlab", description="weighted weak Orlicz experiments on 1-D grids")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a suite from a JSON config")
    r.add_argument("config")
    r.add_argument("--output-dir", help="override output_dir from the config")
    r.set_defaults(handler=_cmd_run)
    ls = sub.add_parser("list-suites", help="list registered suites")
    ls.set_defaults(handler=_cmd_list)
    nm = sub.add_parser("norm", help="norms of one corpus function")
    nm.add_argument("--fn", required=True, help="corpus function, e.g. indicator or rand-03")
    nm.add_argument("--growth", required=True, help='growth JSON, e.g. {"kind": "phi_rho", "params": {"rho": 1}}')
    nm.add_argument("--measure", default="unit", help="corpus weight defining the measure")
    nm.add_argument("--n", type=int, default=1024)
    nm.add_argument("--seed", type=int, default=0)
    nm.set_defaults(handler=_cmd_norm)
    wc = sub.add_parser("weight-constant", help="A_p constant of a corpus weight")
    wc.add_argument("--weight", required=True)
    wc.add_argument("--p", type=float, required=True)
    wc.add_argument("--n", type=int, default=1024)
    wc.set_defaults(handler=_cmd_weight)
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
