"""Acceptance criteria 1-10, one test each, with a pass/fail line per criterion."""

import json
import math
import time
import warnings

import numpy as np
import pytest

from orlab import extrap as X
from orlab.cli import ExperimentConfig, execute, run
from orlab.grid import DiscreteFunction, Grid1D, Weight, WeightedMeasure, corpus
from orlab.norms import associated_norm, luxemburg, orlicz_lorentz_B1, pairing, weak_orlicz, weak_orlicz_rearr
from orlab.ops import hilbert
from orlab.suites import SUITES, kappa_sweep
from orlab.young import BRho, Partner, PhiRho, Power, Rescaled, conjugate_defect


def suite_config(suite, n_list, output_dir="unused", **kw):
    return ExperimentConfig(suite=suite, grid_lo=-1.0, grid_hi=1.0, n_list=tuple(n_list), output_dir=str(output_dir), **kw)


def failing(rows):
    return [r for r in rows if not r["pass"]]


def test_criterion_01_closed_form_norms(criterion):
    start = time.perf_counter()
    g = Grid1D.symmetric(1024)
    rng = np.random.default_rng(1)
    worst = 0.0
    for k in range(50):
        w = corpus(g).weight(("unit", "pow-0.5", "pow+0.5")[k % 3]) if k % 2 else Weight(g, rng.uniform(0.1, 4.0, 1024))
        mu = WeightedMeasure(w)
        mask = rng.random(1024) < rng.uniform(0.01, 0.9)
        mask[rng.integers(1024)] = True
        f = DiscreteFunction(g, mask.astype(float))
        mE = mu.mass(mask)
        for A in (Power(2.0), PhiRho(1.0), BRho(1.0)):
            expected = 1.0 / float(A.inverse(1.0 / mE))
            for value in (luxemburg(f, A, mu).value, weak_orlicz(f, A, mu).value):
                worst = max(worst, abs(value / expected - 1.0))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 5.0
    criterion(1, ok, f"max relative error {worst:.2e} (tol 1e-9), {elapsed:.2f} s (limit 5 s)")
    assert ok


def test_criterion_02_rescaling_identity(criterion):
    start = time.perf_counter()
    g = Grid1D.symmetric(1024)
    C = corpus(g)
    A = PhiRho(1.0)
    worst = 0.0
    for w in C.weights.values():
        mu = WeightedMeasure(w)
        for f in C.functions.values():
            ref = weak_orlicz(f, A, mu).value
            for r in (2.0, 3.0, 3.5):
                other = weak_orlicz(abs(f) ** (1.0 / r), Rescaled(A, r), mu).value ** r
                worst = max(worst, abs(ref - other) / ref)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0
    criterion(2, ok, f"max relative defect {worst:.2e} (tol 1e-9), {elapsed:.2f} s (limit 10 s)")
    assert ok


def test_criterion_03_rewrite_both_directions(criterion):
    rows = execute(suite_config("rewrite", [1024], growth=PhiRho(1.0)))
    checked = [r for r in rows if not r.get("reported_only")]
    entries = {r["entry"].split("|")[0] for r in rows}
    fwd = max(r["constant"] for r in checked if r["quantity"] == "weak-norm-over-lambda0-bound")
    rev = max(r["constant"] for r in checked if r["quantity"] == "modular-over-reverse-bound")
    bad = failing(rows)
    ok = not bad and len(entries) == 20
    criterion(3, ok, f"{len(entries)} functions, {len(bad)} violations; worst forward {fwd:.3f}, worst reverse {rev:.3f} (bound 1)")
    assert ok


def test_criterion_04_holder_and_associated(criterion):
    A = Rescaled(PhiRho(1.0), 2.0)
    B = Partner(A)
    D = conjugate_defect(A, B)
    rng = np.random.default_rng(2024)
    g = Grid1D.symmetric(64)
    violations, worst, ratios = 0, 0.0, []
    for _ in range(500):
        mu = WeightedMeasure(Weight(g, rng.uniform(0.2, 3.0, 64)))
        f = DiscreteFunction(g, rng.standard_normal(64) * (rng.random(64) < 0.7))
        h = DiscreteFunction(g, rng.standard_normal(64) * (rng.random(64) < 0.7))
        if not (np.any(f.values) and np.any(h.values)):
            continue
        nB = orlicz_lorentz_B1(h, B, mu).value
        q = abs(pairing(f, h, mu)) / (D * weak_orlicz_rearr(f, A, mu).value * nB)
        worst = max(worst, q)
        violations += q > 1.0
        ratios.append(associated_norm(h, A, mu).value / nB)
    c, Cc = min(ratios), max(ratios)
    ok = violations == 0 and Cc <= D * (1 + 1e-8) and c > 0
    criterion(4, ok, f"D={D:.6f}, {violations} violations (worst {worst:.3f}); associated/B1 in [c, C] = [{c:.3f}, {Cc:.3f}]")
    assert ok


def test_criterion_05_kappa_uniformity(criterion):
    start = time.perf_counter()
    spreads = {}
    finite = True
    for rho in (1.0, 2.0):
        for p0 in (3.0, 5.0):
            sweep = kappa_sweep(rho, p0)
            finite &= all(math.isfinite(v) for v in sweep.values())
            spreads[(rho, p0)] = max(sweep.values()) / min(sweep.values())
    elapsed = time.perf_counter() - start
    worst = max(spreads.values())
    ok = finite and worst < 3.0 and elapsed < 30.0
    detail = ", ".join(f"rho={r:g},p0={p:g}: {s:.2f}" for (r, p), s in spreads.items())
    criterion(5, ok, f"spread across r' ({detail}); limit 3; {elapsed:.2f} s (limit 30 s)")
    assert ok


def test_criterion_06_rdf_properties(criterion):
    rows = execute(suite_config("rdf-properties", [1024]))
    want = {
        "h-minus-Rh": "h <= Rh",
        "norm-Rh-over-2-norm-h": "norm doubling",
        "S(Rh)-over-2K0-Rh": "S(Rh) <= 2K0 Rh",
        "A1(Rh u)-over-2K0": "A1 control",
    }
    worst = {q: max(r["constant"] for r in rows if r["quantity"] == q) for q in want}
    bad = failing(rows)
    ok = not bad and worst["h-minus-Rh"] <= 0.0
    detail = "; ".join(f"{want[q]} worst {v:.10g}" for q, v in worst.items())
    criterion(6, ok, f"{len(bad)} failing rows; {detail}")
    assert ok


def test_criterion_07_hilbert_oracle(criterion):
    g = Grid1D.symmetric(4096)
    x = g.centers
    chi = DiscreteFunction(g, ((x > 0.2) & (x < 0.5)).astype(float))
    Hf = hilbert(chi).values
    far = (np.abs(x - 0.2) >= 0.1) & (np.abs(x - 0.5) >= 0.1)
    err = float(np.max(np.abs(Hf[far] - np.log(np.abs(x[far] - 0.2) / np.abs(x[far] - 0.5)) / math.pi)))
    rng = np.random.default_rng(7)
    mu = WeightedMeasure.lebesgue(g)
    defect = 0.0
    for _ in range(10):
        f = DiscreteFunction(g, rng.standard_normal(4096))
        h = DiscreteFunction(g, rng.standard_normal(4096))
        a, b = pairing(hilbert(f), h, mu), -pairing(f, hilbert(h), mu)
        defect = max(defect, abs(a - b) / max(abs(a), abs(b)))
    ok = err <= 1e-2 and defect <= 1e-10
    criterion(7, ok, f"max error {err:.2e} (tol 1e-2), antisymmetry defect {defect:.2e} (tol 1e-10)")
    assert ok


def test_criterion_08_sawyer_stability(criterion):
    vals = {}
    for n in (512, 2048, 4096):
        C = corpus(Grid1D.symmetric(n))
        u, v = C.pair("pow-0.5|pow-0.5")
        vals[n] = {k: X.verify_sawyer(u, v, f) for k, f in C.functions.items()}
    d25 = max(abs(vals[4096][k] / vals[2048][k] - 1) for k in vals[4096])
    d50 = max(abs(vals[4096][k] / vals[512][k] - 1) for k in vals[4096])
    finite = all(math.isfinite(c) for d in vals.values() for c in d.values())
    ok = finite and d25 <= 0.25 and d50 <= 0.50
    consts = ", ".join(f"{k}={c:.3f}" for k, c in sorted(vals[4096].items()))
    criterion(8, ok, f"n=4096 constants {consts}; drift vs 2048 {d25:.3f} (tol 0.25), vs 512 {d50:.3f} (tol 0.5)")
    assert ok


def test_criterion_09_endpoint_extrapolation(criterion):
    start = time.perf_counter()
    rows = execute(suite_config("endpoint-extrapolation", [2048, 4096]))
    elapsed = time.perf_counter() - start
    hip = [r for r in rows if r["quantity"] == "hip-constant"]
    hip_ok = len(hip) == 2 * 2 * 3 * 3 and all(r["pass"] and math.isfinite(r["constant"]) for r in hip)
    ratios = [r for r in rows if r["quantity"] == "weak-B-ratio"]
    drift = [r for r in rows if r["quantity"] == "weak-B-ratio-refinement-drift"]
    ratios_ok = all(r["pass"] and math.isfinite(r["constant"]) for r in ratios)
    worst = max(r["constant"] for r in drift)
    ok = hip_ok and ratios_ok and len(drift) == len(ratios) // 2 and worst <= 0.25 and not failing(rows) and elapsed < 300
    criterion(
        9, ok,
        f"hip spot-check {'passed' if hip_ok else 'FAILED'} ({len(hip)} c_w); {len(ratios)} ratios finite={ratios_ok}; "
        f"worst drift 2048->4096 {worst:.3f} (tol 0.25); {elapsed:.1f} s (limit 300 s)",
    )
    assert ok


DETERMINISM_N = {"assoc-duality": [64, 128], "interpolation-kappa": [256]}


def test_criterion_10_determinism(criterion, tmp_path):
    mismatched = []
    for name in SUITES:
        n_list = DETERMINISM_N.get(name, [128, 256])
        bodies = []
        for _ in range(2):
            cfg = suite_config(name, n_list, tmp_path / name, seed=3)
            run(cfg, threads=2)
            bodies.append(json.loads((tmp_path / name / "report.json").read_text())["body"])
        if bodies[0] != bodies[1]:
            mismatched.append(name)
    ok = not mismatched
    criterion(10, ok, f"{len(SUITES)} suites run twice; identical bodies except {mismatched}" if mismatched
              else f"{len(SUITES)} suites run twice with identical report bodies")
    assert ok
