"""Registered verification suites.

A suite is run per grid size: ``prepare`` builds what every entry shares
(corpus, measured constants), then ``entry`` produces the rows for one named
entry.  Rows are flat dicts so they serialise straight to JSON and CSV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import extrap as X
from .grid import (
    A1_WEIGHTS,
    PAIR_NAMES,
    Corpus,
    DiscreteFunction,
    Grid1D,
    Weight,
    WeightedMeasure,
    a1_constant,
    ap_constant,
    corpus,
    make_log_abs,
    make_power_weight,
    random_functions,
)
from .norms import associated_norm, luxemburg, orlicz_lorentz_B1, pairing, weak_orlicz, weak_orlicz_rearr
from .ops import commutator, hilbert, hl_maximal, m_llogl, sawyer_S
from .young import (
    BRho,
    GrowthFunction,
    Partner,
    PhiRho,
    PsiConjugate,
    Rescaled,
    conjugate_defect,
    conjugate_identity_defect,
    probe_grid,
    submultiplicativity_constant,
)

RESCALING_RS = (2.0, 3.0, 3.5)
HIP_WEIGHTS = ("unit", "pow-0.5", "pow+0.5")
HIP_PS = (0.5, 1.0, 2.0)
REWRITE_CORPUS_SIZE = 20
KAPPA_CASES = tuple((rho, p0) for rho in (1.0, 2.0) for p0 in (3.0, 5.0))
KAPPA_UNIFORMITY = 3.0
AP_EXPONENTS = (1.5, 2.0, 3.0)
SAWYER_PAIRS = ("unit|unit", "pow-0.5|pow-0.5", "pow-0.5|unit", "unit|pow-0.5")
COROLLARY_EPS = 0.5
ROUNDING = 1e-9


def row(entry: str, quantity: str, constant: float, tolerance: Optional[float], passed: bool, **extra) -> dict:
    out = {
        "entry": entry,
        "quantity": quantity,
        "constant": float(constant),
        "tolerance": tolerance,
        "pass": bool(passed),
    }
    out.update(extra)
    return out


def at_most(entry: str, quantity: str, constant: float, bound: float) -> dict:
    return row(entry, quantity, constant, bound, math.isfinite(constant) and constant <= bound)


def finite(entry: str, quantity: str, constant: float) -> dict:
    return row(entry, quantity, constant, None, math.isfinite(constant))


def reported(entry: str, quantity: str, constant: float) -> dict:
    return row(entry, quantity, constant, None, True, reported_only=True)


@dataclass
class Context:
    grid: Grid1D
    corpus: Corpus
    functions: dict[str, DiscreteFunction]
    growth: Optional[GrowthFunction]
    extrap: Optional[X.ExtrapolationConfig]
    seed: int
    shared: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    anchor: str
    entry: Callable[[Context, str], list]
    default_entries: Callable[[Context], list]
    prepare: Optional[Callable[[Context], None]] = None
    # relative tolerance for constants across one n-doubling; None: not checked
    refinement_tol: Optional[float] = None

    def describe(self) -> dict:
        return {"name": self.name, "description": self.description, "anchor": self.anchor}


def corpus_entries(ctx: Context) -> list:
    return sorted(ctx.corpus.functions)


def resolve_functions(grid: Grid1D, names, seed: int) -> dict[str, DiscreteFunction]:
    """Corpus functions plus seeded ``rand-XX`` entries, looked up by name."""
    base = corpus(grid).functions
    rand_names = [n for n in names if n.startswith("rand-")]
    extra = {}
    if rand_names:
        count = max(int(n.split("-")[1]) for n in rand_names) + 1
        extra = random_functions(grid, count, seed)
    pool = {**base, **extra}
    missing = [n for n in names if n not in pool]
    if missing:
        raise KeyError(f"unknown corpus entries {missing}; known: {sorted(base)} and rand-00, rand-01, ...")
    return {n: pool[n] for n in names}


def _growth(ctx: Context) -> GrowthFunction:
    return ctx.growth or PhiRho(1.0)


# -- rescaling ----------------------------------------------------------------


def _rescaling_entry(ctx: Context, name: str) -> list:
    f = ctx.functions[name]
    A = _growth(ctx)
    rows = []
    for wname in sorted(ctx.corpus.weights):
        mu = WeightedMeasure(ctx.corpus.weight(wname))
        ref = weak_orlicz(f, A, mu).value
        for r in RESCALING_RS:
            other = weak_orlicz(abs(f) ** (1.0 / r), Rescaled(A, r), mu).value ** r
            defect = abs(ref - other) / ref if ref else abs(other)
            rows.append(at_most(f"{name}|{wname}|r={r:g}", "relative-defect", defect, ROUNDING))
    return rows


# -- modular <-> norm rewrite -------------------------------------------------


REWRITE_MEASURES = ("unit", "pow-0.5")


def _rewrite_prepare(ctx: Context) -> None:
    A = _growth(ctx)
    B_inv_form = _reciprocal_growth(A)
    cA = submultiplicativity_constant(A)
    fs = ctx.functions
    G = {k: hl_maximal(f) for k, f in fs.items()}
    per_measure = {}
    for wname in REWRITE_MEASURES:
        mu = WeightedMeasure(ctx.corpus.weight(wname))
        cg = {k: X.level_ratio_sup(G[k], mu, f, A) for k, f in fs.items()}
        lux = {k: luxemburg(f, A, mu).value for k, f in fs.items()}
        weak = {k: weak_orlicz(G[k], B_inv_form, mu).value for k in fs}
        c_G = max(cg.values())
        lam0 = 1.0 / float(A.inverse(1.0 / (c_G * cA**2)))
        c_hat = max(weak[k] / lux[k] for k in fs)
        K = cA * float(A.eval(c_hat)) * float(A.eval(1.0))
        per_measure[wname] = dict(cg=cg, lux=lux, weak=weak, c_G=c_G, lam0=lam0, c_hat=c_hat, K=K)
    ctx.shared.update(cA=cA, per_measure=per_measure)


def _reciprocal_growth(A: GrowthFunction) -> GrowthFunction:
    """B(t) = 1 / A(1/t), available in closed form for PhiRho only."""
    if isinstance(A, PhiRho):
        return BRho(A.rho)
    raise ValueError("the rewrite suite needs a PhiRho growth function")


def _rewrite_entry(ctx: Context, name: str) -> list:
    rows = []
    for wname, d in ctx.shared["per_measure"].items():
        tag = f"{name}|{wname}"
        fwd = d["weak"][name] / (d["lam0"] * d["lux"][name])
        rows.append(at_most(tag, "weak-norm-over-lambda0-bound", fwd, 1.0 + ROUNDING))
        rows.append(at_most(tag, "modular-over-reverse-bound", d["cg"][name] / d["K"], 1.0 + ROUNDING))
        rows.append(reported(tag, "c_G", d["c_G"]))
        rows.append(reported(tag, "c_hat_G", d["c_hat"]))
    return rows


def _rewrite_entries(ctx: Context) -> list:
    rand = [f"rand-{k:02d}" for k in range(REWRITE_CORPUS_SIZE - len(ctx.corpus.functions))]
    return sorted(ctx.corpus.functions) + rand


# -- associated space duality -------------------------------------------------


HOLDER_SAMPLES = 20


def _assoc_prepare(ctx: Context) -> None:
    A = Rescaled(PhiRho(1.0), 2.0)
    B = Partner(A)
    ctx.shared.update(A=A, B=B, D=conjugate_defect(A, B))


def _assoc_entry(ctx: Context, name: str) -> list:
    A, B, D = ctx.shared["A"], ctx.shared["B"], ctx.shared["D"]
    g = ctx.functions[name]
    mu = WeightedMeasure.lebesgue(ctx.grid)
    nB = orlicz_lorentz_B1(g, B, mu).value
    rng = np.random.default_rng(ctx.seed)
    worst = 0.0
    for _ in range(HOLDER_SAMPLES):
        f = g.with_values(rng.standard_normal(ctx.grid.n) * (rng.random(ctx.grid.n) < 0.6))
        worst = max(worst, abs(pairing(f, g, mu)) / (D * weak_orlicz_rearr(f, A, mu).value * nB))
    assoc = associated_norm(g, A, mu, seed=ctx.seed).value / nB
    return [
        at_most(name, "holder-ratio", worst, 1.0),
        at_most(name, "associated-over-B1", assoc, D * (1.0 + 1e-8)),
        reported(name, "conjugate-defect", D),
    ]


# -- interpolation condition --------------------------------------------------


def _kappa_entries(ctx: Context) -> list:
    return [f"rho={rho:g},p0={p0:g}" for rho, p0 in KAPPA_CASES]


def kappa_sweep(rho: float, p0: float) -> dict[float, float]:
    """(1/p0 - 1/r') sup_s kappa for r' in {2 p0 + 1, 3 p0, 10 p0}."""
    out = {}
    for rp in (2 * p0 + 1, 3 * p0, 10 * p0):
        A = PsiConjugate.from_conjugate_exponent(rho, rp)
        out[rp] = (1.0 / p0 - 1.0 / rp) * X.kappa_sup(A, p0)
    return out


def _kappa_entry(ctx: Context, name: str) -> list:
    parts = dict(kv.split("=") for kv in name.split(","))
    rho, p0 = float(parts["rho"]), float(parts["p0"])
    sweep = kappa_sweep(rho, p0)
    rows = [finite(f"{name},r'={rp:g}", "scaled-kappa", v) for rp, v in sweep.items()]
    spread = max(sweep.values()) / min(sweep.values())
    rows.append(at_most(name, "scaled-kappa-spread", spread, KAPPA_UNIFORMITY))
    return rows


# -- Rubio de Francia ---------------------------------------------------------


def build_rdf_config(grid: Grid1D, functions, rho: float = 1.0, seed: int = 0) -> tuple[X.ExtrapolationConfig, Weight, Weight]:
    """Measured configuration for u = |x|^{-1/2}, v = |x|^{1/2} = 1 * (|x|^{-1/2})^{1-2}."""
    C = corpus(grid)
    u = C.weight("pow-0.5")
    fw = C.factored["pow+0.5"]

    def pw(a):
        return lambda g: make_power_weight(a, g)

    eps0 = X.epsilon0_probe(pw(-0.5), 1.0, [pw(-0.5)], grid) or X.FALLBACK_EPS0
    eps_tilde = X.epsilon0_probe(pw(-0.5), 1.0, [pw(0.0)], grid) or X.FALLBACK_EPS0
    C1 = a1_constant(u)
    C0 = X.measure_C0(u, fw.v, list(functions), X.p0_select(fw.t, eps0))
    cfg = X.ExtrapolationConfig.build(rho, fw.t, eps0, C0, C1, eps_tilde=eps_tilde, seed=seed)
    return cfg, u, fw.v


def _rdf_prepare(ctx: Context) -> None:
    if ctx.extrap is not None:
        C = ctx.corpus
        cfg, u, v = ctx.extrap, C.weight("pow-0.5"), C.factored["pow+0.5"].v
    else:
        cfg, u, v = build_rdf_config(ctx.grid, ctx.functions.values(), seed=ctx.seed)
    mu = WeightedMeasure(Weight.of(u * v))
    B = Rescaled(BRho(cfg.rho), cfg.r)
    # the probe has to cover every 1/mass the rearrangement can produce
    masses = mu.masses
    span = probe_grid(min(1e-8, 0.5 / masses.sum()), max(1e8, 2.0 / masses.min()), 400)
    D = conjugate_identity_defect(cfg.rho, cfg.r, span)
    ctx.shared.update(cfg=cfg, u=u, v=v, mu=mu, D=D, B=B)


def _rdf_entry(ctx: Context, name: str) -> list:
    s = ctx.shared
    cfg, u, v, mu = s["cfg"], s["u"], s["v"], s["mu"]
    psi = cfg.psi
    h = abs(ctx.functions[name])
    R = X.rubio_de_francia(h, u, cfg.K0, cfg.rdf_depth)
    nh = orlicz_lorentz_B1(h, psi, mu).value
    nR = orlicz_lorentz_B1(R, psi, mu).value
    SR = sawyer_S(R, u)
    rows = [
        at_most(name, "h-minus-Rh", float(np.max(h.values - R.values)), 0.0),
        at_most(name, "norm-Rh-over-2-norm-h", nR / (2.0 * nh), 1.0 + 1e-8),
        at_most(name, "S(Rh)-over-2K0-Rh", float(np.max(SR.values / (2.0 * cfg.K0 * R.values))), 1.0 + 1e-8),
        at_most(name, "A1(Rh u)-over-2K0", a1_constant(Weight.of(R * u)) / (2.0 * cfg.K0), 1.05),
    ]
    # duality chain: h normalised in L^{Psi,1}(uv), tested against |H f|
    hn = h / nh
    F = abs(hilbert(ctx.functions[name]))
    lhs = pairing((F / v) ** (1.0 / cfg.r), hn, mu)
    rhs = s["D"] * weak_orlicz(F / v, BRho(cfg.rho), mu).value ** (1.0 / cfg.r)
    rows.append(at_most(name, "duality-chain-ratio", lhs / rhs, 1.0 + ROUNDING))
    rows.append(reported(name, "K0", cfg.K0))
    return rows


# -- Sawyer -------------------------------------------------------------------


def _sawyer_entry(ctx: Context, name: str) -> list:
    f = ctx.functions[name]
    rows = []
    for pname in SAWYER_PAIRS:
        u, v = ctx.corpus.pair(pname)
        rows.append(finite(f"{name}|{pname}", "sawyer-constant", X.verify_sawyer(u, v, f)))
    return rows


# -- endpoint extrapolation ---------------------------------------------------


def _endpoint_prepare(ctx: Context) -> None:
    b = make_log_abs(ctx.grid)
    families = {"hilbert": {}, "commutator": {}}
    for name, f0 in ctx.functions.items():
        families["hilbert"][name] = (abs(hilbert(f0)), hl_maximal(f0))
        families["commutator"][name] = (abs(commutator(b, f0)), m_llogl(f0))
    hip = {}
    scale = {}
    for fam, pairs in families.items():
        c = 0.0
        for w in HIP_WEIGHTS:
            for p in HIP_PS:
                cw = X.hip_constant(list(pairs.values()), ctx.corpus.weight(w), p)
                hip[(fam, w, p)] = cw
                c = max(c, cw ** (1.0 / p))
        scale[fam] = c
    ctx.shared.update(families=families, hip=hip, scale=scale)


def _endpoint_entry(ctx: Context, name: str) -> list:
    s = ctx.shared
    rows = []
    for fam in sorted(s["families"]):
        f, g = s["families"][fam][name]
        g = g * s["scale"][fam]
        for pname in PAIR_NAMES:
            u, v = ctx.corpus.pair(pname)
            tag = f"{name}|{fam}|{pname}"
            try:
                ratio = X.verify_endpoint_extrapolation((f, g), u, v, 1.0)
            except X.CounterexampleCandidate:
                rows.append(row(tag, "weak-B-ratio", math.inf, None, False, counterexample=True))
                continue
            rows.append(finite(tag, "weak-B-ratio", ratio))
    return rows


def _hip_rows(ctx: Context) -> list:
    out = []
    for (fam, w, p), cw in sorted(ctx.shared["hip"].items()):
        out.append(finite(f"hip|{fam}|{w}|p={p:g}", "hip-constant", cw))
    for fam, c in sorted(ctx.shared["scale"].items()):
        out.append(reported(f"hip|{fam}", "comparison-scale", c))
    return out


# -- commutator corollary -----------------------------------------------------


COROLLARY_PAIRS = ("unit|unit", "pow-0.5|pow-0.5")


def _corollary_entry(ctx: Context, name: str) -> list:
    f = ctx.functions[name]
    b = make_log_abs(ctx.grid)
    eps = COROLLARY_EPS if ctx.extrap is None else ctx.extrap.eps
    rows = []
    for pname in COROLLARY_PAIRS:
        u, v = ctx.corpus.pair(pname)
        tag = f"{name}|{pname}"
        rows.append(finite(tag, "corollary-constant", X.verify_commutator_corollary(b, f, u, v, eps)))
        rows.append(reported(tag, "mllogl-phi-constant", X.mllogl_phi_ratio(f, u, v)))
    return rows


# -- weight constants ---------------------------------------------------------


def _weight_entries(ctx: Context) -> list:
    return sorted(ctx.corpus.weights)


def _weight_entry(ctx: Context, name: str) -> list:
    w = ctx.corpus.weight(name)
    rows = []
    if name in A1_WEIGHTS:
        rows.append(finite(name, "A1", a1_constant(w)))
    for p in AP_EXPONENTS:
        # |x|^a is in A_p iff -1 < a < p - 1
        if name == "pow+0.5" and p <= 1.5:
            continue
        rows.append(finite(name, f"A{p:g}", ap_constant(w, p)))
    return rows


SUITES: dict[str, Suite] = {
    s.name: s
    for s in (
        Suite("rescaling", "weak Orlicz norm of f versus the r-th power of the A_r norm of |f|^{1/r}",
              "rescaling lemma", _rescaling_entry, corpus_entries),
        Suite("rewrite", "modular level-set bound versus weak-norm bound for the maximal operator, both directions",
              "modular-norm rewrite lemma", _rewrite_entry, _rewrite_entries, _rewrite_prepare),
        Suite("assoc-duality", "Hoelder pairing bound and associated-norm comparison for A_r(t) = Phi_1(t^2)",
              "associated space lemma", _assoc_entry, corpus_entries, _assoc_prepare),
        Suite("interpolation-kappa", "scaled kappa integral for Psi_{r'} across a sweep of r'",
              "interpolation condition", _kappa_entry, _kappa_entries),
        Suite("rdf-properties", "majorant, norm doubling, S-eigen bound and A1 control of the Rubio de Francia series",
              "Rubio de Francia construction", _rdf_entry, corpus_entries, _rdf_prepare),
        Suite("sawyer", "mixed weak-type constant of M(fv)/v against uv",
              "Sawyer mixed weak-type inequality", _sawyer_entry, corpus_entries, refinement_tol=0.25),
        Suite("endpoint-extrapolation", "weak B_rho ratio for Hilbert/maximal and commutator/LlogL-maximal pairs",
              "endpoint mixed weak-type extrapolation", _endpoint_entry, corpus_entries, _endpoint_prepare,
              refinement_tol=0.25),
        Suite("commutator-corollary", "Phi_{1+1/eps} level-set constant for [b, H] with b = log|x|",
              "commutator corollary", _corollary_entry, corpus_entries, refinement_tol=0.25),
        Suite("weight-constants", "discrete A_1 and A_p constants of the power weights",
              "Muckenhoupt constants", _weight_entry, _weight_entries, refinement_tol=0.25),
    )
}

# rows not tied to a single entry, emitted once per grid size
SUITE_EXTRAS: dict[str, Callable[[Context], list]] = {"endpoint-extrapolation": _hip_rows}


def list_suites() -> list[dict]:
    return [SUITES[k].describe() for k in SUITES]


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; registered: {sorted(SUITES)}") from None


def make_context(
    suite: Suite,
    grid: Grid1D,
    names: Optional[list],
    growth: Optional[GrowthFunction],
    extrap_cfg: Optional[X.ExtrapolationConfig],
    seed: int,
) -> tuple[Context, list]:
    C = corpus(grid)
    ctx = Context(grid, C, {}, growth, extrap_cfg, seed)
    default = suite.default_entries(ctx)
    entries = list(names) if names else default
    if names and suite.default_entries not in (corpus_entries, _rewrite_entries):
        unknown = [e for e in entries if e not in default]
        if unknown:
            raise KeyError(f"unknown entries {unknown} for suite {suite.name!r}; known: {default}")
    if suite.default_entries is corpus_entries or suite.default_entries is _rewrite_entries:
        ctx.functions = resolve_functions(grid, entries, seed)
    if suite.prepare is not None:
        suite.prepare(ctx)
    return ctx, entries


def refinement_rows(suite: Suite, rows: list) -> list:
    """Compare each constant with its value at half the grid size."""
    if suite.refinement_tol is None:
        return []
    table = {}
    for r in rows:
        if r.get("reported_only"):
            continue
        table[(r["entry"], r["quantity"], r["n"])] = r["constant"]
    out = []
    for (entry, quantity, n), c in sorted(table.items()):
        prev = table.get((entry, quantity, n // 2)) if n % 2 == 0 else None
        if prev is None:
            continue
        drift = abs(c / prev - 1.0) if prev and math.isfinite(prev) and math.isfinite(c) else math.inf
        r = at_most(entry, quantity + "-refinement-drift", drift, suite.refinement_tol)
        r["n"] = n
        out.append(r)
    return out
