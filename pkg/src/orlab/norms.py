"""Luxemburg, weak Orlicz and Orlicz-Lorentz norms of step data.

All norms act on cell-valued functions against a :class:`WeightedMeasure`;
every operation returns 0 for the zero function.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import DiscreteFunction, WeightedMeasure
from .quadrature import DEFAULT_RTOL as QUAD_RTOL
from .quadrature import QuadratureError, adaptive_gl, integrate_to_infinity
from .rearrange import rearrangement
from .young import GrowthFunction, Power, has_lower_type_above_one

BISECTION_RTOL = 1e-9
MAX_ITER = 200
# log(s) floor for the s -> 0 tail; keeps 1/s inside the inversion bracket
LOG_S_FLOOR = -650.0


@dataclass(frozen=True)
class NormResult:
    value: float
    method: str
    tolerance: float

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self) -> dict:
        return {"value": self.value, "method": self.method, "tolerance": self.tolerance}


def modular(f: DiscreteFunction, A: GrowthFunction, mu: WeightedMeasure, lam: float) -> float:
    """sum_i A(|f_i| / lam) w_i h."""
    return float(np.dot(A.eval(np.abs(f.values) / lam), mu.masses))


def luxemburg(f: DiscreteFunction, A: GrowthFunction, mu: WeightedMeasure) -> NormResult:
    a = np.abs(f.values)
    nz = a > 0
    if not nz.any():
        return NormResult(0.0, "bisection", BISECTION_RTOL)
    vals, m = a[nz], mu.masses[nz]

    def mod(lam):
        return float(np.dot(A.eval(vals / lam), m))

    # modular(lo) >= 1 >= modular(hi)
    lo = float(np.max(vals / A.inverse(1.0 / m)))
    hi = float(vals.max() / A.inverse(1.0 / m.sum()))
    # both ends are exact in real arithmetic; nudge hi past rounding
    for _ in range(8):
        if mod(hi) <= 1.0:
            break
        hi *= 1.0 + 1e-12
    else:
        raise RuntimeError("Luxemburg bracket failed")
    for _ in range(MAX_ITER):
        mid = float(np.sqrt(lo * hi)) if hi > 2 * lo else 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if mod(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return NormResult(hi, "bisection", BISECTION_RTOL)


def _distinct_levels(f: DiscreteFunction, w: WeightedMeasure) -> tuple[np.ndarray, np.ndarray]:
    """Distinct nonzero |f| values (descending) and w({|f| >= v}) for each."""
    a = np.abs(f.values)
    levels, inv = np.unique(a, return_inverse=True)
    mass = np.bincount(inv, weights=w.masses, minlength=len(levels))
    keep = levels > 0
    levels, mass = levels[keep][::-1], mass[keep][::-1]
    return levels, np.cumsum(mass)


def weak_orlicz(f: DiscreteFunction, A: GrowthFunction, w: WeightedMeasure) -> NormResult:
    """Weak Orlicz quasinorm, exact for step data.

    max over distinct values v of |f| of v / A^{-1}(1 / w({|f| >= v})).
    """
    levels, cum = _distinct_levels(f, w)
    if levels.size == 0:
        return NormResult(0.0, "exact_value_max", 1e-15)
    return NormResult(float(np.max(levels / A.inverse(1.0 / cum))), "exact_value_max", 1e-15)


def weak_orlicz_rearr(f: DiscreteFunction, A: GrowthFunction, mu: WeightedMeasure) -> NormResult:
    """sup_s f*(s) / A^{-1}(1/s), attained at the right end of each step."""
    if not has_lower_type_above_one(A):
        warnings.warn(f"{A!r} is not of lower type > 1; the sup formula is only a rough proxy", stacklevel=2)
    R = rearrangement(f, mu)
    if len(R) == 0:
        return NormResult(0.0, "rearrangement_sup", 1e-15)
    return NormResult(float(np.max(R.values / A.inverse(1.0 / R.cumulative))), "rearrangement_sup", 1e-15)


# -- the L^{B,1} weight --------------------------------------------------------


def _log_weight(B: GrowthFunction):
    """phi(x) = 1 / B^{-1}(e^{-x}); its integral over x = log s is the L^{B,1} weight."""

    def phi(x):
        return 1.0 / B.inverse(np.exp(-x))

    return phi


def lorentz_weight_cumulative(B: GrowthFunction, s: np.ndarray, rtol: float = QUAD_RTOL) -> np.ndarray:
    """W(s) = int_0^s dt / (t B^{-1}(1/t)) at increasing points s > 0."""
    s = np.asarray(s, dtype=float)
    if isinstance(B, Power):
        return B.p * s ** (1.0 / B.p)
    x = np.log(s)
    phi = _log_weight(B)
    head, _ = integrate_to_infinity(phi, float(x[0]), -1.0, LOG_S_FLOOR, rtol)
    steps = adaptive_gl(phi, x[:-1], x[1:], rtol) if len(x) > 1 else np.zeros(0)
    return head + np.concatenate([[0.0], np.cumsum(steps)])


def orlicz_lorentz_B1(g: DiscreteFunction, B: GrowthFunction, mu: WeightedMeasure) -> NormResult:
    """int_0^inf g*(s) / B^{-1}(1/s) ds/s, summed step by step.

    Written as sum_k (v_k - v_{k+1}) W(c_k) with W the cumulative weight and
    c_k the step ends, so every term is non-negative.
    """
    R = rearrangement(g, mu)
    exact = isinstance(B, Power)
    method, tol = ("quadrature", 1e-15) if exact else ("quadrature", 1e-8)
    if len(R) == 0:
        return NormResult(0.0, method, tol)
    W = lorentz_weight_cumulative(B, R.cumulative)
    drops = R.values - np.append(R.values[1:], 0.0)
    return NormResult(float(np.dot(drops, W)), method, tol)


def lorentz_p1(f: DiscreteFunction, p: float, mu: WeightedMeasure) -> NormResult:
    return orlicz_lorentz_B1(f, Power(p), mu)


def pairing(f: DiscreteFunction, g: DiscreteFunction, mu: WeightedMeasure) -> float:
    return float(np.dot(f.values * g.values, mu.masses))


def extremal_candidate(g: DiscreteFunction, A: GrowthFunction, mu: WeightedMeasure) -> DiscreteFunction:
    """f with f* a step version of A^{-1}(1/s), aligned with |g| descending and sign(g)."""
    order = np.argsort(-np.abs(g.values), kind="stable")
    cum = np.cumsum(mu.masses[order])
    vals = np.empty(g.grid.n)
    vals[order] = A.inverse(1.0 / cum)
    sign = np.where(g.values < 0, -1.0, 1.0)
    return g.with_values(sign * vals)


def associated_norm(
    g: DiscreteFunction,
    A: GrowthFunction,
    mu: WeightedMeasure,
    candidate_budget: int = 32,
    seed: int = 0,
) -> NormResult:
    """Lower bound for sup |<f, g>_mu| over the unit sphere of the weak Orlicz norm.

    Candidates are normalised with :func:`weak_orlicz_rearr`.
    """
    if not has_lower_type_above_one(A):
        warnings.warn(f"{A!r} is not of lower type > 1", stacklevel=2)
    if not np.any(g.values):
        return NormResult(0.0, "candidate_lower_bound", 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        base = extremal_candidate(g, A, mu)
        best = abs(pairing(base, g, mu)) / weak_orlicz_rearr(base, A, mu).value
        rng = np.random.default_rng(seed)
        for _ in range(candidate_budget):
            perm = base.values[rng.permutation(g.grid.n)] * rng.choice([-1.0, 1.0], size=g.grid.n)
            cand = base.with_values(perm)
            best = max(best, abs(pairing(cand, g, mu)) / weak_orlicz_rearr(cand, A, mu).value)
    return NormResult(best, "candidate_lower_bound", 0.0)
