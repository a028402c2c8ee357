"""Exponent selection, the kappa condition, Rubio de Francia iteration and
the mixed weak-type verification routines."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .grid import DiscreteFunction, Grid1D, Weight, WeightedMeasure, a1_constant, ap_constant
from .intervals import IntervalFamily
from .norms import weak_orlicz
from .ops import sawyer_S
from .quadrature import QuadratureError, integrate_to_infinity
from .young import BRho, DomainError, GrowthFunction, PhiRho, Power, PsiConjugate

EPS_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))
STABILITY_TOL = 0.25
FALLBACK_EPS0 = 0.05
DEFAULT_DEPTH = 40
KAPPA_S_GRID = tuple(np.logspace(-8, 8, 33))
# largest log t with 1/t still inside the inversion bracket
KAPPA_X_LIMIT = 650.0

WeightFactory = Callable[[Grid1D], Weight]


class ConditionFailed(RuntimeError):
    """The kappa integral diverges or is unbounded on the s-grid."""


class DegenerateInput(ValueError):
    pass


class CounterexampleCandidate(RuntimeError):
    """A weak-norm ratio with zero denominator and nonzero numerator."""


def p0_select(t: float, eps0: float) -> float:
    if not t > 1:
        raise DomainError("t must exceed 1")
    if not 0 < eps0 < 1:
        raise DomainError("eps0 must lie in (0, 1)")
    return 2.0 * (t - 1.0) / eps0 + 1.0


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-300)


@dataclass(frozen=True)
class ExtrapolationConfig:
    rho: float
    t: float
    eps0: float
    eps: float
    p0: float
    r: float
    r_prime: float
    K0: float
    C0: float
    C1: float
    rdf_depth: int = DEFAULT_DEPTH
    seed: int = 0

    def __post_init__(self):
        problems = []
        if not self.rho > 0:
            problems.append("rho > 0")
        if not self.t > 1:
            problems.append("t > 1")
        if not 0 < self.eps0 < 1:
            problems.append("eps0 in (0,1)")
        if not self.C0 > 0 or not self.C1 > 0:
            problems.append("C0, C1 > 0")
        if self.rdf_depth < 1:
            problems.append("rdf_depth >= 1")
        if not problems:
            if not _close(self.p0, p0_select(self.t, self.eps0)):
                problems.append("p0 = 2(t-1)/eps0 + 1")
            if not 0 < self.eps < min(self.eps0, 1 / (2 * self.p0)):
                problems.append("eps in (0, min(eps0, 1/(2 p0)))")
            if not _close(self.r, 1 / (1 - self.eps)) or not _close(self.r_prime, self.r / (self.r - 1)):
                problems.append("r = (1/eps)' and r' = r/(r-1)")
            if not self.r_prime > 2 * self.p0:
                problems.append("r' > 2 p0")
            if not _close(self.K0, 8 * self.p0 * (self.C0 + self.C1)):
                problems.append("K0 = 8 p0 (C0 + C1)")
        if problems:
            raise ValueError("invalid ExtrapolationConfig: " + "; ".join(problems))

    @classmethod
    def build(
        cls,
        rho: float,
        t: float,
        eps0: float,
        C0: float,
        C1: float,
        eps_tilde: Optional[float] = None,
        rdf_depth: int = DEFAULT_DEPTH,
        seed: int = 0,
    ) -> "ExtrapolationConfig":
        """Derive p0, eps, r, r', K0 from the measured inputs.

        eps = min(0.9 eps_tilde, 1/(4 p0)); eps_tilde defaults to eps0.
        """
        p0 = p0_select(t, eps0)
        eps_tilde = eps0 if eps_tilde is None else eps_tilde
        eps = min(0.9 * eps_tilde, 0.9 * eps0, 1.0 / (4.0 * p0))
        r = 1.0 / (1.0 - eps)
        return cls(
            rho=rho, t=t, eps0=eps0, eps=eps, p0=p0, r=r, r_prime=r / (r - 1.0),
            K0=8.0 * p0 * (C0 + C1), C0=C0, C1=C1, rdf_depth=rdf_depth, seed=seed,
        )

    @property
    def psi(self) -> PsiConjugate:
        return PsiConjugate(self.rho, self.r)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "ExtrapolationConfig":
        derived = {"eps", "p0", "r", "r_prime", "K0"}
        if derived <= obj.keys():
            return cls(**obj)
        keep = {k: obj[k] for k in ("rho", "t", "eps0", "C0", "C1", "eps_tilde", "rdf_depth", "seed") if k in obj}
        return cls.build(**keep)


@dataclass(frozen=True)
class InterpolationReport:
    kappa_measured: float
    bound_constant: float
    operator_norm_bound: float

    def to_json(self) -> dict:
        return asdict(self)


# -- epsilon_0 surrogate -------------------------------------------------------


def _weight_constant(w: Weight, p: float) -> float:
    return a1_constant(w) if p == 1 else ap_constant(w, p)


def _stable(c_lo: float, c_hi: float) -> bool:
    return math.isfinite(c_lo) and math.isfinite(c_hi) and abs(c_hi / c_lo - 1.0) <= STABILITY_TOL


def epsilon0_probe(
    u: WeightFactory,
    p: float,
    v_samples: Sequence[WeightFactory],
    grid: Grid1D,
    eps_grid: Sequence[float] = EPS_GRID,
) -> Optional[float]:
    """Largest eps on the grid with [u v^eps]_{A_p} stable from n to 2n for every sample.

    Returns None when nothing passes.  Weights are given as factories so the
    probe can rebuild them on the refined grid.
    """
    if p < 1:
        raise DomainError("p must be >= 1")
    fine = grid.refined(2)
    if not _stable(a1_constant(u(grid)), a1_constant(u(fine))):
        raise ConditionFailed("[u]_A1 is not refinement-stable")
    if not v_samples:
        return max(eps_grid)
    pairs = [(u(g), [v(g) for v in v_samples]) for g in (grid, fine)]
    for eps in sorted(eps_grid, reverse=True):
        ok = True
        for k in range(len(v_samples)):
            c = [_weight_constant(Weight.of(uu * vs[k] ** eps), p) for uu, vs in pairs]
            if not _stable(*c):
                ok = False
                break
        if ok:
            return eps
    return None


def measure_C0(
    u: Weight, v: Weight, functions: Sequence[DiscreteFunction], p0: float, family: Optional[IntervalFamily] = None
) -> float:
    """max over f of ||S f||_{L^p0(uv)} / ||f||_{L^p0(uv)}."""
    m = WeightedMeasure(Weight.of(u * v)).masses
    best = 0.0
    for f in functions:
        den = float(np.dot(np.abs(f.values) ** p0, m))
        if den == 0:
            continue
        num = float(np.dot(np.abs(sawyer_S(f, u, family).values) ** p0, m))
        best = max(best, (num / den) ** (1.0 / p0))
    return best


# -- kappa condition -----------------------------------------------------------


def _kappa_phi(A: GrowthFunction, p0: float):
    def phi(x):
        return np.exp(-x / p0) / A.inverse(np.exp(-x))

    return phi


def kappa_integral(A: GrowthFunction, p0: float, s: float) -> float:
    """[int_s^inf t^{-1/p0} / A^{-1}(1/t) dt/t] / [s^{-1/p0} / A^{-1}(1/s)].

    Integrated in x = log t; raises ConditionFailed if the integrand does not decay.
    """
    if not p0 > 1:
        raise DomainError("p0 must exceed 1")
    if not s > 0:
        raise DomainError("s must be positive")
    phi = _kappa_phi(A, p0)
    x0 = math.log(s)
    try:
        value, _ = integrate_to_infinity(phi, x0, 1.0, KAPPA_X_LIMIT)
    except QuadratureError as exc:
        raise ConditionFailed(f"kappa integral diverges for {A!r}, p0={p0}: {exc}") from exc
    return value / float(phi(np.array([x0]))[0])


def kappa_sup(A: GrowthFunction, p0: float, s_grid: Sequence[float] = KAPPA_S_GRID) -> float:
    return max(kappa_integral(A, p0, float(s)) for s in s_grid)


def interpolation_bound(
    A: GrowthFunction,
    p0: float,
    C0: float,
    C1: float,
    s_grid: Sequence[float] = KAPPA_S_GRID,
    c_rho: Optional[float] = None,
) -> InterpolationReport:
    """kappa over the s-grid and the resulting bound 2 (C1 + C0 kappa).

    For a PsiConjugate A, ``bound_constant`` is c_rho / (1/p0 - 1/r'); with
    c_rho omitted it is taken as the measured value, so the bound equals kappa.
    """
    kappa = kappa_sup(A, p0, s_grid)
    if not math.isfinite(kappa):
        raise ConditionFailed("kappa is unbounded on the s-grid")
    bound = kappa
    if isinstance(A, PsiConjugate) and c_rho is not None:
        bound = c_rho / (1.0 / p0 - 1.0 / A.r_prime)
    op = 2.0 * C1 if C0 == 0 else 2.0 * (C1 + C0 * kappa)
    return InterpolationReport(kappa, bound, op)


# -- Rubio de Francia ----------------------------------------------------------


def rubio_de_francia(
    h: DiscreteFunction, u: Weight, K0: float, depth: int = DEFAULT_DEPTH, family: Optional[IntervalFamily] = None
) -> DiscreteFunction:
    """sum_{k=0}^{depth} S^k h / (2 K0)^k with S f = M(f u)/u."""
    if np.any(h.values < 0):
        raise DomainError("h must be non-negative")
    if depth < 1:
        raise DomainError("depth must be >= 1")
    if not K0 > 0:
        raise DomainError("K0 must be positive")
    total = h.values.copy()
    term = h
    scale = 1.0 / (2.0 * K0)
    for k in range(1, depth + 1):
        term = sawyer_S(term, u, family)
        total += term.values * scale**k
    return h.with_values(total)


# -- level-set ratios ----------------------------------------------------------


def level_ratio_sup(F: DiscreteFunction, mu: WeightedMeasure, f: DiscreteFunction, A: GrowthFunction) -> float:
    """sup_{t>0} mu({|F| > t}) / int A(|f|/t) dmu, exact for step data.

    The numerator is a right-continuous step in t and the denominator is
    continuous and decreasing, so the sup is the limit from the left at a jump
    value v_k of |F|: mu({|F| >= v_k}) / int A(|f|/v_k) dmu.
    """
    a = np.abs(F.values)
    levels, inv = np.unique(a, return_inverse=True)
    mass = np.bincount(inv, weights=mu.masses, minlength=len(levels))
    keep = levels > 0
    levels, cum = levels[keep][::-1], np.cumsum(mass[keep][::-1])
    if levels.size == 0:
        return 0.0
    fv = np.abs(f.values)
    nz = fv > 0
    if not nz.any():
        raise DegenerateInput("denominator vanishes while the numerator does not")
    fv, m = fv[nz], mu.masses[nz]
    den = np.empty(len(levels))
    for lo in range(0, len(levels), 256):
        chunk = levels[lo : lo + 256]
        den[lo : lo + 256] = A.eval(fv[None, :] / chunk[:, None]) @ m
    return float(np.max(cum / den))


def level_ratio_on_grid(
    F: DiscreteFunction, mu: WeightedMeasure, f: DiscreteFunction, A: GrowthFunction, t_grid: Sequence[float]
) -> float:
    a = np.abs(F.values)
    fv = np.abs(f.values)
    best = 0.0
    for t in t_grid:
        num = float(mu.masses[a > t].sum())
        if num == 0:
            continue
        den = float(A.eval(fv / t) @ mu.masses)
        if den == 0:
            raise DegenerateInput("denominator vanishes while the numerator does not")
        best = max(best, num / den)
    return best


def _product_measure(u: Weight, v: Weight) -> WeightedMeasure:
    return WeightedMeasure(Weight.of(u * v))


def sawyer_output(u: Weight, v: Weight, f: DiscreteFunction, family: Optional[IntervalFamily] = None) -> DiscreteFunction:
    """M(f v) / v."""
    from .ops import hl_maximal

    return hl_maximal(f * v, family) / v


def verify_sawyer(
    u: Weight,
    v: Weight,
    f: DiscreteFunction,
    t_grid: Optional[Sequence[float]] = None,
    family: Optional[IntervalFamily] = None,
) -> float:
    """sup_t t uv({M(fv)/v > t}) / int |f| uv.

    Without ``t_grid`` the sup is taken exactly over the jump values.
    """
    F = sawyer_output(u, v, f, family)
    mu = _product_measure(u, v)
    if t_grid is None:
        return level_ratio_sup(F, mu, f, Power(1.0))
    return level_ratio_on_grid(F, mu, f, Power(1.0), t_grid)


def level_curve(F: DiscreteFunction, mu: WeightedMeasure) -> tuple[np.ndarray, np.ndarray]:
    """Jump values t_k of |F| and t_k mu({|F| >= t_k}), for plotting."""
    a = np.abs(F.values)
    levels, inv = np.unique(a, return_inverse=True)
    mass = np.bincount(inv, weights=mu.masses, minlength=len(levels))
    keep = levels > 0
    levels, cum = levels[keep][::-1], np.cumsum(mass[keep][::-1])
    return levels, levels * cum


def verify_endpoint_extrapolation(
    pair: tuple[DiscreteFunction, DiscreteFunction], u: Weight, v: Weight, rho: float
) -> float:
    """||f/v||_{L^{B_rho,inf}(uv)} / ||g/v||_{L^{B_rho,inf}(uv)}."""
    f, g = pair
    mu = _product_measure(u, v)
    B = BRho(rho)
    num = weak_orlicz(f / v, B, mu).value
    den = weak_orlicz(g / v, B, mu).value
    if den == 0:
        if num == 0:
            return 0.0
        raise CounterexampleCandidate("g vanishes where f does not")
    return num / den


def hip_constant(
    pairs: Sequence[tuple[DiscreteFunction, DiscreteFunction]], w: Weight, p: float
) -> float:
    """c_w = max over pairs of int f^p w / int g^p w."""
    m = WeightedMeasure(w).masses
    best = 0.0
    for f, g in pairs:
        den = float(np.abs(g.values) ** p @ m)
        num = float(np.abs(f.values) ** p @ m)
        if den == 0:
            if num > 0:
                raise CounterexampleCandidate("hypothesis pair with vanishing g")
            continue
        best = max(best, num / den)
    return best


def verify_commutator_corollary(
    b: DiscreteFunction,
    f: DiscreteFunction,
    u: Weight,
    v: Weight,
    eps: float,
    t_grid: Optional[Sequence[float]] = None,
) -> float:
    """sup_t uv({|[b,H](fv)|/v > t}) / int Phi_{1+1/eps}(|f|/t) uv."""
    from .ops import commutator

    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    F = commutator(b, f * v) / v
    mu = _product_measure(u, v)
    A = PhiRho(1.0 + 1.0 / eps)
    if not np.any(f.values):
        return 0.0
    if t_grid is None:
        return level_ratio_sup(F, mu, f, A)
    return level_ratio_on_grid(F, mu, f, A, t_grid)


def mllogl_phi_ratio(f: DiscreteFunction, u: Weight, v: Weight, rho: float = 1.0) -> float:
    """sup_t uv({M_LlogL(fv)/v > t}) / int Phi_rho(|f|/t) uv; reported, never asserted."""
    from .ops import m_llogl

    F = m_llogl(f * v) / v
    if not np.any(f.values):
        return 0.0
    return level_ratio_sup(F, _product_measure(u, v), f, PhiRho(rho))
