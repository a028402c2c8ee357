"""Growth functions A: [0, inf) -> [0, inf) and their numeric inverses.

Every growth function here is strictly increasing with A(0) = 0.  The builtin
kinds evaluate by closed formula; inverses are closed form where one exists
(power, rescaled, the conjugate partners) and otherwise come from a vectorised
monotone bisection in :func:`solve_increasing`.

    >>> PhiRho(1.0).eval(0.0)
    0.0
    >>> Power(2.0).inverse(9.0)
    3.0
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable

import numpy as np

E = math.e

# Bracket for numeric inversion; wide enough for every builtin kind.
BRACKET_LO = 1e-300
BRACKET_HI = 1e300
MAX_BISECTION_ITER = 200

PROBE_LO = 1e-8
PROBE_HI = 1e8
PROBE_POINTS = 200


class DomainError(ValueError):
    """Argument outside [0, inf) or not finite."""


class ConvergenceError(RuntimeError):
    """Numeric inversion failed to bracket or converge."""


def _checked(x: Any, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if np.any(arr < 0):
        raise DomainError(f"{name} must be non-negative")
    return arr


def _like(out: np.ndarray, template: Any):
    if np.ndim(template) == 0:
        return float(out)
    return out


def solve_increasing(
    fn: Callable[[np.ndarray], np.ndarray],
    y: Any,
    lo: float = BRACKET_LO,
    hi: float = BRACKET_HI,
    max_iter: int = MAX_BISECTION_ITER,
) -> np.ndarray:
    """Solve fn(t) = y elementwise for a strictly increasing ``fn``.

    Bisection runs on the geometric mean while the bracket spans more than a
    factor two, then on the arithmetic mean down to adjacent floats.
    y = 0 maps to 0.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.zeros_like(y)
    pos = y > 0
    if not pos.any():
        return out
    yp = y[pos]
    lo_a = np.full_like(yp, lo)
    hi_a = np.full_like(yp, hi)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if np.any(fn(hi_a) < yp):
            raise ConvergenceError(f"value beyond bracket: max y={yp.max():g}")
        below = fn(lo_a) >= yp
        for _ in range(max_iter):
            geo = hi_a > 2.0 * lo_a
            mid = np.where(geo, np.exp(0.5 * (np.log(lo_a) + np.log(hi_a))), 0.5 * (lo_a + hi_a))
            active = (mid > lo_a) & (mid < hi_a) & ~below
            if not active.any():
                break
            fm = fn(mid)
            up = fm < yp
            lo_a = np.where(active & up, mid, lo_a)
            hi_a = np.where(active & ~up, mid, hi_a)
        else:
            raise ConvergenceError("bisection did not converge")
        f_lo = fn(lo_a)
        f_hi = fn(hi_a)
    pick_lo = np.abs(f_lo - yp) < np.abs(f_hi - yp)
    res = np.where(pick_lo, lo_a, hi_a)
    res = np.where(below, lo_a, res)
    out[pos] = res
    return out


class GrowthFunction:
    """Base class; subclasses are frozen dataclasses and hence hashable."""

    kind = "abstract"

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _inverse(self, y: np.ndarray) -> np.ndarray:
        return solve_increasing(self._eval, y)

    def eval(self, t):
        arr = _checked(t, "t")
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            out = np.asarray(self._eval(np.atleast_1d(arr)), dtype=float)
        return _like(out.reshape(arr.shape), t)

    __call__ = eval

    def inverse(self, y):
        arr = _checked(y, "y")
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            out = np.asarray(self._inverse(np.atleast_1d(arr)), dtype=float)
        return _like(out.reshape(arr.shape), y)

    def params(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    @staticmethod
    def from_json(obj: dict) -> "GrowthFunction":
        try:
            kind = obj["kind"]
            params = dict(obj.get("params", {}))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed growth function JSON: {obj!r}") from exc
        if kind not in _KINDS:
            raise ValueError(f"unknown growth kind {kind!r}; expected one of {sorted(_KINDS)}")
        cls = _KINDS[kind]
        if "base" in params:
            params["base"] = GrowthFunction.from_json(params["base"])
        if kind == "custom":
            params = {"xs": tuple(params["xs"]), "ys": tuple(params["ys"])}
        return cls(**params)


@dataclass(frozen=True)
class Power(GrowthFunction):
    p: float
    kind = "power"

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError("power exponent must be positive")

    def _eval(self, t):
        return t**self.p

    def _inverse(self, y):
        return y ** (1.0 / self.p)

    def params(self):
        return {"p": self.p}


@dataclass(frozen=True)
class PhiRho(GrowthFunction):
    """t log(e + t)^rho."""

    rho: float
    kind = "phi_rho"

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")

    def _eval(self, t):
        return t * np.log(E + t) ** self.rho

    def _inverse(self, y):
        return _phi_rho_inverse(y, self.rho)

    def params(self):
        return {"rho": self.rho}


def _phi_rho_inverse(y: np.ndarray, rho: float) -> np.ndarray:
    """Newton on the convex t log(e+t)^rho - y, started at t = y >= root.

    From the right of the root of a convex increasing function the iterates
    decrease monotonically, so the loop stops once they stall.
    """
    t = np.array(y, dtype=float)
    for _ in range(MAX_BISECTION_ITER):
        L = np.log(E + t)
        step = (t * L**rho - y) / (L**rho + rho * t * L ** (rho - 1.0) / (E + t))
        new = np.maximum(t - step, 0.0)
        if not np.any(new < t):
            return t
        t = np.minimum(new, t)
    raise ConvergenceError("Newton iteration for Phi_rho^{-1} did not settle")


@dataclass(frozen=True)
class BRho(GrowthFunction):
    """t / log(e + 1/t)^rho, i.e. 1 / PhiRho(1/t)."""

    rho: float
    kind = "b_rho"

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")

    def _eval(self, t):
        safe = np.where(t > 0, t, 1.0)
        return np.where(t > 0, safe / np.log(E + 1.0 / safe) ** self.rho, 0.0)

    def _inverse(self, y):
        pos = y > 0
        with np.errstate(divide="ignore"):
            recip = np.where(pos, 1.0 / np.where(pos, y, 1.0), 1.0)
        return np.where(pos, 1.0 / _phi_rho_inverse(recip, self.rho), 0.0)

    def params(self):
        return {"rho": self.rho}


@dataclass(frozen=True)
class Rescaled(GrowthFunction):
    """t -> base(t**r); the inverse is base.inverse(y)**(1/r)."""

    base: GrowthFunction
    r: float
    kind = "rescaled"

    def __post_init__(self):
        if not self.r > 1:
            raise ValueError("rescaling exponent must exceed 1")

    def _eval(self, t):
        return self.base._eval(t**self.r)

    def _inverse(self, y):
        return self.base._inverse(y) ** (1.0 / self.r)

    def params(self):
        return {"base": self.base.to_json(), "r": self.r}


@dataclass(frozen=True)
class PsiConjugate(GrowthFunction):
    """Partner of Rescaled(BRho(rho), r) with closed-form inverse.

    inverse(y) = y**(1/r') / log(e + 1/y)**(rho/r), r' = r/(r-1); the direct
    function is obtained by numeric inversion.
    """

    rho: float
    r: float
    kind = "psi_conjugate"

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if not self.r > 1:
            raise ValueError("r must exceed 1")

    @classmethod
    def from_conjugate_exponent(cls, rho: float, r_prime: float) -> "PsiConjugate":
        if not r_prime > 1:
            raise ValueError("r' must exceed 1")
        return cls(rho, r_prime / (r_prime - 1.0))

    @property
    def r_prime(self) -> float:
        return self.r / (self.r - 1.0)

    def _inverse(self, y):
        safe = np.where(y > 0, y, 1.0)
        val = safe ** (1.0 / self.r_prime) / np.log(E + 1.0 / safe) ** (self.rho / self.r)
        return np.where(y > 0, val, 0.0)

    def _eval(self, t):
        return solve_increasing(self._inverse, t)

    def params(self):
        return {"rho": self.rho, "r": self.r}


@dataclass(frozen=True)
class Partner(GrowthFunction):
    """Conjugate-type partner B of ``base`` with B^{-1}(y) = y / base^{-1}(y) exactly."""

    base: GrowthFunction
    kind = "partner"

    def _inverse(self, y):
        a_inv = self.base._inverse(y)
        safe = np.where(y > 0, a_inv, 1.0)
        return np.where(y > 0, y / safe, 0.0)

    def _eval(self, t):
        return solve_increasing(self._inverse, t)

    def params(self):
        return {"base": self.base.to_json()}


@dataclass(frozen=True)
class Custom(GrowthFunction):
    """Piecewise-linear growth function through a strictly increasing table.

    The table must start at (0, 0); past the last node the final slope is
    continued.
    """

    xs: tuple
    ys: tuple
    kind = "custom"

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.shape != ys.shape or xs.size < 2:
            raise ValueError("custom table needs matching xs, ys with >= 2 nodes")
        if xs[0] != 0 or ys[0] != 0:
            raise ValueError("custom table must start at (0, 0)")
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) <= 0):
            raise ValueError("custom table must be strictly increasing")

    def _eval(self, t):
        xs = np.asarray(self.xs)
        ys = np.asarray(self.ys)
        slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
        return np.where(t <= xs[-1], np.interp(t, xs, ys), ys[-1] + slope * (t - xs[-1]))

    def _inverse(self, y):
        xs = np.asarray(self.xs)
        ys = np.asarray(self.ys)
        slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
        return np.where(y <= ys[-1], np.interp(y, ys, xs), xs[-1] + (y - ys[-1]) / slope)

    def params(self):
        return {"xs": list(self.xs), "ys": list(self.ys)}


_KINDS: dict[str, type] = {
    cls.kind: cls for cls in (Power, PhiRho, BRho, Rescaled, PsiConjugate, Partner, Custom)
}


def probe_grid(lo: float = PROBE_LO, hi: float = PROBE_HI, points: int = PROBE_POINTS, refine: int = 0):
    """Log-spaced probe points; each refinement level doubles the density."""
    return np.geomspace(lo, hi, points * 2**refine)


def submultiplicativity_constant(A: GrowthFunction, grid=None) -> float:
    """max over grid pairs of A(st) / (A(s) A(t)), floored at 1.

    The floor keeps the result usable as an upper constant: for PhiRho the
    supremum 1 is only approached as s, t -> 0.
    """
    g = probe_grid() if grid is None else np.asarray(grid, dtype=float)
    s, t = np.meshgrid(g, g, indexing="ij")
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = A.eval(s * t) / (A.eval(s) * A.eval(t))
    return max(1.0, float(np.nanmax(ratio)))


@dataclass(frozen=True)
class LowerTypeEstimate:
    p: float
    constant: float
    coarse: float
    stable: bool


def _lower_type_sup(A: GrowthFunction, p: float, decades: float, points: int) -> float:
    s = np.append(np.geomspace(10.0**-decades, 1.0, points, endpoint=False), 1.0)
    t = np.geomspace(10.0**-decades, 10.0**decades, points)
    S, T = np.meshgrid(s, t, indexing="ij")
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        ratio = A.eval(S * T) / (S**p * A.eval(T))
    return float(np.nanmax(ratio))


@lru_cache(maxsize=256)
def lower_type_constant(A: GrowthFunction, p: float, tol: float = 0.05) -> LowerTypeEstimate:
    """Empirical sup of A(st) / (s^p A(t)) over s in (0, 1].

    Two levels are computed; the finer one doubles the point density and
    widens both ranges by four decades.  Growth beyond ``tol`` between the
    levels marks A as not of lower type p.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    coarse = _lower_type_sup(A, p, 8.0, PROBE_POINTS)
    fine = _lower_type_sup(A, p, 12.0, 2 * PROBE_POINTS)
    return LowerTypeEstimate(p, fine, coarse, bool(fine <= coarse * (1 + tol)))


def has_lower_type_above_one(A: GrowthFunction) -> bool:
    return lower_type_constant(A, 1.05).stable


def conjugate_ratio_bounds(A: GrowthFunction, B: GrowthFunction, grid=None) -> tuple[float, float]:
    """(min, max) of A^{-1}(t) B^{-1}(t) / t over the probe grid."""
    g = probe_grid() if grid is None else np.atleast_1d(np.asarray(grid, dtype=float))
    ratio = A.inverse(g) * B.inverse(g) / g
    return float(ratio.min()), float(ratio.max())


def conjugate_defect(A: GrowthFunction, B: GrowthFunction, grid=None) -> float:
    lo, hi = conjugate_ratio_bounds(A, B, grid)
    return max(hi, 1.0 / lo)


def conjugate_identity_defect(rho: float, r: float, grid=None) -> float:
    """Two-sided defect of t = B_r^{-1}(t) Psi_{r'}^{-1}(t) with B_r = Rescaled(BRho(rho), r)."""
    return conjugate_defect(Rescaled(BRho(rho), r), PsiConjugate(rho, r), grid)
