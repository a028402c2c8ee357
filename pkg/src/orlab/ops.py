"""Maximal, Orlicz-maximal, Hilbert, commutator and Sawyer operators on grids."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .grid import DiscreteFunction, Weight
from .intervals import IntervalFamily, default_family, pointwise_max, prefix
from .young import GrowthFunction, PhiRho, Power

# The per-interval Luxemburg average costs O(L) per bisection step, so the
# full O(n^2) family is only affordable on small grids.
ORLICZ_FULL_FAMILY_MAX_N = 256
LUX_RTOL = 1e-12


def _power_means(a: np.ndarray, p: float):
    P = prefix(a if p == 1 else a**p)
    if p == 1:
        return lambda lo, hi: (P[hi] - P[lo]) / (hi - lo)
    return lambda lo, hi: ((P[hi] - P[lo]) / (hi - lo)) ** (1.0 / p)


def hl_maximal(f: DiscreteFunction, family: Optional[IntervalFamily] = None) -> DiscreteFunction:
    """Exact discrete Hardy-Littlewood maximal function over grid-aligned intervals."""
    family = family or default_family(f.grid.n)
    a = np.abs(f.values)
    # singleton averages are |f_i| exactly; prefix differences can round below
    return f.with_values(np.maximum(pointwise_max(family, _power_means(a, 1.0)), a))


def block_luxemburg(X: np.ndarray, lengths: np.ndarray, A: GrowthFunction) -> np.ndarray:
    """Row-wise Luxemburg averages: lam with (1/len) sum A(X/lam) = 1.

    Rows are zero-padded past their length (A(0) = 0).
    """
    rowmax = X.max(axis=1)
    out = np.zeros(len(X))
    nz = rowmax > 0
    if not nz.any():
        return out
    X, L, m = X[nz], lengths[nz].astype(float), rowmax[nz]
    lo = m / A.inverse(L)
    hi = m / A.inverse(np.ones_like(L))
    for _ in range(200):
        active = hi > lo * (1 + LUX_RTOL)
        if not active.any():
            break
        mid = np.where(hi > 2 * lo, np.sqrt(lo * hi), 0.5 * (lo + hi))
        F = A.eval(X / mid[:, None]).sum(axis=1) / L
        above = F > 1.0
        lo = np.where(active & above, mid, lo)
        hi = np.where(active & ~above, mid, hi)
    out[nz] = hi
    return out


def orlicz_family(n: int) -> IntervalFamily:
    return IntervalFamily(n, "all" if n <= ORLICZ_FULL_FAMILY_MAX_N else "dyadic")


def orlicz_maximal(
    f: DiscreteFunction, A: GrowthFunction, family: Optional[IntervalFamily] = None
) -> DiscreteFunction:
    """M_A f(x) = max over intervals I containing x of ||f||_{A,I}.

    The average is the unnormalised Luxemburg average, so a constant c maps
    to c / A^{-1}(1).
    """
    a = np.abs(f.values)
    if isinstance(A, Power):
        # prefix sums make power averages as cheap as plain ones
        family = family or default_family(f.grid.n)
        return f.with_values(np.maximum(pointwise_max(family, _power_means(a, A.p)), a))
    family = family or orlicz_family(f.grid.n)
    n = len(a)

    def block(lo, hi):
        lengths = hi - lo
        width = int(lengths.max())
        idx = lo[:, None] + np.arange(width)[None, :]
        X = np.where(idx < hi[:, None], a[np.minimum(idx, n - 1)], 0.0)
        return block_luxemburg(X, lengths, A)

    return f.with_values(pointwise_max(family, block))


def m_llogl(f: DiscreteFunction, family: Optional[IntervalFamily] = None) -> DiscreteFunction:
    return orlicz_maximal(f, PhiRho(1.0), family)


def hilbert_kernel(n: int) -> np.ndarray:
    """K[d + n - 1] = log|(d + 1/2) / (d - 1/2)| for |d| < n, K at d = 0 is 0."""
    d = np.arange(1, n, dtype=float)
    pos = np.log1p(1.0 / (d - 0.5))
    return np.concatenate([-pos[::-1], [0.0], pos])


def hilbert(f: DiscreteFunction) -> DiscreteFunction:
    """(1/pi) sum_j f_j int_{cell j} dy / (x_i - y), own cell contributing 0."""
    n = f.grid.n
    full = np.convolve(f.values, hilbert_kernel(n))
    return f.with_values(full[n - 1 : 2 * n - 1] / math.pi)


def commutator(b: DiscreteFunction, f: DiscreteFunction) -> DiscreteFunction:
    """[b, H] f = b Hf - H(bf)."""
    return b * hilbert(f) - hilbert(b * f)


def sawyer_S(f: DiscreteFunction, u: Weight, family: Optional[IntervalFamily] = None) -> DiscreteFunction:
    """S f = M(f u) / u."""
    return hl_maximal(f * u, family) / u


@dataclass(frozen=True)
class OperatorTag:
    """Named operator, addressable from configs as e.g. ``orlicz_maximal`` or ``sawyer``."""

    name: str
    growth: Optional[GrowthFunction] = None
    b: Optional[DiscreteFunction] = field(default=None, compare=False)
    u: Optional[Weight] = field(default=None, compare=False)

    NAMES = ("hl_maximal", "orlicz_maximal", "hilbert", "commutator", "sawyer")

    def __post_init__(self):
        if self.name not in self.NAMES:
            raise ValueError(f"unknown operator {self.name!r}; expected one of {self.NAMES}")
        if self.name == "commutator" and self.b is None:
            raise ValueError("commutator needs a symbol b")
        if self.name == "sawyer" and self.u is None:
            raise ValueError("sawyer needs a weight u")

    def __call__(self, f: DiscreteFunction) -> DiscreteFunction:
        if self.name == "hl_maximal":
            return hl_maximal(f)
        if self.name == "orlicz_maximal":
            return orlicz_maximal(f, self.growth or PhiRho(1.0))
        if self.name == "hilbert":
            return hilbert(f)
        if self.name == "commutator":
            return commutator(self.b, f)
        return sawyer_S(f, self.u)
