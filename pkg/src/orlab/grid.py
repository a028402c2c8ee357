"""Uniform 1-D grids, cell-valued functions and weights, Muckenhoupt constants.

Cells are [x_lo + i h, x_lo + (i+1) h).  Power weights |x|^a take cell-centre
values except on cells whose closure contains 0, where the exact cell average
is used so negative exponents stay finite.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .intervals import IntervalFamily, default_family, interval_max, pointwise_max, prefix


class NonIntegrableWeightError(ValueError):
    pass


@dataclass(frozen=True)
class Grid1D:
    x_lo: float
    x_hi: float
    n: int

    def __post_init__(self):
        if not self.x_lo < self.x_hi:
            raise ValueError("x_lo must be below x_hi")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("n must be an integer >= 2")

    @classmethod
    def symmetric(cls, n: int, half_width: float = 1.0) -> "Grid1D":
        return cls(-half_width, half_width, n)

    @property
    def h(self) -> float:
        return (self.x_hi - self.x_lo) / self.n

    @property
    def edges(self) -> np.ndarray:
        return self.x_lo + self.h * np.arange(self.n + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.x_lo + self.h * (np.arange(self.n) + 0.5)

    def refined(self, factor: int = 2) -> "Grid1D":
        return Grid1D(self.x_lo, self.x_hi, self.n * factor)

    def to_json(self) -> dict:
        return {"lo": self.x_lo, "hi": self.x_hi, "n": self.n}

    @classmethod
    def from_json(cls, obj: dict) -> "Grid1D":
        return cls(float(obj["lo"]), float(obj["hi"]), int(obj["n"]))


@dataclass(frozen=True, eq=False)
class DiscreteFunction:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        self._validate()

    def _validate(self):
        pass

    @classmethod
    def from_callable(cls, grid: Grid1D, fn) -> "DiscreteFunction":
        return cls(grid, fn(grid.centers))

    def with_values(self, values) -> "DiscreteFunction":
        return DiscreteFunction(self.grid, values)

    def _other(self, other):
        if isinstance(other, DiscreteFunction):
            if other.grid != self.grid:
                raise ValueError("grid mismatch")
            return other.values
        return other

    def __add__(self, other):
        return self.with_values(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.with_values(self.values - self._other(other))

    def __mul__(self, other):
        return self.with_values(self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.with_values(self.values / self._other(other))

    def __neg__(self):
        return self.with_values(-self.values)

    def __abs__(self):
        return self.with_values(np.abs(self.values))

    def __pow__(self, exponent: float):
        return self.with_values(self.values**exponent)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def to_json(self) -> dict:
        return {"grid": self.grid.to_json(), "values": self.values.tolist()}

    @classmethod
    def from_json(cls, obj: dict):
        return cls(Grid1D.from_json(obj["grid"]), np.asarray(obj["values"], dtype=float))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for x, v in zip(self.grid.centers, self.values):
            writer.writerow([repr(float(x)), repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, grid: Grid1D):
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        xs = np.array([float(r[0]) for r in rows])
        if not np.allclose(xs, grid.centers, rtol=0, atol=1e-9 * grid.h):
            raise ValueError("CSV abscissae do not match the grid centres")
        return cls(grid, np.array([float(r[1]) for r in rows]))


@dataclass(frozen=True, eq=False)
class Weight(DiscreteFunction):
    def _validate(self):
        if not np.all(self.values > 0):
            raise ValueError("weights must be strictly positive")

    @classmethod
    def ones(cls, grid: Grid1D) -> "Weight":
        return cls(grid, np.ones(grid.n))

    @classmethod
    def of(cls, f: DiscreteFunction) -> "Weight":
        return cls(f.grid, f.values)


@dataclass(frozen=True, eq=False)
class WeightedMeasure:
    """mu(E) = sum over cells in E of w_i h."""

    weight: Weight
    masses: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = self.weight.values * self.weight.grid.h
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)

    @classmethod
    def lebesgue(cls, grid: Grid1D) -> "WeightedMeasure":
        return cls(Weight.ones(grid))

    @property
    def grid(self) -> Grid1D:
        return self.weight.grid

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def mass(self, mask: np.ndarray) -> float:
        return float(self.masses[np.asarray(mask, dtype=bool)].sum())

    def integral(self, values) -> float:
        return float(np.dot(np.asarray(values, dtype=float), self.masses))


@dataclass(frozen=True, eq=False)
class FactoredWeight:
    """v = v1 * v2**(1 - t) with v1, v2 meant to be A_1 weights."""

    v1: Weight
    v2: Weight
    t: float
    v: Weight = None

    def __post_init__(self):
        if not self.t > 1:
            raise ValueError("t must exceed 1")
        realized = self.v1.values * self.v2.values ** (1.0 - self.t)
        if self.v is None:
            object.__setattr__(self, "v", Weight(self.v1.grid, realized))
        elif not np.allclose(self.v.values, realized, rtol=1e-12, atol=0):
            raise ValueError("stored v does not match v1 * v2^(1-t)")


def _touches_zero(grid: Grid1D) -> np.ndarray:
    e = grid.edges
    return (e[:-1] <= 0) & (e[1:] >= 0)


def make_power_weight(a: float, grid: Grid1D) -> Weight:
    """|x|^a with exact cell averages on cells touching 0."""
    if a <= -1:
        raise NonIntegrableWeightError(f"|x|^{a} is not locally integrable")
    if a == 0:
        return Weight.ones(grid)
    with np.errstate(divide="ignore"):
        vals = np.abs(grid.centers) ** a
    near = _touches_zero(grid)
    if near.any():
        e = grid.edges

        def antider(x):
            return np.sign(x) * np.abs(x) ** (a + 1) / (a + 1)

        vals[near] = (antider(e[1:][near]) - antider(e[:-1][near])) / grid.h
    return Weight(grid, vals)


def make_log_abs(grid: Grid1D, scale: float = 1.0) -> DiscreteFunction:
    """scale * log|x|, exact cell average on cells touching 0."""
    with np.errstate(divide="ignore"):
        vals = np.log(np.abs(grid.centers))
    near = _touches_zero(grid)
    if near.any():
        e = grid.edges

        def antider(x):
            ax = np.abs(x)
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(ax > 0, x * (np.log(ax) - 1.0), 0.0)

        vals[near] = (antider(e[1:][near]) - antider(e[:-1][near])) / grid.h
    return DiscreteFunction(grid, scale * vals)


def superlevel_mass(f: DiscreteFunction, mu: WeightedMeasure, t: float) -> float:
    """mu({|f| > t})."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return mu.mass(np.abs(f.values) > t)


def ap_u_constant(w: Weight, u: Weight, p: float, family: IntervalFamily | None = None) -> float:
    """[w]_{A_p(u)} over a family of grid-aligned intervals."""
    if p < 1:
        raise ValueError("p must be >= 1")
    family = family or default_family(w.grid.n)
    Pu = prefix(u.values)
    Pwu = prefix(w.values * u.values)
    if p == 1:
        ratio = pointwise_max(family, lambda a, b: (Pwu[b] - Pwu[a]) / (Pu[b] - Pu[a]))
        return float(np.max(ratio / w.values))
    Psu = prefix(w.values ** (-1.0 / (p - 1.0)) * u.values)

    def block(a, b):
        uq = Pu[b] - Pu[a]
        return (Pwu[b] - Pwu[a]) / uq * ((Psu[b] - Psu[a]) / uq) ** (p - 1.0)

    return interval_max(family, block)


def ap_constant(w: Weight, p: float, family: IntervalFamily | None = None) -> float:
    if not p > 1:
        raise ValueError("p must exceed 1; use a1_constant for p = 1")
    return ap_u_constant(w, Weight.ones(w.grid), p, family)


def a1_constant(w: Weight, family: IntervalFamily | None = None) -> float:
    """max_i (Mw)_i / w_i."""
    from .ops import hl_maximal

    return float(np.max(hl_maximal(w, family).values / w.values))


# -- test corpus -------------------------------------------------------------

WEIGHT_EXPONENTS = {"unit": 0.0, "pow-0.5": -0.5, "pow-0.75": -0.75}
A1_WEIGHTS = ("unit", "pow-0.5", "pow-0.75")
PAIR_NAMES = (
    "unit|unit",
    "unit|pow-0.5",
    "pow-0.5|unit",
    "pow-0.5|pow-0.5",
    "pow-0.5|pow+0.5",
    "pow-0.75|unit",
)


def _corpus_functions(grid: Grid1D) -> dict[str, DiscreteFunction]:
    x = grid.centers
    with np.errstate(divide="ignore"):
        spike_core = np.abs(x - 0.3) ** -0.25
    return {
        "indicator": DiscreteFunction(grid, ((x >= 0.2) & (x <= 0.5)).astype(float)),
        "triangle": DiscreteFunction(grid, np.maximum(0.0, 1.0 - np.abs(x + 0.3) / 0.25)),
        "gaussian": DiscreteFunction(grid, np.exp(-(((x + 0.5) / 0.1) ** 2))),
        "chirp": DiscreteFunction(grid, np.sin(16 * math.pi * x**2) * (1 - x**2)),
        "spike": DiscreteFunction(grid, np.where(np.abs(x - 0.3) < 0.2, spike_core, 0.0)),
    }


@dataclass(frozen=True, eq=False)
class Corpus:
    grid: Grid1D
    functions: dict
    weights: dict
    factored: dict
    pairs: dict

    def function(self, name: str) -> DiscreteFunction:
        try:
            return self.functions[name]
        except KeyError:
            raise KeyError(f"unknown corpus function {name!r}; known: {sorted(self.functions)}") from None

    def weight(self, name: str) -> Weight:
        try:
            return self.weights[name]
        except KeyError:
            raise KeyError(f"unknown corpus weight {name!r}; known: {sorted(self.weights)}") from None

    def pair(self, name: str) -> tuple[Weight, Weight]:
        try:
            return self.pairs[name]
        except KeyError:
            raise KeyError(f"unknown corpus pair {name!r}; known: {sorted(self.pairs)}") from None


def corpus(grid: Grid1D | None = None) -> Corpus:
    """Deterministic test functions and weights on ``grid`` (default [-1, 1], n=1024).

    ``pow+0.5`` is realised through its factorisation v1 = 1, v2 = |x|^{-1/2},
    t = 2; ``pow-0.5`` and ``unit`` carry the trivial factorisation v2 = 1.
    """
    grid = grid or Grid1D.symmetric(1024)
    weights = {name: make_power_weight(a, grid) for name, a in WEIGHT_EXPONENTS.items()}
    unit = weights["unit"]
    factored = {
        "unit": FactoredWeight(unit, unit, 2.0),
        "pow-0.5": FactoredWeight(weights["pow-0.5"], unit, 2.0),
        "pow+0.5": FactoredWeight(unit, weights["pow-0.5"], 2.0),
    }
    weights["pow+0.5"] = factored["pow+0.5"].v
    pairs = {}
    for name in PAIR_NAMES:
        u_name, v_name = name.split("|")
        pairs[name] = (weights[u_name], weights[v_name])
    return Corpus(grid, _corpus_functions(grid), weights, factored, pairs)


def random_functions(grid: Grid1D, count: int, seed: int = 0) -> dict[str, DiscreteFunction]:
    """Seeded random step functions and bumps, named ``rand-<k>``."""
    rng = np.random.default_rng(seed)
    x = grid.centers
    out = {}
    for k in range(count):
        if k % 2 == 0:
            cuts = np.sort(rng.uniform(grid.x_lo, grid.x_hi, size=6))
            levels = rng.uniform(0.0, 2.0, size=7) * (rng.random(7) < 0.7)
            vals = levels[np.searchsorted(cuts, x)]
        else:
            center = rng.uniform(-0.8, 0.8)
            width = rng.uniform(0.02, 0.3)
            vals = rng.uniform(0.5, 3.0) * np.exp(-(((x - center) / width) ** 2))
        if not np.any(vals):
            vals[grid.n // 3] = 1.0
        out[f"rand-{k:02d}"] = DiscreteFunction(grid, vals)
    return out
