"""Decreasing rearrangements with respect to a weighted measure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import DiscreteFunction, WeightedMeasure


@dataclass(frozen=True, eq=False)
class StepRearrangement:
    """f*_mu as steps (mass_k, value_k) with strictly decreasing values.

    f*(s) = value_k on [cum_{k-1}, cum_k) and 0 past the last step.
    """

    masses: np.ndarray
    values: np.ndarray
    total_mass: float

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.masses)

    @property
    def support_mass(self) -> float:
        return float(self.masses.sum())

    def __len__(self) -> int:
        return len(self.values)

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=float)
        k = np.searchsorted(self.cumulative, s_arr, side="right")
        padded = np.append(self.values, 0.0)
        out = padded[np.minimum(k, len(self.values))]
        return float(out) if np.ndim(s) == 0 else out

    def to_json(self) -> list[dict]:
        return [{"mass": float(m), "value": float(v)} for m, v in zip(self.masses, self.values)]


def rearrangement(f: DiscreteFunction, mu: WeightedMeasure) -> StepRearrangement:
    a = np.abs(f.values)
    nz = a > 0
    vals = a[nz]
    masses = mu.masses[nz]
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    masses = masses[order]
    if vals.size == 0:
        return StepRearrangement(np.zeros(0), np.zeros(0), mu.total_mass)
    starts = np.concatenate([[0], np.flatnonzero(np.diff(vals) != 0) + 1])
    return StepRearrangement(np.add.reduceat(masses, starts), vals[starts], mu.total_mass)


def truncate(f: DiscreteFunction, mu: WeightedMeasure, t: float) -> tuple[DiscreteFunction, DiscreteFunction]:
    """Split f = f_low + f_high at the level f*(t).

    Cells with |f| = f*(t) go to f_low, so the high part lives on
    {|f| > f*(t)}, a set of mu-measure at most t.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    level = rearrangement(f, mu)(t)
    high = np.abs(f.values) > level
    return (
        f.with_values(np.where(high, 0.0, f.values)),
        f.with_values(np.where(high, f.values, 0.0)),
    )
