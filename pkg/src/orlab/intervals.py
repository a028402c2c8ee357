"""Families of grid-aligned intervals and max-reductions over them.

An interval is a half-open index range [a, b) of cells.  The ``all`` family
holds every such range (O(n^2) of them); ``dyadic`` holds dyadic blocks at
every scale plus three shifted copies (offsets L/4, L/2, 3L/4), clipped to the
grid so every level covers all cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
from scipy.ndimage import maximum_filter1d

FULL_FAMILY_MAX_N = 4096

BlockFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class IntervalFamily:
    n: int
    kind: str = "all"

    def __post_init__(self):
        if self.kind not in ("all", "dyadic"):
            raise ValueError(f"unknown interval family {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be positive")

    def levels(self) -> Iterator[tuple[np.ndarray, np.ndarray, bool]]:
        """Yield (starts, stops, disjoint) batches covering the family."""
        n = self.n
        if self.kind == "all":
            for length in range(1, n + 1):
                starts = np.arange(n - length + 1)
                yield starts, starts + length, False
            return
        length = 1
        while True:
            offsets = sorted({0, length // 4, length // 2, (3 * length) // 4})
            for off in offsets:
                edges = np.arange(off - length, n + length, length)
                edges = np.unique(np.clip(edges, 0, n))
                yield edges[:-1], edges[1:], True
            if length >= n:
                return
            length *= 2

    def count(self) -> int:
        return sum(len(s) for s, _, _ in self.levels())


def default_family(n: int, cutoff: int = FULL_FAMILY_MAX_N) -> IntervalFamily:
    return IntervalFamily(n, "all" if n <= cutoff else "dyadic")


def prefix(x: np.ndarray) -> np.ndarray:
    out = np.zeros(len(x) + 1)
    np.cumsum(x, out=out[1:])
    return out


def interval_max(family: IntervalFamily, block_fn: BlockFn) -> float:
    best = -np.inf
    for starts, stops, _ in family.levels():
        vals = block_fn(starts, stops)
        if vals.size:
            best = max(best, float(np.max(vals)))
    return best


def pointwise_max(family: IntervalFamily, block_fn: BlockFn) -> np.ndarray:
    """For each cell, the max of ``block_fn`` over family intervals containing it."""
    n = family.n
    out = np.full(n, -np.inf)
    cells = np.arange(n)
    for starts, stops, disjoint in family.levels():
        vals = block_fn(starts, stops)
        if disjoint:
            owner = np.searchsorted(starts, cells, side="right") - 1
            np.maximum(out, vals[owner], out=out)
            continue
        length = int(stops[0] - starts[0])
        if length == 1:
            np.maximum(out, vals, out=out)
            continue
        # windows of starts a in [i-L+1, i] for cell i, padded with -inf
        pad = np.full(length - 1, -np.inf)
        ext = np.concatenate([pad, vals, pad])
        mf = maximum_filter1d(ext, size=length, mode="constant", cval=-np.inf)
        np.maximum(out, mf[cells + length // 2], out=out)
    return out
