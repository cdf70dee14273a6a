"""Closed-form rate region of the scalar Gaussian broadcast example.

The input power P is split across the three message layers by fractions
(a0, a0p, a1) summing to one.  For each split the region is a 3-D
polytope with four bound faces; sweeping the split over a barycentric
grid and taking the hull of all vertices traces the full region
boundary.  Receiver 1 sees noise variance n1, receiver 2 sees n2 > n1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .polytope import (
    HalfSpace3,
    HPolytope3,
    VertexSet,
    convex_hull,
    enumerate_vertices,
)

__all__ = [
    "AwgnParams",
    "PowerSplit",
    "AwgnRegion",
    "gaussian_capacity",
    "awgn_bounds",
    "barycentric_splits",
    "awgn_region",
    "write_boundary_csv",
]


@dataclass(frozen=True)
class AwgnParams:
    power: float
    n1: float
    n2: float
    c1: float = 0.0

    def __post_init__(self):
        if self.power <= 0.0:
            raise ValueError("power must be positive")
        if self.n1 <= 0.0 or self.n2 <= 0.0:
            raise ValueError("noise variances must be positive")
        if not self.n2 > self.n1:
            raise ValueError("n2 must exceed n1 (receiver 2 is the weak user)")
        if self.c1 < 0.0:
            raise ValueError("conference capacity must be nonnegative")


@dataclass(frozen=True)
class PowerSplit:
    a0: float
    a0p: float
    a1: float

    def __post_init__(self):
        if min(self.a0, self.a0p, self.a1) < 0.0:
            raise ValueError("power fractions must be nonnegative")
        if abs(self.a0 + self.a0p + self.a1 - 1.0) > 1e-12:
            raise ValueError("power fractions must sum to 1")


def gaussian_capacity(snr: float) -> float:
    """0.5 * log2(1 + snr) bits; zero at zero, strictly increasing."""
    if snr < 0.0:
        raise ValueError("snr must be nonnegative")
    return 0.5 * math.log2(1.0 + snr)


def split_bounds(p: AwgnParams, s: PowerSplit) -> tuple[float, float, float, float]:
    """Face values (r0, r0p, r1, r0p + r1) for one power split."""
    P = p.power
    r0 = gaussian_capacity(s.a0 * P / (p.n2 + (s.a0p + s.a1) * P))
    r0p = gaussian_capacity(s.a0p * P / (p.n2 + s.a1 * P)) + p.c1
    r1 = gaussian_capacity(s.a1 * P / p.n1)
    r0p_r1 = gaussian_capacity((s.a0p + s.a1) * P / p.n1)
    return r0, r0p, r1, r0p_r1


def awgn_bounds(p: AwgnParams, s: PowerSplit) -> HPolytope3:
    """Per-split polytope: the four bound faces plus nonnegativity."""
    r0, r0p, r1, r0p_r1 = split_bounds(p, s)
    rows = [
        HalfSpace3(np.array([1.0, 0.0, 0.0]), r0),
        HalfSpace3(np.array([0.0, 1.0, 0.0]), r0p),
        HalfSpace3(np.array([0.0, 0.0, 1.0]), r1),
        HalfSpace3(np.array([0.0, 1.0, 1.0]), r0p_r1),
        HalfSpace3(np.array([-1.0, 0.0, 0.0]), 0.0),
        HalfSpace3(np.array([0.0, -1.0, 0.0]), 0.0),
        HalfSpace3(np.array([0.0, 0.0, -1.0]), 0.0),
    ]
    return HPolytope3(tuple(rows))


def barycentric_splits(grid: int) -> list[PowerSplit]:
    """All splits (i, j, k)/(grid-1) with i+j+k = grid-1; grid(grid+1)/2 points."""
    if grid < 2:
        raise ValueError("grid must be >= 2")
    n = grid - 1
    out = []
    for i in range(n + 1):
        for j in range(n - i + 1):
            k = n - i - j
            out.append(PowerSplit(i / n, j / n, k / n))
    return out


@dataclass(frozen=True)
class AwgnRegion:
    params: AwgnParams
    splits: tuple[PowerSplit, ...]
    bounds: np.ndarray  # (n_splits, 4): r0, r0p, r1, r0p+r1 face values
    hull: VertexSet


def awgn_region(p: AwgnParams, grid: int = 101) -> AwgnRegion:
    """Sweep power splits on a barycentric grid and hull the vertices."""
    splits = barycentric_splits(grid)
    bounds = np.array([split_bounds(p, s) for s in splits])
    cloud = []
    for s in splits:
        vs = enumerate_vertices(awgn_bounds(p, s))
        cloud.append(vs.points)
    hull = convex_hull(np.vstack(cloud))
    return AwgnRegion(p, tuple(splits), bounds, hull)


def write_boundary_csv(region: AwgnRegion, path: str | Path) -> None:
    """One row per grid split: power fractions and the four face values."""
    lines = ["a0,a0p,a1,r0_max,r0p_max,r1_max,r0p_plus_r1_max"]
    for s, row in zip(region.splits, region.bounds):
        cells = [s.a0, s.a0p, s.a1, *row]
        lines.append(",".join(f"{x:.15g}" for x in cells))
    Path(path).write_text("\n".join(lines) + "\n")
