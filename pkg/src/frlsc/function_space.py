"""Sampled representation of L2([0,1]) curves and vectors of curves.

Curves are stored as values on a shared uniform grid over [0,1]; all inner
products and norms are composite-trapezoid approximations of the L2 integrals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import StructuralError

_UNIFORMITY_RTOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform sampling grid on [0,1] with m >= 2 points."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("grid needs at least 2 points")
        if pts[0] != 0.0 or pts[-1] != 1.0:
            raise ValueError("grid must span [0,1] exactly")
        h = 1.0 / (pts.size - 1)
        gaps = np.diff(pts)
        if not np.all(np.abs(gaps - h) <= _UNIFORMITY_RTOL * h):
            raise ValueError("grid spacing is not uniform")
        pts.setflags(write=False)

    @classmethod
    def uniform(cls, m: int) -> "Grid":
        if m < 2:
            raise ValueError(f"m must be >= 2, got {m}")
        return cls(np.linspace(0.0, 1.0, m))

    @property
    def m(self) -> int:
        return self.points.size

    @property
    def h(self) -> float:
        return 1.0 / (self.points.size - 1)

    @property
    def weights(self) -> np.ndarray:
        """Composite trapezoid quadrature weights."""
        w = np.full(self.m, self.h)
        w[0] *= 0.5
        w[-1] *= 0.5
        w.setflags(write=False)
        return w

    def __eq__(self, other):
        return isinstance(other, Grid) and self.points.size == other.points.size

    def __hash__(self):
        return hash(self.points.size)


@dataclass(frozen=True)
class SampledFunction:
    """A real curve on [0,1] given by its values on a Grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.m,):
            raise StructuralError(
                f"values shape {vals.shape} does not match grid with m={self.grid.m}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("function values must be finite")
        vals.setflags(write=False)

    @classmethod
    def from_callable(cls, grid: Grid, fn) -> "SampledFunction":
        return cls(grid, fn(grid.points))


@dataclass(frozen=True)
class FunctionalObservation:
    """One input point: a vector of p curves on a shared grid."""

    channels: tuple = field()

    def __post_init__(self):
        chans = tuple(self.channels)
        object.__setattr__(self, "channels", chans)
        if not chans:
            raise StructuralError("observation needs at least one channel")
        g = chans[0].grid
        if any(c.grid != g for c in chans[1:]):
            raise StructuralError("all channels must share one grid")

    @classmethod
    def from_array(cls, grid: Grid, arr: np.ndarray) -> "FunctionalObservation":
        arr = np.atleast_2d(np.asarray(arr, dtype=float))
        return cls(tuple(SampledFunction(grid, row) for row in arr))

    @property
    def grid(self) -> Grid:
        return self.channels[0].grid

    @property
    def p(self) -> int:
        return len(self.channels)

    def as_array(self) -> np.ndarray:
        """Channel values stacked as a (p, m) array."""
        return np.stack([c.values for c in self.channels])


def _require_same_grid(f: SampledFunction, g: SampledFunction):
    if f.grid != g.grid:
        raise StructuralError("functions live on different grids")


def l2_inner(f: SampledFunction, g: SampledFunction) -> float:
    """Trapezoid approximation of the L2 inner product on [0,1]."""
    _require_same_grid(f, g)
    return float(np.dot(f.grid.weights, f.values * g.values))


def l2_norm(f: SampledFunction) -> float:
    return float(np.sqrt(max(l2_inner(f, f), 0.0)))


def l2p_distance_sq(a: FunctionalObservation, b: FunctionalObservation) -> float:
    """Squared (L2)^p distance: sum of channel-wise squared L2 distances."""
    if a.p != b.p:
        raise StructuralError(f"channel counts differ: {a.p} vs {b.p}")
    if a.grid != b.grid:
        raise StructuralError("observations live on different grids")
    diff = a.as_array() - b.as_array()
    return float(np.dot(diff * diff, a.grid.weights).sum())


def vector_inner(yv, zv) -> float:
    """Inner product on (L2)^n: sum of blockwise L2 inner products."""
    if len(yv) != len(zv):
        raise StructuralError(f"vector lengths differ: {len(yv)} vs {len(zv)}")
    return sum(l2_inner(y, z) for y, z in zip(yv, zv))
