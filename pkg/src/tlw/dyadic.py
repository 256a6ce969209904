"""Dyadic cube lattice on the box [0, 2^L)^n with exact piecewise-constant quadrature.

The domain is itself a dyadic cube (level -L), discretised into 2^(L+J) cells
per axis at the finest level J.  Every dyadic cube with level in [-L, J] is an
exact union of finest cells, so integrals of grid functions over such cubes are
plain cell sums times the cell volume, with no quadrature error.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LevelRangeError


@dataclass(frozen=True)
class DyadicCube:
    """The cube 2^{-k}([0,1)^n + m); `level` k fixes the side 2^{-k}."""

    level: int
    index: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(int(i) for i in self.index))

    @property
    def n(self) -> int:
        return len(self.index)

    @property
    def side(self) -> float:
        return 2.0 ** (-self.level)

    @property
    def volume(self) -> float:
        return 2.0 ** (-self.level * self.n)

    def lower(self) -> tuple[float, ...]:
        return tuple(m * self.side for m in self.index)

    def upper(self) -> tuple[float, ...]:
        return tuple((m + 1) * self.side for m in self.index)

    def parent(self) -> "DyadicCube":
        return DyadicCube(self.level - 1, tuple(m // 2 for m in self.index))

    def children(self) -> list["DyadicCube"]:
        return [
            DyadicCube(self.level + 1, tuple(2 * m + o for m, o in zip(self.index, off)))
            for off in itertools.product((0, 1), repeat=self.n)
        ]

    def contains_cube(self, other: "DyadicCube") -> bool:
        if other.level < self.level:
            return False
        shift = other.level - self.level
        return all(h >> shift == m for h, m in zip(other.index, self.index))


@dataclass(frozen=True)
class Grid:
    """Finite dyadic discretisation of [0, 2^L)^n at finest level J.

    `k_min`..`k_max` is the level range carried by coefficient fields and
    weight sequences living on this grid.
    """

    n: int
    L: int
    J: int
    k_min: int
    k_max: int

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.n}")
        if self.J + self.L < 0:
            raise LevelRangeError(f"finest level J={self.J} below domain level {-self.L}")
        if not (-self.L <= self.k_min <= self.k_max <= self.J):
            raise LevelRangeError(
                f"level range [{self.k_min}, {self.k_max}] not within [{-self.L}, {self.J}]"
            )

    @property
    def cells_per_axis(self) -> int:
        return 1 << (self.L + self.J)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.cells_per_axis,) * self.n

    @property
    def h(self) -> float:
        return 2.0 ** (-self.J)

    @property
    def cell_volume(self) -> float:
        return 2.0 ** (-self.J * self.n)

    @property
    def domain_side(self) -> float:
        return 2.0 ** self.L

    @property
    def levels(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def cubes_per_axis(self, k: int) -> int:
        if not (-self.L <= k <= self.J):
            raise LevelRangeError(f"level {k} outside [{-self.L}, {self.J}]")
        return 1 << (self.L + k)

    def level_shape(self, k: int) -> tuple[int, ...]:
        return (self.cubes_per_axis(k),) * self.n

    def cell_centers(self, axis: int = 0) -> np.ndarray:
        del axis  # uniform in every axis
        return (np.arange(self.cells_per_axis) + 0.5) * self.h

    def refined(self, extra: int = 1) -> "Grid":
        """Same domain and level range, finest level J+extra."""
        return Grid(self.n, self.L, self.J + extra, self.k_min, self.k_max)

    def with_levels(self, k_min: int, k_max: int) -> "Grid":
        return Grid(self.n, self.L, self.J, k_min, k_max)

    def contains_cube(self, cube: DyadicCube) -> bool:
        if cube.n != self.n:
            return False
        if not (-self.L <= cube.level <= self.J):
            return False
        top = 1 << (self.L + cube.level)
        return all(0 <= m < top for m in cube.index)

    def cube_slices(self, cube: DyadicCube) -> tuple[slice, ...]:
        """Finest-cell index slices covered by `cube` (requires level <= J)."""
        if not self.contains_cube(cube):
            raise DomainError(f"cube {cube} not inside the domain grid")
        f = 1 << (self.J - cube.level)
        return tuple(slice(m * f, (m + 1) * f) for m in cube.index)


@dataclass
class GridFunction:
    """One value per finest cell; the piecewise-constant model of a function."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    @classmethod
    def zeros(cls, grid: Grid, dtype=float) -> "GridFunction":
        return cls(grid, np.zeros(grid.shape, dtype=dtype))

    @classmethod
    def constant(cls, grid: Grid, value) -> "GridFunction":
        return cls(grid, np.full(grid.shape, value, dtype=np.result_type(value, float)))

    @classmethod
    def from_cell_centers(cls, grid: Grid, fn) -> "GridFunction":
        """Sample fn at cell centers; fn takes n arrays (meshgrid, ij indexing)."""
        axes = [grid.cell_centers() for _ in range(grid.n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return cls(grid, np.asarray(fn(*mesh), dtype=float))

    def copy(self) -> "GridFunction":
        return GridFunction(self.grid, self.values.copy())


def cube_containing(grid: Grid, k: int, x) -> DyadicCube:
    """The unique level-k dyadic cube containing the point x; m_i = floor(2^k x_i)."""
    if not (-grid.L <= k <= grid.J):
        raise LevelRangeError(f"level {k} outside [{-grid.L}, {grid.J}]")
    pt = np.atleast_1d(np.asarray(x, dtype=float))
    if pt.shape != (grid.n,):
        raise ValueError(f"point has shape {pt.shape}, expected ({grid.n},)")
    if np.any(pt < 0) or np.any(pt >= grid.domain_side):
        raise DomainError(f"point {x} outside [0, {grid.domain_side})^{grid.n}")
    m = tuple(int(np.floor((2.0**k) * xi)) for xi in pt)
    return DyadicCube(k, m)


def cubes_at_level(grid: Grid, k: int) -> list[DyadicCube]:
    """All 2^{(L+k)n} level-k cubes inside the domain, in lexicographic index order."""
    top = grid.cubes_per_axis(k)
    return [DyadicCube(k, m) for m in itertools.product(range(top), repeat=grid.n)]


def integrate(f: GridFunction, cube: DyadicCube):
    """Exact integral of f over the cube: cell sum times cell volume."""
    if cube.level > f.grid.J:
        raise LevelRangeError(f"cube level {cube.level} finer than grid level {f.grid.J}")
    sl = f.grid.cube_slices(cube)
    return f.values[sl].sum() * f.grid.cell_volume


def indicator(grid: Grid, cube: DyadicCube) -> GridFunction:
    """Characteristic function of the cube as a grid function."""
    out = GridFunction.zeros(grid)
    out.values[grid.cube_slices(cube)] = 1.0
    return out


def expand_level_array(grid: Grid, k: int, a: np.ndarray) -> np.ndarray:
    """Blow a per-cube level-k array up to the finest-cell shape (constant per cube)."""
    a = np.asarray(a)
    if a.shape != grid.level_shape(k):
        raise ValueError(f"level-{k} array has shape {a.shape}, expected {grid.level_shape(k)}")
    f = 1 << (grid.J - k)
    out = a
    for ax in range(grid.n):
        out = np.repeat(out, f, axis=ax)
    return out


def cube_sums(grid: Grid, k: int, cells: np.ndarray) -> np.ndarray:
    """Sum cell values over every level-k cube; returns the per-cube array."""
    s = grid.cubes_per_axis(k)
    f = 1 << (grid.J - k)
    if grid.n == 1:
        return cells.reshape(s, f).sum(axis=1)
    return cells.reshape(s, f, s, f).sum(axis=(1, 3))


def cube_means(grid: Grid, k: int, cells: np.ndarray) -> np.ndarray:
    """Average cell values over every level-k cube."""
    return cube_sums(grid, k, cells) / float((1 << (grid.J - k)) ** grid.n)
