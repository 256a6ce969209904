"""Sequence spaces over the truncated dyadic lattice and their equivalent norms.

A coefficient field assigns one complex amplitude per in-domain dyadic cube
for every level in the grid's range.  The norms implemented here:

  * the mixed L_p(l_q) quasi-norm (pointwise weights),
  * its cube-averaged variant with per-cube weight integrals,
  * the p = infinity norm (sup over dyadic cubes P of localized averages),
  * the exact cube-averaged rewriting of that sup (an identity, not a bound),
  * the smoothed field lambda*, the localized functional G_P, the quartile
    functional m_P with its pointwise supremum, and restricted variants over
    per-cube subsets E_Q.

Every sup over P enumerates all dyadic cubes with level in [-L, k_max]; on the
truncated model this is the exact supremum (larger cubes cannot appear, and
the domain cube dominates anything coarser).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dyadic import (
    DyadicCube,
    Grid,
    GridFunction,
    cube_means,
    cube_sums,
    expand_level_array,
)
from .errors import (
    LevelMismatchError,
    LevelRangeError,
    PositivityError,
    ResolutionError,
)
from .weights import WeightSequence

INF = math.inf


class CoeffField:
    """Complex amplitudes lambda_{k,m}, dense per-level arrays over the lattice."""

    def __init__(self, grid: Grid, entries: dict[int, np.ndarray]):
        self.grid = grid
        self.entries: dict[int, np.ndarray] = {}
        for k in grid.levels:
            if k not in entries:
                raise LevelMismatchError(f"missing coefficients for level {k}")
            a = np.asarray(entries[k], dtype=complex)
            if a.shape != grid.level_shape(k):
                raise LevelMismatchError(
                    f"level {k} has shape {a.shape}, lattice is {grid.level_shape(k)}"
                )
            if not np.all(np.isfinite(a)):
                raise ValueError(f"level {k} contains non-finite amplitudes")
            self.entries[k] = a

    @property
    def levels(self) -> range:
        return self.grid.levels

    @classmethod
    def zeros(cls, grid: Grid) -> "CoeffField":
        return cls(grid, {k: np.zeros(grid.level_shape(k), dtype=complex) for k in grid.levels})

    @classmethod
    def single(cls, grid: Grid, k: int, m: tuple[int, ...], value=1.0) -> "CoeffField":
        out = cls.zeros(grid)
        out.entries[k][tuple(m)] = value
        return out

    @classmethod
    def random(cls, grid: Grid, rng: np.random.Generator, scale: float = 1.0,
               complex_values: bool = True) -> "CoeffField":
        entries = {}
        for k in grid.levels:
            shape = grid.level_shape(k)
            re = rng.standard_normal(shape)
            im = rng.standard_normal(shape) if complex_values else 0.0
            entries[k] = scale * (re + 1j * im)
        return cls(grid, entries)

    def scale(self, c) -> "CoeffField":
        return CoeffField(self.grid, {k: c * v for k, v in self.entries.items()})

    def plus(self, other: "CoeffField") -> "CoeffField":
        if other.grid != self.grid:
            raise LevelMismatchError("coefficient fields live on different lattices")
        return CoeffField(self.grid, {k: self.entries[k] + other.entries[k] for k in self.levels})

    def amplitude(self, k: int) -> np.ndarray:
        return np.abs(self.entries[k])

    def max_abs(self) -> float:
        return max((float(np.abs(v).max()) if v.size else 0.0) for v in self.entries.values())


def _check_pair(lam: CoeffField, w: WeightSequence):
    if lam.grid != w.grid:
        raise LevelMismatchError("coefficient field and weights live on different grids")


def _pointwise_summand(lam: CoeffField, w: WeightSequence, k: int, q: float) -> np.ndarray:
    """Cell field 2^{knq/2} t_k(x)^q |lambda_{k,m}|^q chi_{k,m}(x)."""
    grid = lam.grid
    amp = expand_level_array(grid, k, np.abs(lam.entries[k]) ** q)
    return (2.0 ** (k * grid.n * q / 2.0)) * amp * w.tk[k] ** q


def _cubeavg_summand(lam: CoeffField, w: WeightSequence, k: int, q: float) -> np.ndarray:
    """Cell field 2^{knq(1/2+1/q)} (int_Q t_k^q) |lambda_{k,m}|^q chi_{k,m}(x)."""
    grid = lam.grid
    tq_int = cube_sums(grid, k, w.tk[k] ** q) * grid.cell_volume
    per_cube = (2.0 ** (k * grid.n * (q / 2.0 + 1.0))) * tq_int * np.abs(lam.entries[k]) ** q
    return expand_level_array(grid, k, per_cube)


def _lp_norm(grid: Grid, body: np.ndarray, p: float) -> float:
    if p == INF:
        return float(body.max()) if body.size else 0.0
    return float((body**p).sum() * grid.cell_volume) ** (1.0 / p)


def f_pq_norm(lam: CoeffField, w: WeightSequence, p: float, q: float) -> float:
    """The mixed quasi-norm || (sum_k sum_m 2^{knq/2} t_k^q |l_km|^q chi)^{1/q} ||_{L_p}.

    q = inf takes the sup over levels of the summand (usual modification).
    """
    _check_pair(lam, w)
    if not 0 < p < INF:
        raise LevelRangeError(f"p must be in (0, inf), got {p}")
    grid = lam.grid
    if q == INF:
        body = np.zeros(grid.shape)
        for k in lam.levels:
            term = (2.0 ** (k * grid.n / 2.0)) * w.tk[k] * expand_level_array(
                grid, k, np.abs(lam.entries[k])
            )
            np.maximum(body, term, out=body)
        return _lp_norm(grid, body, p)
    if q <= 0:
        raise LevelRangeError(f"q must be positive or inf, got {q}")
    body = np.zeros(grid.shape)
    for k in lam.levels:
        body += _pointwise_summand(lam, w, k, q)
    return _lp_norm(grid, body ** (1.0 / q), p)


def f_pq_norm_star(lam: CoeffField, w: WeightSequence, p: float, q: float,
                   delta: float = 1.0) -> float:
    """Equivalent quasi-norm with cube-integrated weights t_{k,m,dp} in place of t_k."""
    _check_pair(lam, w)
    if not 0 < delta <= 1:
        raise LevelRangeError(f"delta must be in (0, 1], got {delta}")
    if not 0 < p < INF or not 0 < q < INF:
        raise LevelRangeError("star norm needs finite positive p and q")
    grid = lam.grid
    dp = delta * p
    body = np.zeros(grid.shape)
    for k in lam.levels:
        t_int = (cube_sums(grid, k, w.tk[k] ** dp) * grid.cell_volume) ** (1.0 / dp)
        per_cube = (
            2.0 ** (k * grid.n * q * (0.5 + 1.0 / dp))
            * t_int**q
            * np.abs(lam.entries[k]) ** q
        )
        body += expand_level_array(grid, k, per_cube)
    return _lp_norm(grid, body ** (1.0 / q), p)


def _suffix_fields(grid: Grid, summands: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
    """T_j = sum_{k >= j} u_k for j in the summand level range."""
    out: dict[int, np.ndarray] = {}
    acc = np.zeros(grid.shape)
    for k in sorted(summands, reverse=True):
        acc = acc + summands[k]
        out[k] = acc
    return out


def _sup_cube_average(grid: Grid, summands: dict[int, np.ndarray],
                      p_level_max: int) -> float:
    """sup over dyadic P (levels -L..p_level_max) of (1/|P|) int_P  sum_{k>=k_P} u_k."""
    if not summands:
        return 0.0
    k_min, k_max = min(summands), max(summands)
    suffix = _suffix_fields(grid, summands)
    best = 0.0
    for lev in range(-grid.L, p_level_max + 1):
        if lev > k_max:
            continue  # localized sum is empty for cubes finer than the top level
        means = cube_means(grid, lev, suffix[max(lev, k_min)])
        best = max(best, float(means.max()))
    return best


def f_inf_norm(lam: CoeffField, w: WeightSequence, q: float) -> float:
    """sup over dyadic P of the localized average, with pointwise weights."""
    _check_pair(lam, w)
    if not 0 < q < INF:
        raise LevelRangeError(f"the p = inf space is defined for q in (0, inf), got {q}")
    grid = lam.grid
    summands = {k: _pointwise_summand(lam, w, k, q) for k in lam.levels}
    return _sup_cube_average(grid, summands, grid.k_max) ** (1.0 / q)


def f_inf_norm_cubeavg(lam: CoeffField, w: WeightSequence, q: float) -> float:
    """The cube-averaged rewriting; equals f_inf_norm exactly on the grid."""
    _check_pair(lam, w)
    if not 0 < q < INF:
        raise LevelRangeError(f"the p = inf space is defined for q in (0, inf), got {q}")
    grid = lam.grid
    summands = {k: _cubeavg_summand(lam, w, k, q) for k in lam.levels}
    return _sup_cube_average(grid, summands, grid.k_max) ** (1.0 / q)


def lambda_star(lam: CoeffField, r: float, d: float) -> CoeffField:
    """Smoothed field: l*_{k,m} = (sum_h |l_{k,h}|^r / (1+|h-m|)^d)^{1/r}.

    r = inf is the limiting modification sup_h |l_{k,h}| (1+|h-m|)^{-d}.
    The h = m kernel value is exactly 1, so l* >= |l| entrywise; the FFT
    convolution is clamped there to keep the domination exact.
    """
    if r != INF and r <= 0:
        raise LevelRangeError(f"r must be positive or inf, got {r}")
    grid = lam.grid
    out = {}
    for k in lam.levels:
        amp = np.abs(lam.entries[k])
        kernel = _distance_kernel(grid.level_shape(k), d)
        if r == INF:
            out[k] = _max_conv(amp, kernel)
        else:
            conv = _fft_full_conv(amp**r, kernel)
            out[k] = np.maximum(conv, amp**r) ** (1.0 / r)
    return CoeffField(grid, out)


def _distance_kernel(shape: tuple[int, ...], d: float) -> np.ndarray:
    axes = [np.arange(-(s - 1), s) for s in shape]
    mesh = np.meshgrid(*axes, indexing="ij")
    dist = np.sqrt(sum(m.astype(float) ** 2 for m in mesh))
    return (1.0 + dist) ** (-d)


def _fft_full_conv(a: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """(a * kernel)[m] = sum_h a[h] kernel[m - h + off], off = shape-1 per axis."""
    full = tuple(sa + sk - 1 for sa, sk in zip(a.shape, kernel.shape))
    axes = tuple(range(a.ndim))
    fa = np.fft.rfftn(a, full, axes=axes)
    fk = np.fft.rfftn(kernel, full, axes=axes)
    conv = np.fft.irfftn(fa * fk, full, axes=axes)
    sl = tuple(slice(s - 1, 2 * s - 1) for s in a.shape)
    return np.maximum(conv[sl], 0.0)


def _max_conv(amp: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Sup-convolution over the nonzero entries; only used for the r = inf modification."""
    out = np.zeros_like(amp)
    off = tuple(s - 1 for s in amp.shape)
    for idx in np.argwhere(amp > 0):
        sl = tuple(slice(o - i, o - i + s) for o, i, s in zip(off, idx, amp.shape))
        np.maximum(out, amp[tuple(idx)] * kernel[sl], out=out)
    return out


def lambda_star_equivalence(lam: CoeffField, w: WeightSequence, q: float, d: float,
                            gamma: int = 0) -> tuple[float, float]:
    """(||l*_{q,d}|| , ||l||), both in the p = inf norm with shifted weights t_{k-gamma}."""
    shifted = w.shifted(gamma, levels=lam.grid.levels)
    star = lambda_star(lam, q, d)
    return (
        f_inf_norm(star, shifted, q),
        f_inf_norm(lam, shifted, q),
    )


def g_p(lam: CoeffField, w: WeightSequence, q: float, P: DyadicCube) -> GridFunction:
    """The localized functional G_P on cells of P (zero outside)."""
    _check_pair(lam, w)
    grid = lam.grid
    if not grid.contains_cube(P):
        raise LevelRangeError(f"cube {P} not inside the domain")
    body = np.zeros(grid.shape)
    for k in lam.levels:
        if k >= P.level:
            body += _pointwise_summand(lam, w, k, q)
    out = np.zeros(grid.shape)
    sl = grid.cube_slices(P)
    out[sl] = body[sl] ** (1.0 / q)
    return GridFunction(grid, out)


def _quartile_count(n_cells: int) -> int:
    """Largest allowed count of cells strictly above the returned threshold."""
    return math.ceil(n_cells / 4.0) - 1


def m_p(lam: CoeffField, w: WeightSequence, q: float, P: DyadicCube) -> float:
    """Smallest sampled threshold exceeded on fewer than a quarter of P's cells.

    Candidates are the sampled values of G_P on P together with 0; ties
    resolve downward, matching the infimum over real thresholds exactly.
    """
    grid = lam.grid
    n_cells = (1 << (grid.J - P.level)) ** grid.n
    if n_cells < 4:
        raise ResolutionError(f"cube at level {P.level} has {n_cells} cells; need >= 4")
    vals = g_p(lam, w, q, P).values[grid.cube_slices(P)].ravel()
    allowed = _quartile_count(n_cells)
    # (allowed+1)-th largest value; every smaller threshold fails the count test
    kth = np.partition(vals, n_cells - 1 - allowed)[n_cells - 1 - allowed]
    return float(kth)


def m_fun(lam: CoeffField, w: WeightSequence, q: float,
          min_cells: int = 4) -> GridFunction:
    """Pointwise sup of m_P over dyadic P containing each cell (levels -L..k_max).

    Cubes with fewer than `min_cells` cells are outside the m_P resolution and
    are skipped; pass min_cells=1 to extend the quartile rule down to single
    cells (there it degenerates to the plain maximum over the cube).
    """
    _check_pair(lam, w)
    grid = lam.grid
    summands = {k: _pointwise_summand(lam, w, k, q) for k in lam.levels}
    suffix = _suffix_fields(grid, summands)
    k_min = min(summands)
    out = np.zeros(grid.shape)
    for lev in range(-grid.L, grid.k_max + 1):
        f = 1 << (grid.J - lev)
        n_cells = f**grid.n
        if n_cells < min_cells:
            continue
        tail = suffix[max(lev, k_min)]
        allowed = _quartile_count(n_cells)
        s = grid.cubes_per_axis(lev)
        if grid.n == 1:
            blocks = tail.reshape(s, f)
        else:
            blocks = tail.reshape(s, f, s, f).transpose(0, 2, 1, 3).reshape(s, s, f * f)
        kth = np.partition(blocks, n_cells - 1 - allowed, axis=-1)[..., n_cells - 1 - allowed]
        per_cube = kth ** (1.0 / q)
        np.maximum(out, expand_level_array(grid, lev, per_cube), out=out)
    return GridFunction(grid, out)


def m_fun_p_norm(lam: CoeffField, w: WeightSequence, p: float, q: float,
                 min_cells: int = 4) -> float:
    """L_p norm of the quartile functional; pairs with f_pq_norm in equivalence suites."""
    if p == INF:
        raise LevelRangeError("use the L_inf pairing with f_inf_norm instead")
    m = m_fun(lam, w, q, min_cells=min_cells)
    return _lp_norm(lam.grid, m.values, p)


class RestrictionSets:
    """Per-cube subsets E_Q (union of finest cells), |E_Q| > fraction * |Q| enforced."""

    def __init__(self, grid: Grid, masks: dict[int, np.ndarray], fraction: float = 0.5):
        if not 0 < fraction < 1:
            raise ValueError(f"fraction must be in (0, 1), got {fraction}")
        self.grid = grid
        self.fraction = fraction
        self.masks: dict[int, np.ndarray] = {}
        for k in grid.levels:
            if k not in masks:
                raise LevelMismatchError(f"missing restriction mask for level {k}")
            mask = np.asarray(masks[k], dtype=bool)
            if mask.shape != grid.shape:
                raise LevelMismatchError(f"mask for level {k} has shape {mask.shape}")
            cells_per_cube = (1 << (grid.J - k)) ** grid.n
            counts = cube_sums(grid, k, mask.astype(float))
            if not np.all(counts > fraction * cells_per_cube):
                bad = int(np.argmin(counts))
                raise PositivityError(
                    f"restriction at level {k} keeps {counts.flat[bad]:.0f} of "
                    f"{cells_per_cube} cells in some cube; need > {fraction:.3g} fraction"
                )
            self.masks[k] = mask

    @classmethod
    def full(cls, grid: Grid, fraction: float = 0.5) -> "RestrictionSets":
        return cls(grid, {k: np.ones(grid.shape, dtype=bool) for k in grid.levels}, fraction)

    @classmethod
    def random(cls, grid: Grid, keep_fraction: float, rng: np.random.Generator,
               fraction: float = 0.5) -> "RestrictionSets":
        """Keep floor(keep_fraction * N) + 1 random cells per cube (strictly above)."""
        masks = {}
        for k in grid.levels:
            f = 1 << (grid.J - k)
            n_cells = f**grid.n
            keep = min(int(keep_fraction * n_cells) + 1, n_cells)
            mask = np.zeros(grid.shape, dtype=bool)
            flat = mask.reshape(-1)
            for cube_idx in range(grid.cubes_per_axis(k) ** grid.n):
                chosen = rng.choice(n_cells, size=keep, replace=False)
                cells = _cube_cell_flat_indices(grid, k, cube_idx)
                flat[cells[chosen]] = True
            masks[k] = mask
        return cls(grid, masks, fraction)

    @classmethod
    def corner_fraction(cls, grid: Grid, fraction_per_axis: float,
                        fraction: float = 0.5) -> "RestrictionSets":
        """Lower-left corner block of each cube (per-axis fraction of the side)."""
        masks = {}
        for k in grid.levels:
            f = 1 << (grid.J - k)
            keep = max(int(round(fraction_per_axis * f)), 1)
            block = np.zeros((f,) * grid.n, dtype=bool)
            block[(slice(0, keep),) * grid.n] = True
            tiles = (grid.cubes_per_axis(k),) * grid.n
            masks[k] = np.tile(block, tiles)
        return cls(grid, masks, fraction)

    @classmethod
    def from_m_fun(cls, lam: CoeffField, w: WeightSequence, q: float,
                   fraction: float = 0.5) -> "RestrictionSets":
        """E_Q = {x in Q : G_Q(x) <= m(x)} per cube; guarantees |E_Q| >= 3|Q|/4."""
        grid = lam.grid
        min_side = 1 << (grid.J - grid.k_max)
        if min_side**grid.n < 4:
            raise ResolutionError(
                "finest coefficient cubes have fewer than 4 cells; the quartile "
                "guarantee needs k_max <= J-2 (1-D) or k_max <= J-1 (2-D)"
            )
        m = m_fun(lam, w, q).values
        summands = {k: _pointwise_summand(lam, w, k, q) for k in lam.levels}
        suffix = _suffix_fields(grid, summands)
        masks = {}
        for k in lam.levels:
            g_vals = suffix[k] ** (1.0 / q)
            masks[k] = g_vals <= m
        return cls(grid, masks, fraction)

    def min_fraction(self) -> float:
        """Smallest |E_Q|/|Q| over all cubes and levels."""
        worst = 1.0
        for k, mask in self.masks.items():
            cells_per_cube = (1 << (self.grid.J - k)) ** self.grid.n
            counts = cube_sums(self.grid, k, mask.astype(float))
            worst = min(worst, float(counts.min()) / cells_per_cube)
        return worst


def _cube_cell_flat_indices(grid: Grid, k: int, cube_flat_idx: int) -> np.ndarray:
    f = 1 << (grid.J - k)
    s = grid.cubes_per_axis(k)
    if grid.n == 1:
        start = cube_flat_idx * f
        return np.arange(start, start + f)
    ci, cj = divmod(cube_flat_idx, s)
    rows = np.arange(ci * f, (ci + 1) * f)
    cols = np.arange(cj * f, (cj + 1) * f)
    return (rows[:, None] * grid.cells_per_axis + cols[None, :]).ravel()


def restricted_norm(lam: CoeffField, w: WeightSequence, q: float,
                    E: RestrictionSets) -> float:
    """The p = inf norm with chi_Q replaced by chi_{E_Q}; <= f_inf_norm exactly."""
    _check_pair(lam, w)
    if E.grid != lam.grid:
        raise LevelMismatchError("restriction sets live on a different grid")
    grid = lam.grid
    summands = {
        k: _pointwise_summand(lam, w, k, q) * E.masks[k] for k in lam.levels
    }
    return _sup_cube_average(grid, summands, grid.k_max) ** (1.0 / q)


def restricted_sup_norm(lam: CoeffField, w: WeightSequence, q: float,
                        E: RestrictionSets) -> float:
    """L_inf variant: max over cells of the full (uncut) restricted sum, ^{1/q}."""
    _check_pair(lam, w)
    if E.grid != lam.grid:
        raise LevelMismatchError("restriction sets live on a different grid")
    grid = lam.grid
    body = np.zeros(grid.shape)
    for k in lam.levels:
        body += _pointwise_summand(lam, w, k, q) * E.masks[k]
    return float(body.max()) ** (1.0 / q)
