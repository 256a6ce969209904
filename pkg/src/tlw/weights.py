"""Weight sequences, cube means, Muckenhoupt constants, and inter-level class audits.

A weight sequence is one strictly positive grid function per level k in the
grid's level range.  The audits compute, over a finite dyadic cube family,
the sharpest constants for

    M_{Q,p}(t_k) * M_{Q,s1}(t_j^{-1})   <= C1 * 2^{a1 (k-j)}     (k <= j)
    M_{Q,s2}(t_j) / M_{Q,p}(t_k)        <= C2 * 2^{a2 (j-k)}     (k <= j)

together with worst-case witnesses, and per-cube Muckenhoupt products.  All
suprema over finite families are lower bounds of the true (all-cubes)
constants and are labelled as such in reports.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .dyadic import DyadicCube, Grid, GridFunction, cube_means, cubes_at_level
from .errors import (
    LevelMismatchError,
    LevelRangeError,
    PositivityError,
    ResolutionError,
)

INF = math.inf


@dataclass(frozen=True)
class WeightMeta:
    """Declared class data of a weight sequence (admissibility + inter-level exponents)."""

    p: float
    alpha1: float | None = None
    alpha2: float | None = None
    sigma1: float | None = None
    sigma2: float | None = None
    kind: str = "grid"
    params: dict = field(default_factory=dict)


class WeightSequence:
    """Family {t_k}, one strictly positive GridFunction per level of the grid."""

    def __init__(self, grid: Grid, tk: dict[int, np.ndarray], meta: WeightMeta | None = None):
        self.grid = grid
        self.meta = meta if meta is not None else WeightMeta(p=1.0)
        self.tk = {}
        for k in grid.levels:
            if k not in tk:
                raise LevelMismatchError(f"missing weight for level {k}")
            a = np.asarray(tk[k], dtype=float)
            if a.shape != grid.shape:
                raise LevelMismatchError(f"t_{k} has shape {a.shape}, grid is {grid.shape}")
            if not np.all(a > 0):
                raise PositivityError(f"t_{k} has a nonpositive cell")
            self.tk[k] = a

    @property
    def levels(self) -> range:
        return self.grid.levels

    def level_values(self, k: int) -> np.ndarray:
        try:
            return self.tk[k]
        except KeyError:
            raise LevelRangeError(f"level {k} outside weight range {list(self.levels)}")

    def as_grid_function(self, k: int) -> GridFunction:
        return GridFunction(self.grid, self.level_values(k))

    def reciprocal(self) -> "WeightSequence":
        meta = WeightMeta(
            p=self.meta.p,
            kind=f"reciprocal({self.meta.kind})",
            params=dict(self.meta.params),
        )
        return WeightSequence(self.grid, {k: 1.0 / v for k, v in self.tk.items()}, meta)

    def scaled(self, factors: dict[int, float]) -> "WeightSequence":
        """Multiply each level by a positive scalar (e.g. 2^{-nk} for conjugate norms)."""
        return WeightSequence(
            self.grid,
            {k: self.tk[k] * float(factors[k]) for k in self.levels},
            WeightMeta(p=self.meta.p, kind=f"scaled({self.meta.kind})"),
        )

    def shifted(self, gamma: int, levels: range | None = None) -> "WeightSequence":
        """Weight sequence k -> t_{k-gamma} over `levels` (default: own levels).

        Raises if any source level k-gamma is not stored.
        """
        levels = self.levels if levels is None else levels
        out = {}
        for k in levels:
            src = k - gamma
            if src not in self.tk:
                raise LevelRangeError(
                    f"shift {gamma} needs level {src}, stored range is {list(self.levels)}"
                )
            out[k] = self.tk[src]
        grid = self.grid.with_levels(levels.start, levels.stop - 1)
        return WeightSequence(grid, out, self.meta)


def exp2_weights(grid: Grid, s: float, omega: np.ndarray | None = None,
                 p: float = 2.0) -> WeightSequence:
    """t_k = 2^{ks} * omega with a fixed positive profile omega (default 1)."""
    base = np.ones(grid.shape) if omega is None else np.asarray(omega, dtype=float)
    tk = {k: (2.0 ** (k * s)) * base for k in grid.levels}
    meta = WeightMeta(p=p, alpha1=s, alpha2=s, kind="exp2", params={"s": s})
    return WeightSequence(grid, tk, meta)


def power_profile(grid: Grid, alpha: float) -> np.ndarray:
    """|x|^alpha sampled at cell centers (strictly positive on the grid)."""
    axes = [grid.cell_centers() for _ in range(grid.n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    r = np.sqrt(sum(m * m for m in mesh))
    return r**alpha


def random_ap_weights(grid: Grid, spread: float, rng: np.random.Generator,
                      p: float = 2.0) -> WeightSequence:
    """Independent log-uniform weights per level, values in [e^-spread, e^spread]."""
    tk = {
        k: np.exp(rng.uniform(-spread, spread, size=grid.shape)) for k in grid.levels
    }
    return WeightSequence(grid, tk, WeightMeta(p=p, kind="random-ap", params={"spread": spread}))


@dataclass(frozen=True)
class CellWindow:
    """An exact cell-union cube not on the standard dyadic lattice (shifted audits)."""

    level: int
    start_cells: tuple[int, ...]
    size_cells: int

    @property
    def n(self) -> int:
        return len(self.start_cells)

    @property
    def index(self) -> tuple[int, ...]:
        return self.start_cells


def window_slices(grid: Grid, cube) -> tuple[slice, ...]:
    if isinstance(cube, CellWindow):
        return tuple(slice(s, s + cube.size_cells) for s in cube.start_cells)
    return grid.cube_slices(cube)


def cube_mean_p(t: GridFunction, cube, p: float) -> float:
    """M_{Q,p}(t) = ((1/|Q|) int_Q |t|^p)^{1/p}; p = inf gives the max over cells."""
    vals = np.abs(t.values[window_slices(t.grid, cube)])
    if p == INF:
        return float(vals.max())
    if p <= 0:
        raise LevelRangeError(f"exponent p must be positive or inf, got {p}")
    return float(np.mean(vals**p) ** (1.0 / p))


def _level_means_p(grid: Grid, cells: np.ndarray, k: int, p: float) -> np.ndarray:
    """M_{Q,p} over all level-k cubes at once (per-cube array)."""
    if p == INF:
        s = grid.cubes_per_axis(k)
        f = 1 << (grid.J - k)
        if grid.n == 1:
            return cells.reshape(s, f).max(axis=1)
        return cells.reshape(s, f, s, f).max(axis=(1, 3))
    return cube_means(grid, k, cells**p) ** (1.0 / p)


@dataclass
class ApReport:
    """Muckenhoupt audit over a finite cube family (a lower bound of the true constant)."""

    p: float
    constant: float
    argmax_cube: DyadicCube
    lower_bound_only: bool = True
    per_cube: list[tuple[DyadicCube, float]] | None = None

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "constant": self.constant,
            "argmax_cube": [self.argmax_cube.level, list(self.argmax_cube.index)],
            "lower_bound_only": self.lower_bound_only,
        }
        if self.per_cube is not None:
            out["per_cube"] = [
                {"cube": [c.level, list(c.index)], "value": v} for c, v in self.per_cube
            ]
        return out


def per_cube_ap_value(gamma: GridFunction, p: float, cube) -> float:
    """The single-cube Muckenhoupt product for gamma at exponent p."""
    if np.any(gamma.values <= 0):
        raise PositivityError("weight has a nonpositive cell")
    if p < 1:
        raise LevelRangeError(f"Muckenhoupt exponent must be >= 1, got {p}")
    inv = GridFunction(gamma.grid, 1.0 / gamma.values)
    mean = cube_mean_p(gamma, cube, 1.0)
    if p == 1:
        return mean * cube_mean_p(inv, cube, INF)
    pp = p / (p - 1.0)
    return mean * cube_mean_p(inv, cube, pp / p)


def ap_constant(gamma: GridFunction, p: float, family: list,
                keep_per_cube: bool = False) -> ApReport:
    """Supremum of per-cube Muckenhoupt products over the audited family."""
    if not family:
        raise ValueError("cube family is empty")
    best, best_cube = -np.inf, None
    per_cube = [] if keep_per_cube else None
    for cube in family:
        v = per_cube_ap_value(gamma, p, cube)
        if keep_per_cube:
            per_cube.append((cube, v))
        if v > best:
            best, best_cube = v, cube
    return ApReport(p=p, constant=best, argmax_cube=best_cube, per_cube=per_cube)


def ap_duality_identity(gamma: GridFunction, p: float, cube) -> tuple[float, float]:
    """Per-cube check of gamma in A_p  <->  gamma^{1-p'} in A_{p'}.

    Returns (a, b): a is the A_{p'} product of gamma^{1-p'} on the cube, b is
    the A_p product of gamma raised to p'-1.  They agree identically.
    """
    if p <= 1:
        raise LevelRangeError("duality identity needs p > 1")
    pp = p / (p - 1.0)
    dual = GridFunction(gamma.grid, gamma.values ** (1.0 - pp))
    a = per_cube_ap_value(dual, pp, cube)
    b = per_cube_ap_value(gamma, p, cube) ** (pp - 1.0)
    return a, b


def audit_family(grid: Grid, levels: range | None = None, shifted: bool = False) -> list:
    """Default audited family: every dyadic cube with level in [-L, J].

    With `shifted`, the 2^n one-third-shifted lattices (snapped to finest
    cells, in-domain windows only) are appended for sharper constants.
    """
    levels = range(-grid.L, grid.J + 1) if levels is None else levels
    fam: list = []
    for k in levels:
        fam.extend(cubes_at_level(grid, k))
    if shifted:
        for k in levels:
            if k >= grid.J:
                continue
            f = 1 << (grid.J - k)
            off = f // 3
            if off == 0:
                continue
            starts = range(off, grid.cells_per_axis - f + 1, f)
            for pos in itertools.product(starts, repeat=grid.n):
                fam.append(CellWindow(level=k, start_cells=pos, size_cells=f))
    return fam


@dataclass
class XClassWitness:
    k: int
    j: int
    cube: DyadicCube
    value: float

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "j": self.j,
            "cube": [self.cube.level, list(self.cube.index)],
            "value": self.value,
        }


@dataclass
class XClassReport:
    """Sharpest constants validating the two inter-level conditions, with witnesses."""

    C1: float
    C2: float
    witness1: XClassWitness
    witness2: XClassWitness
    lag_profile1: dict[int, float]
    lag_profile2: dict[int, float]

    def growth_rate(self, which: int = 1) -> float:
        """Fitted log2-slope of the worst candidate value per lag j-k.

        Near 0 for a bounded family; close to e (candidates ~ 2^{e*(j-k)})
        when the declared alpha is off by e.  Zero when only one lag exists.
        """
        prof = self.lag_profile1 if which == 1 else self.lag_profile2
        lags = sorted(prof)
        if len(lags) < 2:
            return 0.0
        x = np.array(lags, dtype=float)
        y = np.log2([prof[g] for g in lags])
        return float(np.polyfit(x, y, 1)[0])

    def validates(self, bound: float = np.inf, growth_tol: float = 0.05) -> bool:
        return (
            self.C1 <= bound
            and self.C2 <= bound
            and abs(self.growth_rate(1)) <= growth_tol
            and abs(self.growth_rate(2)) <= growth_tol
        )

    def to_json(self) -> dict:
        return {
            "C1": self.C1,
            "C2": self.C2,
            "witness1": self.witness1.to_json(),
            "witness2": self.witness2.to_json(),
            "lag_profile1": {str(k): v for k, v in sorted(self.lag_profile1.items())},
            "lag_profile2": {str(k): v for k, v in sorted(self.lag_profile2.items())},
            "growth_rate1": self.growth_rate(1),
            "growth_rate2": self.growth_rate(2),
        }


def verify_x_class(w: WeightSequence, alpha1: float, alpha2: float,
                   sigma1: float, sigma2: float, p: float,
                   family_levels: range | None = None) -> XClassReport:
    """Audit the two inter-level cube-mean conditions over all k <= j and all cubes.

    Candidate values are the left-hand sides divided by the declared decay
    2^{alpha(k-j)}; the report carries their suprema (the smallest admissible
    C1, C2 over the audited family) and the worst (k, j, Q) triples.
    """
    if sigma1 <= 0 or sigma2 <= 0 or p <= 0:
        raise LevelRangeError("exponents must be positive")
    grid = w.grid
    levels = list(w.levels)
    fam_levels = range(-grid.L, grid.J + 1) if family_levels is None else family_levels

    tracker1 = _SupTracker()
    tracker2 = _SupTracker()
    for lev in fam_levels:
        means_p = {k: _level_means_p(grid, w.tk[k], lev, p) for k in levels}
        means_s1_inv = {k: _level_means_p(grid, 1.0 / w.tk[k], lev, sigma1) for k in levels}
        means_s2 = {k: _level_means_p(grid, w.tk[k], lev, sigma2) for k in levels}
        for k in levels:
            for j in levels:
                if j < k:
                    continue
                c1 = means_p[k] * means_s1_inv[j] * 2.0 ** (-alpha1 * (k - j))
                c2 = means_s2[j] / means_p[k] * 2.0 ** (-alpha2 * (j - k))
                tracker1.update(grid, lev, k, j, c1)
                tracker2.update(grid, lev, k, j, c2)
    return XClassReport(
        C1=tracker1.best, C2=tracker2.best,
        witness1=tracker1.witness, witness2=tracker2.witness,
        lag_profile1=tracker1.lag_profile, lag_profile2=tracker2.lag_profile,
    )


class _SupTracker:
    def __init__(self):
        self.best = -np.inf
        self.witness: XClassWitness | None = None
        self.lag_profile: dict[int, float] = {}

    def update(self, grid: Grid, lev: int, k: int, j: int, cand: np.ndarray):
        flat = int(np.argmax(cand))
        val = float(cand.flat[flat])
        lag = j - k
        self.lag_profile[lag] = max(self.lag_profile.get(lag, -np.inf), val)
        if val > self.best:
            idx = np.unravel_index(flat, cand.shape)
            self.best = val
            self.witness = XClassWitness(k, j, DyadicCube(lev, tuple(int(i) for i in idx)), val)


def alpha_consistency(report: XClassReport, alpha1: float, alpha2: float,
                      sigma1: float, sigma2: float, p: float,
                      growth_tol: float = 0.05) -> bool:
    """Check alpha2 >= alpha1 under the remark's hypotheses on (sigma1, sigma2).

    sigma1 = theta*(p/theta)' is solvable for theta = (1/sigma1 + 1/p)^{-1}
    whenever sigma1 > 0, so the binding hypotheses are sigma2 >= p and a
    validated report.  Raises on unmet hypotheses instead of returning a verdict.
    """
    if sigma1 <= 0:
        raise LevelRangeError("sigma1 must be positive")
    if not sigma2 >= p:
        raise LevelRangeError(f"hypothesis sigma2 >= p violated ({sigma2} < {p})")
    if not report.validates(growth_tol=growth_tol):
        raise LevelRangeError("report does not validate both conditions; remark not applicable")
    return alpha2 >= alpha1


def subset_mean_bound(gamma: GridFunction, p: float, cube: DyadicCube,
                      subset_mask: np.ndarray, constant: float) -> tuple[float, float]:
    """Left and right side of (|E|/|Q|)^{p-1} M_Q(gamma) <= C * M_E(gamma).

    `subset_mask` is a boolean cell mask of E restricted to the cube's slices.
    """
    grid = gamma.grid
    vals = gamma.values[grid.cube_slices(cube)]
    mask = np.asarray(subset_mask, dtype=bool)
    if mask.shape != vals.shape:
        raise LevelMismatchError("subset mask shape does not match the cube")
    if not mask.any():
        raise ValueError("subset is empty")
    frac = mask.sum() / mask.size
    lhs = frac ** (p - 1.0) * float(vals.mean())
    rhs = constant * float(vals[mask].mean())
    return lhs, rhs


def fit_subset_decay(gamma: GridFunction, cube: DyadicCube,
                     depth: int = 4) -> tuple[float, float]:
    """Least-squares (C, delta) in M_S(gamma)/M_Q(gamma) <= C (|S|/|Q|)^{delta-1}.

    Scans the dyadic subcubes of `cube` down `depth` levels, keeps the worst
    mean ratio per subcube volume, and fits slope/intercept on log-log data.
    Fitted, never asserted against paper values.
    """
    base_mean = cube_mean_p(gamma, cube, 1.0)
    worst: dict[int, float] = {}
    stack = [cube]
    for _ in range(depth):
        stack = [ch for c in stack for ch in c.children() if ch.level <= gamma.grid.J]
        if not stack:
            break
        for c in stack:
            d = c.level - cube.level
            ratio = cube_mean_p(gamma, c, 1.0) / base_mean
            worst[d] = max(worst.get(d, -np.inf), ratio)
    if len(worst) < 2:
        raise ResolutionError("not enough nesting depth to fit the decay exponent")
    xs = np.array([-d * gamma.grid.n for d in sorted(worst)], dtype=float)  # log2 |S|/|Q|
    ys = np.log2([worst[d] for d in sorted(worst)])
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(2.0**intercept), float(slope + 1.0)
