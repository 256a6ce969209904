"""Pairings, Hoelder sandwiches, the explicit extremal sequence, and the D_P field.

The dual-norm supremum is never optimized globally: it is lower-bounded by the
constructed extremal sequence (optionally tightened by seeded random search)
and upper-bounded by the Hoelder inequality, and both bounds are reported.
On the truncated lattice the pairing matrix is the identity, so the
"every functional arises this way" direction reduces to coordinate
round-tripping, which is exercised in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dyadic import DyadicCube, cube_means, cube_sums, expand_level_array
from .errors import LevelMismatchError, LevelRangeError, UndefinedRatioError
from .seqspace import (
    CoeffField,
    RestrictionSets,
    f_inf_norm,
    f_inf_norm_cubeavg,
    f_pq_norm,
    restricted_sup_norm,
)
from .weights import WeightSequence

INF = math.inf


def conjugate_exponent(p: float) -> float:
    if p <= 1:
        raise LevelRangeError(f"conjugate exponent needs p > 1, got {p}")
    return p / (p - 1.0)


def pairing(s: CoeffField, lam: CoeffField) -> complex:
    """sum_{k,m} s_{k,m} conj(lambda_{k,m}) over the shared lattice."""
    if s.grid != lam.grid:
        raise LevelMismatchError("fields live on different lattices")
    total = 0.0 + 0.0j
    for k in s.levels:
        total += np.vdot(lam.entries[k], s.entries[k])  # vdot conjugates its first argument
    return complex(total)


@dataclass
class DualityReport:
    pairing: complex
    lhs_norm: float
    rhs_norm: float
    hoelder_slack: float
    extremal_ratio: float | None
    p: float
    q: float
    factor: float = 1.0
    weight_kind: str = "grid"
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "weightSpec": self.weight_kind,
            "pairing": [self.pairing.real, self.pairing.imag],
            "lhsNorm": self.lhs_norm,
            "rhsNorm": self.rhs_norm,
            "slack": self.hoelder_slack,
            "extremalRatio": self.extremal_ratio,
            "factor": self.factor,
            "seed": self.seed,
        }


def hoelder_check_pq(s: CoeffField, lam: CoeffField, w: WeightSequence,
                     p: float, q: float) -> DualityReport:
    """|<s, lam>| <= ||s||_{p,q;t} * ||lam||_{p',q';1/t}; slack reported."""
    if not (1 < p < INF and 1 < q < INF):
        raise LevelRangeError("this check needs p, q strictly between 1 and inf")
    pair = pairing(s, lam)
    lhs = f_pq_norm(s, w, p, q)
    rhs = f_pq_norm(lam, w.reciprocal(), conjugate_exponent(p), conjugate_exponent(q))
    prod = lhs * rhs
    slack = prod - abs(pair)
    ratio = None if prod == 0.0 else abs(pair) / prod
    return DualityReport(pair, lhs, rhs, slack, ratio, p=p, q=q,
                         weight_kind=w.meta.kind)


def hoelder_check_1q(s: CoeffField, lam: CoeffField, w: WeightSequence, q: float,
                     E: RestrictionSets | None = None) -> DualityReport:
    """The p = 1 pairing bound through the restricted L_inf expression for lam.

    With the default E (quartile-functional level sets of lam against the
    reciprocal weights) every |E_Q| >= 3|Q|/4 and the licensed factor is 4/3;
    for a supplied sparser E the factor is 1/min-fraction and is reported.
    """
    if not 1 < q < INF:
        raise LevelRangeError("this check needs q strictly between 1 and inf")
    qq = conjugate_exponent(q)
    w_inv = w.reciprocal()
    if E is None:
        E = RestrictionSets.from_m_fun(lam, w_inv, qq)
    min_frac = E.min_fraction()
    factor = 4.0 / 3.0 if min_frac >= 0.75 else 1.0 / min_frac
    pair = pairing(s, lam)
    lhs = f_pq_norm(s, w, 1.0, q)
    rhs = restricted_sup_norm(lam, w_inv, qq, E)
    prod = factor * lhs * rhs
    slack = prod - abs(pair)
    ratio = None if prod == 0.0 else abs(pair) / prod
    return DualityReport(pair, lhs, rhs, slack, ratio, p=1.0, q=q, factor=factor,
                         weight_kind=w.meta.kind)


def _sgn(z: np.ndarray) -> np.ndarray:
    out = np.zeros_like(z)
    nz = z != 0
    out[nz] = z[nz] / np.abs(z[nz])
    return out


def _cube_integral_root(w: WeightSequence, k: int, exponent: float) -> np.ndarray:
    """(int_Q t_k^exponent)^{1/exponent} per level-k cube (may be negative exponent)."""
    grid = w.grid
    vals = cube_sums(grid, k, w.tk[k] ** exponent) * grid.cell_volume
    return vals ** (1.0 / exponent)


def extremal_sequence(lam: CoeffField, w: WeightSequence, q: float) -> CoeffField:
    """The explicit test sequence attaining the conjugate norm up to the A_q factor.

    s_{k,m} = t_{k,m,q}^{q-1} 2^{kn(1/2 + q/(2q'))} (tld_t_{k,m,q'})^{-1}
              |lam_{k,m}/N|^{q-1} sgn(lam_{k,m}),   N = ||lam|| in the p=inf norm.

    Its constraint norm is exactly 1 (the cube integrals cancel against the
    star norm's weights); measured deviation is recorded by callers anyway.
    """
    if not 1 < q < INF:
        raise LevelRangeError("extremal sequence needs q strictly between 1 and inf")
    norm = f_inf_norm(lam, w, q)
    if norm == 0.0:
        raise UndefinedRatioError("zero field; extremal normalization undefined")
    grid = lam.grid
    qq = conjugate_exponent(q)
    out = {}
    for k in lam.levels:
        t_q = _cube_integral_root(w, k, q)                     # t_{k,m,q}
        t_dual = _cube_integral_root(w.reciprocal(), k, qq)    # tilde t_{k,m,q'}
        u = np.abs(lam.entries[k]) / norm
        out[k] = (
            t_q ** (q - 1.0)
            * 2.0 ** (k * grid.n * (0.5 + q / (2.0 * qq)))
            / t_dual
            * u ** (q - 1.0)
            * _sgn(lam.entries[k])
        )
    return CoeffField(grid, out)


def star_constraint_norm(s: CoeffField, w: WeightSequence, q: float) -> float:
    """Constraint norm of a test sequence: the p = inf norm of s against the
    weights 2^{-nk} t_k^{-1} at exponent q', evaluated through the exact
    cube-average identity (matches the per-cube integral display verbatim)."""
    qq = conjugate_exponent(q)
    grid = s.grid
    w_star = w.reciprocal().scaled({k: 2.0 ** (-grid.n * k) for k in w.levels})
    return f_inf_norm_cubeavg(s, w_star, qq)


def localized_pairing(lam: CoeffField, s: CoeffField) -> float:
    """sup over dyadic P of |(1/|P|) int_P sum_{k >= k_P} sum_m lam s chi_{k,m}|."""
    if s.grid != lam.grid:
        raise LevelMismatchError("fields live on different lattices")
    grid = lam.grid
    summands = {
        k: expand_level_array(grid, k, lam.entries[k] * s.entries[k]) for k in lam.levels
    }
    acc = np.zeros(grid.shape, dtype=complex)
    suffix = {}
    for k in sorted(summands, reverse=True):
        acc = acc + summands[k]
        suffix[k] = acc
    k_min, k_max = min(summands), max(summands)
    best = 0.0
    for lev in range(-grid.L, grid.k_max + 1):
        if lev > k_max:
            continue
        tail = suffix[max(lev, k_min)]
        means = np.abs(cube_means(grid, lev, tail.real)
                       + 1j * cube_means(grid, lev, tail.imag))
        best = max(best, float(means.max()))
    return best


def conjugate_norm(lam: CoeffField, w: WeightSequence, q: float,
                   strategy: str = "extremal", trials: int = 32,
                   seed: int = 0) -> float:
    """Lower bound of the conjugate norm via the extremal sequence.

    "random-search" additionally samples seeded random test sequences,
    rescales each to unit constraint norm, and keeps the best pairing.
    """
    if strategy not in ("extremal", "random-search"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if lam.max_abs() == 0.0:
        return 0.0
    s = extremal_sequence(lam, w, q)
    c = star_constraint_norm(s, w, q)
    best = localized_pairing(lam, s.scale(1.0 / c))
    if strategy == "random-search":
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            cand = CoeffField.random(lam.grid, rng)
            cc = star_constraint_norm(cand, w, q)
            if cc == 0.0:
                continue
            best = max(best, localized_pairing(lam, cand.scale(1.0 / cc)))
    return best


def d_p_sequence(kappa: CoeffField, P: DyadicCube) -> CoeffField:
    """Averaged field D_P: |kappa_{k,h}| |Q_{k,h}|/|P| on subcubes of P, else 0."""
    grid = kappa.grid
    if not grid.contains_cube(P):
        raise LevelRangeError(f"cube {P} not inside the domain")
    out = {}
    for k in kappa.levels:
        new = np.zeros(grid.level_shape(k), dtype=complex)
        if k >= P.level:
            shift = k - P.level
            sl = tuple(slice(m << shift, (m + 1) << shift) for m in P.index)
            new[sl] = np.abs(kappa.entries[k][sl]) * 2.0 ** ((P.level - k) * grid.n)
        out[k] = new
    return CoeffField(grid, out)


def dp_claim_value(kappa: CoeffField, w: WeightSequence, q: float,
                   P: DyadicCube) -> float:
    """||D_P||_{f(1,q);t} for a kappa normalized to unit constraint norm."""
    return f_pq_norm(d_p_sequence(kappa, P), w, 1.0, q)


def kappa_constraint_norm(kappa: CoeffField, w: WeightSequence, q: float) -> float:
    """||kappa|| in the p = inf norm against the weights 2^{-nk} t_k (exponent q)."""
    grid = kappa.grid
    w_scaled = w.scaled({k: 2.0 ** (-grid.n * k) for k in w.levels})
    return f_inf_norm_cubeavg(kappa, w_scaled, q)


def aq_cube_consequence(w: WeightSequence, q: float, k: int) -> np.ndarray:
    """|Q|^{-1} t_{k,m,q} tilde_t_{k,m,q'} per level-k cube.

    Equals the per-cube A_q product of t_k^q to the power 1/q; always >= 1 and
    bounded by (audited A_q constant)^{1/q}."""
    qq = conjugate_exponent(q)
    grid = w.grid
    t_q = _cube_integral_root(w, k, q)
    t_dual = _cube_integral_root(w.reciprocal(), k, qq)
    return 2.0 ** (k * grid.n) * t_q * t_dual


def representability_roundtrip(lam: CoeffField) -> float:
    """Coordinate round-trip through the pairing: max |<e_{k,m}, lam> - conj(lam_{k,m})|.

    On the truncated lattice the pairing matrix is the identity, so the
    functional lam is recovered exactly from its coordinate evaluations.
    """
    worst = 0.0
    for k in lam.levels:
        arr = lam.entries[k]
        it = np.nditer(arr, flags=["multi_index"])
        for val in it:
            e = CoeffField.single(lam.grid, k, it.multi_index, 1.0)
            worst = max(worst, abs(pairing(e, lam) - np.conj(complex(val))))
    return worst
