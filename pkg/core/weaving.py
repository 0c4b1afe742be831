# core/weaving.py

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_SETTINGS, Settings
from core.errors import DimensionMismatchError, NotAFusionFrameError, SubspaceMembershipError
from core.frames import (
    VectorFamily,
    WeightedFamily,
    fusion_bounds,
    fusion_frame_operator,
)
from core.numerics import Subspace, numerical_rank, operator_norm, orthonormalize, symmetric_spectrum
from core.patterns import SweepResult, WeavingPattern, map_patterns, sweep_operators


# -----------------------------
# Reports
# -----------------------------
@dataclass(frozen=True)
class WeavingReport:
    universal_lower: float
    universal_upper: float
    woven: bool
    argmin_pattern: WeavingPattern
    argmax_pattern: WeavingPattern
    alpha: float
    lemma_floor: float
    sharp_floor: float
    v_upper: float
    w_upper: float
    sampled: bool
    evaluated: int
    per_pattern_bounds: Optional[List[dict]] = None

    @property
    def status(self) -> str:
        return "sampled" if self.sampled else "exhaustive"

    @property
    def lemma_floor_holds(self) -> bool:
        return self.universal_lower >= self.lemma_floor - 1e-9

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "patterns_evaluated": self.evaluated,
            "universal_lower": self.universal_lower,
            "universal_upper": self.universal_upper,
            "woven": self.woven,
            "argmin_pattern": self.argmin_pattern.to_dict(),
            "argmax_pattern": self.argmax_pattern.to_dict(),
            "alpha": self.alpha,
            "lemma_floor": self.lemma_floor,
            "lemma_floor_holds": self.lemma_floor_holds,
            "sharp_floor": self.sharp_floor,
            "v_upper": self.v_upper,
            "w_upper": self.w_upper,
        }
        if self.per_pattern_bounds is not None:
            out["per_pattern_bounds"] = self.per_pattern_bounds
        return out


@dataclass(frozen=True)
class RieszPatternBounds:
    pattern: WeavingPattern
    lower: float
    upper: float
    column_count: int
    rank: int
    spectrum_gap: float

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern.bitstring(),
            "lower": self.lower,
            "upper": self.upper,
            "column_count": self.column_count,
            "rank": self.rank,
            "spectrum_gap": self.spectrum_gap,
        }


@dataclass(frozen=True)
class RieszReport:
    universal_lower: float
    universal_upper: float
    is_riesz_weaving: bool
    ambient_dim: int
    sampled: bool
    column_counts: List[int]
    ranks: List[int]
    max_spectrum_gap: float
    failing_pattern: Optional[WeavingPattern] = None
    failure_reason: Optional[str] = None
    per_pattern: Optional[List[RieszPatternBounds]] = None

    def to_dict(self) -> dict:
        out = {
            "status": "sampled" if self.sampled else "exhaustive",
            "universal_lower": self.universal_lower,
            "universal_upper": self.universal_upper,
            "is_riesz_weaving": self.is_riesz_weaving,
            "ambient_dim": self.ambient_dim,
            "column_count_range": [min(self.column_counts), max(self.column_counts)],
            "rank_range": [min(self.ranks), max(self.ranks)],
            "max_spectrum_gap": self.max_spectrum_gap,
            "failing_pattern": self.failing_pattern.to_dict() if self.failing_pattern else None,
            "failure_reason": self.failure_reason,
        }
        if self.per_pattern is not None:
            out["per_pattern"] = [p.to_dict() for p in self.per_pattern]
        return out


@dataclass(frozen=True)
class SynthesisNormCheck:
    """Operator identities for the weaving synthesis operator, maximized over patterns."""

    universal_upper: float
    max_identity_gap: float  # | ||T||^2 - lambda_max(S) |
    max_norm_excess: float  # ||T|| - 2 sqrt(B_VW)

    @property
    def holds(self) -> bool:
        return self.max_identity_gap <= 1e-9 and self.max_norm_excess <= 1e-9

    def to_dict(self) -> dict:
        return {
            "universal_upper": self.universal_upper,
            "max_identity_gap": self.max_identity_gap,
            "max_norm_excess": self.max_norm_excess,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class DirectSumComplement:
    inner_projection: np.ndarray
    complement: np.ndarray
    residual: float
    idempotence_error: float


# -----------------------------
# Helpers
# -----------------------------
def check_compatible(v: WeightedFamily, w: WeightedFamily) -> None:
    if v.size != w.size:
        raise DimensionMismatchError(f"families have {v.size} and {w.size} members")
    if v.ambient_dim != w.ambient_dim:
        raise DimensionMismatchError(f"families live in R^{v.ambient_dim} and R^{w.ambient_dim}")


def _check_pattern(pattern: WeavingPattern, size: int) -> None:
    if pattern.size != size:
        raise DimensionMismatchError(f"pattern over {pattern.size} indices for families of size {size}")


def woven_selection(v: WeightedFamily, w: WeightedFamily, pattern: WeavingPattern) -> WeightedFamily:
    """{(V_i, v_i)}_{i in sigma} together with {(W_i, w_i)}_{i not in sigma}, in index order."""
    check_compatible(v, w)
    _check_pattern(pattern, v.size)
    members = [v[i] if pattern.takes_v(i) else w[i] for i in range(v.size)]
    return WeightedFamily(members, ambient_dim=v.ambient_dim)


def _report_from_sweep(sweep: SweepResult, v_upper: float, w_upper: float, settings: Settings) -> WeavingReport:
    denom = v_upper ** 2 + w_upper ** 2
    lemma_floor = sweep.alpha ** 2 / denom if denom > 0 else 0.0
    sharp_floor = sweep.alpha ** 2 / sweep.upper if sweep.upper > 0 else 0.0
    woven = (not sweep.sampled) and sweep.lower > settings.frame_threshold(sweep.upper)
    return WeavingReport(
        universal_lower=sweep.lower,
        universal_upper=sweep.upper,
        woven=woven,
        argmin_pattern=sweep.argmin,
        argmax_pattern=sweep.argmax,
        alpha=sweep.alpha,
        lemma_floor=lemma_floor,
        sharp_floor=sharp_floor,
        v_upper=v_upper,
        w_upper=w_upper,
        sampled=sweep.sampled,
        evaluated=sweep.evaluated,
        per_pattern_bounds=sweep.table,
    )


def _wants_table(size: int, settings: Settings, per_pattern: Optional[bool]) -> bool:
    if per_pattern is None:
        return size < settings.per_pattern_limit
    return per_pattern


# -----------------------------
# Woven operators
# -----------------------------
def woven_operator(v: WeightedFamily, w: WeightedFamily, pattern: WeavingPattern) -> np.ndarray:
    """S_sigma = sum_{i in sigma} v_i^2 P_Vi + sum_{i not in sigma} w_i^2 P_Wi."""
    return fusion_frame_operator(woven_selection(v, w, pattern))


def woven_synthesis_matrix(v: WeightedFamily, w: WeightedFamily, pattern: WeavingPattern) -> np.ndarray:
    """T_sigma: block i is weight_i times the orthonormal basis of the selected subspace."""
    selected = woven_selection(v, w, pattern)
    blocks = [weight * s.basis for s, weight in selected]
    if not blocks:
        return np.zeros((v.ambient_dim, 0))
    return np.hstack(blocks)


def universal_weaving_bounds(
    v: WeightedFamily,
    w: WeightedFamily,
    settings: Settings = DEFAULT_SETTINGS,
    per_pattern: Optional[bool] = None,
) -> WeavingReport:
    """Universal bounds min/max over every sigma of the extremal eigenvalues of S_sigma."""
    check_compatible(v, w)
    sweep = sweep_operators(
        v.weighted_projections(),
        w.weighted_projections(),
        settings,
        keep_table=_wants_table(v.size, settings, per_pattern),
    )
    v_upper = fusion_bounds(v, settings.frame_tol).upper
    w_upper = fusion_bounds(w, settings.frame_tol).upper
    return _report_from_sweep(sweep, v_upper, w_upper, settings)


def is_woven(
    v: WeightedFamily,
    w: WeightedFamily,
    tol: Optional[float] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> Tuple[bool, WeavingReport]:
    if tol is not None:
        settings = settings.with_overrides(frame_tol=tol)
    report = universal_weaving_bounds(v, w, settings)
    return report.woven, report


def weaving_bessel_bound(v: WeightedFamily, w: WeightedFamily, settings: Settings = DEFAULT_SETTINGS) -> float:
    """Every weaving of two finite families is Bessel; the universal Bessel bound."""
    return universal_weaving_bounds(v, w, settings, per_pattern=False).universal_upper


def weaving_frame_bounds(
    f: VectorFamily,
    g: VectorFamily,
    v_weights: Optional[Sequence[float]] = None,
    w_weights: Optional[Sequence[float]] = None,
    settings: Settings = DEFAULT_SETTINGS,
    per_pattern: Optional[bool] = None,
) -> WeavingReport:
    """
    Classical weaving of {v_i f_ij} and {w_i g_ij}: extremal eigenvalues of
    sum_{i in sigma, j} v_i^2 f_ij f_ij^T + sum_{i not in sigma, j} w_i^2 g_ij g_ij^T.
    """
    if f.size != g.size:
        raise DimensionMismatchError(f"vector families have {f.size} and {g.size} indices")
    if f.ambient_dim != g.ambient_dim:
        raise DimensionMismatchError(f"vector families live in R^{f.ambient_dim} and R^{g.ambient_dim}")
    f_ops = f.local_operators(v_weights)
    g_ops = g.local_operators(w_weights)
    sweep = sweep_operators(f_ops, g_ops, settings, keep_table=_wants_table(f.size, settings, per_pattern))
    f_upper = max(0.0, symmetric_spectrum(np.sum(f_ops, axis=0)).largest)
    g_upper = max(0.0, symmetric_spectrum(np.sum(g_ops, axis=0)).largest)
    return _report_from_sweep(sweep, f_upper, g_upper, settings)


def operator_lower_bound(
    v: WeightedFamily, w: WeightedFamily, settings: Settings = DEFAULT_SETTINGS
) -> Tuple[float, float]:
    """
    alpha = min over sigma of min ||S_sigma f|| / ||f|| (smallest singular value),
    and the floor alpha^2 / (B^2 + D^2) built from the upper bounds of V and W.
    """
    check_compatible(v, w)
    for name, family in (("V", v), ("W", w)):
        bounds = fusion_bounds(family, settings.frame_tol)
        if not bounds.is_frame:
            raise NotAFusionFrameError(f"{name} is not a fusion frame (lower bound {bounds.lower:.3e})")
    report = universal_weaving_bounds(v, w, settings, per_pattern=False)
    return report.alpha, report.lemma_floor


# -----------------------------
# Operator-norm identities
# -----------------------------
def synthesis_norm_check(
    v: WeightedFamily, w: WeightedFamily, settings: Settings = DEFAULT_SETTINGS
) -> SynthesisNormCheck:
    upper = universal_weaving_bounds(v, w, settings, per_pattern=False).universal_upper
    bound = 2.0 * float(np.sqrt(upper))

    def measure(pattern: WeavingPattern) -> Tuple[float, float]:
        t_norm = operator_norm(woven_synthesis_matrix(v, w, pattern))
        lam_max = max(0.0, symmetric_spectrum(woven_operator(v, w, pattern)).largest)
        return abs(t_norm ** 2 - lam_max), t_norm - bound

    measured = map_patterns(measure, v.size, settings)
    return SynthesisNormCheck(
        universal_upper=upper,
        max_identity_gap=max(gap for gap, _ in measured),
        max_norm_excess=max(excess for _, excess in measured),
    )


# -----------------------------
# Riesz weavings
# -----------------------------
def _nonzero_spectrum_gap(t: np.ndarray, rank: int) -> float:
    if rank == 0:
        return 0.0
    gram = symmetric_spectrum(t.T @ t).eigenvalues[::-1][:rank]
    frame = symmetric_spectrum(t @ t.T).eigenvalues[::-1][:rank]
    return float(np.max(np.abs(gram - frame)))


def riesz_pattern_bounds(
    v: WeightedFamily,
    w: WeightedFamily,
    pattern: WeavingPattern,
    settings: Settings = DEFAULT_SETTINGS,
) -> RieszPatternBounds:
    """Extremal eigenvalues of T^T T on the woven direct sum, plus column count and rank of T."""
    t = woven_synthesis_matrix(v, w, pattern)
    columns = t.shape[1]
    if columns == 0:
        return RieszPatternBounds(pattern, 0.0, 0.0, 0, 0, 0.0)
    values = symmetric_spectrum(t.T @ t).eigenvalues
    rank = numerical_rank(t, settings.rank_tol)
    return RieszPatternBounds(
        pattern=pattern,
        lower=max(0.0, float(values[0])),
        upper=max(0.0, float(values[-1])),
        column_count=columns,
        rank=rank,
        spectrum_gap=_nonzero_spectrum_gap(t, rank),
    )


def is_woven_riesz(
    v: WeightedFamily,
    w: WeightedFamily,
    tol: Optional[float] = None,
    settings: Settings = DEFAULT_SETTINGS,
    per_pattern: Optional[bool] = None,
) -> Tuple[bool, RieszReport]:
    """
    Weaving fusion Riesz bases: for every sigma the restricted synthesis operator
    is onto (rank n) and bounded below (lower > tol), i.e. bijective.
    """
    check_compatible(v, w)
    if tol is not None:
        settings = settings.with_overrides(frame_tol=tol)
    n = v.ambient_dim
    results = map_patterns(lambda p: riesz_pattern_bounds(v, w, p, settings), v.size, settings)
    sampled = v.size > settings.pattern_cap

    lower = min(r.lower for r in results)
    upper = max(r.upper for r in results)
    threshold = settings.frame_threshold(upper)

    failing, reason = None, None
    for r in results:
        if r.column_count != n:
            failing, reason = r.pattern, f"dimension count: {r.column_count} columns for R^{n}"
        elif r.rank < n:
            failing, reason = r.pattern, f"not surjective: rank {r.rank} < {n}"
        elif r.lower <= threshold:
            failing, reason = r.pattern, f"not injective: lower bound {r.lower:.3e}"
        if failing is not None:
            break

    is_riesz = failing is None and not sampled
    keep = per_pattern if per_pattern is not None else v.size < settings.per_pattern_limit
    report = RieszReport(
        universal_lower=lower,
        universal_upper=upper,
        is_riesz_weaving=is_riesz,
        ambient_dim=n,
        sampled=sampled,
        column_counts=[r.column_count for r in results],
        ranks=[r.rank for r in results],
        max_spectrum_gap=max(r.spectrum_gap for r in results),
        failing_pattern=failing,
        failure_reason=reason,
        per_pattern=results if keep else None,
    )
    logging.info(f"riesz weaving check: {is_riesz} ({reason or 'every pattern bijective'})")
    return is_riesz, report


def is_orthonormal_weaving_basis(
    v: WeightedFamily, w: WeightedFamily, settings: Settings = DEFAULT_SETTINGS, tol: float = 1e-10
) -> bool:
    """Unit weights, orthogonal members within each family, woven projections summing to I for every sigma."""
    check_compatible(v, w)
    for family in (v, w):
        if not np.allclose(family.weights, 1.0, rtol=0, atol=tol):
            return False
        subspaces = family.subspaces
        for i in range(len(subspaces)):
            for j in range(i + 1, len(subspaces)):
                if np.linalg.norm(subspaces[i].basis.T @ subspaces[j].basis) > tol:
                    return False
    report = universal_weaving_bounds(v, w, settings, per_pattern=False)
    return (not report.sampled) and abs(report.universal_lower - 1) <= tol and abs(report.universal_upper - 1) <= tol


# -----------------------------
# Direct sums
# -----------------------------
def _block_diagonal(blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = blocks[0].shape[0]
    out = np.zeros((n * len(blocks), n * len(blocks)))
    for i, b in enumerate(blocks):
        out[i * n:(i + 1) * n, i * n:(i + 1) * n] = b
    return out


def _embedded_columns(subspaces: Sequence[Subspace]) -> List[np.ndarray]:
    """Basis columns of each subspace placed in its own block of R^(n m)."""
    n, m = subspaces[0].ambient_dim, len(subspaces)
    columns = []
    for i, s in enumerate(subspaces):
        for col in s.basis.T:
            v = np.zeros(n * m)
            v[i * n:(i + 1) * n] = col
            columns.append(v)
    return columns


def direct_sum_complement(
    outer: Sequence[Subspace], inner: Sequence[Subspace], tol: float = 1e-10, strict: bool = True
) -> DirectSumComplement:
    """
    For inner_i contained in outer_i, the orthogonal complement of the direct sum
    of the inner_i inside the direct sum of the outer_i, as a projection on the
    sum of m copies of R^n.

    The complement is built from the sum spaces themselves: the outer-sum basis
    with the inner sum projected out, re-orthonormalized. residual compares it
    with the blockwise P_outer_i - P_inner_i, which only agree when every
    inner_i is nested in outer_i. strict=False skips the nesting check.
    """
    if len(outer) != len(inner) or not outer:
        raise DimensionMismatchError(f"need matching non-empty lists, got {len(outer)} and {len(inner)}")
    n = outer[0].ambient_dim
    for i, (o, s) in enumerate(zip(outer, inner)):
        if o.ambient_dim != n or s.ambient_dim != n:
            raise DimensionMismatchError(f"subspaces at index {i} live in different ambient spaces")
        if strict and not o.contains(s, tol):
            raise SubspaceMembershipError(f"inner subspace {i} is not contained in outer subspace {i}")

    big = n * len(outer)
    inner_sum = orthonormalize(_embedded_columns(inner), tol, ambient_dim=big)
    outer_columns = _embedded_columns(outer)
    remainder = [q - inner_sum.project(q) for q in outer_columns]
    complement = orthonormalize(remainder, tol, ambient_dim=big).projection

    expected = _block_diagonal([o.projection - s.projection for o, s in zip(outer, inner)])
    return DirectSumComplement(
        inner_projection=inner_sum.projection,
        complement=complement,
        residual=float(np.linalg.norm(complement - expected)),
        idempotence_error=float(np.linalg.norm(expected @ expected - expected)),
    )
