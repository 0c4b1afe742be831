# core/lifting.py

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_SETTINGS, Settings
from core.errors import DimensionMismatchError, HypothesisViolationError, SubspaceMembershipError
from core.frames import VectorFamily, WeightedFamily
from core.numerics import Subspace, as_vector, symmetric_spectrum
from core.weaving import WeavingReport, check_compatible, universal_weaving_bounds, weaving_frame_bounds

SANDWICH_TOL = 1e-9


def local_frame_bounds(s: Subspace, vectors: Sequence, tol: float = 1e-10) -> Tuple[float, float]:
    """
    Frame bounds of vectors as a frame for s, computed in the k-dimensional basis
    coordinates (spectrum of sum_j (U^T f_j)(U^T f_j)^T) so the directions
    orthogonal to s do not show up as zero eigenvalues.
    """
    vectors = [as_vector(v, s.ambient_dim, f"local vector {j}") for j, v in enumerate(vectors)]
    for j, v in enumerate(vectors):
        residual = s.residual(v)
        if residual > tol * max(1.0, float(np.linalg.norm(v))):
            raise SubspaceMembershipError(f"local vector {j} is off its subspace (residual {residual:.3e})")
    if not vectors or s.dim == 0:
        return 0.0, 0.0
    coords = np.array(vectors) @ s.basis
    values = symmetric_spectrum(coords.T @ coords).eigenvalues
    return max(0.0, float(values[0])), max(0.0, float(values[-1]))


class LocalFrameSystem:
    """
    A weighted family together with a local frame {f_ij} for every member.
    Vectors within tolerance of their subspace are projected onto it.
    """

    def __init__(self, base: WeightedFamily, local_vectors: Sequence[Sequence], tol: float = 1e-10):
        if len(local_vectors) != base.size:
            raise DimensionMismatchError(f"{len(local_vectors)} local frames for a family of size {base.size}")
        groups, bounds = [], []
        for i, ((s, _), vectors) in enumerate(zip(base, local_vectors)):
            try:
                lo, hi = local_frame_bounds(s, vectors, tol)
            except SubspaceMembershipError as e:
                raise SubspaceMembershipError(f"index {i}: {e}") from e
            groups.append([s.project(as_vector(v, s.ambient_dim)) for v in vectors])
            bounds.append((lo, hi))
        self.base = base
        self.local = VectorFamily(groups, base.ambient_dim)
        self.local_bounds: List[Tuple[float, float]] = bounds

    @classmethod
    def orthonormal(cls, base: WeightedFamily) -> "LocalFrameSystem":
        """Each member's own orthonormal basis as its local frame."""
        return cls(base, [s.basis.T.tolist() for s, _ in base])

    @property
    def size(self) -> int:
        return self.base.size

    def aggregate(self) -> Tuple[float, float]:
        """(inf A_i, sup B_i); the index set is finite so inf/sup are min/max."""
        if not self.local_bounds:
            return 0.0, 0.0
        return min(lo for lo, _ in self.local_bounds), max(hi for _, hi in self.local_bounds)

    def lifted(self) -> VectorFamily:
        """{w_i f_ij} in ambient coordinates."""
        weights = self.base.weights
        return VectorFamily([w * g for w, g in zip(weights, self.local.groups)], self.base.ambient_dim)


@dataclass(frozen=True)
class AggregateBounds:
    a: float
    b: float
    c: float
    d: float

    @property
    def alpha_agg(self) -> float:
        return min(self.a, self.c)

    @property
    def beta_agg(self) -> float:
        return max(self.b, self.d)

    def to_dict(self) -> dict:
        return {
            "A": self.a, "B": self.b, "C": self.c, "D": self.d,
            "alpha_agg": self.alpha_agg, "beta_agg": self.beta_agg,
        }


@dataclass(frozen=True)
class EquivalenceReport:
    aggregate: AggregateBounds
    fusion: WeavingReport
    lifted: WeavingReport
    woven_fusion: bool
    woven_vectors: bool
    lower_sandwich: bool  # alpha_agg * A_VW <= A_lifted
    upper_sandwich: bool  # B_lifted <= beta_agg * B_VW
    converse_lower: bool  # A_lifted / beta_agg <= A_VW
    converse_upper: bool  # B_VW <= B_lifted / alpha_agg
    near_threshold: bool = False  # A_VW inside the band where the sandwich cannot separate the flags

    @property
    def flags_agree(self) -> bool:
        return self.woven_fusion == self.woven_vectors

    @property
    def holds(self) -> bool:
        return (self.flags_agree or self.near_threshold) and self.lower_sandwich and self.upper_sandwich \
            and self.converse_lower and self.converse_upper

    def to_dict(self) -> dict:
        return {
            "aggregate": self.aggregate.to_dict(),
            "woven_fusion": self.woven_fusion,
            "woven_vectors": self.woven_vectors,
            "flags_agree": self.flags_agree,
            "near_threshold": self.near_threshold,
            "fusion_bounds": [self.fusion.universal_lower, self.fusion.universal_upper],
            "lifted_bounds": [self.lifted.universal_lower, self.lifted.universal_upper],
            "lower_sandwich": self.lower_sandwich,
            "upper_sandwich": self.upper_sandwich,
            "converse_lower": self.converse_lower,
            "converse_upper": self.converse_upper,
            "fusion_witness": self.fusion.argmin_pattern.to_dict(),
            "lifted_witness": self.lifted.argmin_pattern.to_dict(),
        }


def lift(v_system: LocalFrameSystem, w_system: LocalFrameSystem) -> Tuple[VectorFamily, VectorFamily]:
    """Global families {v_i f_ij} and {w_i g_ij}."""
    check_compatible(v_system.base, w_system.base)
    return v_system.lifted(), w_system.lifted()


def check_hypotheses(v_system: LocalFrameSystem, w_system: LocalFrameSystem, frame_tol: float) -> AggregateBounds:
    for name, system in (("V", v_system), ("W", w_system)):
        for i, (lo, hi) in enumerate(system.local_bounds):
            if lo <= frame_tol * max(1.0, hi):
                raise HypothesisViolationError(f"local system {name}[{i}] is not a frame for its subspace (A_i={lo:.3e})")
    a, b = v_system.aggregate()
    c, d = w_system.aggregate()
    return AggregateBounds(a, b, c, d)


def equivalence_check(
    v_system: LocalFrameSystem,
    w_system: LocalFrameSystem,
    tol: Optional[float] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> EquivalenceReport:
    """
    Weaving of the fusion frames vs weaving of the lifted vector families, with
    alpha_agg A_VW <= A_lifted and B_lifted <= beta_agg B_VW, and the converse
    A_lifted / beta_agg <= A_VW, B_VW <= B_lifted / alpha_agg.

    The lifted family counts as woven when A_lifted > alpha_agg * t, t being the
    fusion threshold. The flags may then differ only while
    alpha_agg / beta_agg * t < A_VW <= t, which is reported as near_threshold.
    """
    if tol is not None:
        settings = settings.with_overrides(frame_tol=tol)
    check_compatible(v_system.base, w_system.base)
    agg = check_hypotheses(v_system, w_system, settings.frame_tol)

    fusion = universal_weaving_bounds(v_system.base, w_system.base, settings, per_pattern=False)
    f, g = lift(v_system, w_system)
    lifted = weaving_frame_bounds(f, g, settings=settings, per_pattern=False)

    a_vw, b_vw = fusion.universal_lower, fusion.universal_upper
    a_l, b_l = lifted.universal_lower, lifted.universal_upper
    # the lifted lower bound is measured against the fusion threshold carried through
    # the sandwich, so both flags decide on the same scale
    threshold = settings.frame_threshold(b_vw)
    woven_vectors = bool((not lifted.sampled) and a_l > agg.alpha_agg * threshold)
    report = EquivalenceReport(
        aggregate=agg,
        fusion=fusion,
        lifted=lifted,
        woven_fusion=fusion.woven,
        woven_vectors=woven_vectors,
        lower_sandwich=agg.alpha_agg * a_vw <= a_l + SANDWICH_TOL,
        upper_sandwich=b_l <= agg.beta_agg * b_vw + SANDWICH_TOL,
        converse_lower=a_l / agg.beta_agg <= a_vw + SANDWICH_TOL,
        converse_upper=b_vw <= b_l / agg.alpha_agg + SANDWICH_TOL,
        near_threshold=bool(agg.alpha_agg / agg.beta_agg * threshold < a_vw <= threshold),
    )
    if not report.flags_agree and not report.near_threshold:
        logging.error(f"weaving flags disagree: fusion={fusion.woven} lifted={woven_vectors}")
    return report
