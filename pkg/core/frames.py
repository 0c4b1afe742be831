# core/frames.py

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import DimensionMismatchError, NotAFusionFrameError
from core.numerics import (
    DEFAULT_RANK_TOL,
    Subspace,
    as_vector,
    frozen,
    orthonormalize,
    solve_spd,
    symmetric_spectrum,
)

DEFAULT_FRAME_TOL = 1e-8


# -----------------------------
# Families
# -----------------------------
class WeightedFamily:
    """
    Indexed family {(W_i, w_i)} of subspaces of R^n with strictly positive weights.
    Zero-weight members are expressed by leaving them out.
    """

    def __init__(self, members: Sequence[Tuple[Subspace, float]], ambient_dim: Optional[int] = None):
        members = list(members)
        if ambient_dim is None:
            if not members:
                raise DimensionMismatchError("ambient_dim is required for an empty family")
            ambient_dim = members[0][0].ambient_dim
        for i, (s, w) in enumerate(members):
            if s.ambient_dim != ambient_dim:
                raise DimensionMismatchError(f"subspace {i} lives in R^{s.ambient_dim}, expected R^{ambient_dim}")
            if not np.isfinite(w) or w <= 0:
                raise ValueError(f"weight must be positive and finite at index {i}, got {w}")
        self._subspaces = tuple(s for s, _ in members)
        self._weights = frozen([float(w) for _, w in members])
        self.ambient_dim = int(ambient_dim)

    @classmethod
    def from_spans(
        cls,
        spans: Sequence[Sequence],
        weights: Optional[Sequence[float]] = None,
        ambient_dim: Optional[int] = None,
        tol: float = DEFAULT_RANK_TOL,
    ) -> "WeightedFamily":
        """Build a family from spanning sets; weights default to 1."""
        weights = [1.0] * len(spans) if weights is None else list(weights)
        if len(weights) != len(spans):
            raise DimensionMismatchError(f"{len(spans)} spanning sets but {len(weights)} weights")
        if ambient_dim is None:
            ambient_dim = next((len(vs[0]) for vs in spans if len(vs)), None)
        subspaces = [orthonormalize(vs, tol=tol, ambient_dim=ambient_dim) for vs in spans]
        return cls(list(zip(subspaces, weights)), ambient_dim=ambient_dim)

    @property
    def size(self) -> int:
        return len(self._subspaces)

    @property
    def subspaces(self) -> Tuple[Subspace, ...]:
        return self._subspaces

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Tuple[Subspace, float]]:
        return iter(zip(self._subspaces, self._weights.tolist()))

    def __getitem__(self, i: int) -> Tuple[Subspace, float]:
        return self._subspaces[i], float(self._weights[i])

    def scaled(self, t: float) -> "WeightedFamily":
        return WeightedFamily([(s, w * t) for s, w in self], ambient_dim=self.ambient_dim)

    def weighted_projections(self) -> np.ndarray:
        """Stack of w_i^2 P_i, shape (m, n, n)."""
        n = self.ambient_dim
        if not self.size:
            return np.zeros((0, n, n))
        return np.stack([w * w * s.projection for s, w in self])

    def to_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "members": [{"weight": w, "dim": s.dim} for s, w in self],
        }

    def __repr__(self) -> str:
        return f"WeightedFamily(size={self.size}, ambient_dim={self.ambient_dim})"


class VectorFamily:
    """Vectors of R^n grouped by index: {f_ij, j in J_i}. Any J_i may be empty."""

    def __init__(self, groups: Sequence[Sequence], ambient_dim: int):
        self.ambient_dim = int(ambient_dim)
        stored = []
        for i, group in enumerate(groups):
            rows = [as_vector(v, self.ambient_dim, f"vector {j} at index {i}") for j, v in enumerate(group)]
            stored.append(frozen(np.array(rows).reshape(len(rows), self.ambient_dim)))
        self._groups = tuple(stored)

    @property
    def size(self) -> int:
        return len(self._groups)

    @property
    def groups(self) -> Tuple[np.ndarray, ...]:
        return self._groups

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> np.ndarray:
        return self._groups[i]

    def counts(self) -> List[int]:
        return [g.shape[0] for g in self._groups]

    def flatten(self, weights: Optional[Sequence[float]] = None) -> Tuple[np.ndarray, np.ndarray]:
        """All vectors as rows plus the per-row weight taken from their index."""
        weights = np.ones(self.size) if weights is None else np.asarray(weights, dtype=float)
        if weights.shape[0] != self.size:
            raise DimensionMismatchError(f"{weights.shape[0]} weights for {self.size} indices")
        if not self.size:
            return np.zeros((0, self.ambient_dim)), np.zeros(0)
        rows = np.vstack(self._groups)
        row_weights = np.repeat(weights, self.counts())
        return rows, row_weights

    def local_operators(self, weights: Optional[Sequence[float]] = None) -> np.ndarray:
        """Stack of c_i^2 sum_j f_ij f_ij^T, shape (m, n, n)."""
        weights = np.ones(self.size) if weights is None else np.asarray(weights, dtype=float)
        n = self.ambient_dim
        ops = [w * w * (g.T @ g) for g, w in zip(self._groups, weights)]
        return np.stack(ops) if ops else np.zeros((0, n, n))

    def to_dict(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "groups": [g.tolist() for g in self._groups]}


@dataclass(frozen=True)
class BoundsReport:
    lower: float
    upper: float
    is_frame: bool
    witness_low: np.ndarray
    witness_high: np.ndarray

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "is_frame": self.is_frame,
            "witness_low": self.witness_low.tolist(),
            "witness_high": self.witness_high.tolist(),
        }


# -----------------------------
# Helpers
# -----------------------------
def _canonical_sign(v: np.ndarray) -> np.ndarray:
    # eigenvectors are defined up to sign; make the largest entry positive
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def bounds_from_operator(s: np.ndarray, frame_tol: float = DEFAULT_FRAME_TOL) -> BoundsReport:
    """Optimal frame bounds = extremal eigenvalues of the frame operator."""
    spectrum = symmetric_spectrum(s, want_vectors=True)
    lower = max(0.0, spectrum.smallest)
    upper = max(lower, spectrum.largest)
    return BoundsReport(
        lower=lower,
        upper=upper,
        is_frame=lower > frame_tol * max(1.0, upper),
        witness_low=frozen(_canonical_sign(spectrum.eigenvectors[:, 0])),
        witness_high=frozen(_canonical_sign(spectrum.eigenvectors[:, -1])),
    )


# -----------------------------
# Classical frames
# -----------------------------
def frame_operator(
    vectors: Union[VectorFamily, Sequence, np.ndarray],
    weights: Optional[Sequence[float]] = None,
    ambient_dim: Optional[int] = None,
) -> np.ndarray:
    """
    S = sum_i c_i^2 f_i f_i^T. For a VectorFamily the weights are per index,
    for a plain sequence of vectors they are per vector.
    """
    if isinstance(vectors, VectorFamily):
        rows, row_weights = vectors.flatten(weights)
        n = vectors.ambient_dim
    else:
        rows = np.asarray(vectors, dtype=float)
        if rows.size == 0:
            if ambient_dim is None:
                raise DimensionMismatchError("ambient_dim is required for an empty vector set")
            rows = np.zeros((0, ambient_dim))
        if rows.ndim != 2:
            raise DimensionMismatchError(f"vectors must form a 2-d array, got shape {rows.shape}")
        n = rows.shape[1]
        if ambient_dim is not None and n != ambient_dim:
            raise DimensionMismatchError(f"vectors live in R^{n}, expected R^{ambient_dim}")
        row_weights = np.ones(rows.shape[0]) if weights is None else np.asarray(weights, dtype=float)
        if row_weights.shape[0] != rows.shape[0]:
            raise DimensionMismatchError(f"{row_weights.shape[0]} weights for {rows.shape[0]} vectors")
    if n < 1:
        raise DimensionMismatchError("ambient dimension must be at least 1")
    scaled = rows * row_weights[:, None]
    s = scaled.T @ scaled
    return (s + s.T) / 2.0


def frame_bounds(vectors, weights=None, ambient_dim=None, frame_tol: float = DEFAULT_FRAME_TOL) -> BoundsReport:
    return bounds_from_operator(frame_operator(vectors, weights, ambient_dim), frame_tol)


# -----------------------------
# Fusion frames
# -----------------------------
def fusion_frame_operator(family: WeightedFamily) -> np.ndarray:
    """S_W = sum_i w_i^2 P_i."""
    return np.sum(family.weighted_projections(), axis=0)


def fusion_bounds(family: WeightedFamily, frame_tol: float = DEFAULT_FRAME_TOL) -> BoundsReport:
    report = bounds_from_operator(fusion_frame_operator(family), frame_tol)
    logging.debug(f"fusion bounds for {family}: ({report.lower:.6g}, {report.upper:.6g})")
    return report


def is_fusion_bessel(family: WeightedFamily) -> Tuple[bool, float]:
    """In finite dimension every family is Bessel; the bound is lambda_max(S)."""
    upper = symmetric_spectrum(fusion_frame_operator(family)).largest
    return True, max(0.0, upper)


def fusion_analysis(family: WeightedFamily, f) -> np.ndarray:
    """Blocks w_i P_i f as rows, shape (m, n)."""
    f = as_vector(f, family.ambient_dim, "f")
    if not family.size:
        return np.zeros((0, family.ambient_dim))
    return np.stack([w * s.project(f) for s, w in family])


def fusion_synthesis(family: WeightedFamily, blocks) -> np.ndarray:
    """sum_i w_i P_i f_i."""
    n = family.ambient_dim
    blocks = np.asarray(blocks, dtype=float) if len(blocks) else np.zeros((0, n))
    if blocks.ndim != 2 or blocks.shape[1] != n:
        raise DimensionMismatchError(f"blocks must have shape (m, {n}), got {blocks.shape}")
    if blocks.shape[0] != family.size:
        raise DimensionMismatchError(f"{blocks.shape[0]} blocks for a family of size {family.size}")
    out = np.zeros(family.ambient_dim)
    for (s, w), block in zip(family, blocks):
        out += w * s.project(block)
    return out


def reconstruct(family: WeightedFamily, measurements, frame_tol: float = DEFAULT_FRAME_TOL) -> np.ndarray:
    """
    Recover f from its measurements {w_i P_i f}: f = S^-1 sum_i w_i P_i m_i.
    Each measurement is projected onto its subspace again (inside the
    synthesis), which keeps the operation total on perturbed inputs.
    """
    bounds = fusion_bounds(family, frame_tol)
    if not bounds.is_frame:
        raise NotAFusionFrameError(f"family is not a fusion frame (lower bound {bounds.lower:.3e})")
    return solve_spd(fusion_frame_operator(family), fusion_synthesis(family, measurements))


def complement_projection(s: Subspace) -> np.ndarray:
    return np.eye(s.ambient_dim) - s.projection


def is_orthonormal_fusion_basis(family: WeightedFamily, tol: float = 1e-10) -> bool:
    """Unit weights, mutually orthogonal members, projections summing to I."""
    if not np.allclose(family.weights, 1.0, rtol=0, atol=tol):
        return False
    subspaces = family.subspaces
    for i in range(len(subspaces)):
        for j in range(i + 1, len(subspaces)):
            if np.linalg.norm(subspaces[i].basis.T @ subspaces[j].basis) > tol:
                return False
    return bool(np.linalg.norm(fusion_frame_operator(family) - np.eye(family.ambient_dim)) <= tol)
