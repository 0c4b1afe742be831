# core/numerics.py

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from core.errors import DimensionMismatchError, NotInvertibleError, NotSymmetricError

DEFAULT_RANK_TOL = 1e-10
SYMMETRY_TOL = 1e-12


# -----------------------------
# Utilities
# -----------------------------
def frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def as_matrix(entries, name: str = "matrix") -> np.ndarray:
    m = np.asarray(entries, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatchError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_vector(entries, dim: Optional[int] = None, name: str = "vector") -> np.ndarray:
    v = np.asarray(entries, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatchError(f"{name} must be one-dimensional, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatchError(f"{name} has length {v.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


# -----------------------------
# Subspace
# -----------------------------
class Subspace:
    """
    A subspace of R^n stored by an orthonormal basis (n x k) together with
    its orthogonal projection U U^T. k = 0 is the zero subspace.
    """

    __slots__ = ("ambient_dim", "basis", "projection")

    def __init__(self, basis: np.ndarray):
        basis = as_matrix(basis, "basis")
        n, k = basis.shape
        if n < 1:
            raise DimensionMismatchError("ambient dimension must be at least 1")
        gram = basis.T @ basis
        if k and np.max(np.abs(gram - np.eye(k))) > 1e-12 * max(1, k):
            raise ValueError("basis is not orthonormal; build subspaces with orthonormalize()")
        p = basis @ basis.T
        object.__setattr__(self, "ambient_dim", n)
        object.__setattr__(self, "basis", frozen(basis))
        object.__setattr__(self, "projection", frozen((p + p.T) / 2.0))

    def __setattr__(self, key, value):
        raise AttributeError("Subspace is immutable")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def project(self, f: np.ndarray) -> np.ndarray:
        return self.projection @ f

    def residual(self, f: np.ndarray) -> float:
        """Distance from f to the subspace."""
        return float(np.linalg.norm(f - self.project(f)))

    def contains(self, other: "Subspace", tol: float = DEFAULT_RANK_TOL) -> bool:
        if other.ambient_dim != self.ambient_dim:
            return False
        if other.dim == 0:
            return True
        return float(np.linalg.norm(other.basis - self.projection @ other.basis)) <= tol * max(1, other.dim)

    def to_dict(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "dim": self.dim, "basis": self.basis.tolist()}

    def __repr__(self) -> str:
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None

    @property
    def smallest(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def largest(self) -> float:
        return float(self.eigenvalues[-1])


# -----------------------------
# Operations
# -----------------------------
def orthonormalize(vectors: Sequence, tol: float = DEFAULT_RANK_TOL, ambient_dim: Optional[int] = None) -> Subspace:
    """
    Modified Gram-Schmidt with one re-orthogonalization pass. A vector whose
    residual against the basis built so far is <= tol (absolute) is dropped,
    so the returned k is the numerical rank of the input at tol.

    ambient_dim is only needed for empty input (the zero subspace).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    if not vectors:
        if ambient_dim is None:
            raise DimensionMismatchError("ambient_dim is required for an empty spanning set")
        return Subspace(np.zeros((ambient_dim, 0)))

    n = vectors[0].shape[0] if vectors[0].ndim == 1 else -1
    for idx, v in enumerate(vectors):
        if v.ndim != 1 or v.shape[0] != n:
            raise DimensionMismatchError(f"vector {idx} has shape {v.shape}, expected ({n},)")
    if ambient_dim is not None and ambient_dim != n:
        raise DimensionMismatchError(f"vectors live in R^{n}, expected R^{ambient_dim}")
    if n < 1:
        raise DimensionMismatchError("ambient dimension must be at least 1")

    columns = []
    for v in vectors:
        r = v.copy()
        for _ in range(2):
            for q in columns:
                r -= (q @ r) * q
        norm = np.linalg.norm(r)
        if norm > tol:
            columns.append(r / norm)
        if len(columns) == n:
            break

    basis = np.column_stack(columns) if columns else np.zeros((n, 0))
    logging.debug(f"orthonormalize: {len(vectors)} vectors in R^{n} -> rank {basis.shape[1]}")
    return Subspace(basis)


def projection_matrix(s: Subspace) -> np.ndarray:
    return s.projection


def check_symmetric(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = as_matrix(m, name)
    if m.shape[0] != m.shape[1]:
        raise NotSymmetricError(f"{name} is not square: shape {m.shape}")
    scale = max(1.0, float(np.linalg.norm(m)))
    if float(np.linalg.norm(m - m.T)) > SYMMETRY_TOL * scale:
        raise NotSymmetricError(f"{name} is not symmetric")
    return (m + m.T) / 2.0


def symmetric_spectrum(m: np.ndarray, want_vectors: bool = False) -> Spectrum:
    """Full spectrum of a real symmetric matrix, ascending."""
    m = check_symmetric(m)
    if want_vectors:
        values, vectors = np.linalg.eigh(m)
        return Spectrum(frozen(values), frozen(vectors))
    return Spectrum(frozen(np.linalg.eigvalsh(m)))


def solve_spd(m: np.ndarray, b) -> np.ndarray:
    """Solve M x = b for symmetric positive definite M."""
    m = check_symmetric(m)
    b = as_vector(b, m.shape[0], "right-hand side")
    values = np.linalg.eigvalsh(m)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    if scale == 0.0 or values[0] <= 1e-10 * scale:
        raise NotInvertibleError(
            f"matrix is not positive definite (smallest eigenvalue {values[0] if values.size else 0.0:.3e})"
        )
    try:
        lower = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as e:
        raise NotInvertibleError(f"cholesky factorization failed: {e}") from e
    y = np.linalg.solve(lower, b)
    return np.linalg.solve(lower.T, y)


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value (spectral norm)."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, ord=2))


def numerical_rank(m: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> int:
    """Count of singular values above tol * max(1, largest singular value)."""
    m = as_matrix(m)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, float(s[0]))))
