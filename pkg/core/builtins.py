# core/builtins.py

from typing import Callable, Dict, Optional, Tuple

import numpy as np

from core.errors import UnknownDemoError
from core.frames import WeightedFamily
from core.lifting import LocalFrameSystem
from core.numerics import Subspace, orthonormalize

FamilyPair = Tuple[WeightedFamily, WeightedFamily]


def _e(n: int, i: int) -> np.ndarray:
    v = np.zeros(n)
    v[i] = 1.0
    return v


# -----------------------------
# Named problems
# -----------------------------
def example1(n: int = 4) -> FamilyPair:
    """
    Cyclic finite version of the shift example: V_i = span{e_i},
    W_i = span{e_i, e_(i+1 mod n)}, unit weights. Every weaving has bounds in [1, 2].
    """
    if n < 2:
        raise ValueError("example1 needs n >= 2")
    v = WeightedFamily.from_spans([[_e(n, i)] for i in range(n)], ambient_dim=n)
    w = WeightedFamily.from_spans([[_e(n, i), _e(n, (i + 1) % n)] for i in range(n)], ambient_dim=n)
    return v, w


def example2() -> FamilyPair:
    """
    V_i = span{e_i} on R^3 and W equal to V with the first two members swapped.
    Drawing W on the second index only leaves e_2 uncovered.
    """
    n = 3
    v = WeightedFamily.from_spans([[_e(n, i)] for i in range(n)], ambient_dim=n)
    w = WeightedFamily.from_spans([[_e(n, 1)], [_e(n, 0)], [_e(n, 2)]], ambient_dim=n)
    return v, w


def orthonormal_pair(n: int = 3) -> FamilyPair:
    if n < 1:
        raise ValueError("orthonormal needs n >= 1")
    v = WeightedFamily.from_spans([[_e(n, i)] for i in range(n)], ambient_dim=n)
    return v, v


DEMOS: Dict[str, Callable[..., FamilyPair]] = {
    "example1": example1,
    "example2": example2,
    "orthonormal": orthonormal_pair,
}


def demo_families(name: str, n: Optional[int] = None) -> FamilyPair:
    if name not in DEMOS:
        raise UnknownDemoError(f"unknown demo '{name}'; choose one of {', '.join(sorted(DEMOS))}")
    if name == "example2" or n is None:
        return DEMOS[name]()
    try:
        return DEMOS[name](n)
    except ValueError as e:
        raise UnknownDemoError(f"demo '{name}': {e}") from e


# -----------------------------
# Random problems
# -----------------------------
def random_subspace(rng: np.random.Generator, n: int, k: int) -> Subspace:
    return orthonormalize(rng.standard_normal((k, n)), ambient_dim=n)


def random_weighted_family(
    rng: np.random.Generator,
    n: int,
    m: int,
    min_dim: int = 1,
    max_dim: Optional[int] = None,
    weight_range: Tuple[float, float] = (1.0, 2.0),
) -> WeightedFamily:
    max_dim = n if max_dim is None else min(max_dim, n)
    members = []
    for _ in range(m):
        k = int(rng.integers(min_dim, max_dim + 1))
        members.append((random_subspace(rng, n, k), float(rng.uniform(*weight_range))))
    return WeightedFamily(members, ambient_dim=n)


def random_local_system(rng: np.random.Generator, base: WeightedFamily, max_extra: int = 3) -> LocalFrameSystem:
    """
    Local frame per member: a random invertible mix of its basis plus 1..max_extra
    extra random vectors from the same subspace.
    """
    local = []
    for s, _ in base:
        k = s.dim
        extra = int(rng.integers(1, max_extra + 1))
        coeffs = rng.standard_normal((k + extra, k))
        coeffs[:k] += 2.0 * np.eye(k)
        local.append((coeffs @ s.basis.T).tolist())
    return LocalFrameSystem(base, local)


def random_nested_subspace(rng: np.random.Generator, outer: Subspace) -> Subspace:
    """A random subspace of outer (possibly zero or all of it)."""
    k = int(rng.integers(0, outer.dim + 1))
    if k == 0:
        return orthonormalize([], ambient_dim=outer.ambient_dim)
    return orthonormalize((rng.standard_normal((k, outer.dim)) @ outer.basis.T), ambient_dim=outer.ambient_dim)
