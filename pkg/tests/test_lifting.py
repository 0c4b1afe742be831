# tests/test_lifting.py

import numpy as np
import pytest

from config import Settings
from core.builtins import example1, example2, orthonormal_pair, random_local_system, random_weighted_family
from core.errors import HypothesisViolationError, SubspaceMembershipError
from core.frames import WeightedFamily
from core.lifting import LocalFrameSystem, equivalence_check, lift, local_frame_bounds
from core.numerics import orthonormalize
from scripts.run_trials import run_trials

SERIAL = Settings(threads=1)


# -----------------------------
# Local frame bounds
# -----------------------------
def test_local_bounds_examples():
    s = orthonormalize([(1, 0, 0), (0, 1, 0)])
    assert local_frame_bounds(s, [(1, 0, 0), (0, 1, 0)]) == pytest.approx((1.0, 1.0))
    assert local_frame_bounds(s, [(1, 0, 0), (0, 1, 0)] * 2) == pytest.approx((2.0, 2.0))
    assert local_frame_bounds(s, [(1, 0, 0), (0, 1, 0), (1, 1, 0)]) == pytest.approx((1.0, 3.0))


def test_local_bounds_degenerate():
    s = orthonormalize([(1, 0)])
    assert local_frame_bounds(s, []) == (0.0, 0.0)
    assert local_frame_bounds(orthonormalize([], ambient_dim=2), []) == (0.0, 0.0)


def test_local_vectors_must_lie_in_subspace():
    s = orthonormalize([(1, 0)])
    with pytest.raises(SubspaceMembershipError):
        local_frame_bounds(s, [(1, 0.1)])


# -----------------------------
# Lifting
# -----------------------------
def test_lift_multiplies_by_weights():
    base = WeightedFamily.from_spans([[(1, 0)], [(0, 1)]], [2.0, 1.0])
    system = LocalFrameSystem(base, [[(1, 0)], [(0, 1)]])
    f, g = lift(system, system)
    np.testing.assert_allclose(f[0], [[2.0, 0.0]])
    np.testing.assert_allclose(g[1], [[0.0, 1.0]])


def test_local_frames_are_projected():
    base = WeightedFamily.from_spans([[(1, 0)]])
    system = LocalFrameSystem(base, [[(1, 1e-13)]])
    np.testing.assert_allclose(system.local[0], [[1.0, 0.0]])


def test_hypotheses_need_local_frames():
    base = WeightedFamily.from_spans([[(1, 0)], [(0, 1)]])
    broken = LocalFrameSystem(base, [[(1, 0)], []])
    fine = LocalFrameSystem.orthonormal(base)
    with pytest.raises(HypothesisViolationError):
        equivalence_check(broken, fine, settings=SERIAL)


# -----------------------------
# Equivalence of fusion and lifted weaving
# -----------------------------
def test_equivalence_orthonormal():
    v, w = orthonormal_pair(3)
    report = equivalence_check(LocalFrameSystem.orthonormal(v), LocalFrameSystem.orthonormal(w), settings=SERIAL)
    assert report.woven_fusion and report.woven_vectors
    assert report.holds
    assert report.aggregate.alpha_agg == pytest.approx(1.0)
    assert report.aggregate.beta_agg == pytest.approx(1.0)


def test_equivalence_example1():
    v, w = example1(4)
    report = equivalence_check(LocalFrameSystem.orthonormal(v), LocalFrameSystem.orthonormal(w), settings=SERIAL)
    assert report.holds
    assert report.woven_vectors
    assert (report.lifted.universal_lower, report.lifted.universal_upper) == pytest.approx((1.0, 2.0))


def test_equivalence_example2():
    v, w = example2()
    report = equivalence_check(LocalFrameSystem.orthonormal(v), LocalFrameSystem.orthonormal(w), settings=SERIAL)
    assert not report.woven_fusion
    assert not report.woven_vectors
    assert report.holds


def test_lifted_flag_decided_on_fusion_scale():
    # fusion lower 3e-8 clears the threshold, lifted lower 6e-9 = 0.2 * 3e-8 does too once scaled
    base = WeightedFamily.from_spans([[(1, 0)], [(0, 1)]], [1.0, np.sqrt(3e-8)])
    c = np.sqrt(0.2)
    system = LocalFrameSystem(base, [[(c, 0)], [(0, c)]])
    report = equivalence_check(system, system, settings=SERIAL)
    assert report.fusion.universal_lower == pytest.approx(3e-8)
    assert report.lifted.universal_lower == pytest.approx(6e-9)
    assert report.woven_fusion and report.woven_vectors
    assert report.flags_agree and not report.near_threshold
    assert report.holds


def test_flags_may_split_inside_the_threshold_band():
    base = WeightedFamily.from_spans([[(1, 0)], [(0, 1)]], [1.0, np.sqrt(5e-9)])
    system = LocalFrameSystem(base, [[(1, 0)], [(0, np.sqrt(5.0))]])
    report = equivalence_check(system, system, settings=SERIAL)
    assert report.aggregate.alpha_agg == pytest.approx(1.0)
    assert report.aggregate.beta_agg == pytest.approx(5.0)
    assert not report.woven_fusion
    assert report.woven_vectors
    assert report.near_threshold
    assert report.holds
    assert report.to_dict()["near_threshold"] is True


def test_parseval_local_frames_collapse_to_fusion_bounds():
    rng = np.random.default_rng(31)
    for _ in range(10):
        n = int(rng.integers(1, 6))
        v = random_weighted_family(rng, n, 3)
        w = random_weighted_family(rng, n, 3)
        report = equivalence_check(LocalFrameSystem.orthonormal(v), LocalFrameSystem.orthonormal(w), settings=SERIAL)
        assert report.lifted.universal_lower == pytest.approx(report.fusion.universal_lower, abs=1e-9)
        assert report.lifted.universal_upper == pytest.approx(report.fusion.universal_upper, abs=1e-9)


def test_weights_scale_bounds_quadratically():
    rng = np.random.default_rng(41)
    v = random_weighted_family(rng, 4, 4)
    w = random_weighted_family(rng, 4, 4)
    vs, ws = random_local_system(rng, v), random_local_system(rng, w)
    base = equivalence_check(vs, ws, settings=SERIAL)
    t = 1.7
    scaled = equivalence_check(
        LocalFrameSystem(v.scaled(t), [g.tolist() for g in vs.local.groups]),
        LocalFrameSystem(w.scaled(t), [g.tolist() for g in ws.local.groups]),
        settings=SERIAL,
    )
    for a, b in (
        (base.fusion.universal_lower, scaled.fusion.universal_lower),
        (base.fusion.universal_upper, scaled.fusion.universal_upper),
        (base.lifted.universal_lower, scaled.lifted.universal_lower),
        (base.lifted.universal_upper, scaled.lifted.universal_upper),
    ):
        assert b == pytest.approx(t * t * a, rel=1e-9, abs=1e-12)
    assert base.woven_fusion == scaled.woven_fusion


def test_randomized_trials():
    summary = run_trials(200, seed=7, settings=SERIAL)
    assert summary["trials"] == 200
    assert summary["passed"], summary["failures"]
