# tests/test_weaving.py

import numpy as np
import pytest

from config import Settings
from core.builtins import (
    example1,
    random_nested_subspace,
    random_subspace,
    random_weighted_family,
)
from core.errors import NotAFusionFrameError, PatternCapExceededError, SubspaceMembershipError
from core.frames import VectorFamily, WeightedFamily, fusion_bounds, fusion_frame_operator
from core.numerics import operator_norm, orthonormalize, symmetric_spectrum
from core.patterns import WeavingPattern
from core.weaving import (
    direct_sum_complement,
    is_orthonormal_weaving_basis,
    is_woven,
    is_woven_riesz,
    operator_lower_bound,
    riesz_pattern_bounds,
    synthesis_norm_check,
    universal_weaving_bounds,
    weaving_bessel_bound,
    weaving_frame_bounds,
    woven_operator,
    woven_selection,
    woven_synthesis_matrix,
)

SERIAL = Settings(threads=1)


# -----------------------------
# Woven operators
# -----------------------------
def test_woven_operator_full_and_empty(ex1):
    v, w = ex1
    np.testing.assert_allclose(woven_operator(v, w, WeavingPattern.full(4)), fusion_frame_operator(v))
    np.testing.assert_allclose(woven_operator(v, w, WeavingPattern.empty(4)), fusion_frame_operator(w))


def test_woven_operator_example1_is_diagonal(ex1):
    v, w = ex1
    s = woven_operator(v, w, WeavingPattern.from_indices(4, [0, 1]))
    np.testing.assert_allclose(s, np.diag(np.diag(s)), atol=1e-14)
    assert set(np.round(np.diag(s), 12)) <= {1.0, 2.0}


def test_woven_selection_order(ex2):
    v, w = ex2
    sel = woven_selection(v, w, WeavingPattern.from_indices(3, [0, 2]))
    assert sel.subspaces[1] is w.subspaces[1]
    assert sel.subspaces[0] is v.subspaces[0]


# -----------------------------
# Universal bounds
# -----------------------------
@pytest.mark.parametrize("n", [4, 5, 6])
def test_example1_universal_bounds(n):
    v, w = example1(n)
    report = universal_weaving_bounds(v, w, SERIAL)
    assert report.universal_lower == pytest.approx(1.0, abs=1e-9)
    assert report.universal_upper == pytest.approx(2.0, abs=1e-9)
    assert report.woven
    assert report.status == "exhaustive"
    assert report.evaluated == 2 ** n


def test_example2_not_woven_with_witness(ex2):
    v, w = ex2
    report = universal_weaving_bounds(v, w, SERIAL)
    assert report.universal_lower <= 1e-12
    assert not report.woven
    assert report.argmin_pattern.w_indices() == [1]
    assert report.argmin_pattern.mask == 5
    s = woven_operator(v, w, report.argmin_pattern)
    assert symmetric_spectrum(s).smallest <= 1e-12


def test_identical_families_match_fusion_bounds():
    rng = np.random.default_rng(1)
    v = random_weighted_family(rng, 4, 5)
    report = universal_weaving_bounds(v, v, SERIAL)
    b = fusion_bounds(v)
    assert report.universal_lower == pytest.approx(b.lower, rel=1e-10, abs=1e-12)
    assert report.universal_upper == pytest.approx(b.upper, rel=1e-10)


def test_per_pattern_table_and_symmetry(ex1):
    v, w = ex1
    forward = universal_weaving_bounds(v, w, SERIAL, per_pattern=True)
    backward = universal_weaving_bounds(w, v, SERIAL, per_pattern=True)
    table = forward.per_pattern_bounds
    assert [row["mask"] for row in table] == list(range(16))
    by_mask = {row["mask"]: row for row in backward.per_pattern_bounds}
    for row in table:
        mirrored = by_mask[15 ^ row["mask"]]
        assert row["lower"] == pytest.approx(mirrored["lower"], abs=1e-12)
        assert row["upper"] == pytest.approx(mirrored["upper"], abs=1e-12)
    assert universal_weaving_bounds(v, w, SERIAL, per_pattern=False).per_pattern_bounds is None


def test_is_woven_and_bessel(ex1, ex2):
    ok, report = is_woven(*ex1, settings=SERIAL)
    assert ok and report.woven
    ok, _ = is_woven(*ex2, settings=SERIAL)
    assert not ok
    assert weaving_bessel_bound(*ex1, settings=SERIAL) == pytest.approx(2.0)


def test_cap_and_sampling(ex1):
    v, w = example1(6)
    with pytest.raises(PatternCapExceededError):
        universal_weaving_bounds(v, w, Settings(threads=1, pattern_cap=3))
    report = universal_weaving_bounds(v, w, Settings(threads=1, pattern_cap=3, sample_count=16, sample_seed=2))
    assert report.status == "sampled"
    assert not report.woven
    assert report.universal_lower >= 1.0 - 1e-9


def test_thread_count_does_not_change_report():
    rng = np.random.default_rng(9)
    v = random_weighted_family(rng, 4, 10)
    w = random_weighted_family(rng, 4, 10)
    one = universal_weaving_bounds(v, w, Settings(threads=1, chunk_size=37), per_pattern=True)
    many = universal_weaving_bounds(v, w, Settings(threads=4, chunk_size=37), per_pattern=True)
    assert one.to_dict() == many.to_dict()


# -----------------------------
# Vector weavings
# -----------------------------
def test_weaving_frame_bounds_examples():
    e = np.eye(3)
    onb = VectorFamily([[x] for x in e], 3)
    report = weaving_frame_bounds(onb, onb, settings=SERIAL)
    assert (report.universal_lower, report.universal_upper) == pytest.approx((1.0, 1.0))

    v, w = example1(4)
    f = VectorFamily([s.basis.T for s in v.subspaces], 4)
    g = VectorFamily([s.basis.T for s in w.subspaces], 4)
    report = weaving_frame_bounds(f, g, settings=SERIAL)
    assert (report.universal_lower, report.universal_upper) == pytest.approx((1.0, 2.0))
    assert report.woven

    empty = VectorFamily([[], [], []], 3)
    report = weaving_frame_bounds(onb, empty, settings=SERIAL)
    assert report.universal_lower == pytest.approx(0.0, abs=1e-15)
    assert not report.woven


# -----------------------------
# Synthesis operator
# -----------------------------
def test_synthesis_matrix_examples(onb3):
    v, w = onb3
    t = woven_synthesis_matrix(v, w, WeavingPattern.full(3))
    np.testing.assert_allclose(np.abs(t), np.eye(3))
    doubled = WeightedFamily(list(zip(v.subspaces, [2.0, 2.0, 2.0])))
    t = woven_synthesis_matrix(doubled, doubled, WeavingPattern.empty(3))
    np.testing.assert_allclose(np.linalg.norm(t, axis=0), [2.0, 2.0, 2.0])


def test_synthesis_factors_woven_operator():
    rng = np.random.default_rng(4)
    v = random_weighted_family(rng, 5, 4)
    w = random_weighted_family(rng, 5, 4)
    for mask in range(16):
        p = WeavingPattern(4, mask)
        t = woven_synthesis_matrix(v, w, p)
        np.testing.assert_allclose(t @ t.T, woven_operator(v, w, p), atol=1e-12)


def test_synthesis_norms_examples(ex1, ex2):
    for v, w in (ex1, ex2):
        check = synthesis_norm_check(v, w, SERIAL)
        assert check.holds
    v, w = ex1
    t = woven_synthesis_matrix(v, w, WeavingPattern.empty(4))
    assert operator_norm(t) ** 2 == pytest.approx(2.0)


# -----------------------------
# Operator lower bound
# -----------------------------
def test_operator_lower_bound_examples(onb3, ex1, ex2):
    alpha, floor = operator_lower_bound(*onb3, settings=SERIAL)
    assert alpha == pytest.approx(1.0)
    assert floor == pytest.approx(0.5)

    alpha, floor = operator_lower_bound(*ex1, settings=SERIAL)
    assert alpha == pytest.approx(1.0)
    assert floor == pytest.approx(0.2)

    alpha, floor = operator_lower_bound(*ex2, settings=SERIAL)
    assert alpha == pytest.approx(0.0, abs=1e-12)
    assert floor == pytest.approx(0.0, abs=1e-12)


def test_operator_lower_bound_needs_fusion_frames():
    v = WeightedFamily.from_spans([[(1, 0)], [(1, 0)]])
    w = WeightedFamily.from_spans([[(1, 0)], [(0, 1)]])
    with pytest.raises(NotAFusionFrameError):
        operator_lower_bound(v, w, settings=SERIAL)


def test_random_pairs_floor_and_sharpening():
    rng = np.random.default_rng(21)
    for _ in range(30):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, 6))
        v = random_weighted_family(rng, n, m)
        w = random_weighted_family(rng, n, m)
        report = universal_weaving_bounds(v, w, SERIAL)
        scale = max(1.0, report.universal_upper)
        assert report.universal_lower == pytest.approx(report.alpha, abs=1e-12 * scale)
        assert report.lemma_floor_holds
        assert report.universal_lower >= report.sharp_floor - 1e-9
        assert report.woven == (report.alpha > SERIAL.frame_threshold(report.universal_upper))
        assert synthesis_norm_check(v, w, SERIAL).holds


def test_lemma_floor_does_not_scale_with_small_weights():
    v = WeightedFamily.from_spans([[(1, 0, 0)], [(0, 1, 0)], [(0, 0, 1)]], [0.5, 0.5, 0.5])
    report = universal_weaving_bounds(v, v, SERIAL)
    assert report.universal_lower == pytest.approx(0.25)
    assert report.lemma_floor == pytest.approx(0.5)
    assert not report.lemma_floor_holds
    assert report.sharp_floor == pytest.approx(0.25)
    assert report.universal_lower >= report.sharp_floor - 1e-9


# -----------------------------
# Riesz weavings
# -----------------------------
def test_riesz_orthonormal(onb3):
    ok, report = is_woven_riesz(*onb3, settings=SERIAL)
    assert ok
    assert (report.universal_lower, report.universal_upper) == pytest.approx((1.0, 1.0))
    assert is_orthonormal_weaving_basis(*onb3, settings=SERIAL)


def test_riesz_weights_two(onb3):
    v, _ = onb3
    doubled = WeightedFamily(list(zip(v.subspaces, [2.0, 2.0, 2.0])))
    ok, report = is_woven_riesz(doubled, doubled, settings=SERIAL)
    assert ok
    assert (report.universal_lower, report.universal_upper) == pytest.approx((4.0, 4.0))
    assert not is_orthonormal_weaving_basis(doubled, doubled, settings=SERIAL)


def test_riesz_example1_fails_dimension_count(ex1):
    ok, report = is_woven_riesz(*ex1, settings=SERIAL)
    assert not ok
    assert report.failure_reason.startswith("dimension count")
    assert not is_orthonormal_weaving_basis(*ex1, settings=SERIAL)
    bounds = riesz_pattern_bounds(*ex1, WeavingPattern.from_indices(4, [0, 1]), SERIAL)
    assert bounds.column_count == 4 + 2
    assert bounds.lower == pytest.approx(0.0, abs=1e-12)


def test_riesz_fails_when_weaving_does_not_span():
    fam = WeightedFamily.from_spans([[(1, 0)], [(1, 0)]])
    ok, report = is_woven_riesz(fam, fam, settings=SERIAL)
    assert not ok
    assert report.failure_reason.startswith("not surjective")


def test_riesz_same_subspaces_different_weights():
    rng = np.random.default_rng(8)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    spans = [q[:, :1].T, q[:, 1:3].T, q[:, 3:].T]
    v = WeightedFamily.from_spans(spans, [1.0, 1.5, 2.0])
    w = WeightedFamily.from_spans(spans, [2.0, 1.0, 1.2])
    ok, report = is_woven_riesz(v, w, settings=SERIAL)
    assert ok
    assert report.universal_lower == pytest.approx(1.0)
    assert report.universal_upper == pytest.approx(4.0)
    woven, _ = is_woven(v, w, settings=SERIAL)
    assert woven


def test_riesz_implies_woven_with_matching_spectra():
    rng = np.random.default_rng(13)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        sizes = []
        left = n
        while left:
            k = int(rng.integers(1, left + 1))
            sizes.append(k)
            left -= k
        split = np.cumsum([0] + sizes)
        q1, _ = np.linalg.qr(rng.standard_normal((n, n)))
        q2, _ = np.linalg.qr(rng.standard_normal((n, n)))
        weights = rng.uniform(1, 2, size=(2, len(sizes)))
        v = WeightedFamily.from_spans([q1[:, a:b].T for a, b in zip(split, split[1:])], weights[0])
        w = WeightedFamily.from_spans([q2[:, a:b].T for a, b in zip(split, split[1:])], weights[1])
        ok, report = is_woven_riesz(v, w, settings=SERIAL)
        if ok:
            woven, fusion = is_woven(v, w, settings=SERIAL)
            assert woven
            assert report.max_spectrum_gap <= 1e-9
            assert fusion.universal_lower == pytest.approx(report.universal_lower, rel=1e-8, abs=1e-10)


# -----------------------------
# Direct sums
# -----------------------------
def test_direct_sum_complement_random():
    rng = np.random.default_rng(17)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        outer = [random_subspace(rng, n, int(rng.integers(1, n + 1))) for _ in range(3)]
        inner = [random_nested_subspace(rng, o) for o in outer]
        result = direct_sum_complement(outer, inner)
        assert result.residual <= 1e-10
        assert result.idempotence_error <= 1e-10


def test_direct_sum_complement_requires_nesting():
    rng = np.random.default_rng(2)
    outer = [random_subspace(rng, 3, 1)]
    inner = [random_subspace(rng, 3, 1)]
    with pytest.raises(SubspaceMembershipError):
        direct_sum_complement(outer, inner)


def test_direct_sum_complement_detects_non_nested_input():
    outer = [orthonormalize([(1, 0)])]
    inner = [orthonormalize([(0, 1)])]
    result = direct_sum_complement(outer, inner, strict=False)
    np.testing.assert_allclose(result.complement, np.diag([1.0, 0.0]), atol=1e-12)
    assert result.residual == pytest.approx(1.0)
    assert result.idempotence_error == pytest.approx(2.0)

    rng = np.random.default_rng(5)
    for _ in range(10):
        outer = [random_subspace(rng, 3, 1) for _ in range(2)]
        inner = [random_subspace(rng, 3, 1) for _ in range(2)]
        assert direct_sum_complement(outer, inner, strict=False).residual > 1e-3
