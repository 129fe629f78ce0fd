"""MMD estimators, concentration width, and permutation calibration."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from credal_cert import (
    InputError,
    KernelSpec,
    MmdEstimate,
    MmdKind,
    brute_force_mmd2,
    concentration_width,
    mmd2_biased,
    mmd2_unbiased,
    mmd_upper_confidence,
    permutation_calibrate,
)

TWO_POINT_MMD2 = 1.2642411176571153  # 2 - 2/e at unit distance, gamma 1
WIDTH_200_200_05 = 0.19206455826398416
WIDTH_50_100_10 = 0.34616367652045704
WIDTH_8_8_20 = 0.7587135646925732
UCB_03_200_05 = 0.49206455826398415

SPEC = KernelSpec(gamma=1.0)


def _pair(draw, min_rows=2, max_rows=10, max_cols=3):
    cols = draw(st.integers(1, max_cols))
    elements = st.floats(-3.0, 3.0, allow_nan=False)
    Xs = draw(
        hnp.arrays(
            np.float64, (draw(st.integers(min_rows, max_rows)), cols), elements=elements
        )
    )
    Xt = draw(
        hnp.arrays(
            np.float64, (draw(st.integers(min_rows, max_rows)), cols), elements=elements
        )
    )
    return Xs, Xt


def test_two_point_unbiased_value():
    est = mmd2_unbiased([[0.0], [0.0]], [[1.0], [1.0]], SPEC)
    assert est.mmd2 == TWO_POINT_MMD2
    assert est.mmd == math.sqrt(TWO_POINT_MMD2)
    assert est.kind is MmdKind.UNBIASED
    assert (est.m, est.n) == (2, 2)


def test_single_point_biased_value():
    est = mmd2_biased([[0.0]], [[1.0]], SPEC)
    assert est.mmd2 == TWO_POINT_MMD2
    assert est.kind is MmdKind.BIASED


@given(st.data())
def test_unbiased_matches_brute_force(data):
    Xs, Xt = _pair(data.draw)
    est = mmd2_unbiased(Xs, Xt, SPEC)
    ref = brute_force_mmd2(Xs, Xt, SPEC, MmdKind.UNBIASED)
    assert abs(est.mmd2 - ref) <= 1e-12


@given(st.data())
def test_biased_matches_brute_force(data):
    Xs, Xt = _pair(data.draw, min_rows=1)
    est = mmd2_biased(Xs, Xt, SPEC)
    ref = brute_force_mmd2(Xs, Xt, SPEC, MmdKind.BIASED)
    assert abs(est.mmd2 - ref) <= 1e-12


@given(st.data())
def test_swap_symmetry_is_exact(data):
    Xs, Xt = _pair(data.draw)
    assert mmd2_unbiased(Xs, Xt, SPEC).mmd2 == mmd2_unbiased(Xt, Xs, SPEC).mmd2
    assert mmd2_biased(Xs, Xt, SPEC).mmd2 == mmd2_biased(Xt, Xs, SPEC).mmd2


def test_identical_sample_biased_is_exactly_zero():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((8, 2))
    assert mmd2_biased(X, X, SPEC).mmd2 == 0.0
    assert mmd2_biased(X, X.copy(), SPEC).mmd2 == 0.0
    assert mmd2_biased(X, X, SPEC).mmd == 0.0


def test_identical_sample_unbiased_is_nonpositive():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((8, 2))
    est = mmd2_unbiased(X, X, SPEC)
    assert est.mmd2 <= 0.0
    assert est.mmd == 0.0


@given(st.data())
def test_mmd_is_clamped_square_root(data):
    Xs, Xt = _pair(data.draw)
    est = mmd2_unbiased(Xs, Xt, SPEC)
    assert est.mmd == math.sqrt(max(est.mmd2, 0.0))


def test_width_frozen_values():
    assert concentration_width(200, 200, 0.05) == WIDTH_200_200_05
    assert concentration_width(50, 100, 0.1) == WIDTH_50_100_10
    assert concentration_width(8, 8, 0.2) == WIDTH_8_8_20


def test_width_depends_on_smaller_sample_only():
    assert concentration_width(50, 100, 0.1) == concentration_width(50, 50, 0.1)
    assert concentration_width(100, 50, 0.1) == concentration_width(50, 100, 0.1)


def test_width_monotone_in_alpha_and_count():
    assert concentration_width(50, 50, 0.05) > concentration_width(50, 50, 0.2)
    assert concentration_width(200, 200, 0.1) < concentration_width(50, 50, 0.1)


def test_width_validation():
    with pytest.raises(InputError):
        concentration_width(0, 10, 0.1)
    with pytest.raises(InputError):
        concentration_width(10, 10, 0.0)
    with pytest.raises(InputError):
        concentration_width(10, 10, 1.0)


def test_upper_confidence_frozen_value():
    est = MmdEstimate(mmd2=0.09, mmd=0.3, kind=MmdKind.UNBIASED, m=200, n=200)
    assert mmd_upper_confidence(est, 0.05) == UCB_03_200_05


@given(st.data())
def test_upper_confidence_adds_width(data):
    Xs, Xt = _pair(data.draw)
    est = mmd2_unbiased(Xs, Xt, SPEC)
    alpha = data.draw(st.floats(0.01, 0.5))
    expected = est.mmd + concentration_width(est.m, est.n, alpha)
    assert mmd_upper_confidence(est, alpha) == expected


def test_unbiased_needs_two_rows_per_side():
    with pytest.raises(InputError):
        mmd2_unbiased([[0.0]], [[1.0], [2.0]], SPEC)
    with pytest.raises(InputError):
        mmd2_unbiased([[0.0], [1.0]], [[1.0]], SPEC)


def test_estimators_reject_dimension_mismatch():
    with pytest.raises(InputError):
        mmd2_unbiased(np.zeros((3, 2)), np.zeros((3, 3)), SPEC)


def test_calibration_is_deterministic_and_thread_invariant():
    rng = np.random.default_rng(3)
    Xs = rng.standard_normal((30, 2))
    Xt = 0.3 + rng.standard_normal((25, 2))
    kwargs = dict(num_permutations=200, alpha=0.1, seed=11)
    r1 = permutation_calibrate(Xs, Xt, SPEC, **kwargs)
    r2 = permutation_calibrate(Xs, Xt, SPEC, **kwargs)
    r4 = permutation_calibrate(Xs, Xt, SPEC, threads=4, **kwargs)
    assert (r1.epsilon_alpha, r1.p_value) == (r2.epsilon_alpha, r2.p_value)
    assert (r1.epsilon_alpha, r1.p_value) == (r4.epsilon_alpha, r4.p_value)
    assert r1.num_permutations == 200
    assert r1.alpha == 0.1
    assert r1.seed == 11


def test_calibration_pvalue_has_add_one_form():
    rng = np.random.default_rng(4)
    Xs = rng.standard_normal((20, 2))
    Xt = rng.standard_normal((20, 2))
    result = permutation_calibrate(Xs, Xt, SPEC, num_permutations=149, seed=0)
    count = result.p_value * 150.0
    assert abs(count - round(count)) < 1e-9
    assert 1.0 / 150.0 <= result.p_value <= 1.0
    assert result.epsilon_alpha >= 0.0


def test_calibration_rejects_large_shift():
    rng = np.random.default_rng(5)
    Xs = rng.standard_normal((60, 2))
    Xt = np.array([2.5, 0.0]) + rng.standard_normal((60, 2))
    result = permutation_calibrate(Xs, Xt, SPEC, num_permutations=200, seed=0)
    assert result.p_value <= 0.01
    est = mmd2_unbiased(Xs, Xt, SPEC)
    assert est.mmd > result.epsilon_alpha


def test_calibration_pvalues_near_uniform_under_null():
    # KS distance between 200 null p-values and the uniform law
    trials = 200
    rng = np.random.default_rng(6)
    pvals = []
    for t in range(trials):
        Xs = rng.standard_normal((40, 1))
        Xt = rng.standard_normal((40, 1))
        result = permutation_calibrate(
            Xs, Xt, SPEC, num_permutations=199, seed=1000 + t
        )
        pvals.append(result.p_value)
    p = np.sort(np.array(pvals))
    grid_hi = np.arange(1, trials + 1) / trials
    grid_lo = np.arange(0, trials) / trials
    ks = max(np.max(np.abs(p - grid_hi)), np.max(np.abs(p - grid_lo)))
    assert ks < 0.1


def test_calibration_validation():
    rng = np.random.default_rng(7)
    Xs = rng.standard_normal((10, 1))
    Xt = rng.standard_normal((10, 1))
    with pytest.raises(InputError):
        permutation_calibrate(Xs, Xt, SPEC, num_permutations=0)
    with pytest.raises(InputError):
        permutation_calibrate(Xs, Xt, SPEC, alpha=1.0)
    with pytest.raises(InputError):
        permutation_calibrate(Xs, Xt, SPEC, seed=-1)
    with pytest.raises(InputError):
        permutation_calibrate(Xs, Xt, SPEC, threads=0)
