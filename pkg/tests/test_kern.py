import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fueterkit.errors import NotInDisk, OnSpectrumSphere
from fueterkit.hcore import E1, E2, E3, Quaternion, as_array
from fueterkit.kern import (KERNEL_KINDS, appell_kernel_series, cauchy_kernel_series,
                            dbar_kernel_partial_sums, dbar_kernel_series, dbar_tail_bound,
                            kernel_array, kernel_eval, qcs, terms_for_tolerance)
from fueterkit.numdiff import fd_apply, residual_suite, slice_cr_residual
from fueterkit.verify import random_pair, relative_error, sphere_distance
import oracles

coord = st.floats(-1.5, 1.5, allow_nan=False)
quats = st.builds(Quaternion, coord, coord, coord, coord)
pairs = st.tuples(quats, quats).filter(lambda p: sphere_distance(*p) > 0.2)


def close(a, b, tol):
    return relative_error(a, b) <= tol


def test_qcs_examples():
    assert qcs(2, E1) == Quaternion(5)
    assert qcs(1.5, 1.5) == Quaternion(0)
    assert abs(qcs(E1, E2)) == 0


@pytest.mark.parametrize("kind, expected", [
    ("SL", (2 + E1) / 5),
    ("FL", (2 + E1) * (-4 / 25)),
    ("P2L", (16 + 8 * E1) / 25),
])
def test_kernel_examples(kind, expected):
    assert close(kernel_eval(kind, 2, E1), expected, 1e-15)


def test_cauchy_kernel_for_real_q():
    s = Quaternion(0.3, 1.0, -2.0, 0.5)
    assert close(kernel_eval("SL", s, 0.7), (s - 0.7).inverse(), 1e-15)


@given(pairs, st.sampled_from(KERNEL_KINDS))
def test_kernels_match_matrix_oracle(pair, kind):
    s, q = pair
    expected = Quaternion(*oracles.kernel(kind, as_array(s), as_array(q)))
    assert close(kernel_eval(kind, s, q), expected, 1e-11)


def test_kernel_array_broadcasts():
    rng = np.random.default_rng(3)
    pts = [random_pair(rng) for _ in range(6)]
    S = np.stack([as_array(s) for s, _ in pts], axis=1)
    Q = np.stack([as_array(q) for _, q in pts], axis=1)
    for kind in KERNEL_KINDS:
        out = kernel_array(kind, S, Q)
        for k, (s, q) in enumerate(pts):
            assert close(Quaternion(*out[:, k]), kernel_eval(kind, s, q), 1e-15)


def test_on_sphere_and_unknown_kind():
    with pytest.raises(OnSpectrumSphere):
        kernel_eval("SL", E2, E1)
    with pytest.raises(OnSpectrumSphere):
        kernel_eval("P2R", 1 + 2 * E3, 1 - 2 * E1)
    with pytest.raises(ValueError):
        kernel_eval("XX", 2, E1)


@given(pairs)
def test_f_kernel_identity(pair):
    s, q = pair
    F = kernel_eval("FL", s, q)
    assert close(F * s - q * F, qcs(s, q).inverse() * -4, 1e-11)


@given(pairs)
def test_p2_kernels_are_dbar_of_cauchy_kernels(pair):
    s, q = pair
    if sphere_distance(s, q) < 0.5:
        return
    left = fd_apply("Dbar", lambda p: kernel_eval("SL", s, p), q)
    right = fd_apply("Dbar", lambda p: kernel_eval("SR", s, p), q, side="right")
    assert close(left, kernel_eval("P2L", s, q), 1e-6)
    assert close(right, kernel_eval("P2R", s, q), 1e-6)


def test_f_kernels_are_laplacians_of_cauchy_kernels():
    rng = np.random.default_rng(11)
    for _ in range(10):
        s, q = random_pair(rng, 0.7)
        lap = fd_apply("Delta", lambda p: kernel_eval("SL", s, p), q)
        assert close(lap, kernel_eval("FL", s, q), 1e-4)


def test_kernel_pde_residuals():
    rng = np.random.default_rng(5)
    for _ in range(8):
        s, q = random_pair(rng, 1.0)
        for kind, side in (("P2L", "left"), ("P2R", "right")):
            rep = residual_suite(lambda p: kernel_eval(kind, s, p), "polyanalytic2", [q], side=side)
            assert rep.passed, rep.max_residual
        for kind, side in (("FL", "left"), ("FR", "right")):
            rep = residual_suite(lambda p: kernel_eval(kind, s, p), "monogenic", [q], side=side)
            assert rep.passed, rep.max_residual


def test_p2_kernel_is_slice_hyperholomorphic_in_s():
    rng = np.random.default_rng(8)
    for _ in range(10):
        s, q = random_pair(rng, 0.5)
        if abs(s.vector) < 0.1:
            continue
        assert slice_cr_residual(lambda t: kernel_eval("P2L", t, q), s, "right") < 1e-8
        assert slice_cr_residual(lambda t: kernel_eval("P2R", t, q), s, "left") < 1e-8
        # the wrong side is not annihilated in general
        assert slice_cr_residual(lambda t: kernel_eval("P2L", t, q), s, "left") > 1e-6


def test_series_examples():
    assert close(dbar_kernel_series("left", 2, E1, tol=1e-9), (16 + 8 * E1) / 25, 1e-9)
    # at q = 0 only the n = 1 term 4 s^-2 survives
    assert close(dbar_kernel_series("left", 10, 0), Quaternion(0.04), 1e-15)
    assert close(kernel_eval("P2L", 10, 0), Quaternion(0.04), 1e-15)
    s, q = Quaternion(2.0), 1.9 * E1
    N = terms_for_tolerance(0.95, 1e-10, 2.0)
    assert close(dbar_kernel_series("left", s, q, terms=N), kernel_eval("P2L", s, q), 1e-10)
    assert N > math.log(1e-10) / math.log(0.95)


@pytest.mark.parametrize("s, q", [(2, E1), (3, 1 + E2), (Quaternion(0.5, 1, -1, 2), Quaternion(0.3, 0.2, 0.1, -0.4))])
def test_series_forms_agree_with_closed_forms(s, q):
    for side, kind in (("left", "P2L"), ("right", "P2R")):
        ref = kernel_eval(kind, s, q)
        assert close(dbar_kernel_series(side, s, q, tol=1e-13), ref, 1e-12)
        assert close(appell_kernel_series(side, s, q, tol=1e-13), ref, 1e-12)


def test_series_q_zero_and_disk_check():
    assert appell_kernel_series("left", 5, 0) == dbar_kernel_series("left", 5, 0)
    with pytest.raises(NotInDisk):
        dbar_kernel_series("left", 1, 2 * E1)
    with pytest.raises(NotInDisk):
        appell_kernel_series("right", E1, E2)
    with pytest.raises(ValueError):
        dbar_kernel_series("up", 2, E1)


@pytest.mark.parametrize("rho", [0.25, 0.5, 0.9])
def test_truncation_error_within_tail_bound(rho):
    rng = np.random.default_rng(int(rho * 100))
    s = Quaternion(*rng.standard_normal(4))
    s = s * (1.7 / abs(s))
    q = Quaternion(*rng.standard_normal(4))
    q = q * (rho * abs(s) / abs(q))
    ref = kernel_eval("P2L", s, q)
    sums = dbar_kernel_partial_sums("left", s, q, 60)
    for N, partial in enumerate(sums, start=1):
        assert abs(partial - ref) <= dbar_tail_bound(rho, N, abs(s)) + 1e-14 * abs(ref)


def test_cauchy_series_matches_cauchy_kernel():
    s, q = Quaternion(1.0, 2.0, 0.0, -1.0), Quaternion(0.2, 0.5, 0.4, 0.1)
    rho = abs(q) / abs(s)
    N = int(math.ceil(math.log(1e-16) / math.log(rho)))
    assert close(cauchy_kernel_series("left", s, q, N), kernel_eval("SL", s, q), 1e-14)
    assert close(cauchy_kernel_series("right", s, q, N), kernel_eval("SR", s, q), 1e-14)


def test_tail_bound_guards():
    with pytest.raises(NotInDisk):
        dbar_tail_bound(1.0, 3, 2.0)
    assert dbar_tail_bound(0.5, 10, 1.0) < dbar_tail_bound(0.5, 9, 1.0)
