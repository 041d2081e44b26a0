import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fueterkit.contour import SliceContour
from fueterkit.errors import (ComplexComponentSpectrum, NonCommuting, NormTooLarge, SingularPencil,
                              SpectrumNotEnclosed)
from fueterkit.hcore import E1, E2, E3, Quaternion, imaginary_unit
from fueterkit.numdiff import slice_cr_residual
from fueterkit.opcalc import (CommutingOperator, FunctionalCalculus, QuaternionMatrix,
                              appell_operator_series, calculus_apply, default_contour,
                              diagonal_lift, diagonal_lift_check, monomial_oracle,
                              operator_norm_bound, qcs_op_inverse, random_commuting_operator,
                              resolvent_eval, s_spectrum, series_oracle)
from fueterkit.sfun import exponential, left_series, power, right_series
import oracles

T_E1 = CommutingOperator.from_quaternion(E1)


def rel(a: QuaternionMatrix, b: QuaternionMatrix) -> float:
    return abs(a - b) / max(1.0, abs(b))


def scalar(q, d=1):
    return QuaternionMatrix.scalar(q, d)


def random_ops(seed, count, max_dim=6):
    rng = np.random.default_rng(seed)
    return [random_commuting_operator(rng, int(rng.integers(1, max_dim + 1)),
                                      scale=float(rng.uniform(0.2, 1.0))) for _ in range(count)]


# -- construction -------------------------------------------------------------------

def test_non_commuting_components_are_rejected():
    with pytest.raises(NonCommuting):
        CommutingOperator.from_components(np.eye(2), [[0, 1], [0, 0]], [[0, 0], [1, 0]])


def test_json_round_trip():
    T = random_ops(0, 1)[0]
    again = CommutingOperator.from_json(json.dumps(T.to_json()))
    assert np.array_equal(again.data, T.data)
    M = T.as_qmatrix()
    assert QuaternionMatrix.from_json(M.to_json()).allclose(M, rtol=0)


def test_quaternion_matrix_algebra_matches_block_representation():
    rng = np.random.default_rng(1)
    A = QuaternionMatrix(rng.standard_normal((4, 3, 3)))
    B = QuaternionMatrix(rng.standard_normal((4, 3, 3)))
    prod = oracles.block_left_matrix(A.data) @ oracles.block_left_matrix(B.data)
    assert np.allclose((A @ B).data, oracles.unblock(prod), atol=1e-13)
    q = Quaternion(0.3, -1, 2, 0.5)
    assert rel(q * A, scalar(q, 3) @ A) < 1e-15
    assert rel(A * q, A @ scalar(q, 3)) < 1e-15
    # entrywise conjugation: conj(AB) = (conj(B)^t conj(A)^t)^t
    tr = lambda M: QuaternionMatrix(np.swapaxes(M.data, 1, 2))
    assert rel((A @ B).conj(), tr(tr(B.conj()) @ tr(A.conj()))) < 1e-14


# -- spectrum -----------------------------------------------------------------------

def test_spectrum_examples():
    assert s_spectrum(T_E1).entries == [(0.0, 1.0, 1)]
    diag = CommutingOperator.from_components(np.diag([1.0, 2.0]))
    assert [(round(u, 12), v, m) for u, v, m in s_spectrum(diag).entries] == [(1.0, 0.0, 1), (2.0, 0.0, 1)]
    (u, v, m), = s_spectrum(CommutingOperator.from_quaternion(1 + 2 * E2)).entries
    assert math.isclose(u, 1.0, abs_tol=1e-14) and math.isclose(v, 2.0) and m == 1


def test_spectrum_csv():
    assert s_spectrum(T_E1).to_csv() == "u,v,multiplicity\n0,1,1\n"


def test_spectrum_multiplicity_of_repeated_points():
    T = diagonal_lift([1 + E1, 1 + E2, Quaternion(3.0), Quaternion(3.0)])
    entries = s_spectrum(T).entries
    assert [(round(u, 9), round(v, 9), m) for u, v, m in entries] == [(1.0, 1.0, 2), (3.0, 0.0, 2)]


def test_spectrum_of_diagonal_lifts():
    rng = np.random.default_rng(2)
    for _ in range(20):
        pts = [Quaternion(*rng.uniform(-2, 2, 4)) for _ in range(int(rng.integers(1, 7)))]
        got = sorted(s_spectrum(diagonal_lift(pts)).points())
        expected = sorted((p.w, abs(p.vector)) for p in pts)
        assert len(got) == len(expected)
        for a, b in zip(got, expected):
            assert math.hypot(a[0] - b[0], a[1] - b[1]) <= 1e-10


def test_spectrum_matches_singular_pencil():
    for T in random_ops(3, 5, 4):
        for u, v, _ in s_spectrum(T).entries:
            with pytest.raises(SingularPencil):
                qcs_op_inverse(u + v * E1 * (1 + 1e-15), T)


# -- resolvents ---------------------------------------------------------------------

def test_qcs_inverse_examples():
    assert rel(qcs_op_inverse(2, T_E1), scalar(0.2)) < 1e-15
    diag = CommutingOperator.from_components(np.diag([0.5, -1.0, 2.0]))
    expected = QuaternionMatrix.from_components(np.diag([(3 - t) ** -2 for t in (0.5, -1.0, 2.0)]))
    assert rel(qcs_op_inverse(3, diag), expected) < 1e-15
    with pytest.raises(SingularPencil):
        qcs_op_inverse(1 + 2 * E1, CommutingOperator.from_quaternion(1 + 2 * E2))


@pytest.mark.parametrize("kind, expected", [
    ("SL", (2 + E1) / 5), ("P2L", (16 + 8 * E1) / 25), ("FL", (2 + E1) * (-4 / 25)),
])
def test_resolvent_examples(kind, expected):
    assert rel(resolvent_eval(kind, 2, T_E1), scalar(expected)) < 1e-15


def test_f_resolvent_of_real_diagonal():
    t = [0.5, -1.0]
    T = CommutingOperator.from_components(np.diag(t))
    expected = QuaternionMatrix.from_components(np.diag([-4 * (3 - x) ** -3 for x in t]))
    assert rel(resolvent_eval("FL", 3, T), expected) < 1e-14


@pytest.mark.parametrize("kind", ["SL", "SR", "FL", "FR", "P2L", "P2R"])
def test_resolvents_match_real_representation(kind):
    rng = np.random.default_rng(4)
    for T in random_ops(5, 6):
        s = Quaternion(*rng.uniform(-2, 2, 4))
        expected = QuaternionMatrix(oracles.operator_resolvent(kind, [s.w, s.x, s.y, s.z], T.data))
        assert rel(resolvent_eval(kind, s, T), expected) < 1e-10


def test_p2_resolvent_is_right_slice_hyperholomorphic_in_s():
    for T in random_ops(6, 4, 3):
        s = Quaternion(0.4, 1.5, -0.7, 0.9)
        assert slice_cr_residual(lambda t: resolvent_eval("P2L", t, T), s, "right") < 1e-8
        assert slice_cr_residual(lambda t: resolvent_eval("P2R", t, T), s, "left") < 1e-8


# -- series -------------------------------------------------------------------------

def test_series_examples():
    expected = scalar((16 + 8 * E1) / 25)
    assert rel(series_oracle("dbar_kernel_op", "left", 2, T_E1, 1e-14), expected) < 1e-13
    assert rel(appell_operator_series("left", 2, T_E1, 1e-14), expected) < 1e-13
    zero = CommutingOperator(np.zeros((4, 2, 2)))
    s = Quaternion(1.0, 1.0, 0.0, 0.0)
    four_over_s2 = QuaternionMatrix.scalar((s * s).inverse() * 4, 2)
    assert rel(series_oracle("dbar_kernel_op", "left", s, zero), four_over_s2) < 1e-15
    assert rel(appell_operator_series("right", s, zero), four_over_s2) < 1e-15
    assert rel(series_oracle("f_resolvent_series", "left", 3, T_E1, 1e-14),
               resolvent_eval("FL", 3, T_E1)) < 1e-13


def test_series_oracles_against_resolvents():
    rng = np.random.default_rng(7)
    for T in random_ops(7, 50):
        s = Quaternion(*rng.standard_normal(4))
        s = s * (2 * operator_norm_bound(T) / abs(s))
        for side, p2, f in (("left", "P2L", "FL"), ("right", "P2R", "FR")):
            R = resolvent_eval(p2, s, T)
            assert rel(series_oracle("dbar_kernel_op", side, s, T), R) <= 1e-8
            assert rel(appell_operator_series(side, s, T), R) <= 1e-8
            assert rel(series_oracle("f_resolvent_series", side, s, T), resolvent_eval(f, s, T)) <= 1e-8


def test_series_norm_guard():
    with pytest.raises(NormTooLarge):
        series_oracle("dbar_kernel_op", "left", 0.5, T_E1)
    with pytest.raises(NormTooLarge):
        appell_operator_series("left", 1.0, T_E1)
    with pytest.raises(ValueError):
        series_oracle("cauchy", "left", 3, T_E1)


def test_norm_bound_is_an_upper_bound():
    rng = np.random.default_rng(9)
    for T in random_ops(9, 10):
        bound = operator_norm_bound(T)
        M = T.as_qmatrix()
        for _ in range(5):
            x = QuaternionMatrix(rng.standard_normal((4, T.dim, 1)) * np.ones((1, 1, T.dim)))
            assert abs(M @ x) <= bound * abs(x) * (1 + 1e-12)


# -- calculi ------------------------------------------------------------------------

def test_calculus_examples():
    assert rel(calculus_apply("S", power(2), T_E1), scalar(-1.0)) < 1e-13
    assert rel(calculus_apply("F", power(3), T_E1), scalar(-4 * E1)) < 1e-13
    assert rel(calculus_apply("P2", power(2), T_E1), scalar(4 * E1)) < 1e-13


def test_monomial_calculi_against_oracles():
    for T in random_ops(10, 50):
        calc = FunctionalCalculus(T)
        for n in range(7):
            for which in ("S", "F", "P2"):
                assert rel(calc.apply(which, power(n)), monomial_oracle(which, n, T)) <= 1e-8


def test_calculus_of_left_and_right_series():
    T = random_ops(11, 1, 4)[0]
    a = [Quaternion(0.2, 1, 0, 0), E2, Quaternion(1, 0, 0, -1)]
    Tq = T.as_qmatrix()
    left = calculus_apply("S", left_series(a), T)
    right = calculus_apply("S", right_series(a), T)
    expected_left = sum((Tq ** n * a[n] for n in range(3)), QuaternionMatrix(np.zeros_like(T.data)))
    expected_right = sum((a[n] * Tq ** n for n in range(3)), QuaternionMatrix(np.zeros_like(T.data)))
    assert rel(left, expected_left) < 1e-12
    assert rel(right, expected_right) < 1e-12
    P2 = calculus_apply("P2", left_series(a), T)
    expected = sum((monomial_oracle("P2", n, T) * a[n] for n in range(3)),
                   QuaternionMatrix(np.zeros_like(T.data)))
    assert rel(P2, expected) < 1e-12


def test_calculi_do_not_depend_on_contour():
    for T in random_ops(12, 4, 4):
        R = default_contour(T).outer.radius
        for which in ("S", "F", "P2"):
            vals = [calculus_apply(which, exponential(), T, SliceContour.disk(r, 0.0, J))
                    for r in (R, 2 * R) for J in (E1, E2, imaginary_unit(1, 1, 1))]
            assert max(rel(v, vals[0]) for v in vals) <= 1e-8


def test_diagonal_lift_examples():
    rep = diagonal_lift_check(power(2), [E1])
    assert max(rep.values()) < 1e-13
    T = diagonal_lift([1 + E1])
    assert rel(calculus_apply("P2", power(2), T), scalar(8 + 4 * E1)) < 1e-13
    one = diagonal_lift([Quaternion(0.2, 0.1, 0, 0), E3])
    assert rel(calculus_apply("S", power(0), one), QuaternionMatrix.identity(2)) < 1e-13
    assert abs(calculus_apply("F", power(0), one)) < 1e-13
    assert abs(calculus_apply("P2", power(0), one)) < 1e-13
    rep = diagonal_lift_check(exponential(), [Quaternion(0.3, -0.2, 0.5, 0.1), Quaternion(-1.0), 2 * E2])
    assert max(rep.values()) < 1e-12


def test_spectrum_must_be_enclosed():
    with pytest.raises(SpectrumNotEnclosed):
        calculus_apply("S", power(2), T_E1, SliceContour.disk(0.5))
    with pytest.raises(SpectrumNotEnclosed):
        calculus_apply("S", power(2), T_E1, SliceContour.annulus(1.5, 3.0))
    with pytest.raises(ValueError):
        calculus_apply("G", power(2), T_E1)


def test_deterministic_output():
    T = random_ops(13, 1)[0]
    a = calculus_apply("P2", exponential(), T)
    b = calculus_apply("P2", exponential(), T)
    assert np.array_equal(a.data, b.data)


# -- properties ---------------------------------------------------------------------

coord = st.floats(-1.5, 1.5, allow_nan=False)
points = st.lists(st.tuples(coord, coord, coord, coord), min_size=1, max_size=4)


@settings(max_examples=25)
@given(points)
def test_property_diagonal_lift_reproduces_pointwise_values(pts):
    qs = [Quaternion(*p) for p in pts]
    rep = diagonal_lift_check(exponential(), qs)
    scale = max(1.0, max(math.exp(abs(q)) for q in qs)) * 4
    assert max(rep.values()) <= 1e-9 * scale


@settings(max_examples=25)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 5))
def test_property_p2_resolvent_factors_through_f_resolvent(seed, d):
    T = random_commuting_operator(np.random.default_rng(seed), d)
    s = Quaternion(0.3, 2.5, -1.0, 0.7) * (1 + operator_norm_bound(T))
    FL = resolvent_eval("FL", s, T)
    T0 = QuaternionMatrix.from_components(T.T0)
    assert rel(resolvent_eval("P2L", s, T), T0 @ FL - FL * s) < 1e-12
    FR = resolvent_eval("FR", s, T)
    assert rel(resolvent_eval("P2R", s, T), FR @ T0 - s * FR) < 1e-12


@settings(max_examples=25)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 5))
def test_property_spectrum_points_are_singular(seed, d):
    T = random_commuting_operator(np.random.default_rng(seed), d)
    for u, v, _ in s_spectrum(T).entries:
        with pytest.raises(SingularPencil):
            qcs_op_inverse(u + v * E2, T)


def test_complex_component_spectrum_warns_for_f_and_p2_only():
    rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
    T = CommutingOperator.from_components(np.eye(2), rotation)
    calc = FunctionalCalculus(T)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ComplexComponentSpectrum)
        calc.apply("S", power(2))
    with pytest.warns(ComplexComponentSpectrum):
        calc.apply("P2", power(2))
    assert T_E1.has_real_component_spectra()
    assert not T.has_real_component_spectra()
