import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fueterkit.errors import NonPositiveRadius
from fueterkit.hcore import E1, E2, Quaternion
from fueterkit.numdiff import (FDConfig, ResidualReport, axial_parts, fd_apply, partial,
                               residual_suite, slice_cr_residual, vekua2_residual)
from fueterkit.qpoly import QQbarPoly, appell, apply_operator_sym
from fueterkit.sfun import exponential, power, slice_eval
import oracles

Q1 = Quaternion(0.3, -0.4, 0.5, 0.2)


def sq(q):
    return q * q


def test_dbar_of_identity():
    assert abs(fd_apply("Dbar", lambda q: q, Q1) - Quaternion(4.0)) < 1e-8
    assert abs(fd_apply("D", lambda q: q, Q1) - Quaternion(-2.0)) < 1e-8


def test_laplacian_of_square():
    assert abs(fd_apply("Delta", sq, Q1) - Quaternion(-4.0)) < 1e-6


def test_appell_polynomial_is_monogenic():
    p = appell(2)
    assert abs(fd_apply("D", p.evaluate, Q1)) < 1e-8
    assert abs(fd_apply("D", p.evaluate, Q1, side="right")) < 1e-8


def test_partial_derivative():
    f = lambda q: Quaternion(q.w * q.y ** 2)
    assert abs(partial(f, Q1, 2, 1e-5) - Quaternion(2 * 0.3 * 0.5)) < 1e-9


def test_unknown_operator_and_side():
    with pytest.raises(ValueError):
        fd_apply("grad", sq, Q1)
    with pytest.raises(ValueError):
        fd_apply("D", sq, Q1, side="up")


def _random_poly(rng, degree=4):
    terms = {}
    for _ in range(int(rng.integers(1, 6))):
        a = int(rng.integers(0, degree + 1))
        b = int(rng.integers(0, degree + 1 - a))
        terms[(a, b)] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
    return QQbarPoly(terms)


@pytest.mark.parametrize("op, tol", [("D", 1e-6), ("Dbar", 1e-6), ("Delta", 1e-4)])
def test_fd_matches_exact_operator_on_random_polynomials(op, tol):
    rng = np.random.default_rng(20)
    for _ in range(20):
        p = _random_poly(rng)
        exact = apply_operator_sym(op, p)
        q = Quaternion(*rng.uniform(-1, 1, 4))
        fd = fd_apply(op, p.evaluate, q)
        assert abs(fd - exact.evaluate(q)) / (1 + abs(p.evaluate(q)) + abs(q)) < tol


def test_fd_dbar_matches_coordinate_oracle():
    p = QQbarPoly({(2, 1): 1, (0, 3): Fraction(-1, 2)})
    exact = oracles.dirac(oracles.from_qqbar(p.terms), -1)
    q = Quaternion(0.2, 0.7, -0.1, 0.4)
    expected = Quaternion(*exact.evaluate([q.w, q.x, q.y, q.z]))
    assert abs(fd_apply("Dbar", p.evaluate, q) - expected) < 1e-8


def test_laplacian_factorises_numerically():
    f = lambda q: slice_eval(exponential(), q)
    q = Quaternion(0.1, 0.5, -0.3, 0.2)
    lap = fd_apply("Delta", f, q)
    cfg = FDConfig(h1=1e-3)
    d_dbar = fd_apply("D", lambda p: fd_apply("Dbar", f, p, cfg), q, cfg)
    dbar_d = fd_apply("Dbar", lambda p: fd_apply("D", f, p, cfg), q, cfg)
    assert abs(lap - d_dbar) < 1e-4
    assert abs(lap - dbar_d) < 1e-4


def test_step_halving_shrinks_error_fourfold():
    f = lambda q: slice_eval(exponential(), q)
    q = Quaternion(0.4, 0.3, 0.2, -0.1)
    ref = fd_apply("Dbar", f, q, FDConfig(h1=1e-4))
    errors = []
    for h in (0.08, 0.04):
        errors.append(abs(fd_apply("Dbar", f, q, FDConfig(h1=h)) - ref))
    assert 3.5 < errors[0] / errors[1] < 4.5


# -- axial system -------------------------------------------------------------------

def test_vekua_examples():
    A = lambda q0, r: Quaternion(8.0 * q0)
    B = lambda q0, r: Quaternion(4.0 * r)
    ra, rb = vekua2_residual(A, B, (0.3, 0.7))
    assert abs(ra) < 1e-8 and abs(rb) < 1e-8
    ra, rb = vekua2_residual(lambda q0, r: Quaternion(2.5), lambda q0, r: Quaternion(0.0), (1.0, 2.0))
    assert abs(ra) < 1e-12 and abs(rb) < 1e-12


def test_vekua_rejects_non_positive_radius():
    with pytest.raises(NonPositiveRadius):
        vekua2_residual(lambda a, b: Quaternion(0.0), lambda a, b: Quaternion(0.0), (0.0, 0.0))


def test_vekua_small_radius_shrinks_step():
    A = lambda q0, r: Quaternion(8.0 * q0)
    B = lambda q0, r: Quaternion(4.0 * r)
    ra, rb = vekua2_residual(A, B, (0.0, 1e-4))
    assert abs(ra) < 1e-6 and abs(rb) < 1e-6


def test_vekua_detects_non_polyanalytic_parts():
    ra, rb = vekua2_residual(lambda q0, r: Quaternion(q0 ** 3), lambda q0, r: Quaternion(0.0), (0.5, 1.0))
    assert abs(ra) > 1.0


def test_axial_parts_of_dbar_square():
    # Dbar q^2 = 8 q0 + 4 q_vec, so A = 8 q0 and B = 4 r
    dbar = apply_operator_sym("Dbar", QQbarPoly({(2, 0): 1}))
    for omega in (E1, E2):
        A, B = axial_parts(dbar.evaluate, omega)
        assert abs(A(0.3, 0.7) - Quaternion(2.4)) < 1e-14
        assert abs(B(0.3, 0.7) - Quaternion(2.8)) < 1e-14
    ra, rb = vekua2_residual(*axial_parts(dbar.evaluate), (0.3, 0.7))
    assert abs(ra) < 1e-8 and abs(rb) < 1e-8


# -- residual suite -----------------------------------------------------------------

SAMPLES = [Quaternion(0.1, 0.2, 0.3, 0.4), Quaternion(-0.5, 0.1, 0.0, 0.7), Quaternion(1.0, -0.3, 0.2, 0.0)]


def test_residual_suite_kinds():
    rep = residual_suite(appell(3).evaluate, "monogenic", SAMPLES)
    assert rep.passed and rep.max_residual < 1e-8
    rep = residual_suite(sq, "harmonic", SAMPLES)
    assert not rep.passed
    rep = residual_suite(lambda q: q * q.conj() * q, "polyanalytic2", SAMPLES)
    assert not rep.passed
    rep = residual_suite(sq, "monogenic", SAMPLES, tol=10.0)
    assert isinstance(rep, ResidualReport) and rep.tolerance == 10.0 and rep.passed


def test_monogenic_residual_of_identity():
    rep = residual_suite(lambda q: q, "monogenic", [Quaternion(0.0)])
    assert math.isclose(rep.max_residual, 2.0, rel_tol=1e-8)
    assert not rep.passed


def test_polyanalytic_residual_of_dbar_outputs():
    g = QQbarPoly({(2, 0): 1})
    dbar = apply_operator_sym("Dbar", g)
    rep = residual_suite(dbar.evaluate, "polyanalytic2", SAMPLES)
    assert rep.passed


def test_residual_suite_rejects_unknown_kind():
    with pytest.raises(ValueError):
        residual_suite(sq, "elliptic", SAMPLES)


# -- slice Cauchy-Riemann -----------------------------------------------------------

def test_slice_cr_for_slice_functions():
    f = lambda q: slice_eval(exponential(), q)
    assert slice_cr_residual(f, Quaternion(0.2, 0.4, -0.3, 0.5), "left") < 1e-9
    assert slice_cr_residual(lambda q: q.conj(), Quaternion(0.2, 0.4, 0.1, 0.0), "left") > 0.5


def test_slice_cr_needs_non_real_point():
    with pytest.raises(ValueError):
        slice_cr_residual(sq, Quaternion(1.0))


coord = st.floats(-1.0, 1.0, allow_nan=False)


@settings(max_examples=40)
@given(coord, coord, coord, coord, st.integers(0, 6))
def test_property_dbar_power_is_polyanalytic(w, x, y, z, n):
    exact = apply_operator_sym("Dbar", QQbarPoly({(n, 0): 1}))
    q = Quaternion(w, x, y, z)
    # nested first differences stay accurate at a smaller step than the default,
    # which keeps the degree-6 truncation term below the tolerance
    cfg = FDConfig(h2=2e-4)
    value = abs(fd_apply("D2", exact.evaluate, q, cfg)) / (1 + abs(exact.evaluate(q)) + abs(q))
    assert value < 1e-4


@settings(max_examples=40)
@given(coord, coord, coord, coord, st.integers(0, 6))
def test_property_powers_are_slice_regular(w, x, y, z, n):
    q = Quaternion(w, x, y, z)
    if abs(q.vector) < 1e-3:
        return
    assert slice_cr_residual(lambda p: p ** n, q, "left") < 1e-7
    assert slice_cr_residual(lambda p: p ** n, q, "right") < 1e-7
