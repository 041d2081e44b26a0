"""Named numerical and symbolic checks, grouped into suites.

Every check returns its largest residual; a check passes when that residual
is at most its tolerance.  Each check draws from its own generator seeded by
``(seed, crc32(name))`` so results do not depend on which other checks run.

>>> report = run_suite("symbolic")
>>> all(r["pass"] for r in report)
True
"""
from __future__ import annotations

import math
import warnings
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from . import contour as ct
from . import kern, numdiff, opcalc, qpoly, sfun
from .errors import ComplexComponentSpectrum
from .hcore import E1, E2, E3, Quaternion, imaginary_unit

__all__ = [
    "Check", "CHECKS", "SUITES", "run_suite", "run_check", "relative_error",
    "random_quaternion", "random_pair", "sphere_distance", "series_decay_rate", "vekua_grid_residual",
]

SUITES = ("symbolic", "kernel", "series", "contour", "operator", "pde")


def relative_error(value, reference) -> float:
    """``|value - reference| / max(1, |reference|)``: relative for large
    references, absolute below unit size (so zero references are allowed)."""
    return abs(value - reference) / max(1.0, abs(reference))


def random_quaternion(rng: np.random.Generator, size: float = 1.0) -> Quaternion:
    """Uniform direction, modulus ``size``."""
    v = rng.standard_normal(4)
    return Quaternion(*(v * (size / np.linalg.norm(v))))


def sphere_distance(s, q) -> float:
    """Distance from ``s`` to the sphere ``[q]``, measured in the plane of ``s``."""
    s, q = Quaternion.coerce(s), Quaternion.coerce(q)
    return math.hypot(s.w - q.w, abs(s.vector) - abs(q.vector))


def random_pair(rng: np.random.Generator, min_distance: float = 0.2):
    """``(s, q)`` with ``s`` at least ``min_distance`` away from the sphere ``[q]``."""
    while True:
        s = Quaternion(*rng.uniform(-1.5, 1.5, 4))
        q = Quaternion(*rng.uniform(-1.0, 1.0, 4))
        if sphere_distance(s, q) >= min_distance:
            return s, q


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    tolerance: float
    run: Callable[[np.random.Generator], float]


CHECKS: Dict[str, Check] = {}


def _check(suite: str, tolerance: float):
    def register(fn):
        CHECKS[fn.__name__] = Check(fn.__name__, suite, tolerance, fn)
        return fn
    return register


def run_check(name: str, seed: int = 0) -> dict:
    chk = CHECKS[name]
    rng = np.random.default_rng([seed, zlib.crc32(name.encode())])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ComplexComponentSpectrum)
        residual = float(chk.run(rng))
    return {"check": name, "max_residual": residual, "tolerance": chk.tolerance,
            "pass": bool(residual <= chk.tolerance)}


def run_suite(suite: str = "all", seed: int = 0) -> List[dict]:
    """Run every check of ``suite`` (or all of them), sorted by check name."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"suite must be 'all' or one of {SUITES}, got {suite!r}")
    names = sorted(n for n, c in CHECKS.items() if suite == "all" or c.suite == suite)
    return [run_check(n, seed) for n in names]


# -- symbolic (exact; residual counts mismatches) -----------------------------------

@_check("symbolic", 0.0)
def dbar_monomial_exact(rng) -> float:
    return sum(qpoly.apply_operator_sym("Dbar", qpoly.q_power(n)) != qpoly.dbar_monomial(n)
               for n in range(1, 21))


@_check("symbolic", 0.0)
def appell_decomposition_exact(rng) -> float:
    return sum(qpoly.dbar_monomial(n) != qpoly.dbar_monomial_appell(n) for n in range(2, 21))


@_check("symbolic", 0.0)
def laplacian_forms_exact(rng) -> float:
    bad = sum(qpoly.laplacian_monomial(n, "direct") != qpoly.laplacian_monomial(n, "appell")
              or qpoly.apply_operator_sym("Delta", qpoly.q_power(n)) != qpoly.laplacian_monomial(n)
              for n in range(2, 16))
    return bad


@_check("symbolic", 0.0)
def appell_monogenic_exact(rng) -> float:
    zero = qpoly.QQbarPoly({})
    return sum(qpoly.apply_operator_sym("D", qpoly.appell(ell)) != zero for ell in range(0, 21))


@_check("symbolic", 0.0)
def dbar_monomial_polyanalytic_exact(rng) -> float:
    zero = qpoly.QQbarPoly({})
    return sum(qpoly.apply_operator_sym("D", qpoly.apply_operator_sym("D", qpoly.dbar_monomial(n)))
               != zero for n in range(1, 21))


@_check("symbolic", 0.0)
def laplacian_factorisation_exact(rng) -> float:
    bad = 0
    for _ in range(10):
        coeffs = [Fraction(int(c)) for c in rng.integers(-5, 6, size=int(rng.integers(1, 9)))]
        p = qpoly.monomials(coeffs)
        D = lambda x: qpoly.apply_operator_sym("D", x)
        Db = lambda x: qpoly.apply_operator_sym("Dbar", x)
        lap = qpoly.apply_operator_sym("Delta", p)
        bad += (D(Db(p)) != lap) + (Db(D(p)) != lap)
    return bad


# -- kernels -------------------------------------------------------------------------

@_check("kernel", 1e-11)
def f_kernel_identity(rng) -> float:
    worst = 0.0
    for _ in range(100):
        s, q = random_pair(rng)
        F = kern.kernel_eval("FL", s, q)
        worst = max(worst, relative_error(F * s - q * F, kern.qcs(s, q).inverse() * -4.0))
    return worst


@_check("kernel", 1e-6)
def p2_kernel_matches_fd_dbar(rng) -> float:
    worst = 0.0
    for _ in range(50):
        s, q = random_pair(rng, 0.5)
        fd = numdiff.fd_apply("Dbar", lambda p: kern.kernel_eval("SL", s, p), q)
        worst = max(worst, relative_error(fd, kern.kernel_eval("P2L", s, q)))
    return worst


@_check("kernel", 1e-4)
def p2_kernel_polyanalytic(rng) -> float:
    worst = 0.0
    for _ in range(10):
        # the fixed D^2 stencil needs room: its truncation error grows like dist^-7
        s, q = random_pair(rng, 1.0)
        f = lambda p: kern.kernel_eval("P2L", s, p)
        worst = max(worst, numdiff.residual_suite(f, "polyanalytic2", [q]).max_residual)
    return worst


@_check("kernel", 1e-6)
def f_kernel_monogenic(rng) -> float:
    worst = 0.0
    for _ in range(10):
        s, q = random_pair(rng, 0.5)
        f = lambda p: kern.kernel_eval("FL", s, p)
        worst = max(worst, numdiff.residual_suite(f, "monogenic", [q]).max_residual)
    return worst


# -- series --------------------------------------------------------------------------

SERIES_RATIOS = (0.25, 0.5, 0.9)
RATE_TOLERANCE = 0.03


def _series_point(rng, rho: float):
    s = random_quaternion(rng, 2.0)
    q = random_quaternion(rng, rho * 2.0)
    return s, q


@_check("series", 0.0)
def series_within_tail_bound(rng) -> float:
    """Count of truncations whose error exceeds the analytic tail bound."""
    bad = 0
    for rho in SERIES_RATIOS:
        s, q = _series_point(rng, rho)
        for side, kind in (("left", "P2L"), ("right", "P2R")):
            ref = kern.kernel_eval(kind, s, q)
            for N in (1, 2, 5, 10, 20, 40, 80):
                bound = kern.dbar_tail_bound(rho, N, abs(s)) + 1e-14 * abs(ref)
                for series in (kern.dbar_kernel_series, kern.appell_kernel_series):
                    bad += abs(series(side, s, q, terms=N) - ref) > bound
    return bad


def series_decay_rate(s, q, side: str = "left", floor: float = 1e-12):
    """Fit ``log e_N = a + log(N + 1) + N log r`` over truncation errors above
    ``floor``; returns the fitted ratio ``r``."""
    ref = kern.kernel_eval("P2L" if side == "left" else "P2R", s, q)
    target = floor * (1.0 + abs(ref))
    terms = kern.terms_for_tolerance(abs(q) / abs(s), target, abs(s))
    Ns, errs = [], []
    for N, partial in enumerate(kern.dbar_kernel_partial_sums(side, s, q, terms), start=1):
        e = abs(partial - ref)
        if e < target:
            break
        Ns.append(N)
        errs.append(e)
    Ns = np.asarray(Ns, dtype=float)
    y = np.log(np.asarray(errs)) - np.log(Ns + 1.0)
    slope = np.polyfit(Ns, y, 1)[0]
    return float(np.exp(slope))


@_check("series", RATE_TOLERANCE)
def series_geometric_rate(rng) -> float:
    """Largest ``|r_fit - rho| / rho``."""
    worst = 0.0
    for rho in SERIES_RATIOS:
        s, q = _series_point(rng, rho)
        worst = max(worst, abs(series_decay_rate(s, q) - rho) / rho)
    return worst


# -- contour -------------------------------------------------------------------------

def _left_poly(rng, degree: int):
    coeffs = [random_quaternion(rng, float(rng.uniform(0.5, 1.5))) for _ in range(degree + 1)]
    return coeffs, sfun.left_series(coeffs)


def _interior_point(rng, radius: float = 1.5) -> Quaternion:
    return random_quaternion(rng, float(rng.uniform(0.1, radius)))


@_check("contour", 1e-10)
def cauchy_reproduces(rng) -> float:
    contour = ct.SliceContour.disk(2.0, nodes=256)
    worst = 0.0
    for degree in range(0, 9):
        _, f = _left_poly(rng, degree)
        q = _interior_point(rng)
        worst = max(worst, relative_error(ct.cauchy_eval(f, q, contour), f(q)))
    f = sfun.exponential()
    for _ in range(5):
        q = _interior_point(rng)
        worst = max(worst, relative_error(ct.cauchy_eval(f, q, contour), f(q)))
    return worst


def _symbolic_left_apply(op_poly: Callable[[int], qpoly.QQbarPoly], coeffs, q) -> Quaternion:
    """``sum op(q^n) a_n`` evaluated at ``q``; zero for degrees the operator kills."""
    total = Quaternion(0.0)
    for n, a in enumerate(coeffs):
        p = op_poly(n)
        if p is not None:
            total = total + p.evaluate(q) * a
    return total


def laplacian_of_power(n: int):
    return qpoly.laplacian_monomial(n) if n >= 2 else None


def dbar_of_power(n: int):
    return qpoly.dbar_monomial(n) if n >= 1 else None


@_check("contour", 1e-8)
def fueter_integral_matches_laplacian(rng) -> float:
    contour = ct.SliceContour.disk(2.0, nodes=256)
    worst = 0.0
    for degree in range(2, 9):
        coeffs, f = _left_poly(rng, degree)
        q = _interior_point(rng)
        ref = _symbolic_left_apply(laplacian_of_power, coeffs, q)
        worst = max(worst, relative_error(ct.fueter_integral_eval(f, q, contour), ref))
    return worst


@_check("contour", 1e-8)
def polyanalytic_integral_matches_dbar(rng) -> float:
    contour = ct.SliceContour.disk(2.0, nodes=256)
    worst = 0.0
    for degree in range(1, 9):
        coeffs, f = _left_poly(rng, degree)
        q = _interior_point(rng)
        ref = _symbolic_left_apply(dbar_of_power, coeffs, q)
        for form in ("split", "kernel"):
            val = ct.polyanalytic_integral_eval(f, q, contour, form=form)
            worst = max(worst, relative_error(val, ref))
    return worst


THREE_UNITS = (E1, E2, imaginary_unit(1.0, 1.0, 1.0))


@_check("contour", 1e-9)
def contour_independence(rng) -> float:
    contours = ct.disk_and_units((2.0, 2.5, 3.0), THREE_UNITS, nodes=256)
    worst = 0.0
    for f in (sfun.exponential(), sfun.power(5)):
        q = _interior_point(rng)
        for ev in (ct.cauchy_eval, ct.fueter_integral_eval, ct.polyanalytic_integral_eval):
            rep = ct.contour_independence_check(lambda p, c: ev(f, p, c), q, contours)
            worst = max(worst, rep.max_deviation / max(1.0, abs(rep.values[0])))
    return worst


# -- operators -----------------------------------------------------------------------

@_check("operator", 1e-10)
def spectrum_of_diagonal_lift(rng) -> float:
    worst = 0.0
    for _ in range(10):
        d = int(rng.integers(1, 7))
        points = [random_quaternion(rng, float(rng.uniform(0.2, 2.0))) for _ in range(d)]
        spec = opcalc.s_spectrum(opcalc.diagonal_lift(points))
        expected = sorted((p.w, math.sqrt(p.x ** 2 + p.y ** 2 + p.z ** 2)) for p in points)
        got = sorted(spec.points())
        if len(got) != len(expected):
            return math.inf
        worst = max(worst, max(math.hypot(a[0] - b[0], a[1] - b[1])
                               for a, b in zip(got, expected)))
    return worst


def random_operators(rng, count: int = 50, max_dim: int = 6):
    return [opcalc.random_commuting_operator(rng, int(rng.integers(1, max_dim + 1)),
                                             degree=2, scale=float(rng.uniform(0.2, 1.0)))
            for _ in range(count)]


@_check("operator", 1e-8)
def monomial_calculi(rng) -> float:
    worst = 0.0
    for T in random_operators(rng):
        calc = opcalc.FunctionalCalculus(T)
        for n in range(0, 7):
            f = sfun.power(n)
            for which in ("S", "F", "P2"):
                M = calc.apply(which, f)
                O = opcalc.monomial_oracle(which, n, T)
                worst = max(worst, abs(M - O) / max(1.0, abs(O)))
    return worst


@_check("operator", 1e-8)
def p2_resolvent_matches_series(rng) -> float:
    worst = 0.0
    for T in random_operators(rng, 50, 6):
        s = random_quaternion(rng, 2.0 * opcalc.operator_norm_bound(T))
        for side, kind in (("left", "P2L"), ("right", "P2R")):
            R = opcalc.resolvent_eval(kind, s, T)
            S = opcalc.series_oracle("dbar_kernel_op", side, s, T)
            worst = max(worst, abs(R - S) / max(1.0, abs(R)))
    return worst


@_check("operator", 1e-8)
def calculi_contour_independence(rng) -> float:
    """Three imaginary units times radii ``R, 1.5R, 2R`` around the spectrum."""
    worst = 0.0
    for T in random_operators(rng, 5, 4):
        R = opcalc.default_contour(T).outer.radius
        calcs = [opcalc.FunctionalCalculus(T, ct.SliceContour.disk(radius, 0.0, J))
                 for radius in (R, 1.5 * R, 2.0 * R) for J in THREE_UNITS]
        for f in (sfun.exponential(), sfun.power(4)):
            for which in ("S", "F", "P2"):
                vals = [c.apply(which, f) for c in calcs]
                for v in vals[1:]:
                    worst = max(worst, abs(v - vals[0]) / max(1.0, abs(vals[0])))
    return worst


# -- PDE -----------------------------------------------------------------------------

def vekua_grid_residual(f: sfun.SliceFunction, contour=None) -> float:
    """Largest Vekua residual, divided by ``1 + |A| + |B| + |q|``, of the axial
    parts of the polyanalytic integral of ``f`` on a small ``(q0, r)`` grid."""
    contour = contour or ct.SliceContour.disk(6.0, nodes=256)
    g = lambda p: ct.polyanalytic_integral_eval(f, p, contour)
    A, B = numdiff.axial_parts(g)
    worst = 0.0
    for q0 in (-1.0, 0.0, 1.0):
        for r in (0.5, 1.0, 2.0):
            ra, rb = numdiff.vekua2_residual(A, B, (q0, r))
            scale = 1.0 + abs(A(q0, r)) + abs(B(q0, r)) + math.hypot(q0, r)
            worst = max(worst, max(abs(ra), abs(rb)) / scale)
    return worst


@_check("pde", 1e-4)
def vekua_system(rng) -> float:
    return max(vekua_grid_residual(f) for f in (sfun.power(2), sfun.power(3), sfun.exponential()))


@_check("pde", 1e-6)
def fueter_outputs_monogenic(rng) -> float:
    contour = ct.SliceContour.disk(3.0, nodes=256)
    worst = 0.0
    for f in (sfun.power(3), sfun.exponential()):
        g = lambda p: ct.fueter_integral_eval(f, p, contour)
        samples = [random_quaternion(rng, float(rng.uniform(0.3, 1.5))) for _ in range(4)]
        worst = max(worst, numdiff.residual_suite(g, "monogenic", samples).max_residual)
    return worst
