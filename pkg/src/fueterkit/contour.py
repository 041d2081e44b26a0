"""Slice Cauchy domains and contour quadrature.

A :class:`SliceContour` is the boundary of a disk or annulus centred on the
real axis, drawn in the complex plane ``C_J`` of a chosen imaginary unit.
On a counter-clockwise circle ``s = c + R e^{J t}`` the measure
``ds_J = ds (-J)`` reduces to ``R e^{J t} dt``.  The periodic trapezoidal rule
with ``N`` equispaced nodes therefore uses the quaternion weights
``(R / N) e^{J t_k}`` (already divided by ``2 pi``), negated on clockwise inner
circles.

Integrands are assembled in the written order: ``kernel * weight * f(s)`` for
left formulas and ``f(s) * weight * kernel`` for right ones.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import OutsideDomain, PointOnBoundary, SphereHitsBoundary
from .hcore import E1, Quaternion, as_array, from_array, qmul, slice_decompose
from .kern import kernel_array
from .sfun import SliceFunction

__all__ = [
    "Circle", "SliceContour", "default_nodes", "quadrature", "cauchy_eval",
    "fueter_integral_eval", "polyanalytic_integral_eval",
    "contour_independence_check", "IndependenceReport", "disk_and_units",
]

DEFAULT_NODES = 256


def default_nodes() -> int:
    """Node count per circle; ``FUETERKIT_NODES`` overrides the default of 256."""
    value = os.environ.get("FUETERKIT_NODES")
    if value:
        n = int(value)
        if n < 8:
            raise ValueError("FUETERKIT_NODES must be at least 8")
        return n
    return DEFAULT_NODES


@dataclass(frozen=True)
class Circle:
    center: float
    radius: float
    orientation: str = "ccw"

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.orientation not in ("ccw", "cw"):
            raise ValueError(f"orientation must be 'ccw' or 'cw', got {self.orientation!r}")


@dataclass(frozen=True)
class SliceContour:
    """Boundary of a disk or annulus in the slice ``C_J``."""

    J: Quaternion = E1
    circles: Tuple[Circle, ...] = (Circle(0.0, 1.0),)
    nodes: Optional[int] = None
    margin: Optional[float] = None

    def __post_init__(self):
        J = Quaternion.coerce(self.J)
        if abs(J.w) > 1e-12 or abs(abs(J) - 1.0) > 1e-12:
            raise ValueError(f"J must be a unit imaginary quaternion, got {J}")
        object.__setattr__(self, "J", J)
        outer = [c for c in self.circles if c.orientation == "ccw"]
        if len(outer) != 1:
            raise ValueError("exactly one counter-clockwise outer circle is required")

    @classmethod
    def disk(cls, radius: float, center: float = 0.0, J=E1, nodes=None, margin=None):
        return cls(J, (Circle(center, radius, "ccw"),), nodes, margin)

    @classmethod
    def annulus(cls, r_in: float, r_out: float, center: float = 0.0, J=E1,
                nodes=None, margin=None):
        if not 0 < r_in < r_out:
            raise ValueError("annulus needs 0 < r_in < r_out")
        return cls(J, (Circle(center, r_out, "ccw"), Circle(center, r_in, "cw")),
                   nodes, margin)

    @property
    def node_count(self) -> int:
        return self.nodes if self.nodes is not None else default_nodes()

    @property
    def outer(self) -> Circle:
        return next(c for c in self.circles if c.orientation == "ccw")

    @property
    def safety_margin(self) -> float:
        if self.margin is not None:
            return self.margin
        return 1e-6 * (1.0 + self.outer.radius)

    def with_J(self, J) -> "SliceContour":
        return SliceContour(J, self.circles, self.nodes, self.margin)

    def boundary_distance(self, u: float, v: float) -> float:
        """Signed distance of ``u + i v`` to the boundary; positive inside the domain."""
        z = complex(u, v)
        dist = math.inf
        for c in self.circles:
            d = abs(z - c.center)
            dist = min(dist, c.radius - d if c.orientation == "ccw" else d - c.radius)
        return dist

    def contains(self, u: float, v: float, margin: float = 0.0) -> bool:
        return self.boundary_distance(u, v) > margin

    def max_modulus(self) -> float:
        c = self.outer
        return abs(c.center) + c.radius

    def nodes_and_weights(self) -> Tuple[np.ndarray, np.ndarray]:
        """Nodes ``s_k`` and weights ``w_k`` as ``(4, M)`` arrays; ``sum g(s_k) w_k``
        approximates ``(1/2pi) \\oint g(s) ds_J``."""
        N = self.node_count
        theta = 2.0 * np.pi * np.arange(N) / N
        J = as_array(self.J)[:, None]
        unit = np.zeros((4, N))
        unit[0] = np.cos(theta)
        unit = unit + J * np.sin(theta)          # e^{J t}
        s_parts, w_parts = [], []
        for c in self.circles:
            s = c.radius * unit
            s[0] = s[0] + c.center
            sign = 1.0 if c.orientation == "ccw" else -1.0
            s_parts.append(s)
            w_parts.append(sign * c.radius / N * unit)
        return np.concatenate(s_parts, axis=1), np.concatenate(w_parts, axis=1)


def quadrature(integrand: Callable, contour: SliceContour,
               right: Optional[Callable] = None) -> Quaternion:
    """Trapezoidal approximation of ``(1/2pi) \\oint integrand(s) ds_J``.

    With ``right`` given, the integrand is ``integrand(s) ds_J right(s)`` with
    the measure kept between the two factors.  Both callables take and return
    ``(4, M)`` component arrays.
    """
    s, w = contour.nodes_and_weights()
    left_vals = np.asarray(integrand(s), dtype=float)
    if right is None:
        vals = qmul(left_vals, w)
    else:
        vals = qmul(qmul(left_vals, w), np.asarray(right(s), dtype=float))
    return from_array(np.sum(vals, axis=1))


# -- validation --------------------------------------------------------------------

def _check_point(q: Quaternion, contour: SliceContour):
    sp = slice_decompose(q)
    dist = contour.boundary_distance(sp.u, sp.v)
    on_plane = sp.J is None or abs(abs(sp.J.x * contour.J.x + sp.J.y * contour.J.y
                                       + sp.J.z * contour.J.z) - 1.0) < 1e-12
    if on_plane and abs(dist) <= 1e-12 * (1.0 + abs(q)):
        raise PointOnBoundary(f"q = {q} lies on the contour")
    if dist <= contour.safety_margin:
        raise SphereHitsBoundary(
            f"sphere of q = {q} (u={sp.u:.6g}, v={sp.v:.6g}) is not inside the domain "
            f"with margin {contour.safety_margin:.3g}")


def _check_function(f: SliceFunction, contour: SliceContour):
    if contour.max_modulus() >= f.radius:
        raise OutsideDomain(f"contour leaves the disk of convergence |s| < {f.radius}")
    for z in f.singularities:
        d = contour.boundary_distance(z.real, abs(z.imag))
        if d > -contour.safety_margin:
            raise OutsideDomain(f"singularity {z} of {f.name or 'f'} is not outside the closed domain")


def _prepare(f: SliceFunction, q, contour: SliceContour, chirality: Optional[str]):
    q = Quaternion.coerce(q)
    side = chirality or f.chirality
    f = f.with_chirality(side)
    _check_point(q, contour)
    _check_function(f, contour)
    return f, q, side


def cauchy_eval(f: SliceFunction, q, contour: SliceContour,
                chirality: Optional[str] = None) -> Quaternion:
    """Slice Cauchy formula: ``(1/2pi) \\oint S_L^-1(s, q) ds_J f(s)`` (or the right form)."""
    f, q, side = _prepare(f, q, contour, chirality)
    qa = as_array(q)[:, None]
    if side == "left":
        return quadrature(lambda s: kernel_array("SL", s, qa), contour, f.eval_array)
    return quadrature(f.eval_array, contour, lambda s: kernel_array("SR", s, qa))


def fueter_integral_eval(f: SliceFunction, q, contour: SliceContour,
                         chirality: Optional[str] = None) -> Quaternion:
    """Laplacian of a slice function as a contour integral: ``Delta f(q) = (1/2pi) \\oint F_L(s, q) ds_J f(s)``."""
    f, q, side = _prepare(f, q, contour, chirality)
    qa = as_array(q)[:, None]
    if side == "left":
        return quadrature(lambda s: kernel_array("FL", s, qa), contour, f.eval_array)
    return quadrature(f.eval_array, contour, lambda s: kernel_array("FR", s, qa))


def polyanalytic_integral_eval(f: SliceFunction, q, contour: SliceContour,
                               chirality: Optional[str] = None,
                               form: str = "split") -> Quaternion:
    """Order-2 polyanalytic integral representation of ``Dbar f`` (left) or ``f Dbar`` (right).

    ``form='split'`` evaluates
    ``-(1/2pi) sum_{k=0,1} (-q0)^k \\oint F_L(s,q) s^(1-k) ds_J f(s)``
    as two separate integrals; ``form='kernel'`` integrates the combined
    kernel ``P2L`` (resp. ``P2R``) once.
    """
    f, q, side = _prepare(f, q, contour, chirality)
    qa = as_array(q)[:, None]
    if form == "kernel":
        if side == "left":
            return quadrature(lambda s: kernel_array("P2L", s, qa), contour, f.eval_array)
        return quadrature(f.eval_array, contour, lambda s: kernel_array("P2R", s, qa))
    if form != "split":
        raise ValueError(f"form must be 'split' or 'kernel', got {form!r}")
    if side == "left":
        # k = 0: F_L(s,q) s ; k = 1: F_L(s,q)
        i0 = quadrature(lambda s: qmul(kernel_array("FL", s, qa), s), contour, f.eval_array)
        i1 = quadrature(lambda s: kernel_array("FL", s, qa), contour, f.eval_array)
    else:
        i0 = quadrature(f.eval_array, contour, lambda s: qmul(s, kernel_array("FR", s, qa)))
        i1 = quadrature(f.eval_array, contour, lambda s: kernel_array("FR", s, qa))
    return -(i0 - i1 * q.w)


# -- well-posedness ------------------------------------------------------------------

@dataclass
class IndependenceReport:
    values: List[Quaternion]
    max_deviation: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.max_deviation <= self.tolerance


def contour_independence_check(evaluator: Callable[[Quaternion, SliceContour], Quaternion],
                               q, contours: Iterable[SliceContour],
                               tol: float = 1e-9) -> IndependenceReport:
    """Evaluate on every contour and report the largest pairwise deviation."""
    q = Quaternion.coerce(q)
    values = [evaluator(q, c) for c in contours]
    dev = 0.0
    for i, a in enumerate(values):
        for b in values[i + 1:]:
            dev = max(dev, abs(a - b))
    return IndependenceReport(values, dev, tol)


def disk_and_units(radii: Sequence[float], units: Sequence[Quaternion],
                   center: float = 0.0, nodes=None) -> List[SliceContour]:
    """All disk contours for the given radii and imaginary units."""
    return [SliceContour.disk(R, center, J, nodes) for R in radii for J in units]

