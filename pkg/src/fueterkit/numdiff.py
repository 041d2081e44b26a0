"""Finite-difference checks of the differential operators.

Stencils are central.  First derivatives use step ``h1 = 1e-5 * scale`` and
second derivatives ``h2 = 1e-3 * scale`` with ``scale = 1 + |q|``; those
choices balance truncation against cancellation for second differences in
double precision.

The function under test may return a :class:`~fueterkit.hcore.Quaternion`
or anything else supporting ``+``, ``-``, scalar multiplication and
multiplication by a quaternion on either side (for instance
:class:`~fueterkit.opcalc.QuaternionMatrix`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple

from .errors import NonPositiveRadius
from .hcore import E1, E2, E3, Quaternion

__all__ = [
    "FDConfig", "fd_apply", "partial", "vekua2_residual", "axial_parts",
    "residual_suite", "ResidualReport", "slice_cr_residual",
]

UNITS = (Quaternion(1.0), E1, E2, E3)
OPERATORS = ("D", "Dbar", "Delta", "D2")


@dataclass(frozen=True)
class FDConfig:
    """Step sizes relative to ``scale``; ``None`` picks ``1 + |q|`` at the point."""

    h1: float = 1e-5
    h2: float = 1e-3
    scale: Optional[float] = None

    def steps(self, q: Quaternion) -> Tuple[float, float]:
        scale = self.scale if self.scale is not None else 1.0 + abs(q)
        return self.h1 * scale, self.h2 * scale


def partial(f: Callable, q: Quaternion, axis: int, h: float):
    """Central first difference along ``e_axis`` (axis 0 is the real direction)."""
    step = UNITS[axis] * h
    return (f(q + step) - f(q - step)) * (1.0 / (2.0 * h))


def _dirac(f: Callable, q: Quaternion, h: float, sign: float, side: str):
    out = partial(f, q, 0, h)
    for i in (1, 2, 3):
        d = partial(f, q, i, h)
        out = out + (UNITS[i] * d if side == "left" else d * UNITS[i]) * sign
    return out


def _laplacian(f: Callable, q: Quaternion, h: float):
    centre = f(q)
    out = None
    for e in UNITS:
        step = e * h
        term = (f(q + step) - centre * 2.0 + f(q - step)) * (1.0 / h ** 2)
        out = term if out is None else out + term
    return out


def fd_apply(op: str, f: Callable, q, cfg: Optional[FDConfig] = None, side: str = "left"):
    """Apply ``D``, ``Dbar``, ``Delta`` or ``D2 = D D`` to ``f`` at ``q`` numerically.

    ``side='right'`` lets the imaginary units act from the right (``f D``).
    """
    if op not in OPERATORS:
        raise ValueError(f"op must be one of {OPERATORS}, got {op!r}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    q = Quaternion.coerce(q)
    h1, h2 = (cfg or FDConfig()).steps(q)
    if op == "D":
        return _dirac(f, q, h1, 1.0, side)
    if op == "Dbar":
        return _dirac(f, q, h1, -1.0, side)
    if op == "Delta":
        return _laplacian(f, q, h2)
    inner = lambda p: _dirac(f, p, h2, 1.0, side)
    return _dirac(inner, q, h2, 1.0, side)


def vekua2_residual(A: Callable, B: Callable, point: Tuple[float, float],
                    cfg: Optional[FDConfig] = None) -> Tuple[Quaternion, Quaternion]:
    """Residuals of the order-2 axial system at ``(q0, r)``.

    With ``A, B`` callables ``(q0, r) -> Quaternion`` the two residuals are::

        A00 - 2 B0r - A_rr - (4/r) B0 - (2/r) A_r
        B00 + 2 A0r - B_rr - (2/r) B_r + (2/r^2) B

    and both vanish for the axial parts of ``A + omega B`` with ``D^2 = 0``.
    """
    q0, r = float(point[0]), float(point[1])
    if not r > 0:
        raise NonPositiveRadius(f"r must be positive, got {r}")
    cfg = cfg or FDConfig()
    scale = cfg.scale if cfg.scale is not None else 1.0 + math.hypot(q0, r)
    h1, h2 = cfg.h1 * scale, cfg.h2 * scale
    if h2 >= r:
        h2 = r / 4.0
        h1 = min(h1, h2)

    def d0(g, h):
        return (g(q0 + h, r) - g(q0 - h, r)) * (1.0 / (2 * h))

    def dr(g, h):
        return (g(q0, r + h) - g(q0, r - h)) * (1.0 / (2 * h))

    def d00(g, h):
        return (g(q0 + h, r) - g(q0, r) * 2.0 + g(q0 - h, r)) * (1.0 / h ** 2)

    def drr(g, h):
        return (g(q0, r + h) - g(q0, r) * 2.0 + g(q0, r - h)) * (1.0 / h ** 2)

    def d0r(g, h):
        return (g(q0 + h, r + h) - g(q0 + h, r - h) - g(q0 - h, r + h)
                + g(q0 - h, r - h)) * (1.0 / (4 * h ** 2))

    res_a = (d00(A, h2) - d0r(B, h2) * 2.0 - drr(A, h2)
             - d0(B, h1) * (4.0 / r) - dr(A, h1) * (2.0 / r))
    res_b = (d00(B, h2) + d0r(A, h2) * 2.0 - drr(B, h2)
             - dr(B, h1) * (2.0 / r) + B(q0, r) * (2.0 / r ** 2))
    return res_a, res_b


def axial_parts(g: Callable, omega: Quaternion = E1) -> Tuple[Callable, Callable]:
    """Split ``g(q0 + omega r) = A + omega B`` along a fixed unit ``omega``.

    Valid for axially symmetric ``g``, whose parts ``A, B`` do not depend on
    ``omega``: ``A = (g(q0 + omega r) + g(q0 - omega r)) / 2`` and
    ``B = -omega (g(q0 + omega r) - g(q0 - omega r)) / 2``.
    """
    omega = Quaternion.coerce(omega)

    def A(q0, r):
        return (g(Quaternion(q0) + omega * r) + g(Quaternion(q0) - omega * r)) * 0.5

    def B(q0, r):
        return omega * (g(Quaternion(q0) + omega * r) - g(Quaternion(q0) - omega * r)) * -0.5

    return A, B


@dataclass
class ResidualReport:
    kind: str
    residuals: List[float]
    tolerance: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


_KIND_OPERATOR = {"monogenic": "D", "polyanalytic2": "D2", "harmonic": "Delta"}
_KIND_TOL = {"monogenic": 1e-6, "polyanalytic2": 1e-4, "harmonic": 1e-4}


def residual_suite(f: Callable, kind: str, samples: Iterable, cfg: Optional[FDConfig] = None,
                   side: str = "left", tol: Optional[float] = None) -> ResidualReport:
    """Largest relative residual of ``D f``, ``D^2 f`` or ``Delta f`` over sample points.

    Each residual is divided by ``1 + |f(q)| + |q|``.
    """
    if kind not in _KIND_OPERATOR:
        raise ValueError(f"kind must be one of {sorted(_KIND_OPERATOR)}, got {kind!r}")
    op = _KIND_OPERATOR[kind]
    out = []
    for q in samples:
        q = Quaternion.coerce(q)
        value = abs(fd_apply(op, f, q, cfg, side))
        out.append(value / (1.0 + abs(f(q)) + abs(q)))
    return ResidualReport(kind, out, _KIND_TOL[kind] if tol is None else tol)


def slice_cr_residual(g: Callable, s, side: str = "right", h: float = 1e-5) -> float:
    """Slice Cauchy-Riemann residual of ``g`` at ``s`` within the plane of ``s``.

    ``side='left'`` checks ``d_u g + J d_v g``; ``side='right'`` checks
    ``d_u g + (d_v g) J``.  The result is relative to ``1 + |g(s)|``.
    """
    s = Quaternion.coerce(s)
    vec = s.vector
    v = abs(vec)
    if v == 0:
        raise ValueError("s must be non-real to fix its complex plane")
    J = vec * (1.0 / v)
    du = (g(s + h) - g(s - h)) * (1.0 / (2 * h))
    dv = (g(s + J * h) - g(s - J * h)) * (1.0 / (2 * h))
    res = du + (J * dv if side == "left" else dv * J)
    return abs(res) / (1.0 + abs(g(s)))
