"""Quaternion arithmetic and slice geometry.

A :class:`Quaternion` ``w + x e1 + y e2 + z e3`` holds four real components.
Components may be floats or :class:`fractions.Fraction`; products, sums and
inverses stay exact for rational input, while anything needing a square root
(the modulus, slice decomposition) falls back to floating point.

Besides the scalar class the module provides array helpers (``qmul``,
``qconj``, ...) that act on numpy arrays of shape ``(4, ...)``.  They are the
vectorised counterparts used by the kernel and quadrature code.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from numbers import Real
from typing import Optional

import numpy as np

__all__ = [
    "Quaternion", "SlicePoint", "ONE", "E1", "E2", "E3",
    "quat_mul", "quat_inv", "slice_decompose", "slice_compose", "same_sphere",
    "imaginary_unit", "parse_quaternion", "format_quaternion",
    "as_array", "from_array", "qmul", "qconj", "qnorm2", "qinv",
]


@dataclass(frozen=True)
class Quaternion:
    """Quaternion ``w + x e1 + y e2 + z e3``."""

    w: Real = 0.0
    x: Real = 0.0
    y: Real = 0.0
    z: Real = 0.0

    # numpy scalars must defer to __rmul__/__radd__ instead of broadcasting
    __array_ufunc__ = None

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        """Build a quaternion from a quaternion, a real, a complex or a 4-sequence."""
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, Real):
            return cls(value)
        if isinstance(value, complex):
            # complex numbers are read in the slice C_{e1}
            return cls(value.real, value.imag)
        w, x, y, z = value
        return cls(w, x, y, z)

    # -- parts ---------------------------------------------------------------

    @property
    def real(self):
        return self.w

    @property
    def vector(self) -> "Quaternion":
        """Imaginary part ``x e1 + y e2 + z e3``."""
        return Quaternion(0 * self.w, self.x, self.y, self.z)

    def components(self) -> tuple:
        return (self.w, self.x, self.y, self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self):
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def is_real(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.w + other.w, self.x + other.x,
                              self.y + other.y, self.z + other.z)
        if isinstance(other, Real):
            return Quaternion(self.w + other, self.x, self.y, self.z)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, (Quaternion, Real)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        if isinstance(other, Real):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        # reals are central, so left and right scaling coincide
        if isinstance(other, Real):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            if other == 0:
                raise ZeroDivisionError("quaternion division by zero")
            return Quaternion(self.w / other, self.x / other,
                              self.y / other, self.z / other)
        if isinstance(other, Quaternion):
            # right division a / b = a b^{-1}
            return self * quat_inv(other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return quat_inv(self) * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return quat_inv(self) ** (-n)
        zero = 0 * self.w
        result = Quaternion(1 + zero, zero, zero, zero)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "Quaternion":
        return quat_inv(self)

    def isclose(self, other, rel_tol=1e-9, abs_tol=0.0) -> bool:
        other = Quaternion.coerce(other)
        diff = abs(self - other)
        return diff <= max(rel_tol * max(abs(self), abs(other)), abs_tol)

    def __float__(self):
        if not self.is_real():
            raise TypeError(f"cannot convert non-real quaternion {self} to float")
        return float(self.w)

    def __str__(self):
        return format_quaternion(self)


ONE = Quaternion(1.0)
E1 = Quaternion(0.0, 1.0, 0.0, 0.0)
E2 = Quaternion(0.0, 0.0, 1.0, 0.0)
E3 = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product with ``e1 e2 = e3``, ``e2 e3 = e1``, ``e3 e1 = e2``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def quat_inv(q: Quaternion) -> Quaternion:
    """Return ``conj(q) / |q|^2``; raises :class:`ZeroDivisionError` for ``q = 0``."""
    n2 = q.norm2()
    if n2 == 0:
        raise ZeroDivisionError("inverse of the zero quaternion")
    return Quaternion(q.w / n2, -q.x / n2, -q.y / n2, -q.z / n2)


# -- slice geometry -----------------------------------------------------------

@dataclass(frozen=True)
class SlicePoint:
    """``q = u + J v`` with ``v >= 0``; ``J`` is ``None`` on the real axis."""

    u: float
    v: float
    J: Optional[Quaternion] = None

    def compose(self) -> Quaternion:
        return slice_compose(self.u, self.v, self.J)


def slice_decompose(q: Quaternion) -> SlicePoint:
    q = Quaternion.coerce(q)
    v = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    if v == 0.0:
        return SlicePoint(float(q.w), 0.0, None)
    return SlicePoint(float(q.w), v, Quaternion(0.0, q.x / v, q.y / v, q.z / v))


def slice_compose(u: float, v: float, J: Optional[Quaternion]) -> Quaternion:
    if J is None:
        if v != 0:
            raise ValueError("an imaginary unit is required when v != 0")
        return Quaternion(u)
    return Quaternion(u + 0 * J.w, v * J.x, v * J.y, v * J.z)


def imaginary_unit(x: float, y: float, z: float) -> Quaternion:
    """Normalise ``x e1 + y e2 + z e3`` to a point of the unit sphere S."""
    n = math.sqrt(x * x + y * y + z * z)
    if n == 0:
        raise ValueError("zero vector has no direction")
    return Quaternion(0.0, x / n, y / n, z / n)


def same_sphere(q: Quaternion, p: Quaternion, eps: Optional[float] = None) -> bool:
    """True when ``p`` lies on the 2-sphere ``[q] = Re(q) + S |Im(q)|``.

    The default tolerance is ``1e-10 * (1 + |q|)``.
    """
    q = Quaternion.coerce(q)
    p = Quaternion.coerce(p)
    if eps is None:
        eps = 1e-10 * (1.0 + abs(q))
    sq = slice_decompose(q)
    sp = slice_decompose(p)
    return abs(sq.u - sp.u) <= eps and abs(sq.v - sp.v) <= eps


# -- text and JSON forms ------------------------------------------------------

_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TERM = re.compile(rf"([+-]?)\s*({_NUMBER})?\s*\*?\s*(i|j|k|e1|e2|e3)?")
_UNIT_INDEX = {None: 0, "": 0, "i": 1, "e1": 1, "j": 2, "e2": 2, "k": 3, "e3": 3}


def parse_quaternion(text: str) -> Quaternion:
    """Parse ``"w+x i+y j+z k"`` (``e1,e2,e3`` also accepted) or JSON ``[w,x,y,z]``.

    >>> parse_quaternion("1+2i-0.5k")
    Quaternion(w=1.0, x=2.0, y=0.0, z=-0.5)
    >>> parse_quaternion("[0, 1, 0, 0]")
    Quaternion(w=0.0, x=1.0, y=0.0, z=0.0)
    """
    text = text.strip()
    if text.startswith("["):
        values = json.loads(text)
        if len(values) != 4:
            raise ValueError(f"expected four components, got {values!r}")
        return Quaternion(*(float(v) for v in values))
    comps = [0.0, 0.0, 0.0, 0.0]
    pos = 0
    compact = text.replace(" ", "")
    if not compact:
        raise ValueError("empty quaternion text")
    while pos < len(compact):
        m = _TERM.match(compact, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse quaternion {text!r}")
        sign = -1.0 if m.group(1) == "-" else 1.0
        coeff = float(m.group(2)) if m.group(2) is not None else 1.0
        comps[_UNIT_INDEX[m.group(3)]] += sign * coeff
        pos = m.end()
    return Quaternion(*comps)


def format_quaternion(q: Quaternion) -> str:
    """Inverse of :func:`parse_quaternion` for the text form."""
    parts = [f"{float(q.w)!r}"]
    for c, unit in zip((q.x, q.y, q.z), "ijk"):
        c = float(c)
        parts.append(f"{'-' if math.copysign(1.0, c) < 0 else '+'}{abs(c)!r} {unit}")
    return "".join(parts)


# -- vectorised helpers on (4, ...) arrays --------------------------------------

def as_array(q) -> np.ndarray:
    """Components of a quaternion (or of a sequence of them) as a ``(4, ...)`` array."""
    if isinstance(q, Quaternion):
        return np.array(q.components(), dtype=float)
    if isinstance(q, Real):
        return np.array([float(q), 0.0, 0.0, 0.0])
    arr = np.asarray(q, dtype=float)
    if arr.shape[0] != 4:
        raise ValueError(f"leading axis must have length 4, got shape {arr.shape}")
    return arr


def from_array(a: np.ndarray) -> Quaternion:
    a = np.asarray(a, dtype=float)
    return Quaternion(float(a[0]), float(a[1]), float(a[2]), float(a[3]))


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of broadcastable ``(4, ...)`` arrays."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def qconj(a: np.ndarray) -> np.ndarray:
    out = -np.asarray(a, dtype=float)
    out[0] = -out[0]
    return out


def qnorm2(a: np.ndarray) -> np.ndarray:
    return np.sum(np.asarray(a) ** 2, axis=0)


def qinv(a: np.ndarray) -> np.ndarray:
    n2 = qnorm2(a)
    if np.any(n2 == 0):
        raise ZeroDivisionError("inverse of the zero quaternion")
    return qconj(a) / n2
