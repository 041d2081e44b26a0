"""Slice hyperholomorphic functions.

Three kinds of :class:`SliceFunction` are supported:

``intrinsic``
    built from a holomorphic stem ``f0 = alpha + i beta`` by the slice
    operator, ``f(u + J v) = alpha(u, v) + J beta(u, v)``.  Intrinsic functions
    are simultaneously left and right slice hyperholomorphic.
``left``
    power series ``sum q^n a_n`` with quaternion coefficients on the right.
``right``
    power series ``sum a_n q^n``.

Every function evaluates on a single :class:`~fueterkit.hcore.Quaternion`
via :func:`slice_eval` and on ``(4, N)`` arrays through
:meth:`SliceFunction.eval_array`, which the quadrature code uses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import DivergentSeries, OutsideDomain, StemNotReal
from .hcore import Quaternion, as_array, from_array, qmul

__all__ = [
    "StemFunction", "SliceFunction", "tf_extend", "slice_eval",
    "left_series", "right_series", "power", "exponential", "rational",
    "builtin", "stem_complex",
]

TOL_REAL = 1e-10
TOL_SERIES = 1e-15


@dataclass(frozen=True)
class StemFunction:
    """Holomorphic ``f0`` given as a complex evaluator.

    ``evaluator`` must accept numpy complex arrays.  With ``symmetric=True``
    the evaluator is trusted on the whole plane (``f0(conj z) = conj f0(z)``);
    otherwise it is only called on ``Im z >= 0`` and reflected below.
    """

    evaluator: Callable
    symmetric: bool = True
    name: str = "stem"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.symmetric:
            return np.asarray(self.evaluator(z), dtype=complex)
        lower = z.imag < 0
        zz = np.where(lower, np.conj(z), z)
        val = np.asarray(self.evaluator(zz), dtype=complex)
        return np.where(lower, np.conj(val), val)

    def alpha_beta(self, u, v) -> Tuple[np.ndarray, np.ndarray]:
        val = self(np.asarray(u) + 1j * np.asarray(v))
        return val.real, val.imag

    def cr_residual(self, u: float, v: float, h: float = 1e-5) -> float:
        """Largest Cauchy-Riemann residual of ``(alpha, beta)`` by central differences."""
        a_u = (self.alpha_beta(u + h, v)[0] - self.alpha_beta(u - h, v)[0]) / (2 * h)
        a_v = (self.alpha_beta(u, v + h)[0] - self.alpha_beta(u, v - h)[0]) / (2 * h)
        b_u = (self.alpha_beta(u + h, v)[1] - self.alpha_beta(u - h, v)[1]) / (2 * h)
        b_v = (self.alpha_beta(u, v + h)[1] - self.alpha_beta(u, v - h)[1]) / (2 * h)
        return float(max(abs(a_u - b_v), abs(a_v + b_u)))


@dataclass(frozen=True)
class SliceFunction:
    """A slice hyperholomorphic function (see module docstring for kinds)."""

    kind: str
    stem: Optional[StemFunction] = None
    coefficients: Tuple[Quaternion, ...] = ()
    radius: float = math.inf
    chirality: str = "left"
    name: str = ""
    coefficient_fn: Optional[Callable[[int], Quaternion]] = field(default=None, compare=False)
    max_terms: int = 2000
    # stem singularities (complex, upper half-plane representatives) for contour checks
    singularities: Tuple[complex, ...] = ()

    def __post_init__(self):
        if self.kind not in ("intrinsic", "left", "right"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.chirality not in ("left", "right"):
            raise ValueError(f"chirality must be 'left' or 'right', got {self.chirality!r}")
        if self.kind in ("left", "right") and self.chirality != self.kind:
            raise ValueError("series chirality must match its kind")
        if self.kind == "intrinsic" and self.stem is None:
            raise ValueError("intrinsic functions need a stem")

    @property
    def is_intrinsic(self) -> bool:
        return self.kind == "intrinsic"

    def with_chirality(self, chirality: str) -> "SliceFunction":
        """Reinterpret an intrinsic function as left or right; series keep theirs."""
        if self.kind != "intrinsic":
            if chirality != self.chirality:
                raise ValueError(f"a {self.kind} series cannot be used as {chirality}")
            return self
        return SliceFunction("intrinsic", stem=self.stem, radius=self.radius,
                             chirality=chirality, name=self.name,
                             singularities=self.singularities)

    def __call__(self, q) -> Quaternion:
        return slice_eval(self, q)

    def eval_array(self, q: np.ndarray) -> np.ndarray:
        """Evaluate at every column of a ``(4, N)`` array."""
        q = np.asarray(q, dtype=float)
        radius = np.sqrt(np.sum(q ** 2, axis=0))
        if np.any(radius >= self.radius):
            raise OutsideDomain(f"|q| must stay below the radius bound {self.radius}")
        if self.kind == "intrinsic":
            return _eval_intrinsic(self.stem, q)
        if self.coefficient_fn is None:
            return _horner(self.coefficients, q, self.kind)
        return _eval_infinite(self, q)


def _eval_intrinsic(stem: StemFunction, q: np.ndarray) -> np.ndarray:
    u = q[0]
    v = np.sqrt(q[1] ** 2 + q[2] ** 2 + q[3] ** 2)
    alpha, beta = stem.alpha_beta(u, v)
    alpha = np.asarray(alpha, dtype=float) * np.ones_like(u)
    beta = np.asarray(beta, dtype=float) * np.ones_like(u)
    real = v == 0
    if np.any(real):
        bad = np.abs(beta[real]) > TOL_REAL * (1.0 + np.abs(alpha[real]))
        if np.any(bad):
            raise StemNotReal(f"stem '{stem.name}' has beta(u, 0) != 0")
    safe_v = np.where(real, 1.0, v)
    scale = np.where(real, 0.0, beta / safe_v)
    return np.stack([alpha, q[1] * scale, q[2] * scale, q[3] * scale])


def _horner(coeffs: Sequence[Quaternion], q: np.ndarray, kind: str) -> np.ndarray:
    shape = (4,) + q.shape[1:]
    acc = np.zeros(shape)
    for a in reversed(coeffs):
        a = as_array(a).reshape((4,) + (1,) * (q.ndim - 1))
        # left: a_n + q acc builds sum q^n a_n; right: a_n + acc q builds sum a_n q^n
        acc = a + (qmul(q, acc) if kind == "left" else qmul(acc, q))
    return acc


def _eval_infinite(f: SliceFunction, q: np.ndarray) -> np.ndarray:
    total = np.zeros(q.shape)
    qn = np.zeros(q.shape)
    qn[0] = 1.0
    quiet = 0
    for n in range(f.max_terms):
        a = as_array(f.coefficient_fn(n)).reshape((4,) + (1,) * (q.ndim - 1))
        term = qmul(qn, a) if f.kind == "left" else qmul(a, qn)
        total = total + term
        size = np.max(np.sqrt(np.sum(term ** 2, axis=0)))
        scale = max(1.0, float(np.max(np.sqrt(np.sum(total ** 2, axis=0)))))
        quiet = quiet + 1 if size <= TOL_SERIES * scale else 0
        # several consecutive negligible terms; tolerates sparse coefficient lists
        if quiet >= 8:
            return total
        qn = qmul(qn, q)
    raise DivergentSeries(f"series '{f.name}' did not settle within {f.max_terms} terms")


def slice_eval(f: SliceFunction, q) -> Quaternion:
    """Evaluate ``f`` at a single quaternion."""
    q = Quaternion.coerce(q)
    if f.kind in ("left", "right") and f.coefficient_fn is None:
        if abs(q) >= f.radius:
            raise OutsideDomain(f"|q| must stay below the radius bound {f.radius}")
        # exact path: keeps Fraction input rational
        acc = Quaternion(0 * q.w)
        for a in reversed(f.coefficients):
            a = Quaternion.coerce(a)
            acc = a + (q * acc if f.kind == "left" else acc * q)
        return acc
    return from_array(f.eval_array(as_array(q).reshape(4, 1))[:, 0])


# -- constructors -------------------------------------------------------------------

def tf_extend(f0: StemFunction, name: Optional[str] = None, radius: float = math.inf) -> SliceFunction:
    """Intrinsic slice function ``alpha(q0, |Im q|) + (Im q / |Im q|) beta(q0, |Im q|)``."""
    return SliceFunction("intrinsic", stem=f0, radius=radius, name=name or f0.name)


def left_series(coeffs, radius: float = math.inf, name: str = "") -> SliceFunction:
    """``q -> sum q^n a_n``.  ``coeffs`` is a sequence or a callable ``n -> a_n``."""
    if callable(coeffs):
        return SliceFunction("left", coefficient_fn=coeffs, radius=radius,
                             chirality="left", name=name)
    return SliceFunction("left", coefficients=tuple(Quaternion.coerce(a) for a in coeffs),
                         radius=radius, chirality="left", name=name)


def right_series(coeffs, radius: float = math.inf, name: str = "") -> SliceFunction:
    """``q -> sum a_n q^n``."""
    if callable(coeffs):
        return SliceFunction("right", coefficient_fn=coeffs, radius=radius,
                             chirality="right", name=name)
    return SliceFunction("right", coefficients=tuple(Quaternion.coerce(a) for a in coeffs),
                         radius=radius, chirality="right", name=name)


def power(n: int) -> SliceFunction:
    return tf_extend(StemFunction(lambda z: z ** n, name=f"pow{n}"))


def exponential() -> SliceFunction:
    return tf_extend(StemFunction(np.exp, name="exp"))


def rational(numerator: Sequence[float], denominator: Sequence[float]) -> SliceFunction:
    """Real-coefficient rational function; coefficients in ascending powers."""
    num = np.polynomial.Polynomial(np.asarray(numerator, dtype=float))
    den = np.polynomial.Polynomial(np.asarray(denominator, dtype=float))
    poles = tuple(complex(p.real, abs(p.imag)) for p in den.roots())

    def evaluator(z):
        return num(z) / den(z)

    label = f"rational:{','.join(map(str, numerator))}/{','.join(map(str, denominator))}"
    return SliceFunction("intrinsic", stem=StemFunction(evaluator, name=label),
                         name=label, singularities=poles)


def builtin(name: str) -> SliceFunction:
    """Resolve names used on the command line: ``powN``, ``exp``, ``one``,
    ``rational:n0,n1,.../d0,d1,...`` (ascending coefficients)."""
    if name == "exp":
        return exponential()
    if name in ("one", "1"):
        return power(0)
    if name.startswith("pow"):
        return power(int(name[3:]))
    if name.startswith("rational:"):
        num, den = name[len("rational:"):].split("/")
        return rational([float(c) for c in num.split(",")],
                        [float(c) for c in den.split(",")])
    raise ValueError(f"unknown function name {name!r}")


def stem_complex(f: SliceFunction, z: complex) -> complex:
    """Value of the stem of an intrinsic function at a complex point."""
    if not f.is_intrinsic:
        raise ValueError("only intrinsic functions carry a stem")
    return complex(f.stem(np.array([z]))[0])
