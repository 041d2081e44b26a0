"""Exact polynomials in the commuting pair ``(q, qbar)`` and their axial form.

Two representations are kept side by side:

* :class:`QQbarPoly` -- ``sum c[a, b] q^a qbar^b`` with rational ``c``.  Paper
  style identities (Appell polynomials, ``Dbar q^n``) are stated here.
* :class:`AxialPoly` -- ``A(q0, r) + w B(q0, r)`` where ``w = Im(q)/|Im(q)|``,
  ``r = |Im(q)|``, ``A`` even and ``B`` odd in ``r``.  The Fueter operators
  have closed forms in these coordinates::

      D    (A + w B) = (A_0 - B_r - 2B/r) + w (B_0 + A_r)
      Dbar (A + w B) = (A_0 + B_r + 2B/r) + w (B_0 - A_r)

Conversion between the two is exact: ``q = q0 + w r`` and ``qbar = q0 - w r``
with ``w^2 = -1``.  Only real (intrinsic) coefficients are supported, so left
and right actions of the operators coincide.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Tuple

from .errors import BadDegree, NotAxiallySymmetric, NotPolyanalytic2
from .hcore import Quaternion

__all__ = [
    "QQbarPoly", "AxialPoly", "to_axial", "from_axial", "apply_operator_sym",
    "dbar_monomial", "appell", "dbar_monomial_appell", "laplacian_monomial",
    "polyanalytic_split", "q_power",
]

Key = Tuple[int, int]


def _clean(terms: Dict[Key, Fraction]) -> Dict[Key, Fraction]:
    return {k: v for k, v in terms.items() if v != 0}


def _as_fraction(c) -> Fraction:
    # floats convert exactly (binary value); pass ints or Fractions for decimal intent
    return c if isinstance(c, Fraction) else Fraction(c)


class _BivariateMixin:
    """Shared dictionary arithmetic for polynomials keyed by exponent pairs."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {(0, 0): terms}
        self._terms = _clean({(int(a), int(b)): _as_fraction(c)
                              for (a, b), c in terms.items()})

    @property
    def terms(self) -> Dict[Key, Fraction]:
        return dict(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, type(self)):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == _clean({(0, 0): Fraction(other)})
        return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self._terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = type(self)(other)
        if not isinstance(other, type(self)):
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return type(self)(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return type(self)({k: v * other for k, v in self._terms.items()})
        if not isinstance(other, type(self)):
            return NotImplemented
        out: Dict[Key, Fraction] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return type(self)(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = type(self)(1)
        for _ in range(n):
            result = result * self
        return result

    def degree(self) -> int:
        return max((a + b for a, b in self._terms), default=-1)


class QQbarPoly(_BivariateMixin):
    """``sum c[a, b] q^a qbar^b`` with rational coefficients.

    ``q`` and ``qbar`` commute; zero coefficients are dropped so equality of
    two polynomials is plain dictionary equality.
    """

    @classmethod
    def q(cls) -> "QQbarPoly":
        return cls({(1, 0): 1})

    @classmethod
    def qbar(cls) -> "QQbarPoly":
        return cls({(0, 1): 1})

    @classmethod
    def q0(cls) -> "QQbarPoly":
        """Real part ``(q + qbar) / 2``."""
        return cls({(1, 0): Fraction(1, 2), (0, 1): Fraction(1, 2)})

    def evaluate(self, q) -> Quaternion:
        """Evaluate at a quaternion; exact when its components are rational."""
        q = Quaternion.coerce(q)
        qb = q.conj()
        zero = 0 * q.w
        total = Quaternion(zero, zero, zero, zero)
        for (a, b), c in self._terms.items():
            if isinstance(q.w, float):
                c = float(c)
            total = total + (q ** a) * (qb ** b) * c
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for (a, b), c in sorted(self._terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
            factors = [str(c)]
            if a:
                factors.append("q" if a == 1 else f"q^{a}")
            if b:
                factors.append("qbar" if b == 1 else f"qbar^{b}")
            pieces.append("*".join(factors))
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self):
        return f"QQbarPoly({str(self)!r})"


class _Poly2(_BivariateMixin):
    """Polynomial in ``(q0, r)``; keys are ``(power of q0, power of r)``."""

    def d_q0(self) -> "_Poly2":
        return _Poly2({(i - 1, j): c * i for (i, j), c in self._terms.items() if i})

    def d_r(self) -> "_Poly2":
        return _Poly2({(i, j - 1): c * j for (i, j), c in self._terms.items() if j})

    def div_r(self) -> "_Poly2":
        if any(j == 0 for _, j in self._terms):
            raise NotAxiallySymmetric("B/r is not polynomial: B has r-free terms")
        return _Poly2({(i, j - 1): c for (i, j), c in self._terms.items()})

    def times_q0(self) -> "_Poly2":
        return _Poly2({(i + 1, j): c for (i, j), c in self._terms.items()})

    def parity_ok(self, odd: bool) -> bool:
        return all((j % 2 == 1) == odd for _, j in self._terms)

    def evaluate(self, q0, r2, shift: int = 0):
        """Evaluate ``sum c q0^i r^(j - shift)`` given ``r^2``; ``j - shift`` must be even."""
        total = 0 * q0
        for (i, j), c in self._terms.items():
            cc = float(c) if isinstance(q0, float) else c
            total = total + cc * q0 ** i * r2 ** ((j - shift) // 2)
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for (i, j), c in sorted(self._terms.items()):
            f = [str(c)] + (["q0" if i == 1 else f"q0^{i}"] if i else []) \
                + (["r" if j == 1 else f"r^{j}"] if j else [])
            out.append("*".join(f))
        return " + ".join(out).replace("+ -", "- ")


class AxialPoly:
    """``A(q0, r) + w B(q0, r)`` with ``A`` even and ``B`` odd in ``r``."""

    __slots__ = ("A", "B")

    def __init__(self, A=None, B=None, check: bool = True):
        A = A if isinstance(A, _Poly2) else _Poly2(A)
        B = B if isinstance(B, _Poly2) else _Poly2(B)
        if check and not (A.parity_ok(odd=False) and B.parity_ok(odd=True)):
            raise NotAxiallySymmetric("A must be even and B odd in r")
        self.A = A
        self.B = B

    @classmethod
    def constant(cls, c) -> "AxialPoly":
        return cls({(0, 0): c})

    @classmethod
    def q0(cls) -> "AxialPoly":
        return cls({(1, 0): 1})

    def __eq__(self, other):
        if not isinstance(other, AxialPoly):
            return NotImplemented
        return self.A == other.A and self.B == other.B

    def __hash__(self):
        return hash((self.A, self.B))

    def __add__(self, other):
        if not isinstance(other, AxialPoly):
            return NotImplemented
        return AxialPoly(self.A + other.A, self.B + other.B, check=False)

    def __neg__(self):
        return AxialPoly(-self.A, -self.B, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AxialPoly(self.A * other, self.B * other, check=False)
        if not isinstance(other, AxialPoly):
            return NotImplemented
        # w commutes with real-coefficient polynomials and w^2 = -1
        return AxialPoly(self.A * other.A - self.B * other.B,
                         self.A * other.B + self.B * other.A, check=False)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.A and not self.B

    def evaluate(self, q) -> Quaternion:
        """Value at ``q``.  ``w B = Im(q) * (B / r)`` keeps rational input exact."""
        q = Quaternion.coerce(q)
        r2 = q.x * q.x + q.y * q.y + q.z * q.z
        a = self.A.evaluate(q.w, r2)
        b_over_r = self.B.evaluate(q.w, r2, shift=1)
        return Quaternion(a, q.x * b_over_r, q.y * b_over_r, q.z * b_over_r)

    def __repr__(self):
        return f"AxialPoly(A={self.A}, B={self.B})"


# -- conversions -------------------------------------------------------------------

def _expand_pm(a: int, b: int) -> Dict[Key, int]:
    """Coefficients of ``(q0 + y)^a (q0 - y)^b`` keyed by ``(power q0, power y)``."""
    out: Dict[Key, int] = {}
    for k in range(a + 1):
        ca = comb(a, k)
        for m in range(b + 1):
            c = ca * comb(b, m) * (-1) ** m
            key = (a - k + b - m, k + m)
            out[key] = out.get(key, 0) + c
    return out


def to_axial(p: QQbarPoly) -> AxialPoly:
    """Substitute ``q = q0 + w r``, ``qbar = q0 - w r`` and split by parity."""
    A: Dict[Key, Fraction] = {}
    B: Dict[Key, Fraction] = {}
    for (a, b), c in p.terms.items():
        for (i, j), m in _expand_pm(a, b).items():
            # (w r)^j = (-1)^(j//2) r^j, times w when j is odd
            val = c * m * (-1) ** (j // 2)
            target = B if j % 2 else A
            target[(i, j)] = target.get((i, j), 0) + val
    return AxialPoly(A, B)


def from_axial(x: AxialPoly) -> QQbarPoly:
    """Inverse of :func:`to_axial`; raises :class:`NotAxiallySymmetric` on parity violations."""
    if not (x.A.parity_ok(odd=False) and x.B.parity_ok(odd=True)):
        raise NotAxiallySymmetric("A must be even and B odd in r")
    q0 = QQbarPoly.q0()
    wr = (QQbarPoly.q() - QQbarPoly.qbar()) * Fraction(1, 2)
    r2 = -(wr * wr)
    out = QQbarPoly()
    cache_q0 = {0: QQbarPoly(1)}
    cache_r2 = {0: QQbarPoly(1)}

    def q0_pow(i):
        if i not in cache_q0:
            cache_q0[i] = q0_pow(i - 1) * q0
        return cache_q0[i]

    def r2_pow(k):
        if k not in cache_r2:
            cache_r2[k] = r2_pow(k - 1) * r2
        return cache_r2[k]

    for (i, j), c in x.A.terms.items():
        out = out + q0_pow(i) * r2_pow(j // 2) * c
    for (i, j), c in x.B.terms.items():
        out = out + wr * q0_pow(i) * r2_pow(j // 2) * c
    return out


# -- operators ---------------------------------------------------------------------

def _D(p: AxialPoly, sign: int) -> AxialPoly:
    A, B = p.A, p.B
    two_b_over_r = B.div_r() * 2
    new_a = A.d_q0() - (B.d_r() + two_b_over_r) * sign
    new_b = B.d_q0() + A.d_r() * sign
    return AxialPoly(new_a, new_b)


def apply_operator_sym(op: str, p, side: str = "left"):
    """Apply ``D``, ``Dbar`` or ``Delta`` exactly.

    ``p`` may be an :class:`AxialPoly` or a :class:`QQbarPoly`; the result has
    the same type.  With real coefficients the right action ``p D`` equals the
    left action, so ``side`` only validates the argument.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    as_qq = isinstance(p, QQbarPoly)
    x = to_axial(p) if as_qq else p
    if op == "D":
        y = _D(x, +1)
    elif op == "Dbar":
        y = _D(x, -1)
    elif op == "Delta":
        y = _D(_D(x, -1), +1)
    else:
        raise ValueError(f"unknown operator {op!r}")
    return from_axial(y) if as_qq else y


def q_power(n: int) -> QQbarPoly:
    return QQbarPoly({(n, 0): 1})


def dbar_monomial(n: int) -> QQbarPoly:
    """``Dbar q^n = 2 (n q^(n-1) + sum_{k=1..n} q^(n-k) qbar^(k-1))``."""
    if n < 1:
        raise BadDegree(f"n must be >= 1, got {n}")
    terms: Dict[Key, Fraction] = {(n - 1, 0): Fraction(2 * n)}
    for k in range(1, n + 1):
        key = (n - k, k - 1)
        terms[key] = terms.get(key, 0) + 2
    return QQbarPoly(terms)


def appell(ell: int) -> QQbarPoly:
    """Clifford-Appell polynomial ``Q_ell(q, qbar)``.

    >>> str(appell(1))
    '2/3*q + 1/3*qbar'
    """
    if ell < 0:
        raise BadDegree(f"ell must be >= 0, got {ell}")
    scale = Fraction(2, (ell + 1) * (ell + 2))
    return QQbarPoly({(ell - j, j): scale * (ell - j + 1) for j in range(ell + 1)})


def dbar_monomial_appell(n: int) -> QQbarPoly:
    """``Dbar q^n = 2n [(n+1) Q_(n-1) - (n-1) q0 Q_(n-2)]`` expanded in ``(q, qbar)``."""
    if n < 2:
        raise BadDegree(f"n must be >= 2, got {n}")
    return (appell(n - 1) * (n + 1) - QQbarPoly.q0() * appell(n - 2) * (n - 1)) * (2 * n)


def laplacian_monomial(n: int, form: str = "direct") -> QQbarPoly:
    """``Delta q^n`` as ``-4 sum (n-k) q^(n-k-1) qbar^(k-1)`` or ``-2n(n-1) Q_(n-2)``."""
    if n < 2:
        raise BadDegree(f"n must be >= 2, got {n}")
    if form == "direct":
        return QQbarPoly({(n - k - 1, k - 1): -4 * (n - k) for k in range(1, n)})
    if form == "appell":
        return appell(n - 2) * (-2 * n * (n - 1))
    raise ValueError(f"form must be 'direct' or 'appell', got {form!r}")


def polyanalytic_split(p) -> Tuple[AxialPoly, AxialPoly]:
    """Split ``p`` with ``D^2 p = 0`` as ``p = f0 + q0 f1`` with ``D f0 = D f1 = 0``.

    ``f1 = D p`` and ``f0 = p - q0 D p``.
    """
    x = to_axial(p) if isinstance(p, QQbarPoly) else p
    dp = apply_operator_sym("D", x)
    if not apply_operator_sym("D", dp).is_zero():
        raise NotPolyanalytic2("D^2 p does not vanish")
    f1 = dp
    f0 = x - AxialPoly.q0() * dp
    return f0, f1


def monomials(coeffs: Iterable) -> QQbarPoly:
    """``sum c_n q^n`` for real coefficients ``c_0, c_1, ...``."""
    return QQbarPoly({(n, 0): c for n, c in enumerate(coeffs)})
