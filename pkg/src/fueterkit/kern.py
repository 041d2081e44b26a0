"""Cauchy-type kernels of slice analysis and their series expansions.

All kernels are built from ``Q_{c,s}(q) = s^2 - 2 Re(q) s + |q|^2``::

    SL  = (s - qbar) Q^-1            SR  = Q^-1 (s - qbar)
    FL  = -4 (s - qbar) Q^-2         FR  = -4 Q^-2 (s - qbar)
    P2L = -FL s + q0 FL              P2R = -s FR + q0 FR

``FL``/``FR`` are the Laplacians of the slice Cauchy kernels; ``P2L``/``P2R``
are their conjugate-Fueter derivatives.  Factors are multiplied in exactly the
written order.

The vectorised :func:`kernel_array` works on ``(4, ...)`` component arrays and
is what the quadrature code calls; :func:`kernel_eval` is the checked scalar
entry point.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import NotInDisk, OnSpectrumSphere
from .hcore import Quaternion, as_array, from_array, qconj, qinv, qmul, same_sphere

__all__ = [
    "KERNEL_KINDS", "qcs", "kernel_eval", "kernel_array",
    "dbar_kernel_series", "dbar_kernel_partial_sums", "appell_kernel_series", "cauchy_kernel_series",
    "dbar_tail_bound", "terms_for_tolerance",
]

KERNEL_KINDS = ("SL", "SR", "FL", "FR", "P2L", "P2R")


def _qcs_array(s: np.ndarray, q: np.ndarray) -> np.ndarray:
    s2 = qmul(s, s)
    norm2 = np.sum(q ** 2, axis=0)
    out = s2 - 2.0 * q[0] * s
    out[0] = out[0] + norm2
    return out


def qcs(s, q) -> Quaternion:
    """``s^2 - 2 Re(q) s + |q|^2``; vanishes exactly when ``s`` lies on ``[q]``."""
    s = Quaternion.coerce(s)
    q = Quaternion.coerce(q)
    return s * s - s * (2 * q.w) + q.norm2()


def kernel_array(kind: str, s, q) -> np.ndarray:
    """Kernel values for broadcastable ``(4, ...)`` arrays ``s`` and ``q``.

    No sphere check is made beyond refusing an exactly singular ``Q_{c,s}``.
    """
    if kind not in KERNEL_KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}")
    s = np.asarray(s, dtype=float)
    q = np.asarray(q, dtype=float)
    Q = _qcs_array(s, q)
    if np.any(np.sum(Q ** 2, axis=0) == 0):
        raise OnSpectrumSphere("s lies on the sphere [q]")
    Qinv = qinv(Q)
    diff = s - qconj(q)
    if kind == "SL":
        return qmul(diff, Qinv)
    if kind == "SR":
        return qmul(Qinv, diff)
    Qinv2 = qmul(Qinv, Qinv)
    if kind in ("FL", "P2L"):
        F = -4.0 * qmul(diff, Qinv2)
        if kind == "FL":
            return F
        return -qmul(F, s) + q[0] * F
    F = -4.0 * qmul(Qinv2, diff)
    if kind == "FR":
        return F
    return -qmul(s, F) + q[0] * F


def kernel_eval(kind: str, s, q) -> Quaternion:
    """Evaluate one kernel at a pair of quaternions.

    Raises
    ------
    OnSpectrumSphere
        if ``s`` lies on the sphere ``[q]`` (see :func:`~fueterkit.hcore.same_sphere`).
    """
    s = Quaternion.coerce(s)
    q = Quaternion.coerce(q)
    if same_sphere(q, s):
        raise OnSpectrumSphere(f"s = {s} lies on the sphere of q = {q}")
    return from_array(kernel_array(kind, as_array(s), as_array(q)))


# -- series ------------------------------------------------------------------------

def dbar_tail_bound(rho: float, terms: int, s_abs: float) -> float:
    """Bound on ``|sum_{n > N}|`` of the Dbar-kernel series.

    Uses the majorant ``4 sum_{n>N} n |q|^(n-1) |s|^(-1-n)``, whose closed form
    is ``4 |s|^-2 rho^N (N + 1 - N rho) / (1 - rho)^2`` with ``rho = |q|/|s|``.
    """
    if not 0 <= rho < 1:
        raise NotInDisk(f"ratio |q|/|s| = {rho} must be below 1")
    N = terms
    return 4.0 / s_abs ** 2 * rho ** N * (N + 1 - N * rho) / (1 - rho) ** 2


def terms_for_tolerance(rho: float, tol: float, s_abs: float, max_terms: int = 100_000) -> int:
    """Smallest ``N`` with :func:`dbar_tail_bound` ``<= tol``."""
    N = 1
    while dbar_tail_bound(rho, N, s_abs) > tol:
        N += 1
        if N > max_terms:
            raise NotInDisk(f"more than {max_terms} terms needed for rho = {rho}")
    return N


def _check_disk(s: Quaternion, q: Quaternion) -> float:
    if abs(s) == 0 or abs(q) >= abs(s):
        raise NotInDisk(f"series need |q| < |s|, got |q| = {abs(q)}, |s| = {abs(s)}")
    return abs(q) / abs(s)


def _resolve_terms(s, q, tol, terms) -> int:
    rho = _check_disk(s, q)
    if terms is not None:
        return int(terms)
    return terms_for_tolerance(rho, 1e-12 if tol is None else tol, abs(s))


def _check_side(side: str):
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def dbar_kernel_partial_sums(side: str, s, q, terms: int) -> list:
    """Partial sums ``S_1, ..., S_terms`` of :func:`dbar_kernel_series`."""
    _check_side(side)
    s = Quaternion.coerce(s)
    q = Quaternion.coerce(q)
    _check_disk(s, q)
    s_inv = s.inverse()
    qbar = q.conj()
    total = Quaternion(0.0)
    q_pow = Quaternion(1.0)       # q^(n-1)
    qbar_pow = Quaternion(1.0)    # qbar^(n-1)
    h = Quaternion(1.0)           # sum_{k=1..n} q^(n-k) qbar^(k-1)
    s_pow = s_inv * s_inv         # s^(-1-n)
    sums = []
    for n in range(1, terms + 1):
        c = (q_pow * n + h) * 2
        total = total + (c * s_pow if side == "left" else s_pow * c)
        sums.append(total)
        qbar_pow = qbar_pow * qbar
        h = q * h + qbar_pow
        q_pow = q_pow * q
        s_pow = s_pow * s_inv
    return sums


def dbar_kernel_series(side: str, s, q, tol: Optional[float] = 1e-12,
                       terms: Optional[int] = None) -> Quaternion:
    """Truncated ``2 sum_n (n q^(n-1) + sum_k q^(n-k) qbar^(k-1)) s^(-1-n)``.

    ``side='left'`` puts the powers of ``s`` on the right (matching ``P2L``);
    ``side='right'`` puts them on the left.  The number of terms is chosen
    from :func:`dbar_tail_bound` unless ``terms`` is given.
    """
    _check_side(side)
    N = _resolve_terms(Quaternion.coerce(s), Quaternion.coerce(q), tol, terms)
    return dbar_kernel_partial_sums(side, s, q, N)[-1]


def _appell_complex(ell: int, z: complex) -> complex:
    if ell < 0:
        return 0j
    j = np.arange(ell + 1)
    zb = z.conjugate()
    return complex(2.0 / ((ell + 1) * (ell + 2))
                   * np.sum((ell - j + 1) * z ** (ell - j) * zb ** j))


def appell_kernel_series(side: str, s, q, tol: Optional[float] = 1e-12,
                         terms: Optional[int] = None) -> Quaternion:
    """Appell form of the Dbar-kernel series.

    Term ``n`` is ``2n [(n+1) Q_(n-1) - (n-1) q0 Q_(n-2)] s^(-1-n)`` (the
    ``n = 1`` term reduces to ``4 s^-2``).  The Appell polynomials are
    evaluated in the complex plane of ``q`` and lifted back, an independent
    route from :func:`dbar_kernel_series`.
    """
    _check_side(side)
    s = Quaternion.coerce(s)
    q = Quaternion.coerce(q)
    N = _resolve_terms(s, q, tol, terms)
    v = math.sqrt(q.x ** 2 + q.y ** 2 + q.z ** 2)
    z = complex(q.w, v)
    s_inv = s.inverse()
    s_pow = s_inv * s_inv
    total = Quaternion(0.0)
    for n in range(1, N + 1):
        c = 2 * n * ((n + 1) * _appell_complex(n - 1, z)
                     - (n - 1) * q.w * _appell_complex(n - 2, z))
        cq = Quaternion(c.real) if v == 0 else Quaternion(c.real, q.x / v * c.imag,
                                                          q.y / v * c.imag, q.z / v * c.imag)
        total = total + (cq * s_pow if side == "left" else s_pow * cq)
        s_pow = s_pow * s_inv
    return total


def cauchy_kernel_series(side: str, s, q, terms: int) -> Quaternion:
    """``sum_{n<terms} q^n s^(-1-n)`` (left) or ``s^(-1-n) q^n`` (right)."""
    _check_side(side)
    s = Quaternion.coerce(s)
    q = Quaternion.coerce(q)
    _check_disk(s, q)
    s_inv = s.inverse()
    s_pow = s_inv
    q_pow = Quaternion(1.0)
    total = Quaternion(0.0)
    for _ in range(terms):
        total = total + (q_pow * s_pow if side == "left" else s_pow * q_pow)
        q_pow = q_pow * q
        s_pow = s_pow * s_inv
    return total
