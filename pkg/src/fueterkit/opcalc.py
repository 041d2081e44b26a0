"""Functional calculi on the S-spectrum for commuting matrix quadruples.

An operator ``T = T0 + e1 T1 + e2 T2 + e3 T3`` is stored as a ``(4, d, d)``
array of pairwise commuting real matrices.  Quaternion-valued matrices
(:class:`QuaternionMatrix`) use the same layout; their product follows the
Hamilton table with each component product being a matrix product.

For ``s = u + J v`` the operator ``Q_{c,s}(T) = s^2 - 2 T0 s + T Tbar`` splits
as ``P + J R`` with commuting real ``P = (u^2 - v^2) I - 2u T0 + T Tbar`` and
``R = 2v (u I - T0)``, hence ``Q^-1 = (P - J R)(P^2 + R^2)^-1`` needs a single
real solve.  The S-spectrum comes from the quadratic pencil
``z^2 I - 2z T0 + T Tbar`` through its companion linearisation.

Quadrature is vectorised over contour nodes: resolvents are computed as
``(4, M, d, d)`` arrays and reduced with a fixed summation order, so repeated
runs are bit-identical.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .contour import SliceContour, _check_function
from .errors import (ComplexComponentSpectrum, NonCommuting, NormTooLarge, SingularPencil,
                     SpectrumNotEnclosed)
from .hcore import E1, Quaternion, as_array, qmul
from .kern import terms_for_tolerance
from .sfun import SliceFunction

__all__ = [
    "CommutingOperator", "QuaternionMatrix", "SSpectrum", "qmatmul",
    "qcs_op_inverse", "s_spectrum", "resolvent_eval", "calculus_apply",
    "FunctionalCalculus", "series_oracle", "appell_operator_series",
    "diagonal_lift", "diagonal_lift_check", "operator_norm_bound",
    "default_contour", "random_commuting_operator", "monomial_oracle",
]

EPS_COMM = 1e-10
# K = P^2 + R^2 counts as singular once sigma_min(K) < scale / COND_LIMIT
COND_LIMIT = 1e13
CLUSTER_TOL = 1e-6


def qmatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of ``(4, ..., d, d)`` quaternion matrix arrays."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.stack([
        a0 @ b0 - a1 @ b1 - a2 @ b2 - a3 @ b3,
        a0 @ b1 + a1 @ b0 + a2 @ b3 - a3 @ b2,
        a0 @ b2 - a1 @ b3 + a2 @ b0 + a3 @ b1,
        a0 @ b3 + a1 @ b2 - a2 @ b1 + a3 @ b0,
    ])


def _scalar_block(q: np.ndarray) -> np.ndarray:
    """Reshape ``(4, ...)`` scalar components so they broadcast over matrices."""
    return q[..., None, None]


class QuaternionMatrix:
    """``M0 + e1 M1 + e2 M2 + e3 M3`` with real ``d x d`` components."""

    __slots__ = ("data",)
    __array_ufunc__ = None

    def __init__(self, data):
        data = np.asarray(data, dtype=float)
        if data.ndim != 3 or data.shape[0] != 4 or data.shape[1] != data.shape[2]:
            raise ValueError(f"expected shape (4, d, d), got {data.shape}")
        self.data = data

    @classmethod
    def from_components(cls, M0, M1=None, M2=None, M3=None) -> "QuaternionMatrix":
        M0 = np.atleast_2d(np.asarray(M0, dtype=float))
        zero = np.zeros_like(M0)
        return cls(np.stack([M0] + [zero if M is None else np.atleast_2d(M) for M in (M1, M2, M3)]))

    @classmethod
    def identity(cls, d: int) -> "QuaternionMatrix":
        return cls.from_components(np.eye(d))

    @classmethod
    def scalar(cls, q, d: int) -> "QuaternionMatrix":
        return cls(as_array(Quaternion.coerce(q))[:, None, None] * np.eye(d))

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def components(self) -> Tuple[np.ndarray, ...]:
        return tuple(self.data)

    def conj(self) -> "QuaternionMatrix":
        out = -self.data
        out[0] = self.data[0]
        return QuaternionMatrix(out)

    def block(self, i: int) -> Quaternion:
        return Quaternion(*(float(c) for c in self.data[:, i, i]))

    def __add__(self, other):
        if isinstance(other, QuaternionMatrix):
            return QuaternionMatrix(self.data + other.data)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, QuaternionMatrix):
            return QuaternionMatrix(self.data - other.data)
        return NotImplemented

    def __neg__(self):
        return QuaternionMatrix(-self.data)

    def __matmul__(self, other):
        if isinstance(other, QuaternionMatrix):
            return QuaternionMatrix(qmatmul(self.data, other.data))
        if isinstance(other, np.ndarray):
            return QuaternionMatrix(self.data @ other)
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, np.ndarray):
            return QuaternionMatrix(other @ self.data)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return QuaternionMatrix(self.data * other)
        if isinstance(other, Quaternion):
            return QuaternionMatrix(qmul(self.data, _scalar_block(as_array(other))))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return QuaternionMatrix(self.data * other)
        if isinstance(other, Quaternion):
            return QuaternionMatrix(qmul(_scalar_block(as_array(other)), self.data))
        return NotImplemented

    def __pow__(self, n: int):
        out = QuaternionMatrix.identity(self.dim)
        for _ in range(n):
            out = out @ self
        return out

    def __abs__(self) -> float:
        return float(np.sqrt(np.sum(self.data ** 2)))

    norm = __abs__

    def allclose(self, other, rtol=1e-8, atol=0.0) -> bool:
        return abs(self - other) <= max(atol, rtol * max(abs(self), abs(other)))

    def to_json(self) -> Dict[str, list]:
        return {f"M{i}": self.data[i].tolist() for i in range(4)}

    @classmethod
    def from_json(cls, obj) -> "QuaternionMatrix":
        return cls(np.stack([np.asarray(obj[f"M{i}"], dtype=float) for i in range(4)]))

    def __repr__(self):
        return f"QuaternionMatrix(dim={self.dim})"


@dataclass(frozen=True)
class CommutingOperator:
    """Quadruple of pairwise commuting real ``d x d`` matrices."""

    data: np.ndarray = field(repr=False)
    eps_comm: float = EPS_COMM

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        if data.ndim != 3 or data.shape[0] != 4 or data.shape[1] != data.shape[2]:
            raise ValueError(f"expected four square matrices, got shape {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        for i in range(4):
            for j in range(i + 1, 4):
                Ti, Tj = data[i], data[j]
                comm = np.linalg.norm(Ti @ Tj - Tj @ Ti)
                if comm > self.eps_comm * np.linalg.norm(Ti) * np.linalg.norm(Tj):
                    raise NonCommuting(f"T{i} and T{j} do not commute (||[Ti,Tj]|| = {comm:.3g})")

    @classmethod
    def from_components(cls, T0, T1=None, T2=None, T3=None, eps_comm=EPS_COMM):
        T0 = np.atleast_2d(np.asarray(T0, dtype=float))
        zero = np.zeros_like(T0)
        comps = [T0] + [zero if T is None else np.atleast_2d(np.asarray(T, dtype=float))
                        for T in (T1, T2, T3)]
        return cls(np.stack(comps), eps_comm)

    @classmethod
    def from_quaternion(cls, q) -> "CommutingOperator":
        """The ``1 x 1`` operator of a single quaternion."""
        return cls(as_array(Quaternion.coerce(q)).reshape(4, 1, 1))

    @classmethod
    def from_json(cls, obj) -> "CommutingOperator":
        if isinstance(obj, str):
            obj = json.loads(obj)
        op = cls(np.stack([np.asarray(obj[f"T{i}"], dtype=float).reshape(
            int(obj["dim"]), int(obj["dim"])) for i in range(4)]))
        return op

    def to_json(self) -> dict:
        out = {"dim": self.dim}
        out.update({f"T{i}": self.data[i].tolist() for i in range(4)})
        return out

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    @property
    def T0(self) -> np.ndarray:
        return self.data[0]

    def as_qmatrix(self) -> QuaternionMatrix:
        return QuaternionMatrix(self.data.copy())

    def conj(self) -> QuaternionMatrix:
        return self.as_qmatrix().conj()

    def has_real_component_spectra(self, tol: float = 1e-10) -> bool:
        """Whether every ``T_i`` has only real eigenvalues (up to ``tol * (1 + |T_i|)``)."""
        for Ti in self.data:
            ev = np.linalg.eigvals(Ti)
            if np.any(np.abs(ev.imag) > tol * (1.0 + np.linalg.norm(Ti, 2))):
                return False
        return True

    def t_tbar(self) -> np.ndarray:
        """``T Tbar = T0^2 + T1^2 + T2^2 + T3^2`` (real)."""
        return sum(T @ T for T in self.data)


# -- S-spectrum ----------------------------------------------------------------------

@dataclass
class SSpectrum:
    """Spheres ``u + S v`` (``v >= 0``) with multiplicities."""

    entries: List[Tuple[float, float, int]]

    def points(self) -> List[Tuple[float, float]]:
        return [(u, v) for u, v, _ in self.entries]

    def max_modulus(self) -> float:
        return max((math.hypot(u, v) for u, v, _ in self.entries), default=0.0)

    def to_csv(self) -> str:
        lines = ["u,v,multiplicity"]
        for u, v, m in self.entries:
            lines.append(f"{_fmt(u)},{_fmt(v)},{m}")
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    x = 0.0 if x == 0 else x
    return format(x, ".15g")


def s_spectrum(T: CommutingOperator, cluster_tol: float = CLUSTER_TOL) -> SSpectrum:
    """Spheres where ``Q_{c,s}(T)`` is singular.

    Eigenvalues of the companion matrix ``[[0, I], [-T Tbar, 2 T0]]`` are
    grouped (clusters closer than ``cluster_tol * (1 + |z|)`` are averaged,
    which also repairs the square-root splitting of double roots); one member
    of each conjugate pair is kept.  Real roots appear twice in the pencil,
    so their multiplicity is halved.
    """
    d = T.dim
    companion = np.block([[np.zeros((d, d)), np.eye(d)],
                          [-T.t_tbar(), 2.0 * T.T0]])
    eig = np.linalg.eigvals(companion)
    eig = eig[np.lexsort((eig.imag, eig.real))]
    clusters: List[List[complex]] = []
    for z in eig:
        for c in clusters:
            centre = np.mean(c)
            if abs(z - centre) <= cluster_tol * (1.0 + abs(centre)):
                c.append(z)
                break
        else:
            clusters.append([z])
    entries = []
    for c in clusters:
        z = complex(np.mean(c))
        tol = cluster_tol * (1.0 + abs(z))
        if abs(z.imag) <= tol:
            entries.append((z.real, 0.0, max(1, (len(c) + 1) // 2)))
        elif z.imag > 0:
            entries.append((z.real, z.imag, len(c)))
    entries.sort()
    return SSpectrum(entries)


# -- resolvents ------------------------------------------------------------------------

def _qcs_inverse_nodes(s: np.ndarray, T: CommutingOperator) -> np.ndarray:
    """``Q_{c,s}(T)^-1`` for every column of ``s`` (shape ``(4, M)``) -> ``(4, M, d, d)``."""
    d = T.dim
    I = np.eye(d)
    u = s[0][:, None, None]
    vvec = s[1:]
    v = np.sqrt(np.sum(vvec ** 2, axis=0))
    Jvec = np.where(v > 0, vvec / np.where(v > 0, v, 1.0), 0.0)      # (3, M)
    v = v[:, None, None]
    P = (u ** 2 - v ** 2) * I - 2.0 * u * T.T0 + T.t_tbar()
    R = 2.0 * v * (u * I - T.T0)
    K = P @ P + R @ R
    # relative to the size of the terms, not cond(K): a 1x1 K always has cond 1
    norm = lambda X: np.linalg.norm(X, 2, axis=(-2, -1))
    size = (u[:, 0, 0] ** 2 + v[:, 0, 0] ** 2 + 2 * np.abs(u[:, 0, 0]) * norm(T.T0)
            + norm(T.t_tbar()) + 2 * v[:, 0, 0] * (np.abs(u[:, 0, 0]) + norm(T.T0)))
    sigma_min = np.linalg.svd(K, compute_uv=False)[:, -1]
    if np.any(~np.isfinite(sigma_min)) or np.any(sigma_min * COND_LIMIT <= size ** 2):
        raise SingularPencil("Q_{c,s}(T) is numerically singular: s is on the S-spectrum")
    Kinv = np.linalg.solve(K, np.broadcast_to(I, K.shape))
    PK = P @ Kinv
    RK = R @ Kinv
    out = np.empty((4,) + K.shape)
    out[0] = PK
    for i in range(3):
        out[i + 1] = -Jvec[i][:, None, None] * RK
    return out


def qcs_op_inverse(s, T: CommutingOperator) -> QuaternionMatrix:
    """``Q_{c,s}(T)^-1``; raises :class:`SingularPencil` when ``s`` is in the S-spectrum."""
    s = Quaternion.coerce(s)
    inv = QuaternionMatrix(_qcs_inverse_nodes(as_array(s)[:, None], T)[:, 0])
    d = T.dim
    sq = as_array(s * s)
    Q = QuaternionMatrix(sq[:, None, None] * np.eye(d)) \
        - (Quaternion.coerce(s) * QuaternionMatrix.from_components(2.0 * T.T0)) \
        + QuaternionMatrix.from_components(T.t_tbar())
    residual = abs(Q @ inv - QuaternionMatrix.identity(d))
    if residual > 1e-10 * max(1.0, abs(Q) * abs(inv)):
        raise SingularPencil(f"inverse residual {residual:.3g} too large")
    return inv


RESOLVENT_KINDS = ("SL", "SR", "FL", "FR", "P2L", "P2R")


def _resolvent_nodes(kind: str, s: np.ndarray, T: CommutingOperator) -> np.ndarray:
    if kind not in RESOLVENT_KINDS:
        raise ValueError(f"unknown resolvent kind {kind!r}")
    d = T.dim
    Qinv = _qcs_inverse_nodes(s, T)
    I = np.eye(d)
    # s I - Tbar: scalar part s0 I - T0, vector parts s_i I + T_i
    diff = _scalar_block(s) * I + T.data[:, None]
    diff[0] = _scalar_block(s)[0] * I - T.T0
    if kind == "SL":
        return qmatmul(diff, Qinv)
    if kind == "SR":
        return qmatmul(Qinv, diff)
    Qinv2 = qmatmul(Qinv, Qinv)
    if kind in ("FL", "P2L"):
        F = -4.0 * qmatmul(diff, Qinv2)
        if kind == "FL":
            return F
        # P2L = -F s + T0 F
        return -qmul(F, _scalar_block(s)) + T.T0 @ F
    F = -4.0 * qmatmul(Qinv2, diff)
    if kind == "FR":
        return F
    # P2R = -s F + F T0
    return -qmul(_scalar_block(s), F) + F @ T.T0


def resolvent_eval(kind: str, s, T: CommutingOperator) -> QuaternionMatrix:
    """S-, F- or P2-resolvent operator at a single ``s`` in the resolvent set."""
    s = Quaternion.coerce(s)
    qcs_op_inverse(s, T)     # raises SingularPencil on the spectrum
    return QuaternionMatrix(_resolvent_nodes(kind, as_array(s)[:, None], T)[:, 0])


# -- functional calculi ------------------------------------------------------------------

_CALCULUS_KERNELS = {"S": ("SL", "SR"), "F": ("FL", "FR"), "P2": ("P2L", "P2R")}


def default_contour(T: CommutingOperator, J=E1, nodes=None, margin: float = 0.5) -> SliceContour:
    """Disk about 0 of radius ``1.5 * max |z| + margin`` over the S-spectrum."""
    return SliceContour.disk(1.5 * s_spectrum(T).max_modulus() + margin, 0.0, J, nodes)


class FunctionalCalculus:
    """S-, F- and P2-calculus of one operator on one contour.

    Resolvents at the contour nodes are computed once per kind and reused for
    every function passed to :meth:`apply`.
    """

    def __init__(self, T: CommutingOperator, contour: Optional[SliceContour] = None,
                 check_spectrum: bool = True):
        self.T = T
        self.contour = contour if contour is not None else default_contour(T)
        if check_spectrum:
            margin = self.contour.safety_margin
            for u, v in s_spectrum(T).points():
                if not self.contour.contains(u, v, margin):
                    raise SpectrumNotEnclosed(
                        f"spectral sphere (u={u:.6g}, v={v:.6g}) is not inside the contour")
        self._nodes = self.contour.nodes_and_weights()
        self._cache: Dict[str, np.ndarray] = {}
        self._warned = False

    def resolvent_nodes(self, kind: str) -> np.ndarray:
        if kind not in self._cache:
            self._cache[kind] = _resolvent_nodes(kind, self._nodes[0], self.T)
        return self._cache[kind]

    def apply(self, which: str, f: SliceFunction, chirality: Optional[str] = None) -> QuaternionMatrix:
        """``(1/2pi) \\oint R(s,T) ds_J f(s)`` (left) or ``\\oint f(s) ds_J R(s,T)`` (right)."""
        if which not in _CALCULUS_KERNELS:
            raise ValueError(f"which must be one of {sorted(_CALCULUS_KERNELS)}, got {which!r}")
        side = chirality or f.chirality
        f = f.with_chirality(side)
        _check_function(f, self.contour)
        if which != "S" and not self._warned:
            self._warned = True
            if not self.T.has_real_component_spectra():
                warnings.warn("a component of T has non-real eigenvalues", ComplexComponentSpectrum,
                              stacklevel=2)
        s, w = self._nodes
        fs = f.eval_array(s)
        left_kind, right_kind = _CALCULUS_KERNELS[which]
        if side == "left":
            R = self.resolvent_nodes(left_kind)
            vals = qmul(R, _scalar_block(qmul(w, fs)))
        else:
            R = self.resolvent_nodes(right_kind)
            vals = qmul(_scalar_block(qmul(fs, w)), R)
        return QuaternionMatrix(np.sum(vals, axis=1))


def calculus_apply(which: str, f: SliceFunction, T: CommutingOperator,
                   contour: Optional[SliceContour] = None,
                   chirality: Optional[str] = None) -> QuaternionMatrix:
    """S-, F- or order-2 polyanalytic functional calculus of ``f`` at ``T``."""
    return FunctionalCalculus(T, contour).apply(which, f, chirality)


# -- series oracles ----------------------------------------------------------------------

def operator_norm_bound(T) -> float:
    """Certified bound ``max(||T||, ||Tbar||)`` from the real ``4d x 4d`` representation
    of left multiplication on ``R^d (x) H``."""
    data = T.data if isinstance(T, (CommutingOperator, QuaternionMatrix)) else np.asarray(T)

    def left_mult(c):
        T0, T1, T2, T3 = c
        return np.block([[T0, -T1, -T2, -T3],
                         [T1, T0, -T3, T2],
                         [T2, T3, T0, -T1],
                         [T3, -T2, T1, T0]])

    conj = data * np.array([1.0, -1.0, -1.0, -1.0])[:, None, None]
    return max(np.linalg.norm(left_mult(data), 2), np.linalg.norm(left_mult(conj), 2))


def _f_series_tail(rho: float, N: int, s_abs: float) -> float:
    # 2 |s|^-3 sum_{n>N} n (n-1) rho^(n-2), the second derivative of rho^(N+1)/(1-rho)
    x = rho
    g2 = ((N + 1) * N * x ** (N - 1) / (1 - x)
          + 2 * (N + 1) * x ** N / (1 - x) ** 2
          + 2 * x ** (N + 1) / (1 - x) ** 3)
    return 2.0 / s_abs ** 3 * g2


def _series_setup(s, T: CommutingOperator, tol: float):
    s = Quaternion.coerce(s)
    bound = operator_norm_bound(T)
    if abs(s) == 0 or bound >= abs(s):
        raise NormTooLarge(f"series need ||T|| < |s|; bound {bound:.6g} vs |s| = {abs(s):.6g}")
    return s, bound / abs(s)


def _s_power_on(side: str, M: QuaternionMatrix, s_pow: Quaternion) -> QuaternionMatrix:
    return M * s_pow if side == "left" else s_pow * M


def series_oracle(which: str, side: str, s, T: CommutingOperator,
                  tol: float = 1e-13) -> QuaternionMatrix:
    """Truncated operator series.

    ``which='dbar_kernel_op'``: ``2 sum_n (n T^(n-1) + sum_k T^(n-k) Tbar^(k-1)) s^(-1-n)``,
    equal to ``P2L(s, T)`` for ``side='left'`` (powers of ``s`` on the right)
    and to ``P2R(s, T)`` for ``side='right'``.

    ``which='f_resolvent_series'``: ``-4 sum_n sum_k (n-k) T^(n-k-1) Tbar^(k-1) s^(-1-n)``,
    equal to ``FL``/``FR``.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    s, rho = _series_setup(s, T, tol)
    d = T.dim
    Tq = T.as_qmatrix()
    Tb = T.conj()
    I = QuaternionMatrix.identity(d)
    s_inv = s.inverse()
    total = QuaternionMatrix(np.zeros((4, d, d)))
    if which == "dbar_kernel_op":
        N = terms_for_tolerance(rho, tol, abs(s))
        T_pow, Tb_pow, H = I, I, I          # T^(n-1), Tbar^(n-1), sum_k T^(n-k) Tbar^(k-1)
        s_pow = s_inv * s_inv
        for n in range(1, N + 1):
            total = total + _s_power_on(side, (T_pow * float(n) + H) * 2.0, s_pow)
            Tb_pow = Tb_pow @ Tb
            H = Tq @ H + Tb_pow
            T_pow = T_pow @ Tq
            s_pow = s_pow * s_inv
        return total
    if which == "f_resolvent_series":
        N = 2
        while _f_series_tail(rho, N, abs(s)) > tol:
            N += 1
        # G_n = sum_{k=1}^{n-1} (n-k) T^(n-k-1) Tbar^(k-1);  G_{n+1} = T G_n + H_n
        G, H, Tb_pow = I, I, I              # G_2, H_1, Tbar^0
        s_pow = s_inv * s_inv * s_inv
        for n in range(2, N + 1):
            total = total + _s_power_on(side, G * -4.0, s_pow)
            Tb_pow = Tb_pow @ Tb
            H = Tq @ H + Tb_pow             # H_n
            G = Tq @ G + H                  # G_{n+1}
            s_pow = s_pow * s_inv
        return total
    raise ValueError(f"unknown series {which!r}")


def _appell_op(ell: int, T_pows: np.ndarray, Tb_pows: np.ndarray, d: int) -> np.ndarray:
    """``Q_ell(T, Tbar)`` from stacked powers of shape ``(4, N + 1, d, d)``."""
    if ell < 0:
        return np.zeros((4, d, d))
    weights = np.arange(ell + 1, 0, -1, dtype=float)[:, None, None]
    products = qmatmul(T_pows[:, ell::-1], Tb_pows[:, :ell + 1])
    return np.sum(products * weights, axis=1) * (2.0 / ((ell + 1) * (ell + 2)))


def appell_operator_series(side: str, s, T: CommutingOperator,
                           tol: float = 1e-13) -> QuaternionMatrix:
    """Appell form ``sum_n 2n [(n+1) Q_(n-1)(T,Tbar) - (n-1) T0 Q_(n-2)(T,Tbar)] s^(-1-n)``."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    s, rho = _series_setup(s, T, tol)
    d = T.dim
    N = terms_for_tolerance(rho, tol, abs(s))
    Tq, Tb = T.as_qmatrix(), T.conj()
    T_pows = [QuaternionMatrix.identity(d)]
    Tb_pows = [QuaternionMatrix.identity(d)]
    for _ in range(N):
        T_pows.append(T_pows[-1] @ Tq)
        Tb_pows.append(Tb_pows[-1] @ Tb)
    T_arr = np.stack([M.data for M in T_pows], axis=1)
    Tb_arr = np.stack([M.data for M in Tb_pows], axis=1)
    s_inv = s.inverse()
    s_pow = s_inv * s_inv
    total = QuaternionMatrix(np.zeros((4, d, d)))
    prev = _appell_op(-1, T_arr, Tb_arr, d)
    for n in range(1, N + 1):
        cur = _appell_op(n - 1, T_arr, Tb_arr, d)
        coeff = QuaternionMatrix((cur * float(n + 1) - T.T0 @ prev * float(n - 1)) * float(2 * n))
        total = total + _s_power_on(side, coeff, s_pow)
        s_pow = s_pow * s_inv
        prev = cur
    return total


def monomial_oracle(which: str, n: int, T: CommutingOperator) -> QuaternionMatrix:
    """Closed forms of the three calculi applied to ``s^n``.

    ``S``: ``T^n``; ``F``: ``-4 sum_{k=1}^{n-1} (n-k) T^(n-k-1) Tbar^(k-1)``;
    ``P2``: ``2 (n T^(n-1) + sum_{k=1}^n T^(n-k) Tbar^(k-1))`` (zero for ``n = 0``).
    """
    d = T.dim
    Tq, Tb = T.as_qmatrix(), T.conj()
    zero = QuaternionMatrix(np.zeros((4, d, d)))
    if which == "S":
        return Tq ** n
    if which == "F":
        acc = zero
        for k in range(1, n):
            acc = acc + (Tq ** (n - k - 1) @ Tb ** (k - 1)) * float(n - k)
        return acc * -4.0
    if which == "P2":
        if n == 0:
            return zero
        acc = Tq ** (n - 1) * float(n)
        for k in range(1, n + 1):
            acc = acc + Tq ** (n - k) @ Tb ** (k - 1)
        return acc * 2.0
    raise ValueError(f"unknown calculus {which!r}")


# -- diagonal lifts ------------------------------------------------------------------------

def diagonal_lift(points: Sequence) -> CommutingOperator:
    """Block-diagonal operator whose ``i``-th ``1 x 1`` block is the quaternion ``points[i]``."""
    arr = np.stack([as_array(Quaternion.coerce(p)) for p in points], axis=1)   # (4, d)
    return CommutingOperator(np.stack([np.diag(c) for c in arr]))


def diagonal_lift_check(f: SliceFunction, points: Sequence, contour: Optional[SliceContour] = None):
    """Compare each calculus block with the scalar formulas at the lifted points.

    Returns a dict mapping ``'S'``, ``'F'``, ``'P2'`` to the largest block
    deviation; pointwise references come from the scalar Cauchy, Fueter and
    polyanalytic integrals in :mod:`fueterkit.contour`.
    """
    from .contour import cauchy_eval, fueter_integral_eval, polyanalytic_integral_eval

    T = diagonal_lift(points)
    calc = FunctionalCalculus(T, contour)
    pointwise = {"S": cauchy_eval, "F": fueter_integral_eval, "P2": polyanalytic_integral_eval}
    report = {}
    for which, ref in pointwise.items():
        M = calc.apply(which, f)
        dev = 0.0
        for i, p in enumerate(points):
            dev = max(dev, abs(M.block(i) - ref(f, p, calc.contour)))
        report[which] = dev
    return report


def random_commuting_operator(rng: np.random.Generator, d: int, degree: int = 2,
                              scale: float = 1.0) -> CommutingOperator:
    """Four random polynomials (of ``degree``) in one random ``d x d`` matrix."""
    A = rng.standard_normal((d, d)) / math.sqrt(d)
    powers = [np.eye(d)]
    for _ in range(degree):
        powers.append(powers[-1] @ A)
    comps = []
    for _ in range(4):
        c = rng.standard_normal(degree + 1)
        comps.append(sum(ci * P for ci, P in zip(c, powers)))
    data = np.stack(comps)
    data *= scale / max(1.0, np.max(np.abs(data)))
    return CommutingOperator(data)
