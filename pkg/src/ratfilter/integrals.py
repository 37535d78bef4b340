"""Closed-form integrals of products of simple poles over real segments,
and assembly of the matrices that make up the residual level function.

Every kernel broadcasts over its complex arguments.  Logarithms are always
taken as log(b - w) - log(a - w): for Im w != 0 the imaginary part of t - w
has a fixed sign along [a, b], so no branch cut is crossed.

Near-confluent arguments (|w1 - w2| small compared with the distance from
w1 to the segment) are handled with a convergent power series in w2 - w1,
since the partial-fraction formulas cancel catastrophically there.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DuplicatePoles, InvalidFilter, RealPole
from .weights import WeightFunction, h_norm_sq

__all__ = [
    "int_lin", "int_sq", "int_pair", "int_sq_lin", "int_cube", "int_sq_sq", "int_quart",
    "AssembledSystem", "GradientSystem", "HessianSystem",
    "assemble", "assemble_grad", "assemble_hess", "piece_integral",
]

CONFLUENT_TOL = 1e-12
SERIES_RATIO = 0.25


def _check_off_axis(*ws):
    for w in ws:
        if np.any(np.imag(w) == 0):
            raise RealPole("pole on the real axis")


def _c(w):
    w = np.asarray(w)
    return w if w.dtype == np.clongdouble else w.astype(complex)


def int_lin(w, a, b):
    """int_a^b dt / (t - w)."""
    w = _c(w)
    _check_off_axis(w)
    return np.log(b - w) - np.log(a - w)


def int_sq(w, a, b):
    """int_a^b dt / (t - w)^2."""
    w = _c(w)
    _check_off_axis(w)
    return (b - a) / ((b - w) * (a - w))


def int_cube(w, a, b):
    """int_a^b dt / (t - w)^3."""
    w = _c(w)
    _check_off_axis(w)
    return 0.5 * (b - a) * (b + a - 2 * w) / ((b - w) ** 2 * (a - w) ** 2)


def int_quart(w, a, b):
    """int_a^b dt / (t - w)^4."""
    w = _c(w)
    _check_off_axis(w)
    return (1.0 / (a - w) ** 3 + 1.0 / (w - b) ** 3) / 3.0


def _power(w, a, b, m):
    # int_a^b (t - w)^-m dt for m >= 2
    return ((b - w) ** (1 - m) - (a - w) ** (1 - m)) / (1 - m)


def _series(w1, d, a, b, shift, weight):
    """sum_n weight(n) d^n int (t - w1)^-(n + shift), for small |d|."""
    dist = np.abs(np.clip(w1.real, min(a, b), max(a, b)) - w1)
    r = np.max(np.abs(d) / dist) if d.size else 0.0
    nterms = 1 if r == 0 else int(min(80, np.ceil(np.log(1e-18) / np.log(r))))
    total = np.zeros(np.broadcast(w1, d).shape, dtype=w1.dtype)
    dn = np.ones_like(total)
    for n in range(nterms + 1):
        total = total + weight(n) * dn * _power(w1, a, b, n + shift)
        dn = dn * d
    return total


def _two_pole(w1, w2, a, b, generic, confluent, shift, weight):
    w1, w2 = np.broadcast_arrays(_c(w1), _c(w2))
    _check_off_axis(w1, w2)
    d = w2 - w1
    conf = np.abs(d) < CONFLUENT_TOL * np.maximum(1.0, np.abs(w1))
    dist = np.abs(np.clip(w1.real, min(a, b), max(a, b)) - w1)
    near = (np.abs(d) < SERIES_RATIO * dist) & ~conf
    far = ~(conf | near)
    out = np.empty(w1.shape, dtype=w1.dtype)
    if np.any(far):
        out[far] = generic(w1[far], w2[far], a, b)
    if np.any(near):
        out[near] = _series(w1[near], d[near], a, b, shift, weight)
    if np.any(conf):
        out[conf] = confluent(w1[conf], a, b)
    return out if out.ndim else out[()]


def _pair_generic(w1, w2, a, b):
    return (int_lin(w1, a, b) - int_lin(w2, a, b)) / (w1 - w2)


def _sq_lin_generic(w1, w2, a, b):
    d = w1 - w2
    return int_sq(w1, a, b) / d + (int_lin(w2, a, b) - int_lin(w1, a, b)) / d**2


def _sq_sq_generic(w1, w2, a, b):
    d = w1 - w2
    rat = (a - b) / d**2 * (1.0 / ((a - w1) * (w1 - b)) + 1.0 / ((a - w2) * (w2 - b)))
    logs = 2.0 / d**3 * ((np.log(a - w1) - np.log(b - w1)) + (np.log(b - w2) - np.log(a - w2)))
    return rat + logs


def int_pair(w1, w2, a, b):
    """int_a^b dt / ((t - w1)(t - w2))."""
    return _two_pole(w1, w2, a, b, _pair_generic, int_sq, 2, lambda n: 1.0)


def int_sq_lin(w1, w2, a, b):
    """int_a^b dt / ((t - w1)^2 (t - w2))."""
    return _two_pole(w1, w2, a, b, _sq_lin_generic, int_cube, 3, lambda n: 1.0)


def int_sq_sq(w1, w2, a, b):
    """int_a^b dt / ((t - w1)^2 (t - w2)^2)."""
    return _two_pole(w1, w2, a, b, _sq_sq_generic, int_quart, 4, lambda n: n + 1.0)


def piece_integral(kernel, W: WeightFunction, *args, inner=False):
    """Sum of g * kernel(*args, lo, hi) over the weight pieces and their mirrors.

    With ``inner=True`` only the part of the support inside [-1, 1] is used,
    which is where the target indicator is nonzero.
    """
    arrs = [np.asarray(a) for a in args]
    shape = np.broadcast(*arrs).shape
    dtype = np.clongdouble if any(a.dtype == np.clongdouble for a in arrs) else complex
    total = np.zeros(shape, dtype=dtype)
    pieces = W.inner_pieces() if inner else W.pieces()
    for lo, hi, g in pieces:
        total += g * (kernel(*args, lo, hi) + kernel(*args, -hi, -lo))
    return total


def _check_poles(poles, dtype=complex):
    w = np.atleast_1d(np.asarray(poles, dtype=complex))
    _check_off_axis(w)
    if np.any(w.real <= 0) or np.any(w.imag <= 0):
        raise InvalidFilter("poles must lie strictly in the first quadrant")
    if np.unique(w).size != w.size:
        raise DuplicatePoles("poles must be pairwise distinct")
    return w.astype(dtype)


@dataclass
class AssembledSystem:
    """Integral matrices for one pole set.

    X[k,l] = int G/((t-conj w_k)(t-w_l)),  Y: (conj w_k, -conj w_l),
    W: (conj w_k, conj w_l),  Z: (conj w_k, -w_l),
    theta[k] = int G h/(t - conj w_k),  theta_pty[k] = int G h/(t + conj w_k).
    """

    X: np.ndarray
    Y: np.ndarray
    W: np.ndarray
    Z: np.ndarray
    theta: np.ndarray
    theta_pty: np.ndarray
    h_norm_sq: float


@dataclass
class GradientSystem:
    gX: np.ndarray
    gZ: np.ndarray
    gWbar: np.ndarray
    gYbar: np.ndarray
    gtheta: np.ndarray


@dataclass
class HessianSystem:
    ggWbar: np.ndarray
    ggYbar: np.ndarray
    ggX: np.ndarray
    ggZ: np.ndarray


def assemble(poles, W: WeightFunction, extended=False) -> AssembledSystem:
    """Level matrices; ``extended=True`` evaluates them in long double precision."""
    w = _check_poles(poles, np.clongdouble if extended else complex)
    wk, wl = w[:, None], w[None, :]
    cwk = wk.conj()
    return AssembledSystem(
        X=piece_integral(int_pair, W, cwk, wl),
        Y=piece_integral(int_pair, W, cwk, -wl.conj()),
        W=piece_integral(int_pair, W, cwk, wl.conj()),
        Z=piece_integral(int_pair, W, cwk, -wl),
        theta=piece_integral(int_lin, W, w.conj(), inner=True),
        theta_pty=piece_integral(int_lin, W, -w.conj(), inner=True),
        h_norm_sq=h_norm_sq(W),
    )


def assemble_grad(poles, W: WeightFunction) -> GradientSystem:
    """First-derivative matrices.

    gX[k,l] = int G/((t-conj w_k)(t-w_l)^2), gZ = -int G/((t-conj w_k)(t+w_l)^2),
    gWbar = int G/((t-w_k)(t-w_l)^2), gYbar = -int G/((t-w_k)(t+w_l)^2),
    gtheta[k] = int G h/(t-w_k)^2.
    """
    w = _check_poles(poles)
    wk, wl = w[:, None], w[None, :]
    return GradientSystem(
        gX=piece_integral(int_sq_lin, W, wl, wk.conj()),
        gZ=-piece_integral(int_sq_lin, W, -wl, wk.conj()),
        gWbar=piece_integral(int_sq_lin, W, wl, wk),
        gYbar=-piece_integral(int_sq_lin, W, -wl, wk),
        gtheta=piece_integral(int_sq, W, w, inner=True),
    )


def assemble_hess(poles, W: WeightFunction) -> HessianSystem:
    """Second-derivative matrices.

    ggWbar[i,j] = int G/((t-w_i)^2 (t-w_j)^2), ggYbar = -int G/((t-w_i)^2 (t+w_j)^2),
    ggX = int G/((t-conj w_i)^2 (t-w_j)^2), ggZ = -int G/((t-conj w_i)^2 (t+w_j)^2).
    """
    w = _check_poles(poles)
    wi, wj = w[:, None], w[None, :]
    return HessianSystem(
        ggWbar=piece_integral(int_sq_sq, W, wi, wj),
        ggYbar=-piece_integral(int_sq_sq, W, wi, -wj),
        ggX=piece_integral(int_sq_sq, W, wi.conj(), wj),
        ggZ=-piece_integral(int_sq_sq, W, wi.conj(), -wj),
    )
