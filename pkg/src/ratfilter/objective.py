"""Residual level function, its gradient and the steepness penalty.

The level is the weighted least-squares distance between the filter and the
indicator h of [-1, 1], evaluated in closed form from the CP-reduced matrices.
With the ``1/2 ||h||^2`` term the reduced expression equals

    F = 1/2 int G(t) (h(t) - f(t))^2 dt,

i.e. half the full-form value ``a^H G a - 2 Re(eta^H a) + ||h||^2``
(``NORMALIZATION`` below).  Levels reported by this package use the reduced
convention throughout.

Gradients are returned as Wirtinger derivatives dF_full/dw_k and dF_full/dg_k
of the full-form level.  Their complex conjugate is the ordinary gradient of
the reduced level in real coordinates:

    dF/dRe(w) + i dF/dIm(w) = conj(grad_w).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainEscape
from .filters import CPFilter, evaluate, evaluate_derivative, expand_cp
from .integrals import (
    AssembledSystem, assemble, assemble_grad, int_lin, int_pair, piece_integral,
)
from .weights import WeightFunction, h_norm_sq

__all__ = [
    "NORMALIZATION", "ObjectiveValue", "PenaltyConfig",
    "residual_level", "residual_level_oracle", "residual_level_quadrature",
    "gradient", "steepness", "penalty", "check_domain",
]

# reduced level = NORMALIZATION * full-form level
NORMALIZATION = 0.5

MAX_POLE_MODULUS = 1e6
MIN_POLE_IMAG = 1e-14


@dataclass
class ObjectiveValue:
    value: float
    grad_w: np.ndarray
    grad_gamma: np.ndarray

    @property
    def grad(self):
        """Stacked [grad_w, grad_gamma]."""
        return np.concatenate([self.grad_w, self.grad_gamma])

    @property
    def grad_norm(self):
        return float(np.linalg.norm(self.grad))


@dataclass(frozen=True)
class PenaltyConfig:
    c: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.c):
            raise ValueError("penalty parameter must be finite")


def check_domain(poles):
    w = np.asarray(poles)
    if np.any(np.abs(w) > MAX_POLE_MODULUS):
        raise DomainEscape(f"pole modulus exceeded {MAX_POLE_MODULUS:g}")
    if np.any(np.abs(w.imag) < MIN_POLE_IMAG):
        raise DomainEscape("pole collapsed onto the real axis")
    if np.any(w.real <= 0) or np.any(w.imag <= 0):
        raise DomainEscape("pole left the first quadrant")


def _level(g, A: AssembledSystem):
    g = np.asarray(g).astype(A.X.dtype)
    gc = g.conj()
    F = (2 * (gc @ A.X @ g).real
         - 2 * (gc @ A.Y @ gc).real
         + 2 * (gc @ A.W @ gc).real
         - 2 * (gc @ A.Z @ g).real
         - 2 * (gc @ A.theta - A.theta_pty @ gc).real
         + 0.5 * A.h_norm_sq)
    return float(F)


def residual_level(f: CPFilter, W: WeightFunction) -> float:
    """Reduced residual level, 1/2 int G (h - f)^2.

    The closed form subtracts O(1) terms to produce a small number, so it is
    evaluated in long double precision where the platform provides it.  Near
    a minimizer this keeps level differences resolvable well below 1e-16.
    """
    check_domain(f.poles)
    return _level(f.coeffs, assemble(f.poles, W, extended=True))


def residual_level_oracle(f: CPFilter, W: WeightFunction) -> float:
    """Full-form level a^H G a - 2 Re(eta^H a) + ||h||^2 over all 4q poles.

    This is the unreduced value, so it equals residual_level / NORMALIZATION.
    """
    full = expand_cp(f)
    z, a = full.poles, full.coeffs
    G = piece_integral(int_pair, W, z.conj()[:, None], z[None, :])
    eta = piece_integral(int_lin, W, z.conj(), inner=True)
    val = (a.conj() @ G @ a).real - 2 * (eta.conj() @ a).real + h_norm_sq(W)
    return float(val)


def residual_level_quadrature(f: CPFilter, W: WeightFunction, epsabs=1e-14, epsrel=1e-12):
    """Adaptive quadrature of int G (h - f)^2 (full form, no 1/2)."""
    total = 0.0
    kinks = [1.0] + list(f.poles.real)
    for lo, hi, g in W.pieces():
        pts = sorted({p for p in kinks if lo < p < hi})

        def integrand(t):
            return ((1.0 if abs(t) <= 1 else 0.0) - evaluate(f, t)) ** 2

        val = quad(integrand, lo, hi, points=pts or None, limit=5000,
                   epsabs=epsabs, epsrel=epsrel)[0]
        total += 2 * g * val  # even integrand: mirror piece contributes the same
    return total


def gradient(f: CPFilter, W: WeightFunction, asm: AssembledSystem | None = None) -> ObjectiveValue:
    """Level and Wirtinger gradient with respect to poles and coefficients."""
    check_domain(f.poles)
    w, g = f.poles, f.coeffs
    A = asm if asm is not None else assemble(w, W)
    D = assemble_grad(w, W)
    gc = g.conj()
    grad_gamma = 4 * (gc @ (A.X - A.Z) + g @ (A.W.conj() - A.Y.conj()) - A.theta.conj())
    grad_w = 4 * (gc @ (D.gX - D.gZ) + g @ (D.gWbar - D.gYbar) - D.gtheta) * g
    return ObjectiveValue(_level(g, A), grad_w, grad_gamma)


def steepness(f: CPFilter) -> float:
    """Derivative of the filter at the interval edge t = 1."""
    return evaluate_derivative(f, 1.0)


def penalty(f: CPFilter, cfg: PenaltyConfig):
    """Steepness penalty c f'(1) and its gradient.

    The gradient uses the same convention as :func:`gradient`, so the two can
    be added directly (conj of the sum is the real-coordinate gradient of
    level + penalty).
    """
    q = f.q
    if cfg.c == 0:
        return 0.0, np.zeros(q, complex), np.zeros(q, complex)
    w, g = f.poles, f.coeffs
    value = cfg.c * steepness(f)
    du_dw = -2 * g / (1 - w) ** 3 - 2 * g / (1 + w) ** 3
    du_dg = -1 / (1 - w) ** 2 + 1 / (1 + w) ** 2
    return value, 2 * cfg.c * du_dw, 2 * cfg.c * du_dg
