"""Classical filters used as starting points: Gauss, trapezoid and elliptic.

The contour filters discretize (1/pi) Re int_0^pi r e^{i phi}/(r e^{i phi} - t) dphi,
whose value is 1 inside the circle and 0 outside.  A node z with angular
weight W contributes the term -(W/(2 pi)) z/(t - z) plus its conjugate.

The elliptic filter transports the Zolotarev best uniform approximant of
sign(x) on [l, 1] to the real t axis with x = (1 - t^2)/(1 + t^2), which sends
the interval edges t = +-1 to x = 0 and the exterior to x < 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import ellipkm1

from .errors import ConstructionFailure
from .filters import CPFilter, FullFilter, reduce_to_cp

__all__ = [
    "ContourSpec", "gauss_filter", "trapezoidal_filter", "elliptic_filter",
    "elliptic_sncn", "zolotarev_ripple", "elliptic_modulus", "REFERENCE_ELLIPTIC",
]

# The reference elliptic filter has 16 poles (q = 4) and a transition modulus
# l = 1/500; for other degrees the modulus is chosen to give the same ripple.
REFERENCE_ELLIPTIC = (4, 0.002)


@dataclass(frozen=True)
class ContourSpec:
    """Circle centered at the origin, enclosing [-1, 1]."""

    radius: float = 1.0
    center: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.center != 0.0:
            raise ValueError("CP-symmetric filters need a contour centered at 0")


def _contour_filter(nodes, weights, contour: ContourSpec):
    """nodes: angles in (0, pi); weights: angular quadrature weights."""
    z = contour.radius * np.exp(1j * nodes)
    a = -(weights / (2 * np.pi)) * z
    full = FullFilter(np.concatenate([z, z.conj()]), np.concatenate([a, a.conj()]))
    return reduce_to_cp(full)


def gauss_filter(q: int, contour: ContourSpec | None = None) -> CPFilter:
    """Gauss-Legendre quadrature of the upper half circle with 2q nodes."""
    if q < 1:
        raise ValueError("q must be at least 1")
    contour = contour or ContourSpec()
    x, om = np.polynomial.legendre.leggauss(2 * q)
    return _contour_filter(0.5 * np.pi * (x + 1), 0.5 * np.pi * om, contour)


def trapezoidal_filter(q: int, contour: ContourSpec | None = None) -> CPFilter:
    """Equispaced midpoint nodes on the upper half circle (none on the real axis)."""
    if q < 1:
        raise ValueError("q must be at least 1")
    contour = contour or ContourSpec()
    n = 2 * q
    phi = (np.arange(1, n + 1) - 0.5) * np.pi / n
    return _contour_filter(phi, np.full(n, np.pi / n), contour)


def elliptic_sncn(u, kc, tol=1e-15):
    """Jacobi sn and cn for modulus k = sqrt(1 - kc^2), given kc directly.

    Descending Landen (arithmetic-geometric mean) scheme; passing the
    complementary modulus keeps full accuracy when k is close to 1.
    """
    a = [1.0]
    c = [np.sqrt((1.0 - kc) * (1.0 + kc))]
    b = kc
    while abs(c[-1]) > tol * a[-1]:
        if len(a) > 60:
            raise ConstructionFailure("Landen iteration did not converge")
        ai = a[-1]
        c.append(0.5 * (ai - b))
        a.append(0.5 * (ai + b))
        b = np.sqrt(ai * b)
    n = len(a) - 1
    phi = 2.0**n * a[-1] * u
    for i in range(n, 0, -1):
        phi = 0.5 * (np.arcsin(c[i] * np.sin(phi) / a[i]) + phi)
    return np.sin(phi), np.cos(phi)


def _zolotarev_roots(q, ell):
    """Squared pole/zero magnitudes c_1 < ... < c_{2q-1} of the degree (2q-1, 2q) approximant."""
    Kp = ellipkm1(ell * ell)  # K(l') with l' = sqrt(1 - l^2)
    c = np.empty(2 * q - 1)
    for i in range(1, 2 * q):
        sn, cn = elliptic_sncn(i * Kp / (2 * q), ell)
        c[i - 1] = (ell * sn / cn) ** 2
    return c[0::2], c[1::2]  # denominator, numerator


def _r0(x, odd, even):
    x = np.asarray(x, dtype=float)
    xx = x * x
    num = x * np.prod(xx[..., None] + even, axis=-1)
    den = np.prod(xx[..., None] + odd, axis=-1)
    return num / den


def zolotarev_ripple(q, ell):
    """Relative ripple (max - min)/(max + min) of the unscaled approximant on [l, 1].

    The minima sit at both endpoints; the interior maxima are all equal, so
    one refined maximum is enough.
    """
    odd, even = _zolotarev_roots(q, ell)
    xs = np.geomspace(ell, 1.0, 2001)
    v = _r0(xs, odd, even)
    i = int(np.clip(np.argmax(v), 1, xs.size - 2))
    res = minimize_scalar(lambda s: -_r0(np.exp(s), odd, even),
                          bounds=(np.log(xs[i - 1]), np.log(xs[i + 1])),
                          method="bounded", options={"xatol": 1e-12})
    vmax = max(-res.fun, v.max())
    vmin = min(_r0(1.0, odd, even), _r0(ell, odd, even))
    return (vmax - vmin) / (vmax + vmin)


@lru_cache(maxsize=64)
def elliptic_modulus(q: int) -> float:
    """Transition modulus l giving degree q the reference filter's ripple."""
    q_ref, ell_ref = REFERENCE_ELLIPTIC
    if q == q_ref:
        return ell_ref
    target = np.log(zolotarev_ripple(q_ref, ell_ref))
    g = lambda ell: np.log(zolotarev_ripple(q, ell)) - target
    lo, hi = 1e-14, 0.999
    try:
        if g(lo) * g(hi) > 0:
            raise ValueError
        return float(np.exp(brentq(lambda s: g(np.exp(s)), np.log(lo), np.log(hi), xtol=1e-13)))
    except (ValueError, RuntimeError) as exc:
        raise ConstructionFailure(f"no transition modulus found for q = {q}") from exc


def elliptic_filter(q: int, ell: float | None = None) -> CPFilter:
    """Zolotarev (elliptic) filter with 4q poles.

    f(t) = (1 + r(x))/2 with x = (1 - t^2)/(1 + t^2) and r the type
    (2q-1, 2q) Zolotarev approximant of sign(x) on [l, 1], scaled so that
    r(1) = 1.  Hence f(0) = 1, f(+-1) = 1/2 and f -> 0 at infinity, and the
    error equioscillates inside and outside [-1, 1].  By default l follows
    :func:`elliptic_modulus`.
    """
    if q < 1:
        raise ValueError("q must be at least 1")
    if ell is None:
        ell = elliptic_modulus(q)
    if not 0 < ell < 1:
        raise ValueError("transition modulus must lie in (0, 1)")
    odd, even = _zolotarev_roots(q, ell)
    if not (np.all(np.isfinite(odd)) and np.all(np.isfinite(even))):
        raise ConstructionFailure("non-finite Zolotarev coefficients")
    scale = 1.0 / _r0(1.0, odd, even)
    poles, coeffs = [], []
    for j, o in enumerate(odd):
        # scale * r0(x) = sum_j b_j x/(x^2 + o_j)
        b = scale * np.prod(even - o) / np.prod(np.delete(odd, j) - o)
        for xp in (1j * np.sqrt(o), -1j * np.sqrt(o)):
            u = (1 - xp) / (1 + xp)
            for tp in (np.sqrt(u), -np.sqrt(u)):
                dxdt = -4 * tp / (1 + tp * tp) ** 2
                poles.append(tp)
                coeffs.append(0.25 * b / dxdt)
    try:
        return reduce_to_cp(FullFilter(np.array(poles), np.array(coeffs)))
    except Exception as exc:
        raise ConstructionFailure(f"elliptic construction failed: {exc}") from exc
