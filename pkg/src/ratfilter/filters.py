"""Rational filter representations.

A CP-symmetric filter is stored by its q first-quadrant poles w_k and
coefficients g_k; the remaining 3q terms follow from conjugation and
reflection t -> -t::

    f(t) = sum_k  g_k/(t-w_k) + conj(g_k)/(t-conj(w_k))
                - g_k/(t+w_k) - conj(g_k)/(t+conj(w_k))

For real t this is 2 Re sum_k [g_k/(t-w_k) - g_k/(t+w_k)], which is how it
is evaluated here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DuplicatePoles, InvalidFilter, InvalidInterval, SymmetryViolation

__all__ = [
    "CPFilter",
    "FullFilter",
    "IntervalMap",
    "evaluate",
    "evaluate_derivative",
    "expand_cp",
    "reduce_to_cp",
    "map_interval",
    "local_extrema",
]

PAIR_TOL = 1e-12


def _as_complex_vector(x, name):
    arr = np.atleast_1d(np.asarray(x, dtype=complex)).ravel().copy()
    if not np.all(np.isfinite(arr)):
        raise InvalidFilter(f"{name} must be finite")
    return arr


class CPFilter:
    """Filter with conjugation and parity symmetry, given by first-quadrant poles.

    Poles are kept sorted by imaginary part (ascending) so that two filters
    describing the same function compare equal and serialize identically.
    Use :meth:`from_poles` to fold arbitrary poles into the first quadrant.
    """

    __slots__ = ("_poles", "_coeffs")

    def __init__(self, poles, coeffs):
        w = _as_complex_vector(poles, "poles")
        g = _as_complex_vector(coeffs, "coeffs")
        if w.size == 0:
            raise InvalidFilter("a filter needs at least one pole (q >= 1)")
        if w.shape != g.shape:
            raise InvalidFilter(f"got {w.size} poles but {g.size} coefficients")
        if np.any(w.real <= 0) or np.any(w.imag <= 0):
            raise InvalidFilter("CP filter poles must lie strictly in the first quadrant")
        order = np.lexsort((w.real, w.imag))
        w, g = w[order], g[order]
        if w.size > 1 and np.any(np.diff(w) == 0):
            raise DuplicatePoles("poles must be pairwise distinct")
        w.flags.writeable = False
        g.flags.writeable = False
        self._poles = w
        self._coeffs = g

    @classmethod
    def from_poles(cls, poles, coeffs):
        """Build a filter from any representatives of the symmetry orbits.

        A pole in another quadrant is replaced by its first-quadrant partner
        (conjugate and/or reflection) with the matching coefficient.
        """
        w = _as_complex_vector(poles, "poles")
        g = _as_complex_vector(coeffs, "coeffs")
        if w.shape != g.shape:
            raise InvalidFilter(f"got {w.size} poles but {g.size} coefficients")
        lower = w.imag < 0
        w = np.where(lower, w.conj(), w)
        g = np.where(lower, g.conj(), g)
        left = w.real < 0
        w = np.where(left, -w.conj(), w)
        g = np.where(left, -g.conj(), g)
        return cls(w, g)

    @property
    def poles(self):
        return self._poles

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def q(self):
        return self._poles.size

    def __call__(self, t):
        return evaluate(self, t)

    def derivative(self, t):
        return evaluate_derivative(self, t)

    def expand(self):
        return expand_cp(self)

    def with_params(self, poles, coeffs):
        return CPFilter(poles, coeffs)

    def __eq__(self, other):
        if not isinstance(other, CPFilter):
            return NotImplemented
        return np.array_equal(self._poles, other._poles) and np.array_equal(
            self._coeffs, other._coeffs
        )

    def __hash__(self):
        return hash((self._poles.tobytes(), self._coeffs.tobytes()))

    def __repr__(self):
        return f"CPFilter(q={self.q}, poles={self._poles!r}, coeffs={self._coeffs!r})"


@dataclass(frozen=True, eq=False)
class FullFilter:
    """Plain partial-fraction filter sum_i a_i/(t - z_i)."""

    poles: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        z = _as_complex_vector(self.poles, "poles")
        a = _as_complex_vector(self.coeffs, "coeffs")
        if z.shape != a.shape:
            raise InvalidFilter(f"got {z.size} poles but {a.size} coefficients")
        if np.any(z.imag == 0):
            raise InvalidFilter("poles must have non-zero imaginary part")
        if np.unique(z).size != z.size:
            raise DuplicatePoles("poles must be pairwise distinct")
        z.flags.writeable = False
        a.flags.writeable = False
        object.__setattr__(self, "poles", z)
        object.__setattr__(self, "coeffs", a)

    @property
    def n(self):
        return self.poles.size

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.sum(self.coeffs / (t[..., None] - self.poles), axis=-1)


@dataclass(frozen=True)
class IntervalMap:
    """Affine map of the canonical interval [-1, 1] onto [a, b]."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or not self.a < self.b:
            raise InvalidInterval(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def center(self):
        return 0.5 * (self.a + self.b)

    @property
    def radius(self):
        return 0.5 * (self.b - self.a)

    def to_canonical(self, x):
        return (np.asarray(x, dtype=float) - self.center) / self.radius

    def from_canonical(self, t):
        return self.radius * np.asarray(t, dtype=float) + self.center


def evaluate(f: CPFilter, t):
    """Filter value at real t (scalar or array)."""
    t = np.asarray(t, dtype=float)
    tt = t[..., None]
    g = f.coeffs
    s = np.sum(g / (tt - f.poles) - g / (tt + f.poles), axis=-1)
    out = 2.0 * s.real
    return float(out) if out.ndim == 0 else out


def evaluate_derivative(f: CPFilter, t):
    """d/dt of the filter at real t."""
    t = np.asarray(t, dtype=float)
    tt = t[..., None]
    g = f.coeffs
    s = np.sum(-g / (tt - f.poles) ** 2 + g / (tt + f.poles) ** 2, axis=-1)
    out = 2.0 * s.real
    return float(out) if out.ndim == 0 else out


def expand_cp(f: CPFilter) -> FullFilter:
    """All 4q poles, ordered in blocks [w, conj(w), -w, -conj(w)]."""
    w, g = f.poles, f.coeffs
    poles = np.concatenate([w, w.conj(), -w, -w.conj()])
    coeffs = np.concatenate([g, g.conj(), -g, -g.conj()])
    return FullFilter(poles, coeffs)


def reduce_to_cp(f: FullFilter, tol=PAIR_TOL) -> CPFilter:
    """Recover the first-quadrant representatives of a CP-symmetric filter.

    Raises SymmetryViolation (with the worst partner distance) if the pole
    and coefficient multiset is not closed under the symmetry group.
    """
    z, a = f.poles, f.coeffs
    n = z.size
    if n % 4 != 0:
        raise SymmetryViolation(f"pole count {n} is not divisible by 4")
    first = np.flatnonzero((z.real > 0) & (z.imag > 0))
    if first.size != n // 4:
        raise SymmetryViolation(
            f"expected {n // 4} first-quadrant poles, found {first.size}"
        )
    used = np.zeros(n, dtype=bool)
    used[first] = True
    worst = 0.0
    for k in first:
        w, g = z[k], a[k]
        for pw, pg in ((w.conjugate(), g.conjugate()), (-w, -g), (-w.conjugate(), -g.conjugate())):
            cand = np.flatnonzero(~used)
            if cand.size == 0:
                raise SymmetryViolation("ran out of partner poles", distance=np.inf)
            dist = np.abs(z[cand] - pw) + np.abs(a[cand] - pg)
            j = int(np.argmin(dist))
            worst = max(worst, float(dist[j]))
            used[cand[j]] = True
    if worst > tol:
        raise SymmetryViolation(
            f"pole set is not CP-symmetric (worst partner distance {worst:.3e})",
            distance=worst,
        )
    return CPFilter(z[first], a[first])


def map_interval(f: FullFilter, m: IntervalMap) -> FullFilter:
    """Transport a canonical filter to [a, b]: z' = r z + c, a' = r a."""
    if isinstance(f, CPFilter):
        f = expand_cp(f)
    r, c = m.radius, m.center
    return FullFilter(r * f.poles + c, r * f.coeffs)


def local_extrema(f: CPFilter, lo, hi, grid=None):
    """Local extrema of f on [lo, hi] as a sorted list of (t, f(t)).

    Sign changes of f' on a uniform grid are refined by root bracketing on f'.
    The default grid has 2000 points per unit length.
    """
    if not lo < hi:
        raise InvalidInterval(f"need lo < hi, got [{lo}, {hi}]")
    if grid is None:
        grid = max(3, int(math.ceil(2000 * (hi - lo))) + 1)
    if grid < 3:
        raise ValueError("grid must have at least 3 points")
    t = np.linspace(lo, hi, grid)
    d = evaluate_derivative(f, t)
    out = []
    # exact zeros of f' on the grid that separate a sign change
    z = np.flatnonzero(d[1:-1] == 0.0) + 1
    out += [t[i] for i in z if d[i - 1] * d[i + 1] < 0]
    for i in np.flatnonzero(d[:-1] * d[1:] < 0):
        x = brentq(lambda s: evaluate_derivative(f, s), t[i], t[i + 1],
                   xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        out.append(x)
    out.sort()
    return [(float(x), float(evaluate(f, x))) for x in out]
