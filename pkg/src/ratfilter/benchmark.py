"""Evaluation of filters against spectra: benchmark interval generation,
convergence rates, shifted-system condition numbers and performance profiles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.optimize import brentq

from .errors import DegenerateSpectrum, EmptyInput, InsufficientSpectrum, ZeroDenominator
from .filters import CPFilter, FullFilter, IntervalMap, evaluate, expand_cp, map_interval

__all__ = [
    "Spectrum", "BenchmarkProblem", "ProfileCurve",
    "density_approximant", "feature_points", "generate_intervals",
    "convergence_rate", "worst_condition", "performance_profile", "synthetic_spectrum",
]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted list of real eigenvalues."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        lam = np.sort(np.asarray(self.eigenvalues, dtype=float).ravel())
        if lam.size < 2:
            raise InsufficientSpectrum("a spectrum needs at least two eigenvalues")
        if not np.all(np.isfinite(lam)):
            raise ValueError("eigenvalues must be finite")
        lam.flags.writeable = False
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def n(self):
        return self.eigenvalues.size

    def count(self, a, b):
        """Number of eigenvalues in the closed interval [a, b]."""
        lam = self.eigenvalues
        return int(np.searchsorted(lam, b, side="right") - np.searchsorted(lam, a, side="left"))


@dataclass(frozen=True)
class BenchmarkProblem:
    a: float
    b: float
    m: int
    p: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("need a < b")
        if self.m < 1 or self.p < self.m:
            raise ValueError("need 1 <= m <= p")

    @property
    def interval(self):
        return IntervalMap(self.a, self.b)

    @classmethod
    def from_spectrum(cls, S: Spectrum, a, b, p_factor=1.5):
        m = S.count(a, b)
        if m < 1:
            raise InsufficientSpectrum(f"no eigenvalues in [{a}, {b}]")
        return cls(float(a), float(b), m, math.ceil(p_factor * m))


@dataclass
class ProfileCurve:
    """Step function phi(x): fraction of problems within a factor x of the best."""

    method: str
    x: np.ndarray
    phi: np.ndarray

    def __call__(self, x):
        i = np.searchsorted(self.x, x, side="right") - 1
        return np.where(i >= 0, self.phi[np.maximum(i, 0)], 0.0)


def density_approximant(S: Spectrum, M=45, bandwidth=None, grid=10_000):
    """Degree-M Chebyshev fit to a Gaussian-smoothed eigenvalue density."""
    lam = S.eigenvalues
    lo, hi = lam[0], lam[-1]
    if hi == lo:
        raise DegenerateSpectrum("all eigenvalues coincide")
    h = bandwidth if bandwidth is not None else (hi - lo) / 200
    x = np.linspace(lo, hi, grid)
    dens = np.zeros_like(x)
    for chunk in np.array_split(lam, max(1, lam.size // 512)):
        dens += np.exp(-0.5 * ((x[:, None] - chunk[None, :]) / h) ** 2).sum(axis=1)
    dens /= lam.size * h * np.sqrt(2 * np.pi)
    return Chebyshev.fit(x, dens, M, domain=[lo, hi])


def _grid_roots(p, lo, hi, grid, scale):
    if np.all(np.abs(p.coef) <= 1e-12 * scale):
        return []  # identically zero (e.g. phi'' of a linear fit)
    x = np.linspace(lo, hi, grid)
    v = p(x)
    roots = list(x[v == 0])
    idx = np.flatnonzero(v[:-1] * v[1:] < 0)
    roots += [brentq(p, x[i], x[i + 1], xtol=1e-14 * max(1.0, abs(x[i]))) for i in idx]
    return roots


def feature_points(S: Spectrum, M=45, bandwidth=None, grid=10_000):
    """Real zeros of phi' and phi'' of the density approximant, sorted."""
    phi = density_approximant(S, M, bandwidth)
    lo, hi = S.eigenvalues[0], S.eigenvalues[-1]
    scale = np.abs(phi.coef).max()
    pts = (_grid_roots(phi.deriv(1), lo, hi, grid, scale)
           + _grid_roots(phi.deriv(2), lo, hi, grid, scale))
    return np.unique(np.asarray(pts, dtype=float))


def generate_intervals(S: Spectrum, M=45, fmin=0.05, fmax=0.20, p_factor=1.5, bandwidth=None):
    """All intervals between feature points whose exact eigenvalue count
    lies in [fmin n, fmax n].  Problems are ordered by (a, b)."""
    if not 0 < fmin < fmax < 1:
        raise ValueError("need 0 < fmin < fmax < 1")
    E = feature_points(S, M, bandwidth)
    if E.size < 2:
        raise DegenerateSpectrum(f"only {E.size} feature points found")
    lam = S.eigenvalues
    left = np.searchsorted(lam, E, side="left")
    right = np.searchsorted(lam, E, side="right")
    counts = right[None, :] - left[:, None]
    i, j = np.nonzero(np.triu(np.ones_like(counts, dtype=bool), k=1)
                      & (counts >= fmin * S.n) & (counts <= fmax * S.n) & (counts >= 1))
    return [BenchmarkProblem(float(E[a]), float(E[b]), int(counts[a, b]),
                             math.ceil(p_factor * counts[a, b]))
            for a, b in zip(i, j)]


def _abs_values(f, x):
    if isinstance(f, FullFilter):
        return np.abs(f(x).real)
    return np.abs(evaluate(f, x))


def convergence_rate(f, S: Spectrum, prob: BenchmarkProblem) -> float:
    """tau = |f(lambda_{p+1})| / |f(lambda_m)| with |f| sorted descending.

    Eigenvalues are mapped to the canonical interval first; ties are
    broken by ascending eigenvalue index.
    """
    if prob.p + 1 > S.n:
        raise InsufficientSpectrum(f"p + 1 = {prob.p + 1} exceeds n = {S.n}")
    x = prob.interval.to_canonical(S.eigenvalues)
    v = _abs_values(f, x)
    v = v[np.argsort(-v, kind="stable")]
    if v[prob.m - 1] == 0:
        raise ZeroDenominator("|f(lambda_m)| vanishes")
    return float(v[prob.p] / v[prob.m - 1])


def worst_condition(f, S: Spectrum, interval: IntervalMap) -> float:
    """Largest max|lambda - z| / min|lambda - z| over the mapped poles z."""
    full = expand_cp(f) if isinstance(f, CPFilter) else f
    z = map_interval(full, interval).poles
    d = np.abs(S.eigenvalues[:, None] - z[None, :])
    return float(np.max(d.max(axis=0) / d.min(axis=0)))


def performance_profile(metrics: dict) -> list[ProfileCurve]:
    """Performance profiles from {method: per-problem positive metrics}.

    Every curve is reported at the union of all distinct ratio values.
    """
    if not metrics:
        raise EmptyInput("no methods given")
    names = list(metrics)
    rows = [np.asarray(metrics[k], dtype=float).ravel() for k in names]
    if len({r.size for r in rows}) != 1:
        raise ValueError("every method needs a value for every problem")
    T = np.array(rows)
    if T.shape[1] == 0:
        raise EmptyInput("no problems given")
    if not np.all(np.isfinite(T)) or np.any(T <= 0):
        raise ValueError("metrics must be finite and positive")
    R = T / T.min(axis=0)
    xs = np.unique(R)
    return [ProfileCurve(k, xs, (R[i][:, None] <= xs[None, :]).mean(axis=0))
            for i, k in enumerate(names)]


def synthetic_spectrum(clusters=10, seed=0, span=10.0):
    """Clustered test spectrum: Gaussian clusters of 150-450 eigenvalues on [-span, span]."""
    rng = np.random.default_rng(seed)
    c = np.sort(rng.uniform(-span, span, clusters))
    s = rng.uniform(0.2, 1.0, clusters)
    n = rng.integers(150, 450, clusters)
    return Spectrum(np.concatenate([rng.normal(ci, si, ni) for ci, si, ni in zip(c, s, n)]))
