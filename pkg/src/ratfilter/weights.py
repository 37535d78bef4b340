"""Even, piecewise-constant least-squares weights and the guideline checkers.

A weight is described on the half axis by breakpoints b_1 < ... < b_s and
values g_1 ... g_s: g_j holds on [b_{j-1}, b_j) with b_0 = 0, and the weight
vanishes for |t| >= b_s.  The target is the indicator of [-1, 1].
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidWeight, ZeroAtOrigin
from .filters import evaluate, local_extrema

__all__ = [
    "WeightFunction",
    "GuidelineReport",
    "unit_weight",
    "weight_at",
    "normalize",
    "h_norm_sq",
    "check_guideline1",
    "check_guideline2",
    "check_guideline3",
]


@dataclass(frozen=True, eq=False)
class WeightFunction:
    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.breakpoints, dtype=float)).copy()
        g = np.atleast_1d(np.asarray(self.values, dtype=float)).copy()
        if b.size == 0 or b.shape != g.shape:
            raise InvalidWeight("need one value per breakpoint")
        if not np.all(np.isfinite(b)):
            raise InvalidWeight("weights must have finite support")
        if not np.all(np.isfinite(g)) or np.any(g < 0):
            raise InvalidWeight("weight values must be finite and non-negative")
        if b[0] <= 0 or np.any(np.diff(b) <= 0):
            raise InvalidWeight("breakpoints must be positive and strictly increasing")
        if b[-1] <= 1:
            raise InvalidWeight("the support must extend beyond t = 1")
        b.flags.writeable = False
        g.flags.writeable = False
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", g)

    def __call__(self, t):
        return weight_at(self, t)

    def __eq__(self, other):
        if not isinstance(other, WeightFunction):
            return NotImplemented
        return np.array_equal(self.breakpoints, other.breakpoints) and np.array_equal(
            self.values, other.values
        )

    @property
    def support(self):
        return float(self.breakpoints[-1])

    def pieces(self):
        """Half-axis pieces (lo, hi, g) with g > 0."""
        lo = np.concatenate([[0.0], self.breakpoints[:-1]])
        keep = self.values > 0
        return list(zip(lo[keep], self.breakpoints[keep], self.values[keep]))

    def inner_pieces(self):
        """Pieces clipped to [0, 1], where the target equals one."""
        out = []
        for lo, hi, g in self.pieces():
            hi = min(hi, 1.0)
            if lo < hi:
                out.append((lo, hi, g))
        return out


def unit_weight(support=1000.0):
    """Weight 1 on [-support, support]."""
    return WeightFunction([support], [1.0])


def weight_at(W: WeightFunction, t):
    t = np.abs(np.asarray(t, dtype=float))
    idx = np.searchsorted(W.breakpoints, t, side="right")
    vals = np.concatenate([W.values, [0.0]])
    out = vals[idx]
    return float(out) if out.ndim == 0 else out


def normalize(W: WeightFunction) -> WeightFunction:
    g1 = W.values[0]
    if g1 == 0:
        raise ZeroAtOrigin("weight vanishes at t = 0 and cannot be normalized")
    return WeightFunction(W.breakpoints, W.values / g1)


def h_norm_sq(W: WeightFunction) -> float:
    """Weighted squared norm of the indicator of [-1, 1]."""
    return 2.0 * sum(g * (hi - lo) for lo, hi, g in W.inner_pieces())


@dataclass
class GuidelineReport:
    guideline: int
    passed: bool
    offenders: list = field(default_factory=list)
    degenerate: bool = False
    detail: str = ""

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        s = f"guideline {self.guideline}: {status}"
        if self.detail:
            s += f" ({self.detail})"
        if self.degenerate:
            s += " [degenerate filter]"
        return s


def _abs_peaks(f, lo, hi):
    """Local maxima of |f| among the local extrema of f on [lo, hi]."""
    ext = local_extrema(f, lo, hi)
    peaks = []
    for t, v in ext:
        # an extremum where f touches zero is a local minimum of |f|
        if abs(v) > 0 and not _touches_zero(f, t, v):
            peaks.append((t, abs(v)))
    return peaks


def _touches_zero(f, t, v, h=1e-6):
    side = np.abs(evaluate(f, np.array([t - h, t + h])))
    return bool(np.all(side > abs(v)))


def check_guideline1(f, W: WeightFunction, delta=0.01, slack=0.01):
    """Exterior peaks of |f| on [1 + delta, b_s] should not grow with t.

    A peak that exceeds any earlier (smaller t) peak by more than ``slack``
    is reported together with the earlier peak it exceeds.
    """
    hi = W.support
    if hi <= 1 + delta:
        return GuidelineReport(1, True, detail="no exterior support to check")
    peaks = _abs_peaks(f, 1 + delta, hi)
    offenders = []
    best = None  # smallest earlier peak
    for t, m in peaks:
        if best is not None and m > (1 + slack) * best[1]:
            offenders.append((best[0], best[1], t, m))
        if best is None or m < best[1]:
            best = (t, m)
    degenerate = not np.any(f.coeffs)
    detail = f"{len(peaks)} exterior peaks"
    if offenders:
        detail += f", {len(offenders)} increasing"
    return GuidelineReport(1, not offenders, offenders, degenerate, detail)


def check_guideline2(W: WeightFunction, eps_max=0.2, n=10_000):
    """The weight should be symmetric about t = 1 near the interval edge.

    Points that land exactly on a breakpoint are skipped, since the half-open
    convention makes the two sides differ there by construction.
    """
    if eps_max <= 0:
        raise ValueError("eps_max must be positive")
    eps = eps_max * np.arange(1, n + 1) / n
    edges = np.abs(W.breakpoints - 1.0)
    on_edge = np.any(np.abs(eps[:, None] - edges[None, :]) < 1e-9, axis=1)
    eps = eps[~on_edge]
    inside = weight_at(W, 1.0 - eps)
    outside = weight_at(W, 1.0 + eps)
    bad = np.flatnonzero(inside != outside)
    if bad.size == 0:
        return GuidelineReport(2, True, detail=f"symmetric up to eps = {eps_max:g}")
    i = bad[0]
    offenders = [(float(eps[i]), float(inside[i]), float(outside[i]))]
    return GuidelineReport(
        2, False, offenders,
        detail=f"first asymmetry at eps = {eps[i]:.4g}: inside {inside[i]:g}, outside {outside[i]:g}",
    )


def check_guideline3(f, delta=0.01, threshold=0.1, n=20_001):
    """Oscillation of f inside [-1 + delta, 1 - delta] should stay below threshold."""
    lo, hi = -1 + delta, 1 - delta
    t = np.linspace(lo, hi, n)
    v = evaluate(f, t)
    cand = [v.min(), v.max()]
    cand += [val for _, val in local_extrema(f, lo, hi)]
    vmin, vmax = float(min(cand)), float(max(cand))
    spread = vmax - vmin
    degenerate = not np.any(f.coeffs)
    passed = spread <= threshold
    offenders = [] if passed else [(vmin, vmax, spread)]
    return GuidelineReport(
        3, passed, offenders, degenerate,
        detail=f"min {vmin:.6g}, max {vmax:.6g}, spread {spread:.3g}",
    )
