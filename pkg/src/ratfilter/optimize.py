"""Gradient descent and symmetry-reduced Levenberg-Marquardt for CP filters.

The optimization variable is y = [w; g] (q poles, q coefficients).  The filter
is real on the real axis, so the Gauss-Newton model is linear over the reals
but not over the complex numbers: with J = df/dy the normal equations read

    (B + 2 mu D) dy + conj(A) conj(dy) = r,

    B = int G conj(J) J^T   (Hermitian),     A = int G J J^T   (symmetric),
    r = int G conj(J) (h - f) = -1/2 conj(grad).

B and A are assembled in closed form from the CP matrices.  D holds the
diagonal of the full-form Gram matrix (one entry per free parameter), so the
step coincides with the corresponding block of the damped Gauss-Newton step
over all 4q poles and coefficients; ``full_lm_step`` computes the latter
independently and is used to test the reduction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainEscape, InvalidFilter, SingularReduced, StepRejected
from .filters import CPFilter, expand_cp
from .integrals import (
    assemble, assemble_grad, assemble_hess, int_lin, int_pair, int_sq, int_sq_lin,
    int_sq_sq, piece_integral,
)
from .objective import (
    ObjectiveValue, PenaltyConfig, _level, check_domain, gradient, penalty,
)
from .weights import WeightFunction

__all__ = [
    "OptimizerConfig", "OptResult", "TraceEntry", "ReducedSystem",
    "lm_reduced_matrix", "full_lm_step", "project_box", "armijo_backtrack",
    "backtracking_step", "gradient_descent", "levenberg_marquardt", "optimize",
]

COND_LIMIT = 1e14


@dataclass
class OptimizerConfig:
    method: str = "levenberg-marquardt"
    max_iters: int | None = None
    grad_tol: float = 1e-10
    level_tol: float = 1e-14
    mu0: float = 1e-3
    mu_up: float = 4.0
    mu_down: float = 1.0 / 3.0
    mu_max: float = 1e12
    mu_min: float = 1e-12
    penalty: float = 0.0
    box_lb: float | None = None
    damping: str = "diag"  # or "identity"
    s_min: float = 1e-12

    def __post_init__(self):
        if self.method in ("lm", "levenberg_marquardt"):
            self.method = "levenberg-marquardt"
        if self.method in ("gd", "gradient_descent"):
            self.method = "gradient-descent"
        if self.method not in ("levenberg-marquardt", "gradient-descent"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.max_iters is None:
            self.max_iters = 20_000 if self.method == "levenberg-marquardt" else 2_000_000
        if self.grad_tol <= 0 or self.level_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.mu0 <= 0 or not self.mu_up > 1 > self.mu_down > 0:
            raise ValueError("need mu0 > 0 and mu_up > 1 > mu_down > 0")
        if self.box_lb is not None and self.box_lb < 0:
            raise ValueError("box bound must be non-negative")
        if self.damping not in ("diag", "identity"):
            raise ValueError("damping must be 'diag' or 'identity'")


@dataclass
class TraceEntry:
    level: float
    grad_norm: float
    step: float  # mu for LM, s for GD
    min_imag: float


@dataclass
class OptResult:
    filter: CPFilter
    level: float
    iterations: int
    reason: str
    trace: list = field(default_factory=list)
    rejected: int = 0

    @property
    def converged(self):
        return self.reason in ("grad_tol", "level_tol", "stalled")


@dataclass
class ReducedSystem:
    """Damped Gauss-Newton system in the q free poles and q coefficients."""

    hermitian: np.ndarray  # B, 2q x 2q
    symmetric: np.ndarray  # A, 2q x 2q
    diag: np.ndarray  # full-form Gram diagonal per parameter
    rhs: np.ndarray  # r
    mu: float = 0.0
    damping: str = "diag"

    def real_matrix(self, mu=None):
        mu = self.mu if mu is None else mu
        d = self.diag if self.damping == "diag" else np.ones_like(self.diag)
        P = self.hermitian + 2 * mu * np.diag(d)
        Ab = self.symmetric.conj()
        S, T = P + Ab, P - Ab
        return np.block([[S.real, -T.imag], [S.imag, T.real]])

    def solve(self, mu=None, fixed=None):
        """Step dy.  ``fixed`` masks real coordinates [Re dy; Im dy] held at 0.

        The real matrix is symmetric, so dropping rows and columns of fixed
        coordinates minimizes the same quadratic model over the free ones.
        """
        R = self.real_matrix(mu)
        n = self.rhs.size
        b = np.concatenate([self.rhs.real, self.rhs.imag])
        free = np.ones(2 * n, bool) if fixed is None else ~np.asarray(fixed, bool)
        R = R[np.ix_(free, free)]
        if not np.all(np.isfinite(R)):
            raise SingularReduced("non-finite entries in the reduced system")
        cond = np.linalg.cond(R)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise SingularReduced(f"reduced system condition estimate {cond:.2e}")
        x = np.zeros(2 * n)
        x[free] = np.linalg.solve(R, b[free])
        return x[:n] + 1j * x[n:]


def lm_reduced_matrix(poles, coeffs, W: WeightFunction, mu=0.0, damping="diag",
                      grad=None, asm=None) -> ReducedSystem:
    """Assemble the reduced damped Gauss-Newton system at (poles, coeffs).

    ``grad`` may pass a precomputed (possibly penalized) gradient; by default
    the plain least-squares gradient is used.
    """
    w = np.asarray(poles, dtype=complex)
    g = np.asarray(coeffs, dtype=complex)
    A0 = asm if asm is not None else assemble(w, W)
    D = assemble_grad(w, W)
    Hs = assemble_hess(w, W)
    Ig = np.diag(g)
    dXZ = D.gX - D.gZ
    B = 2 * np.block([
        [Ig.conj() @ (Hs.ggX - Hs.ggZ) @ Ig, Ig.conj() @ dXZ.conj().T],
        [dXZ @ Ig, A0.X - A0.Z],
    ])
    dWY = D.gWbar - D.gYbar
    A = 2 * np.block([
        [Ig @ (Hs.ggWbar - Hs.ggYbar) @ Ig, Ig @ dWY.T],
        [dWY @ Ig, A0.W.conj() - A0.Y.conj()],
    ])
    diag = np.concatenate([np.abs(g) ** 2 * np.diag(Hs.ggX).real, np.diag(A0.X).real])
    if grad is None:
        gc = g.conj()
        grad_gamma = 4 * (gc @ (A0.X - A0.Z) + g @ (A0.W.conj() - A0.Y.conj()) - A0.theta.conj())
        grad_w = 4 * (gc @ (D.gX - D.gZ) + g @ (D.gWbar - D.gYbar) - D.gtheta) * g
        grad = np.concatenate([grad_w, grad_gamma])
    rhs = -0.5 * np.conj(grad)
    return ReducedSystem(B, A, diag, rhs, mu, damping)


def full_lm_step(f: CPFilter, W: WeightFunction, mu, damping="diag"):
    """Damped Gauss-Newton step over all 4q poles and coefficients.

    Solves (H + mu diag(H)) dx = b with H the Gram matrix of the partial
    derivatives of the expanded filter and b = <df, h - f>, and returns the
    block belonging to the first-quadrant representatives.  Independent of
    the reduced assembly; meant as a reference.
    """
    full = expand_cp(f)
    z, a = full.poles, full.coeffs
    n = z.size
    zi, zj = z.conj()[:, None], z[None, :]
    ai, aj = a.conj()[:, None], a[None, :]
    Hzz = ai * aj * piece_integral(int_sq_sq, W, zi, zj)
    Hza = ai * piece_integral(int_sq_lin, W, zi, zj)
    Haz = aj * piece_integral(int_sq_lin, W, zj, zi)
    Haa = piece_integral(int_pair, W, zi, zj)
    H = np.block([[Hzz, Hza], [Haz, Haa]])
    hz = a.conj() * piece_integral(int_sq, W, z.conj(), inner=True)
    ha = piece_integral(int_lin, W, z.conj(), inner=True)
    b = np.concatenate([hz, ha]) - H[:, n:] @ a
    Dm = np.diag(np.diag(H).real) if damping == "diag" else np.eye(2 * n)
    dx = np.linalg.solve(H + mu * Dm, b)
    q = f.q
    return np.concatenate([dx[:q], dx[n:n + q]])


def project_box(f: CPFilter, lb) -> CPFilter:
    """Raise every pole imaginary part below lb up to lb."""
    if lb is None:
        return f
    if lb < 0:
        raise ValueError("box bound must be non-negative")
    w = f.poles
    low = w.imag < lb
    if not np.any(low):
        return f
    w = np.where(low, w.real + 1j * lb, w)
    return CPFilter(w, f.coeffs)


class _Objective:
    """Level (with penalty) and gradient with validity checks."""

    def __init__(self, W, cfg: OptimizerConfig):
        self.W = W
        self.pcfg = PenaltyConfig(cfg.penalty)

    def level(self, f):
        check_domain(f.poles)
        val = _level(f.coeffs, assemble(f.poles, self.W, extended=True))
        if self.pcfg.c:
            val += penalty(f, self.pcfg)[0]
        return val

    def full(self, f):
        check_domain(f.poles)
        asm = assemble(f.poles, self.W)
        ov = gradient(f, self.W, asm=asm)
        # levels are compared in extended precision; see residual_level
        ov.value = _level(f.coeffs, assemble(f.poles, self.W, extended=True))
        if self.pcfg.c:
            pv, pw, pg = penalty(f, self.pcfg)
            ov = ObjectiveValue(ov.value + pv, ov.grad_w + pw, ov.grad_gamma + pg)
        return ov, asm

    def try_level(self, poles, coeffs, lb=None):
        """Level at a trial point, or None if it is not admissible."""
        try:
            poles = np.asarray(poles, dtype=complex)
            if lb is not None:
                poles = np.where(poles.imag < lb, poles.real + 1j * lb, poles)
            f = CPFilter(poles, coeffs)
            return f, self.level(f)
        except (InvalidFilter, DomainEscape):
            return None, None


def armijo_backtrack(phi, phi0, slope, s0=1.0, s_min=1e-12):
    """Halve s until phi(s) <= phi0 + (s/2) slope.

    ``phi`` may return None for inadmissible trial points, which counts as a
    failed test.  Returns (s, phi(s)).
    """
    if not slope < 0:
        raise StepRejected("direction is not a descent direction")
    s = s0
    while s >= s_min:
        val = phi(s)
        if val is not None and val <= phi0 + 0.5 * s * slope:
            return s, val
        s *= 0.5
    raise StepRejected(f"line search step fell below {s_min:g}")


def backtracking_step(f: CPFilter, direction, W: WeightFunction, cfg: OptimizerConfig | None = None,
                      obj: ObjectiveValue | None = None):
    """Step length along ``direction`` (stacked [dw; dg]) by Armijo backtracking."""
    cfg = cfg or OptimizerConfig(method="gd")
    fobj = _Objective(W, cfg)
    if obj is None:
        obj, _ = fobj.full(f)
    q = f.q
    direction = np.asarray(direction, dtype=complex)
    y = np.concatenate([f.poles, f.coeffs])
    slope = float(np.real(np.sum(obj.grad * direction)))

    def phi(s):
        yt = y + s * direction
        _, val = fobj.try_level(yt[:q], yt[q:], cfg.box_lb)
        return val

    s, _ = armijo_backtrack(phi, obj.value, slope, 1.0, cfg.s_min)
    return s


def _active_bounds(f: CPFilter, ov: ObjectiveValue, lb):
    """Real-coordinate mask of pole imaginary parts held at the box bound.

    A pole is active when it sits on the bound and the gradient pushes it
    further down (dF/dIm(w) = -Im(grad_w) > 0).
    """
    q = f.q
    mask = np.zeros(4 * q, bool)
    if lb is not None:
        at = f.poles.imag <= lb * (1 + 1e-12)
        mask[2 * q:3 * q] = at & (-ov.grad_w.imag > 0)
    return mask


def _projected_norm(ov: ObjectiveValue, mask):
    g = np.conj(ov.grad)
    x = np.concatenate([g.real, g.imag])
    x[mask] = 0.0
    return float(np.linalg.norm(x))


def _entry(val, ov, step, f):
    return TraceEntry(float(val), ov.grad_norm if ov is not None else float("nan"),
                      float(step), float(f.poles.imag.min()))


def gradient_descent(start: CPFilter, W: WeightFunction, cfg: OptimizerConfig | None = None) -> OptResult:
    cfg = cfg or OptimizerConfig(method="gd")
    fobj = _Objective(W, cfg)
    f = project_box(start, cfg.box_lb)
    ov, _ = fobj.full(f)
    trace = [_entry(ov.value, ov, 0.0, f)]
    q = f.q
    reason = "max_iters"
    it = 0
    while it < cfg.max_iters:
        if _projected_norm(ov, _active_bounds(f, ov, cfg.box_lb)) < cfg.grad_tol:
            reason = "grad_tol"
            break
        it += 1
        direction = -np.conj(ov.grad)
        y = np.concatenate([f.poles, f.coeffs])
        slope = float(np.real(np.sum(ov.grad * direction)))
        trial = {}

        def phi(s):
            ft, val = fobj.try_level(*np.split(y + s * direction, [q]), cfg.box_lb)
            trial[s] = ft
            return val

        try:
            s, val = armijo_backtrack(phi, ov.value, slope, 1.0, cfg.s_min)
        except StepRejected:
            reason = "stalled"
            break
        old = ov.value
        f = trial[s]
        ov, _ = fobj.full(f)
        trace.append(_entry(ov.value, ov, s, f))
        if abs(old - ov.value) <= cfg.level_tol * max(abs(old), 1e-300):
            reason = "level_tol"
            break
    return OptResult(f, ov.value, it, reason, trace)


def levenberg_marquardt(start: CPFilter, W: WeightFunction, cfg: OptimizerConfig | None = None) -> OptResult:
    """Levenberg-Marquardt on the reduced system.

    Every linear solve with its trial evaluation counts as one iteration.
    Trial points that leave the first quadrant (or blow up) are treated like
    steps that fail to decrease the level: they are rejected and mu grows.
    With ``box_lb`` set, pole imaginary parts on the bound whose gradient
    points outward are frozen in the linear solve and every trial point is
    projected onto the box.
    If mu passes ``mu_max`` without an admissible decrease the run ends; it
    raises DomainEscape or SingularReduced when those were the cause, and
    otherwise reports a stalled (converged to round-off) result.
    """
    cfg = cfg or OptimizerConfig()
    fobj = _Objective(W, cfg)
    f = project_box(start, cfg.box_lb)
    ov, asm = fobj.full(f)
    trace = [_entry(ov.value, ov, cfg.mu0, f)]
    q = f.q
    mu = cfg.mu0
    it = 0
    rejected = 0
    reason = "max_iters"
    while it < cfg.max_iters:
        active = _active_bounds(f, ov, cfg.box_lb)
        if _projected_norm(ov, active) < cfg.grad_tol:
            reason = "grad_tol"
            break
        system = lm_reduced_matrix(f.poles, f.coeffs, W, damping=cfg.damping,
                                   grad=ov.grad, asm=asm)
        y = np.concatenate([f.poles, f.coeffs])
        accepted = None
        why = None
        while it < cfg.max_iters:
            it += 1
            try:
                dy = system.solve(mu, fixed=active)
            except SingularReduced:
                why = "singular"
                dy = None
            if dy is not None:
                ft, val = fobj.try_level(y[:q] + dy[:q], y[q:] + dy[q:], cfg.box_lb)
                if ft is None:
                    why = "domain"
                elif val < ov.value:
                    accepted = ft
                    break
                else:
                    why = "increase"
            rejected += 1
            mu *= cfg.mu_up
            if mu > cfg.mu_max:
                break
        if accepted is None:
            if mu > cfg.mu_max:
                if why == "domain":
                    raise DomainEscape("no admissible step before mu reached its limit")
                if why == "singular":
                    raise SingularReduced("reduced system stayed singular up to the mu limit")
                reason = "stalled"
            break
        old = ov.value
        f = accepted
        ov, asm = fobj.full(f)
        trace.append(_entry(ov.value, ov, mu, f))
        mu = max(mu * cfg.mu_down, cfg.mu_min)
        if abs(old - ov.value) <= cfg.level_tol * max(abs(old), 1e-300):
            reason = "level_tol"
            break
    return OptResult(f, ov.value, it, reason, trace, rejected)


def optimize(start: CPFilter, W: WeightFunction, cfg: OptimizerConfig | None = None) -> OptResult:
    cfg = cfg or OptimizerConfig()
    if cfg.method == "gradient-descent":
        return gradient_descent(start, W, cfg)
    return levenberg_marquardt(start, W, cfg)
