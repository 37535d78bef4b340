"""Desk-scale subspace iteration with a rational filter on dense Hermitian
matrices: shifted solves, Rayleigh-Ritz projection and the outer loop.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgWarning, eigh, ldl, lu_factor, lu_solve, svd

from .errors import InsufficientSpectrum, NotConverged, RankCollapse, SolveFailure
from .filters import CPFilter, FullFilter, IntervalMap, expand_cp, map_interval
from .io import hermitian_from_array

__all__ = [
    "ShiftedSolver", "RitzPairs", "SubspaceResult",
    "apply_filter", "rayleigh_ritz", "inertia_count", "subspace_iteration", "random_problem",
]


class ShiftedSolver:
    """LU factorizations of A - z_i I for every pole of a full filter.

    Applying the filter then costs one pair of triangular solves per pole.
    """

    def __init__(self, A, f: FullFilter):
        A = np.asarray(A)
        n = A.shape[0]
        self.coeffs = np.asarray(f.coeffs)
        self.factors = []
        eye = np.eye(n)
        for z in f.poles:
            if z.imag == 0:
                raise SolveFailure("filter pole on the real axis")
            with warnings.catch_warnings():
                warnings.simplefilter("error", LinAlgWarning)
                try:
                    lu = lu_factor(A - z * eye)
                except (LinAlgWarning, ValueError, np.linalg.LinAlgError) as exc:
                    raise SolveFailure(f"factorization of A - ({z:.3g}) I failed: {exc}") from exc
            if np.any(np.diag(lu[0]) == 0):
                raise SolveFailure(f"A - ({z:.3g}) I is singular")
            self.factors.append(lu)

    def apply(self, Y):
        Y = np.asarray(Y)
        out = np.zeros(Y.shape, dtype=complex)
        for a, lu in zip(self.coeffs, self.factors):
            out += a * lu_solve(lu, Y)
        return out


def apply_filter(A, Y, f: FullFilter):
    """sum_i alpha_i (A - z_i I)^{-1} Y for a filter already mapped to [a, b]."""
    return ShiftedSolver(A, f).apply(Y)


@dataclass
class RitzPairs:
    values: np.ndarray
    vectors: np.ndarray
    rank: int


def rayleigh_ritz(A, X, wanted=1, rank_tol=None) -> RitzPairs:
    """Orthonormalize X (dropping numerically dependent directions) and
    solve the projected Hermitian eigenproblem."""
    X = np.asarray(X)
    U, s, _ = svd(X, full_matrices=False)
    if rank_tol is None:
        rank_tol = max(X.shape) * np.finfo(float).eps
    rank = int(np.sum(s > rank_tol * s[0])) if s.size and s[0] > 0 else 0
    if rank < wanted:
        raise RankCollapse(f"subspace rank {rank} is below the {wanted} wanted pairs")
    Q = U[:, :rank]
    H = Q.conj().T @ (A @ Q)
    vals, V = eigh(0.5 * (H + H.conj().T))
    return RitzPairs(vals, Q @ V, rank)


def inertia_count(A, a, b):
    """Number of eigenvalues of A in (a, b), from LDL^T inertia of the shifts."""
    def negatives(sigma):
        _, D, _ = ldl(A - sigma * np.eye(A.shape[0]), hermitian=True)
        return int(np.sum(np.linalg.eigvalsh(D) < 0))
    return negatives(b) - negatives(a)


@dataclass
class SubspaceResult:
    values: np.ndarray
    vectors: np.ndarray
    iterations: int
    residual: float
    converged: bool
    m: int
    p: int
    seed: int
    history: list = field(default_factory=list)


def _as_interval(interval):
    return interval if isinstance(interval, IntervalMap) else IntervalMap(*interval)


def subspace_iteration(A, interval, f: CPFilter | FullFilter, p_factor=1.5, tol=1e-13,
                       max_iters=50, seed=0, raise_on_failure=True) -> SubspaceResult:
    """Filtered subspace iteration for the eigenpairs of A inside [a, b].

    The residual of a Ritz pair is ||A v - lambda v||_2 / ||A||_F.  The count m
    comes from the inertia of A - aI and A - bI.  The loop stops once m Ritz
    pairs inside [a, b] meet ``tol``; further inside pairs with larger
    residuals are treated as spurious and dropped.
    """
    A = hermitian_from_array(A)
    iv = _as_interval(interval)
    n = A.shape[0]
    m = inertia_count(A, iv.a, iv.b)
    if m < 1:
        raise InsufficientSpectrum(f"no eigenvalues in [{iv.a}, {iv.b}]")
    p = min(n, math.ceil(p_factor * m))
    full = expand_cp(f) if isinstance(f, CPFilter) else f
    solver = ShiftedSolver(A, map_interval(full, iv))
    rng = np.random.default_rng(seed)
    Y = rng.standard_normal((n, p))
    normA = np.linalg.norm(A, "fro")
    real_result = np.isrealobj(A) and isinstance(f, CPFilter)

    history = []
    vals = vecs = np.empty(0)
    res = np.inf
    for it in range(1, max_iters + 1):
        X = solver.apply(Y)
        if real_result:
            X = X.real  # conjugate pole pairs with real A and Y give a real block
        ritz = rayleigh_ritz(A, X, wanted=m)
        Y = ritz.vectors
        inside = np.flatnonzero((ritz.values >= iv.a) & (ritz.values <= iv.b))
        R = A @ ritz.vectors[:, inside] - ritz.vectors[:, inside] * ritz.values[inside]
        rel = np.linalg.norm(R, axis=0) / normA
        # spurious Ritz values inside [a, b] have large residuals; keep the m best
        keep = inside[np.argsort(rel, kind="stable")[:m]]
        rel = np.sort(rel)[:m]
        vals, vecs = ritz.values[keep], ritz.vectors[:, keep]
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        res = float(rel.max()) if rel.size else np.inf
        history.append(res)
        if vals.size == m and res <= tol:
            return SubspaceResult(vals, vecs, it, res, True, m, p, seed, history)
    result = SubspaceResult(vals, vecs, max_iters, res, False, m, p, seed, history)
    if raise_on_failure:
        raise NotConverged(f"no convergence in {max_iters} iterations (residual {res:.3g})", result)
    return result


def random_problem(n=200, m=20, seed=0, complex_entries=False):
    """Random Hermitian matrix and an interval holding exactly m eigenvalues.

    The interval endpoints sit halfway between neighbouring eigenvalues.
    """
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n))
    if complex_entries:
        G = G + 1j * rng.standard_normal((n, n))
    A = 0.5 * (G + G.conj().T) / np.sqrt(n)
    lam = np.linalg.eigvalsh(A)
    i = int(rng.integers(1, n - m))
    a = 0.5 * (lam[i - 1] + lam[i])
    b = 0.5 * (lam[i + m - 1] + lam[i + m])
    return A, IntervalMap(float(a), float(b))
