"""Filtered subspace iteration on random Hermitian matrices with the Gauss
filter and a published least-squares filter."""
import numpy as np

import ratfilter as rf
from ratfilter.subspace import random_problem, subspace_iteration

gauss = rf.gauss_filter(4)
gamma = rf.load_fixture_filter("gamma_slise")
print("seed   m  gauss  gamma   max |lambda - oracle|")
for seed in range(6):
    A, iv = random_problem(n=200, m=20, seed=seed)
    a = subspace_iteration(A, iv, gauss)
    b = subspace_iteration(A, iv, gamma)
    lam = np.linalg.eigvalsh(A)
    err = np.abs(a.values - lam[(lam >= iv.a) & (lam <= iv.b)]).max()
    print(f"{seed:4d} {a.m:3d} {a.iterations:6d} {b.iterations:6d}   {err:.1e}")

# per-iteration residual history of one run
A, iv = random_problem(n=200, m=20, seed=0)
for name, f in [("gauss", gauss), ("gamma", gamma)]:
    h = subspace_iteration(A, iv, f).history
    print(f"{name:>6} residuals: " + " ".join(f"{r:.1e}" for r in h))
