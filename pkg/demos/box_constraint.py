"""A lower bound on the pole imaginary parts keeps the shifted systems as well
conditioned as those of the elliptic filter."""
import numpy as np

import ratfilter as rf
from ratfilter.benchmark import generate_intervals, synthetic_spectrum
from ratfilter.optimize import OptimizerConfig

W = rf.load_fixture_weight("box_slise")
ell = rf.elliptic_filter(4)
box = rf.optimize(ell, W, OptimizerConfig(box_lb=0.0022)).filter
free = rf.optimize(ell, W).filter
for name, f in [("elliptic", ell), ("box", box), ("unconstrained", free)]:
    print(f"{name:>13}: level {rf.residual_level(f, W):.3e}, min Im(w) {f.poles.imag.min():.5f}")

S = synthetic_spectrum(seed=0)
probs = generate_intervals(S)[::10]
kappa = {name: np.array([rf.worst_condition(f, S, p.interval) for p in probs])
         for name, f in [("elliptic", ell), ("box", box), ("unconstrained", free)]}
print(f"\n{len(probs)} problems from a synthetic spectrum of {S.n} eigenvalues")
for c in rf.performance_profile(kappa):
    print(f"{c.method:>13}: best on {c(1.0):.0%}, within 1.5x on {c(1.5):.0%}, within 3x on {c(3.0):.0%}")
