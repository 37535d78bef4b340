"""Optimize a 16-pole filter from the elliptic start and compare it with the
classical filters it replaces."""
import numpy as np

import ratfilter as rf

W = rf.unit_weight()
start = rf.elliptic_filter(4)
res = rf.optimize(start, W)
print(f"optimized level {res.level:.4e} after {res.iterations} iterations ({res.reason})")

for name, f in [("gauss", rf.gauss_filter(4)), ("elliptic", start), ("optimized", res.filter)]:
    print(f"{name:>10}: level {rf.residual_level(f, W):.3e}, "
          f"f'(1) {rf.steepness(f):8.2f}, min Im(w) {f.poles.imag.min():.5f}")

# values just outside the interval, where the damping of unwanted eigenvalues happens
x = np.array([1.05, 1.1, 1.2, 1.5, 2.0, 5.0])
print("\n     x  " + "  ".join(f"{v:>9.2f}" for v in x))
for name, f in [("gauss", rf.gauss_filter(4)), ("optimized", res.filter)]:
    print(f"{name:>9}  " + "  ".join(f"{v:9.2e}" for v in np.abs(rf.evaluate(f, x))))

print("\npoles and coefficients of the optimized filter:")
for w, g in zip(res.filter.poles, res.filter.coeffs):
    print(f"  {w:.10f}   {g:.10f}")
