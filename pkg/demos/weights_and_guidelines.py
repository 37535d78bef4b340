"""How the choice of weight function shapes the optimized filter, and what
the guideline checkers say about the result."""
import ratfilter as rf
from ratfilter.optimize import OptimizerConfig

start = rf.gauss_filter(4)
for name in ("g1", "g2", "g3"):
    W = rf.load_fixture_weight(name)
    res = rf.optimize(start, W, OptimizerConfig(max_iters=600))
    print(f"weight {name}: level {res.level:.3e} ({res.iterations} iterations)")
    for rep in (rf.check_guideline1(res.filter, W), rf.check_guideline2(W),
                rf.check_guideline3(res.filter)):
        print("   ", rep)
    peaks = rf.local_extrema(res.filter, 1.01, 5.0)
    print("    exterior extrema:", ", ".join(f"{t:.3f}:{v:+.1e}" for t, v in peaks))
