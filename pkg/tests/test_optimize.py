import numpy as np
import pytest

from ratfilter import (
    CPFilter, unit_weight, gauss_filter, elliptic_filter, residual_level, gradient,
)
from ratfilter.errors import StepRejected
from ratfilter.optimize import (
    OptimizerConfig, lm_reduced_matrix, full_lm_step, project_box, armijo_backtrack,
    backtracking_step, gradient_descent, levenberg_marquardt, optimize,
)
from ratfilter.io import load_fixture_filter, load_fixture_weight

from conftest import random_filter, random_weight


class TestConfig:
    def test_aliases(self):
        assert OptimizerConfig(method="lm").method == "levenberg-marquardt"
        assert OptimizerConfig(method="gd").method == "gradient-descent"

    @pytest.mark.parametrize("kw", [dict(method="newton"), dict(grad_tol=0), dict(mu0=-1),
                                    dict(mu_up=0.5), dict(box_lb=-1), dict(damping="x")])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            OptimizerConfig(**kw)


class TestReducedSystem:
    @pytest.mark.parametrize("q", [1, 2, 3, 4])
    @pytest.mark.parametrize("mu", [1e-3, 1.0, 1e3])
    def test_matches_full_step(self, q, mu, rng):
        f = random_filter(rng, q)
        W = random_weight(rng)
        red = lm_reduced_matrix(f.poles, f.coeffs, W).solve(mu)
        full = full_lm_step(f, W, mu)
        np.testing.assert_allclose(red, full, rtol=1e-8, atol=1e-8 * np.abs(full).max())

    def test_real_matrix_symmetric(self, rng):
        f = random_filter(rng, 3)
        R = lm_reduced_matrix(f.poles, f.coeffs, unit_weight()).real_matrix(0.1)
        np.testing.assert_allclose(R, R.T, rtol=1e-10, atol=1e-12 * np.abs(R).max())

    def test_fixed_coordinates(self, rng):
        f = random_filter(rng, 2)
        sysm = lm_reduced_matrix(f.poles, f.coeffs, unit_weight())
        fixed = np.zeros(8, bool)
        fixed[[4, 5]] = True  # imaginary parts of both poles
        dy = sysm.solve(0.1, fixed=fixed)
        assert np.all(dy[:2].imag == 0)

    def test_gradient_descent_direction(self, rng):
        f = random_filter(rng, 2)
        W = unit_weight()
        ov = gradient(f, W)
        dy = lm_reduced_matrix(f.poles, f.coeffs, W).solve(1.0)
        assert np.real(np.sum(ov.grad * dy)) < 0


class TestLineSearch:
    def test_armijo(self):
        s, v = armijo_backtrack(lambda s: (s - 0.3) ** 2, 0.09, -0.6)
        assert v <= 0.09 - 0.3 * s
        with pytest.raises(StepRejected):
            armijo_backtrack(lambda s: 1.0, 0.0, 1.0)
        with pytest.raises(StepRejected):
            armijo_backtrack(lambda s: None, 0.0, -1.0)

    def test_backtracking_step_decreases(self, rng):
        f = gauss_filter(2)
        W = unit_weight()
        ov = gradient(f, W)
        d = -np.conj(ov.grad)
        s = backtracking_step(f, d, W)
        y = np.concatenate([f.poles, f.coeffs]) + s * d
        assert residual_level(CPFilter(y[:2], y[2:]), W) < ov.value


class TestOptimizers:
    def test_lm_decreases_monotonically(self):
        r = levenberg_marquardt(gauss_filter(2), unit_weight(), OptimizerConfig(max_iters=60))
        levels = [e.level for e in r.trace]
        assert all(b < a for a, b in zip(levels, levels[1:]))

    def test_lm_from_converged_point(self):
        W = unit_weight()
        cfg = OptimizerConfig()
        r = levenberg_marquardt(elliptic_filter(2), W, cfg)
        again = levenberg_marquardt(r.filter, W, cfg)
        assert again.iterations <= 2
        assert again.level <= r.level

    def test_gd_decreases(self):
        W = unit_weight()
        r = gradient_descent(gauss_filter(1), W, OptimizerConfig(method="gd", max_iters=200))
        assert r.level < residual_level(gauss_filter(1), W)
        assert all(b <= a for a, b in zip([e.level for e in r.trace], [e.level for e in r.trace][1:]))

    def test_gauss_and_elliptic_agree(self):
        W = unit_weight()
        a = optimize(gauss_filter(2), W).filter
        b = optimize(elliptic_filter(2), W).filter
        np.testing.assert_allclose(a.poles, b.poles, atol=1e-4)

    def test_box_respected(self):
        cfg = OptimizerConfig(box_lb=0.05, max_iters=300)
        r = levenberg_marquardt(gauss_filter(3), unit_weight(), cfg)
        assert min(e.min_imag for e in r.trace) >= 0.05 - 1e-12

    def test_project_box(self):
        f = CPFilter([1 + 0.01j, 0.5 + 0.5j], [1, 2])
        g = project_box(f, 0.1)
        assert g.poles.imag.min() == 0.1
        assert project_box(f, None) is f
        with pytest.raises(ValueError):
            project_box(f, -1)

    def test_penalty_changes_steepness(self):
        from ratfilter import steepness
        W = unit_weight()
        slope = {c: steepness(optimize(gauss_filter(2), W, OptimizerConfig(penalty=c, max_iters=500)).filter)
                 for c in (-1e-5, 0.0, 1e-5)}
        # the penalty adds c f'(1); f'(1) < 0, so c > 0 rewards a steeper edge
        assert slope[1e-5] < slope[0.0] < slope[-1e-5] < 0
