import numpy as np
import pytest
from hypothesis import given, strategies as st

from ratfilter import (
    CPFilter, WeightFunction, unit_weight, normalize, residual_level, residual_level_oracle,
    gradient, steepness, penalty, PenaltyConfig, evaluate_derivative,
)
from ratfilter.objective import NORMALIZATION, residual_level_quadrature
from ratfilter.errors import DomainEscape
from ratfilter.io import load_fixture_filter, load_fixture_weight

from conftest import random_filter, random_weight


def fd_gradient(f, W, h=1e-6):
    """Central differences of the reduced level in the 4q real coordinates."""
    q = f.q
    y = np.concatenate([f.poles, f.coeffs])
    out = np.zeros(2 * q, complex)
    for k in range(2 * q):
        for unit, part in ((1, "re"), (1j, "im")):
            yp, ym = y.copy(), y.copy()
            yp[k] += h * unit
            ym[k] -= h * unit
            d = (residual_level(CPFilter(yp[:q], yp[q:]), W)
                 - residual_level(CPFilter(ym[:q], ym[q:]), W)) / (2 * h)
            out[k] += d if part == "re" else 1j * d
    return out


class TestLevel:
    @pytest.mark.parametrize("name,level", [("start1", 0.005846127146), ("start2", 0.005846127146),
                                            ("start3", 0.0336401276)])
    def test_table_levels(self, name, level):
        assert residual_level(load_fixture_filter(name), unit_weight()) == pytest.approx(level, abs=1e-9)

    def test_zero_coefficients(self):
        W = load_fixture_weight("g1")
        f = CPFilter([1 + 1j, 0.3 + 0.4j], [0, 0])
        assert residual_level(f, W) == pytest.approx(0.5 * 2.28, rel=1e-14)

    def test_oracles_agree(self, rng):
        for _ in range(10):
            f = random_filter(rng, rng.integers(1, 4))
            W = random_weight(rng)
            red = residual_level(f, W)
            assert residual_level_oracle(f, W) * NORMALIZATION == pytest.approx(red, rel=1e-10)
            assert residual_level_quadrature(f, W) * NORMALIZATION == pytest.approx(red, rel=1e-8)

    def test_normalize_scales(self, rng):
        W = WeightFunction([0.9, 1.1, 3.0], [2.0, 5.0, 0.5])
        f = random_filter(rng, 2)
        assert residual_level(f, normalize(W)) == pytest.approx(residual_level(f, W) / 2.0, rel=1e-13)

    @given(st.floats(0.5, 3.0), st.floats(0.05, 0.9))
    def test_nonnegative(self, scale, im):
        f = CPFilter([0.8 + im * 1j, 0.3 + 0.6j], [scale * (0.1 - 0.2j), -0.05 + 0.1j])
        assert residual_level(f, unit_weight(20.0)) >= 0

    def test_domain(self):
        f = CPFilter([1e7 + 1j], [1])
        with pytest.raises(DomainEscape):
            residual_level(f, unit_weight())


class TestGradient:
    def test_finite_differences(self, rng):
        for q in (1, 2, 3):
            f = random_filter(rng, q)
            W = random_weight(rng)
            ov = gradient(f, W)
            fd = fd_gradient(f, W)
            np.testing.assert_allclose(np.conj(ov.grad), fd, rtol=1e-6, atol=1e-7 * np.abs(fd).max())

    def test_value_matches_level(self, rng):
        f = random_filter(rng, 3)
        W = unit_weight()
        assert gradient(f, W).value == pytest.approx(residual_level(f, W), rel=1e-10, abs=1e-14)

    def test_vanishes_at_optimum(self):
        from ratfilter.optimize import OptimizerConfig, levenberg_marquardt
        from ratfilter import gauss_filter
        W = unit_weight()
        r = levenberg_marquardt(gauss_filter(1), W, OptimizerConfig(level_tol=1e-300, grad_tol=1e-9))
        assert gradient(r.filter, W).grad_norm < 1e-8

    def test_penalty_gradient(self, rng):
        f = random_filter(rng, 2)
        cfg = PenaltyConfig(1.3e-3)
        v, gw, gg = penalty(f, cfg)
        assert v == pytest.approx(1.3e-3 * steepness(f))
        assert steepness(f) == evaluate_derivative(f, 1.0)
        h = 1e-6
        y = np.concatenate([f.poles, f.coeffs])
        grad = np.conj(np.concatenate([gw, gg]))
        for k in range(4):
            for unit in (1, 1j):
                yp, ym = y.copy(), y.copy()
                yp[k] += h * unit
                ym[k] -= h * unit
                d = (penalty(CPFilter(yp[:2], yp[2:]), cfg)[0] - penalty(CPFilter(ym[:2], ym[2:]), cfg)[0]) / (2 * h)
                got = grad[k].real if unit == 1 else grad[k].imag
                assert got == pytest.approx(d, rel=1e-6, abs=1e-12)

    def test_penalty_off(self):
        v, gw, gg = penalty(CPFilter([1 + 1j], [1]), PenaltyConfig(0.0))
        assert v == 0 and not gw.any() and not gg.any()
