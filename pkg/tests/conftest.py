import numpy as np
import pytest
from hypothesis import settings

from ratfilter import CPFilter, WeightFunction, unit_weight

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def random_filter(rng, q, re=(0.2, 1.5), im=(0.05, 1.0), coeff=0.5):
    w = rng.uniform(*re, q) + 1j * rng.uniform(*im, q)
    g = coeff * (rng.standard_normal(q) + 1j * rng.standard_normal(q))
    return CPFilter(w, g)


def random_weight(rng, pieces=4):
    b = np.sort(rng.uniform(0.2, 4.0, pieces))
    b[-1] = max(b[-1], 1.2)
    b = np.unique(b)
    return WeightFunction(b, rng.uniform(0.1, 3.0, b.size))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def unit():
    return unit_weight()


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def record():
    def _record(number, passed, detail):
        ACCEPTANCE[number] = (bool(passed), detail)
        print(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
