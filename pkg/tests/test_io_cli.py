import json

import numpy as np
import pytest

from ratfilter import CPFilter, WeightFunction, evaluate, gauss_filter
from ratfilter import io as rio
from ratfilter.cli import run
from ratfilter.benchmark import synthetic_spectrum
from ratfilter.subspace import random_problem

from conftest import random_filter


class TestFormats:
    def test_filter_round_trip_exact(self, tmp_path, rng):
        f = random_filter(rng, 3)
        rio.save_filter(f, tmp_path / "f.json")
        assert rio.load_filter(tmp_path / "f.json") == f

    def test_filter_csv(self, tmp_path):
        (tmp_path / "f.csv").write_text("re_w,im_w,re_g,im_g\n0.5,0.2,0.1,-0.3\n")
        f = rio.load_filter(tmp_path / "f.csv")
        assert f == CPFilter([0.5 + 0.2j], [0.1 - 0.3j])
        (tmp_path / "g.csv").write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            rio.load_filter(tmp_path / "g.csv")

    def test_coefficient_convention(self):
        d = {"q": 1, "poles": [[0.5, 0.2]], "coeffs": [[0.1, 0.3]], "coeff_convention": "neg_conj"}
        assert rio.filter_from_dict(d).coeffs[0] == -0.1 + 0.3j
        with pytest.raises(ValueError):
            rio.filter_from_dict({**d, "coeff_convention": "other"})
        with pytest.raises(ValueError):
            rio.filter_from_dict({**d, "q": 2})

    def test_published_filters_are_filters(self):
        for name in ("gamma_slise", "eta_slise", "zeta_slise", "kappa_slise"):
            f = rio.load_fixture_filter(name)
            assert f.q == 4
            assert evaluate(f, 0.0) == pytest.approx(1.0, abs=0.01)
            assert abs(evaluate(f, 1.05)) < 0.01
            # zeta's transition sits slightly left of t = 1
            assert 0.2 < evaluate(f, 1.0) < 0.55

    def test_weight_round_trip(self, tmp_path):
        W = rio.load_fixture_weight("g2")
        rio.save_weight(W, tmp_path / "w.json")
        assert rio.load_weight(tmp_path / "w.json") == W

    def test_unknown_fixture(self):
        with pytest.raises(KeyError):
            rio.load_fixture_filter("nope")
        assert "gamma_slise" in rio.fixture_names("filter")
        assert "g3" in rio.fixture_names("weight")

    def test_matrix_text(self, tmp_path):
        A, _ = random_problem(n=8, m=2, seed=0, complex_entries=True)
        rio.save_matrix_text(A, tmp_path / "a.txt")
        np.testing.assert_array_equal(rio.load_matrix(tmp_path / "a.txt"), A)
        B = np.array([[1.0, 2.0], [0.0, 1.0]])
        rio.save_matrix_text(B, tmp_path / "b.txt")
        with pytest.raises(ValueError):
            rio.load_matrix(tmp_path / "b.txt")

    def test_matrix_market(self, tmp_path):
        import scipy.io
        A, _ = random_problem(n=8, m=2, seed=0)
        scipy.io.mmwrite(str(tmp_path / "a.mtx"), A)
        np.testing.assert_allclose(rio.load_matrix(tmp_path / "a.mtx"), A, rtol=1e-15)

    def test_spectrum(self, tmp_path):
        S = synthetic_spectrum(seed=3)
        rio.save_spectrum(S, tmp_path / "s.txt")
        np.testing.assert_array_equal(rio.load_spectrum(tmp_path / "s.txt").eigenvalues, S.eigenvalues)


class TestCLI:
    def test_seed_and_eval(self, tmp_path, capsys):
        out = tmp_path / "g.json"
        assert run(["seed", "--type", "gauss", "--q", "4", "--out", str(out)]) == 0
        assert rio.load_filter(out) == gauss_filter(4)
        assert run(["eval", "--filter", str(out), "--t", "0", "1"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "t,f"
        assert float(lines[2].split(",")[1]) == pytest.approx(0.5, abs=1e-12)

    def test_optimize(self, tmp_path, capsys):
        out = tmp_path / "o.json"
        assert run(["optimize", "--start", "elliptic", "--q", "1", "--out", str(out)]) == 0
        assert "level" in capsys.readouterr().out
        assert run(["residual", "--filter", "elliptic", "--q", "1"]) == 0
        start = float(capsys.readouterr().out)
        assert run(["residual", "--filter", str(out)]) == 0
        assert float(capsys.readouterr().out) < start

    def test_check_reports_are_not_errors(self, capsys):
        assert run(["check", "--filter", "gamma_slise", "--weights", "g3"]) == 0
        out = capsys.readouterr().out
        assert "guideline 2: FAIL" in out

    def test_tau_and_intervals(self, tmp_path, capsys):
        S = synthetic_spectrum(seed=0)
        rio.save_spectrum(S, tmp_path / "s.txt")
        assert run(["intervals", "--spectrum", str(tmp_path / "s.txt"), "--out", str(tmp_path / "i.csv")]) == 0
        rows = (tmp_path / "i.csv").read_text().splitlines()
        assert rows[0] == "a,b,m,p" and len(rows) > 1
        a, b, m, p = rows[1].split(",")
        assert run(["tau", "--filter", "gauss", "--q", "4", "--spectrum", str(tmp_path / "s.txt"),
                    "--interval", a, b]) == 0
        assert f"m {m} p {p}" in capsys.readouterr().out

    def test_profile(self, tmp_path, capsys):
        (tmp_path / "m.csv").write_text("problem,f1,f2\n0,1,2\n1,4,2\n")
        assert run(["profile", "--metrics", str(tmp_path / "m.csv")]) == 0
        rows = capsys.readouterr().out.strip().splitlines()
        assert rows[0] == "method,x,phi"
        assert "f1,1.0,0.5" in rows and "f1,2.0,1.0" in rows

    def test_subspace(self, tmp_path, capsys):
        A, iv = random_problem(n=40, m=4, seed=1)
        rio.save_matrix_text(A, tmp_path / "a.txt")
        assert run(["subspace", "--matrix", str(tmp_path / "a.txt"), "--interval", str(iv.a), str(iv.b)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0].startswith("m 4 p 6")
        lam = np.linalg.eigvalsh(A)
        np.testing.assert_allclose([float(x) for x in out[1:]], lam[(lam > iv.a) & (lam < iv.b)], atol=1e-12)

    def test_exit_codes(self, tmp_path, capsys):
        assert run(["seed", "--type", "gauss"]) == 2
        assert run(["eval", "--filter", "missing_filter"]) == 2
        assert run(["residual", "--filter", "gauss"]) == 2
        assert run(["subspace", "--matrix", "nofile.txt", "--interval", "0", "1"]) == 2
        A = np.diag([0.0, 1.0, 2.0])
        rio.save_matrix_text(A, tmp_path / "a.txt")
        assert run(["subspace", "--matrix", str(tmp_path / "a.txt"), "--interval", "0.2", "0.8"]) == 1
        assert "InsufficientSpectrum" in capsys.readouterr().err

    def test_module_entry(self):
        import subprocess, sys
        r = subprocess.run([sys.executable, "-m", "ratfilter", "seed", "--type", "trapezoid", "--q", "2"],
                           capture_output=True, text=True)
        assert r.returncode == 0
        assert json.loads(r.stdout)["q"] == 2
