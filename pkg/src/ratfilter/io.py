"""File formats: filters, weights, spectra, matrices, profiles and metrics.

Filters are JSON documents {"q": int, "poles": [[re, im], ...],
"coeffs": [[re, im], ...]}; a CSV with header re_w,im_w,re_g,im_g is also
accepted on input.  Weights are JSON {"breakpoints": [...], "values": [...]}.
Bundled data (published filters and weight tables) is available by name
through :func:`load_fixture_filter` and :func:`load_fixture_weight`.
"""
from __future__ import annotations

import csv
import io as _io
import json
from importlib import resources
from pathlib import Path

import numpy as np
import scipy.io

from .filters import CPFilter
from .weights import WeightFunction

__all__ = [
    "filter_to_dict", "filter_from_dict", "save_filter", "load_filter",
    "save_weight", "load_weight", "load_spectrum", "save_spectrum",
    "load_matrix", "save_matrix_text", "hermitian_from_array",
    "write_profile_csv", "read_metrics_csv", "write_metrics_csv",
    "fixture_names", "load_fixture_filter", "load_fixture_weight",
    "resolve_filter", "resolve_weight",
]

HERMITIAN_TOL = 1e-12


def _pairs(z):
    return [[float(v.real), float(v.imag)] for v in np.asarray(z, dtype=complex)]


def _complex(pairs, name):
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{name} must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def filter_to_dict(f: CPFilter) -> dict:
    return {"q": f.q, "poles": _pairs(f.poles), "coeffs": _pairs(f.coeffs)}


def filter_from_dict(d: dict) -> CPFilter:
    """Build a filter; poles outside the first quadrant are folded back by symmetry.

    An optional "coeff_convention": "neg_conj" marks tables that list -conj(gamma)
    instead of gamma; those coefficients are converted on load.
    """
    w = _complex(d["poles"], "poles")
    g = _complex(d["coeffs"], "coeffs")
    conv = d.get("coeff_convention", "standard")
    if conv == "neg_conj":
        g = -g.conj()
    elif conv != "standard":
        raise ValueError(f"unknown coefficient convention {conv!r}")
    if "q" in d and int(d["q"]) != w.size:
        raise ValueError(f"q = {d['q']} does not match {w.size} poles")
    return CPFilter.from_poles(w, g)


def save_filter(f: CPFilter, path):
    # Python's float repr is the shortest string that round-trips exactly
    # (at most 17 significant digits).
    Path(path).write_text(json.dumps(filter_to_dict(f), indent=1) + "\n")


def load_filter(path) -> CPFilter:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        rows = list(csv.DictReader(_io.StringIO(text)))
        if not rows or set(rows[0]) != {"re_w", "im_w", "re_g", "im_g"}:
            raise ValueError("filter CSV needs header re_w,im_w,re_g,im_g")
        w = [complex(float(r["re_w"]), float(r["im_w"])) for r in rows]
        g = [complex(float(r["re_g"]), float(r["im_g"])) for r in rows]
        return CPFilter.from_poles(w, g)
    return filter_from_dict(json.loads(text))


def save_weight(W: WeightFunction, path):
    d = {"breakpoints": W.breakpoints.tolist(), "values": W.values.tolist()}
    Path(path).write_text(json.dumps(d, indent=1) + "\n")


def _weight_from_dict(d):
    return WeightFunction(d["breakpoints"], d["values"])


def load_weight(path) -> WeightFunction:
    return _weight_from_dict(json.loads(Path(path).read_text()))


def load_spectrum(path):
    """One eigenvalue per line ('#' comments allowed); returned sorted."""
    from .benchmark import Spectrum
    return Spectrum(np.loadtxt(path, dtype=float, ndmin=1))


def save_spectrum(S, path):
    np.savetxt(path, np.asarray(getattr(S, "eigenvalues", S)), fmt="%.17g")


def hermitian_from_array(A, tol=HERMITIAN_TOL):
    """Check Hermiticity (relative to the largest entry) and symmetrize."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(np.abs(A).max(), 1.0) if A.size else 1.0
    if np.abs(A - A.conj().T).max() > tol * scale:
        raise ValueError("matrix is not Hermitian")
    return 0.5 * (A + A.conj().T)


def load_matrix(path):
    """Matrix Market file (.mtx) or the dense text format.

    Dense text: first line n, then n rows of n 're im' pairs.
    """
    path = Path(path)
    if path.suffix.lower() == ".mtx":
        A = scipy.io.mmread(str(path))
        A = A.toarray() if hasattr(A, "toarray") else np.asarray(A)
    else:
        tokens = path.read_text().split()
        if not tokens:
            raise ValueError("empty matrix file")
        n = int(tokens[0])
        vals = np.array(tokens[1:], dtype=float)
        if vals.size != 2 * n * n:
            raise ValueError(f"expected {2 * n * n} numbers after n, got {vals.size}")
        vals = vals.reshape(n, n, 2)
        A = vals[..., 0] + 1j * vals[..., 1]
    A = hermitian_from_array(A)
    return A.real.copy() if np.all(A.imag == 0) else A


def save_matrix_text(A, path):
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    lines = [str(n)]
    for row in A:
        lines.append(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_profile_csv(curves, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["method", "x", "phi"])
    for c in curves:
        for x, p in zip(c.x, c.phi):
            w.writerow([c.method, repr(float(x)), repr(float(p))])


def read_metrics_csv(path) -> dict:
    """Wide CSV: a 'problem' column, then one column per method."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or reader.fieldnames[0] != "problem":
            raise ValueError("metrics CSV must start with a 'problem' column")
        methods = reader.fieldnames[1:]
        out = {m: [] for m in methods}
        for row in reader:
            for m in methods:
                out[m].append(float(row[m]))
    return out


def write_metrics_csv(metrics: dict, stream, problems=None):
    methods = list(metrics)
    npb = len(metrics[methods[0]]) if methods else 0
    problems = problems if problems is not None else range(npb)
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["problem", *methods])
    for i, p in enumerate(problems):
        w.writerow([p, *(repr(float(metrics[m][i])) for m in methods)])


# ---- bundled fixtures ----

def _fixture_dir():
    return resources.files("ratfilter") / "fixtures"


def fixture_names(kind="filter"):
    prefix = f"{kind}_"
    return sorted(p.name[len(prefix):-5] for p in _fixture_dir().iterdir()
                  if p.name.startswith(prefix) and p.name.endswith(".json"))


def _fixture(kind, name):
    p = _fixture_dir() / f"{kind}_{name}.json"
    if not p.is_file():
        raise KeyError(f"unknown {kind} fixture {name!r}; known: {', '.join(fixture_names(kind))}")
    return json.loads(p.read_text())


def load_fixture_filter(name) -> CPFilter:
    """Bundled filters: gamma_slise, eta_slise, zeta_slise, kappa_slise, start1..3."""
    return filter_from_dict(_fixture("filter", name))


def load_fixture_weight(name) -> WeightFunction:
    """Bundled weights: unit, g1, g2, g3, gamma_slise, eta_slise, box_slise."""
    return _weight_from_dict(_fixture("weight", name))


def resolve_filter(spec) -> CPFilter:
    """A path to a filter file, or the name of a bundled filter."""
    if Path(spec).is_file():
        return load_filter(spec)
    return load_fixture_filter(spec)


def resolve_weight(spec) -> WeightFunction:
    if Path(spec).is_file():
        return load_weight(spec)
    return load_fixture_weight(spec)
