import json
import os

import numpy as np
import pytest

import nullframe

MANIFESTS = os.environ.get("NULLFRAME_MANIFESTS", os.path.join(os.path.dirname(__file__), "..", "..", "manifests"))


def test_builtins_listed():
    names = nullframe.builtin_names()
    assert "bronze16" in names and "minimal11" in names


def test_load_and_decompose():
    spec = nullframe.load(os.path.join(MANIFESTS, "bronze16.json"))
    assert spec.ambient_dim == 16
    assert spec.timelike_positions == [4, 8]
    lo = np.array([a for a, _ in spec.domain])
    hi = np.array([b for _, b in spec.domain])
    d = nullframe.decompose(spec, (lo + hi) / 2)
    assert d["classification"] == "RLightlike(2)"
    assert d["b0"].shape == (16, 4)
    assert d["proper"] and d["screen_generic"]


def test_bronze_residuals():
    spec = nullframe.load("minimal11")
    assert nullframe.verify_bronze(spec.bronze) <= 1e-12
    eps = [-1 if i + 1 in spec.timelike_positions else 1 for i in range(spec.ambient_dim)]
    assert nullframe.verify_compatibility(spec.bronze, eps) <= 1e-12


def test_infer_signature():
    assert nullframe.infer_signature("bronze16") == [([4, 8], 2)]
    assert nullframe.infer_signature("minimal11") == [([5], 1)]


def test_check_is_deterministic():
    a = nullframe.check("bronze16", points=5, seed=3, threads=1)
    b = nullframe.check("bronze16", points=5, seed=3, threads=3)
    assert a[0] == 0
    assert json.dumps(a[1]) == json.dumps(b[1])


def test_identities():
    code, report = nullframe.identities("minimal11", points=4, lm_draws=1)
    assert code == 0
    assert report["identities"]["all_pass"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        nullframe.load_text('{"name": "x",}')
    doc = nullframe.builtin_manifest("plane3")
    doc["lm"]["eta"] = [0, 2, 0]
    with pytest.raises(ValueError, match="lm.eta"):
        nullframe.load_text(json.dumps(doc))
    with pytest.raises(ValueError):
        nullframe.load("no_such_manifest_or_example")


def test_halton_points():
    pts = nullframe.halton_points([(0.0, 1.0), (0.0, 1.0)], 2, 1, 0.0)
    assert np.allclose(pts[0], [0.5, 1 / 3])
    assert np.allclose(pts[1], [0.25, 2 / 3])
