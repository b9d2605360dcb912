"""Python access to the nullframe core.

Reports and manifests are returned as plain dicts decoded from the JSON the
core produces, so they match the CLI output field for field.
"""

import json as _json

from . import _core
from ._core import (
    GeometryError,
    InputError,
    SignatureError,
    Spec,
    builtin_names,
    decompose,
    halton_points,
    load,
    verify_bronze,
    verify_compatibility,
)

__version__ = _core.__version__

__all__ = [
    "GeometryError",
    "InputError",
    "SignatureError",
    "Spec",
    "builtin_manifest",
    "builtin_names",
    "check",
    "decompose",
    "halton_points",
    "identities",
    "infer_signature",
    "load",
    "load_text",
    "verify_bronze",
    "verify_compatibility",
]


def builtin_manifest(name):
    return _json.loads(_core._builtin_manifest(name))


def load_text(text):
    """Spec from manifest text (JSON, comments allowed)."""
    return _core._spec_from_text(text)


def infer_signature(path_or_name, index=None):
    """List of (timelike positions, kernel dimension); positions are 1-based."""
    return [(list(pos), k) for pos, k in _core._infer_signature(path_or_name, index)]


def check(path_or_name, points=20, seed=0, tol=1e-8, fd_tol=1e-6, lm_draws=2, threads=None, theorems=True):
    """Returns (exit_code, report). exit_code follows the CLI: 0 pass, 2 claim or residual failure."""
    code, text = _core._check(path_or_name, points, seed, tol, fd_tol, lm_draws, threads, theorems)
    return code, _json.loads(text)


def identities(path_or_name, points=20, seed=0, tol=1e-8, fd_tol=1e-6, lm_draws=5, threads=None):
    code, text = _core._identities(path_or_name, points, seed, tol, fd_tol, lm_draws, threads, False)
    return code, _json.loads(text)
