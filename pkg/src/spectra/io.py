"""JSON and CSV formats used by the command-line tool.

Floats are written with ``repr`` precision (17 significant digits), so every
value read back is bit-identical to the value written.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .exceptions import InputError, ShapeMismatch
from .perturb import Certificate
from .polygeom import ConvexPolygon
from .validation import check_matrix

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "read_matrix",
    "write_matrix",
    "spectrum_to_json",
    "spectrum_from_json",
    "certificate_to_json",
    "read_certificate",
    "write_certificate",
    "read_polygon",
    "write_polygon",
    "write_trace_csv",
    "dump_json",
]


def dump_json(doc, path) -> None:
    text = json.dumps(doc, indent=2, allow_nan=False)
    Path(path).write_text(text + "\n")


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def matrix_to_json(A) -> dict:
    A = check_matrix(A)
    return {"n": int(A.shape[0]), "data": [[float(a) for a in row] for row in A]}


def matrix_from_json(doc) -> np.ndarray:
    if not isinstance(doc, dict) or "n" not in doc or "data" not in doc:
        raise InputError('matrix document needs fields "n" and "data"')
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise InputError(f'"n" must be a positive integer, got {n!r}')
    data = doc["data"]
    if not isinstance(data, list) or len(data) != n or any(not isinstance(r, list) or len(r) != n for r in data):
        raise ShapeMismatch(f'"data" must be {n} rows of {n} numbers')
    return check_matrix(data)


def read_matrix(path) -> np.ndarray:
    return matrix_from_json(_load_json(path))


def write_matrix(path, A) -> None:
    dump_json(matrix_to_json(A), path)


def spectrum_to_json(S) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(S, dtype=complex)]


def spectrum_from_json(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


def certificate_to_json(cert: Certificate) -> dict:
    plan = cert.plan
    return {
        "input": matrix_to_json(cert.A_in),
        "constant_row_sum": matrix_to_json(cert.A_const),
        "output": matrix_to_json(cert.A_out),
        "b": plan.b,
        "c": plan.c,
        "rho": plan.rho,
        "t": cert.t,
        "t_tilde": cert.t_tilde,
        "threshold": cert.threshold,
        "gamma_n": cert.gamma_n,
        "spectrum_before": spectrum_to_json(cert.spectrum_before),
        "spectrum_expected": spectrum_to_json(cert.spectrum_expected),
        "spectrum_after": spectrum_to_json(cert.spectrum_after),
        "spectrum_error": cert.spectrum_error,
        "nonneg_margin": cert.nonneg_margin,
        "plan": {
            "Delta": plan.Delta,
            "triple": list(plan.triple),
            "minimizers": list(plan.minimizers),
            "alpha_sum": plan.alpha_sum,
            "delta": plan.delta,
            "z": [float(s) for s in plan.z],
            "beta_margin": cert.beta_margin,
        },
    }


def write_certificate(path, cert: Certificate) -> None:
    dump_json(certificate_to_json(cert), path)


def read_certificate(path) -> dict:
    """Certificate document with matrices and spectra converted back to arrays."""
    doc = _load_json(path)
    for key in ("input", "constant_row_sum", "output"):
        if key in doc:
            doc[key] = matrix_from_json(doc[key])
    for key in ("spectrum_before", "spectrum_expected", "spectrum_after"):
        if key in doc:
            doc[key] = spectrum_from_json(doc[key])
    if "plan" in doc:
        doc["plan"]["z"] = np.asarray(doc["plan"]["z"], dtype=float)
        doc["plan"]["triple"] = tuple(doc["plan"]["triple"])
        doc["plan"]["minimizers"] = tuple(doc["plan"]["minimizers"])
    return doc


def read_polygon(path, *, degenerate_ok: bool = False) -> ConvexPolygon:
    doc = _load_json(path)
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise InputError('polygon document needs a "vertices" field')
    return ConvexPolygon.from_json(doc, degenerate_ok=degenerate_ok)


def write_polygon(path, poly: ConvexPolygon) -> None:
    dump_json(poly.to_json(), path)


def write_trace_csv(path, rows, header=("iteration", "ratio")) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
