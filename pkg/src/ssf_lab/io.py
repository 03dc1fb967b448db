"""JSON and CSV serialisation for matrices, functions and SSF results."""

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .funcalc import AnalyticFunction, BoundaryGrid, FourierSeries
from .ssf.result import SSFResult


def matrix_to_dict(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError("only 2-D arrays serialise as matrices")
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]),
            "data": [[float(x.real), float(x.imag)] for x in a.reshape(-1)]}


def matrix_from_dict(d, where="matrix"):
    """Inverse of :func:`matrix_to_dict`; errors name the offending field."""
    if not isinstance(d, dict):
        raise ParseError(f"{where}: expected an object, got {type(d).__name__}")
    for key in ("rows", "cols", "data"):
        if key not in d:
            raise ParseError(f"{where}: missing field {key!r}")
    rows, cols, data = d["rows"], d["cols"], d["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
        raise ParseError(f"{where}: rows/cols must be non-negative integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ParseError(f"{where}.data: expected {rows * cols} entries")
    out = np.empty(rows * cols, dtype=complex)
    for i, pair in enumerate(data):
        if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise ParseError(f"{where}.data[{i}]: expected [re, im], got {pair!r}")
        out[i] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(out)):
        raise ParseError(f"{where}.data: entries must be finite")
    return out.reshape(rows, cols)


def loads_json(text, source="<string>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def read_matrix(path):
    path = Path(path)
    return matrix_from_dict(loads_json(path.read_text(), str(path)), str(path))


def write_matrix(path, a):
    Path(path).write_text(json.dumps(matrix_to_dict(a)))


def function_from_dict(d, where="function"):
    try:
        return AnalyticFunction.from_dict(d)
    except (ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def fourier_to_dict(s):
    return {"frequencies": [int(m) for m in s.frequencies],
            "coefficients": [[float(c.real), float(c.imag)] for c in s.coef]}


def ssf_to_dict(ssf, neg_only=True):
    neg = ssf.neg_fourier
    keep = neg.frequencies < 0 if neg_only else np.ones(neg.N, dtype=bool)
    return {
        "representative": ssf.representative,
        "domain": ssf.domain,
        "N": ssf.N,
        "radius": ssf.grid.radius,
        "values": [[float(v.real), float(v.imag)] for v in ssf.values],
        "neg_fourier": {
            "frequencies": [int(m) for m in neg.frequencies[keep]],
            "coefficients": [[float(c.real), float(c.imag)] for c in neg.coef[keep]],
        },
        "residuals": {k: float(v) for k, v in ssf.residuals.items()},
    }


def ssf_from_dict(d):
    try:
        values = np.array([complex(*v) for v in d["values"]])
        grid = BoundaryGrid(values, float(d.get("radius", 1.0)))
        coef = np.zeros(grid.N, dtype=complex)
        for m, c in zip(d["neg_fourier"]["frequencies"], d["neg_fourier"]["coefficients"]):
            coef[m + grid.N // 2] = complex(*c)
        return SSFResult(grid, d["representative"], FourierSeries(coef),
                         dict(d.get("residuals", {})), d.get("domain", "disk"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"ssf: {exc}") from None


SSF_CSV_COLUMNS = ("theta", "re_xi", "im_xi", "representative")


def ssf_to_csv(ssf):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SSF_CSV_COLUMNS)
    for th, v in zip(ssf.theta, ssf.values):
        writer.writerow([repr(float(th)), repr(float(v.real)), repr(float(v.imag)),
                         ssf.representative])
    return buf.getvalue()
