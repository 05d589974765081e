"""Curve definition files and CSV reports.

A curve file is JSON, either
    {"kind": "analytic", "name": ..., "params": {...}, "domain": [lo, hi], "base_point": η}
or
    {"kind": "sampled", "t": [...], "x": [...], "y": [...]}
A CSV whose header starts t,x,y is read as a sampled curve too (extra
columns such as s,kappa,rho are ignored), so exported samples re-parse.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from . import families
from .core import SampledCurve, arc_length_reparam, curvature, curvature_radius
from .errors import CurveError, ParseError, ValidationError
from .lac_msa import LacParams, generate_lac

ANALYTIC = ("circle", "line", "parabola", "ellipse", "hyperbola", "log_spiral", "clothoid", "lac")


def _point(v, field):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ParseError(f"field {field!r}: expected a number or [x, y], got {v!r}")


def _num(params, key, default=None, field="params"):
    if key not in params:
        if default is None:
            raise ParseError(f"field '{field}.{key}' is required")
        return default
    v = params[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ParseError(f"field '{field}.{key}': expected a finite number, got {v!r}")
    return float(v)


def _analytic(spec: dict):
    name = spec.get("name")
    if name not in ANALYTIC:
        raise ParseError(f"field 'name': expected one of {', '.join(ANALYTIC)}, got {name!r}")
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise ParseError("field 'params': expected an object")
    kw = {}
    if "domain" in spec:
        dom = spec["domain"]
        if not (isinstance(dom, list) and len(dom) == 2 and all(isinstance(v, (int, float)) for v in dom)):
            raise ParseError(f"field 'domain': expected [lo, hi], got {dom!r}")
        kw["domain"] = (float(dom[0]), float(dom[1]))
    if spec.get("base_point") is not None:
        kw["base_point"] = _num(spec, "base_point", field="base_point")

    if name == "circle":
        r = params.get("radius", params.get("r", 1.0))
        return families.circle(float(r), _point(params.get("center", 0), "params.center"), **kw)
    if name == "line":
        return families.line(_point(params.get("start", 0), "params.start"),
                             _point(params.get("direction", 1), "params.direction"), **kw)
    if name == "parabola":
        return families.parabola(_num(params, "a", 1.0), _num(params, "b", 1.0), **kw)
    if name in ("ellipse", "hyperbola"):
        return getattr(families, name)(_num(params, "A", 1.0), _num(params, "B", 1.0), **kw)
    if name == "log_spiral":
        return families.log_spiral(_num(params, "a", 1.0), _num(params, "b", 1.0), **kw)
    if name == "clothoid":
        return families.clothoid(_num(params, "a", 1.0), **kw)
    # lac: the domain is the arc-length range of the radius law
    lo, hi = kw.get("domain", (0.0, 1.0))
    p = LacParams(_num(params, "alpha"), _num(params, "xi"), _num(params, "eta"), lo, hi)
    steps = int(_num(params, "steps", 10_000.0))
    return generate_lac(p, steps)


def _sampled(t, x, y):
    try:
        t, x, y = (np.asarray(v, dtype=float) for v in (t, x, y))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"sampled arrays must be numeric: {exc}") from None
    if t.ndim != 1 or t.shape != x.shape or t.shape != y.shape:
        raise ParseError("fields 't', 'x', 'y' must be 1-D lists of equal length")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        bad = int(np.argmax(~(np.isfinite(t) & np.isfinite(x) & np.isfinite(y))))
        raise ValidationError(f"non-finite sample at index {bad}")
    if len(t) < 2 or not np.all(np.diff(t) > 0):
        bad = int(np.argmax(np.diff(t) <= 0)) + 1 if len(t) >= 2 else 0
        raise ValidationError(f"t must be strictly increasing (violated at index {bad})")
    try:
        return SampledCurve(t, x, y)
    except CurveError as exc:
        raise ValidationError(str(exc)) from None


def curve_from_dict(spec) -> object:
    if not isinstance(spec, dict):
        raise ParseError("curve definition must be a JSON object")
    kind = spec.get("kind")
    if kind == "analytic":
        return _analytic(spec)
    if kind == "sampled":
        missing = [k for k in ("t", "x", "y") if k not in spec]
        if missing:
            raise ParseError(f"sampled curve is missing field(s) {', '.join(missing)}")
        return _sampled(spec["t"], spec["x"], spec["y"])
    raise ParseError(f"field 'kind': expected 'analytic' or 'sampled', got {kind!r}")


def _csv_curve(text: str, origin: str):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [h.strip() for h in rows[0][:3]] != ["t", "x", "y"]:
        raise ParseError(f"{origin}: line 1: CSV header must start with t,x,y")
    cols = [[], [], []]
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            for c, v in zip(cols, row[:3]):
                c.append(float(v))
        except ValueError:
            raise ParseError(f"{origin}: line {lineno}: non-numeric value in {row[:3]}") from None
        if len(row) < 3:
            raise ParseError(f"{origin}: line {lineno}: expected 3 columns")
    return _sampled(*cols)


def parse_curve_text(text: str, origin: str = "<inline>"):
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{origin}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return curve_from_dict(spec)
    return _csv_curve(text, origin)


def parse_curve_file(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from None
    return parse_curve_text(text, str(path))


# -- CSV -------------------------------------------------------------------

def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.17g" % v
    return str(v)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def sample_rows(curve, n: int = 201):
    """t,x,y,s,kappa,rho at n equally spaced parameters."""
    t = curve.grid(n)
    z = curve(t)
    s = arc_length_reparam(curve).s_of_t(t)
    k = curvature(curve, t)
    rho = curvature_radius(curve, t)
    return zip(t, z.real, z.imag, s, k, rho)


SAMPLE_HEADER = ("t", "x", "y", "s", "kappa", "rho")
LCH_HEADER = ("M", "N", "bin_index", "X_left", "Y")
LCG_HEADER = ("s", "X", "Y", "grad")
CONVERGE_HEADER = ("M", "N", "interval_error", "tv_error")
MSA_HEADER = ("holds", "mu", "nu", "beta", "alpha", "xi", "eta", "residual")
HSA_HEADER = ("holds", "classification", "interval_lo", "interval_hi",
              "a11", "a12", "a21", "a22", "bx", "by", "residual")
ESA_HEADER = ("holds", "family", "kappa_sa", "spread", "witness_residual")
