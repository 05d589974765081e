"""Batch command line: aesthetic-curves <command> --input CURVE [options].

Exit status: 0 on success, 1 when a verification does not hold and
--strict is given, 2 on any error.  Flags override values from --config.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core import SampledCurve, arc_length_reparam, curvature_radius, winding_injectivity_check
from .equiaffine_esa import ClassifyTols, classify_curve, verify_esa
from .errors import CurveError
from .fileio import (CONVERGE_HEADER, ESA_HEADER, HSA_HEADER, LCG_HEADER, LCH_HEADER,
                     MSA_HEADER, SAMPLE_HEADER, fmt, parse_curve_file, parse_curve_text,
                     sample_rows, write_csv)
from .hsa_affine import verify_hsa
from .lac_msa import verify_msa
from .lch_lcg import compute_lcg, compute_lch, convergence_report, monotone_segments
from .svg import line_plot

log = logging.getLogger("aesthetic_curves")

COMMANDS = ("generate", "analyze", "lch", "lcg", "converge", "verify-msa",
            "verify-hsa", "verify-esa", "classify")

DEFAULTS = {
    "output_dir": ".",
    "M": [10],
    "N": [120],
    "beta": 1.0,
    "eps": None,  # per-command default below
    "tol": None,
    "samples": None,
    "seed": 0,
    "intervals": [[0.0, 0.5], [0.3, 0.9]],
    "interval": None,
    "strict": False,
}


@dataclass
class JobConfig:
    command: str
    input: str
    output_dir: Path = Path(".")
    params: dict = field(default_factory=dict)
    seed: int = 0

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        p = self.params
        Ms, Ns = p["M"], p["N"]
        if len(Ms) != len(Ns):
            raise ValueError("--M and --N need the same number of entries")
        for M, N in zip(Ms, Ns):
            if M < 2 or N < M:
                raise ValueError(f"need M >= 2 and N >= M, got M={M}, N={N}")
        if p["tol"] is not None and not p["tol"] > 0:
            raise ValueError("--tol must be positive")
        if p["eps"] is not None and (not p["eps"] or min(p["eps"]) <= 0):
            raise ValueError("--eps values must be positive")
        if p["samples"] is not None and p["samples"] < 2:
            raise ValueError("--samples must be >= 2")


def _floats(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in str(text).split(",") if v.strip()]


def _intervals(text):
    return [_floats(part) for part in str(text).split(";") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aesthetic-curves", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", help="curve file (JSON or t,x,y CSV) or inline JSON")
    ap.add_argument("--output-dir", dest="output_dir", help="where reports go (default .)")
    ap.add_argument("--M", type=_ints, help="bin counts, comma separated (default 10)")
    ap.add_argument("--N", type=_ints, help="division counts, comma separated (default 120)")
    ap.add_argument("--beta", type=float, help="MSA reparameterization constant (default 1)")
    ap.add_argument("--eps", type=_floats, help="parameter shifts, comma separated")
    ap.add_argument("--tol", type=float, help="verification tolerance (command default)")
    ap.add_argument("--samples", type=int, help="sample count (command default)")
    ap.add_argument("--seed", type=int, help="seed for random intervals (default 0)")
    ap.add_argument("--intervals", type=_intervals,
                    help="HSA subintervals of [0, 1], e.g. '0,0.5;0.3,0.9'")
    ap.add_argument("--interval", type=_floats,
                    help="converge: X interval a,b (default: 5 random intervals from --seed)")
    ap.add_argument("--strict", action="store_true", default=None,
                    help="exit 1 when a verification does not hold")
    ap.add_argument("--config", help="JSON file with default values for any flag")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def make_config(args) -> JobConfig:
    merged = dict(DEFAULTS)
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise OSError(f"{args.config}: {exc.strerror or exc}") from None
        if not isinstance(cfg, dict):
            raise ValueError(f"{args.config}: config must be a JSON object")
        conv = {"M": _ints, "N": _ints, "eps": _floats, "interval": _floats}
        for k, v in cfg.items():
            key = k.replace("-", "_")
            if key not in merged and key != "input":
                raise ValueError(f"{args.config}: unknown key {k!r}")
            if key in conv and not isinstance(v, list):
                v = conv[key](v)
            elif key in ("M", "N") and isinstance(v, list):
                v = [int(x) for x in v]
            merged[key] = v
    for key in list(DEFAULTS) + ["input"]:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if not merged.get("input"):
        raise ValueError("--input is required")
    cfg = JobConfig(args.command, merged.pop("input"), Path(merged.pop("output_dir")),
                    merged, int(merged.pop("seed")))
    cfg.validate()
    return cfg


def load_curve(spec: str):
    if spec.lstrip().startswith("{"):
        return parse_curve_text(spec)
    return parse_curve_file(spec)


# -- commands --------------------------------------------------------------

def _write_svg(path, svg):
    with open(path, "w", newline="\n") as fh:
        fh.write(svg)


def cmd_generate(curve, cfg):
    n = cfg.params["samples"] or 201
    write_csv(cfg.output_dir / "curve.csv", SAMPLE_HEADER, sample_rows(curve, n))
    t = curve.grid(max(n, 401))
    z = curve(t)
    _write_svg(cfg.output_dir / "curve.svg",
               line_plot([(curve.name, z.real, z.imag, "line")], "curve trace", "x", "y", __version__))
    return True


def cmd_analyze(curve, cfg):
    cmd_generate(curve, cfg)
    alc = arc_length_reparam(curve)
    rho = np.abs(curvature_radius(curve, curve.grid(1025)))
    try:
        nseg = len(monotone_segments(alc))
    except CurveError:
        nseg = -1
    row = (alc.s_all, curve.scale, float(np.min(rho)), float(np.max(rho)), nseg,
           winding_injectivity_check(curve))
    write_csv(cfg.output_dir / "analysis.csv",
              ("s_all", "scale", "rho_min", "rho_max", "monotone_segments", "slope_injective"), [row])
    return True


def cmd_lch(curve, cfg):
    alc = arc_length_reparam(curve)
    rows, series = [], []
    for M, N in zip(cfg.params["M"], cfg.params["N"]):
        h = compute_lch(alc, M, N)
        rows.extend(h.rows())
        series.append((f"M={M}, N={N}", h.edges, h.y, "step"))
    write_csv(cfg.output_dir / "lch.csv", LCH_HEADER, rows)
    _write_svg(cfg.output_dir / "lch.svg",
               line_plot(series, "logarithmic curvature histogram", "X = log rho", "Y", __version__))
    return True


def cmd_lcg(curve, cfg):
    alc = arc_length_reparam(curve)
    plot = compute_lcg(alc, cfg.params["samples"] or 256)
    write_csv(cfg.output_dir / "lcg.csv", LCG_HEADER, plot.rows())
    series = []
    for k in range(len(plot.monotone_segments)):
        _, X, Y, _ = plot.trace(k)
        series.append((f"segment {k}", X, Y, "line"))
    _write_svg(cfg.output_dir / "lcg.svg",
               line_plot(series, "logarithmic curvature graph", "X = log rho", "Y = log |ds/dX|",
                         __version__))
    return True


def cmd_converge(curve, cfg):
    alc = arc_length_reparam(curve)
    grid = list(zip(cfg.params["M"], cfg.params["N"]))
    if len(grid) < 2:
        grid = [(10, 120), (30, 240), (80, 1000)]
    if cfg.params["interval"] is not None:
        intervals = [tuple(cfg.params["interval"])]
    else:
        from .lch_lcg import ExactLCGDensity
        ex = ExactLCGDensity(alc)
        rng = np.random.default_rng(cfg.seed)
        intervals = [tuple(sorted(rng.uniform(ex.x_min, ex.x_max, 2))) for _ in range(5)]
    rows, series, ok = [], [], True
    for iv in intervals:
        rep = convergence_report(alc, grid, iv)
        ok = ok and rep.decreasing
        for r in rep.rows:
            rows.append((iv[0], iv[1], r.M, r.N, r.interval_error, r.tv_error))
        series.append((f"[{iv[0]:.3g}, {iv[1]:.3g})", [math.log10(r.N) for r in rep.rows],
                       [math.log10(max(r.interval_error, 1e-300)) for r in rep.rows], "line"))
    tv = [(math.log10(r.N), math.log10(r.tv_error)) for r in rep.rows]
    series.append(("total variation", [a for a, _ in tv], [b for _, b in tv], "line"))
    write_csv(cfg.output_dir / "converge.csv", ("interval_lo", "interval_hi") + CONVERGE_HEADER, rows)
    _write_svg(cfg.output_dir / "converge.svg",
               line_plot(series, "LCH measure error", "log10 N", "log10 error", __version__))
    return ok


def cmd_verify_msa(curve, cfg):
    alc = arc_length_reparam(curve)
    rep = verify_msa(alc, cfg.params["beta"], cfg.params["eps"] or (0.05, 0.1, 0.2),
                     cfg.params["tol"] or 1e-6)
    write_csv(cfg.output_dir / "msa.csv", MSA_HEADER, [rep.row()])
    return rep.holds


def cmd_verify_hsa(curve, cfg):
    rep = verify_hsa(curve, cfg.params["intervals"], cfg.params["tol"] or 1e-8)
    write_csv(cfg.output_dir / "hsa.csv", HSA_HEADER, rep.rows())
    return rep.holds


def cmd_verify_esa(curve, cfg):
    rep = verify_esa(curve, cfg.params["eps"] or (0.1, 0.5, 1.0), cfg.params["tol"] or 1e-6)
    write_csv(cfg.output_dir / "esa.csv", ESA_HEADER, [rep.row()])
    return rep.holds


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else fmt(v)
    return v


def cmd_classify(curve, cfg):
    tols = ClassifyTols.for_sampled() if isinstance(curve, SampledCurve) else ClassifyTols()
    if cfg.params["tol"]:
        tols = ClassifyTols(cfg.params["tol"], tols.esa_tol, tols.zero_floor, tols.n_samples)
    res = classify_curve(curve, tols)
    with open(cfg.output_dir / "classify.json", "w", newline="\n") as fh:
        json.dump(_jsonable(res.record()), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(res.tag)
    return True


HANDLERS = {
    "generate": cmd_generate, "analyze": cmd_analyze, "lch": cmd_lch, "lcg": cmd_lcg,
    "converge": cmd_converge, "verify-msa": cmd_verify_msa, "verify-hsa": cmd_verify_hsa,
    "verify-esa": cmd_verify_esa, "classify": cmd_classify,
}


def run_job(cfg: JobConfig) -> int:
    curve = load_curve(cfg.input)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    holds = HANDLERS[cfg.command](curve, cfg)
    log.info("%s: holds=%s", cfg.command, holds)
    return 1 if (cfg.params["strict"] and not holds) else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return run_job(make_config(args))
    except (CurveError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
