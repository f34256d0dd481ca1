"""Command-line front end.

Exit status: 0 on success, 1 for usage or spec errors, 2 when a checked
invariant fails (residual above tolerance, missing witness gap, ...).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import engine, fields, paths, witness
from .errors import NotConverged, PathgradError, SpecParseError

log = logging.getLogger("pathgrad")

COMMANDS = ("attribute", "check-completeness", "check-symmetry", "witness", "counterexample", "figure", "validate")
FIELD_SHORTCUTS = ("product", "bilinear", "max", "relu", "cantor", "witness")
PATH_SHORTCUTS = ("straight", "power-arc", "counterexample")


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    field_spec: str | None = None
    path_spec: str | None = None
    p: list | None = None
    q: list | None = None
    rule: str | None = None
    nodes: int = 64
    tolerance: float | None = None
    seed: int | None = None
    output: str | None = None
    format: str = "json"
    depth: int = fields.DEFAULT_CANTOR_DEPTH
    arc_exponent: float = 2.0
    layers: list | None = None
    alpha: float | None = None
    beta: float | None = None
    i: int = 0
    j: int = 1
    refine: bool = False
    max_nodes: int = 65536
    split_kinks: bool = False
    samples: int = 101
    spec_file: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError("--tolerance must be positive")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if self.format not in ("json", "csv"):
            raise UsageError("--format must be json or csv")


# ---------------------------------------------------------------------------
# spec loading


def _load_json(text: str, what: str):
    source = text
    if not text.lstrip().startswith("{") and Path(text).is_file():
        source = Path(text).read_text()
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise SpecParseError([f"{what}: line {exc.lineno} column {exc.colno}: {exc.msg}"]) from exc


def validate_spec(spec_or_file) -> dict:
    """Normalize a field or path spec, filling defaults; SpecParseError lists every problem."""
    spec = _load_json(spec_or_file, "spec") if isinstance(spec_or_file, str) else spec_or_file
    if isinstance(spec, dict) and ("p" in spec or "q" in spec or spec.get("kind") in paths.PATH_KINDS):
        return paths.path_to_spec(paths.path_from_spec(spec))
    return fields.field_to_spec(fields.field_from_spec(spec))


def _dim_hint(cfg):
    for v in (cfg.p, cfg.q):
        if v is not None:
            return len(v)
    return 2


def build_field(cfg: ExperimentConfig) -> fields.ScalarField:
    spec = cfg.field_spec or "product"
    if spec not in FIELD_SHORTCUTS:
        return fields.field_from_spec(_load_json(spec, "field spec"))
    dim = _dim_hint(cfg)
    if spec in ("product", "bilinear"):
        return fields.make_bilinear(dim, (cfg.i, cfg.j)) if dim > 2 else fields.make_bilinear(dim)
    if spec == "max":
        return fields.make_max(dim)
    if spec == "cantor":
        return fields.make_cantor(cfg.depth)
    if spec == "relu":
        if cfg.seed is None:
            raise UsageError("--field relu builds a random network and needs --seed")
        layers = cfg.layers or [dim, 16, 16, 1]
        return fields.field_from_spec({"random_relu": {"layers": layers, "seed": cfg.seed}})
    if cfg.alpha is None or cfg.beta is None:
        raise UsageError("--field witness needs --alpha and --beta")
    return fields.make_witness_field(dim, cfg.i, cfg.j, cfg.alpha, cfg.beta)


def build_path(cfg: ExperimentConfig, dim: int) -> paths.PathSpec:
    spec = cfg.path_spec or "straight"
    if spec not in PATH_SHORTCUTS:
        return paths.path_from_spec(_load_json(spec, "path spec"), dim)
    if spec == "power-arc":
        if cfg.p is None and cfg.q is None:
            return paths.make_power_arc(cfg.arc_exponent)
        return paths.make_power_path(cfg.p or [0.0, 0.0], cfg.q or [1.0, 1.0], (1.0, cfg.arc_exponent))
    p = cfg.p if cfg.p is not None else [0.0] * dim
    q = cfg.q if cfg.q is not None else [1.0] * dim
    if spec == "counterexample":
        return paths.make_counterexample(p, q)
    return paths.make_straight(p, q)


def _quad(cfg, default_rule="midpoint", splits=()):
    return engine.QuadratureSpec(cfg.rule or default_rule, cfg.nodes, tuple(splits))


# ---------------------------------------------------------------------------
# commands


def _attribute(cfg, f, path):
    splits = engine.kink_crossings(f, path) if cfg.split_kinks else ()
    if cfg.refine:
        tol = cfg.tolerance or 1e-6
        report = engine.refine(f, path, tol, cfg.max_nodes, rule=cfg.rule or "midpoint", split_at=splits,
                               raise_on_failure=False)
    else:
        report = engine.integrated_gradients(f, path, _quad(cfg, splits=splits))
    return report


def cmd_attribute(cfg):
    f = build_field(cfg)
    report = _attribute(cfg, f, build_path(cfg, f.dim))
    return 0, report.to_dict(), report.to_csv()


def cmd_check_completeness(cfg):
    f = build_field(cfg)
    path = build_path(cfg, f.dim)
    tol = cfg.tolerance or 1e-6
    report = _attribute(cfg, f, path)
    ok = engine.completeness_residual(report) <= tol
    if cfg.refine and not report.converged:
        ok = False
    out = report.to_dict()
    out["check"] = {"invariant": "completeness", "tolerance": tol, "passed": ok}
    return (0 if ok else 2), out, report.to_csv()


def _field_symmetric(f, i, j, seed):
    if (min(i, j), max(i, j)) in fields.symmetric_pairs(f):
        return True
    rng = np.random.Generator(np.random.PCG64(seed))
    X = f.domain_lo + rng.random((1000, f.dim)) * (f.domain_hi - f.domain_lo)
    Y = X.copy()
    Y[:, [i, j]] = X[:, [j, i]]
    return bool(np.array_equal(f.evaluate_batch(X), f.evaluate_batch(Y)))


def cmd_check_symmetry(cfg):
    f = build_field(cfg)
    path = build_path(cfg, f.dim)
    i, j = cfg.i, cfg.j
    tol = cfg.tolerance or 1e-9
    ends = path.points([0.0, 1.0])
    if ends[0, i] != ends[0, j] or ends[1, i] != ends[1, j]:
        raise UsageError(f"baseline and input must agree in coordinates {i} and {j} for a symmetry check")
    if not _field_symmetric(f, i, j, cfg.seed or 0):
        raise UsageError(f"field {f.id} is not symmetric in coordinates {i} and {j}")
    report = _attribute(cfg, f, path)
    gap = engine.symmetry_gap(report, i, j)
    ok = abs(gap) <= tol
    out = report.to_dict()
    out["check"] = {"invariant": "symmetry", "i": i, "j": j, "gap": gap, "tolerance": tol, "passed": ok}
    return (0 if ok else 2), out, report.to_csv()


def cmd_witness(cfg):
    cfg.path_spec = cfg.path_spec or "power-arc"
    path = build_path(cfg, _dim_hint(cfg))
    tol = cfg.tolerance or 1e-6
    quad = engine.QuadratureSpec(cfg.rule or "gauss_legendre", cfg.nodes)
    try:
        result = witness.demonstrate_asymmetry(path, cfg.i, cfg.j, quad)
    except witness.NoViolation:
        out = {"path": path.id, "interval": None, "gap": 0.0, "note": "coordinates coincide along the path"}
        return 0, out, None
    out = result.to_dict()
    out["path"] = path.id
    out["check"] = {"invariant": "witness_gap_positive", "threshold": 10 * tol, "passed": result.gap > 10 * tol}
    status = 0 if out["check"]["passed"] else 2
    rows = io.StringIO()
    w = csv.writer(rows, lineterminator="\n")
    w.writerow(["u", "v", "alpha", "beta", "swapped", "lagging", "leading", "gap"])
    iv = result.interval
    w.writerow([repr(iv.u), repr(iv.v), repr(iv.alpha), repr(iv.beta), iv.swapped, result.lagging,
                result.leading, repr(result.gap)])
    return status, out, rows.getvalue()


def cmd_counterexample(cfg):
    p = cfg.p if cfg.p is not None else [0.0, 0.5]
    q = cfg.q if cfg.q is not None else [1.0, 1.5]
    path = paths.make_counterexample(p, q)
    ts = np.linspace(0.0, 1.0, 1001)
    deviation = float(np.max(np.abs(path.points(ts) - paths.make_straight(p, q).points(ts))))
    mono = paths.check_monotonic(path)
    predicate = paths.counterexample_monotone_predicate(p, q).tolist()
    agrees = [pred == (d != "non_monotonic") for pred, d in zip(predicate, mono.direction)]
    symmetric_ends = p[0] == p[1] and q[0] == q[1]
    cfg.p, cfg.q = p, q
    cfg.rule = cfg.rule or "gauss_legendre"
    f = build_field(cfg)
    tol = cfg.tolerance or 1e-6
    report = _attribute(cfg, f, path)
    ok = all(agrees) and (deviation == 0.0 or not symmetric_ends) and abs(report.residual) <= tol
    out = {
        "path": path.id,
        "p": list(map(float, p)),
        "q": list(map(float, q)),
        "C": path.params["C"],
        "symmetric_endpoints": symmetric_ends,
        "max_deviation_from_straight": deviation,
        "monotonicity": mono.to_dict(),
        "predicate_monotone": predicate,
        "attribution": report.to_dict(),
        "symmetry_gap": engine.symmetry_gap(report, 0, 1),
        "check": {"tolerance": tol, "passed": ok},
    }
    return (0 if ok else 2), out, report.to_csv()


def cmd_figure(cfg):
    path = paths.make_power_arc(cfg.arc_exponent)
    f = fields.make_bilinear(2)
    report = engine.integrated_gradients(f, path, _quad(cfg, "gauss_legendre"))
    tol = cfg.tolerance or 1e-9
    ts = np.linspace(0.0, 1.0, cfg.samples)
    X = path.points(ts)
    table = [[float(t), float(x[0]), float(x[1])] for t, x in zip(ts, X)]
    ig1, ig2 = (float(a) for a in report.attributions)
    ok = abs(report.sum - 1.0) <= tol and ig1 <= ig2
    out = {
        "path": path.id,
        "arc_exponent": cfg.arc_exponent,
        "quadrature": {"rule": report.quadrature.rule, "nodes": report.quadrature.nodes},
        "IG_1": ig1,
        "IG_2": ig2,
        "sum": report.sum,
        "area_under_curve": ig1,
        "area_above_curve": ig2,
        "table": {"columns": ["t", "gamma_1", "gamma_2"], "rows": table},
        "check": {"tolerance": tol, "passed": ok},
    }
    buf = io.StringIO()
    buf.write(f"# IG_1={ig1!r}\n# IG_2={ig2!r}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "gamma_1", "gamma_2"])
    for row in table:
        w.writerow([repr(v) for v in row])
    return (0 if ok else 2), out, buf.getvalue()


def cmd_validate(cfg):
    if not cfg.spec_file:
        raise UsageError("validate needs a spec file or inline JSON")
    return 0, validate_spec(cfg.spec_file), None


HANDLERS = {
    "attribute": cmd_attribute,
    "check-completeness": cmd_check_completeness,
    "check-symmetry": cmd_check_symmetry,
    "witness": cmd_witness,
    "counterexample": cmd_counterexample,
    "figure": cmd_figure,
    "validate": cmd_validate,
}


def _emit(cfg, payload, csv_text):
    if cfg.format == "csv" and csv_text is not None:
        text = csv_text
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _error(kind, message, details=None):
    record = {"error": kind, "message": message}
    if details:
        record["details"] = details
    sys.stderr.write(json.dumps(record) + "\n")


def run(cfg: ExperimentConfig) -> int:
    """Execute one experiment and write its report; returns the exit status."""
    try:
        status, payload, csv_text = HANDLERS[cfg.command](cfg)
    except NotConverged as exc:
        _emit(cfg, exc.report.to_dict(), exc.report.to_csv())
        _error("NotConverged", str(exc))
        return 2
    except SpecParseError as exc:
        _error("SpecParseError", str(exc), exc.errors)
        return 1
    except (PathgradError, UsageError) as exc:
        _error(type(exc).__name__, str(exc))
        return 1
    _emit(cfg, payload, csv_text)
    return status


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _error("UsageError", message)
        raise SystemExit(1)


def _floats(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pathgrad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--field", dest="field_spec", help=f"JSON file, inline JSON or one of {FIELD_SHORTCUTS}")
    common.add_argument("--path", dest="path_spec", help=f"JSON file, inline JSON or one of {PATH_SHORTCUTS}")
    common.add_argument("--p", type=_floats, help="baseline, comma separated")
    common.add_argument("--q", type=_floats, help="input, comma separated")
    common.add_argument("--rule", choices=["midpoint", "trapezoid", "gauss", "gauss_legendre"])
    common.add_argument("--nodes", type=int, default=64)
    common.add_argument("--tolerance", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", dest="output")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--depth", type=int, default=fields.DEFAULT_CANTOR_DEPTH)
    common.add_argument("--arc-exponent", type=float, default=2.0)
    common.add_argument("--layers", type=_ints, help="random relu widths, e.g. 8,16,16,1")
    common.add_argument("--alpha", type=float)
    common.add_argument("--beta", type=float)
    common.add_argument("--i", type=int, default=0, help="first coordinate (0-based)")
    common.add_argument("--j", type=int, default=1, help="second coordinate (0-based)")
    common.add_argument("--refine", action="store_true", help="double midpoint nodes until --tolerance")
    common.add_argument("--max-nodes", type=int, default=65536)
    common.add_argument("--split-kinks", action="store_true", help="split panels where the path changes pieces")
    common.add_argument("--samples", type=int, default=101, help="rows in the figure table")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "validate":
            sp.add_argument("spec_file")
    return parser


def main(argv=None) -> int:
    level = os.environ.get("PATHGRAD_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    try:
        args = vars(build_parser().parse_args(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        cfg = ExperimentConfig(**args)
    except UsageError as exc:
        _error("UsageError", str(exc))
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
