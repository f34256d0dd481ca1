"""Path attributions IG_i = int_gamma dF/dx_i dx_i by panel quadrature."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import (
    AllNodesNondifferentiable,
    DimensionMismatch,
    IndexOutOfRange,
    InvalidParameter,
    NotConverged,
    PathLeavesDomain,
)
from .fields import ScalarField
from .paths import PathSpec, make_straight

log = logging.getLogger(__name__)

RULES = ("midpoint", "trapezoid", "gauss_legendre")
# per panel; Legendre roots cost O(n^2) and higher orders buy nothing in float64
GL_MAX_NODES = 1024
_RULE_ALIASES = {"gauss": "gauss_legendre", "gl": "gauss_legendre"}


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite rule on [0, 1]: ``nodes`` points in each panel between splits."""

    rule: str = "midpoint"
    nodes: int = 64
    split_at: tuple = ()

    def __post_init__(self):
        rule = _RULE_ALIASES.get(self.rule, self.rule)
        if rule not in RULES:
            raise InvalidParameter(f"rule must be one of {RULES}, got {self.rule!r}")
        object.__setattr__(self, "rule", rule)
        if not isinstance(self.nodes, (int, np.integer)) or self.nodes < 1:
            raise InvalidParameter(f"nodes must be a positive integer, got {self.nodes!r}")
        if rule == "trapezoid" and self.nodes < 2:
            raise InvalidParameter("trapezoid rule needs at least 2 nodes per panel")
        if rule == "gauss_legendre" and self.nodes > GL_MAX_NODES:
            raise InvalidParameter(f"gauss_legendre takes at most {GL_MAX_NODES} nodes per panel; add split_at panels")
        split = tuple(float(s) for s in self.split_at)
        if any(not 0.0 < s < 1.0 for s in split) or any(b <= a for a, b in zip(split, split[1:])):
            raise InvalidParameter("split_at must be sorted, distinct and strictly inside (0, 1)")
        object.__setattr__(self, "split_at", split)
        object.__setattr__(self, "nodes", int(self.nodes))

    def with_splits(self, *extra) -> "QuadratureSpec":
        pts = sorted({float(s) for group in (self.split_at, *extra) for s in group if 0.0 < s < 1.0})
        return replace(self, split_at=tuple(pts))


@lru_cache(maxsize=64)
def _legendre(n: int):
    x, w = roots_legendre(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _panel_rule(rule: str, n: int):
    """Nodes and weights of one panel on [0, 1]."""
    if rule == "midpoint":
        return (np.arange(n) + 0.5) / n, np.full(n, 1.0 / n)
    if rule == "trapezoid":
        x = np.linspace(0.0, 1.0, n)
        w = np.full(n, 1.0 / (n - 1))
        w[[0, -1]] *= 0.5
        return x, w
    return _legendre(n)


def quadrature_nodes(quad: QuadratureSpec):
    """Return ``(t, w, right_end)``; ``right_end`` marks nodes on a panel's right edge."""
    x, w = _panel_rule(quad.rule, quad.nodes)
    edges = np.concatenate([[0.0], quad.split_at, [1.0]])
    ts, ws, ends = [], [], []
    for a, b in zip(edges[:-1], edges[1:]):
        t = a + (b - a) * x
        if quad.rule == "trapezoid":
            t[0], t[-1] = a, b
        ts.append(t)
        ws.append((b - a) * w)
        ends.append(t == b)
    return np.concatenate(ts), np.concatenate(ws), np.concatenate(ends)


@dataclass
class AttributionReport:
    attributions: np.ndarray
    sum: float
    f_input: float
    f_base: float
    residual: float
    nondiff_nodes: int
    quadrature: QuadratureSpec
    path_id: str = ""
    field_id: str = ""
    converged: bool | None = None
    previous_residual: float | None = None
    diagnostics: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "field": self.field_id,
            "path": self.path_id,
            "quadrature": {"rule": self.quadrature.rule, "nodes": self.quadrature.nodes},
            "attributions": [float(a) for a in self.attributions],
            "sum": self.sum,
            "f_input": self.f_input,
            "f_base": self.f_base,
            "residual": self.residual,
            "nondiff_nodes": self.nondiff_nodes,
            "converged": self.converged,
        }
        if self.quadrature.split_at:
            out["quadrature"]["split_at"] = list(self.quadrature.split_at)
        if self.previous_residual is not None:
            out["previous_residual"] = self.previous_residual
        if self.diagnostics:
            out["diagnostics"] = list(self.diagnostics)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["coordinate", "attribution", "field", "path", "rule", "nodes", "sum", "residual"])
        for k, a in enumerate(self.attributions):
            w.writerow([k, repr(float(a)), self.field_id, self.path_id, self.quadrature.rule,
                        self.quadrature.nodes, repr(self.sum), repr(self.residual)])
        return buf.getvalue()


def _check_inside(f: ScalarField, X, t):
    inside = f.contains(X)
    if not inside.all():
        k = int(np.argmin(inside))
        raise PathLeavesDomain(t[k], X[k])


def _finish(f, ends, attributions, differentiable, quad, path_id, strict):
    total = math.fsum(attributions)
    f_base, f_input = f.evaluate(ends[0]), f.evaluate(ends[1])
    report = AttributionReport(
        attributions=attributions,
        sum=total,
        f_input=f_input,
        f_base=f_base,
        residual=total - (f_input - f_base),
        nondiff_nodes=int(np.count_nonzero(~differentiable)),
        quadrature=quad,
        path_id=path_id,
        field_id=f.id,
    )
    if len(differentiable) and not differentiable.any():
        report.diagnostics.append("all_nodes_nondifferentiable")
        log.warning("every quadrature node of %s on %s lies on the kink set", f.id, path_id)
        if strict:
            raise AllNodesNondifferentiable(report)
    return report


def integrated_gradients(f: ScalarField, path: PathSpec, quad: QuadratureSpec | None = None,
                         strict: bool = False) -> AttributionReport:
    """Per-coordinate path integrals of the gradient along ``path``.

    Nodes on the field's kink set are integrated with the subgradient the
    field selects and counted in ``nondiff_nodes``.  With ``strict`` a path
    whose nodes all sit on the kink set raises AllNodesNondifferentiable.
    """
    quad = quad or QuadratureSpec()
    if f.dim != path.dim:
        raise DimensionMismatch(f"field {f.id} has dimension {f.dim}, path {path.id} has {path.dim}")
    quad = quad.with_splits(path.knots)
    t, w, right_end = quadrature_nodes(quad)
    X = path.points(t)
    _check_inside(f, np.vstack([X, path.points([0.0, 1.0])]), np.concatenate([t, [0.0, 1.0]]))
    D = path.derivatives(t)
    if right_end.any() and path.kind == "piecewise_linear":
        D[right_end] = path.derivatives(t[right_end], side="left")
    G = f.gradient_batch(X)
    contrib = w[:, None] * G * D
    attributions = np.array([math.fsum(contrib[:, k]) for k in range(f.dim)])
    return _finish(f, path.points([0.0, 1.0]), attributions, f.differentiable_batch(X), quad, path.id, strict)


def ig_straight(f: ScalarField, p, q, quad: QuadratureSpec | None = None, strict: bool = False) -> AttributionReport:
    """Straight-line IG in factored form ``(q_i - p_i) * int_0^1 dF/dx_i dt``."""
    quad = quad or QuadratureSpec()
    line = make_straight(p, q)
    if f.dim != line.dim:
        raise DimensionMismatch(f"field {f.id} has dimension {f.dim}, endpoints have {line.dim}")
    t, w, _ = quadrature_nodes(quad)
    delta = line.q - line.p
    X = line.p + t[:, None] * delta
    _check_inside(f, np.vstack([X, line.p, line.q]), np.concatenate([t, [0.0, 1.0]]))
    G = f.gradient_batch(X)
    attributions = np.array([delta[k] * math.fsum(w * G[:, k]) for k in range(f.dim)])
    return _finish(f, (line.p, line.q), attributions, f.differentiable_batch(X), quad, "straight", strict)


def completeness_residual(report: AttributionReport) -> float:
    """|sum_i IG_i - (F(gamma(1)) - F(gamma(0)))|"""
    return abs(report.residual)


def symmetry_gap(report: AttributionReport, i: int, j: int) -> float:
    """Signed IG_i - IG_j."""
    n = len(report.attributions)
    for k in (i, j):
        if not (isinstance(k, (int, np.integer)) and 0 <= k < n):
            raise IndexOutOfRange(f"coordinate index {k!r} outside 0..{n - 1}")
    if i == j:
        raise InvalidParameter("symmetry_gap needs two distinct coordinates")
    return float(report.attributions[i] - report.attributions[j])


def refine(f: ScalarField, path: PathSpec, tol: float, max_nodes: int = 65536, *, rule: str = "midpoint",
           start: int = 16, split_at=(), raise_on_failure: bool = True) -> AttributionReport:
    """Double the node count from ``start`` until |residual| <= tol.

    The returned report carries ``converged`` and the previous residual.
    If ``max_nodes`` is reached first, NotConverged is raised with the last
    report attached (or the report is returned when ``raise_on_failure`` is
    False).  Gauss-Legendre stops at GL_MAX_NODES per panel.
    """
    if not tol > 0:
        raise InvalidParameter("tol must be positive")
    if max_nodes < 2:
        raise InvalidParameter("max_nodes must be >= 2")
    if _RULE_ALIASES.get(rule, rule) == "gauss_legendre":
        max_nodes = min(max_nodes, GL_MAX_NODES)
    nodes = min(start, max_nodes)
    previous = None
    while True:
        report = integrated_gradients(f, path, QuadratureSpec(rule, nodes, tuple(split_at)))
        report.previous_residual = previous
        if abs(report.residual) <= tol:
            report.converged = True
            return report
        if 2 * nodes > max_nodes:
            break
        previous = report.residual
        nodes *= 2
    report.converged = False
    log.info("refine stopped at %d nodes with residual %.3e", nodes, report.residual)
    if raise_on_failure:
        raise NotConverged(report)
    return report


def kink_crossings(f: ScalarField, path: PathSpec, grid: int = 4097, tol: float = 1e-14) -> list[float]:
    """Parameters in (0, 1) where the path moves between smooth pieces of ``f``.

    Piece labels are sampled on a uniform grid and every change is located
    by bisection.  Two crossings of the same unit inside one grid cell go
    unseen, so pick ``grid`` fine relative to the path's curvature.
    """
    ts = np.linspace(0.0, 1.0, grid)
    sig = f.piece_signature_batch(path.points(ts))
    if sig is None:
        return []

    def label(t):
        return f.piece_signature_batch(path.points([t]))[0]

    out = []
    changed = np.flatnonzero((sig[1:] != sig[:-1]).any(axis=1))
    for k in changed:
        a, b = ts[k], ts[k + 1]
        la, lb = sig[k], sig[k + 1]
        while not np.array_equal(la, lb):
            lo, hi = a, b
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if np.array_equal(label(mid), la):
                    lo = mid
                else:
                    hi = mid
                if hi - lo <= 2 * np.spacing(hi):
                    break
            out.append(0.5 * (lo + hi))
            a, la = hi, label(hi)
    return [t for t in out if 0.0 < t < 1.0]
