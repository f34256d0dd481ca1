"""Symmetric witness fields that expose non-diagonal paths.

For a monotone path whose coordinates i and j share endpoints but separate
somewhere, take a maximal parameter interval (u, v) where they differ and
the clamped ramp g rising between the shared values alpha and beta.  The
field F = g(x_i) g(x_j) is symmetric in (i, j), yet along the path the
lagging coordinate collects strictly more attribution than the leading one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .engine import AttributionReport, QuadratureSpec, integrated_gradients, kink_crossings, symmetry_gap
from .errors import EndpointMismatch, IndexOutOfRange, NoViolation, NotMonotonic
from .fields import ScalarField, make_witness_field
from .paths import PathSpec, check_monotonic

ZERO_TOL = 1e-12
BISECT_TOL = 1e-10
DEGENERATE_WIDTH = 1e-9


@dataclass(frozen=True)
class ViolationInterval:
    u: float
    v: float
    alpha: float
    beta: float
    swapped: bool

    def to_dict(self) -> dict:
        return {"u": self.u, "v": self.v, "alpha": self.alpha, "beta": self.beta, "swapped": self.swapped}


def _check_pair(path, i, j):
    for k in (i, j):
        if not 0 <= k < path.dim:
            raise IndexOutOfRange(f"coordinate {k} outside 0..{path.dim - 1}")
    if i == j:
        raise IndexOutOfRange("need two distinct coordinates")


def _edge(d, inside_pt, outside_pt):
    """Bisect between an inside and an outside parameter; return the outside end."""
    s = np.sign(d(inside_pt))
    # a genuine sign change is located on s*d > 0; a tangential dip on the threshold
    level = 0.0 if s * d(outside_pt) <= 0.0 else ZERO_TOL
    a, b = outside_pt, inside_pt
    while abs(b - a) > BISECT_TOL:
        mid = 0.5 * (a + b)
        if s * d(mid) > level:
            b = mid
        else:
            a = mid
    return a


def violation_interval(path: PathSpec, i: int, j: int, grid: int = 4097) -> ViolationInterval | None:
    """Maximal interval around the largest separation of coordinates i and j.

    Returns None when the coordinates agree on the whole grid or the shared
    values at the interval ends are closer than 1e-9.
    """
    _check_pair(path, i, j)
    ends = path.points([0.0, 1.0])
    if abs(ends[0, i] - ends[0, j]) > ZERO_TOL or abs(ends[1, i] - ends[1, j]) > ZERO_TOL:
        raise EndpointMismatch(
            f"coordinates {i} and {j} do not share endpoints: gamma(0)={ends[0].tolist()}, gamma(1)={ends[1].tolist()}"
        )
    ts = np.linspace(0.0, 1.0, grid)
    X = path.points(ts)
    diff = X[:, j] - X[:, i]
    if np.max(np.abs(diff)) <= ZERO_TOL:
        return None

    def d(t):
        x = path.points([t])[0]
        return x[j] - x[i]

    k = int(np.argmax(np.abs(diff)))
    s = np.sign(diff[k])
    inside = s * diff > ZERO_TOL
    lo = k
    while inside[lo - 1]:
        lo -= 1
    hi = k
    while inside[hi + 1]:
        hi += 1
    u = _edge(d, ts[lo], ts[lo - 1])
    v = _edge(d, ts[hi], ts[hi + 1])

    xu, xv = path.points([u, v])
    if ends[1, i] >= ends[0, i]:
        alpha = max(xu[i], xu[j])
        beta = min(xv[i], xv[j])
    else:
        alpha = max(xv[i], xv[j])
        beta = min(xu[i], xu[j])
    if beta - alpha <= DEGENERATE_WIDTH:
        return None
    return ViolationInterval(float(u), float(v), float(alpha), float(beta), bool(s < 0))


@dataclass
class AsymmetryReport:
    interval: ViolationInterval
    field: ScalarField
    report: AttributionReport
    lagging: int
    leading: int
    gap: float

    def to_dict(self) -> dict:
        return {
            "interval": self.interval.to_dict(),
            "coordinates": {"lagging": self.lagging, "leading": self.leading},
            "gap": self.gap,
            "attributions": [float(a) for a in self.report.attributions],
            "residual": self.report.residual,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def witness_for(path: PathSpec, i: int, j: int, interval: ViolationInterval, pad: float = 1.0) -> ScalarField:
    X = path.points(np.linspace(0.0, 1.0, 257))
    lo = min(X.min(), interval.alpha) - pad
    hi = max(X.max(), interval.beta) + pad
    return make_witness_field(path.dim, i, j, interval.alpha, interval.beta, (lo, hi), name="witness")


def demonstrate_asymmetry(path: PathSpec, i: int, j: int, quad: QuadratureSpec | None = None,
                          grid: int = 4097) -> AsymmetryReport:
    """Attribute the witness field along ``path`` and return the signed gap.

    ``gap`` is IG of the lagging coordinate minus IG of the leading one: on
    an increasing path the lagging coordinate is the smaller one on the
    interval, on a decreasing path the larger one.  It is strictly positive
    for every strictly monotone path that is not diagonal in (i, j).
    """
    interval = violation_interval(path, i, j, grid)
    if interval is None:
        raise NoViolation(f"coordinates {i} and {j} coincide along {path.id}")
    mono = check_monotonic(path)
    if not mono.strictly_monotonic([i, j]):
        raise NotMonotonic(f"coordinates {i}, {j} of {path.id} are {mono.direction[i]}/{mono.direction[j]}, "
                           f"strict={mono.strict[i]}/{mono.strict[j]}")
    field = witness_for(path, i, j, interval)
    quad = quad or QuadratureSpec("gauss_legendre", 32)
    quad = quad.with_splits([interval.u, interval.v], kink_crossings(field, path, grid))
    report = integrated_gradients(field, path, quad)
    smaller, larger = (j, i) if interval.swapped else (i, j)
    increasing = mono.direction[i] == "increasing"
    lagging, leading = (smaller, larger) if increasing else (larger, smaller)
    return AsymmetryReport(interval, field, report, lagging, leading, symmetry_gap(report, lagging, leading))
