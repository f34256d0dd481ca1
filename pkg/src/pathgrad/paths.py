"""Smooth paths gamma: [0, 1] -> R^n with closed-form derivatives."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DimensionMismatch, InvalidParameter, ParameterOutOfRange, SpecParseError

PATH_KINDS = ("straight", "counterexample_quadratic", "power_arc", "piecewise_linear", "pchip")
SLOPE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PathSpec:
    """A path from ``p`` (baseline) to ``q`` (input).

    Use the ``make_*`` constructors; ``params`` holds kind-specific data
    (``exponents`` for power arcs, ``knots``/``points`` for piecewise and
    spline paths, ``C`` for the quadratic counterexample).
    """

    kind: str
    p: np.ndarray
    q: np.ndarray
    params: dict = field(default_factory=dict)
    name: str | None = None

    @property
    def dim(self) -> int:
        return len(self.p)

    @property
    def id(self) -> str:
        return self.name or self.kind

    @property
    def knots(self) -> list[float]:
        """Interior parameters where the derivative is only one-sided smooth."""
        return list(self.params.get("knots", ()))

    def points(self, ts) -> np.ndarray:
        """gamma evaluated at every entry of ``ts``; shape (len(ts), dim)."""
        t = np.asarray(ts, dtype=float).reshape(-1, 1)
        p, q = self.p, self.q
        if self.kind == "straight":
            X = p + t * (q - p)
        elif self.kind == "counterexample_quadratic":
            X = p + t * (q - p) + t * (t - 1.0) * self.params["C"] * np.sign(q - p)
        elif self.kind == "power_arc":
            X = p + (q - p) * t ** self.params["exponents"]
        elif self.kind == "piecewise_linear":
            grid, vals = self._nodes()
            X = np.column_stack([np.interp(t[:, 0], grid, vals[:, k]) for k in range(self.dim)])
        elif self.kind == "pchip":
            X = self.params["_spline"](t[:, 0])
        else:
            raise InvalidParameter(f"unknown path kind {self.kind!r}")
        # pin the endpoints exactly
        X = np.array(X, dtype=float)
        X[t[:, 0] == 0.0] = p
        X[t[:, 0] == 1.0] = q
        return X

    def derivatives(self, ts, side: str = "right") -> np.ndarray:
        """gamma' at ``ts``; at piecewise-linear knots ``side`` picks the one-sided slope."""
        t = np.asarray(ts, dtype=float).reshape(-1, 1)
        p, q = self.p, self.q
        if self.kind == "straight":
            return np.broadcast_to(q - p, (len(t), self.dim)).copy()
        if self.kind == "counterexample_quadratic":
            return (q - p) + (2.0 * t - 1.0) * self.params["C"] * np.sign(q - p)
        if self.kind == "power_arc":
            e = self.params["exponents"]
            return (q - p) * e * t ** (e - 1.0)
        if self.kind == "piecewise_linear":
            grid, vals = self._nodes()
            seg = np.clip(np.searchsorted(grid, t[:, 0], side=side) - 1, 0, len(grid) - 2)
            return (vals[seg + 1] - vals[seg]) / (grid[seg + 1] - grid[seg])[:, None]
        if self.kind == "pchip":
            return self.params["_spline"].derivative()(t[:, 0])
        raise InvalidParameter(f"unknown path kind {self.kind!r}")

    def _nodes(self):
        grid = np.concatenate([[0.0], self.params["knots"], [1.0]])
        vals = np.vstack([self.p, np.asarray(self.params["points"], dtype=float).reshape(-1, self.dim), self.q])
        return grid, vals

    def __call__(self, t: float) -> np.ndarray:
        return eval_path(self, t)


def _check_t(t):
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRange(f"path parameter must lie in [0, 1], got {t!r}")


def eval_path(path: PathSpec, t: float) -> np.ndarray:
    _check_t(t)
    return path.points([t])[0]


def path_derivative(path: PathSpec, t: float) -> np.ndarray:
    _check_t(t)
    return path.derivatives([t])[0]


def _endpoints(p, q):
    p = np.array(p, dtype=float).reshape(-1)
    q = np.array(q, dtype=float).reshape(-1)
    if p.shape != q.shape:
        raise DimensionMismatch(f"baseline has dimension {len(p)} but input has {len(q)}")
    if len(p) == 0:
        raise DimensionMismatch("points must have at least one coordinate")
    p.flags.writeable = False
    q.flags.writeable = False
    return p, q


# ---------------------------------------------------------------------------
# Constructors


def make_straight(p, q, name=None) -> PathSpec:
    p, q = _endpoints(p, q)
    return PathSpec("straight", p, q, {}, name)


def counterexample_coefficient(p, q) -> float:
    """``C = (p1 - p2)^2 + (q1 - q2)^2`` for the quadratic counterexample path."""
    return float((p[0] - p[1]) ** 2 + (q[0] - q[1]) ** 2)


def make_counterexample(p, q, name=None) -> PathSpec:
    """Quadratic bend of the straight line that vanishes when p1=p2 and q1=q2.

    gamma_k(t) = p_k + t (q_k - p_k) + t (t - 1) C sgn(q_k - p_k), sgn(0) = 0.
    """
    p, q = _endpoints(p, q)
    if len(p) != 2:
        raise DimensionMismatch(f"the counterexample path is defined in 2 dimensions, got {len(p)}")
    return PathSpec("counterexample_quadratic", p, q, {"C": counterexample_coefficient(p, q)}, name)


def counterexample_monotone_predicate(p, q) -> np.ndarray:
    """Per coordinate: True iff the counterexample path is monotone there.

    gamma_k' = d + (2t - 1) C sgn(d) keeps the sign of d on [0, 1] iff
    C <= |d|; a zero d makes the coordinate constant.
    """
    p, q = _endpoints(p, q)
    C = counterexample_coefficient(p, q)
    d = np.abs(q - p)
    return (d == 0.0) | (C <= d)


def make_power_path(p, q, exponents, name=None) -> PathSpec:
    """gamma_k(t) = p_k + (q_k - p_k) t^(e_k), each exponent e_k >= 1."""
    p, q = _endpoints(p, q)
    e = np.array(exponents, dtype=float).reshape(-1)
    if e.shape != p.shape:
        raise DimensionMismatch(f"{len(e)} exponents for a {len(p)}-dimensional path")
    if np.any(~(e >= 1.0)):
        raise InvalidParameter(f"exponents must be >= 1, got {e.tolist()}")
    e.flags.writeable = False
    return PathSpec("power_arc", p, q, {"exponents": e}, name)


def make_power_arc(k: float, name=None) -> PathSpec:
    """The curve (t, t^k) from (0, 0) to (1, 1); k = 1 is the diagonal."""
    if not k >= 1:
        raise InvalidParameter(f"power arc exponent must be >= 1, got {k!r}")
    return make_power_path((0.0, 0.0), (1.0, 1.0), (1.0, k), name)


def _knot_data(p, knots, points):
    knots = np.array(knots, dtype=float).reshape(-1)
    pts = np.array(points, dtype=float).reshape(len(knots), -1) if len(knots) else np.zeros((0, len(p)))
    if pts.shape[1] != len(p):
        raise DimensionMismatch("knot points must match the path dimension")
    if len(knots) and (knots[0] <= 0.0 or knots[-1] >= 1.0 or np.any(np.diff(knots) <= 0)):
        raise InvalidParameter("knots must be strictly increasing inside (0, 1)")
    return knots, pts


def make_piecewise_linear(p, q, knots, points, name=None) -> PathSpec:
    """Polyline through ``points`` at parameters ``knots``; one-sided slopes at knots."""
    p, q = _endpoints(p, q)
    knots, pts = _knot_data(p, knots, points)
    return PathSpec("piecewise_linear", p, q, {"knots": tuple(knots.tolist()), "points": pts}, name)


def make_pchip(p, q, knots, points, name=None) -> PathSpec:
    """C^1 monotonicity-preserving cubic through the knot points (scipy PCHIP)."""
    p, q = _endpoints(p, q)
    knots, pts = _knot_data(p, knots, points)
    grid = np.concatenate([[0.0], knots, [1.0]])
    vals = np.vstack([p, pts, q])
    spline = PchipInterpolator(grid, vals, axis=0)
    params = {"knots": tuple(knots.tolist()), "points": pts, "_spline": spline}
    return PathSpec("pchip", p, q, params, name)


# ---------------------------------------------------------------------------
# Validators


@dataclass
class MonotonicityReport:
    direction: list[str]
    strict: list[bool]
    samples_used: int

    @property
    def monotonic(self) -> bool:
        return "non_monotonic" not in self.direction

    def strictly_monotonic(self, coords=None) -> bool:
        coords = range(len(self.direction)) if coords is None else coords
        return all(self.direction[k] in ("increasing", "decreasing") and self.strict[k] for k in coords)

    def to_dict(self) -> dict:
        return {"direction": list(self.direction), "strict": list(self.strict), "samples_used": self.samples_used}


def check_monotonic(path: PathSpec, grid_size: int = 1001) -> MonotonicityReport:
    """Classify each coordinate from sampled derivative signs.

    A coordinate is non_monotonic iff its sampled slope takes both signs
    beyond ``SLOPE_TOL``.  ``strict`` requires every increment between
    consecutive grid values to have the coordinate's sign, so isolated
    stationary points (t^2 at 0) still count as strict.
    """
    if grid_size < 2:
        raise InvalidParameter("grid_size must be >= 2")
    ts = np.linspace(0.0, 1.0, grid_size)
    D = path.derivatives(ts)
    X = path.points(ts)
    steps = np.diff(X, axis=0)
    direction, strict = [], []
    for k in range(path.dim):
        up = bool(np.any(D[:, k] > SLOPE_TOL))
        down = bool(np.any(D[:, k] < -SLOPE_TOL))
        if up and down:
            direction.append("non_monotonic")
            strict.append(False)
        elif up:
            direction.append("increasing")
            strict.append(bool(np.all(steps[:, k] > 0)))
        elif down:
            direction.append("decreasing")
            strict.append(bool(np.all(steps[:, k] < 0)))
        else:
            direction.append("constant")
            strict.append(False)
    return MonotonicityReport(direction, strict, grid_size)


def check_endpoints(path: PathSpec, p, q, tol: float) -> bool:
    p, q = _endpoints(p, q)
    if len(p) != path.dim:
        raise DimensionMismatch(f"path has dimension {path.dim}, endpoints have {len(p)}")
    ends = path.points([0.0, 1.0])
    return bool(np.max(np.abs(ends[0] - p)) <= tol and np.max(np.abs(ends[1] - q)) <= tol)


# ---------------------------------------------------------------------------
# JSON specs


def path_spec_errors(spec: Any, dim: int | None = None) -> list[str]:
    if not isinstance(spec, dict):
        return ["path spec must be a JSON object"]
    kind = spec.get("kind")
    if kind not in PATH_KINDS:
        return [f"kind must be one of {list(PATH_KINDS)}, got {kind!r}"]
    params = spec.get("params", {})
    if not isinstance(params, dict):
        return ["params must be a JSON object"]
    errors = []
    default_ends = kind == "power_arc" and "k" in params
    p, q = spec.get("p"), spec.get("q")
    if default_ends and p is None and q is None:
        p, q = [0.0, 0.0], [1.0, 1.0]
    ok = True
    for name, v in (("p", p), ("q", q)):
        if not (isinstance(v, list) and v and all(_is_num(x) for x in v)):
            errors.append(f"{name} must be a non-empty list of numbers")
            ok = False
    if ok and len(p) != len(q):
        errors.append(f"DimensionMismatch: p has {len(p)} coordinates, q has {len(q)}")
        ok = False
    n = len(p) if ok else None
    if n is not None and dim is not None and n != dim:
        errors.append(f"DimensionMismatch: path dimension {n} does not match field dimension {dim}")
    if kind == "counterexample_quadratic" and n is not None and n != 2:
        errors.append(f"DimensionMismatch: counterexample path needs dimension 2, got {n}")
    if kind == "power_arc":
        if "k" in params:
            if not (_is_num(params["k"]) and params["k"] >= 1):
                errors.append("power_arc: params.k must be a number >= 1")
            if n is not None and n != 2:
                errors.append("DimensionMismatch: power_arc with params.k is 2-dimensional")
        else:
            e = params.get("exponents")
            if not (isinstance(e, list) and all(_is_num(x) and x >= 1 for x in e)):
                errors.append("power_arc: params.exponents must be a list of numbers >= 1")
            elif n is not None and len(e) != n:
                errors.append(f"DimensionMismatch: {len(e)} exponents for dimension {n}")
    if kind in ("piecewise_linear", "pchip"):
        knots, pts = params.get("knots", []), params.get("points", [])
        if not (isinstance(knots, list) and all(_is_num(x) for x in knots)):
            errors.append(f"{kind}: params.knots must be a list of numbers")
        elif any(not 0 < x < 1 for x in knots) or any(b <= a for a, b in zip(knots, knots[1:])):
            errors.append(f"{kind}: knots must be strictly increasing inside (0, 1)")
        if not isinstance(pts, list) or not isinstance(knots, list) or len(pts) != len(knots):
            errors.append(f"{kind}: params.points must list one point per knot")
        elif n is not None and any(not (isinstance(x, list) and len(x) == n and all(_is_num(v) for v in x)) for x in pts):
            errors.append(f"DimensionMismatch: {kind} knot points must have {n} numeric coordinates")
    return errors


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def path_from_spec(spec: dict, dim: int | None = None) -> PathSpec:
    errors = path_spec_errors(spec, dim)
    if errors:
        raise SpecParseError(errors)
    kind, params, name = spec["kind"], spec.get("params", {}), spec.get("name")
    p, q = spec.get("p"), spec.get("q")
    if kind == "straight":
        return make_straight(p, q, name)
    if kind == "counterexample_quadratic":
        return make_counterexample(p, q, name)
    if kind == "power_arc":
        if "k" in params:
            if p is None and q is None:
                return make_power_arc(params["k"], name)
            return make_power_path(p, q, (1.0, params["k"]), name)
        return make_power_path(p, q, params["exponents"], name)
    if kind == "piecewise_linear":
        return make_piecewise_linear(p, q, params.get("knots", []), params.get("points", []), name)
    return make_pchip(p, q, params.get("knots", []), params.get("points", []), name)


def path_to_spec(path: PathSpec) -> dict:
    if path.kind == "power_arc":
        params = {"exponents": path.params["exponents"].tolist()}
    elif path.kind in ("piecewise_linear", "pchip"):
        params = {"knots": list(path.params["knots"]), "points": path.params["points"].tolist()}
    else:
        params = {}
    spec = {"kind": path.kind, "p": path.p.tolist(), "q": path.q.tolist(), "params": params}
    if path.name is not None:
        spec["name"] = path.name
    return spec
