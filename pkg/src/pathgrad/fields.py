"""Lipschitz scalar fields with analytic gradients.

Every field exposes batched ``*_batch`` methods working on an ``(m, n)``
array of points; the single-point methods are thin wrappers.  At points of
nondifferentiability the gradient is a fixed subgradient selection:

* max-type fields take the gradient of the lowest-index attaining branch,
* ReLU uses derivative 0 at 0,
* the witness ramp uses the indicator of the *open* interval (alpha, beta),
* the Cantor field returns 0 everywhere.

``is_differentiable_at`` reports whether that selection was needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .errors import InvalidBreakpoints, InvalidParameter, InvalidStep, OutOfDomain, SpecParseError

KINDS = ("linear", "bilinear_product", "max_coord", "relu_net", "witness", "cantor_1d")
ACTIVATIONS = ("relu", "max_pool_final")
DEFAULT_DOMAIN = (-10.0, 10.0)
DEFAULT_CANTOR_DEPTH = 24


# ---------------------------------------------------------------------------
# ReLU networks


@dataclass(frozen=True, eq=False)
class ReluNetSpec:
    """Fully connected ReLU network ``R^n -> R``.

    ``weights[k]`` has shape ``(out_k, in_k)``.  With ``activation="relu"``
    every layer, the output layer included, is followed by a ReLU.  With
    ``"max_pool_final"`` the hidden layers use ReLU and the output is the
    max over the last layer's units.
    """

    weights: tuple
    biases: tuple
    activation: str = "relu"

    def __post_init__(self):
        errors = relu_shape_errors(self.weights, self.biases, self.activation)
        if errors:
            raise SpecParseError(errors)
        object.__setattr__(self, "weights", tuple(np.asarray(w, dtype=float) for w in self.weights))
        object.__setattr__(self, "biases", tuple(np.asarray(b, dtype=float) for b in self.biases))

    @property
    def layer_widths(self) -> list[int]:
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[1]

    def _forward(self, X):
        """Return (output, preactivations) for a batch ``X`` of shape (m, n)."""
        pre = []
        h = X
        last = len(self.weights) - 1
        for k, (W, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ W.T + b
            pre.append(z)
            if k == last and self.activation == "max_pool_final":
                return z.max(axis=1), pre
            h = np.maximum(z, 0.0)
        return h[:, 0], pre

    def evaluate_batch(self, X):
        return self._forward(X)[0]

    def gradient_batch(self, X):
        _, pre = self._forward(X)
        last = len(self.weights) - 1
        if self.activation == "max_pool_final":
            z = pre[last]
            delta = np.zeros_like(z)
            delta[np.arange(len(z)), np.argmax(z, axis=1)] = 1.0
        else:
            delta = (pre[last] > 0).astype(float)
        for k in range(last, 0, -1):
            delta = (delta @ self.weights[k]) * (pre[k - 1] > 0)
        return delta @ self.weights[0]

    def kink_mask(self, X):
        """True where some ReLU sits exactly at 0 or the final max is tied."""
        _, pre = self._forward(X)
        last = len(self.weights) - 1
        hit = np.zeros(len(X), dtype=bool)
        for k, z in enumerate(pre):
            if k == last and self.activation == "max_pool_final":
                top = z.max(axis=1, keepdims=True)
                hit |= (z == top).sum(axis=1) > 1
            else:
                hit |= (z == 0.0).any(axis=1)
        return hit

    def preactivations(self, x) -> list[np.ndarray]:
        return [z[0] for z in self._forward(np.atleast_2d(np.asarray(x, dtype=float)))[1]]

    def lipschitz_bound(self) -> float:
        # ReLU and max are 1-Lipschitz, so the product of spectral norms bounds K
        return float(np.prod([np.linalg.norm(W, 2) for W in self.weights]))


def relu_shape_errors(weights, biases, activation="relu") -> list[str]:
    errors = []
    if activation not in ACTIVATIONS:
        errors.append(f"activation must be one of {ACTIVATIONS}, got {activation!r}")
    if len(weights) == 0:
        return errors + ["relu_net needs at least one layer"]
    if len(weights) != len(biases):
        errors.append(f"{len(weights)} weight matrices but {len(biases)} bias vectors")
    prev = None
    for k, W in enumerate(weights):
        try:
            W = np.asarray(W, dtype=float)
        except (TypeError, ValueError):
            errors.append(f"layer {k}: weights are not a rectangular numeric matrix")
            prev = None
            continue
        if W.ndim != 2 or W.size == 0:
            errors.append(f"layer {k}: weights must be a non-empty 2-d matrix, got shape {W.shape}")
            prev = None
            continue
        if prev is not None and W.shape[1] != prev:
            errors.append(f"layer {k}: weights have {W.shape[1]} columns, previous layer has width {prev}")
        if k < len(biases):
            b = np.asarray(biases[k], dtype=float)
            if b.shape != (W.shape[0],):
                errors.append(f"layer {k}: bias shape {b.shape} does not match {W.shape[0]} rows")
        prev = W.shape[0]
    if prev is not None and activation == "relu" and prev != 1:
        errors.append(f"output layer must have width 1 for activation 'relu', got {prev}")
    return errors


def random_relu_net(layers: Sequence[int], seed: int, activation: str = "relu") -> ReluNetSpec:
    """Deterministic random network.

    PRNG: numpy PCG64 seeded with ``seed``; doubles come from
    ``Generator.random`` (``(next_uint64 >> 11) * 2**-53``).  For each layer
    the weight matrix is drawn row-major, then the bias vector.  Weights are
    ``(2u - 1) * sqrt(6 / fan_in)``, biases ``(2u - 1) * 0.1``.
    """
    layers = [int(w) for w in layers]
    if len(layers) < 2 or min(layers) < 1:
        raise InvalidParameter(f"layers must list at least two positive widths, got {layers}")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    weights, biases = [], []
    for fan_in, fan_out in zip(layers[:-1], layers[1:]):
        W = (2.0 * rng.random((fan_out, fan_in)) - 1.0) * math.sqrt(6.0 / fan_in)
        b = (2.0 * rng.random(fan_out) - 1.0) * 0.1
        weights.append(W)
        biases.append(b)
    return ReluNetSpec(tuple(weights), tuple(biases), activation)


# ---------------------------------------------------------------------------
# Cantor staircase


def cantor_value(x, depth: int = DEFAULT_CANTOR_DEPTH):
    """Depth-truncated Cantor function.

    Walks the ternary expansion of ``x`` for ``depth`` digits.  Landing
    strictly inside a removed middle third returns that plateau's value;
    otherwise the leftover fraction is interpolated linearly, which is
    within ``2**-depth`` of the true staircase.  Accepts floats or
    ``Fraction`` (exact arithmetic, e.g. ``Fraction(1, 3) -> 1/2``).
    """
    if depth < 1:
        raise InvalidParameter(f"depth must be >= 1, got {depth}")
    if not 0 <= x <= 1:
        raise OutOfDomain(f"cantor_value needs 0 <= x <= 1, got {x!r}")
    if isinstance(x, Fraction):
        value, scale, y = Fraction(0), Fraction(1, 2), x
    else:
        value, scale, y = 0.0, 0.5, float(x)
    for _ in range(depth):
        y3 = 3 * y
        if 1 < y3 < 2:
            return value + scale
        if y3 <= 1:
            y = y3
        else:
            value += scale
            y = y3 - 2
        scale /= 2
    return value + 2 * scale * y


def cantor_plateau_mask(x, depth: int = DEFAULT_CANTOR_DEPTH):
    """True where ``x`` lies strictly inside a middle third removed within ``depth`` steps."""
    y = np.array(x, dtype=float, copy=True)
    inside = np.zeros(y.shape, dtype=bool)
    for _ in range(depth):
        y3 = 3.0 * y
        inside |= (y3 > 1.0) & (y3 < 2.0)
        y = np.where(y3 <= 1.0, y3, y3 - 2.0)
    return inside


def cantor_plateau(x: float, depth: int = DEFAULT_CANTOR_DEPTH):
    """Removed open interval ``(lo, hi)`` containing ``x``, or None."""
    lo, width, y = 0.0, 1.0, float(x)
    for _ in range(depth):
        width /= 3.0
        y3 = 3.0 * y
        if 1.0 < y3 < 2.0:
            return lo + width, lo + 2.0 * width
        if y3 <= 1.0:
            y = y3
        else:
            lo += 2.0 * width
            y = y3 - 2.0
    return None


# ---------------------------------------------------------------------------
# Scalar fields


def _as_box(dim, lo, hi):
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (dim,)).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (dim,)).copy()
    if np.any(lo > hi):
        raise InvalidParameter("domain lower bound exceeds upper bound")
    lo.flags.writeable = False
    hi.flags.writeable = False
    return lo, hi


@dataclass(frozen=True, eq=False)
class ScalarField:
    """An n-variable Lipschitz field on the box ``[domain_lo, domain_hi]``.

    Build instances with the ``make_*`` constructors or :func:`field_from_spec`.
    """

    kind: str
    dim: int
    domain_lo: np.ndarray
    domain_hi: np.ndarray
    params: dict = field(default_factory=dict)
    lipschitz_bound: float | None = None
    name: str | None = None

    @property
    def id(self) -> str:
        return self.name or f"{self.kind}(n={self.dim})"

    # -- domain handling --------------------------------------------------

    def _points(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.dim:
            raise OutOfDomain(f"expected points of dimension {self.dim}, got {X.shape[1]}")
        bad = ~((X >= self.domain_lo) & (X <= self.domain_hi)).all(axis=1)
        if bad.any():
            raise OutOfDomain(f"point {X[np.argmax(bad)].tolist()} outside the domain box of {self.id}")
        return X

    def contains(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return ((X >= self.domain_lo) & (X <= self.domain_hi)).all(axis=1)

    # -- batched evaluation ----------------------------------------------

    def evaluate_batch(self, X) -> np.ndarray:
        X = self._points(X)
        p = self.params
        if self.kind == "linear":
            return X @ p["coefficients"] + p["intercept"]
        if self.kind == "bilinear_product":
            i, j = p["pair"]
            return X[:, i] * X[:, j]
        if self.kind == "max_coord":
            return X.max(axis=1)
        if self.kind == "relu_net":
            return p["net"].evaluate_batch(X)
        if self.kind == "witness":
            i, j = p["pair"]
            return _ramp(X[:, i], p["alpha"], p["beta"]) * _ramp(X[:, j], p["alpha"], p["beta"])
        if self.kind == "cantor_1d":
            return np.array([cantor_value(float(x), p["depth"]) for x in X[:, 0]])
        raise InvalidParameter(f"unknown field kind {self.kind!r}")

    def gradient_batch(self, X) -> np.ndarray:
        X = self._points(X)
        p = self.params
        m = len(X)
        G = np.zeros((m, self.dim))
        if self.kind == "linear":
            G[:] = p["coefficients"]
        elif self.kind == "bilinear_product":
            i, j = p["pair"]
            G[:, i] += X[:, j]
            G[:, j] += X[:, i]
        elif self.kind == "max_coord":
            G[np.arange(m), np.argmax(X, axis=1)] = 1.0
        elif self.kind == "relu_net":
            G = p["net"].gradient_batch(X)
        elif self.kind == "witness":
            i, j = p["pair"]
            a, b = p["alpha"], p["beta"]
            G[:, i] = _ramp_slope(X[:, i], a, b) * _ramp(X[:, j], a, b)
            G[:, j] = _ramp_slope(X[:, j], a, b) * _ramp(X[:, i], a, b)
        elif self.kind == "cantor_1d":
            pass
        else:
            raise InvalidParameter(f"unknown field kind {self.kind!r}")
        return G

    def differentiable_batch(self, X) -> np.ndarray:
        X = self._points(X)
        p = self.params
        if self.kind in ("linear", "bilinear_product"):
            return np.ones(len(X), dtype=bool)
        if self.kind == "max_coord":
            return (X == X.max(axis=1, keepdims=True)).sum(axis=1) == 1
        if self.kind == "relu_net":
            return ~p["net"].kink_mask(X)
        if self.kind == "witness":
            i, j = p["pair"]
            brk = np.array([p["alpha"], p["beta"]])
            return ~(np.isin(X[:, i], brk) | np.isin(X[:, j], brk))
        if self.kind == "cantor_1d":
            return cantor_plateau_mask(X[:, 0], p["depth"])
        raise InvalidParameter(f"unknown field kind {self.kind!r}")

    def piece_signature_batch(self, X):
        """Integer label of the smooth piece containing each point, or None.

        Points with equal rows lie on the same piece of a piecewise-smooth
        field; the Cantor field has no finite piece structure and returns None.
        """
        X = self._points(X)
        p = self.params
        if self.kind == "max_coord":
            return np.argmax(X, axis=1)[:, None]
        if self.kind == "relu_net":
            net = p["net"]
            _, pre = net._forward(X)
            cols = []
            for k, z in enumerate(pre):
                if k == len(pre) - 1 and net.activation == "max_pool_final":
                    cols.append(np.argmax(z, axis=1)[:, None])
                else:
                    cols.append((z > 0).astype(int))
            return np.hstack(cols)
        if self.kind == "witness":
            i, j = p["pair"]
            brk = [p["alpha"], p["beta"]]
            return np.column_stack([np.digitize(X[:, i], brk), np.digitize(X[:, j], brk)])
        if self.kind in ("linear", "bilinear_product"):
            return np.zeros((len(X), 1), dtype=int)
        return None

    # -- single points ----------------------------------------------------

    def evaluate(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if self.kind == "cantor_1d":
            self._points(x)
            return float(cantor_value(float(x.reshape(-1)[0]), self.params["depth"]))
        return float(self.evaluate_batch(x)[0])

    def gradient(self, x) -> np.ndarray:
        return self.gradient_batch(x)[0]

    def is_differentiable_at(self, x) -> bool:
        return bool(self.differentiable_batch(x)[0])

    def finite_diff_gradient(self, x, h: float = 1e-6) -> np.ndarray:
        """Central differences ``(F(x + h e_i) - F(x - h e_i)) / 2h``."""
        if not h > 0:
            raise InvalidStep(f"step must be positive, got {h!r}")
        x = self._points(x)[0]
        E = np.eye(self.dim) * h
        plus = self.evaluate_batch(x + E)
        minus = self.evaluate_batch(x - E)
        return (plus - minus) / (2.0 * h)


def _ramp(x, alpha, beta):
    return np.clip(x - alpha, 0.0, beta - alpha)


def _ramp_slope(x, alpha, beta):
    return ((x > alpha) & (x < beta)).astype(float)


# module-level spellings of the field operations
def evaluate(f: ScalarField, x) -> float:
    return f.evaluate(x)


def gradient(f: ScalarField, x) -> np.ndarray:
    return f.gradient(x)


def is_differentiable_at(f: ScalarField, x) -> bool:
    return f.is_differentiable_at(x)


def finite_diff_gradient(f: ScalarField, x, h: float) -> np.ndarray:
    return f.finite_diff_gradient(x, h)


# ---------------------------------------------------------------------------
# Constructors


def _box_bound(lo, hi):
    return float(np.max(np.maximum(np.abs(lo), np.abs(hi))))


def make_linear(coefficients, intercept=0.0, domain=DEFAULT_DOMAIN, name=None) -> ScalarField:
    c = np.asarray(coefficients, dtype=float)
    lo, hi = _as_box(len(c), *domain)
    params = {"coefficients": c, "intercept": float(intercept)}
    return ScalarField("linear", len(c), lo, hi, params, float(np.linalg.norm(c)), name)


def make_bilinear(dim=2, pair=(0, 1), domain=DEFAULT_DOMAIN, name=None) -> ScalarField:
    i, j = _check_pair(dim, pair)
    lo, hi = _as_box(dim, *domain)
    # |grad| = sqrt(x_i^2 + x_j^2) <= sqrt(2) * max|x| on the box
    K = math.sqrt(2.0) * _box_bound(lo, hi)
    return ScalarField("bilinear_product", dim, lo, hi, {"pair": (i, j)}, K, name)


def make_max(dim=2, domain=DEFAULT_DOMAIN, name=None) -> ScalarField:
    if dim < 1:
        raise InvalidParameter("dim must be positive")
    lo, hi = _as_box(dim, *domain)
    return ScalarField("max_coord", dim, lo, hi, {}, 1.0, name)


def make_relu_field(net: ReluNetSpec, domain=DEFAULT_DOMAIN, name=None, random_spec=None) -> ScalarField:
    lo, hi = _as_box(net.input_dim, *domain)
    params = {"net": net}
    if random_spec is not None:
        params["random_relu"] = dict(random_spec)
    return ScalarField("relu_net", net.input_dim, lo, hi, params, net.lipschitz_bound(), name)


def make_witness_field(dim, i, j, alpha, beta, domain=None, name=None) -> ScalarField:
    """``F(x) = g(x_i) g(x_j)`` with the clamped ramp ``g`` rising on [alpha, beta]."""
    i, j = _check_pair(dim, (i, j))
    alpha, beta = float(alpha), float(beta)
    if not alpha < beta:
        raise InvalidBreakpoints(f"need alpha < beta, got alpha={alpha!r}, beta={beta!r}")
    if domain is None:
        domain = DEFAULT_DOMAIN
    lo, hi = _as_box(dim, *domain)
    for k in (i, j):
        if lo[k] > alpha or hi[k] < beta:
            raise InvalidBreakpoints(f"domain of coordinate {k} does not contain [{alpha}, {beta}]")
    K = (beta - alpha) * math.sqrt(2.0)
    return ScalarField("witness", dim, lo, hi, {"pair": (i, j), "alpha": alpha, "beta": beta}, K, name)


def make_cantor(depth=DEFAULT_CANTOR_DEPTH, name=None) -> ScalarField:
    if int(depth) < 1:
        raise InvalidParameter(f"depth must be >= 1, got {depth}")
    lo, hi = _as_box(1, 0.0, 1.0)
    # the staircase is not Lipschitz, so no bound is declared
    return ScalarField("cantor_1d", 1, lo, hi, {"depth": int(depth)}, None, name)


def _check_pair(dim, pair):
    i, j = (int(k) for k in pair)
    if i == j or not (0 <= i < dim and 0 <= j < dim):
        raise InvalidParameter(f"pair {pair} must be two distinct indices below {dim}")
    return i, j


def symmetric_pairs(f: ScalarField) -> list[tuple[int, int]]:
    """Coordinate pairs in which ``f`` is symmetric by construction."""
    if f.kind in ("bilinear_product", "witness"):
        return [tuple(f.params["pair"])]
    if f.kind == "max_coord":
        return [(i, j) for i in range(f.dim) for j in range(i + 1, f.dim)]
    return []


# ---------------------------------------------------------------------------
# JSON specs


def _domain_errors(domain):
    if not (isinstance(domain, (list, tuple)) and len(domain) == 2):
        return ["domain must be a [lo, hi] pair"]
    try:
        lo = np.asarray(domain[0], dtype=float)
        hi = np.asarray(domain[1], dtype=float)
    except (TypeError, ValueError):
        return ["domain bounds must be numbers or numeric lists"]
    if np.any(~np.isfinite(lo)) or np.any(~np.isfinite(hi)):
        return ["domain bounds must be finite"]
    try:
        if np.any(lo > hi):
            return ["domain lower bound exceeds upper bound"]
    except ValueError:
        return ["domain lo/hi shapes do not match"]
    return []


def _pair_errors(params, dim):
    pair = params.get("pair", [0, 1])
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2 and all(isinstance(k, int) for k in pair)):
        return ["params.pair must be two integer indices"]
    i, j = pair
    if i == j or not (0 <= i < dim and 0 <= j < dim):
        return [f"params.pair {list(pair)} must be two distinct indices below dim={dim}"]
    return []


def field_spec_errors(spec: Any) -> list[str]:
    """Every validation problem with a field spec dict (empty if valid)."""
    if not isinstance(spec, dict):
        return ["field spec must be a JSON object"]
    if "random_relu" in spec and "kind" not in spec:
        spec = {"kind": "relu_net", "params": {"random_relu": spec["random_relu"]}, **{k: v for k, v in spec.items() if k != "random_relu"}}
    errors = []
    kind = spec.get("kind")
    if kind not in KINDS:
        return [f"kind must be one of {list(KINDS)}, got {kind!r}"]
    params = spec.get("params", {})
    if not isinstance(params, dict):
        return ["params must be a JSON object"]
    dim = spec.get("dim")
    if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool) or dim < 1):
        errors.append(f"dim must be a positive integer, got {dim!r}")
        dim = None
    if "domain" in spec:
        errors += _domain_errors(spec["domain"])

    if kind == "linear":
        c = params.get("coefficients")
        if not (isinstance(c, list) and c and all(_is_num(v) for v in c)):
            errors.append("linear: params.coefficients must be a non-empty list of numbers")
        elif dim is not None and len(c) != dim:
            errors.append(f"linear: {len(c)} coefficients for dim={dim}")
        if not _is_num(params.get("intercept", 0.0)):
            errors.append("linear: params.intercept must be a number")
    elif kind in ("bilinear_product", "max_coord", "witness"):
        d = dim if dim is not None else 2
        if kind != "max_coord":
            errors += _pair_errors(params, d)
        if kind == "witness":
            a, b = params.get("alpha"), params.get("beta")
            if not (_is_num(a) and _is_num(b)):
                errors.append("witness: params.alpha and params.beta must be numbers")
            elif not a < b:
                errors.append(f"witness: need alpha < beta, got {a} >= {b}")
    elif kind == "relu_net":
        if "random_relu" in params:
            r = params["random_relu"]
            if not isinstance(r, dict):
                errors.append("random_relu must be an object")
            else:
                layers = r.get("layers")
                if not (isinstance(layers, list) and len(layers) >= 2 and all(isinstance(w, int) and w >= 1 for w in layers)):
                    errors.append("random_relu.layers must list at least two positive integer widths")
                elif dim is not None and layers[0] != dim:
                    errors.append(f"random_relu.layers[0]={layers[0]} does not match dim={dim}")
                seed = r.get("seed")
                if not (isinstance(seed, int) and 0 <= seed < 2**64):
                    errors.append("random_relu.seed must be an unsigned 64-bit integer")
                if r.get("activation", "relu") not in ACTIVATIONS:
                    errors.append(f"random_relu.activation must be one of {list(ACTIVATIONS)}")
        else:
            W, B = params.get("weights"), params.get("biases")
            if not isinstance(W, list) or not isinstance(B, list):
                errors.append("relu_net: params.weights and params.biases must be lists")
            else:
                errors += ["relu_net: " + e for e in relu_shape_errors(W, B, params.get("activation", "relu"))]
                if not errors and dim is not None and np.asarray(W[0]).shape[1] != dim:
                    errors.append(f"relu_net: layer 0 takes {np.asarray(W[0]).shape[1]} inputs but dim={dim}")
    elif kind == "cantor_1d":
        depth = params.get("depth", DEFAULT_CANTOR_DEPTH)
        if not (isinstance(depth, int) and depth >= 1):
            errors.append("cantor_1d: params.depth must be a positive integer")
        if dim not in (None, 1):
            errors.append("cantor_1d: dim must be 1")
    return errors


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def field_from_spec(spec: dict) -> ScalarField:
    """Build a field from its JSON form, raising SpecParseError with all problems."""
    errors = field_spec_errors(spec)
    if errors:
        raise SpecParseError(errors)
    if "random_relu" in spec and "kind" not in spec:
        spec = {"kind": "relu_net", "params": {"random_relu": spec["random_relu"]}, **{k: v for k, v in spec.items() if k != "random_relu"}}
    kind, params = spec["kind"], spec.get("params", {})
    name = spec.get("name")
    try:
        if kind == "cantor_1d":
            return make_cantor(params.get("depth", DEFAULT_CANTOR_DEPTH), name=name)
        domain = tuple(spec.get("domain", DEFAULT_DOMAIN))
        if kind == "linear":
            return make_linear(params["coefficients"], params.get("intercept", 0.0), domain, name)
        dim = spec.get("dim", 2)
        if kind == "bilinear_product":
            return make_bilinear(dim, params.get("pair", (0, 1)), domain, name)
        if kind == "max_coord":
            return make_max(dim, domain, name)
        if kind == "witness":
            i, j = params.get("pair", (0, 1))
            return make_witness_field(dim, i, j, params["alpha"], params["beta"], domain, name)
        if "random_relu" in params:
            r = params["random_relu"]
            net = random_relu_net(r["layers"], r["seed"], r.get("activation", "relu"))
            return make_relu_field(net, domain, name, random_spec=r)
        net = ReluNetSpec(tuple(params["weights"]), tuple(params["biases"]), params.get("activation", "relu"))
        return make_relu_field(net, domain, name)
    except (InvalidParameter, ValueError) as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError([str(exc)]) from exc


def _domain_to_json(f: ScalarField):
    lo, hi = f.domain_lo, f.domain_hi
    if np.all(lo == lo[0]) and np.all(hi == hi[0]):
        return [float(lo[0]), float(hi[0])]
    return [lo.tolist(), hi.tolist()]


def field_to_spec(f: ScalarField) -> dict:
    """JSON-ready spec that rebuilds ``f`` via :func:`field_from_spec`."""
    p = f.params
    if f.kind == "linear":
        params = {"coefficients": p["coefficients"].tolist(), "intercept": p["intercept"]}
    elif f.kind == "bilinear_product":
        params = {"pair": list(p["pair"])}
    elif f.kind == "max_coord":
        params = {}
    elif f.kind == "witness":
        params = {"pair": list(p["pair"]), "alpha": p["alpha"], "beta": p["beta"]}
    elif f.kind == "cantor_1d":
        params = {"depth": p["depth"]}
    elif "random_relu" in p:
        params = {"random_relu": dict(p["random_relu"])}
    else:
        net = p["net"]
        params = {
            "weights": [W.tolist() for W in net.weights],
            "biases": [b.tolist() for b in net.biases],
            "activation": net.activation,
        }
    spec = {"kind": f.kind, "dim": f.dim, "domain": _domain_to_json(f), "params": params}
    if f.name is not None:
        spec["name"] = f.name
    return spec
