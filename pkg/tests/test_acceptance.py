"""Acceptance criteria, one test each.

Every test prints a PASS/FAIL line (also collected into the terminal
summary).  Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python tests/test_acceptance.py``.
"""
import time
from contextlib import contextmanager

import numpy as np
import pytest

from pathgrad import engine, fields, paths, witness
from pathgrad.engine import QuadratureSpec, integrated_gradients, refine
from pathgrad.errors import NotConverged

from conftest import ACCEPTANCE_LINES, catalog, random_monotone_path, uniform_points

pytestmark = pytest.mark.acceptance


@contextmanager
def criterion(number, title, limit):
    """Time the block, enforce the runtime limit and report one line."""
    start = time.perf_counter()
    detail = {}
    try:
        yield detail
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    except BaseException as exc:
        line = f"criterion {number} FAIL  {title}: {exc}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    extra = "  ".join(f"{k}={v}" for k, v in detail.items())
    line = f"criterion {number} PASS  {title} ({elapsed:.2f}s) {extra}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)


def test_criterion_1_example_power_arc():
    with criterion(1, "product on the quadratic arc", 1.0) as out:
        r = integrated_gradients(fields.make_bilinear(), paths.make_power_arc(2), QuadratureSpec("gauss_legendre", 32))
        assert abs(r.attributions[0] - 1 / 3) <= 1e-9
        assert abs(r.attributions[1] - 2 / 3) <= 1e-9
        assert abs(r.sum - 1.0) <= 1e-12
        assert r.attributions[0] < r.attributions[1]
        out.update(IG=[round(float(a), 12) for a in r.attributions], sum=r.sum)


def _symmetric_endpoints(rng, dim, i, j):
    p, q = rng.uniform(-5, 5, dim), rng.uniform(-5, 5, dim)
    p[j], q[j] = p[i], q[i]
    return p, q


def test_criterion_2_straight_line_symmetry():
    # max_coord selects the lowest tied index, so a straight path along the
    # tie set x_i = x_j = max is excluded: pairs must keep every node differentiable
    quad = QuadratureSpec("gauss_legendre", 32)
    with criterion(2, "straight-line symmetry", 5.0) as out:
        rng = np.random.default_rng(2)
        worst, counted = 0.0, {}
        for kind, f in catalog().items():
            pairs = fields.symmetric_pairs(f)
            if not pairs:
                continue
            i, j = pairs[0]
            n = drawn = 0
            while n < 100:
                drawn += 1
                assert drawn < 10_000, f"{kind}: too few admissible endpoint pairs"
                p, q = _symmetric_endpoints(rng, f.dim, i, j)
                line = paths.make_straight(p, q)
                r = integrated_gradients(f, line, quad.with_splits(engine.kink_crossings(f, line)))
                if r.nondiff_nodes:
                    continue
                gap = abs(engine.symmetry_gap(r, i, j))
                assert gap <= 1e-9, f"{kind} p={p} q={q} gap={gap}"
                worst = max(worst, gap)
                n += 1
            counted[kind] = n
        assert set(counted) >= {"bilinear_product", "max_coord", "witness"}
        out.update(fields=",".join(counted), worst_gap=f"{worst:.1e}")


def _random_net(rng, seed):
    n = int(rng.integers(2, 9))
    hidden = [int(w) for w in rng.integers(1, 17, int(rng.integers(1, 4)))]
    if seed % 2:
        return fields.random_relu_net([n, *hidden, int(rng.integers(2, 5))], seed, "max_pool_final")
    return fields.random_relu_net([n, *hidden, 1], seed)


def _power(rng, p, q):
    return paths.make_power_path(p, q, rng.uniform(1.0, 4.0, len(p)))


def test_criterion_3_completeness_on_relu_nets():
    with criterion(3, "completeness on 100 ReLU nets", 60.0) as out:
        rng = np.random.default_rng(3)
        worst_residual = worst_spread = 0.0
        for seed in range(100):
            f = fields.make_relu_field(_random_net(rng, seed))
            p, q = rng.uniform(-1, 1, f.dim), rng.uniform(-1, 1, f.dim)
            for path in (paths.make_straight(p, q), _power(rng, p, q)):
                r = refine(f, path, 1e-3, max_nodes=65536)
                worst_residual = max(worst_residual, abs(r.residual))
            sums = []
            for path in [paths.make_straight(p, q)] + [_power(rng, p, q) for _ in range(4)]:
                splits = engine.kink_crossings(f, path)
                sums.append(refine(f, path, 1e-7, 65536, rule="gauss_legendre", start=8, split_at=splits).sum)
            spread = max(sums) - min(sums)
            assert spread <= 1e-6, f"net {seed}: sums {sums}"
            worst_spread = max(worst_spread, spread)
        out.update(worst_residual=f"{worst_residual:.1e}", worst_spread=f"{worst_spread:.1e}")


def test_criterion_4_cantor_breaks_completeness():
    with criterion(4, "Cantor staircase negative control", 1.0) as out:
        f = fields.make_cantor(24)
        line = paths.make_straight([0.0], [1.0])
        r = integrated_gradients(f, line, QuadratureSpec("midpoint", 1024))
        assert 0.95 <= engine.completeness_residual(r) <= 1.0
        with pytest.raises(NotConverged) as info:
            refine(f, line, 1e-3, 65536)
        assert info.value.report.converged is False
        out.update(residual=r.residual)


def test_criterion_5_witness_gaps():
    with criterion(5, "witness asymmetry", 10.0) as out:
        rng = np.random.default_rng(5)
        gaps = [witness.demonstrate_asymmetry(random_monotone_path(rng), 0, 1).gap for _ in range(50)]
        assert min(gaps) > 1e-6
        k2 = witness.demonstrate_asymmetry(paths.make_power_arc(2), 0, 1).gap
        k3 = witness.demonstrate_asymmetry(paths.make_power_arc(3), 0, 1).gap
        assert abs(k2 - 1 / 3) <= 1e-9
        assert abs(k3 - 1 / 2) <= 1e-9
        out.update(min_gap=f"{min(gaps):.2e}", k2=round(k2, 12), k3=round(k3, 12))


def test_criterion_6_counterexample_path():
    with criterion(6, "counterexample path", 5.0) as out:
        rng = np.random.default_rng(6)
        ts = rng.random(1000)
        for _ in range(20):
            a, b = rng.uniform(-5, 5, 2)
            g = paths.make_counterexample((a, a), (b, b))
            assert np.max(np.abs(g.points(ts) - paths.make_straight((a, a), (b, b)).points(ts))) == 0.0

        p, q = (0.0, 0.5), (1.0, 1.5)
        g = paths.make_counterexample(p, q)
        assert g.params["C"] == 0.5
        assert paths.check_monotonic(g).strictly_monotonic()
        grid = np.linspace(0.0, 1.0, 1001)
        sup = float(np.max(np.abs(g.points(grid) - paths.make_straight(p, q).points(grid))))
        assert sup > 0.1
        assert g(0.5)[0] == 0.375

        agree = 0
        for _ in range(1000):
            p, q = rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2)
            predicted = paths.counterexample_monotone_predicate(p, q)
            observed = np.array(paths.check_monotonic(paths.make_counterexample(p, q)).direction) != "non_monotonic"
            assert np.array_equal(predicted, observed), (p, q)
            agree += 1
        out.update(sup_deviation=sup, pairs=agree)


def _fd_admissible(f, X, h):
    """Points whose h-neighbourhood along each axis stays on one smooth piece."""
    if f.kind == "cantor_1d":
        keep = []
        for x in X[:, 0]:
            gap = fields.cantor_plateau(float(x), f.params["depth"])
            keep.append(gap is not None and gap[0] < x - h and x + h < gap[1])
        return np.array(keep)
    ok = f.differentiable_batch(X)
    sig = f.piece_signature_batch(X)
    if sig is None:
        return ok
    for k in range(f.dim):
        for s in (h, -h):
            Y = X.copy()
            Y[:, k] += s
            ok &= (f.piece_signature_batch(Y) == sig).all(axis=1)
    return ok


def test_criterion_7_gradient_oracle():
    h = 1e-6
    with criterion(7, "analytic gradient vs central differences", 5.0) as out:
        rng = np.random.default_rng(7)
        worst = 0.0
        for kind, f in catalog().items():
            # shrink by a hair so x +- h stays inside the box
            X = uniform_points(f, rng, 4000) * (1 - 1e-5) + (f.domain_lo + f.domain_hi) * 0.5e-5
            X = X[_fd_admissible(f, X, h)][:1000]
            assert len(X) == 1000, f"{kind}: only {len(X)} admissible points"
            for x in X:
                g = f.gradient(x)
                err = np.linalg.norm(g - f.finite_diff_gradient(x, h)) / max(np.linalg.norm(g), 1.0)
                assert err <= 1e-6, f"{kind} at {x}: relative error {err}"
                worst = max(worst, err)
        out.update(worst_relative=f"{worst:.1e}")


def test_criterion_8_midpoint_convergence_order():
    cases = [(fields.make_bilinear(), paths.make_power_arc(k)) for k in (2, 3, 5)]
    cases.append((fields.make_bilinear(), paths.make_counterexample((0.0, 0.5), (1.0, 1.5))))
    with criterion(8, "midpoint second-order convergence", 5.0) as out:
        worst = np.inf
        for f, path in cases:
            prev, n = None, 4
            while True:
                res = abs(integrated_gradients(f, path, QuadratureSpec("midpoint", n)).residual)
                if prev is not None and prev < 1e-3:
                    ratio = prev / res if res else np.inf
                    assert ratio >= 3.0, f"{path.id}: {prev:.3e} -> {res:.3e} at n={n}"
                    worst = min(worst, ratio)
                if res < 1e-10:
                    break
                prev, n = res, 2 * n
        out.update(worst_ratio=round(float(worst), 3))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
