import numpy as np
import pytest

from pathgrad import engine, fields, paths, witness
from pathgrad.errors import EndpointMismatch, NoViolation, NotMonotonic

from conftest import random_monotone_path


def test_violation_interval_examples():
    assert witness.violation_interval(paths.make_straight((0.3, 0.3), (2, 2)), 0, 1) is None
    iv = witness.violation_interval(paths.make_power_arc(2), 1, 0)
    assert (iv.u, iv.v, iv.alpha, iv.beta) == (0.0, 1.0, 0.0, 1.0)
    assert iv.swapped is False
    assert witness.violation_interval(paths.make_power_arc(2), 0, 1).swapped is True
    with pytest.raises(EndpointMismatch):
        witness.violation_interval(paths.make_counterexample((0, 0.5), (1, 1.5)), 0, 1)


def test_interior_interval_is_located():
    # gamma_1 - gamma_0 = 0.2 sin(2 pi t) changes sign at t = 0.5
    ts = np.linspace(0, 1, 41)[1:-1]
    pts = np.column_stack([ts, ts + 0.02 * np.sin(2 * np.pi * ts)])
    g = paths.make_pchip((0, 0), (1, 1), ts, pts)
    iv = witness.violation_interval(g, 0, 1)
    assert {round(iv.u, 6), round(iv.v, 6)} <= {0.0, 0.5, 1.0}
    assert iv.v - iv.u == pytest.approx(0.5, abs=1e-6)


def test_interval_maximality():
    rng = np.random.default_rng(8)
    for _ in range(20):
        g = random_monotone_path(rng)
        iv = witness.violation_interval(g, 0, 1)
        def d(t):
            x = g.points([t])[0]
            return x[1] - x[0]

        inside_sign = np.sign(d(0.5 * (iv.u + iv.v)))
        mid = abs(d(0.5 * (iv.u + iv.v)))
        assert mid > 0
        for t in (iv.u - 1e-6, iv.v + 1e-6):
            if 0 <= t <= 1:
                assert abs(d(t)) <= mid / 100 or np.sign(d(t)) != inside_sign
        ts = np.linspace(iv.u, iv.v, 202)[1:-1]
        assert np.all(np.sign([d(t) for t in ts]) == np.sign(d(0.5 * (iv.u + iv.v))))


def test_witness_gap_power_arcs():
    for k, expected in [(2, 1 / 3), (3, 1 / 2)]:
        res = witness.demonstrate_asymmetry(paths.make_power_arc(k), 0, 1)
        assert res.gap == pytest.approx(expected, abs=1e-9)
        assert (res.lagging, res.leading) == (1, 0)
        assert abs(res.report.residual) <= 1e-12


def test_witness_decreasing_path():
    # reversing the arc flips the sign of both attributions; the lagging coordinate is now the larger one
    g = paths.make_power_path((1, 1), (0, 0), (1, 2))
    res = witness.demonstrate_asymmetry(g, 0, 1)
    assert res.gap == pytest.approx(1 / 3, abs=1e-9)
    # 1 - t^2 stays above 1 - t, so coordinate 1 is the larger, lagging one
    assert res.interval.swapped is False
    assert res.lagging == 1


def test_witness_errors():
    with pytest.raises(NoViolation):
        witness.demonstrate_asymmetry(paths.make_straight((0, 0), (1, 1)), 0, 1)
    wiggle = paths.make_piecewise_linear((0, 0), (1, 1), [0.3, 0.6], [(0.5, 0.1), (0.2, 0.3)])
    with pytest.raises(NotMonotonic):
        witness.demonstrate_asymmetry(wiggle, 0, 1)


def test_witness_positivity_random_paths():
    rng = np.random.default_rng(50)
    for _ in range(50):
        g = random_monotone_path(rng)
        assert paths.check_monotonic(g).strictly_monotonic([0, 1])
        assert witness.demonstrate_asymmetry(g, 0, 1).gap > 1e-6


def test_witness_field_invariants():
    rng = np.random.default_rng(3)
    g = random_monotone_path(rng)
    iv = witness.violation_interval(g, 0, 1)
    f = witness.witness_for(g, 0, 1, iv)
    X = f.domain_lo + rng.random((2000, 2)) * (f.domain_hi - f.domain_lo)
    Y = f.domain_lo + rng.random((2000, 2)) * (f.domain_hi - f.domain_lo)
    assert np.all(np.abs(f.evaluate_batch(X) - f.evaluate_batch(Y))
                  <= f.lipschitz_bound * np.linalg.norm(X - Y, axis=1) + 1e-12)
    np.testing.assert_array_equal(f.evaluate_batch(X), f.evaluate_batch(X[:, ::-1]))
    for x in X[:200]:
        near_break = np.min(np.abs(x[:, None] - np.array([iv.alpha, iv.beta]))) < 1e-5
        if not near_break:
            np.testing.assert_allclose(f.finite_diff_gradient(x, 1e-6), f.gradient(x), rtol=1e-6, atol=1e-9)


def test_both_directions_of_equivalence():
    # diagonal path: no witness and zero gaps; bent path: witness with a positive gap
    diag = paths.make_power_path((0, 0), (1, 1), (2.5, 2.5))
    with pytest.raises(NoViolation):
        witness.demonstrate_asymmetry(diag, 0, 1)
    r = engine.integrated_gradients(fields.make_bilinear(), diag, engine.QuadratureSpec("gauss_legendre", 32))
    assert abs(engine.symmetry_gap(r, 0, 1)) <= 1e-9
    bent = paths.make_power_path((0, 0), (1, 1), (2.5, 2.0))
    assert witness.demonstrate_asymmetry(bent, 0, 1).gap > 1e-6


def test_json_record():
    import json
    rec = json.loads(witness.demonstrate_asymmetry(paths.make_power_arc(2), 0, 1).to_json())
    assert set(rec) >= {"interval", "gap", "attributions", "residual"}
    assert set(rec["interval"]) == {"u", "v", "alpha", "beta", "swapped"}
