import numpy as np
import pytest
from hypothesis import settings

from pathgrad import fields, paths

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def catalog(depth=fields.DEFAULT_CANTOR_DEPTH):
    """One instance of every field kind, keyed by kind."""
    return {
        "linear": fields.make_linear([2.0, -3.0, 0.5]),
        "bilinear_product": fields.make_bilinear(3, (0, 2)),
        "max_coord": fields.make_max(4),
        "relu_net": fields.make_relu_field(fields.random_relu_net([5, 16, 16, 1], 7)),
        "relu_net_maxpool": fields.make_relu_field(fields.random_relu_net([4, 12, 6], 11, "max_pool_final")),
        "witness": fields.make_witness_field(3, 0, 1, -0.5, 1.5),
        "cantor_1d": fields.make_cantor(depth),
    }


def uniform_points(f, rng, m):
    return f.domain_lo + rng.random((m, f.dim)) * (f.domain_hi - f.domain_lo)


def random_monotone_path(rng):
    """Strictly increasing, non-diagonal path in coordinates 0 and 1 with shared endpoints."""
    a = rng.uniform(-2, 0)
    b = a + rng.uniform(0.5, 3)
    if rng.random() < 0.5:
        e1, e2 = rng.uniform(1, 4, 2)
        while abs(e1 - e2) < 0.2:
            e2 = rng.uniform(1, 4)
        return paths.make_power_path((a, a), (b, b), (e1, e2))
    # monotone cubic through independently drawn increasing knot values per coordinate
    knots = np.sort(rng.uniform(0.15, 0.85, 3))
    pts = a + np.sort(rng.uniform(0.05, 0.95, (3, 2)), axis=0) * (b - a)
    return paths.make_pchip((a, a), (b, b), knots, pts)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
