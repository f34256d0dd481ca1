"""Completeness residuals for random ReLU networks on straight and power paths.

For each seed a network is drawn, then refine doubles midpoint nodes until
the residual drops below --tol.  Reports the node count reached per path.
"""
import argparse
import sys

import numpy as np

from pathgrad import make_power_path, make_relu_field, make_straight, random_relu_net, refine


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nets", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-3)
    ap.add_argument("--max-nodes", type=int, default=65536)
    args = ap.parse_args(argv)

    rng = np.random.Generator(np.random.PCG64(args.seed))
    failures = 0
    for s in range(args.nets):
        n = int(rng.integers(2, 9))
        layers = [n, *map(int, rng.integers(1, 17, int(rng.integers(1, 4)))), 1]
        f = make_relu_field(random_relu_net(layers, args.seed + s))
        p, q = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
        line = make_straight(p, q)
        arc = make_power_path(p, q, rng.uniform(1, 4, n))
        cells = []
        for path in (line, arc):
            r = refine(f, path, args.tol, args.max_nodes, raise_on_failure=False)
            failures += not r.converged
            cells.append(f"{path.kind}: nodes={r.quadrature.nodes:<6} residual={r.residual:+.2e}")
        print(f"net {s:3d} {layers}  " + "  ".join(cells))
    print(f"{failures} of {2 * args.nets} runs missed tol {args.tol}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
