"""Negative control: the Cantor staircase is continuous but not Lipschitz.

Its derivative vanishes almost everywhere, so every quadrature rule
attributes zero while F(1) - F(0) = 1.  Refinement does not help.
"""
import argparse
import sys

from pathgrad import QuadratureSpec, integrated_gradients, make_cantor, make_straight


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=24)
    args = ap.parse_args(argv)

    f = make_cantor(args.depth)
    line = make_straight([0.0], [1.0])
    print(f"{'rule':>15} {'nodes':>7} {'sum':>10} {'residual':>10}")
    for rule in ("midpoint", "trapezoid", "gauss_legendre"):
        for n in (16, 256, 1024) if rule == "gauss_legendre" else (16, 256, 4096, 65536):
            r = integrated_gradients(f, line, QuadratureSpec(rule, n))
            print(f"{rule:>15} {n:>7} {r.sum:>10.3g} {r.residual:>10.3g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
