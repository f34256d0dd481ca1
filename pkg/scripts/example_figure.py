"""Attributions of F = x1 x2 along power arcs (t, t^k) from (0, 0) to (1, 1).

Prints IG_1, IG_2 next to the closed forms 1/(k+1) and k/(k+1); with --out
the table is also written as CSV.
"""
import argparse
import csv
import sys

from pathgrad import QuadratureSpec, integrated_gradients, make_bilinear, make_power_arc


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--exponents", type=float, nargs="+", default=[1, 1.5, 2, 3, 5, 10])
    ap.add_argument("--nodes", type=int, default=32)
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    f = make_bilinear()
    rows = []
    for k in args.exponents:
        r = integrated_gradients(f, make_power_arc(k), QuadratureSpec("gauss_legendre", args.nodes))
        rows.append([k, r.attributions[0], r.attributions[1], 1 / (k + 1), k / (k + 1), r.residual])
    header = ["k", "IG_1", "IG_2", "IG_1_exact", "IG_2_exact", "residual"]
    print("  ".join(f"{h:>12}" for h in header))
    for row in rows:
        print("  ".join(f"{v:12.6g}" for v in row))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
