"""Weighted solution sum against the truncated integral, for growing truncation A."""

import argparse

from dhlab.analysis.integrals import circle_identity
from dhlab.problem import ProblemSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--X", type=float, default=500)
    ap.add_argument("--delta", type=float, default=0.04)
    ap.add_argument("--eta", type=float, default=5.0)
    ap.add_argument("--A", type=float, nargs="+", default=[250, 500, 1000, 2000])
    args = ap.parse_args()
    spec = ProblemSpec.build((1, "-sqrt2", "-sqrt3", "-sqrt5"), "pi", args.X, args.delta,
                             overrides={"eta": args.eta})
    print("A,weighted_sum,integral,discrepancy,allowance,nodes")
    for A in args.A:
        r = circle_identity(spec, A)
        print(f"{r.A:.6g},{r.weighted_sum:.17g},{r.integral:.17g},{r.discrepancy:.3e},"
              f"{r.allowance:.3e},{r.nodes}")


if __name__ == "__main__":
    main()
