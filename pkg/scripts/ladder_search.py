"""Solutions of the theorem-threshold inequality along the convergent ladder X = q^(9/5)."""

import argparse
import time

from dhlab.diophantine import ladder
from dhlab.problem import ProblemSpec
from dhlab.reals import parse_literal
from dhlab.search import TheoremThreshold, find_solutions

LAMS = (1, "-sqrt2", "-sqrt3", "-sqrt5")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-X", type=float, default=1e6)
    ap.add_argument("--min-q", type=int, default=41)
    ap.add_argument("--delta", type=float, default=0.04)
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    xi = parse_literal(str(LAMS[0])) / parse_literal(LAMS[1])
    print("q,X,solutions,best_p1,best_p2,best_p3,best_p4,best_form,threshold,seconds")
    for c, X in ladder(xi, 30, min_q=args.min_q):
        if X > args.max_X:
            break
        t0 = time.perf_counter()
        spec = ProblemSpec.build(LAMS, "pi", X, args.delta, eps=args.eps)
        recs = find_solutions(spec, TheoremThreshold(args.eps), threads=args.threads)
        dt = time.perf_counter() - t0
        if recs:
            b = recs[0]
            print(f"{c.q},{X:.6g},{len(recs)},{b.p1},{b.p2},{b.p3},{b.p4},{b.form_value:.3e},"
                  f"{b.threshold:.6f},{dt:.2f}")
        else:
            print(f"{c.q},{X:.6g},0,,,,,,,{dt:.2f}")


if __name__ == "__main__":
    main()
