"""sup V(alpha) over the minor arc on consecutive ladder points, normalized by X^(4/9)."""

import argparse

from dhlab.analysis.envelopes import minor_arc_scan
from dhlab.diophantine import ladder
from dhlab.problem import ProblemSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=4)
    ap.add_argument("--samples", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    print("q,X,Q,sup_V,sup_V/X^(4/9),trivial_V,violations,vaughan_ratio,ghosh_ratio")
    for c, X in ladder("sqrt2", 20, min_q=29)[: args.points]:
        spec = ProblemSpec.build(("sqrt2", -1, "-sqrt3", "-sqrt5"), "pi", X, 0.1)
        r = minor_arc_scan(spec, args.samples, args.seed, args.threads)
        print(f"{c.q},{X:.6g},{r.Q:.4f},{r.sup_V:.6g},{r.normalized_sup:.4f},{r.trivial_V:.6g},"
              f"{len(r.dichotomy_violations)},{r.vaughan_ratio:.3e},{r.ghosh_ratio:.4f}")


if __name__ == "__main__":
    main()
