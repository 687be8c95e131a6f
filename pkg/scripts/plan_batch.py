"""Plan and certify seeded random scenarios; one CSV row per scenario.

    python3 scripts/plan_batch.py --count 50 --seed 7 > batch.csv
"""

import argparse
import csv
import sys

import numpy as np

from seqptc.planner import classify_cell, plan, projection_frame, validate
from seqptc.sampling import random_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mode", choices=("general", "even"), default="general")
    ap.add_argument("--ties", type=int, default=2, help="coinciding projections in every third scenario")
    ap.add_argument("--samples", type=int, default=2048)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["k", "d", "m", "r", "c", "mu", "nu", "delta_C", "min_rr", "min_ro", "node_err", "pass"])
    failures = 0
    for k in range(args.count):
        d = 2 if args.mode == "even" else int(rng.choice([2, 3]))
        m = int(rng.integers(2, 4))
        r = [int(x) for x in rng.integers(1, 4, size=int(rng.integers(1, 4)))]
        sc = random_scenario(rng, d, m, r, args.mode, ties=args.ties if k % 3 == 0 else 0)
        cell = classify_cell(sc, projection_frame(sc))
        path = plan(sc)
        rep = validate(path, sc, args.samples)
        failures += not rep.passed
        rr = "" if not np.isfinite(rep.min_robot_robot) else f"{rep.min_robot_robot:.6g}"
        out.writerow(
            [k, d, m, " ".join(map(str, sc.spec.r)), cell.c, cell.mu, cell.nu, f"{path.delta_C:.6g}",
             rr, f"{rep.min_robot_obstacle:.6g}", f"{rep.max_node_error:.3g}", int(rep.passed)]
        )
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
