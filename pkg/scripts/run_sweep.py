"""Tabulate exact TC values and witness sizes over a parameter grid.

    python3 scripts/run_sweep.py --d 3,2 --m 2,3 --n 1..3 --rmax 3 > sweep.csv
"""

import argparse
import csv
import sys
import time

from seqptc.bounds import UnsupportedRegimeError, even_witness, odd_witness, tc_exact, upper_bound
from seqptc.cli import parse_int_list
from seqptc.sampling import enumerate_specs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=parse_int_list, default=[2, 3])
    ap.add_argument("--m", type=parse_int_list, default=[2, 3])
    ap.add_argument("--n", type=parse_int_list, default=[1, 2, 3])
    ap.add_argument("--rmax", type=int, default=3)
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["d", "m", "r", "R", "dimensional_upper", "witness_factors", "witness_terms", "exact", "seconds"])
    for spec in enumerate_specs(args.d, args.m, args.n, args.rmax):
        t0 = time.perf_counter()
        w = odd_witness(spec) if spec.d % 2 else even_witness(spec)
        try:
            exact = tc_exact(spec).exact
        except UnsupportedRegimeError:
            exact = ""
        dt = time.perf_counter() - t0
        row = [spec.d, spec.m, " ".join(map(str, spec.r)), spec.R, upper_bound(spec)]
        out.writerow(row + [w.count, len(w.product), exact, f"{dt:.4f}"])


if __name__ == "__main__":
    main()
