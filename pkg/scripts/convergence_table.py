"""Print |ratio - 1| for the forbidden-part estimate over a doubling grid."""
import argparse

from mpmath import mp

from partasym import asym


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--S", default="1;2;2,3;1,5,6", help="semicolon-separated forbidden sets")
    ap.add_argument("--lo", type=int, default=625)
    ap.add_argument("--hi", type=int, default=40000)
    ap.add_argument("--mode", default="exact", choices=asym.P_MODES)
    ap.add_argument("--prec", type=int, default=256)
    args = ap.parse_args()

    grid, n = [], args.lo
    while n <= args.hi:
        grid.append(n)
        n *= 2
    for spec in args.S.split(";"):
        S = [int(v) for v in spec.split(",")]
        rows = asym.ratio_report(grid, S, args.mode, args.prec)
        print(f"S = {S}")
        for r in rows:
            print(f"  n={r.n:>7}  |ratio-1|={mp.nstr(r.abs_err, 6)}")


if __name__ == "__main__":
    main()
