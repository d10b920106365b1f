"""Fit log p(n, X) - C sqrt n against log n for sample bases and report the exponent k."""
import argparse

from mpmath import mp

from partasym import ideals

BASES = {
    "none": [],
    "(1)": [[1]],
    "(1),(2)": [[1], [2]],
    "(1),(2),(3)": [[1], [2], [3]],
    "(1,1)": [[1, 1]],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=int, default=1000)
    ap.add_argument("--hi", type=int, default=40000)
    ap.add_argument("--points", type=int, default=16)
    ap.add_argument("--prec", type=int, default=256)
    args = ap.parse_args()

    grid = ideals.geometric_grid(args.lo, args.hi, args.points)
    for label, basis in BASES.items():
        counts = [(n, ideals.basis_avoiding_count_ie(n, basis)) for n in grid]
        fit = ideals.fit_growth_exponent(counts, args.prec)
        print(f"{label:<14} k_hat={mp.nstr(fit.k_hat, 5):<8} nearest half={fit.nearest_half}")


if __name__ == "__main__":
    main()
