"""Build the oscillating interval-ideal sequence and print each stage's margins."""
import argparse

from mpmath import mp, mpf

from partasym import ideals


def show(m):
    return str(m.exact) if m.exact is not None else f"exp({mp.nstr(m.log, 8)})"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", default="0.5")
    ap.add_argument("--stages", type=int, default=3)
    ap.add_argument("--prec", type=int, default=256)
    args = ap.parse_args()

    with mp.workprec(args.prec):
        eps = mpf(args.eps)
        params = ideals.OscillationParams(eps, ideals.f_threshold(eps, args.prec))
        print(f"eps={args.eps} surrogate n0={params.surrogate_n0}")
        seq = ideals.oscillation_sequence(params, args.stages, args.prec)
        for st in seq:
            cert = ideals.oscillation_certificate(params, seq, st.index, args.prec)
            print(f"stage {st.index}: s={show(st.s)} t={show(st.t)} passed={cert.passed}")
            for name, val in cert.margins.items():
                print(f"  {name:<18} {mp.nstr(val, 8)}")


if __name__ == "__main__":
    main()
