"""Smallest n where the packing bound overtakes the k = 2 structural bound."""

import argparse

from ripbounds.bounds import packing_crossover, structural_bound_k2_limit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ms", default="2,3,4,5,6,8,10,12,16")
    ap.add_argument("--n-max", type=int, default=100000)
    a = ap.parse_args()
    print("m,crossover_n,structural_limit")
    for m in (int(t) for t in a.ms.split(",")):
        n = packing_crossover(m, a.n_max)
        print(f"{m},{'' if n is None else n},{structural_bound_k2_limit(m)!r}")


if __name__ == "__main__":
    main()
