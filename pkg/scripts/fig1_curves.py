"""Bounds and Gaussian baseline against n for k = 2 (one CSV per m)."""

import argparse
from pathlib import Path

from ripbounds.cli import CurveSpec, _csv, curve_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ms", default="3,6,12")
    ap.add_argument("--n-max", type=int, default=60)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", default="results")
    a = ap.parse_args()
    out = Path(a.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for m in (int(t) for t in a.ms.split(",")):
        spec = CurveSpec(m, 2, m + 1, a.n_max, 1, a.trials, a.seed)
        path = out / f"curve_m{m}.csv"
        path.write_text(_csv(curve_rows(spec)), newline="\n")
        print(path)


if __name__ == "__main__":
    main()
