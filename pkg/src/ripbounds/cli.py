"""Command-line interface; every command writes CSV.

Exit codes: 0 ok, 2 bad input, 3 enumeration budget exceeded, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import linalg
from .bounds import (
    ProblemSize,
    bound_report,
    covering_bound,
    packing_bound,
    ratio_to_delta,
    structural_bound,
)
from .errors import BudgetExceeded, ContractError, MatrixParseError
from .identities import verification_suite
from .ripeval import (
    DEFAULT_BUDGET,
    coherence,
    etf_check,
    gaussian_baseline,
    histogram,
    rip_evaluate,
    sample_submatrix_spectra,
)

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_IO = 0, 2, 3, 4


def fmt(v) -> str:
    """Shortest round-trip decimal for floats, ``inf`` literal, lowercase bools."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def _csv(rows) -> str:
    return "".join(",".join(fmt(x) for x in row) + "\n" for row in rows)


@dataclass(frozen=True)
class CurveSpec:
    m: int
    k: int
    n_start: int
    n_stop: int
    n_step: int = 1
    trials: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n_start <= self.m or self.n_step < 1 or self.n_stop < self.n_start:
            raise ContractError(f"invalid n range {self.n_start}:{self.n_stop}:{self.n_step} for m={self.m}")
        if self.trials < 0:
            raise ContractError("trials must be >= 0")

    @property
    def ns(self):
        return range(self.n_start, self.n_stop + 1, self.n_step)


def parse_range(text: str):
    """``START:STOP[:STEP]`` with STOP inclusive."""
    parts = text.split(":")
    if len(parts) not in (2, 3) or not all(p.strip().lstrip("-").isdigit() for p in parts):
        raise ContractError(f"range must be START:STOP[:STEP], got {text!r}")
    vals = [int(p) for p in parts]
    return vals[0], vals[1], vals[2] if len(vals) == 3 else 1


def curve_rows(spec: CurveSpec, budget: int = DEFAULT_BUDGET):
    yield ("n", "structural", "packing", "covering", "gaussian_geomean", "delta_structural")
    for n in spec.ns:
        s = structural_bound(ProblemSize(n, spec.m, spec.k))
        q1 = q2 = g = None
        if spec.k == 2:
            q1, q2 = packing_bound(n, spec.m), covering_bound(n, spec.m)
        if spec.trials > 0:
            g = gaussian_baseline(ProblemSize(n, spec.m, spec.k), spec.trials, spec.seed, budget)
        yield (n, s, q1, q2, g, ratio_to_delta(s))


def _write(text: str, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def cmd_bounds(a):
    rep = bound_report(ProblemSize(a.n, a.m, a.k))
    _write(_csv(rep.rows()), a.out)


def cmd_eval(a):
    M = linalg.read_matrix(Path(a.matrix))
    ev = rip_evaluate(M, a.k, a.budget)
    etf = etf_check(M, a.tol)
    rows = [
        ("rho_min", ev.rho_min),
        ("rho_max", ev.rho_max),
        ("ratio", ev.ratio),
        ("delta_k", ev.delta_k),
        ("delta_k_optimal", ev.delta_k_optimal),
        ("coherence", coherence(M) if M.shape[1] > 1 else None),
        ("etf", etf.is_etf),
        ("argmax_subset", " ".join(map(str, ev.argmax_subset))),
        ("argmin_subset", " ".join(map(str, ev.argmin_subset))),
    ]
    _write(_csv(rows), a.out)


def cmd_curve(a):
    start, stop, step = parse_range(a.n)
    spec = CurveSpec(a.m, a.k, start, stop, step, a.trials, a.seed)
    _write(_csv(curve_rows(spec, a.budget)), a.out)


def cmd_spectra(a):
    if a.matrix:
        M = linalg.read_matrix(Path(a.matrix))
        host = linalg.singular_values(M)
    else:
        if a.n is None or a.m is None:
            raise ContractError("give --matrix or both --n and --m")
        host = np.ones(a.m)
        M = linalg.random_with_spectrum(a.m, a.n, host, a.seed)
    n = M.shape[1]
    sample = sample_submatrix_spectra(M, a.k, a.count, a.seed)
    idx = list(range(1, a.k + 1))
    if a.sv_indices:
        idx = [int(t) for t in a.sv_indices.split(",")]
    hists = [histogram(sample, i, a.bins, host, n) for i in idx]
    buf = io.StringIO()
    buf.write(_csv([("sv_index", "bin_lo", "bin_hi", "count")]))
    for h in hists:
        buf.write(_csv((h.index, float(lo), float(hi), int(c))
                       for lo, hi, c in zip(h.bin_edges[:-1], h.bin_edges[1:], h.counts)))
    buf.write("\n")
    buf.write(_csv([("sv_index", "root_marker")] + [(h.index, h.root_marker) for h in hists]))
    _write(buf.getvalue(), a.out)


def cmd_verify(a):
    rows = verification_suite(a.seed, a.budget, a.inject_fault)
    out = [("identity", "value", "threshold", "verdict")]
    out += [(r.name, r.value, r.threshold, "PASS" if r.passed else "FAIL") for r in rows]
    _write(_csv(out), a.out)
    return EXIT_OK if all(r.passed for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ripbounds", description="RIP ratio bounds and certification")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, budget=DEFAULT_BUDGET):
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--budget", type=int, default=budget, help="max subsets to enumerate")

    sp = sub.add_parser("bounds", help="all bounds for one problem size")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("eval", help="exact RIP ratio of a matrix file")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-10, help="ETF tolerance")
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("curve", help="bounds and Gaussian baseline against n")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--n", required=True, help="START:STOP[:STEP], inclusive")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("spectra", help="histograms of sampled submatrix spectra")
    sp.add_argument("--matrix", default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--count", type=int, default=25000)
    sp.add_argument("--bins", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sv-indices", default=None, help="comma-separated 1-based indices")
    common(sp)
    sp.set_defaults(func=cmd_spectra)

    sp = sub.add_parser("verify", help="run the identity verification suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    common(sp, budget=10**6)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (MatrixParseError, ContractError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if code is None else code
