"""Empirical certification of concrete matrices.

Exact RIP ratios come from exhaustive enumeration of column subsets: the
``n x n`` column Gram matrix is formed once and every ``k x k`` principal
submatrix is diagonalised in batches. Sampled spectra support the
statistical look at submatrix singular values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .bounds import ProblemSize, ratio_to_delta
from .errors import BudgetExceeded, ContractError
from .realpoly import real_roots, spectral_poly

DEFAULT_BUDGET = 10**7
RANK_TOL = 1e-13
CHUNK = 8192


@dataclass(frozen=True)
class RipEvaluation:
    rho_min: float
    rho_max: float
    ratio: float
    delta_k: float
    delta_k_optimal: float
    argmax_subset: tuple
    argmin_subset: tuple


def _check_budget(count, budget, hint="use sample_submatrix_spectra instead"):
    if count > budget:
        raise BudgetExceeded(count, budget, hint)


def rip_evaluate(M, k: int, budget: int = DEFAULT_BUDGET) -> RipEvaluation:
    """Exact extreme squared singular values over all ``C(n, k)`` submatrices."""
    A = linalg.as_matrix(M)
    m, n = A.shape
    if not 1 <= k <= m:
        raise ContractError(f"need 1 <= k <= m, got k={k}, m={m}")
    if k > n:
        raise ContractError(f"k={k} exceeds column count {n}")
    _check_budget(math.comb(n, k), budget)
    G = linalg.gram(A)
    hi, lo = -np.inf, np.inf
    arg_hi = arg_lo = None
    for _, rows in linalg.subset_chunks(n, k, CHUNK):
        sub = G[rows[:, :, None], rows[:, None, :]]
        w = linalg.jacobi_eigvalsh(sub)
        top, bot = w[:, 0], w[:, -1]
        i, j = int(np.argmax(top)), int(np.argmin(bot))
        if top[i] > hi:
            hi, arg_hi = float(top[i]), tuple(int(c) for c in rows[i])
        if bot[j] < lo:
            lo, arg_lo = float(bot[j]), tuple(int(c) for c in rows[j])
    if hi <= 0.0:
        raise ContractError("matrix has no nonzero column")
    if lo <= RANK_TOL * hi:
        lo, ratio = 0.0, math.inf
    else:
        ratio = hi / lo
    return RipEvaluation(
        rho_min=lo,
        rho_max=hi,
        ratio=ratio,
        delta_k=max(hi - 1.0, 1.0 - lo),
        delta_k_optimal=ratio_to_delta(ratio),
        argmax_subset=arg_hi,
        argmin_subset=arg_lo,
    )


def coherence(M) -> float:
    """Largest absolute cosine between two distinct columns."""
    A = linalg.as_matrix(M)
    if A.shape[1] < 2:
        raise ContractError("coherence needs at least two columns")
    G = np.abs(linalg.gram(linalg.normalize_columns(A)))
    np.fill_diagonal(G, 0.0)
    return float(min(G.max(), 1.0))


@dataclass(frozen=True)
class EtfReport:
    unit_norm: bool
    equiangular: bool
    tight: bool
    norm_deviation: float
    angle_spread: float
    frame_deviation: float

    @property
    def is_etf(self) -> bool:
        return self.unit_norm and self.equiangular and self.tight


def etf_check(M, tol: float = 1e-10) -> EtfReport:
    """Test the three defining conditions of an equiangular tight frame.

    Equiangularity is measured on cosines (normalised inner products), so it
    is insensitive to column scaling; the other two conditions are not.
    """
    A = linalg.as_matrix(M)
    m, n = A.shape
    norms = np.linalg.norm(A, axis=0)
    norm_dev = float(np.max(np.abs(norms - 1.0)))
    if n > 1 and np.all(norms > 0):
        C = np.abs(linalg.gram(A / norms))
        off = C[~np.eye(n, dtype=bool)]
        spread = float(off.max() - off.min())
    else:
        spread = 0.0 if n == 1 else math.inf
    frame_dev = float(np.max(np.abs(A @ A.T - (n / m) * np.eye(m))))
    return EtfReport(norm_dev <= tol, spread <= tol, frame_dev <= tol, norm_dev, spread, frame_dev)


def gaussian_baseline(ps, trials: int, seed: int, budget: int = DEFAULT_BUDGET) -> float:
    """Geometric mean of the exact RIP ratio over seeded Gaussian draws.

    Trial ``t`` uses the stream ``(seed, t)``, so any subset of trials can be
    reproduced independently.
    """
    ps = ps if isinstance(ps, ProblemSize) else ProblemSize(*ps)
    if trials < 1:
        raise ContractError("trials must be >= 1")
    _check_budget(math.comb(ps.n, ps.k), budget, "reduce n or k")
    logs = np.empty(trials)
    for t in range(trials):
        ev = rip_evaluate(linalg.random_gaussian(ps.m, ps.n, seed, t), ps.k, budget)
        if math.isinf(ev.ratio):
            raise ArithmeticError(
                f"trial {t} (seed {seed}) produced a rank-deficient subset {ev.argmin_subset}"
            )
        logs[t] = math.log(ev.ratio)
    return float(math.exp(logs.mean()))


@dataclass(frozen=True)
class SpectraSample:
    problem: ProblemSize
    count: int
    spectra: np.ndarray  # (count, k) squared singular values, descending
    seed: int
    subsets: np.ndarray


def _floyd(rng, n, k):
    """A uniformly random sorted k-subset of ``range(n)`` (Floyd's algorithm)."""
    chosen = set()
    for j in range(n - k, n):
        t = int(rng.integers(0, j + 1))
        chosen.add(j if t in chosen else t)
    return sorted(chosen)


def sample_submatrix_spectra(M, k: int, count: int, seed: int) -> SpectraSample:
    """Squared singular values of ``count`` i.i.d. uniformly drawn column subsets."""
    A = linalg.as_matrix(M)
    m, n = A.shape
    if not 1 <= k <= min(m, n):
        raise ContractError(f"need 1 <= k <= min(m, n), got k={k}, shape {A.shape}")
    if count < 1:
        raise ContractError("count must be >= 1")
    rng = linalg.rng_for(seed)
    subsets = np.array([_floyd(rng, n, k) for _ in range(count)], dtype=np.intp)
    spectra = np.empty((count, k))
    for off in range(0, count, CHUNK):
        block = subsets[off:off + CHUNK]
        spectra[off:off + len(block)] = linalg.squared_singular_values_batch(
            np.moveaxis(A[:, block], 1, 0)
        )
    return SpectraSample(ProblemSize(n, m, k), count, spectra, seed, subsets)


@dataclass(frozen=True)
class HistogramData:
    index: int  # 1-based singular value index
    bin_edges: np.ndarray
    counts: np.ndarray
    root_marker: float
    degenerate: bool = False

    @property
    def bin_width(self) -> float:
        return float(self.bin_edges[1] - self.bin_edges[0])

    @property
    def mode_center(self) -> float:
        j = int(np.argmax(self.counts))
        return float(0.5 * (self.bin_edges[j] + self.bin_edges[j + 1]))


def histogram(sample: SpectraSample, i: int, bins: int, host_spectrum, n: int) -> HistogramData:
    """Equal-width histogram of the ``i``-th squared singular value.

    ``root_marker`` is the ``i``-th largest root of the spectral polynomial of
    the host matrix (``host_spectrum`` holds singular values, not squares).
    """
    k = sample.spectra.shape[1]
    if not 1 <= i <= k:
        raise ContractError(f"index i={i} outside 1..{k}")
    if bins < 2:
        raise ContractError("need at least 2 bins")
    vals = sample.spectra[:, i - 1]
    marker = float(real_roots(spectral_poly(n, k, host_spectrum))[i - 1])
    lo, hi = float(vals.min()), float(vals.max())
    if lo == hi:
        half = 0.5 * abs(lo) if lo != 0.0 else 0.5
        edges = np.array([lo - half, lo + half])
        return HistogramData(i, edges, np.array([vals.size]), marker, True)
    counts, edges = np.histogram(vals, bins=bins, range=(lo, hi))
    return HistogramData(i, edges, counts, marker)
