"""Numerical oracles for the polynomial identities behind the bounds.

Identity checks compare coefficient vectors of both sides, which catches
constant-factor mistakes that pointwise evaluation can hide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from . import linalg
from .bounds import structural_bound, structural_bound_spectrum, welch_extension_bound
from .errors import BudgetExceeded, ContractError
from .realpoly import (
    MULTIPLE_ROOT_TOL,
    _Monomial,
    derivative_monic,
    elementary_symmetric,
    real_roots,
    spectral_poly,
)

IDENTITY_BUDGET = 10**6


@dataclass(frozen=True)
class ResidualReport:
    identity_name: str
    max_abs_residual: float
    scale: float
    relative_residual: float


def _report(name, lhs, rhs, scale=None):
    lhs, rhs = np.asarray(lhs, dtype=float), np.asarray(rhs, dtype=float)
    res = float(np.max(np.abs(lhs - rhs)))
    if scale is None:
        scale = float(np.max(np.abs(lhs)))
    rel = res / scale if scale > 0 else (0.0 if res == 0 else math.inf)
    return ResidualReport(name, res, float(scale), float(rel))


def _subset_spectra(A, k):
    """Squared spectra of every ``m x k`` column submatrix, ``(C(n,k), min(m,k))``."""
    n = A.shape[1]
    out = [linalg.squared_singular_values_batch(np.moveaxis(A[:, rows], 1, 0))
           for _, rows in linalg.subset_chunks(n, k)]
    return np.concatenate(out)


def thompson_residual(M, k: int, budget: int = IDENTITY_BUDGET, inject_fault: bool = False) -> ResidualReport:
    """Sum of submatrix characteristic polynomials vs the scaled derivative.

    Both sides are degree ``k`` with leading coefficient ``C(n, k)``; for
    ``k > m`` each ``m x k`` submatrix contributes ``x^(k-m) f_p(x)``. With
    ``inject_fault`` the left side is built with ``n!/k!`` in place of
    ``C(n, k)`` (a dropped ``1/(n-k)!``), which the check must flag.
    """
    A = linalg.as_matrix(M)
    m, n = A.shape
    if not 0 < k <= n:
        raise ContractError(f"need 0 < k <= n, got k={k}, shape {A.shape}")
    if math.comb(n, k) > budget:
        raise BudgetExceeded(math.comb(n, k), budget, "use a smaller matrix")
    S2 = linalg.singular_values(A) ** 2
    lead = math.perm(n, n - k) if inject_fault else math.comb(n, k)
    lhs = lead * derivative_monic(elementary_symmetric(S2, min(k, S2.size)), n, k)
    s = min(m, k)
    e = np.zeros(k + 1)
    e[: s + 1] = elementary_symmetric(_subset_spectra(A, k), s).sum(axis=0)
    rhs = ((-1.0) ** np.arange(k + 1) * e)[::-1]
    return _report("thompson", lhs, rhs)


def _poly_from_roots(vals):
    """Ascending coefficients of ``prod (x - v)`` via elementary symmetric sums."""
    v = np.asarray(vals, dtype=float)
    e = elementary_symmetric(v, v.size)
    return ((-1.0) ** np.arange(v.size + 1) * e)[::-1]


def thompson_general_residual(M, l: int, k: int, budget: int = IDENTITY_BUDGET) -> ResidualReport:
    """Thompson's identity over all ``l x k`` submatrices.

    Sum over submatrices of ``x^(l - min(l,k)) f_p(x)`` against
    ``D^(m-l)[x^(m-k) D^(n-k)[x^(n - min(m,n)) f(x)]] / ((m-l)! (n-k)!)``,
    where ``f`` and ``f_p`` have the squared singular values as roots. When
    ``k > m`` the inner derivative is divisible by ``x^(k-m)`` and the
    negative power is applied as an exact shift.
    """
    A = linalg.as_matrix(M)
    m, n = A.shape
    if not (1 <= l <= m and 1 <= k <= n):
        raise ContractError(f"need 1 <= l <= m and 1 <= k <= n, got l={l}, k={k}, shape {A.shape}")
    need = math.comb(m, l) * math.comb(n, k)
    if need > budget:
        raise BudgetExceeded(need, budget, "use a smaller matrix")
    t = min(m, n)
    f = _poly_from_roots(linalg.singular_values(A) ** 2)
    inner = P.polyder(np.concatenate((np.zeros(n - t), f)), n - k) / math.factorial(n - k)
    if m >= k:
        mid = np.concatenate((np.zeros(m - k), inner))
    else:
        lost = inner[: k - m]
        if np.any(np.abs(lost) > 1e-9 * np.max(np.abs(inner))):
            raise ArithmeticError("inner derivative is not divisible by the required power of x")
        mid = inner[k - m:]
    rhs = P.polyder(mid, m - l) / math.factorial(m - l)
    lhs = np.zeros(l + 1)
    s = min(l, k)
    for rows in linalg.enumerate_k_subsets(m, l):
        B = A[list(rows)]
        spectra = _subset_spectra(B, k)
        e = elementary_symmetric(spectra, s).sum(axis=0)
        lhs[l - s:] += ((-1.0) ** np.arange(s + 1) * e)[::-1]
    return _report("thompson_general", rhs, lhs)


def _sensitivity_terms(S, n, k, i):
    """Root ``r_i^2`` and the per-``j`` numerator values at it (monic form)."""
    S = np.sort(np.asarray(S, dtype=float))[::-1]
    m = S.size
    p = spectral_poly(n, k, S)
    if not 1 <= i <= k:
        raise ContractError(f"root index i={i} outside 1..{k}")
    r = float(real_roots(p)[i - 1])
    sq = S**2
    nums = np.empty(m)
    for j in range(m):
        rest = np.delete(sq, j)
        c = derivative_monic(elementary_symmetric(rest, k - 1), n - 1, k - 1)
        nums[j] = _Monomial(c).eval(np.array(r))[0]
    den_c = _Monomial(p.coeffs).derivative()
    den, mag = den_c.eval(np.array(r))
    if abs(den) <= MULTIPLE_ROOT_TOL * mag:
        raise ContractError(f"root r_{i}^2 = {r!r} is repeated; the sensitivity is undefined")
    return r, sq, nums, float(den)


def root_sensitivity(S, n: int, k: int, i: int, j: int) -> float:
    """``d(r_i^2) / d(S_j^2)`` with 1-based indices into the descending roots and ``S``.

    Ratio form: ``(1/n) * N_j(r) / g'(r)`` where ``N_j`` is the monic
    ``D^(n-k)[x^(n-m) prod_{l != j}(x - S_l^2)]`` and ``g'`` the monic
    derivative of the monic spectral polynomial.
    """
    r, sq, nums, den = _sensitivity_terms(S, n, k, i)
    if not 1 <= j <= sq.size:
        raise ContractError(f"index j={j} outside 1..{sq.size}")
    return float(nums[j - 1] / (n * den))


def root_sensitivity_normalized(S, n: int, k: int, i: int, j: int) -> float:
    """Same derivative from the sum-normalised form ``r N_j(r) / sum_l S_l^2 N_l(r)``."""
    r, sq, nums, _ = _sensitivity_terms(S, n, k, i)
    return float(r * nums[j - 1] / np.dot(sq, nums))


def euler_residual(S, n: int, k: int, i: int) -> float:
    """``|sum_j S_j^2 d(r_i^2)/d(S_j^2) - r_i^2|`` (degree-one homogeneity)."""
    r, sq, nums, den = _sensitivity_terms(S, n, k, i)
    return float(abs(np.dot(sq, nums / (n * den)) - r))


def q_volume(semi_axes, q: int) -> float:
    """``sqrt(e_q(a_1^2, ..., a_d^2))`` for a hyperellipse with the given semi-axes."""
    a = np.asarray(semi_axes, dtype=float)
    if q > a.size:
        raise ContractError(f"q={q} exceeds the number of axes {a.size}")
    return float(math.sqrt(elementary_symmetric(a**2, q)[q]))


def gpt_residual(M, k: int, q: int, budget: int = IDENTITY_BUDGET) -> ResidualReport:
    """``C(n-q, k-q) e_q(S^2)`` against ``sum_p e_q(s_p^2)`` over k-column submatrices."""
    A = linalg.as_matrix(M)
    m, n = A.shape
    if not 0 < q <= k <= m < n:
        raise ContractError(f"need 0 < q <= k <= m < n, got q={q}, k={k}, m={m}, n={n}")
    if math.comb(n, k) > budget:
        raise BudgetExceeded(math.comb(n, k), budget, "use a smaller matrix")
    S = linalg.singular_values(A)
    lhs = math.comb(n - q, k - q) * elementary_symmetric(S**2, q)[q]
    rhs = elementary_symmetric(_subset_spectra(A, k), q)[:, q].sum()
    return _report("gpt", [lhs], [rhs], abs(lhs))


@dataclass(frozen=True)
class MinimalityReport:
    passed: bool
    worst_margin: float
    trials: int


def minimality_check(n: int, m: int, k: int, trials: int, seed: int) -> MinimalityReport:
    """The spectral bound of random nonconstant spectra never drops below the structural one."""
    base = structural_bound((n, m, k))
    rng = linalg.rng_for(seed)
    worst = math.inf
    for _ in range(trials):
        S = rng.uniform(0.1, 2.0, m)
        worst = min(worst, structural_bound_spectrum(n, k, S)[2] - base)
    return MinimalityReport(worst >= -1e-12, worst, trials)


@dataclass(frozen=True)
class CheckRow:
    name: str
    value: float
    threshold: float
    passed: bool


def verification_suite(seed: int = 0, budget: int = IDENTITY_BUDGET, inject_fault: bool = False):
    """Run every identity on small seeded instances; one row per identity family."""
    rows = []

    def add(name, value, threshold, passed=None):
        ok = value <= threshold if passed is None else passed
        rows.append(CheckRow(name, float(value), threshold, bool(ok)))

    worst = 0.0
    for t, (m, n) in enumerate([(2, 4), (3, 6), (4, 7)]):
        for k in (2, 3):
            if k >= m:
                continue
            for r in range(5):
                A = linalg.random_gaussian(m, n, seed, t, k, r)
                worst = max(worst, thompson_residual(A, k, budget, inject_fault).relative_residual)
    add("thompson", worst, 1e-9)

    worst = 0.0
    for lk in [(1, 1), (2, 2), (2, 3)]:
        for r in range(5):
            A = linalg.random_gaussian(3, 4, seed, 100 + lk[0] * 10 + lk[1], r)
            worst = max(worst, thompson_general_residual(A, *lk, budget).relative_residual)
    add("thompson_general", worst, 1e-8)

    worst = 0.0
    for k, q in [(2, 1), (2, 2), (3, 2), (3, 3)]:
        for r in range(5):
            A = linalg.random_gaussian(3, 5, seed, 200 + 10 * k + q, r)
            worst = max(worst, gpt_residual(A, k, q, budget).relative_residual)
    add("gpt", worst, 1e-9)

    rng = linalg.rng_for(seed, 300)
    sens, eul = 0.0, 0.0
    for _ in range(10):
        S = rng.uniform(0.2, 2.0, 4)
        for i in (1, 2):
            eul = max(eul, euler_residual(S, 8, 2, i) / float(real_roots(spectral_poly(8, 2, S))[i - 1]))
            for j in range(1, 5):
                a = root_sensitivity(S, 8, 2, i, j)
                b = root_sensitivity_normalized(S, 8, 2, i, j)
                sens = max(sens, abs(a - b) / max(abs(a), 1e-300), -a)
    add("sensitivity", sens, 1e-8)
    add("euler", eul, 1e-8)

    rep = minimality_check(8, 4, 2, 200, seed)
    add("minimality", max(-rep.worst_margin, 0.0), 1e-12, rep.passed)

    viol = 0.0
    for t in range(10):
        A = linalg.random_gaussian(6, 10, seed, 400, t)
        S1 = linalg.singular_values(A)[0] ** 2
        lo = _subset_spectra(A, 3)[:, -1].min() / S1
        viol = max(viol, lo - welch_extension_bound(10, 6, 3))
    add("welch_extension", max(viol, 0.0), 0.0)

    mono = 0.0
    for m in range(3, 9):
        for k in range(2, m):
            for n in range(m + 1, 25):
                b = structural_bound((n, m, k))
                mono = max(mono, b - structural_bound((n + 1, m, k)))
                mono = max(mono, b - structural_bound((n, m, k + 1)))
                if k < m - 1:
                    mono = max(mono, b - structural_bound((n, m - 1, k)))
    add("monotonicity", mono, 1e-9)
    return rows
