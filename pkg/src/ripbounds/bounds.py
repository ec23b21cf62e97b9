"""Deterministic bounds on the RIP ratio as functions of the problem size.

The RIP ratio of an ``m x n`` matrix at sparsity ``k`` is the largest squared
singular value over all ``m x k`` column submatrices divided by the smallest.

* structural bound: ratio of the extreme roots of ``D^(n-k)[x^(n-m)(x-1)^m]``,
  valid for every matrix;
* spectral bound: the same with the matrix's own singular values;
* packing (converse) and covering (achievable) bounds for ``k = 2`` from
  spherical caps around ``2n`` antipodal points on the unit sphere in ``R^m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ContractError
from .realpoly import real_roots, spectral_poly, structural_poly


@dataclass(frozen=True)
class ProblemSize:
    """Signal length ``n``, measurement count ``m`` and sparsity ``k``."""

    n: int
    m: int
    k: int

    def __post_init__(self):
        if min(self.n, self.m, self.k) < 1:
            raise ContractError(f"n, m, k must be positive, got {self}")

    def require_structural(self):
        # k = m is accepted (roots stay real and positive); see realpoly
        if not 0 < self.k <= self.m < self.n:
            raise ContractError(f"need 0 < k <= m < n, got n={self.n}, m={self.m}, k={self.k}")


@dataclass(frozen=True)
class BoundReport:
    ps: ProblemSize
    structural: float
    cap: float
    welch_extension_rk2: float
    delta_equiv_structural: float
    packing: float | None = None
    packing_binding: bool | None = None
    covering: float | None = None
    k2_limit: float | None = None
    welch_coherence: float | None = None

    def rows(self):
        """``(key, value)`` pairs in a fixed order; absent fields are skipped."""
        out = [("n", self.ps.n), ("m", self.ps.m), ("k", self.ps.k), ("structural", self.structural)]
        if self.packing is not None:
            out += [("packing", self.packing), ("packing_binding", self.packing_binding)]
            out += [("covering", self.covering)]
        out += [("cap", self.cap)]
        if self.k2_limit is not None:
            out += [("k2_limit", self.k2_limit), ("welch_coherence", self.welch_coherence)]
        out += [("welch_extension_rk2", self.welch_extension_rk2)]
        out += [("delta_equiv_structural", self.delta_equiv_structural)]
        return out


def _as_size(ps) -> ProblemSize:
    return ps if isinstance(ps, ProblemSize) else ProblemSize(*ps)


def structural_bound(ps) -> float:
    """``r_1^2 / r_k^2`` for the structural polynomial; 1 when ``k = 1``."""
    ps = _as_size(ps)
    if ps.k == 1 and ps.m < ps.n:
        return 1.0
    ps.require_structural()
    return _structural_ratio(ps.n, ps.m, ps.k)


@lru_cache(maxsize=65536)
def _structural_ratio(n, m, k):
    r = real_roots(structural_poly(n, m, k))
    return float(r[0] / r[-1])


def structural_bound_spectrum(n: int, k: int, S):
    """Extreme roots and their ratio for the spectral polynomial of ``S``.

    ``S`` are singular values (not squared).
    """
    r = real_roots(spectral_poly(n, k, S))
    return float(r[0]), float(r[-1]), float(r[0] / r[-1])


def structural_bound_k2_closed(n: int, m: int) -> float:
    if m < 2 or n <= m:
        raise ContractError(f"need 2 <= m < n, got n={n}, m={m}")
    W = welch_coherence_bound(n, m)
    return (1.0 + W) / (1.0 - W)


def structural_bound_k2_limit(m: int) -> float:
    """Limit of the ``k = 2`` structural bound as ``n -> inf``."""
    if m < 2:
        raise ContractError(f"need m >= 2, got {m}")
    return (1.0 + 1.0 / math.sqrt(m)) ** 2 / (1.0 - 1.0 / m)


def structural_ratio_cap(m: int, k: int) -> float:
    """``(mk)^k (m-k)! / m!``, an upper limit on the structural bound for every n."""
    if not 0 < k <= m:
        raise ContractError(f"need 0 < k <= m, got m={m}, k={k}")
    return math.exp(k * math.log(m * k) + math.lgamma(m - k + 1) - math.lgamma(m + 1))


def _sin_power_recurrence(p, beta):
    """``int_0^beta sin^p`` by the upward recurrence on ``p`` in steps of two."""
    s, c = math.sin(beta), math.cos(beta)
    if p % 2 == 0:
        I, q = beta, 0
    else:
        I, q = 2.0 * math.sin(0.5 * beta) ** 2, 1  # 1 - cos(beta) without cancellation
    while q < p:
        q += 2
        I = -c * s ** (q - 1) / q + (q - 1) / q * I
    return I


def _sin_power_series(p, beta):
    """``int_0^beta sin^p`` from ``ds / sqrt(1 - s^2)`` expanded in ``s = sin(beta)``."""
    s = math.sin(beta)
    s2 = s * s
    term = s ** (p + 1)
    total = term / (p + 1)
    j = 0
    while True:
        term *= s2 * (2 * j + 1) / (2 * j + 2)
        j += 1
        add = term / (p + 2 * j + 1)
        total += add
        if add <= 1e-17 * total:
            return total


def cap_integral(m: int, beta: float) -> float:
    """``c_m(beta) = int_0^beta sin(a)^(m-2) da``.

    The closed recurrence ``int sin^p = -cos sin^(p-1) / p + (p-1)/p int sin^(p-2)``
    loses relative accuracy for small angles (each step divides out roughly
    ``sin^2``), so below ``pi/4`` a power series in ``sin(beta)`` is summed
    instead, and angles past ``pi/2`` are reflected.
    """
    if m < 2:
        raise ContractError(f"need m >= 2, got {m}")
    if not 0.0 <= beta <= math.pi:
        raise ContractError(f"beta={beta!r} outside [0, pi]")
    p = m - 2
    if beta > 0.5 * math.pi:
        return _sin_power_recurrence(p, math.pi) - cap_integral(m, math.pi - beta)
    if p == 0:
        return beta
    if beta <= 0.25 * math.pi:
        return _sin_power_series(p, beta)
    return _sin_power_recurrence(p, beta)


@lru_cache(maxsize=4096)
def solve_cap_angle(n: int, m: int) -> float:
    """The angle ``theta`` in ``(0, pi)`` with ``c_m(theta) = c_m(pi) / n``.

    ``c_m`` is strictly increasing, so plain bisection converges; it runs until
    the bracket cannot be split further (well past the 1e-12 residual).
    """
    if n < 2 or m < 2:
        raise ContractError(f"need n >= 2 and m >= 2, got n={n}, m={m}")
    target = cap_integral(m, math.pi) / n
    lo, hi = 0.0, math.pi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if cap_integral(m, mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def packing_bound(n: int, m: int) -> float:
    """``q1 = cot^2(theta)``; values below 1 are vacuous but returned as-is."""
    th = solve_cap_angle(n, m)
    return (math.cos(th) / math.sin(th)) ** 2


def covering_bound(n: int, m: int) -> float:
    """``q2 = cot^2(theta / 2) = (1 + cos theta) / (1 - cos theta)``."""
    th = solve_cap_angle(n, m)
    return (1.0 + math.cos(th)) / (2.0 * math.sin(0.5 * th) ** 2)


def welch_coherence_bound(n: int, m: int) -> float:
    if not 0 < m < n:
        raise ContractError(f"need 0 < m < n, got n={n}, m={m}")
    return math.sqrt((n - m) / (m * (n - 1.0)))


def welch_extension_bound(n: int, m: int, k: int) -> float:
    """Least structural root ``r_k^2``: bounds ``min_p s_{p,k}^2 / S_1^2``."""
    ProblemSize(n, m, k).require_structural()
    return float(real_roots(structural_poly(n, m, k))[-1])


def ratio_to_delta(R: float) -> float:
    """Isometry constant of the optimally rescaled matrix, ``(R-1)/(R+1)``."""
    if not R >= 1.0:
        raise ContractError(f"RIP ratio must be >= 1, got {R!r}")
    if math.isinf(R):
        return 1.0
    return (R - 1.0) / (R + 1.0)


def optimal_scaling(eps1: float, eps2: float):
    """Scale ``a`` that balances ``(1-eps1, 1+eps2)`` and the resulting constant.

    Returns ``(a, delta_prime)`` with ``a = 2/(2+eps2-eps1)``.
    """
    if eps1 > 1.0 or 1.0 + eps2 <= 0.0:
        raise ContractError(f"need eps1 <= 1 and eps2 > -1, got {eps1!r}, {eps2!r}")
    den = 2.0 + eps2 - eps1
    if den <= 0.0:
        raise ContractError("degenerate scaling denominator")
    return 2.0 / den, (eps1 + eps2) / den


def bound_report(ps) -> BoundReport:
    ps = _as_size(ps)
    ps.require_structural()
    n, m, k = ps.n, ps.m, ps.k
    r = real_roots(structural_poly(n, m, k))
    structural = 1.0 if k == 1 else float(r[0] / r[-1])
    cap = structural_ratio_cap(m, k)
    extra = {}
    if k == 2:
        q1 = packing_bound(n, m)
        extra = dict(
            packing=q1,
            packing_binding=q1 >= 1.0,
            covering=covering_bound(n, m),
            k2_limit=structural_bound_k2_limit(m),
            welch_coherence=welch_coherence_bound(n, m),
        )
    return BoundReport(
        ps=ps,
        structural=structural,
        cap=cap,
        welch_extension_rk2=float(r[-1]),
        delta_equiv_structural=ratio_to_delta(structural),
        **extra,
    )


def packing_crossover(m: int, n_max: int = 100000):
    """Smallest ``n > m`` at which the packing bound exceeds the ``k = 2`` structural bound.

    The structural bound is capped while ``q1`` grows without limit, so a
    crossover exists; ``None`` if it lies beyond ``n_max``. Both curves are
    monotone in ``n``, so the first crossing is found by bisection.
    """
    def ahead(n):
        return packing_bound(n, m) > structural_bound_k2_closed(n, m)

    lo = m + 1
    if ahead(lo):
        return lo
    hi = lo
    while not ahead(hi):
        if hi >= n_max:
            return None
        lo, hi = hi, min(2 * hi, n_max)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ahead(mid):
            hi = mid
        else:
            lo = mid
    return hi
