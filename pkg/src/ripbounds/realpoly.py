"""Bound polynomials in monic form and isolation of their real roots.

Both families are (n-k)-th derivatives of ``x^(n-m) * prod_j (x - v_j)``:

* structural: all ``v_j = 1``;
* spectral: ``v_j = S_j**2`` for the singular values ``S`` of a matrix.

Differentiating ``x^(N-i)`` exactly ``N-K`` times and dividing by the leading
factor ``N!/K!`` leaves the coefficient of ``x^(K-i)`` as
``(-1)^i e_i(v) * prod_{s<i} (K-s)/(N-s)``. Every factor in that product is
at most one, so the monic coefficients never overflow regardless of ``n``.

Monomial coefficients are a poor basis for locating clustered roots. The
structural polynomial is a Jacobi polynomial in disguise: with
``mu = m + k - n``,

    f_k(x)  ~  (x - 1)^max(mu, 0) * P_d^(m-k, |mu|)(1 - 2x),   d = min(k, n - m)

so root finding evaluates it through the Jacobi three-term recurrence and
places the root at ``x = 1`` with its exact multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, RootFindingError

MAX_ITER = 200
MULTIPLE_ROOT_TOL = 1e-12
_EPS = np.finfo(float).eps


class _Monomial:
    """Horner evaluation of a monic polynomial with ascending coefficients."""

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    @property
    def degree(self):
        return len(self.c) - 1

    def eval(self, x, with_mag=True):
        """Value and running magnitude ``sum |c_i| |x|^i`` (the roundoff scale)."""
        c = self.c
        val = np.zeros_like(x) + c[-1]
        mag = np.zeros_like(x) + abs(c[-1])
        ax = np.abs(x)
        for ci in c[-2::-1]:
            val = val * x + ci
            mag = mag * ax + abs(ci)
        return val, mag

    def derivative(self):
        d = self.c[1:] * np.arange(1, len(self.c))
        return _Monomial(d / d[-1])

    def linear_root(self):
        return -self.c[0] / self.c[1]


_JACOBI_CACHE: dict = {}


class _Jacobi:
    """``P_d^(a,b)(1 - 2x/h)`` divided by its value at ``x = 0``.

    Only signs and zeros matter for root isolation, so the normalisation,
    which keeps every intermediate O(1), costs nothing.
    """

    def __init__(self, d, a, b, h=1.0):
        self.d, self.a, self.b, self.h = d, float(a), float(b), float(h)

    @property
    def degree(self):
        return self.d

    def _coefficients(self):
        key = (self.d, self.a, self.b)
        tab = _JACOBI_CACHE.get(key)
        if tab is None:
            a, b = self.a, self.b
            j = np.arange(1.0, self.d)
            s = 2.0 * j + a + b
            den = 2.0 * (j + 1) * (j + a + b + 1) * s
            # rescaled by P_{j+1}(1) = (a+1)_{j+1} / (j+1)!
            r1 = (j + 1.0) / (j + a + 1.0)
            r2 = r1 * j / (j + a)
            c1 = r1 * (s + 1) * (s + 2) * s / den
            c0 = r1 * (s + 1) * (a * a - b * b) / den
            c2 = r2 * 2.0 * (j + a) * (j + b) * (s + 2) / den
            tab = _JACOBI_CACHE[key] = tuple(zip(c1.tolist(), c0.tolist(), c2.tolist()))
        return tab

    def eval(self, x, with_mag=True):
        a, b = self.a, self.b
        t = 1.0 - 2.0 * np.asarray(x, dtype=float) / self.h
        prev = np.ones_like(t)
        if self.d == 0:
            return prev, prev
        cur = 1.0 + 0.5 * (a + b + 2.0) / (a + 1.0) * (t - 1.0)
        if not with_mag:
            for c1, c0, c2 in self._coefficients():
                prev, cur = cur, (c1 * t + c0) * cur - c2 * prev
            return cur, None
        mprev = prev
        mcur = 1.0 + 0.5 * (a + b + 2.0) / (a + 1.0) * np.abs(t - 1.0)
        at = np.abs(t)
        for c1, c0, c2 in self._coefficients():
            prev, cur = cur, (c1 * t + c0) * cur - c2 * prev
            mprev, mcur = mcur, (c1 * at + abs(c0)) * mcur + c2 * mprev
        return cur, mcur

    def derivative(self):
        return _Jacobi(self.d - 1, self.a + 1, self.b + 1, self.h)

    def linear_root(self):
        # P_1 vanishes at t = 1 - 2(a+1)/(a+b+2)
        return self.h * (self.a + 1.0) / (self.a + self.b + 2.0)


@dataclass(frozen=True, eq=False)
class RealRootedPoly:
    """Monic polynomial whose roots are all real and lie in ``(lo, hi]``.

    ``coeffs`` holds all ``degree + 1`` coefficients in ascending order, the
    last being exactly 1. ``hi_multiplicity`` counts roots known to sit exactly
    at ``hi``; ``kernel``, when set, evaluates the remaining cofactor stably.
    """

    coeffs: np.ndarray
    lo: float
    hi: float
    provenance: tuple
    hi_multiplicity: int = 0
    kernel: object = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def monic_coeffs(self) -> np.ndarray:
        """``c_0 .. c_{k-1}`` with ``p(x) = x^k + c_{k-1} x^{k-1} + ... + c_0``."""
        return self.coeffs[:-1]

    def __call__(self, x):
        return _Monomial(self.coeffs).eval(np.asarray(x, dtype=float))[0]


def elementary_symmetric(vals, r_max: int) -> np.ndarray:
    """Elementary symmetric polynomials ``e_0 .. e_{r_max}`` of ``vals``.

    Works along the last axis, so a ``(batch, d)`` input yields
    ``(batch, r_max + 1)``.
    """
    v = np.asarray(vals, dtype=float)
    d = v.shape[-1] if v.ndim else 0
    if r_max > d:
        raise ContractError(f"r_max={r_max} exceeds number of values {d}")
    e = np.zeros(v.shape[:-1] + (r_max + 1,))
    e[..., 0] = 1.0
    for j in range(d):
        vj = v[..., j, None]
        # RHS is evaluated before assignment, so this is the e_r += v e_{r-1} update
        e[..., 1:] = e[..., 1:] + vj * e[..., :-1]
    return e


def falling_ratios(N: int, K: int) -> np.ndarray:
    """``prod_{s<i} (K-s)/(N-s)`` for ``i = 0..K``."""
    s = np.arange(K)
    return np.concatenate(([1.0], np.cumprod((K - s) / (N - s))))


def derivative_monic(esym, N: int, K: int) -> np.ndarray:
    """Monic ascending coefficients of ``D^(N-K)[x^(N-d) prod (x - v_j)]``.

    ``esym`` holds ``e_0 .. e_r`` of the ``d`` values for some ``r``; missing
    high orders are treated as zero (they vanish for ``i > d``).
    """
    e = np.zeros(K + 1)
    r = min(len(esym), K + 1)
    e[:r] = np.asarray(esym, dtype=float)[:r]
    desc = (-1.0) ** np.arange(K + 1) * e * falling_ratios(N, K)
    return desc[::-1].copy()


def _check_sizes(n: int, m: int, k: int) -> None:
    # k = m is admitted: the roots stay real and positive
    if not 0 < k <= m < n:
        raise ContractError(f"need 0 < k <= m < n, got n={n}, m={m}, k={k}")


def _structural_kernel(n, m, k, h=1.0):
    mu = m + k - n
    return max(mu, 0), _Jacobi(min(k, n - m), m - k, abs(mu), h)


def structural_poly(n: int, m: int, k: int) -> RealRootedPoly:
    """Monic form of ``D^(n-k)[x^(n-m) (x-1)^m]``; roots in ``(0, 1]``.

    When ``n - k < m`` a root of multiplicity ``m + k - n`` stays at ``x = 1``.
    """
    _check_sizes(n, m, k)
    s = np.arange(k)
    # C(m, i) * prod_{s<i} (k-s)/(n-s), accumulated as one bounded product
    mag = np.concatenate(([1.0], np.cumprod((m - s) * (k - s) / ((s + 1.0) * (n - s)))))
    desc = (-1.0) ** np.arange(k + 1) * mag
    mult, kernel = _structural_kernel(n, m, k)
    return RealRootedPoly(desc[::-1].copy(), 0.0, 1.0, ("structural", n, m, k), mult, kernel)


def spectral_poly(n: int, k: int, S) -> RealRootedPoly:
    """Monic form of ``D^(n-k)[x^(n-m) prod_j (x - S_j^2)]``.

    ``S`` are singular values (not squared), ``m = len(S)``; roots lie in
    ``(0, max(S)^2]``.
    """
    S = np.sort(np.asarray(S, dtype=float).ravel())[::-1]
    m = S.size
    _check_sizes(n, m, k)
    if np.any(S <= 0) or not np.all(np.isfinite(S)):
        raise ContractError("singular values must be positive and finite")
    sq = S**2
    coeffs = derivative_monic(elementary_symmetric(sq, k), n, k)
    prov = ("spectral", n, k, tuple(float(x) for x in S))
    if np.all(sq == sq[0]):
        # a flat spectrum gives the structural polynomial rescaled by S^2
        mult, kernel = _structural_kernel(n, m, k, float(sq[0]))
        return RealRootedPoly(coeffs, 0.0, float(sq[0]), prov, mult, kernel)
    return RealRootedPoly(coeffs, 0.0, float(sq[0]), prov)


def differentiate(p: RealRootedPoly) -> RealRootedPoly:
    if p.degree < 2:
        raise ContractError("differentiate needs degree >= 2")
    if p.provenance[0] == "structural":
        # D f_k(n, m) is f_{k-1}(n, m) up to scale
        n, m, k = p.provenance[1:]
        return structural_poly(n, m, k - 1)
    d = p.coeffs[1:] * np.arange(1, p.degree + 1)
    return RealRootedPoly(d / d[-1], p.lo, p.hi, ("derivative", p.provenance))


def _isolate(f, lo, hi, max_iter):
    """Ascending roots of evaluator ``f`` given that all lie in ``[lo, hi]``."""
    if f.degree == 0:
        return np.empty(0)
    if f.degree == 1:
        return np.array([f.linear_root()])
    crit = np.clip(_isolate(f.derivative(), lo, hi, max_iter), lo, hi)
    pts = np.concatenate(([lo], crit, [hi]))
    a, b = pts[:-1].copy(), pts[1:].copy()
    fa, ma = f.eval(a)
    fb, mb = f.eval(b)
    at_a = np.abs(fa) <= MULTIPLE_ROOT_TOL * ma
    at_b = np.abs(fb) <= MULTIPLE_ROOT_TOL * mb
    roots = np.where(at_b, b, a)
    todo = ~(at_a | at_b)
    stuck = todo & (np.sign(fa) == np.sign(fb))
    if np.any(stuck):
        i = int(np.nonzero(stuck)[0][0])
        raise RootFindingError(
            f"no sign change on [{a[i]!r}, {b[i]!r}] and no multiple root at its ends",
            getattr(f, "c", ()),
        )
    idx = np.nonzero(todo)[0]
    if idx.size:
        roots[idx] = _bracketed(f, a[idx], b[idx], fa[idx], fb[idx], max_iter)
    return roots


def _bracketed(f, a, b, fa, fb, max_iter):
    """Illinois false position on sign-changing brackets.

    An element retires once its residual is exactly zero, its bracket is a few
    ulps wide, successive iterates settle to a few ulps after an already small
    step, or the false-position point rounds onto an endpoint (which is then
    the root to working precision).
    """
    out = 0.5 * (a + b)
    idx = np.arange(a.size)
    a, b, fa, fb = a.copy(), b.copy(), fa.copy(), fb.copy()
    x = out.copy()
    side = np.zeros(a.size, dtype=np.int8)
    last = np.full(a.size, np.inf)
    for it in range(max_iter):
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = a - fa * (b - a) / (fb - fa)
        bad = ~np.isfinite(xn)
        if bad.any():
            xn[bad] = 0.5 * (a[bad] + b[bad])
        landed = (xn <= a) | (xn >= b)
        if landed.any():
            xn[landed] = np.where(np.abs(fa[landed]) <= np.abs(fb[landed]), a[landed], b[landed])
        fx = f.eval(xn, with_mag=False)[0]
        step = np.abs(xn - x)
        x = xn
        tol = 4 * _EPS * np.abs(xn)
        done = landed | (fx == 0) | (b - a <= tol) | ((step <= tol) & (last <= 1e-6 * np.abs(xn)))
        last = step
        left = (fx > 0) == (fa > 0)
        # Illinois: halve the stale endpoint's value after two same-side moves
        fb[left & (side == 1)] *= 0.5
        fa[~left & (side == -1)] *= 0.5
        a[left], fa[left] = xn[left], fx[left]
        b[~left], fb[~left] = xn[~left], fx[~left]
        side = np.where(left, 1, -1).astype(np.int8)
        if done.any():
            out[idx[done]] = xn[done]
            keep = ~done
            if not keep.any():
                return out
            idx, a, b, fa, fb, x, side, last = (
                v[keep] for v in (idx, a, b, fa, fb, x, side, last)
            )
    out[idx] = x
    return out


def real_roots(p: RealRootedPoly, max_iter: int = MAX_ITER) -> np.ndarray:
    """All roots of ``p`` in descending order.

    Roots of the derivative split ``[lo, hi]`` into intervals holding one root
    each, which are then bracketed down. A multiple root shows up as a
    derivative root at which ``p`` vanishes to roundoff and is reported there.
    """
    hi = p.hi * (1.0 + 4 * _EPS)
    kernel = p.kernel if p.kernel is not None else _Monomial(p.coeffs)
    inner = _isolate(kernel, float(p.lo), hi, max_iter)
    roots = np.concatenate((np.full(p.hi_multiplicity, p.hi), np.minimum(inner, p.hi)))
    return np.sort(roots)[::-1]
