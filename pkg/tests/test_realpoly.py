import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ripbounds.errors import ContractError
from ripbounds.realpoly import (
    RealRootedPoly,
    differentiate,
    elementary_symmetric,
    real_roots,
    spectral_poly,
    structural_poly,
)

x = sympy.Symbol("x")


def exact_structural(n, m, k):
    """Monic coefficients (ascending) of D^(n-k)[x^(n-m)(x-1)^m] in rationals."""
    f = sympy.diff(x ** (n - m) * (x - 1) ** m, x, n - k)
    c = sympy.Poly(f, x).all_coeffs()[::-1]
    return [Fraction(int(sympy.fraction(ci / c[-1])[0]), int(sympy.fraction(ci / c[-1])[1])) for ci in c]


def structural_grid(n_max):
    for n in range(3, n_max + 1):
        for m in range(2, n):
            for k in range(1, m + 1):
                yield n, m, k


def test_structural_example():
    np.testing.assert_allclose(structural_poly(3, 2, 2).coeffs, [1 / 3, -4 / 3, 1], rtol=1e-15)


def test_symbolic_oracle_all_n_up_to_8():
    for n, m, k in structural_grid(8):
        exact = exact_structural(n, m, k)
        got = structural_poly(n, m, k).coeffs
        np.testing.assert_allclose(got, [float(c) for c in exact], rtol=1e-14, atol=0)
        assert got[k - 1] == pytest.approx(-m * k / n, rel=1e-14)
        assert got[0] == pytest.approx((-1) ** k * math.comb(m, k) / math.comb(n, k), rel=1e-14)


def test_structural_rejects_bad_sizes():
    for n, m, k in [(3, 3, 2), (5, 3, 4), (5, 3, 0)]:
        with pytest.raises(ContractError):
            structural_poly(n, m, k)


def test_spectral_unit_spectrum_reduces_to_structural():
    for n, m, k in structural_grid(12):
        a = spectral_poly(n, k, np.ones(m)).coeffs
        b = structural_poly(n, m, k).coeffs
        np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-14)


def test_spectral_example_and_homogeneity():
    np.testing.assert_allclose(spectral_poly(3, 2, [1.0, 1.0]).coeffs, [1 / 3, -4 / 3, 1], rtol=1e-15)
    for sigma in (0.3, 1.7, 25.0):
        r = real_roots(spectral_poly(20, 5, np.full(8, sigma)))
        np.testing.assert_allclose(r, sigma**2 * real_roots(structural_poly(20, 8, 5)), rtol=1e-12)


def test_spectral_rejects_nonpositive():
    with pytest.raises(ContractError):
        spectral_poly(5, 2, [1.0, 0.0, 0.5])


def test_elementary_symmetric_examples():
    np.testing.assert_array_equal(elementary_symmetric([1, 1, 1], 3), [1, 3, 3, 1])
    np.testing.assert_array_equal(elementary_symmetric([2, 3], 2), [1, 5, 6])
    np.testing.assert_array_equal(elementary_symmetric([1, 2, 3], 2), [1, 6, 11])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=7))
def test_elementary_symmetric_matches_expansion(vals):
    e = elementary_symmetric(np.array(vals, float), len(vals))
    coeffs = sympy.Poly(sympy.prod([x - v for v in vals]), x).all_coeffs()
    np.testing.assert_array_equal(e, [(-1) ** i * int(c) for i, c in enumerate(coeffs)])


def test_differentiate_examples():
    d = differentiate(structural_poly(3, 2, 2))
    np.testing.assert_allclose(d.coeffs, [-2 / 3, 1], rtol=1e-15)
    p = RealRootedPoly(np.array([0.3 * 0.7, -1.0, 1.0]), 0.0, 1.0, ("test",))
    assert real_roots(differentiate(p))[0] == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ContractError):
        differentiate(d)


def test_derivative_roots_interlace():
    for n in range(4, 21):
        for m in range(2, n):
            for k in range(2, min(m, 6) + 1):
                if m + k > n:
                    continue  # root at 1 is repeated
                r = real_roots(structural_poly(n, m, k))
                d = real_roots(differentiate(structural_poly(n, m, k)))
                assert np.all(r[1:] < d) and np.all(d < r[:-1])


def test_real_roots_examples():
    np.testing.assert_allclose(real_roots(structural_poly(3, 2, 2)), [1, 1 / 3], rtol=1e-15)
    for n, m in [(5, 2), (9, 4), (40, 17)]:
        assert real_roots(structural_poly(n, m, 1))[0] == pytest.approx(m / n, rel=1e-15)
    r = real_roots(structural_poly(6, 3, 2))
    w = math.sqrt(9 / 5) / 6
    np.testing.assert_allclose(r, [0.5 + w, 0.5 - w], rtol=1e-14)


def test_repeated_root_at_one():
    r = real_roots(structural_poly(10, 7, 5))
    assert np.sum(r == 1.0) == 2
    np.testing.assert_allclose(r[2:], [0.5 + math.sqrt(3) / 6, 0.5, 0.5 - math.sqrt(3) / 6], rtol=1e-14)


def test_roots_against_mpmath_for_random_spectra():
    rng = np.random.default_rng(0)
    for _ in range(100):
        m = int(rng.integers(2, 10))
        n = m + int(rng.integers(1, 10))
        k = int(rng.integers(1, m + 1))
        p = spectral_poly(n, k, rng.uniform(0.3, 2.0, m))
        ref = mpmath.polyroots([mpmath.mpf(c) for c in p.coeffs[::-1]], maxsteps=400, extraprec=400)
        ref = np.sort([float(mpmath.re(z)) for z in ref])[::-1]
        np.testing.assert_allclose(real_roots(p), ref, rtol=0, atol=1e-12 * p.hi)


def test_structural_roots_against_high_precision():
    for n, m, k in [(30, 17, 17), (30, 16, 14), (25, 20, 12), (60, 12, 11)]:
        f = sympy.Poly(sympy.diff(x ** (n - m) * (x - 1) ** m, x, n - k), x)
        mu = max(m + k - n, 0)
        q, rem = sympy.div(f, sympy.Poly((x - 1) ** mu, x))
        assert rem.is_zero
        ref = [1.0] * mu + [float(sympy.re(z)) for z in q.nroots(n=40, maxsteps=500)]
        ref = np.sort(ref)[::-1]
        np.testing.assert_allclose(real_roots(structural_poly(n, m, k)), ref, rtol=0, atol=1e-12)


def test_iteration_cap_refinement_is_monotone():
    for n, m, k in [(20, 9, 6), (30, 22, 8), (12, 7, 7)]:
        p = structural_poly(n, m, k)
        base = real_roots(p, max_iter=200)
        for cap in (60, 100, 400):
            np.testing.assert_allclose(real_roots(p, max_iter=cap), base, rtol=0, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 40).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(2, n - 1)).flatmap(
        lambda t: st.tuples(st.just(t[0]), st.just(t[1]), st.integers(1, t[1])))))
def test_roots_in_domain_and_viete(nmk):
    n, m, k = nmk
    r = real_roots(structural_poly(n, m, k))
    assert len(r) == k and np.all(np.diff(r) <= 0)
    assert np.all(r > 0) and np.all(r <= 1.0)
    assert r.sum() == pytest.approx(m * k / n, rel=1e-10)
    assert np.prod(r) == pytest.approx(math.comb(m, k) / math.comb(n, k), rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.1, 5.0), min_size=2, max_size=8), st.integers(1, 8), st.integers(1, 6))
def test_spectral_roots_within_hint_and_viete(S, k, extra):
    m = len(S)
    k = min(k, m)
    n = m + extra
    p = spectral_poly(n, k, S)
    r = real_roots(p)
    assert np.all(r > 0) and np.all(r <= p.hi)
    sq = np.square(S)
    assert r.sum() == pytest.approx(k / n * sq.sum(), rel=1e-9)
