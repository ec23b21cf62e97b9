import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ripbounds import linalg
from ripbounds.errors import ContractError, MatrixParseError

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_singular_values_examples():
    np.testing.assert_allclose(linalg.singular_values(np.eye(2)), [1, 1])
    np.testing.assert_allclose(linalg.singular_values([[3, 0], [0, 4]]), [4, 3])
    np.testing.assert_allclose(linalg.singular_values([[1, 1, 0], [0, 1, 1]]), [math.sqrt(3), 1])


def test_singular_values_against_numpy():
    for seed in range(20):
        M = linalg.random_gaussian(5, 8, seed)
        ref = np.linalg.svd(M, compute_uv=False)
        np.testing.assert_allclose(linalg.singular_values(M), ref, rtol=0, atol=1e-10 * ref[0])


def test_gram_examples():
    np.testing.assert_array_equal(linalg.gram(np.eye(2)), np.eye(2))
    np.testing.assert_array_equal(linalg.gram([[1, 0], [0, 2]]), [[1, 0], [0, 4]])
    np.testing.assert_array_equal(linalg.gram([[1, 1], [0, 1]]), [[1, 1], [1, 2]])


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=finite))
def test_gram_exactly_symmetric(M):
    G = linalg.gram(M)
    assert np.array_equal(G, G.T)


def test_gram_spectrum_is_squared_singular_values():
    for seed in range(10):
        M = linalg.random_gaussian(5, 8, seed)
        w = linalg.jacobi_eigvalsh(linalg.gram(M.T))
        s = linalg.singular_values(M)
        np.testing.assert_allclose(w, s**2, rtol=1e-9)


def test_jacobi_matches_numpy_batch():
    rng = np.random.default_rng(3)
    B = rng.standard_normal((200, 7, 7))
    A = B + np.swapaxes(B, 1, 2)
    ref = np.sort(np.linalg.eigvalsh(A), axis=1)[:, ::-1]
    np.testing.assert_allclose(linalg.jacobi_eigvalsh(A), ref, atol=1e-12)


def test_interlacing_under_column_deletion():
    for seed in range(10):
        M = linalg.random_gaussian(4, 6, seed)
        s = linalg.singular_values(M)
        for cols in itertools.combinations(range(6), 5):
            t = linalg.singular_values(M[:, cols])
            # deleting one column: s[i+1] <= t[i] <= s[i]
            assert np.all(t <= s + 1e-12)
            assert np.all(t[:-1] >= s[1:] - 1e-12)


def test_submatrix_columns():
    M = np.array([[1, 2, 3], [4, 5, 6]], float)
    np.testing.assert_array_equal(linalg.submatrix_columns(M, (0, 1, 2)), M)
    np.testing.assert_array_equal(linalg.submatrix_columns(M, (0, 2)), [[1, 3], [4, 6]])
    np.testing.assert_array_equal(linalg.submatrix_columns(M, (1,)), [[2], [5]])
    with pytest.raises(ContractError):
        linalg.submatrix_columns(M, (0, 3))
    with pytest.raises(ContractError):
        linalg.submatrix_columns(M, (2, 1))


def test_enumerate_k_subsets():
    assert list(linalg.enumerate_k_subsets(3, 2)) == [(0, 1), (0, 2), (1, 2)]
    assert list(linalg.enumerate_k_subsets(4, 1)) == [(0,), (1,), (2,), (3,)]
    s = list(linalg.enumerate_k_subsets(5, 3))
    assert len(s) == 10 and s[0] == (0, 1, 2) and s[-1] == (2, 3, 4)
    with pytest.raises(ContractError):
        linalg.enumerate_k_subsets(3, 4)


def test_enumerate_counts_up_to_12():
    for n in range(1, 13):
        for k in range(1, n + 1):
            subsets = list(linalg.enumerate_k_subsets(n, k))
            assert len(set(subsets)) == len(subsets) == math.factorial(n) // (
                math.factorial(k) * math.factorial(n - k))


def test_subset_chunks_cover_table():
    rows = np.concatenate([r for _, r in linalg.subset_chunks(9, 4, chunk=7)])
    assert [tuple(r) for r in rows] == list(itertools.combinations(range(9), 4))


def test_normalize_columns():
    np.testing.assert_allclose(linalg.normalize_columns([[3.0], [4.0]]), [[0.6], [0.8]])
    np.testing.assert_allclose(linalg.normalize_columns([[2, 0], [0, 5]]), np.eye(2))
    with pytest.raises(ContractError, match="column 1"):
        linalg.normalize_columns([[1, 0], [1, 0]])


@settings(max_examples=50, deadline=None)
@given(arrays(float, (3, 4), elements=st.floats(0.1, 10)))
def test_normalize_idempotent(M):
    N = linalg.normalize_columns(M)
    np.testing.assert_allclose(np.linalg.norm(N, axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(linalg.normalize_columns(N), N, atol=1e-12)


def test_random_gaussian_determinism_and_moments():
    A = linalg.random_gaussian(100, 100, 7)
    assert np.array_equal(A, linalg.random_gaussian(100, 100, 7))
    assert abs(A.mean()) < 0.05
    assert abs(A.var() - 1.0) < 0.1


def test_random_with_spectrum():
    Q = linalg.random_with_spectrum(4, 4, np.ones(4), 1)
    np.testing.assert_allclose(Q.T @ Q, np.eye(4), atol=1e-8)
    S = np.array([3.0, 2.0, 0.5])
    M = linalg.random_with_spectrum(3, 7, S, 2)
    np.testing.assert_allclose(linalg.singular_values(M), S, rtol=1e-8)
    assert np.array_equal(M, linalg.random_with_spectrum(3, 7, S, 2))
    with pytest.raises(ContractError):
        linalg.random_with_spectrum(3, 7, S[:2], 2)


def test_matrix_text_roundtrip(tmp_path):
    M = linalg.random_gaussian(3, 5, 11) * 1e-3
    path = tmp_path / "m.txt"
    linalg.write_matrix(M, path)
    assert np.array_equal(linalg.read_matrix(path), M)


def test_matrix_text_comments_and_no_trailing_newline():
    M = linalg.read_matrix("# header comment\n2 2\n1 2\n  # inner\n3 4")
    np.testing.assert_array_equal(M, [[1, 2], [3, 4]])


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("2 x\n1 2\n", 1, 1),
        ("2 2\n1 2\n", 2, None),
        ("2 2\n1 2\n3\n", 3, None),
        ("2 2\n1 2\n3 abc\n", 3, 3),
        ("1 1\nnan\n", 2, 1),
    ],
)
def test_matrix_parse_errors(text, line, column):
    with pytest.raises(MatrixParseError) as exc:
        linalg.read_matrix(text)
    assert exc.value.line == line
    assert exc.value.column == column
