"""Dense real matrices, spectra, column operations and k-subset enumeration.

Matrices are plain 2-D float64 numpy arrays; spectra are 1-D arrays sorted in
descending order. Symmetric eigenproblems are solved with a cyclic Jacobi
iteration that is vectorised over a leading batch axis, so the Gram matrices of
many small submatrices can be diagonalised in one call.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import ContractError, MatrixParseError

JACOBI_TOL = 1e-14
MAX_SWEEPS = 60


def as_matrix(M) -> np.ndarray:
    """Validate and return ``M`` as a float64 2-D array."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ContractError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractError("matrix entries must be finite")
    return A


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """The package's single source of randomness.

    PCG64 seeded from ``(seed, *stream)`` so independent streams (e.g. one per
    Monte-Carlo trial) can be derived deterministically.
    """
    if seed < 0 or any(s < 0 for s in stream):
        raise ContractError("seeds and stream indices must be non-negative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *stream])))


def jacobi_eigvalsh(A, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of symmetric matrices by cyclic two-sided Jacobi rotations.

    Parameters
    ----------
    A : array_like, shape (..., k, k)
        Symmetric matrix or stack of symmetric matrices.
    tol : float
        A matrix is converged once its off-diagonal Frobenius norm is below
        ``tol`` times its Frobenius norm.

    Returns
    -------
    ndarray, shape (..., k)
        Eigenvalues sorted in descending order.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ContractError(f"expected square matrices, got shape {A.shape}")
    batch_shape = A.shape[:-2]
    k = A.shape[-1]
    # batch axis last so every row/column update is a contiguous slice
    W = np.ascontiguousarray(np.moveaxis(A.reshape(-1, k, k), 0, -1))
    if k > 1 and W.shape[-1] > 0:
        fro = np.sqrt(np.einsum("ijb,ijb->b", W, W))
        offmask = ~np.eye(k, dtype=bool)
        pairs = [(p, q) for p in range(k - 1) for q in range(p + 1, k)]
        for _ in range(max_sweeps):
            off = np.sqrt(np.sum(W[offmask] ** 2, axis=0))
            active = off > tol * fro
            if not np.any(active):
                break
            B = W if np.all(active) else np.ascontiguousarray(W[:, :, active])
            for p, q in pairs:
                apq = B[p, q]
                nz = apq != 0.0
                if not np.any(nz):
                    continue
                with np.errstate(divide="ignore", invalid="ignore"):
                    tau = (B[q, q] - B[p, p]) / (2.0 * apq)
                    t = np.copysign(1.0, tau) / (np.abs(tau) + np.hypot(1.0, tau))
                t = np.where(nz, t, 0.0)
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rp = B[p].copy()
                rq = B[q].copy()
                B[p] = c * rp - s * rq
                B[q] = s * rp + c * rq
                cp = B[:, p].copy()
                cq = B[:, q].copy()
                B[:, p] = c * cp - s * cq
                B[:, q] = s * cp + c * cq
                # the rotation annihilates the pivot exactly
                B[p, q] = np.where(nz, 0.0, B[p, q])
                B[q, p] = B[p, q]
            if B is not W:
                W[:, :, active] = B
    w = np.diagonal(W, axis1=0, axis2=1)  # (batch, k)
    w = -np.sort(-w, axis=1)
    return w.reshape(*batch_shape, k)


def gram(M) -> np.ndarray:
    """Column Gram matrix ``MᵀM``, exactly symmetric."""
    A = as_matrix(M)
    G = A.T @ A
    upper = np.triu(G)
    return upper + np.triu(G, 1).T


def singular_values(M) -> np.ndarray:
    """The ``min(m, n)`` singular values of ``M`` in descending order.

    Computed as square roots of the eigenvalues of the smaller-side Gram
    matrix; negative eigenvalues caused by roundoff are clamped to zero.
    """
    A = as_matrix(M)
    m, n = A.shape
    G = gram(A.T) if m <= n else gram(A)
    w = jacobi_eigvalsh(G)
    return np.sqrt(np.clip(w, 0.0, None))


def squared_singular_values_batch(B) -> np.ndarray:
    """Squared singular values for a stack of ``(batch, l, k)`` matrices.

    Returns ``(batch, min(l, k))`` in descending order.
    """
    B = np.asarray(B, dtype=float)
    l, k = B.shape[-2:]
    if l <= k:
        G = B @ np.swapaxes(B, -1, -2)
    else:
        G = np.swapaxes(B, -1, -2) @ B
    G = 0.5 * (G + np.swapaxes(G, -1, -2))
    return np.clip(jacobi_eigvalsh(G), 0.0, None)


def submatrix_columns(M, s) -> np.ndarray:
    """The ``m × k`` submatrix of ``M`` holding columns ``s`` in order."""
    A = as_matrix(M)
    idx = check_subset(s, A.shape[1])
    return A[:, list(idx)]


def check_subset(s, n: int) -> tuple[int, ...]:
    idx = tuple(int(i) for i in s)
    if not idx:
        raise ContractError("subset must be non-empty")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ContractError(f"subset {idx} is not strictly increasing")
    if idx[0] < 0 or idx[-1] >= n:
        raise ContractError(f"subset {idx} out of range for {n} columns")
    return idx


def enumerate_k_subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All k-subsets of ``range(n)`` in lexicographic order."""
    if not 1 <= k <= n:
        raise ContractError(f"need 1 <= k <= n, got n={n}, k={k}")
    return itertools.combinations(range(n), k)


@lru_cache(maxsize=64)
def _subset_table(n: int, k: int) -> np.ndarray:
    table = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), k)),
        dtype=np.intp,
        count=math.comb(n, k) * k,
    ).reshape(-1, k)
    table.flags.writeable = False
    return table


def subset_chunks(n: int, k: int, chunk: int = 65536) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(offset, rows)`` blocks of the lexicographic k-subset table.

    Small tables are cached; large ones are streamed so memory stays bounded.
    """
    if not 1 <= k <= n:
        raise ContractError(f"need 1 <= k <= n, got n={n}, k={k}")
    total = math.comb(n, k)
    if total <= 1 << 16:
        table = _subset_table(n, k)
        for off in range(0, total, chunk):
            yield off, table[off:off + chunk]
        return
    it = itertools.combinations(range(n), k)
    off = 0
    while True:
        block = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(it, chunk)), dtype=np.intp
        ).reshape(-1, k)
        if block.shape[0] == 0:
            return
        yield off, block
        off += block.shape[0]


def normalize_columns(M) -> np.ndarray:
    A = as_matrix(M)
    norms = np.linalg.norm(A, axis=0)
    bad = np.nonzero(norms == 0.0)[0]
    if bad.size:
        raise ContractError(f"column {int(bad[0])} has zero norm")
    return A / norms


def random_gaussian(m: int, n: int, seed: int, *stream: int) -> np.ndarray:
    """``m × n`` matrix of i.i.d. standard normal entries."""
    if m < 1 or n < 1:
        raise ContractError("matrix dimensions must be positive")
    return rng_for(seed, *stream).standard_normal((m, n))


def orthonormal_columns(A) -> np.ndarray:
    """Orthonormalise the columns of ``A``.

    Modified Gram-Schmidt with a second (re-orthogonalisation) pass.
    """
    Q = np.array(A, dtype=float, copy=True)
    for j in range(Q.shape[1]):
        v = Q[:, j]
        for _ in range(2):
            for i in range(j):
                v -= (Q[:, i] @ v) * Q[:, i]
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            raise ContractError(f"column {j} is linearly dependent")
        Q[:, j] = v / nrm
    return Q


def random_with_spectrum(m: int, n: int, S, seed: int) -> np.ndarray:
    """Random ``m × n`` matrix ``U diag(S) Vᵀ`` with prescribed singular values."""
    S = np.asarray(S, dtype=float)
    if S.shape != (m,):
        raise ContractError(f"spectrum has length {S.size}, expected m={m}")
    if m > n:
        raise ContractError("need m <= n")
    if np.any(S <= 0):
        raise ContractError("prescribed singular values must be positive")
    rng = rng_for(seed)
    U = orthonormal_columns(rng.standard_normal((m, m)))
    V = orthonormal_columns(rng.standard_normal((n, m)))
    return (U * S) @ V.T


def read_matrix(source) -> np.ndarray:
    """Parse the matrix text format.

    Line 1 is ``"m n"``; then ``m`` rows of ``n`` decimal literals. Lines whose
    first non-blank character is ``#`` are comments. ``source`` is a path or
    the text itself (anything containing a newline is treated as text).
    """
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    lines = [
        (no, line)
        for no, line in enumerate(text.split("\n"), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise MatrixParseError("missing header 'm n'", 1)
    no, header = lines[0]
    parts = header.strip().split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise MatrixParseError(f"header must be two integers 'm n', got {header.strip()!r}", no, 1)
    m, n = int(parts[0]), int(parts[1])
    if m < 1 or n < 1:
        raise MatrixParseError("dimensions must be positive", no, 1)
    rows = lines[1:]
    if len(rows) != m:
        last = rows[-1][0] if rows else no
        raise MatrixParseError(f"expected {m} data rows, found {len(rows)}", last)
    out = np.empty((m, n))
    for r, (no, line) in enumerate(rows):
        fields = line.split()
        if len(fields) != n:
            raise MatrixParseError(f"expected {n} entries, found {len(fields)}", no)
        col = 1
        for c, tok in enumerate(fields):
            col = line.index(tok, col - 1) + 1
            try:
                val = float(tok)
            except ValueError:
                raise MatrixParseError(f"not a decimal number: {tok!r}", no, col) from None
            if not math.isfinite(val):
                raise MatrixParseError(f"non-finite entry {tok!r}", no, col)
            out[r, c] = val
            col += len(tok)
    return out


def format_matrix(M) -> str:
    """Render ``M`` in the matrix text format with round-trip exact literals."""
    A = as_matrix(M)
    rows = [f"{A.shape[0]} {A.shape[1]}"]
    rows += [" ".join(repr(float(x)) for x in row) for row in A]
    return "\n".join(rows) + "\n"


def write_matrix(M, path) -> None:
    Path(path).write_text(format_matrix(M), encoding="utf-8", newline="\n")
