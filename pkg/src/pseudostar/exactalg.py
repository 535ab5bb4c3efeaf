"""Dense linear algebra over a prime field F_p.

Matrices are ``numpy`` ``int64`` arrays holding residues in ``[0, p)``.
Every routine reduces after each multiply, so the largest intermediate is
``p * p + p``; primes up to ``MAX_PRIME`` keep that inside a signed 64-bit
word.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

DEFAULT_PRIME = 2147483647
SECOND_PRIME = 2147483659
MIN_PRIME = 1 << 30
MAX_PRIME = 3037000493  # largest prime with p * (p + 1) < 2**63
PRIME_ENV_VAR = "PSEUDOSTAR_PRIME"

_LIMB = 1 << 16


class SingularMatrix(ArithmeticError):
    """Raised when an inverse is requested for a rank-deficient matrix."""


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Validate ``p`` as a working modulus and return it."""
    from sympy import isprime

    p = int(p)
    if not MIN_PRIME < p <= MAX_PRIME:
        raise ValueError(f"prime {p} outside the supported range (2^30, {MAX_PRIME}]")
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    return p


def default_prime() -> int:
    """The process-wide default modulus, overridable via ``PSEUDOSTAR_PRIME``."""
    value = os.environ.get(PRIME_ENV_VAR)
    return check_prime(int(value)) if value else DEFAULT_PRIME


def as_matrix(entries, p: int, cols: int | None = None) -> np.ndarray:
    """Coerce ``entries`` to a reduced ``int64`` matrix.

    Python integers of any size are reduced before conversion, so inputs such
    as ``-1`` or ``2**70`` are accepted.
    """
    if isinstance(entries, np.ndarray) and entries.dtype == np.int64:
        arr = entries % p
    else:
        rows = [[int(v) % p for v in row] for row in entries]
        if not rows:
            return np.zeros((0, cols or 0), dtype=np.int64)
        arr = np.array(rows, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("expected a two-dimensional matrix")
    return arr


def row_reduce(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` over F_p.

    Pivots are taken as the first nonzero entry at or below the current row
    (lowest row index wins), so the result depends only on the entries.

    Returns:
        ``(R, pivots)`` where ``R`` has exactly ``rank`` rows.
    """
    R = np.array(M, dtype=np.int64) % p
    nrows, ncols = R.shape
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(R[r:, col])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = pow(int(R[r, col]), -1, p)
        R[r, col:] = R[r, col:] * inv % p
        colvals = R[:, col].copy()
        colvals[r] = 0
        others = np.flatnonzero(colvals)
        if others.size:
            R[others, col:] = (R[others, col:] - np.outer(colvals[others], R[r, col:])) % p
        pivots.append(col)
        r += 1
    return R[:r], pivots


def rank(M: np.ndarray, p: int) -> int:
    """Rank of ``M`` over F_p (forward elimination only)."""
    R = np.array(M, dtype=np.int64) % p
    if R.ndim != 2 or R.size == 0:
        return 0
    nrows, ncols = R.shape
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(R[r:, col])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        below = r + 1 + np.flatnonzero(R[r + 1:, col])
        if below.size:
            factors = R[below, col] * pow(int(R[r, col]), -1, p) % p
            R[below, col:] = (R[below, col:] - np.outer(factors, R[r, col:])) % p
        r += 1
    return r


def kernel_columns(M: np.ndarray, p: int) -> np.ndarray:
    """Right kernel of ``M`` as the columns of a ``cols x nullity`` matrix.

    Column ``j`` is the standard kernel vector attached to the ``j``-th free
    column of the RREF; no further normalization is applied.
    """
    ncols = M.shape[1]
    R, pivots = row_reduce(M, p)
    free = [j for j in range(ncols) if j not in set(pivots)]
    K = np.zeros((ncols, len(free)), dtype=np.int64)
    if free:
        K[free, np.arange(len(free))] = 1
        if pivots:
            K[pivots, :] = (-R[:, free]) % p
    return K


def kernel_basis(M: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the right kernel, returned as the rows of an RREF matrix."""
    M = np.asarray(M, dtype=np.int64)
    K = kernel_columns(M, p)
    if K.shape[1] == 0:
        return []
    R, _ = row_reduce(K.T, p)
    return [row.copy() for row in R]


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """``A @ B mod p`` using float64 BLAS on 16-bit limbs.

    Each limb product is below 2**32, so inner dimensions up to 2**20 keep
    every partial sum exactly representable in a double.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] > (1 << 20):
        raise ValueError("inner dimension too large for exact limb products")
    if A.size == 0 or B.size == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    a_hi, a_lo = np.divmod(A, _LIMB)
    b_hi, b_lo = np.divmod(B, _LIMB)
    a_hi, a_lo = a_hi.astype(np.float64), a_lo.astype(np.float64)
    b_hi, b_lo = b_hi.astype(np.float64), b_lo.astype(np.float64)
    hh = (a_hi @ b_hi).astype(np.int64) % p
    mid = ((a_hi @ b_lo).astype(np.int64) + (a_lo @ b_hi).astype(np.int64)) % p
    ll = (a_lo @ b_lo).astype(np.int64) % p
    shift32 = (_LIMB * _LIMB) % p
    return (hh * shift32 % p + mid * _LIMB % p + ll) % p


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def invert_linear_change(A: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square matrix over F_p.

    Raises:
        SingularMatrix: if ``A`` is not invertible.
    """
    A = np.asarray(A, dtype=np.int64) % p
    n, m = A.shape
    if n != m:
        raise ValueError("invert_linear_change expects a square matrix")
    R, pivots = row_reduce(np.hstack([A, identity(n)]), p)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise SingularMatrix(f"matrix of size {n} has rank {sum(1 for c in pivots if c < n)}")
    return R[:n, n:].copy()


def complete_to_basis(rows: np.ndarray, p: int) -> np.ndarray:
    """Extend independent RREF rows to an invertible square matrix.

    The appended rows are unit vectors at the non-pivot columns, which keeps
    the completion deterministic.
    """
    R, pivots = row_reduce(rows, p)
    n = R.shape[1]
    if R.shape[0] != rows.shape[0]:
        raise SingularMatrix("rows are not independent")
    extra = [j for j in range(n) if j not in set(pivots)]
    units = np.zeros((len(extra), n), dtype=np.int64)
    units[np.arange(len(extra)), extra] = 1
    return np.vstack([np.asarray(rows, dtype=np.int64) % p, units])
