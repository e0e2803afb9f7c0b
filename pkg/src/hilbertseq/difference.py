"""Backward difference triangles of order m and the composed Hilbert-difference matrix."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exact import DomainError, ExactMatrix, binomial, mat_mul
from .hilbert import hilbert_matrix

MAX_M = 32


def _check(m: int, n: int) -> None:
    if m < 1:
        raise DomainError(f"difference order must be >= 1, got {m}")
    if n < 1:
        raise DomainError(f"section size must be >= 1, got {n}")


def delta_entry(m: int, n: int, k: int) -> int:
    """(-1)^(n-k) C(m, n-k) on the band max(1, n-m) <= k <= n, zero elsewhere."""
    if k < max(1, n - m) or k > n:
        return 0
    return (-1) ** (n - k) * binomial(m, n - k)


@lru_cache(maxsize=None)
def delta_matrix(m: int, n: int) -> ExactMatrix:
    _check(m, n)
    return ExactMatrix.from_function(n, n, lambda i, k: delta_entry(m, i, k))


@lru_cache(maxsize=None)
def delta_inverse(m: int, n: int) -> ExactMatrix:
    """Lower triangle with entries C(m+n-i-1, n-i)."""
    _check(m, n)
    return ExactMatrix.from_function(n, n, lambda r, i: binomial(m + r - i - 1, r - i) if i <= r else 0)


@lru_cache(maxsize=None)
def h_delta_matrix(m: int, n: int) -> ExactMatrix:
    """The n x n section of H * Delta^(m), i.e. H_n times the Delta^(m) section."""
    _check(m, n)
    return mat_mul(hilbert_matrix(n), delta_matrix(m, n))


def h_delta_entry(m: int, n: int, k: int, size: int) -> Fraction:
    """Entry (n, k) of :func:`h_delta_matrix` summed directly over the band.

    Row n of H_size meets column k of Delta^(m) at i = k .. min(k+m, size).
    """
    return sum(
        (Fraction((-1) ** (i - k) * binomial(m, i - k), n + i - 1) for i in range(k, min(k + m, size) + 1)),
        Fraction(0),
    )


def h_delta_triangular_entry(m: int, n: int, k: int) -> Fraction:
    """sum_{i=k}^{n} (-1)^(i-k) C(m, i-k) / (n+i-1), zero for k > n.

    This is the lower-triangular reading of the composed matrix, where the
    inner sum stops at i = n.  It coincides with :func:`h_delta_entry` exactly
    when k + m <= n, or on the last row of a section (n == size).
    """
    if k > n:
        return Fraction(0)
    return sum(
        (Fraction((-1) ** (i - k) * binomial(m, i - k), n + i - 1) for i in range(k, n + 1)),
        Fraction(0),
    )


def h_delta_triangular(m: int, n: int) -> ExactMatrix:
    _check(m, n)
    return ExactMatrix.from_function(n, n, lambda r, k: h_delta_triangular_entry(m, r, k))


def apply_delta(m: int, x) -> tuple[Fraction, ...]:
    """(Delta^(m) x)_k = sum_{i=0}^{m} (-1)^i C(m, i) x_{k-i}, with x_j = 0 for j < 1."""
    return tuple(
        sum(((-1) ** i * binomial(m, i) * x[k - i] for i in range(0, m + 1)), Fraction(0))
        for k in range(1, len(x) + 1)
    )
