"""Hilbert matrices, their closed-form inverse, and conditioning measurements."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exact import DomainError, ExactMatrix, SingularMatrixError, binomial, inf_norm

#: Largest size accepted by the CLI; inverse entries grow roughly like 4**(2n).
MAX_N = 64


def _check_n(n: int) -> None:
    if n < 1:
        raise DomainError(f"Hilbert size must be >= 1, got {n}")


@lru_cache(maxsize=None)
def hilbert_matrix(n: int) -> ExactMatrix:
    _check_n(n)
    return ExactMatrix.from_function(n, n, lambda i, j: Fraction(1, i + j - 1))


def hilbert_inverse_entry(n: int, i: int, j: int, literal: bool = False) -> int:
    """Entry (i, j) of the inverse of the n x n Hilbert matrix.

    The squared binomial is ``C(i+j-2, i-1)``.  With ``literal=True`` the
    widely reprinted ``C(i+j-1, i-1)`` is used instead; that variant is *not*
    an inverse (for n = 2 its (2, 2) entry is 27 rather than 12) and exists
    only so the two can be compared.
    """
    top = i + j - 1 if literal else i + j - 2
    sign = -1 if (i + j) % 2 else 1
    return (
        sign
        * (i + j - 1)
        * binomial(n + i - 1, n - j)
        * binomial(n + j - 1, n - i)
        * binomial(top, i - 1) ** 2
    )


@lru_cache(maxsize=None)
def hilbert_inverse_closed_form(n: int, literal: bool = False) -> ExactMatrix:
    _check_n(n)
    return ExactMatrix.from_function(n, n, lambda i, j: hilbert_inverse_entry(n, i, j, literal))


def invert_float(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse in double precision with partial pivoting.

    No scaling and no iterative refinement, so rounding error is left visible.
    """
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    work = np.hstack([a, np.eye(n)])
    for c in range(n):
        p = c + int(np.argmax(np.abs(work[c:, c])))
        if work[p, c] == 0.0:
            raise SingularMatrixError("matrix is singular in double precision")
        if p != c:
            work[[c, p]] = work[[p, c]]
        work[c] /= work[c, c]
        for r in range(n):
            if r != c and work[r, c] != 0.0:
                work[r] -= work[r, c] * work[c]
    return work[:, n:]


def _exact_residual_max(inv: np.ndarray, n: int) -> float:
    """max |inv @ H_n - I| evaluated exactly, then rounded to a float."""
    # Floats are dyadic: scale by a common power of two and by lcm(1..2n-1)
    # so the whole product stays in Python ints.
    ratios = [[float(v).as_integer_ratio() for v in row] for row in inv]
    d = max(q for row in ratios for _, q in row)
    nums = [[p * (d // q) for p, q in row] for row in ratios]
    lcm = math.lcm(*range(1, 2 * n))
    hcols = [[lcm // (k + j - 1) for k in range(1, n + 1)] for j in range(1, n + 1)]
    scale = d * lcm
    worst = 0
    for i in range(n):
        for j in range(n):
            s = sum(x * y for x, y in zip(nums[i], hcols[j]))
            if i == j:
                s -= scale
            worst = max(worst, abs(s))
    return worst / scale


@dataclass(frozen=True)
class ConditioningReport:
    n: int
    kappa_exact: Fraction
    kappa_float: float
    roundtrip_error: float


def kappa_exact(n: int) -> Fraction:
    return inf_norm(hilbert_matrix(n)) * inf_norm(hilbert_inverse_closed_form(n))


def condition_inf(n: int) -> ConditioningReport:
    _check_n(n)
    h = hilbert_matrix(n)
    hf = h.to_float()
    inv = invert_float(hf)
    kappa_float = float(np.max(np.sum(np.abs(hf), axis=1)) * np.max(np.sum(np.abs(inv), axis=1)))
    return ConditioningReport(n, kappa_exact(n), kappa_float, _exact_residual_max(inv, n))


@dataclass(frozen=True)
class InstabilityScan:
    threshold: float
    reports: tuple[ConditioningReport, ...]
    first_unstable: int | None


def instability_scan(n_max: int, threshold: float) -> InstabilityScan:
    if not 1 <= n_max <= MAX_N:
        raise DomainError(f"n_max must be in 1..{MAX_N}, got {n_max}")
    reports = tuple(condition_inf(n) for n in range(1, n_max + 1))
    first = next((r.n for r in reports if r.roundtrip_error > threshold), None)
    return InstabilityScan(threshold, reports, first)
