"""The H*Delta^(m) transform on finite sections, its inverse, norm and bases.

All operators are the N x N sections; the inverse of the section is
``Delta^(m)^-1 @ H_N^-1``, which is an integer matrix.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .difference import MAX_M, apply_delta, delta_inverse, h_delta_matrix
from .exact import DomainError, ExactMatrix, SequencePrefix, mat_mul
from .hilbert import hilbert_inverse_closed_form, hilbert_matrix


@dataclass(frozen=True)
class TransformConfig:
    m: int
    N: int

    def __post_init__(self):
        if not 1 <= self.m <= MAX_M:
            raise DomainError(f"difference order m must be in 1..{MAX_M}, got {self.m}")
        if self.N < 1:
            raise DomainError(f"truncation length must be >= 1, got {self.N}")


class SpaceTag(str, enum.Enum):
    h0 = "h0"
    hc = "hc"
    hinf = "hinf"

    @property
    def target(self) -> str:
        return {"h0": "c0", "hc": "c", "hinf": "linf"}[self.value]


class Verdict(str, enum.Enum):
    satisfied = "satisfied-evidence"
    violated = "violated-evidence"
    inconclusive = "inconclusive"


def _check_len(x: SequencePrefix, cfg: TransformConfig) -> None:
    if x.N != cfg.N:
        raise DomainError(f"sequence length {x.N} does not match N = {cfg.N}")


@lru_cache(maxsize=None)
def inverse_transform_matrix(m: int, n: int) -> ExactMatrix:
    return mat_mul(delta_inverse(m, n), hilbert_inverse_closed_form(n))


def transform_matrix(cfg: TransformConfig) -> ExactMatrix:
    return h_delta_matrix(cfg.m, cfg.N)


def forward_transform(x: SequencePrefix, cfg: TransformConfig) -> SequencePrefix:
    _check_len(x, cfg)
    # H (Delta x) is cheaper than forming H*Delta.
    return SequencePrefix(hilbert_matrix(cfg.N).apply(apply_delta(cfg.m, x)))


def inverse_transform(y: SequencePrefix, cfg: TransformConfig) -> SequencePrefix:
    _check_len(y, cfg)
    return SequencePrefix(inverse_transform_matrix(cfg.m, cfg.N).apply(y.values))


def bk_norm(x: SequencePrefix, cfg: TransformConfig) -> Fraction:
    y = forward_transform(x, cfg)
    return max((abs(v) for v in y), default=Fraction(0))


def basis_vector(k: int, cfg: TransformConfig) -> SequencePrefix:
    if not 1 <= k <= cfg.N:
        raise DomainError(f"basis index {k} outside 1..{cfg.N}")
    return SequencePrefix(inverse_transform_matrix(cfg.m, cfg.N).col(k))


def basis_support_violations(k: int, cfg: TransformConfig) -> list[int]:
    """Indices n < k where the section's basis column is nonzero.

    A triangular basis would vanish there; the dense section inverse does not.
    """
    b = basis_vector(k, cfg)
    return [n for n in range(1, k) if b[n] != 0]


def summation_vector_t(cfg: TransformConfig) -> SequencePrefix:
    inv = inverse_transform_matrix(cfg.m, cfg.N)
    return SequencePrefix(sum(r, Fraction(0)) for r in (inv.row(i) for i in range(1, cfg.N + 1)))


@dataclass(frozen=True)
class MembershipDiagnostics:
    tag: SpaceTag
    transform_prefix: SequencePrefix
    sup_abs: Fraction
    tail_trend: float
    verdict: Verdict
    reason: str = ""
    checkpoints: dict = field(default_factory=dict)


MIN_DIAGNOSTIC_N = 9


def _tail_slope(vals: np.ndarray) -> float:
    if len(vals) < 2:
        return 0.0
    idx = np.arange(len(vals), dtype=np.float64)
    return float(np.polyfit(idx, vals, 1)[0])


def _monotone_growth(absy: list[Fraction]) -> bool:
    return absy[-1] > absy[0] and all(b >= a for a, b in zip(absy, absy[1:]))


def membership_diagnostics(x: SequencePrefix, tag: SpaceTag | str, cfg: TransformConfig) -> MembershipDiagnostics:
    """Finite-section evidence that ``x`` lies in h0/hc/hinf(Delta^(m)).

    Evidence only: a prefix can never settle a limit.
    """
    tag = SpaceTag(tag)
    _check_len(x, cfg)
    y = forward_transform(x, cfg)
    absy = [abs(v) for v in y]
    sup_abs = max(absy, default=Fraction(0))
    n = cfg.N
    third = math.ceil(n / 3)
    tail = np.array([float(v) for v in absy[n - third:]])
    slope = _tail_slope(tail)

    def result(verdict: Verdict, reason: str, checkpoints=None) -> MembershipDiagnostics:
        return MembershipDiagnostics(tag, y, sup_abs, slope, verdict, reason, checkpoints or {})

    if n < MIN_DIAGNOSTIC_N:
        return result(Verdict.inconclusive, f"N = {n} too small for a trend (need >= {MIN_DIAGNOSTIC_N})")
    if sup_abs == 0:
        return result(Verdict.satisfied, "transform is identically zero")

    if tag is SpaceTag.hinf:
        cps = [math.ceil(n / 4), math.ceil(n / 2), n]
        sups = {c: max(absy[:c]) for c in cps}
        s = [sups[c] for c in cps]
        if s[-2] and abs(float(s[-1] / s[-2]) - 1.0) < 0.01:
            return result(Verdict.satisfied, "running sup of |y_n| has flattened", sups)
        if all(a > 0 and b >= Fraction(3, 2) * a for a, b in zip(s, s[1:])):
            return result(Verdict.violated, "running sup of |y_n| grows >= 50% per doubling", sups)
        return result(Verdict.inconclusive, "running sup neither flat nor growing", sups)

    head = absy[:third]
    last = absy[n - third:]
    if tag is SpaceTag.h0:
        stats = {"head_max": max(head), "tail_max": max(last), "last": absy[-1]}
        if 2 * max(last) <= max(head) and float(absy[-1]) < 1e-2 * float(sup_abs):
            return result(Verdict.satisfied, "|y_n| tail has decayed toward zero", stats)
    else:
        def spread(vals):
            return max(vals) - min(vals)

        head_y, last_y = list(y.values[:third]), list(y.values[n - third:])
        stats = {"head_spread": spread(head_y), "tail_spread": spread(last_y)}
        if 2 * spread(last_y) <= spread(head_y) and float(spread(last_y)) < 1e-2 * float(sup_abs):
            return result(Verdict.satisfied, "tail of y_n has flattened (Cauchy-like)", stats)
    if _monotone_growth(absy):
        return result(Verdict.violated, "|y_n| grows monotonically", stats)
    return result(Verdict.inconclusive, "tail trend not decisive", stats)
