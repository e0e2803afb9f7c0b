"""Hilbert-matrix block cipher demo (pedagogical, not secure).

Each block of n bytes p is sent as c = H_n p in exact rationals.  Exact
decryption with the integer inverse recovers p; double-precision decryption
of the same ciphertext degrades as n grows.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import DomainError, format_rational, parse_rational
from .hilbert import hilbert_inverse_closed_form, hilbert_matrix, invert_float

MAX_BLOCK = 32
HEADER = "HILC"


@dataclass(frozen=True)
class CipherBlock:
    n: int
    plaintext: tuple[Fraction, ...]
    ciphertext: tuple[Fraction, ...]


def _check_block(n: int) -> None:
    if not 1 <= n <= MAX_BLOCK:
        raise DomainError(f"block size must be in 1..{MAX_BLOCK}, got {n}")


def encrypt_blocks(message: bytes, n: int) -> tuple[int, list[CipherBlock]]:
    _check_block(n)
    pad = (-len(message)) % n
    data = message + bytes(pad)
    h = hilbert_matrix(n)
    blocks = []
    for s in range(0, len(data), n):
        p = tuple(Fraction(b) for b in data[s:s + n])
        blocks.append(CipherBlock(n, p, h.apply(p)))
    return pad, blocks


def encrypt(message: bytes, n: int) -> str:
    pad, blocks = encrypt_blocks(message, n)
    lines = [f"{HEADER} {n} {pad}"]
    lines.extend(format_rational(c) for b in blocks for c in b.ciphertext)
    return "\n".join(lines) + "\n"


def parse_ciphertext(text: str) -> tuple[int, int, list[Fraction]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty ciphertext")
    head = lines[0].split()
    if len(head) != 3 or head[0] != HEADER:
        raise DomainError(f"malformed ciphertext header {lines[0]!r}")
    try:
        n, pad = int(head[1]), int(head[2])
    except ValueError:
        raise DomainError(f"malformed ciphertext header {lines[0]!r}") from None
    _check_block(n)
    values = [parse_rational(t) for t in lines[1:]]
    if len(values) % n:
        raise DomainError(f"{len(values)} ciphertext values is not a multiple of block size {n}")
    if not 0 <= pad < n or pad > len(values):
        raise DomainError(f"pad length {pad} inconsistent with block size {n}")
    return n, pad, values


def _decrypt_exact_values(n: int, values: list[Fraction]) -> list[Fraction]:
    inv = hilbert_inverse_closed_form(n)
    out: list[Fraction] = []
    for s in range(0, len(values), n):
        out.extend(inv.apply(values[s:s + n]))
    return out


def _to_bytes(vals, pad: int) -> bytes:
    body = list(vals[: len(vals) - pad] if pad else vals)
    if any(v.denominator != 1 or not 0 <= v <= 255 for v in body):
        raise DomainError("ciphertext does not decrypt to bytes")
    return bytes(int(v) for v in body)


@dataclass(frozen=True)
class FloatDecryption:
    n: int
    recovered: bytes
    corrupted: int
    max_abs_error: float


def decrypt(text: str, mode: str = "exact") -> bytes | FloatDecryption:
    """Exact mode returns the plaintext; float mode returns a corruption report.

    In float mode the recovered values are rounded to the nearest integer; a
    byte counts as corrupted when that integer differs from the exact
    decryption.  The returned bytes clamp those integers to 0..255.
    """
    n, pad, values = parse_ciphertext(text)
    exact = _decrypt_exact_values(n, values)
    if mode == "exact":
        return _to_bytes(exact, pad)
    if mode != "float":
        raise DomainError(f"unknown decryption mode {mode!r}")
    inv = invert_float(hilbert_matrix(n).to_float())
    c = np.array([float(v) for v in values], dtype=np.float64).reshape(-1, n)
    # Elementwise product and numpy's own summation: reproducible without BLAS.
    rec = (c[:, None, :] * inv[None, :, :]).sum(axis=2).ravel()
    keep = len(rec) - pad
    truth = np.array([float(v) for v in exact[:keep]])
    rec = rec[:keep]
    err = float(np.max(np.abs(rec - truth))) if keep else 0.0
    rounded = np.rint(rec)
    corrupted = int(np.count_nonzero(rounded != truth))
    clamped = np.clip(np.nan_to_num(rounded, nan=0.0), 0, 255).astype(np.int64)
    return FloatDecryption(n, bytes(clamped.tolist()), corrupted, err)
