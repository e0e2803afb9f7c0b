"""Exact rational scalars, matrices and sequence prefixes.

Every mathematical index here is 1-based: ``A[i, j]`` with ``1 <= i <= rows``
and ``x[k]`` with ``1 <= k <= N``.  Storage is 0-based internally.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

BigRational = Fraction
Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DomainError(ValueError):
    """An input outside the mathematical domain of an operation."""


class SingularMatrixError(DomainError):
    pass


def as_rational(value: Scalar | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact input")
    return Fraction(value)


def rat_arith(a: Fraction, b: Fraction, op: str) -> Fraction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("division by zero rational")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def binomial(n: int, k: int) -> int:
    """C(n, k) for n >= 0; zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def _lcm_denominators(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        if v.denominator != 1:
            d = math.lcm(d, v.denominator)
    return d


class ExactMatrix:
    """Immutable dense matrix of Fractions with 1-based ``(i, j)`` access."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Sequence[Sequence[Scalar]]):
        rows = tuple(tuple(as_rational(v) for v in row) for row in data)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0

    @classmethod
    def _wrap(cls, rows: tuple[tuple[Fraction, ...], ...], ncols: int | None = None) -> "ExactMatrix":
        obj = cls.__new__(cls)
        obj._data = rows
        obj.rows = len(rows)
        obj.cols = len(rows[0]) if rows else (ncols or 0)
        return obj

    @classmethod
    def from_function(cls, rows: int, cols: int, f: Callable[[int, int], Scalar]) -> "ExactMatrix":
        return cls._wrap(
            tuple(tuple(as_rational(f(i, j)) for j in range(1, cols + 1)) for i in range(1, rows + 1)),
            cols,
        )

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls.from_function(n, n, lambda i, j: 1 if i == j else 0)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        return cls._wrap(tuple((_ZERO,) * cols for _ in range(rows)), cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexError(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return self._data[i - 1][j - 1]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i - 1]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j - 1] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def section(self, n: int, k: int | None = None) -> "ExactMatrix":
        """Top-left ``n x k`` block."""
        k = n if k is None else k
        if n > self.rows or k > self.cols:
            raise DomainError(f"section {n}x{k} exceeds {self.rows}x{self.cols}")
        return ExactMatrix._wrap(tuple(r[:k] for r in self._data[:n]), k)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix._wrap(tuple(zip(*self._data)), self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self._data == other._data and self.shape == other.shape

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols})"

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix._wrap(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self._data, other._data)), self.cols
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix._wrap(
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self._data, other._data)), self.cols
        )

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "ExactMatrix":
        c = as_rational(c)
        return ExactMatrix._wrap(tuple(tuple(c * a for a in r) for r in self._data), self.cols)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mat_mul(self, other)

    def _check_same(self, other: "ExactMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def apply(self, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Matrix-vector product with a plain 0-based vector of length ``cols``."""
        if len(x) != self.cols:
            raise ValueError(f"vector length {len(x)} != cols {self.cols}")
        return tuple(_dot(r, x) for r in self._data)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for r in self._data for v in r)

    def is_identity(self) -> bool:
        return self == ExactMatrix.identity(self.rows) if self.rows == self.cols else False

    def to_float(self):
        import numpy as np

        return np.array([[float(v) for v in r] for r in self._data], dtype=np.float64)

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines.extend(" ".join(format_rational(v) for v in r) for r in self._data)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExactMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise DomainError("empty matrix text")
        try:
            rows, cols = (int(t) for t in lines[0].split())
        except ValueError:
            raise DomainError(f"bad matrix header {lines[0]!r}") from None
        body = lines[1:]
        if len(body) != rows:
            raise DomainError(f"expected {rows} rows, found {len(body)}")
        data = []
        for ln in body:
            toks = ln.split()
            if len(toks) != cols:
                raise DomainError(f"expected {cols} entries in row {ln!r}")
            data.append([parse_rational(t) for t in toks])
        return cls._wrap(tuple(tuple(r) for r in data), cols)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    # Sum over a common denominator: one gcd instead of one per term.
    num = 0
    den = 1
    for x, y in zip(a, b):
        if not x or not y:
            continue
        pn = x.numerator * y.numerator
        pd = x.denominator * y.denominator
        if pd == den:
            num += pn
        else:
            g = math.gcd(den, pd)
            num = num * (pd // g) + pn * (den // g)
            den = den // g * pd
    return Fraction(num, den)


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bt = tuple(zip(*b._data))
    if a.is_integral() and b.is_integral():
        ai = [[v.numerator for v in r] for r in a._data]
        bi = [[v.numerator for v in c] for c in bt]
        return ExactMatrix._wrap(
            tuple(tuple(Fraction(sum(x * y for x, y in zip(r, c))) for c in bi) for r in ai), b.cols
        )
    return ExactMatrix._wrap(tuple(tuple(_dot(r, c) for c in bt) for r in a._data), b.cols)


def invert_elimination(a: ExactMatrix) -> ExactMatrix:
    """Exact Gauss-Jordan inverse; pivots on the first exactly nonzero entry."""
    if a.rows != a.cols:
        raise ValueError("only square matrices can be inverted")
    n = a.rows
    work = [list(r) + [_ONE if i == j else _ZERO for j in range(n)] for i, r in enumerate(a._data)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if work[r][c] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is not invertible")
        work[c], work[pivot] = work[pivot], work[c]
        p = work[c][c]
        prow = [v / p for v in work[c]]
        work[c] = prow
        for r in range(n):
            if r != c:
                f = work[r][c]
                if f:
                    work[r] = [x - f * y for x, y in zip(work[r], prow)]
    return ExactMatrix._wrap(tuple(tuple(r[n:]) for r in work), n)


def inf_norm(a: ExactMatrix) -> Fraction:
    """Maximum absolute row sum."""
    return max((sum((abs(v) for v in r), _ZERO) for r in a._data), default=_ZERO)


def format_rational(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_rational(token: str) -> Fraction:
    try:
        if "/" in token:
            p, q = token.split("/")
            if int(q) == 0:
                raise DomainError(f"zero denominator in {token!r}")
            return Fraction(int(p), int(q))
        return Fraction(int(token))
    except ValueError:
        raise DomainError(f"not an exact rational: {token!r}") from None


class SequencePrefix:
    """Finite prefix ``(x_1, ..., x_N)``; indices below 1 read as zero."""

    __slots__ = ("values",)

    def __init__(self, values: Iterable[Scalar]):
        self.values: tuple[Fraction, ...] = tuple(as_rational(v) for v in values)

    @classmethod
    def zeros(cls, n: int) -> "SequencePrefix":
        return cls((_ZERO,) * n)

    @classmethod
    def ones(cls, n: int) -> "SequencePrefix":
        return cls((_ONE,) * n)

    @classmethod
    def unit(cls, k: int, n: int) -> "SequencePrefix":
        if not 1 <= k <= n:
            raise DomainError(f"unit index {k} outside 1..{n}")
        return cls(_ONE if i == k else _ZERO for i in range(1, n + 1))

    @property
    def N(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> Fraction:
        if k < 1:
            return _ZERO
        if k > len(self.values):
            raise IndexError(f"index {k} beyond prefix length {len(self.values)}")
        return self.values[k - 1]

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SequencePrefix):
            return NotImplemented
        return self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"SequencePrefix({', '.join(format_rational(v) for v in self.values)})"

    def __add__(self, other: "SequencePrefix") -> "SequencePrefix":
        if len(other) != len(self):
            raise ValueError("length mismatch")
        return SequencePrefix(a + b for a, b in zip(self.values, other.values))

    def __sub__(self, other: "SequencePrefix") -> "SequencePrefix":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "SequencePrefix":
        c = as_rational(c)
        return SequencePrefix(c * v for v in self.values)

    def to_text(self) -> str:
        return "".join(format_rational(v) + "\n" for v in self.values)

    @classmethod
    def from_text(cls, text: str) -> "SequencePrefix":
        return cls(parse_rational(t) for t in text.split())
