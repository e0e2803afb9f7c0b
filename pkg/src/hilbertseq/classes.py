"""Matrix classes (X : Y) checked on finite sections.

A condition such as ``sup_n sum_k |a_nk| < inf`` cannot be decided from
finitely many entries.  Each condition is therefore turned into a functional
measured on several section sizes, and the trend across sizes is classified
as satisfied-evidence, violated-evidence or inconclusive.

Section conventions:

* Entries outside the N x N section read as zero (so ``a_{n,N+1} = 0``).
* "for all k" conditions look at the fixed columns ``k <= ceil(sizes[0]/2)``.
* Column limits ``lim_n a_nk`` are estimated by the bottom row of the largest
  section.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .difference import h_delta_matrix
from .exact import DomainError, ExactMatrix, SequencePrefix, binomial, mat_mul
from .hilbert import hilbert_matrix
from .transform import TransformConfig, Verdict, inverse_transform_matrix

_ZERO = Fraction(0)

# --------------------------------------------------------------------------
# generators


class MatrixGenerator:
    """An infinite matrix given by its entries, or by a family of sections.

    ``entry`` is total for ``n, k >= 1`` when present.  Families whose N-th
    section is not the top-left block of one fixed matrix (the D and E
    matrices built from section inverses) supply ``section_fn`` instead.
    """

    def __init__(
        self,
        kind: str,
        entry: Callable[[int, int], Fraction] | None = None,
        *,
        section_fn: Callable[[int], ExactMatrix] | None = None,
        params: dict | None = None,
        known_truth: dict[str, bool] | None = None,
    ):
        if entry is None and section_fn is None:
            raise ValueError("need an entry function or a section function")
        self.kind = kind
        self._entry = entry
        self._section_fn = section_fn
        self.params = params or {}
        self.known_truth = known_truth or {}
        self._cache: dict[int, ExactMatrix] = {}

    def entry(self, n: int, k: int) -> Fraction:
        if self._entry is None:
            raise DomainError(f"{self.kind} matrix is only defined section by section")
        if n < 1 or k < 1:
            raise IndexError(f"({n}, {k}) is not a valid 1-based index")
        return Fraction(self._entry(n, k))

    def section(self, n: int) -> ExactMatrix:
        if n not in self._cache:
            if self._section_fn is not None:
                self._cache[n] = self._section_fn(n)
            else:
                self._cache[n] = ExactMatrix.from_function(n, n, self.entry)
        return self._cache[n]

    def __repr__(self) -> str:
        extra = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"MatrixGenerator({self.kind}{', ' + extra if extra else ''})"


def _open_unit(r, name: str) -> Fraction:
    r = Fraction(r)
    if not 0 < r < 1:
        raise DomainError(f"{name} requires 0 < r < 1, got {r}")
    return r


def identity() -> MatrixGenerator:
    return MatrixGenerator("identity", lambda n, k: Fraction(int(n == k)))


def zero() -> MatrixGenerator:
    return MatrixGenerator("zero", lambda n, k: _ZERO)


def ones() -> MatrixGenerator:
    return MatrixGenerator("ones", lambda n, k: Fraction(1))


def hilbert() -> MatrixGenerator:
    return MatrixGenerator("hilbert", lambda n, k: Fraction(1, n + k - 1))


def cesaro() -> MatrixGenerator:
    return MatrixGenerator("cesaro", lambda n, k: Fraction(1, n) if k <= n else _ZERO)


def euler(r) -> MatrixGenerator:
    """Euler means: entry (n, k) = C(n-1, k-1) (1-r)^(n-k) r^(k-1) for k <= n.

    Row n is the binomial distribution of ``n - 1`` trials, shifted to 1-based
    indices, so every row sums to 1.
    """
    r = _open_unit(r, "euler")
    s = 1 - r

    def entry(n, k):
        if k > n:
            return _ZERO
        return binomial(n - 1, k - 1) * s ** (n - k) * r ** (k - 1)

    return MatrixGenerator("euler", entry, params={"r": r})


def riesz(weights: Sequence | Callable[[int], Fraction]) -> MatrixGenerator:
    """Riesz means t_k / T_n for k <= n with T_n = t_1 + ... + t_n.

    A finite ``weights`` sequence is repeated periodically.
    """
    if callable(weights):
        weight = lambda k: Fraction(weights(k))  # noqa: E731
        label = getattr(weights, "__name__", "callable")
    else:
        ws = [Fraction(w) for w in weights]
        if not ws:
            raise DomainError("riesz needs at least one weight")
        weight = lambda k: ws[(k - 1) % len(ws)]  # noqa: E731
        label = ",".join(str(w) for w in ws)
    totals = [_ZERO]

    def total(n: int) -> Fraction:
        while len(totals) <= n:
            t = weight(len(totals))
            if t <= 0:
                raise DomainError(f"riesz weights must be positive, t_{len(totals)} = {t}")
            totals.append(totals[-1] + t)
        return totals[n]

    def entry(n, k):
        if k > n:
            return _ZERO
        return weight(k) / total(n)

    return MatrixGenerator("riesz", entry, params={"t": label})


def taylor(r) -> MatrixGenerator:
    """Taylor matrix C(k, n) (1-r)^(n+1) r^(k-n) for k >= n (upper triangular)."""
    r = _open_unit(r, "taylor")
    s = 1 - r

    def entry(n, k):
        if k < n:
            return _ZERO
        return binomial(k, n) * s ** (n + 1) * r ** (k - n)

    return MatrixGenerator("taylor", entry, params={"r": r})


def from_matrix(a: ExactMatrix, kind: str = "file") -> MatrixGenerator:
    def section_fn(n):
        return a.section(n)

    gen = MatrixGenerator(kind, section_fn=section_fn, params={"shape": f"{a.rows}x{a.cols}"})
    gen._entry = lambda n, k: a[n, k]
    return gen


def from_file(path: str | Path) -> MatrixGenerator:
    return from_matrix(ExactMatrix.from_text(Path(path).read_text()), kind="file")


def composed(t: MatrixGenerator, a: MatrixGenerator) -> MatrixGenerator:
    """T * A for a lower-triangular T; entries need only rows j <= n of A."""

    def entry(n, k):
        return sum((t.entry(n, j) * a.entry(j, k) for j in range(1, n + 1)), _ZERO)

    return MatrixGenerator("composed", entry, params={"left": t.kind, "right": a.kind})


def classical_generator(kind: str, **params) -> MatrixGenerator:
    factories = {
        "cesaro": cesaro,
        "euler": euler,
        "riesz": riesz,
        "taylor": taylor,
        "hilbert": hilbert,
        "identity": identity,
        "zero": zero,
        "ones": ones,
    }
    if kind == "file":
        return from_file(params["path"])
    if kind not in factories:
        raise DomainError(f"unknown matrix kind {kind!r}")
    return factories[kind](**params)


# --------------------------------------------------------------------------
# V, D and E


def _config(cfg: TransformConfig | None, m: int | None, n: int | None) -> TransformConfig:
    return cfg if cfg is not None else TransformConfig(m, n)


def build_V(a: SequencePrefix, cfg: TransformConfig) -> ExactMatrix:
    """v_nk = sum_{j<=n} a_j u^-1_jk with U^-1 the section inverse of H*Delta^(m).

    Then sum_{k<=n} a_k x_k = (V y)_n for y the transform of x.
    """
    if a.N != cfg.N:
        raise DomainError(f"sequence length {a.N} does not match N = {cfg.N}")
    uinv = inverse_transform_matrix(cfg.m, cfg.N)
    rows = []
    acc = [_ZERO] * cfg.N
    for j in range(1, cfg.N + 1):
        aj = a[j]
        if aj:
            acc = [s + aj * u for s, u in zip(acc, uinv.row(j))]
        rows.append(list(acc))
    return ExactMatrix(rows)


def build_D(a: MatrixGenerator | ExactMatrix, cfg: TransformConfig) -> ExactMatrix:
    """D = A U^-1 on the section, so that D y = A x."""
    sec = a if isinstance(a, ExactMatrix) else a.section(cfg.N)
    return mat_mul(sec, inverse_transform_matrix(cfg.m, cfg.N))


def build_E(a: MatrixGenerator | ExactMatrix, cfg: TransformConfig) -> ExactMatrix:
    """E = (H Delta^(m)) A on the section, so that E z = H Delta^(m) (A z)."""
    sec = a if isinstance(a, ExactMatrix) else a.section(cfg.N)
    return mat_mul(h_delta_matrix(cfg.m, cfg.N), sec)


def d_family(a: MatrixGenerator, m: int) -> MatrixGenerator:
    return MatrixGenerator("D", section_fn=lambda n: build_D(a, TransformConfig(m, n)), params={"of": a.kind, "m": m})


def e_family(a: MatrixGenerator, m: int) -> MatrixGenerator:
    return MatrixGenerator("E", section_fn=lambda n: build_E(a, TransformConfig(m, n)), params={"of": a.kind, "m": m})


def v_family(a: SequencePrefix, m: int) -> MatrixGenerator:
    def section_fn(n):
        if n > a.N:
            raise DomainError(f"sequence of length {a.N} too short for section {n}")
        return build_V(SequencePrefix(a.values[:n]), TransformConfig(m, n))

    return MatrixGenerator("V", section_fn=section_fn, params={"m": m})


# --------------------------------------------------------------------------
# trend classification


def _max_abs_diff(u, v) -> Fraction:
    if isinstance(u, tuple):
        return max((abs(a - b) for a, b in zip(u, v)), default=_ZERO)
    return abs(u - v)


def classify_bounded(values: Sequence[Fraction]) -> Verdict:
    """Finite-sup functional: flat (or shrinking) at the top two sizes vs steady growth."""
    prev, last = values[-2], values[-1]
    if last <= prev or (prev > 0 and float(last / prev) < 1.01):
        return Verdict.satisfied
    if all(a > 0 and b >= Fraction(3, 2) * a for a, b in zip(values, values[1:])):
        return Verdict.violated
    return Verdict.inconclusive


def classify_vanishing(values: Sequence[Fraction]) -> Verdict:
    """Limit-zero functional: collapse by 1e-3 (or exact zero) vs non-decreasing."""
    first, last = values[0], values[-1]
    if last == 0 or (first > 0 and float(last / first) < 1e-3):
        return Verdict.satisfied
    if first > 0 and all(b >= a for a, b in zip(values, values[1:])):
        return Verdict.violated
    return Verdict.inconclusive


def classify_convergent(values: Sequence) -> Verdict:
    """Limit-exists functional, judged by gaps between consecutive sizes.

    Satisfied when every gap is zero or the gaps shrink by a factor <= 3/4 at
    each step; violated when the gaps are positive and non-decreasing.
    """
    gaps = [_max_abs_diff(b, a) for a, b in zip(values, values[1:])]
    if all(g == 0 for g in gaps):
        return Verdict.satisfied
    if all(a > 0 and b <= Fraction(3, 4) * a for a, b in zip(gaps, gaps[1:])) or gaps[-1] == 0:
        return Verdict.satisfied
    if gaps[-1] > 0 and all(b >= a for a, b in zip(gaps, gaps[1:])):
        return Verdict.violated
    return Verdict.inconclusive


_CLASSIFIERS = {"bounded": classify_bounded, "vanishing": classify_vanishing, "convergent": classify_convergent}


# --------------------------------------------------------------------------
# conditions


class _Ctx:
    """Section accessor shared by the condition functionals."""

    def __init__(self, gen: MatrixGenerator, sizes: Sequence[int]):
        self.gen = gen
        self.sizes = list(sizes)
        self.K = math.ceil(self.sizes[0] / 2)
        self.top = self.sizes[-1]

    def sec(self, n: int) -> ExactMatrix:
        return self.gen.section(n)

    @staticmethod
    def get(s: ExactMatrix, n: int, k: int) -> Fraction:
        if n > s.rows or k > s.cols:
            return _ZERO
        return s[n, k]

    def diff_row(self, s: ExactMatrix, n: int) -> list[Fraction]:
        r = s.row(n)
        return [a - b for a, b in zip(r, r[1:] + (_ZERO,))]

    def limit_row(self) -> tuple[Fraction, ...]:
        big = self.sec(self.top)
        return big.row(big.rows)


def _abs_sum(vals: Iterable[Fraction]) -> Fraction:
    return sum((abs(v) for v in vals), _ZERO)


def _c3_1(ctx, n):
    s = ctx.sec(n)
    return max(_abs_sum(s.row(i)) for i in range(1, n + 1))


def _column_vector(ctx, n):
    s = ctx.sec(n)
    return tuple(s[n, k] for k in range(1, ctx.K + 1))


def _c3_3(ctx, n):
    return sum(ctx.sec(n).row(n), _ZERO)


def _c3_4(ctx, n):
    alpha = ctx.limit_row()
    return abs(_abs_sum(ctx.sec(n).row(n)) - _abs_sum(alpha[:n]))


def _c3_5(ctx, n):
    s = ctx.sec(n)
    return max(abs(s[n, k]) for k in range(1, ctx.K + 1))


def _c3_6(ctx, n):
    s = ctx.sec(n)
    partial = [_ZERO] * n
    best = _ZERO
    for i in range(1, n + 1):
        partial = [p + v for p, v in zip(partial, s.row(i))]
        best = max(best, _abs_sum(partial))
    return best


def _c3_7(ctx, n):
    s = ctx.sec(n)
    return tuple(sum(s.col(k), _ZERO) for k in range(1, ctx.K + 1))


def _c3_8(ctx, n):
    s = ctx.sec(n)
    return sum((sum(s.row(i), _ZERO) for i in range(1, n + 1)), _ZERO)


def _c3_10(ctx, n):
    s = ctx.sec(n)
    start = math.ceil(n / 2)
    return _abs_sum(sum((s[i, k] for i in range(start, n + 1)), _ZERO) for k in range(1, n + 1))


def _c4_1(ctx, n):
    s = ctx.sec(n)
    return max(abs(s[i, n]) for i in range(1, ctx.K + 1))


def _c4_2(ctx, n):
    return abs(sum(ctx.sec(n).row(n), _ZERO))


def _c4_3(ctx, n):
    return _abs_sum(ctx.sec(n).row(n))


def _c4_4(ctx, n):
    return _abs_sum(ctx.diff_row(ctx.sec(n), n))


def _c4_5(ctx, n):
    s = ctx.sec(n)
    return max(_abs_sum(ctx.diff_row(s, i)) for i in range(1, n + 1))


def _c4_6(ctx, n):
    return tuple(ctx.diff_row(ctx.sec(n), n)[: ctx.K])


def _c4_7(ctx, n):
    alpha = ctx.limit_row()
    adiff = [a - b for a, b in zip(alpha, alpha[1:] + (_ZERO,))]
    return abs(_abs_sum(ctx.diff_row(ctx.sec(n), n)) - _abs_sum(adiff[: n - 1]) - abs(alpha[n - 1]))


def _c4_8(ctx, n):
    s = ctx.sec(n)
    return max(abs(s[i, n]) for i in range(1, n + 1))


@dataclass(frozen=True)
class Condition:
    id: str
    text: str
    kind: str
    functional: Callable
    uses_limit_row: bool = False


CONDITIONS: dict[str, Condition] = {
    c.id: c
    for c in [
        Condition("C3.1", "sup_n sum_k |a_nk| < inf", "bounded", _c3_1),
        Condition("C3.2", "lim_n a_nk = alpha_k for all k", "convergent", _column_vector),
        Condition("C3.3", "lim_n sum_k a_nk exists", "convergent", _c3_3),
        Condition("C3.4", "lim_n sum_k |a_nk| = sum_k |lim_n a_nk|", "vanishing", _c3_4, True),
        Condition("C3.5", "lim_n a_nk = 0 for all k", "vanishing", _c3_5),
        Condition("C3.6", "sup_m sum_k |sum_{n<=m} a_nk| < inf", "bounded", _c3_6),
        Condition("C3.7", "sum_n a_nk convergent for all k", "convergent", _c3_7),
        Condition("C3.8", "sum_n sum_k a_nk convergent", "convergent", _c3_8),
        Condition("C3.9", "lim_n a_nk exists for all k", "convergent", _column_vector),
        Condition("C3.10", "lim_m sum_k |sum_{n>=m} a_nk| = 0", "vanishing", _c3_10),
        Condition("C4.1", "lim_k a_nk = 0 for all n", "vanishing", _c4_1),
        Condition("C4.2", "lim_n sum_k a_nk = 0", "vanishing", _c4_2),
        Condition("C4.3", "lim_n sum_k |a_nk| = 0", "vanishing", _c4_3),
        Condition("C4.4", "lim_n sum_k |a_nk - a_n,k+1| = 0", "vanishing", _c4_4),
        Condition("C4.5", "sup_n sum_k |a_nk - a_n,k+1| < inf", "bounded", _c4_5),
        Condition("C4.6", "lim_n (a_nk - a_n,k+1) exists for all k", "convergent", _c4_6),
        Condition(
            "C4.7",
            "lim_n sum_k |a_nk - a_n,k+1| = sum_k |lim_n (a_nk - a_n,k+1)|",
            "vanishing",
            _c4_7,
            True,
        ),
        Condition("C4.8", "sup_n |lim_k a_nk| < inf", "bounded", _c4_8),
    ]
}


@dataclass(frozen=True)
class ConditionVerdict:
    condition: str
    status: Verdict
    witness: dict
    N_used: tuple[int, ...]

    @property
    def satisfied(self) -> bool:
        return self.status is Verdict.satisfied


def _check_sizes(sizes: Sequence[int]) -> list[int]:
    sizes = [int(s) for s in sizes]
    if len(sizes) < 3:
        raise DomainError("need at least three section sizes")
    if any(b <= a for a, b in zip(sizes, sizes[1:])) or sizes[0] < 2:
        raise DomainError(f"section sizes must be strictly increasing and >= 2, got {sizes}")
    return sizes


def evaluate_condition(cid: str, gen: MatrixGenerator, sizes: Sequence[int]) -> ConditionVerdict:
    if cid not in CONDITIONS:
        raise DomainError(f"unsupported condition {cid!r}")
    cond = CONDITIONS[cid]
    ctx = _Ctx(gen, _check_sizes(sizes))
    used = ctx.sizes[:-1] if cond.uses_limit_row else ctx.sizes
    witness = {n: cond.functional(ctx, n) for n in used}
    status = _CLASSIFIERS[cond.kind]([witness[n] for n in used])
    return ConditionVerdict(cid, status, witness, tuple(ctx.sizes))


# --------------------------------------------------------------------------
# class tables

SPACES = ("c0", "c", "linf", "bs", "cs", "h0D", "hcD", "hinfD")
_DELTA_UNDERLYING = {"h0D": "c0", "hcD": "c", "hinfD": "linf"}
_ALIASES = {"l_inf": "linf", "ellinf": "linf", "h0": "h0D", "hc": "hcD", "hinf": "hinfD"}

CELLS: dict[str, tuple[str, ...]] = {
    "1": ("C3.1",),
    "2": ("C3.1", "C3.9"),
    "3": ("C3.6",),
    "4": ("C3.6", "C3.7"),
    "5": ("C3.1", "C3.9", "C3.3"),
    "6": ("C3.6", "C3.7", "C3.8"),
    "7": ("C3.9", "C3.4"),
    "8": ("C3.10",),
    "9": ("C4.3",),
    "10": ("C3.1", "C3.5", "C4.2"),
    "11": ("C4.1", "C4.4"),
    "12": ("C3.5", "C4.5"),
    "13": ("C4.1", "C4.6", "C4.7"),
    "14": ("C4.5", "C3.9"),
    "15": ("C4.1", "C4.5"),
    "16": ("C4.5", "C4.8"),
}

# (from, to) -> cell, for X in {c0, c, linf} and Y in {linf, c, bs, cs}
TABLE1 = {
    ("c0", "linf"): "1", ("c0", "c"): "2", ("c0", "bs"): "3", ("c0", "cs"): "4",
    ("c", "linf"): "1", ("c", "c"): "5", ("c", "bs"): "3", ("c", "cs"): "6",
    ("linf", "linf"): "1", ("linf", "c"): "7", ("linf", "bs"): "3", ("linf", "cs"): "8",
}  # fmt: skip

# (from, to) -> cell, for X in {linf, c, bs, cs} and Y in {c0, c, linf}
TABLE2 = {
    ("linf", "c0"): "9", ("c", "c0"): "10", ("bs", "c0"): "11", ("cs", "c0"): "12",
    ("linf", "c"): "7", ("c", "c"): "5", ("bs", "c"): "13", ("cs", "c"): "14",
    ("linf", "linf"): "1", ("c", "linf"): "1", ("bs", "linf"): "15", ("cs", "linf"): "16",
}  # fmt: skip


def normalize_space(name: str) -> str:
    key = _ALIASES.get(name, name)
    if key not in SPACES:
        raise DomainError(f"unknown sequence space {name!r}; choose from {', '.join(SPACES)}")
    return key


@dataclass(frozen=True)
class ClassQuery:
    from_space: str
    to_space: str

    def __post_init__(self):
        object.__setattr__(self, "from_space", normalize_space(self.from_space))
        object.__setattr__(self, "to_space", normalize_space(self.to_space))


@dataclass(frozen=True)
class ClassReport:
    query: ClassQuery
    table: str
    cell: str
    operand: str
    verdicts: dict[str, ConditionVerdict] = field(default_factory=dict)

    @property
    def aggregate(self) -> Verdict:
        statuses = [v.status for v in self.verdicts.values()]
        if statuses and all(s is Verdict.satisfied for s in statuses):
            return Verdict.satisfied
        if any(s is Verdict.violated for s in statuses):
            return Verdict.violated
        return Verdict.inconclusive


def lookup_cell(q: ClassQuery) -> tuple[str, str, str]:
    """Return (table, cell, operand) with operand in {"A", "D", "E"}."""
    src, dst = q.from_space, q.to_space
    if src in _DELTA_UNDERLYING and dst in _DELTA_UNDERLYING:
        raise DomainError(f"({src} : {dst}) is not covered by any table")
    if src in _DELTA_UNDERLYING:
        key = (_DELTA_UNDERLYING[src], dst)
        if key in TABLE1:
            return "Table 3", TABLE1[key] + "a", "D"
    elif dst in _DELTA_UNDERLYING:
        key = (src, _DELTA_UNDERLYING[dst])
        if key in TABLE2:
            return "Table 4", TABLE2[key] + "a", "E"
    else:
        if (src, dst) in TABLE1:
            return "Table 1", TABLE1[(src, dst)], "A"
        if (src, dst) in TABLE2:
            return "Table 2", TABLE2[(src, dst)], "A"
    raise DomainError(f"({src} : {dst}) is not covered by any table")


def check_class(
    q: ClassQuery, gen: MatrixGenerator, sizes: Sequence[int], m: int | None = None
) -> ClassReport:
    table, cell, operand = lookup_cell(q)
    if operand != "A":
        if m is None:
            raise DomainError(f"({q.from_space} : {q.to_space}) needs the difference order m")
        gen = d_family(gen, m) if operand == "D" else e_family(gen, m)
    ids = CELLS[cell.rstrip("a")]
    verdicts = {cid: evaluate_condition(cid, gen, sizes) for cid in ids}
    return ClassReport(q, table, cell, operand, verdicts)


_DUAL_TARGET = {"beta": "c", "gamma": "linf"}


def dual_membership(
    a: SequencePrefix, m: int, sizes: Sequence[int], which: str = "beta"
) -> dict[str, ClassReport]:
    """Evidence that ``a`` is in the beta or gamma dual of each h(Delta^(m)) space.

    ``a`` is in the dual of the space over X exactly when V is in (X : c) for
    beta, or (X : linf) for gamma.
    """
    if which not in _DUAL_TARGET:
        raise DomainError(f"dual must be 'beta' or 'gamma', got {which!r}")
    gen = v_family(a, m)
    out = {}
    for space, base in (("h0D", "c0"), ("hcD", "c"), ("hinfD", "linf")):
        out[space] = check_class(ClassQuery(base, _DUAL_TARGET[which]), gen, sizes)
    return out
