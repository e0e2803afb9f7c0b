import random
from fractions import Fraction

import pytest

from hilbertseq import classes
from hilbertseq.classes import (
    ClassQuery,
    MatrixGenerator,
    build_D,
    build_E,
    build_V,
    check_class,
    classify_bounded,
    classify_convergent,
    classify_vanishing,
    evaluate_condition,
)
from hilbertseq.difference import delta_entry, h_delta_matrix
from hilbertseq.exact import DomainError, ExactMatrix, SequencePrefix, binomial
from hilbertseq.transform import TransformConfig, Verdict, forward_transform, inverse_transform_matrix

SIZES = [16, 32, 64]


def random_prefix(rng, n, lo=-9, hi=9):
    return SequencePrefix(Fraction(rng.randint(lo, hi), rng.randint(1, 4)) for _ in range(n))


def random_matrix(rng, n):
    return ExactMatrix([[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)])


# --- generators --------------------------------------------------------------


def test_euler_row_is_binomial_expansion():
    # Row of two trials: (1/2 + 1/2)^2 expands to C(2, j) / 4.
    expected = tuple(Fraction(binomial(2, j), 4) for j in range(3))
    assert classes.euler(Fraction(1, 2)).section(3).row(3) == expected
    assert expected == (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))


def test_riesz_with_unit_weights_is_cesaro():
    r = classes.riesz([1])
    assert r.entry(3, 2) == Fraction(1, 3)
    assert r.section(10) == classes.cesaro().section(10)


def test_taylor_entry():
    p = classes.taylor(Fraction(1, 2))
    assert p.entry(1, 1) == Fraction(1, 4)
    assert p.entry(2, 1) == 0
    assert p.entry(1, 3) == binomial(3, 1) * Fraction(1, 4) * Fraction(1, 4)


def test_taylor_row_partial_sums_increase_toward_one():
    p = classes.taylor(Fraction(1, 3))
    partial = [sum(p.entry(2, k) for k in range(1, K + 1)) for K in (10, 20, 40, 80)]
    assert all(a < b < 1 for a, b in zip(partial, partial[1:]))
    assert 1 - partial[-1] < Fraction(1, 10**6)


@pytest.mark.parametrize(
    "gen",
    [
        classes.cesaro(),
        classes.euler(Fraction(1, 2)),
        classes.euler(Fraction(2, 7)),
        classes.riesz([1, 2, 3]),
        classes.riesz(lambda k: Fraction(1, k)),
    ],
    ids=repr,
)
def test_row_stochastic(gen):
    s = gen.section(64)
    for n in range(1, 65):
        assert sum(s.row(n)) == 1


def test_generator_domains():
    for bad in (0, 1, Fraction(3, 2), -1):
        with pytest.raises(DomainError):
            classes.euler(bad)
        with pytest.raises(DomainError):
            classes.taylor(bad)
    with pytest.raises(DomainError):
        classes.riesz([1, -1]).entry(3, 1)
    with pytest.raises(DomainError):
        classes.classical_generator("nope")


def test_file_generator(tmp_path):
    a = random_matrix(random.Random(3), 8)
    path = tmp_path / "a.txt"
    path.write_text(a.to_text())
    gen = classes.from_file(path)
    assert gen.section(5) == a.section(5)
    assert gen.entry(8, 8) == a[8, 8]
    with pytest.raises(DomainError):
        gen.section(9)


# --- classifiers -------------------------------------------------------------


def test_classifiers():
    F = Fraction
    assert classify_bounded([F(1), F(1), F(1)]) is Verdict.satisfied
    assert classify_bounded([F(16), F(32), F(64)]) is Verdict.violated
    assert classify_bounded([F(1), F(2), F(5, 2)]) is Verdict.inconclusive
    assert classify_vanishing([F(0), F(0), F(0)]) is Verdict.satisfied
    assert classify_vanishing([F(1), F(1, 10), F(1, 10**4)]) is Verdict.satisfied
    assert classify_vanishing([F(1), F(1), F(1)]) is Verdict.violated
    assert classify_vanishing([F(1, 16), F(1, 32), F(1, 64)]) is Verdict.inconclusive
    assert classify_convergent([F(1), F(1), F(1)]) is Verdict.satisfied
    assert classify_convergent([F(1, 16), F(1, 32), F(1, 64)]) is Verdict.satisfied
    assert classify_convergent([F(4), F(5), F(6)]) is Verdict.violated


# --- conditions --------------------------------------------------------------


def test_cesaro_row_sums():
    v = evaluate_condition("C3.1", classes.cesaro(), SIZES)
    assert v.status is Verdict.satisfied
    assert v.witness == {16: 1, 32: 1, 64: 1}
    assert v.N_used == (16, 32, 64)


def test_column_limits_for_identity_and_ones():
    assert evaluate_condition("C3.5", classes.identity(), SIZES).status is Verdict.satisfied
    v = evaluate_condition("C3.5", classes.ones(), SIZES)
    assert v.status is Verdict.violated
    assert set(v.witness.values()) == {1}


def test_zero_matrix_satisfies_vanishing_conditions():
    for cid in ("C4.3", "C4.2", "C4.4", "C3.10", "C3.5", "C4.1"):
        assert evaluate_condition(cid, classes.zero(), SIZES).status is Verdict.satisfied


def test_every_condition_runs_on_every_generator():
    gens = [classes.cesaro(), classes.identity(), classes.ones(), classes.hilbert(), classes.taylor(Fraction(1, 2))]
    for cid in classes.CONDITIONS:
        for g in gens:
            v = evaluate_condition(cid, g, [4, 8, 16])
            assert v.status in Verdict


def test_unsupported_condition_and_bad_sizes():
    with pytest.raises(DomainError):
        evaluate_condition("C9.9", classes.cesaro(), SIZES)
    with pytest.raises(DomainError):
        evaluate_condition("C3.1", classes.cesaro(), [16, 32])
    with pytest.raises(DomainError):
        evaluate_condition("C3.1", classes.cesaro(), [16, 16, 32])


def test_evaluation_is_deterministic():
    a = evaluate_condition("C3.9", classes.euler(Fraction(1, 3)), SIZES)
    b = evaluate_condition("C3.9", classes.euler(Fraction(1, 3)), SIZES)
    assert a == b


def test_triangle_composition_witness():
    # Conditions on T*A for a triangle T agree with T_N @ A_N computed section by section.
    rng = random.Random(11)
    a = classes.from_matrix(random_matrix(rng, 16))
    for m in (1, 2):
        t = MatrixGenerator("delta", lambda n, k, m=m: Fraction(delta_entry(m, n, k)))
        comp = classes.composed(t, a)
        explicit = MatrixGenerator("explicit", section_fn=lambda n: t.section(n) @ a.section(n))
        for cid in classes.CONDITIONS:
            assert evaluate_condition(cid, comp, [4, 8, 16]) == evaluate_condition(cid, explicit, [4, 8, 16])


# --- class tables -------------------------------------------------------------


def test_cesaro_is_regular():
    rep = check_class(ClassQuery("c", "c"), classes.cesaro(), SIZES)
    assert (rep.table, rep.cell) == ("Table 1", "5")
    assert list(rep.verdicts) == ["C3.1", "C3.9", "C3.3"]
    assert rep.aggregate is Verdict.satisfied


def test_identity_in_c0_linf():
    rep = check_class(ClassQuery("c0", "linf"), classes.identity(), SIZES)
    assert rep.cell == "1"
    assert rep.verdicts["C3.1"].witness[64] == 1
    assert rep.aggregate is Verdict.satisfied


def test_ones_not_in_linf_c0():
    rep = check_class(ClassQuery("linf", "c0"), classes.ones(), SIZES)
    assert (rep.table, rep.cell) == ("Table 2", "9")
    assert rep.verdicts["C4.3"].witness == {16: 16, 32: 32, 64: 64}
    assert rep.aggregate is Verdict.violated


def test_table_lookup():
    assert classes.lookup_cell(ClassQuery("bs", "c0")) == ("Table 2", "11", "A")
    assert classes.lookup_cell(ClassQuery("hcD", "cs")) == ("Table 3", "6a", "D")
    assert classes.lookup_cell(ClassQuery("cs", "hinf")) == ("Table 4", "16a", "E")
    assert classes.lookup_cell(ClassQuery("linf", "h0")) == ("Table 4", "9a", "E")
    for bad in (("c0", "c0"), ("h0", "hc"), ("bs", "bs"), ("hc", "c0")):
        with pytest.raises(DomainError):
            classes.lookup_cell(ClassQuery(*bad))
    with pytest.raises(DomainError):
        ClassQuery("f", "c")


def test_delta_space_query_needs_m():
    with pytest.raises(DomainError):
        check_class(ClassQuery("h0D", "linf"), classes.cesaro(), [4, 8, 16])
    rep = check_class(ClassQuery("h0D", "linf"), classes.cesaro(), [4, 8, 16], m=1)
    assert rep.operand == "D"


# --- V, D, E ------------------------------------------------------------------


def test_build_V_examples():
    cfg = TransformConfig(2, 6)
    assert build_V(SequencePrefix.zeros(6), cfg) == ExactMatrix.zeros(6)
    v = build_V(SequencePrefix.unit(1, 6), cfg)
    uinv = inverse_transform_matrix(2, 6)
    for n in range(1, 7):
        assert v.row(n) == uinv.row(1)


def test_duality_identity():
    rng = random.Random(5)
    for _ in range(100):
        n, m = rng.randint(1, 12), rng.randint(1, 3)
        cfg = TransformConfig(m, n)
        a, x = random_prefix(rng, n), random_prefix(rng, n)
        vy = build_V(a, cfg).apply(forward_transform(x, cfg).values)
        for r in range(1, n + 1):
            assert sum(a[k] * x[k] for k in range(1, r + 1)) == vy[r - 1]


def test_build_D_examples():
    cfg = TransformConfig(2, 7)
    assert build_D(h_delta_matrix(2, 7), cfg).is_identity()
    assert build_D(classes.identity(), cfg) == inverse_transform_matrix(2, 7)


def test_build_E_examples():
    cfg = TransformConfig(3, 6)
    assert build_E(classes.identity(), cfg) == h_delta_matrix(3, 6)
    assert build_E(classes.zero(), cfg) == ExactMatrix.zeros(6)


@pytest.mark.parametrize("gen", [classes.identity(), classes.cesaro(), classes.euler(Fraction(1, 2))], ids=repr)
def test_D_and_E_identities(gen):
    rng = random.Random(9)
    for _ in range(34):
        n, m = rng.randint(1, 12), rng.randint(1, 3)
        cfg = TransformConfig(m, n)
        a = gen.section(n)
        x = random_prefix(rng, n)
        y = forward_transform(x, cfg)
        assert build_D(gen, cfg).apply(y.values) == a.apply(x.values)
        z = random_prefix(rng, n)
        assert build_E(gen, cfg).apply(z.values) == forward_transform(SequencePrefix(a.apply(z.values)), cfg).values


def test_dual_membership_reports():
    a = SequencePrefix.zeros(16)
    reps = classes.dual_membership(a, 1, [4, 8, 16], "beta")
    assert set(reps) == {"h0D", "hcD", "hinfD"}
    assert reps["h0D"].query == ClassQuery("c0", "c")
    assert all(r.aggregate is Verdict.satisfied for r in reps.values())
    gam = classes.dual_membership(a, 1, [4, 8, 16], "gamma")
    assert gam["hinfD"].query == ClassQuery("linf", "linf")
    with pytest.raises(DomainError):
        classes.dual_membership(a, 1, [4, 8, 16], "alpha")
