"""Acceptance gate: one test per criterion, summarized at the end of the run."""
import random
import time
from fractions import Fraction

import pytest

from hilbertseq import cipher, classes
from hilbertseq.classes import ClassQuery, build_D, build_E, check_class
from hilbertseq.difference import delta_inverse, delta_matrix
from hilbertseq.exact import ExactMatrix, SequencePrefix, invert_elimination, mat_mul
from hilbertseq.hilbert import condition_inf, hilbert_inverse_closed_form, hilbert_matrix, kappa_exact
from hilbertseq.image import GrayImage, hilbert_view, load_pgm, render_heatmap, write_pgm
from hilbertseq.transform import TransformConfig, basis_vector, forward_transform, inverse_transform

SIZES = [16, 32, 64]


def int_prefix(rng, n, lo=-100, hi=100):
    return SequencePrefix(rng.randint(lo, hi) for _ in range(n))


def rat_prefix(rng, n):
    return SequencePrefix(Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(n))


@pytest.mark.acceptance(1, "closed-form Hilbert inverse")
def test_closed_form_inverse():
    start = time.perf_counter()
    for n in range(1, 13):
        assert hilbert_inverse_closed_form(n) == invert_elimination(hilbert_matrix(n))
    for n in range(1, 21):
        assert mat_mul(hilbert_inverse_closed_form(n), hilbert_matrix(n)).is_identity()
        assert mat_mul(hilbert_matrix(n), hilbert_inverse_closed_form(n)).is_identity()
    assert time.perf_counter() - start < 10


@pytest.mark.acceptance(2, "difference-operator algebra")
def test_difference_algebra():
    for m in range(1, 6):
        for n in range(1, 16):
            assert mat_mul(delta_matrix(m, n), delta_inverse(m, n)).is_identity()
            power = ExactMatrix.identity(n)
            for _ in range(m):
                power = mat_mul(power, delta_matrix(1, n))
            assert power == delta_matrix(m, n)


@pytest.mark.acceptance(3, "transform round trip and basis images")
def test_round_trip_and_basis():
    rng = random.Random(20240301)
    for _ in range(120):
        cfg = TransformConfig(rng.randint(1, 4), rng.randint(1, 15))
        x = int_prefix(rng, cfg.N)
        assert inverse_transform(forward_transform(x, cfg), cfg) == x
    for m in range(1, 5):
        for n in range(1, 13):
            cfg = TransformConfig(m, n)
            for k in range(1, n + 1):
                assert forward_transform(basis_vector(k, cfg), cfg) == SequencePrefix.unit(k, n)


@pytest.mark.acceptance(4, "duality identity")
def test_duality_identity():
    rng = random.Random(4)
    for _ in range(120):
        cfg = TransformConfig(rng.randint(1, 3), rng.randint(1, 12))
        a, x = rat_prefix(rng, cfg.N), rat_prefix(rng, cfg.N)
        vy = classes.build_V(a, cfg).apply(forward_transform(x, cfg).values)
        partial = Fraction(0)
        for n in range(1, cfg.N + 1):
            partial += a[n] * x[n]
            assert vy[n - 1] == partial


@pytest.mark.acceptance(5, "transformation-matrix identities")
@pytest.mark.parametrize(
    "gen", [classes.identity(), classes.cesaro(), classes.euler(Fraction(1, 2))], ids=lambda g: g.kind
)
def test_transformation_matrices(gen):
    rng = random.Random(5)
    for _ in range(40):
        cfg = TransformConfig(rng.randint(1, 3), rng.randint(1, 12))
        a = gen.section(cfg.N)
        x = rat_prefix(rng, cfg.N)
        assert build_D(gen, cfg).apply(forward_transform(x, cfg).values) == a.apply(x.values)
        z = rat_prefix(rng, cfg.N)
        lhs = build_E(gen, cfg).apply(z.values)
        assert lhs == forward_transform(SequencePrefix(a.apply(z.values)), cfg).values


@pytest.mark.acceptance(6, "class checking fixtures")
def test_class_checking():
    rep = check_class(ClassQuery("c", "c"), classes.cesaro(), SIZES)
    assert (rep.table, rep.cell) == ("Table 1", "5")
    assert all(v.status.value == "satisfied-evidence" for v in rep.verdicts.values())
    assert rep.verdicts["C3.1"].witness == {16: 1, 32: 1, 64: 1}
    assert max(rep.verdicts["C3.9"].witness[64]) < Fraction(1, 16)
    s = classes.cesaro().section(64)
    assert all(sum(s.row(n)) == 1 for n in range(1, 65))

    ones = check_class(ClassQuery("linf", "c0"), classes.ones(), SIZES)
    assert ones.verdicts["C4.3"].status.value == "violated-evidence"
    assert ones.aggregate.value == "violated-evidence"

    again = check_class(ClassQuery("c", "c"), classes.cesaro(), SIZES)
    assert again.verdicts == rep.verdicts
    assert check_class(ClassQuery("linf", "c0"), classes.ones(), SIZES).verdicts == ones.verdicts


@pytest.mark.acceptance(7, "conditioning numbers")
def test_conditioning(fixtures_dir):
    assert [kappa_exact(n) for n in (1, 2, 3)] == [1, 27, 748]
    kappas = [kappa_exact(n) for n in range(1, 21)]
    assert all(a < b for a, b in zip(kappas, kappas[1:]))
    rows = fixtures_dir.joinpath("hilbert_cond.csv").read_text().splitlines()
    recorded = {int(r.split(",")[0]): float(r.split(",")[3]) for r in rows[1:]}
    assert recorded[10] > 1e-8
    assert condition_inf(10).roundtrip_error == recorded[10]


@pytest.mark.acceptance(8, "image pipeline")
def test_image_pipeline():
    block = GrayImage.from_rows([[255, 255], [255, 255]])
    assert render_heatmap(hilbert_view(block, 2)).rows() == [[255, 128], [128, 85]]

    rng = random.Random(8)
    for maxval in (255, 65535):
        img = GrayImage(5, 4, maxval, tuple(rng.randint(0, maxval) for _ in range(20)))
        data = write_pgm(img)
        assert write_pgm(load_pgm(data)) == data

    base = GrayImage(6, 6, 255, tuple(rng.randint(0, 85) for _ in range(36)))
    heat = write_pgm(render_heatmap(hilbert_view(base, 6)))
    for c in (2, 3):
        scaled = GrayImage(6, 6, 255, tuple(c * p for p in base.pixels))
        assert write_pgm(render_heatmap(hilbert_view(scaled, 6))) == heat


@pytest.mark.acceptance(9, "cipher round trip and float degradation")
def test_cipher(fixtures_dir):
    msg = fixtures_dir.joinpath("message.bin").read_bytes()
    assert len(msg) == 1024
    for n in (2, 4, 8, 16, 32):
        assert cipher.decrypt(cipher.encrypt(msg, n)) == msg
    corrupted = {n: cipher.decrypt(cipher.encrypt(msg, n), "float").corrupted for n in (2, 32)}
    assert corrupted[32] > corrupted[2]
