"""Command-line front end: ``hilbertseq <group> <command> ...``.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import cipher, classes, image
from .difference import MAX_M, delta_inverse, delta_matrix, h_delta_matrix
from .exact import DomainError, ExactMatrix, SequencePrefix, format_rational, invert_elimination
from .hilbert import MAX_N, hilbert_inverse_closed_form, hilbert_matrix, instability_scan
from .transform import (
    TransformConfig,
    basis_support_violations,
    basis_vector,
    bk_norm,
    forward_transform,
    inverse_transform,
    membership_diagnostics,
)

CIPHER_NOTE = "pedagogical, not secure: a linear cipher with a public matrix has no confidentiality"


@dataclass
class CommandResult:
    exit_code: int
    report: str = ""
    payload: str | bytes | None = None


# --------------------------------------------------------------------------
# helpers


def _int_range(lo: int, hi: int, name: str):
    def parse(s: str) -> int:
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"{name} must be in {lo}..{hi}")
        return v

    return parse


def _sizes(s: str) -> list[int]:
    try:
        return [int(t) for t in s.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError("sizes must be comma-separated integers") from None


def _matrix_out(a: ExactMatrix, fmt: str) -> str:
    if fmt == "csv":
        return "".join(",".join(format_rational(v) for v in a.row(i)) + "\n" for i in range(1, a.rows + 1))
    return a.to_text()


def _seq_out(x: SequencePrefix, fmt: str) -> str:
    if fmt == "csv":
        return "".join(f"{n},{format_rational(v)}\n" for n, v in enumerate(x, 1))
    return x.to_text()


def _read_seq(path: str, n: int) -> SequencePrefix:
    x = SequencePrefix.from_text(Path(path).read_text())
    if x.N != n:
        raise DomainError(f"{path} holds {x.N} terms, expected --n {n}")
    return x


def _generator(args) -> classes.MatrixGenerator:
    kind = args.matrix
    if kind in ("euler", "taylor"):
        return classes.classical_generator(kind, r=Fraction(args.r))
    if kind == "riesz":
        return classes.riesz([Fraction(w) for w in args.weights.split(",")])
    if kind == "file":
        if not args.file:
            raise DomainError("--matrix file needs --file PATH")
        return classes.from_file(args.file)
    return classes.classical_generator(kind)


def _verdict_lines(report: classes.ClassReport, fmt: str) -> str:
    q = report.query
    if fmt == "csv":
        rows = ["condition,status," + ",".join(f"N={n}" for n in next(iter(report.verdicts.values())).N_used)]
        for cid, v in report.verdicts.items():
            vals = [_fmt_witness(v.witness.get(n)) for n in v.N_used]
            rows.append(f"{cid},{v.status.value}," + ",".join(vals))
        rows.append(f"aggregate,{report.aggregate.value}")
        return "\n".join(rows) + "\n"
    out = [f"({q.from_space} : {q.to_space})  {report.table} cell {report.cell}  operand {report.operand}"]
    for cid, v in report.verdicts.items():
        out.append(f"  {cid:6s} {classes.CONDITIONS[cid].text}")
        out.append(f"         {v.status.value}")
        for n, w in v.witness.items():
            out.append(f"         N={n:<4d} {_fmt_witness(w)}")
    out.append(f"  aggregate: {report.aggregate.value} (finite-section evidence, not proof)")
    return "\n".join(out) + "\n"


def _fmt_witness(w) -> str:
    if w is None:
        return ""
    if isinstance(w, tuple):
        return "[" + " ".join(f"{float(v):.6g}" for v in w) + "]"
    return f"{float(w):.12g}"


# --------------------------------------------------------------------------
# handlers


def _hilbert_gen(a):
    return CommandResult(0, payload=_matrix_out(hilbert_matrix(a.n), a.format))


def _hilbert_inv(a):
    if a.method == "elimination":
        inv = invert_elimination(hilbert_matrix(a.n))
    else:
        inv = hilbert_inverse_closed_form(a.n, literal=a.literal)
    return CommandResult(0, payload=_matrix_out(inv, a.format))


def _hilbert_cond(a):
    scan = instability_scan(a.n_max, a.threshold)
    if a.format == "csv":
        lines = ["n,kappa_exact,kappa_float,roundtrip_error"]
        lines += [f"{r.n},{format_rational(r.kappa_exact)},{r.kappa_float!r},{r.roundtrip_error!r}" for r in scan.reports]
    else:
        lines = [f"{'n':>3}  {'kappa_exact':>22}  {'kappa_float':>22}  {'roundtrip_error':>22}"]
        lines += [
            f"{r.n:>3}  {float(r.kappa_exact):>22.15g}  {r.kappa_float:>22.15g}  {r.roundtrip_error:>22.15g}"
            for r in scan.reports
        ]
        first = "none" if scan.first_unstable is None else str(scan.first_unstable)
        lines.append(f"first n with roundtrip_error > {a.threshold!r}: {first}")
    return CommandResult(0, payload="\n".join(lines) + "\n")


def _diffop(a):
    build = {"gen": delta_matrix, "inv": delta_inverse, "compose": h_delta_matrix}[a.command]
    return CommandResult(0, payload=_matrix_out(build(a.m, a.n), a.format))


def _seq_transform(a):
    cfg = TransformConfig(a.m, a.n)
    x = _read_seq(a.input, a.n)
    fn = forward_transform if a.command == "transform" else inverse_transform
    return CommandResult(0, payload=_seq_out(fn(x, cfg), a.format))


def _seq_norm(a):
    cfg = TransformConfig(a.m, a.n)
    return CommandResult(0, payload=format_rational(bk_norm(_read_seq(a.input, a.n), cfg)) + "\n")


def _seq_basis(a):
    cfg = TransformConfig(a.m, a.n)
    b = basis_vector(a.k, cfg)
    bad = basis_support_violations(a.k, cfg)
    report = ""
    if bad:
        report = f"note: nonzero at n < k for n in {bad}; the section inverse is dense, not triangular"
    return CommandResult(0, report=report, payload=_seq_out(b, a.format))


def _seq_member(a):
    cfg = TransformConfig(a.m, a.n)
    d = membership_diagnostics(_read_seq(a.input, a.n), a.space, cfg)
    lines = [
        f"space: {d.tag.value}(Delta^({a.m})), target {d.tag.target}, N = {a.n}",
        f"verdict: {d.verdict.value}",
        f"reason: {d.reason}",
        f"sup |y_n|: {float(d.sup_abs):.12g}",
        f"tail slope of |y_n|: {d.tail_trend:.6g}",
    ]
    lines += [f"{k}: {float(v):.12g}" for k, v in d.checkpoints.items()]
    lines.append("(evidence from a finite section, not a proof)")
    return CommandResult(0, payload="\n".join(lines) + "\n")


def _classes_check(a):
    q = classes.ClassQuery(getattr(a, "from"), a.to)
    rep = classes.check_class(q, _generator(a), a.sizes, m=a.m)
    return CommandResult(0, payload=_verdict_lines(rep, a.format))


def _classes_dual(a):
    seq = SequencePrefix.from_text(Path(a.a).read_text())
    if seq.N < a.n:
        raise DomainError(f"{a.a} holds {seq.N} terms, need at least --n {a.n}")
    seq = SequencePrefix(seq.values[: a.n])
    sizes = a.sizes or [max(2, a.n // 4), max(3, a.n // 2), a.n]
    v = classes.build_V(seq, TransformConfig(a.m, a.n))
    parts = [v.to_text() if a.format != "csv" else _matrix_out(v, "csv")]
    reports = classes.dual_membership(seq, a.m, sizes, a.which)
    for space, rep in reports.items():
        parts.append(f"# {a.which}-dual of {space}: V in ({rep.query.from_space} : {rep.query.to_space})\n")
        parts.append(_verdict_lines(rep, a.format))
    return CommandResult(0, payload="".join(parts))


def _classes_build(a):
    cfg = TransformConfig(a.m, a.n)
    build = classes.build_D if a.command == "build-d" else classes.build_E
    return CommandResult(0, payload=_matrix_out(build(_generator(a), cfg), a.format))


def _image_view(a):
    img = image.load_pgm(Path(a.input).read_bytes())
    view = image.hilbert_view(img, a.n, (a.row, a.col))
    heat = image.render_heatmap(view, a.mode)
    data = image.write_pgm(heat)
    report = [f"hilbert view {a.n}x{a.n} at row {a.row}, col {a.col}: wrote {a.out}"]
    if a.surface:
        Path(a.surface).write_text(image.export_surface(view))
        script = Path(a.surface).with_suffix(".gp")
        script.write_text(image.surface_script(Path(a.surface).name))
        report.append(f"surface data: {a.surface}; gnuplot script: {script}")
    return CommandResult(0, report="\n".join(report), payload=data)


def _cipher_encrypt(a):
    return CommandResult(0, payload=cipher.encrypt(Path(a.input).read_bytes(), a.n))


def _cipher_decrypt(a):
    res = cipher.decrypt(Path(a.input).read_text(), a.mode)
    if a.mode == "exact":
        return CommandResult(0, payload=res)
    report = f"n = {res.n}: {res.corrupted} corrupted bytes, max abs error {res.max_abs_error:.6g}"
    return CommandResult(0, report=report, payload=res.recovered)


def _cipher_demo(a):
    msg = random.Random(a.seed).randbytes(a.size)
    lines = ["n,corrupted,max_abs_error"] if a.format == "csv" else [
        f"Hilbert cipher demo ({CIPHER_NOTE})",
        f"message: {a.size} random bytes, seed {a.seed}",
        f"{'n':>3}  {'corrupted':>9}  {'max_abs_error':>14}",
    ]
    for n in a.blocks:
        ct = cipher.encrypt(msg, n)
        if cipher.decrypt(ct, "exact") != msg:
            raise DomainError(f"exact round trip failed at n = {n}")
        r = cipher.decrypt(ct, "float")
        if a.format == "csv":
            lines.append(f"{n},{r.corrupted},{r.max_abs_error!r}")
        else:
            lines.append(f"{n:>3}  {r.corrupted:>9d}  {r.max_abs_error:>14.6g}")
    return CommandResult(0, payload="\n".join(lines) + "\n")


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv"), default="table")
    common.add_argument("--out", metavar="FILE", help="write the result to FILE instead of stdout")

    size_n = _int_range(1, MAX_N, "--n")
    order_m = _int_range(1, MAX_M, "--m")

    p = argparse.ArgumentParser(
        prog="hilbertseq",
        description="Exact Hilbert-matrix and difference-operator toolkit.",
    )
    groups = p.add_subparsers(dest="group", required=True, metavar="GROUP")

    g = groups.add_parser("hilbert", help="Hilbert matrices and conditioning").add_subparsers(
        dest="command", required=True, metavar="COMMAND"
    )
    s = g.add_parser("gen", parents=[common], help="emit H_n")
    s.add_argument("--n", type=size_n, required=True)
    s.set_defaults(func=_hilbert_gen)
    s = g.add_parser("inv", parents=[common], help="emit the exact inverse of H_n")
    s.add_argument("--n", type=size_n, required=True)
    s.add_argument("--method", choices=("closed-form", "elimination"), default="closed-form")
    s.add_argument("--literal", action="store_true", help="use C(i+j-1, i-1)^2 (not an inverse; for comparison)")
    s.set_defaults(func=_hilbert_inv)
    s = g.add_parser("cond", parents=[common], help="exact and floating-point conditioning table")
    s.add_argument("--n-max", type=size_n, required=True)
    s.add_argument("--threshold", type=float, default=1e-8)
    s.set_defaults(func=_hilbert_cond)

    g = groups.add_parser("diffop", help="difference triangles Delta^(m)").add_subparsers(
        dest="command", required=True, metavar="COMMAND"
    )
    for name, text in (("gen", "emit Delta^(m)"), ("inv", "emit its inverse"), ("compose", "emit H*Delta^(m)")):
        s = g.add_parser(name, parents=[common], help=text)
        s.add_argument("--m", type=order_m, required=True)
        s.add_argument("--n", type=size_n, required=True)
        s.set_defaults(func=_diffop)

    g = groups.add_parser("seq", help="sequence transforms").add_subparsers(
        dest="command", required=True, metavar="COMMAND"
    )
    for name, fn, text in (
        ("transform", _seq_transform, "y = H Delta^(m) x"),
        ("inv-transform", _seq_transform, "x from y"),
        ("norm", _seq_norm, "sup_n |y_n|"),
    ):
        s = g.add_parser(name, parents=[common], help=text)
        s.add_argument("--m", type=order_m, required=True)
        s.add_argument("--n", type=size_n, required=True)
        s.add_argument("--in", dest="input", required=True, metavar="FILE")
        s.set_defaults(func=fn)
    s = g.add_parser("basis", parents=[common], help="basis sequence b^(k)")
    s.add_argument("--m", type=order_m, required=True)
    s.add_argument("--n", type=size_n, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=_seq_basis)
    s = g.add_parser("member", parents=[common], help="membership evidence for h0/hc/hinf(Delta^(m))")
    s.add_argument("--space", choices=("h0", "hc", "hinf"), required=True)
    s.add_argument("--m", type=order_m, required=True)
    s.add_argument("--n", type=_int_range(1, 4096, "--n"), required=True)
    s.add_argument("--in", dest="input", required=True, metavar="FILE")
    s.set_defaults(func=_seq_member)

    g = groups.add_parser("classes", help="matrix classes (X : Y)").add_subparsers(
        dest="command", required=True, metavar="COMMAND"
    )
    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument(
        "--matrix",
        choices=("cesaro", "euler", "riesz", "taylor", "hilbert", "identity", "zero", "ones", "file"),
        required=True,
    )
    matrix.add_argument("--r", default="1/2", help="parameter of euler/taylor, 0 < r < 1")
    matrix.add_argument("--weights", default="1", help="riesz weights, repeated periodically")
    matrix.add_argument("--file", help="matrix text file for --matrix file")
    s = g.add_parser("check", parents=[common, matrix], help="check a class on finite sections")
    s.add_argument("--from", required=True, choices=classes.SPACES + ("h0", "hc", "hinf"))
    s.add_argument("--to", required=True, choices=classes.SPACES + ("h0", "hc", "hinf"))
    s.add_argument("--sizes", type=_sizes, default=[16, 32, 64])
    s.add_argument("--m", type=order_m, help="difference order for h*(Delta^(m)) spaces")
    s.set_defaults(func=_classes_check)
    s = g.add_parser("dual", parents=[common], help="beta/gamma dual evidence via the matrix V")
    s.add_argument("--which", choices=("beta", "gamma"), required=True)
    s.add_argument("--m", type=order_m, required=True)
    s.add_argument("--n", type=size_n, required=True)
    s.add_argument("--a", required=True, metavar="FILE")
    s.add_argument("--sizes", type=_sizes)
    s.set_defaults(func=_classes_dual)
    for name in ("build-d", "build-e"):
        s = g.add_parser(name, parents=[common, matrix], help=f"emit the {name[-1].upper()} matrix section")
        s.add_argument("--m", type=order_m, required=True)
        s.add_argument("--n", type=size_n, required=True)
        s.set_defaults(func=_classes_build)

    g = groups.add_parser("image", help="Hilbert view of a PGM image").add_subparsers(
        dest="command", required=True, metavar="COMMAND"
    )
    s = g.add_parser("hilbert-view", parents=[common], help="H_n-weighted heatmap of an n x n block")
    s.add_argument("--in", dest="input", required=True, metavar="FILE")
    s.add_argument("--n", type=_int_range(1, 4096, "--n"), required=True)
    s.add_argument("--row", type=int, default=0, help="0-based top row of the block")
    s.add_argument("--col", type=int, default=0, help="0-based left column of the block")
    s.add_argument("--surface", metavar="CSV", help="also write i,j,value surface data")
    s.add_argument("--mode", choices=("self", "absolute"), default="self")
    s.set_defaults(func=_image_view)

    g = groups.add_parser("cipher", help=f"Hilbert block cipher demo ({CIPHER_NOTE})").add_subparsers(
        dest="command", required=True, metavar="COMMAND"
    )
    block = _int_range(1, cipher.MAX_BLOCK, "--n")
    s = g.add_parser("encrypt", parents=[common], help=f"encrypt a file ({CIPHER_NOTE})")
    s.add_argument("--n", type=block, required=True)
    s.add_argument("--in", dest="input", required=True, metavar="FILE")
    s.set_defaults(func=_cipher_encrypt)
    s = g.add_parser("decrypt", parents=[common], help=f"decrypt exactly or in double precision ({CIPHER_NOTE})")
    s.add_argument("--in", dest="input", required=True, metavar="FILE")
    s.add_argument("--mode", choices=("exact", "float"), default="exact")
    s.set_defaults(func=_cipher_decrypt)
    s = g.add_parser("demo", parents=[common], help=f"exact vs float decryption over block sizes ({CIPHER_NOTE})")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--size", type=int, default=1024)
    s.add_argument("--blocks", type=_sizes, default=[2, 4, 8, 16, 24, 32])
    s.set_defaults(func=_cipher_demo)
    return p


def dispatch(argv: list[str]) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandResult(int(exc.code or 0))
    if args.group == "image" and not args.out:
        return CommandResult(2, report="hilbertseq: error: image hilbert-view requires --out")
    try:
        result = args.func(args)
    except (DomainError, ZeroDivisionError, OSError) as exc:
        return CommandResult(1, report=f"error: {exc}")
    if args.out and result.payload is not None:
        data = result.payload
        Path(args.out).write_bytes(data if isinstance(data, bytes) else data.encode())
        result.payload = None
    return result


def main(argv: list[str] | None = None) -> int:
    try:
        result = dispatch(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if result.payload is not None:
        if isinstance(result.payload, bytes):
            sys.stdout.buffer.write(result.payload)
            sys.stdout.flush()
        else:
            sys.stdout.write(result.payload)
    if result.report:
        stream = sys.stderr if result.exit_code else sys.stdout
        print(result.report, file=stream)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
