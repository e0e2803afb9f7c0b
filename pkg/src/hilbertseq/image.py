"""Greyscale PGM I/O and the Hilbert view of an image block."""
from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .exact import DomainError, ExactMatrix
from .hilbert import hilbert_matrix


class PGMError(DomainError):
    pass


@dataclass(frozen=True)
class GrayImage:
    width: int
    height: int
    maxval: int
    pixels: tuple[int, ...]  # row-major

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise PGMError("image dimensions must be positive")
        if not 1 <= self.maxval <= 65535:
            raise PGMError(f"maxval {self.maxval} outside 1..65535")
        if len(self.pixels) != self.width * self.height:
            raise PGMError("pixel count does not match dimensions")
        if any(p < 0 or p > self.maxval for p in self.pixels):
            raise PGMError("sample exceeds maxval")

    def pixel(self, row: int, col: int) -> int:
        """0-based (row, col)."""
        return self.pixels[row * self.width + col]

    @classmethod
    def from_rows(cls, rows, maxval: int = 255) -> "GrayImage":
        rows = [list(r) for r in rows]
        return cls(len(rows[0]), len(rows), maxval, tuple(int(p) for r in rows for p in r))

    def rows(self) -> list[list[int]]:
        w = self.width
        return [list(self.pixels[i * w:(i + 1) * w]) for i in range(self.height)]


_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _header(data: bytes) -> tuple[bytes, int, int, int, int]:
    pos = 0
    toks = []
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if not m:
            raise PGMError("truncated header")
        toks.append(m.group(1))
        pos = m.end()
    magic = toks[0]
    if magic not in (b"P2", b"P5"):
        raise PGMError(f"bad magic {magic!r}: expected P2 or P5")
    try:
        width, height, maxval = (int(t) for t in toks[1:])
    except ValueError:
        raise PGMError("non-numeric header field") from None
    return magic, width, height, maxval, pos


def load_pgm(data: bytes) -> GrayImage:
    magic, width, height, maxval, pos = _header(data)
    if width < 1 or height < 1 or not 1 <= maxval <= 65535:
        raise PGMError("invalid header values")
    count = width * height
    if magic == b"P2":
        toks = re.sub(rb"#[^\n]*", b"", data[pos:]).split()
        if len(toks) < count:
            raise PGMError(f"truncated payload: {len(toks)} of {count} samples")
        try:
            pixels = tuple(int(t) for t in toks[:count])
        except ValueError:
            raise PGMError("non-numeric sample") from None
    else:
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise PGMError("truncated payload: missing raster")
        raster = data[pos + 1:]
        nbytes = 1 if maxval < 256 else 2
        if len(raster) < count * nbytes:
            raise PGMError(f"truncated payload: {len(raster)} of {count * nbytes} bytes")
        if nbytes == 1:
            pixels = tuple(raster[:count])
        else:
            pixels = tuple(int.from_bytes(raster[2 * i:2 * i + 2], "big") for i in range(count))
    if any(p > maxval for p in pixels):
        raise PGMError(f"sample exceeds maxval {maxval}")
    return GrayImage(width, height, maxval, pixels)


def write_pgm(img: GrayImage, ascii: bool = False) -> bytes:
    head = f"{'P2' if ascii else 'P5'}\n{img.width} {img.height}\n{img.maxval}\n".encode()
    if ascii:
        body = "\n".join(" ".join(str(p) for p in r) for r in img.rows()) + "\n"
        return head + body.encode()
    if img.maxval < 256:
        return head + bytes(img.pixels)
    return head + b"".join(p.to_bytes(2, "big") for p in img.pixels)


@dataclass(frozen=True)
class HilbertView:
    n: int
    origin: tuple[int, int]
    values: ExactMatrix
    maxval: int = 255


def hilbert_view(img: GrayImage, n: int, origin: tuple[int, int] = (0, 0)) -> HilbertView:
    """Elementwise product of the n x n block at 0-based ``origin`` with H_n."""
    r0, c0 = origin
    if n < 1 or r0 < 0 or c0 < 0 or r0 + n > img.height or c0 + n > img.width:
        raise DomainError(f"{n}x{n} block at {origin} does not fit a {img.height}x{img.width} image")
    h = hilbert_matrix(n)
    vals = ExactMatrix.from_function(n, n, lambda i, j: img.pixel(r0 + i - 1, c0 + j - 1) * h[i, j])
    return HilbertView(n, origin, vals, img.maxval)


def _round_half_up(q: Fraction) -> int:
    return (2 * q.numerator + q.denominator) // (2 * q.denominator)


def render_heatmap(v: HilbertView, mode: str = "self") -> GrayImage:
    """Map view values to 0..255.

    ``self`` scales the largest value to 255; ``absolute`` maps the source
    image's maxval to 255.
    """
    flat = [x for r in v.values.tolist() for x in r]
    if mode == "self":
        top = max(flat)
    elif mode == "absolute":
        top = Fraction(v.maxval)
    else:
        raise DomainError(f"unknown heatmap mode {mode!r}")
    if top == 0:
        return GrayImage(v.n, v.n, 255, (0,) * len(flat))
    pixels = tuple(min(255, _round_half_up(255 * x / top)) for x in flat)
    return GrayImage(v.n, v.n, 255, pixels)


def format_sig12(q: Fraction) -> str:
    """Fixed-point decimal rounded to 12 significant digits."""
    if q == 0:
        return "0.00000000000"
    with localcontext() as ctx:
        ctx.prec = 12
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return format(d.quantize(Decimal(1).scaleb(d.adjusted() - 11)), "f")


def export_surface(v: HilbertView) -> str:
    lines = [
        f"{i},{j},{format_sig12(v.values[i, j])}"
        for i in range(1, v.n + 1)
        for j in range(1, v.n + 1)
    ]
    return "\n".join(lines) + "\n"


def surface_script(csv_name: str) -> str:
    """gnuplot script plotting the ``i,j,value`` table as a surface."""
    return (
        "set datafile separator ','\n"
        "set xlabel 'i'\nset ylabel 'j'\nset zlabel 'value'\n"
        "set dgrid3d\nset hidden3d\n"
        f"splot '{csv_name}' using 1:2:3 with lines notitle\n"
    )
