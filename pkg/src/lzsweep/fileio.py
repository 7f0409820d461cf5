"""Byte-stable output formats: CSV tables, JSON documents and the plain-text
complex matrix format (``rows cols`` header, then rows of ``re,im`` pairs)."""
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import InputError


SIG_DIGITS = 12


def fmt(x):
    """Fixed notation with 12 significant digits; NaN becomes an empty field.

    Rounding comes from Python's correctly rounded exponent format; only the
    decimal point is moved, so the digits never depend on the platform.
    """
    x = float(x)
    if math.isnan(x):
        return ""
    if math.isinf(x):
        raise ValueError("cannot format an infinite value")
    if x == 0.0:
        return "0." + "0" * (SIG_DIGITS - 1)
    mant, exp = f"{x:.{SIG_DIGITS - 1}e}".split("e")
    sign = "-" if mant.startswith("-") else ""
    digits = mant.lstrip("-").replace(".", "")
    e = int(exp)
    if e >= SIG_DIGITS - 1:
        return f"{sign}{digits}{'0' * (e - SIG_DIGITS + 1)}.0"
    if e >= 0:
        return f"{sign}{digits[:e + 1]}.{digits[e + 1:]}"
    return f"{sign}0.{'0' * (-e - 1)}{digits}"


def csv_text(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def json_text(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_atomic(path, text):
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def matrix_text(m):
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    for row in m:
        lines.append(" ".join(f"{fmt(z.real)},{fmt(z.imag)}" for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InputError("empty matrix file")
    try:
        rows, cols = (int(v) for v in lines[0].split())
    except ValueError:
        raise InputError(f"bad matrix header {lines[0]!r}; expected 'rows cols'") from None
    if rows < 1 or cols < 1:
        raise InputError(f"matrix dimensions must be positive, got {rows}x{cols}")
    if len(lines) - 1 != rows:
        raise InputError(f"expected {rows} matrix rows, found {len(lines) - 1}")
    out = np.empty((rows, cols), dtype=complex)
    for i, line in enumerate(lines[1:]):
        cells = line.split()
        if len(cells) != cols:
            raise InputError(f"row {i + 1}: expected {cols} entries, found {len(cells)}")
        for j, cell in enumerate(cells):
            try:
                re, im = cell.split(",")
                out[i, j] = complex(float(re), float(im))
            except ValueError:
                raise InputError(f"row {i + 1}: bad entry {cell!r}; expected re,im") from None
    return out


def read_matrix(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read matrix file {path}: {exc.strerror}") from None
    return parse_matrix(text)
