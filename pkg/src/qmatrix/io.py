"""Deterministic artifact writers: CSV tables, 16-bit PGM heatmaps, histograms."""
from __future__ import annotations

import os
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import EmptyInput
from .models.rotor import level_density_histogram

CSV_FORMAT = "{:.11e}"  # 12 significant digits


def _format(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if not np.isfinite(x):
        raise ValueError(f"refusing to write non-finite value {x!r}")
    if x == 0.0:
        x = 0.0  # no "-0.0"
    return CSV_FORMAT.format(x)


def write_csv(path, columns: Mapping[str, Sequence]) -> Path:
    """Write named, equal-length columns as CSV with a header row.

    Floats use 12-significant-digit scientific notation, integers and
    strings are written as is; line endings are ``\\n``.
    """
    path = Path(path)
    names = list(columns)
    if not names:
        raise ValueError("no columns to write")
    data = [list(columns[k]) for k in names]
    lengths = {len(col) for col in data}
    if len(lengths) != 1:
        raise ValueError(f"columns have unequal lengths: {dict(zip(names, map(len, data)))}")
    lines = [",".join(names)]
    for row in zip(*data):
        lines.append(",".join(_format(v) for v in row))
    text = "\n".join(lines) + "\n"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def read_csv(path) -> dict[str, list]:
    """Parse a file written by :func:`write_csv`; numeric cells become floats."""
    with open(path, encoding="utf-8") as fh:
        header, *rows = fh.read().splitlines()
    names = header.split(",")
    out: dict[str, list] = {k: [] for k in names}
    for row in rows:
        for name, cell in zip(names, row.split(",")):
            try:
                out[name].append(float(cell))
            except ValueError:
                out[name].append(cell)
    return out


def pgm_bytes(matrix) -> bytes:
    M = np.asarray(matrix, dtype=float)
    if M.ndim == 1:
        M = M[np.newaxis, :]
    if M.ndim != 2 or M.size == 0:
        raise EmptyInput("heatmap needs a nonempty 2-D matrix")
    if not np.all(np.isfinite(M)):
        raise ValueError("heatmap values must be finite")
    lo, hi = M.min(), M.max()
    if hi > lo:
        pixels = np.rint((M - lo) / (hi - lo) * 65535.0)
    else:
        pixels = np.zeros_like(M)
    rows, cols = M.shape
    header = f"P5\n{cols} {rows}\n65535\n".encode("ascii")
    return header + pixels.astype(">u2").tobytes()


def write_pgm_heatmap(matrix, path) -> Path:
    """Binary 16-bit P5 image, linear min-max scaled (min -> 0, max -> 65535)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = pgm_bytes(matrix)
    with open(path, "wb") as fh:
        fh.write(data)
    return path


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    magic, dims, maxval, body = raw.split(b"\n", 3)
    if magic != b"P5" or maxval != b"65535":
        raise ValueError(f"{path} is not a 16-bit P5 image")
    cols, rows = map(int, dims.split())
    return np.frombuffer(body, dtype=">u2").reshape(rows, cols).astype(np.int64)


def write_histogram(path, eigenvalues, scale: float = 1.0, bins: int = 50) -> Path:
    hist = level_density_histogram(eigenvalues, scale, bins)
    return write_csv(path, {"bin_center": hist.centers, "count": hist.counts})


def default_output_dir() -> Path:
    return Path(os.environ.get("QMATRIX_OUT", "qmatrix-out"))
