"""CSV formats.

Points: one point per line, ``d`` comma-separated floats; an optional
header line. Labels: ``index,label`` lines with 0-based index and
1-based label, preceded by an ``index,label`` header. Variance curve:
``r,v_hat`` header, one row per grid radius.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import MalformedInput


def _fmt(x: float) -> str:
    # repr round-trips doubles exactly
    return repr(float(x))


def _write_text(path, text: str):
    Path(path).write_text(text, encoding="utf-8", newline="")


def read_points(path, header: bool = False) -> np.ndarray:
    rows = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if header and lineno == 1:
                continue
            if not row or all(not c.strip() for c in row):
                continue
            try:
                values = [float(c) for c in row]
            except ValueError:
                raise MalformedInput(f"{path}:{lineno}: non-numeric field in {row!r}", lineno) from None
            if not all(np.isfinite(values)):
                raise MalformedInput(f"{path}:{lineno}: non-finite coordinate", lineno)
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise MalformedInput(
                    f"{path}:{lineno}: expected {width} columns, found {len(values)}", lineno)
            rows.append(values)
    if not rows:
        raise MalformedInput(f"{path}: no points found", None)
    return np.array(rows, dtype=np.float64)


def format_points(coords) -> str:
    out = io.StringIO()
    for row in np.asarray(coords):
        out.write(",".join(_fmt(v) for v in row))
        out.write("\n")
    return out.getvalue()


def write_points(path, coords):
    _write_text(path, format_points(coords))


def format_labels(labels) -> str:
    lines = ["index,label"]
    lines += [f"{i},{int(lab)}" for i, lab in enumerate(labels)]
    return "\n".join(lines) + "\n"


def write_labels(path, labels):
    _write_text(path, format_labels(labels))


def read_labels(path) -> np.ndarray:
    pairs = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if lineno == 1 and row[0].strip() == "index":
                continue
            try:
                idx, lab = int(row[0]), int(row[1])
            except (ValueError, IndexError):
                raise MalformedInput(f"{path}:{lineno}: expected 'index,label'", lineno) from None
            pairs.append((idx, lab))
    if not pairs:
        raise MalformedInput(f"{path}: no labels found", None)
    pairs.sort()
    idx = np.array([p[0] for p in pairs])
    if not np.array_equal(idx, np.arange(len(pairs))):
        raise MalformedInput(f"{path}: indices must be 0..n-1 without gaps", None)
    return np.array([p[1] for p in pairs], dtype=np.int64)


def format_curve(radii, values) -> str:
    lines = ["r,v_hat"]
    lines += [f"{_fmt(r)},{_fmt(v)}" for r, v in zip(radii, values)]
    return "\n".join(lines) + "\n"


def write_curve(path, radii, values):
    _write_text(path, format_curve(radii, values))


def read_curve(path) -> tuple[np.ndarray, np.ndarray]:
    radii, values = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (lineno == 1 and row[0].strip() == "r"):
                continue
            try:
                radii.append(float(row[0]))
                values.append(float(row[1]))
            except (ValueError, IndexError):
                raise MalformedInput(f"{path}:{lineno}: expected 'r,v_hat'", lineno) from None
    return np.array(radii), np.array(values)


def format_phi(Phi, labels) -> str:
    """Columns ``phi_1..phi_k,label``, one row per point."""
    k = Phi.shape[0]
    lines = [",".join([f"phi_{i + 1}" for i in range(k)] + ["label"])]
    for j in range(Phi.shape[1]):
        lines.append(",".join([_fmt(v) for v in Phi[:, j]] + [str(int(labels[j]))]))
    return "\n".join(lines) + "\n"


def write_phi(path, Phi, labels):
    _write_text(path, format_phi(Phi, labels))


def read_phi(path) -> tuple[np.ndarray, np.ndarray]:
    """Returns ``(points, labels)`` with points as an ``n x k`` array."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise MalformedInput(f"{path}: no rows", None)
    body = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            body.append([float(v) for v in row])
        except ValueError:
            raise MalformedInput(f"{path}:{lineno}: non-numeric field", lineno) from None
    arr = np.array(body)
    return arr[:, :-1], arr[:, -1].astype(np.int64)


def write_json(path, obj):
    _write_text(path, json.dumps(obj, indent=2) + "\n")
