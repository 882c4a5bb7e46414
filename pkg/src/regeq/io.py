"""CSV datasets, JSON reports and atomic file writes."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .game import Sample


class DataError(ValueError):
    """Malformed dataset file; ``row`` is 1-based counting the header."""

    def __init__(self, msg: str, row: int | None = None):
        super().__init__(f"row {row}: {msg}" if row is not None else msg)
        self.row = row


def atomic_write(path, data: str | bytes) -> None:
    path = Path(path)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": ""})) as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def fmt(v: float) -> str:
    return repr(float(v))


def sample_to_csv(sample: Sample) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x{k + 1}" for k in range(sample.dim)] + ["y", "t"])
    for j in range(sample.m):
        w.writerow([fmt(v) for v in sample.X[j]] + [fmt(sample.y[j]), fmt(sample.t[j])])
    return buf.getvalue()


def write_csv(sample: Sample, path) -> None:
    atomic_write(path, sample_to_csv(sample))


def parse_csv(text: str) -> Sample:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise DataError("empty file", 1)
    header = [h.strip() for h in rows[0]]
    n = len(header) - 2
    expected = [f"x{k + 1}" for k in range(n)] + ["y", "t"]
    if n < 1 or header != expected:
        raise DataError(f"header must be {','.join(expected) if n >= 1 else 'x1,...,xn,y,t'}", 1)
    vals = []
    for r, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != n + 2:
            raise DataError(f"expected {n + 2} fields, got {len(row)}", r)
        try:
            v = [float(c) for c in row]
        except ValueError as e:
            raise DataError(str(e), r) from None
        if not all(np.isfinite(v)):
            raise DataError("non-finite value", r)
        if v[-1] < 0:
            raise DataError("negative tolerance", r)
        vals.append(v)
    if not vals:
        raise DataError("no examples", 2)
    a = np.array(vals)
    return Sample(a[:, :n], a[:, n], a[:, n + 1])


def read_csv(path) -> Sample:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot read {path}: {e.strerror}") from None
    return parse_csv(text)


def write_json(obj, path) -> None:
    atomic_write(path, json.dumps(obj, indent=2, sort_keys=False) + "\n")
