"""Potential files, CSV tables and JSON reports.

Every writer is deterministic: fixed column order, ``repr`` floats, sorted
JSON keys, trailing newline.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exact import RadicalScalar
from .spectral import PotentialSpec, SpectralDecomposition
from .tunneling import TunnelingEstimate

SWEEP_HEADER = ("Q", "window_T", "sup_prob", "argmax_t", "gap", "pi_over_gap")


class ReportFormatError(ValueError):
    """Malformed potential, wells or CSV input."""


def parse_wells(text: str) -> dict[int, float]:
    """``"0,2"`` or ``"0:1,2:1,5:0.3"`` -> ``{vertex: weight}`` (weight 1 by default)."""
    out: dict[int, float] = {}
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        v, _, w = tok.partition(":")
        try:
            vertex = int(v)
            weight = float(w) if w else 1.0
        except ValueError as exc:
            raise ReportFormatError(f"bad well token {tok!r}") from exc
        if vertex in out:
            raise ReportFormatError(f"vertex {vertex} listed twice")
        out[vertex] = weight
    if not out:
        raise ReportFormatError("no wells given")
    return out


def parse_potential_text(text: str) -> dict[int, float]:
    """``vertex weight`` per line, ``#`` comments."""
    out: dict[int, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ReportFormatError(f"line {lineno}: expected 'vertex weight'")
        try:
            v, w = int(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ReportFormatError(f"line {lineno}: {exc}") from exc
        if v in out:
            raise ReportFormatError(f"line {lineno}: vertex {v} listed twice")
        out[v] = w
    if not out:
        raise ReportFormatError("potential file has no entries")
    return out


def read_potential(path: str | Path) -> dict[int, float]:
    return parse_potential_text(Path(path).read_text())


def format_potential(p: PotentialSpec) -> str:
    return "".join(f"{v} {w!r}\n" for v, w in enumerate(p.weights) if w)


def _rows_to_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def sweep_csv(estimates: Sequence[TunnelingEstimate]) -> str:
    rows = sorted(((e.Q, e.window_T, e.sup_prob, e.argmax_t, e.gap, e.pi_over_gap) for e in estimates),
                  key=lambda r: r[0])
    return _rows_to_text(SWEEP_HEADER, rows)


def spectrum_csv(d: SpectralDecomposition) -> str:
    header = ["lambda"] + [f"psi_{i}" for i in range(d.n)]
    rows = ([d.values[k], *d.vectors[:, k]] for k in range(d.n))
    return _rows_to_text(header, rows)


def evolve_csv(times: np.ndarray, probs: np.ndarray) -> str:
    """``probs[i, v]``: probability at vertex ``v`` at ``times[i]``."""
    header = ["t"] + [f"prob_v{v}" for v in range(probs.shape[1])]
    return _rows_to_text(header, ([t, *row] for t, row in zip(times, probs)))


def read_csv_table(path: str | Path) -> tuple[list[str], np.ndarray]:
    text = Path(path).read_text()
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if len(rows) < 2:
        raise ReportFormatError(f"{path}: CSV has no data rows")
    header = [h.strip() for h in rows[0]]
    try:
        data = np.array([[float(x) for x in r] for r in rows[1:]])
    except ValueError as exc:
        raise ReportFormatError(f"{path}: non-numeric entry ({exc})") from exc
    if data.shape[1] != len(header):
        raise ReportFormatError(f"{path}: ragged rows")
    return header, data


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, RadicalScalar):
        return obj.to_json()
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return None if math.isnan(x) else x
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_text(path: str | Path | None, text: str) -> None:
    """Write to ``path``, or to stdout when ``path`` is None or ``-``."""
    if path is None or str(path) == "-":
        import sys
        sys.stdout.write(text)
        return
    Path(path).write_text(text)
