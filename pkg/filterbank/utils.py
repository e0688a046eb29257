# filterbank/utils.py
import json
import math
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config import get_logger
from constants import COEFFS_HEADER, GRAPH_HEADER, SIGNAL_HEADER
from .errors import ParseError
from .graph import Graph, build_graph

logger = get_logger(__name__)

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    """Shortest text that parses back to the same float."""
    return repr(float(value))


def _parse_header(line: str, header: str, path: PathLike) -> List[int]:
    parts = line.split()
    expected = header.split()
    if parts[:len(expected)] != expected:
        raise ParseError(f"{path}: expected header '{header} ...', got {line.strip()!r}")
    try:
        return [int(p) for p in parts[len(expected):]]
    except ValueError as exc:
        raise ParseError(f"{path}: malformed header {line.strip()!r}") from exc


def _data_lines(path: PathLike) -> Tuple[str, List[Tuple[int, str]]]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise ParseError(f"{path}: empty file")
    body = [(no, line.strip()) for no, line in enumerate(lines[1:], start=2) if line.strip()]
    return lines[0], body


def _parse_float(token: str, path: PathLike, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError as exc:
        raise ParseError(f"{path}:{line_no}: not a number: {token!r}") from exc
    if not math.isfinite(value):
        raise ParseError(f"{path}:{line_no}: non-finite value {token!r}")
    return value


def read_graph(path: PathLike) -> Graph:
    """Read a ``graphfb-graph v1 <n>`` edge-list file (0-based, each edge once)."""
    header, body = _data_lines(path)
    values = _parse_header(header, GRAPH_HEADER, path)
    if len(values) != 1:
        raise ParseError(f"{path}: graph header must carry the vertex count")
    n = values[0]
    edges = []
    for line_no, line in body:
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"{path}:{line_no}: expected 'i j w', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"{path}:{line_no}: vertex indices must be integers") from exc
        edges.append((i, j, _parse_float(parts[2], path, line_no)))
    return build_graph(n, edges)


def write_graph(g: Graph, path: PathLike) -> Path:
    out = Path(path)
    lines = [f"{GRAPH_HEADER} {g.n}"]
    lines.extend(f"{i} {j} {format_float(w)}" for i, j, w in g.edges())
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out


def read_signal(path: PathLike) -> np.ndarray:
    header, body = _data_lines(path)
    values = _parse_header(header, SIGNAL_HEADER, path)
    if len(values) != 1:
        raise ParseError(f"{path}: signal header must carry the length")
    signal = np.array([_parse_float(line, path, no) for no, line in body])
    if signal.size != values[0]:
        raise ParseError(f"{path}: header declares {values[0]} values, found {signal.size}")
    return signal


def write_signal(x: Sequence[float], path: PathLike) -> Path:
    out = Path(path)
    values = np.asarray(x, dtype=float)
    lines = [f"{SIGNAL_HEADER} {values.size}"]
    lines.extend(format_float(v) for v in values)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out


def read_coeffs(path: PathLike) -> Tuple[np.ndarray, List[int]]:
    """Return the flat coefficient vector and its block lengths."""
    header, body = _data_lines(path)
    values = _parse_header(header, COEFFS_HEADER, path)
    if len(values) < 3 or values[0] != len(values) - 2:
        raise ParseError(f"{path}: header needs depth followed by depth + 1 block lengths")
    lengths = values[1:]
    coeffs = np.array([_parse_float(line, path, no) for no, line in body])
    if coeffs.size != sum(lengths):
        raise ParseError(f"{path}: header declares {sum(lengths)} coefficients, found {coeffs.size}")
    return coeffs, lengths


def write_coeffs(values: Sequence[float], lengths: Sequence[int], path: PathLike) -> Path:
    out = Path(path)
    depth = len(lengths) - 1
    header = " ".join([COEFFS_HEADER, str(depth)] + [str(int(v)) for v in lengths])
    lines = [header]
    lines.extend(format_float(v) for v in np.asarray(values, dtype=float))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out


def to_json_value(value):
    """Recursively make a record JSON-safe; infinities become ``"inf"``/``"-inf"``."""
    if isinstance(value, dict):
        return {k: to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_json_value(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    return value


def dumps_json(record) -> str:
    return json.dumps(to_json_value(record), indent=2)


def write_json(record, path: PathLike) -> Path:
    out = Path(path)
    out.write_text(dumps_json(record) + "\n", encoding="utf-8")
    return out


def read_json(path: PathLike) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


def metrics_frame(record: dict) -> pd.DataFrame:
    """Two-column ``metric, value`` table for plot tooling."""
    rows: Iterable = ((k, v) for k, v in to_json_value(record).items())
    return pd.DataFrame(list(rows), columns=['metric', 'value'])


def write_csv(df: pd.DataFrame, path: PathLike) -> Path:
    out = Path(path)
    df.to_csv(out, index=False)
    return out
