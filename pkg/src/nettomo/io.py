"""Readers and writers for graph, routing, vector and report files.

Writers are atomic (temp file + rename) and JSON output is key-sorted so
identical objects always produce identical bytes.
"""
from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path as FsPath

import numpy as np

from .exceptions import ValidationError
from .netgraph import Network, Path, RoutingMatrix


class FileFormatError(ValidationError):
    """Raised for unreadable or malformed input files."""


def _node(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def _read_text(path) -> str:
    try:
        return FsPath(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc


# graph ---------------------------------------------------------------------


def parse_graph(text: str) -> Network:
    boundary, edges = None, []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("boundary:"):
            if boundary is not None:
                raise FileFormatError(f"line {ln}: duplicate boundary header")
            boundary = [_node(t) for t in line.split(":", 1)[1].split()]
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FileFormatError(f"line {ln}: expected 'u v link_id'")
        try:
            lid = int(parts[2])
        except ValueError as exc:
            raise FileFormatError(f"line {ln}: link id must be an integer") from exc
        edges.append((_node(parts[0]), _node(parts[1]), lid))
    if boundary is None:
        raise FileFormatError("missing 'boundary:' header")
    nodes = []
    seen = set()
    for u, v, _ in sorted(edges, key=lambda e: e[2]):
        for x in (u, v):
            if x not in seen:
                seen.add(x)
                nodes.append(x)
    try:
        return Network(tuple(nodes), tuple(edges), frozenset(boundary))
    except ValidationError as exc:
        raise FileFormatError(str(exc)) from exc


def format_graph(network: Network) -> str:
    lines = ["boundary: " + " ".join(str(b) for b in sorted(network.boundary, key=_key))]
    for u, v, lid in sorted(network.edges, key=lambda e: e[2]):
        lines.append(f"{u} {v} {lid}")
    return "\n".join(lines) + "\n"


def _key(v):
    return (str(type(v)), v)


def read_graph(path) -> Network:
    return parse_graph(_read_text(path))


# routing -------------------------------------------------------------------


def parse_routing(text: str) -> RoutingMatrix:
    """JSON ``{"n": .., "paths": [[..], ..]}`` or CSV rows of 0/1."""
    stripped = text.strip()
    if not stripped:
        raise FileFormatError("empty routing file")
    try:
        if stripped.startswith("{"):
            try:
                data = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise FileFormatError(f"bad JSON: {exc}") from exc
            if not isinstance(data, dict) or "n" not in data or "paths" not in data:
                raise FileFormatError("routing JSON needs keys 'n' and 'paths'")
            n = data["n"]
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise FileFormatError("'n' must be a positive integer")
            paths = []
            for p in data["paths"]:
                if not isinstance(p, list) or not all(isinstance(l, int) and not isinstance(l, bool) for l in p):
                    raise FileFormatError("each path must be a list of integer link ids")
                paths.append(Path(tuple(p)))
            return RoutingMatrix.from_paths(paths, n)
        rows = []
        for ln, row in enumerate(csv.reader(stripped.splitlines()), 1):
            cells = [c.strip() for c in row if c.strip()]
            if not cells:
                continue
            try:
                rows.append([int(c) for c in cells])
            except ValueError as exc:
                raise FileFormatError(f"row {ln}: entries must be 0 or 1") from exc
        if len({len(r) for r in rows}) != 1:
            raise FileFormatError("CSV rows have different lengths")
        return RoutingMatrix(np.array(rows, dtype=np.int64))
    except FileFormatError:
        raise
    except ValidationError as exc:
        raise FileFormatError(str(exc)) from exc


def format_routing(routing: RoutingMatrix) -> str:
    rows = ",\n".join("    " + json.dumps(list(p.links)) for p in routing.paths)
    return f'{{\n  "n": {routing.n},\n  "paths": [\n{rows}\n  ]\n}}\n'


def read_routing(path) -> RoutingMatrix:
    return parse_routing(_read_text(path))


# vectors -------------------------------------------------------------------


def parse_vector(text: str, header: str | None = None) -> np.ndarray:
    """One value per line under a header ``x`` or ``y``."""
    lines = [l.strip() for l in text.splitlines() if l.strip()]
    if not lines:
        raise FileFormatError("empty vector file")
    head = lines[0].split(",")[0].strip()
    if head not in ("x", "y"):
        raise FileFormatError("vector file must start with header 'x' or 'y'")
    if header is not None and head != header:
        raise FileFormatError(f"expected header '{header}', found '{head}'")
    try:
        vals = np.array([float(l) for l in lines[1:]], dtype=float)
    except ValueError as exc:
        raise FileFormatError(f"non-numeric value: {exc}") from exc
    if not np.isfinite(vals).all():
        raise FileFormatError("vector contains non-finite values")
    return vals


def format_vector(values, header: str) -> str:
    return header + "\n" + "".join(f"{float(v)!r}\n" for v in values)


def read_vector(path, header: str | None = None) -> np.ndarray:
    return parse_vector(_read_text(path), header)


# generic -------------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def read_json(path) -> dict:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"bad JSON in {path}: {exc}") from exc


def write_text(path, text: str) -> None:
    """Write ``text`` atomically: readers never see a partial file."""
    path = FsPath(path)
    directory = path.parent if str(path.parent) else FsPath(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
