"""The graph-set file format.

Line-delimited text, UTF-8. Line 1 is a header object; every following
non-empty line is one graph record. Both are JSON with a fixed key order:

    header: {"format": "graphset/1", "manifest": {...}}
    record: {"n": int, "k": int, "edges": [[u, v], ...],
             "x": [[...], ...] | null, "c": [...] | null}

Edges are normalized u < v and sorted; attribute reals round-trip exactly
(shortest-repr JSON floats). The manifest carries whatever provenance the
writer supplies - dataset generators record their name, parameters, seed,
and estimated bandwidth.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import FormatError
from .graphs import Graph

FORMAT_VERSION = "graphset/1"


def _record(g: Graph) -> str:
    rec = {
        "n": g.n,
        "k": g.k,
        "edges": sorted([int(u), int(v)] for u, v in g.edges),
        "x": None if g.attributes is None else g.attributes.tolist(),
        "c": None if g.community_labels is None else g.community_labels.tolist(),
    }
    return json.dumps(rec, separators=(",", ":"))


def save_graphs(graphs: list[Graph], path, manifest: dict | None = None) -> None:
    header = json.dumps(
        {"format": FORMAT_VERSION, "manifest": manifest or {}},
        separators=(",", ":"),
        sort_keys=True,
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for g in graphs:
            fh.write(_record(g) + "\n")


def _parse_record(obj: dict, lineno: int) -> Graph:
    try:
        n = int(obj["n"])
        k = int(obj["k"])
        edges = frozenset((int(u), int(v)) for u, v in obj["edges"])
        x = obj.get("x")
        c = obj.get("c")
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"line {lineno}: malformed graph record ({exc})") from exc
    attributes = None
    if x is not None:
        attributes = np.asarray(x, dtype=np.float64)
        if attributes.ndim != 2 or attributes.shape != (n, k):
            raise FormatError(
                f"line {lineno}: attribute block shape {attributes.shape} "
                f"does not match n={n}, k={k}"
            )
    elif k != 0:
        raise FormatError(f"line {lineno}: k={k} but no attribute block")
    labels = None if c is None else np.asarray(c, dtype=np.int64)
    try:
        return Graph(n, edges, attributes=attributes, community_labels=labels)
    except Exception as exc:
        raise FormatError(f"line {lineno}: {exc}") from exc


def read_manifest(path) -> dict:
    """Read only the header manifest of a graph-set file."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
    return _parse_header(first)


def _parse_header(line: str) -> dict:
    try:
        header = json.loads(line)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line 1: header is not valid JSON ({exc})") from exc
    if not isinstance(header, dict) or "format" not in header:
        raise FormatError("line 1: missing format header")
    if header["format"] != FORMAT_VERSION:
        raise FormatError(
            f"line 1: format version {header['format']!r} is not {FORMAT_VERSION!r}"
        )
    return header.get("manifest", {})


def load_graphs(path) -> list[Graph]:
    """Load every graph record; errors carry the offending line number."""
    graphs: list[Graph] = []
    with open(path, "r", encoding="utf-8") as fh:
        _parse_header(fh.readline())
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"line {lineno}: not valid JSON ({exc})") from exc
            graphs.append(_parse_record(obj, lineno))
    return graphs
