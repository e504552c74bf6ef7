"""PACE-style .gr / .td text formats and the JSON reduction report.

Graph files::

    c optional comments
    c label <v> <text>        (extension: vertex labels)
    p tw <n> <m>
    <u> <v>                   (m lines, 1-indexed)

Decomposition files::

    s td <bags> <max_bag_size> <n>
    b <id> <v> ...            (bag ids 1..bags)
    <i> <j>                   (tree edges between bag ids)
"""
from __future__ import annotations

import json
from pathlib import Path

from .decomposition import TreeDecomposition
from .errors import MalformedInputError
from .graph import Graph, build_graph, vkey


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line:
            yield no, line


def parse_gr(text: str) -> Graph:
    header = None
    edges = []
    labels = {}
    for no, line in _lines(text):
        parts = line.split()
        if parts[0] == "c":
            if len(parts) >= 4 and parts[1] == "label":
                try:
                    labels[int(parts[2])] = " ".join(parts[3:])
                except ValueError:
                    raise MalformedInputError(f"line {no}: bad label line") from None
            continue
        if parts[0] == "p":
            if header is not None:
                raise MalformedInputError(f"line {no}: second header")
            if len(parts) != 4 or parts[1] != "tw":
                raise MalformedInputError(f"line {no}: expected 'p tw <n> <m>'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise MalformedInputError(f"line {no}: non-integer header") from None
            continue
        if header is None:
            raise MalformedInputError(f"line {no}: edge before header")
        if len(parts) != 2:
            raise MalformedInputError(f"line {no}: expected '<u> <v>'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedInputError(f"line {no}: non-integer vertex") from None
        for x in (u, v):
            if not 1 <= x <= header[0]:
                raise MalformedInputError(f"line {no}: vertex {x} outside 1..{header[0]}")
        edges.append((u, v))
    if header is None:
        raise MalformedInputError("missing 'p tw' header")
    n, m = header
    if len(edges) != m:
        raise MalformedInputError(f"header promises {m} edges, found {len(edges)}")
    for v in labels:
        if not 1 <= v <= n:
            raise MalformedInputError(f"label for vertex {v} outside 1..{n}")
    return build_graph(edges, labels, vertices=range(1, n + 1))


def pace_ids(g: Graph) -> tuple:
    """Renumber ``g`` to 1..n in id order; returns (graph, old -> new map)."""
    mapping = {v: i for i, v in enumerate(g.vertices(), start=1)}
    return g.relabel(mapping), mapping


def format_gr(g: Graph, comments=()) -> str:
    """Text in .gr format; ids must already be 1..n (see :func:`pace_ids`)."""
    if set(g.vertices()) != set(range(1, g.n + 1)):
        g, _ = pace_ids(g)
    out = [f"c {c}" for c in comments]
    for v in g.vertices():
        if g.label(v) is not None:
            out.append(f"c label {v} {g.label(v)}")
    out.append(f"p tw {g.n} {g.m}")
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


def parse_td(text: str) -> TreeDecomposition:
    header = None
    bags: dict = {}
    edges = []
    for no, line in _lines(text):
        parts = line.split()
        if parts[0] == "c":
            continue
        try:
            if parts[0] == "s":
                if len(parts) != 5 or parts[1] != "td":
                    raise MalformedInputError(f"line {no}: expected 's td <bags> <max_bag_size> <n>'")
                header = tuple(int(x) for x in parts[2:])
            elif parts[0] == "b":
                if header is None:
                    raise MalformedInputError(f"line {no}: bag before header")
                bid = int(parts[1])
                if bid in bags:
                    raise MalformedInputError(f"line {no}: bag {bid} defined twice")
                bags[bid] = frozenset(int(x) for x in parts[2:])
            else:
                if header is None:
                    raise MalformedInputError(f"line {no}: edge before header")
                if len(parts) != 2:
                    raise MalformedInputError(f"line {no}: expected '<i> <j>'")
                edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise MalformedInputError(f"line {no}: non-integer field") from None
    if header is None:
        raise MalformedInputError("missing 's td' header")
    count, max_size, _n = header
    if sorted(bags) != list(range(1, count + 1)):
        raise MalformedInputError(f"expected bags 1..{count}, found {sorted(bags)}")
    actual = max((len(b) for b in bags.values()), default=0)
    if actual != max_size:
        raise MalformedInputError(f"header max bag size {max_size} but largest bag has {actual}")
    for i, j in edges:
        if i not in bags or j not in bags:
            raise MalformedInputError(f"tree edge ({i}, {j}) names a missing bag")
    return TreeDecomposition([bags[i] for i in range(1, count + 1)], [(i - 1, j - 1) for i, j in edges])


def format_td(td: TreeDecomposition, n: int, mapping=None) -> str:
    """Text in .td format; ``mapping`` renames vertices (e.g. from :func:`pace_ids`)."""
    f = (lambda v: mapping[v]) if mapping else (lambda v: v)
    out = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, bag in enumerate(td.bags, start=1):
        vs = sorted((f(v) for v in bag), key=vkey)
        out.append(" ".join(["b", str(i)] + [str(v) for v in vs]))
    out.extend(f"{i + 1} {j + 1}" for i, j in td.tree_edges)
    return "\n".join(out) + "\n"


def read_gr(path) -> Graph:
    return parse_gr(Path(path).read_text())


def read_td(path) -> TreeDecomposition:
    return parse_td(Path(path).read_text())


def write_gr(g: Graph, path, comments=()) -> None:
    Path(path).write_text(format_gr(g, comments))


def write_td(td: TreeDecomposition, n: int, path, mapping=None) -> None:
    Path(path).write_text(format_td(td, n, mapping))


def write_json(data, path) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x, key=vkey)
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"cannot serialise {type(x).__name__}")
