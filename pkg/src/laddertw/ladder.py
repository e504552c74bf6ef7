"""Ladders: recognition, classification, shortening/lengthening, and the two
constructive tree-decomposition extensions.

A ladder of length k is a 2 x (k+1) grid given by two rails. ``top[i]`` and
``bottom[i]`` form rung i. Corner naming follows a, b on the left and c, d on
the right: ``a = top[0]``, ``b = bottom[0]``, ``c = top[-1]``, ``d = bottom[-1]``.
A graph contains the ladder when the rail vertices induce exactly the grid
and only the four corners have neighbours outside it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .decomposition import TreeDecomposition, validate
from .errors import PreconditionError
from .graph import Graph, contract_edge, is_edge_cut, norm_edge, vkey


@dataclass(frozen=True)
class Ladder:
    top: tuple
    bottom: tuple

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(self.top))
        object.__setattr__(self, "bottom", tuple(self.bottom))

    @property
    def length(self) -> int:
        return len(self.top) - 1

    @property
    def cornerpoints(self) -> tuple:
        return (self.top[0], self.bottom[0], self.top[-1], self.bottom[-1])

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.top) | frozenset(self.bottom)

    def rungs(self) -> list:
        return list(zip(self.top, self.bottom))

    def rail_edges(self) -> list:
        return [(r[i], r[i + 1]) for r in (self.top, self.bottom) for i in range(len(r) - 1)]

    def grid_edges(self) -> set:
        return {norm_edge(u, v) for u, v in self.rail_edges() + self.rungs()}

    def squares(self) -> list:
        """(u, v, w, x) per square: u, w on top, v, x on bottom, u-v the left rung."""
        t, b = self.top, self.bottom
        return [(t[i], b[i], t[i + 1], b[i + 1]) for i in range(self.length)]

    def variants(self) -> list:
        """The same embedded grid written from each corner (and, for one square, sideways)."""
        t, b = self.top, self.bottom
        out = [Ladder(t, b), Ladder(b, t), Ladder(t[::-1], b[::-1]), Ladder(b[::-1], t[::-1])]
        if self.length == 1:
            out += [Ladder((t[0], b[0]), (t[1], b[1])), Ladder((t[1], b[1]), (t[0], b[0])),
                    Ladder((b[0], t[0]), (b[1], t[1])), Ladder((b[1], t[1]), (b[0], t[0]))]
        return out

    def canonical(self) -> "Ladder":
        return min(self.variants(), key=lambda L: ([vkey(v) for v in L.top], [vkey(v) for v in L.bottom]))

    def to_json(self) -> dict:
        return {"top": list(self.top), "bottom": list(self.bottom), "length": self.length}


@dataclass(frozen=True)
class LadderClass:
    disconnecting: bool
    degree2_cornerpoints: tuple
    tw3_certified: bool


def ladder_violations(g: Graph, L: Ladder) -> list:
    """Plain-language list of broken ladder invariants; empty when ``L`` is contained in ``g``."""
    problems = []
    if len(L.top) != len(L.bottom) or L.length < 1:
        return ["rails must have equal length >= 2"]
    verts = list(L.top) + list(L.bottom)
    if len(set(verts)) != len(verts):
        return ["rail vertices are not distinct"]
    missing = [v for v in verts if v not in g]
    if missing:
        return [f"vertex {missing[0]!r} not in graph"]
    vs = L.vertices
    grid = L.grid_edges()
    for u, v in sorted(grid, key=lambda e: (vkey(e[0]), vkey(e[1]))):
        if not g.has_edge(u, v):
            problems.append(f"grid edge {(u, v)!r} missing")
    for u in sorted(vs, key=vkey):
        for v in g.sorted_neighbors(u):
            if v in vs and vkey(u) < vkey(v) and (u, v) not in grid:
                problems.append(f"induced condition: extra edge {(u, v)!r}")
    corners = set(L.cornerpoints)
    for u in sorted(vs - corners, key=vkey):
        outside = g.neighbors(u) - vs
        if outside:
            problems.append(f"boundary condition: non-corner {u!r} touches {sorted(outside, key=vkey)[0]!r}")
    return problems


def is_ladder(g: Graph, L: Ladder) -> bool:
    return not ladder_violations(g, L)


def _require(g: Graph, L: Ladder) -> None:
    problems = ladder_violations(g, L)
    if problems:
        raise PreconditionError(f"not a ladder of this graph: {problems[0]}")


# -- recognition --------------------------------------------------------------

def _square_seeds(g: Graph) -> set:
    """Chordless 4-cycles as rung pairs ((t0, b0), (t1, b1)), both orientations."""
    seeds = set()
    for t0 in g.vertices():
        for b0 in g.neighbors(t0):
            for t1 in g.neighbors(t0):
                if t1 == b0:
                    continue
                for b1 in g.neighbors(b0) & g.neighbors(t1):
                    if b1 in (t0, b0) or g.has_edge(t0, b1) or g.has_edge(b0, t1):
                        continue
                    seeds.add(((t0, b0), (t1, b1)))
    return seeds


def _next_rung(g: Graph, prev, cur):
    """Unique rung continuing the strip past ``cur`` (coming from ``prev``), or None."""
    (tp, bp), (t, b) = prev, cur
    if g.degree(t) != 3 or g.degree(b) != 3:
        return None
    rest_t = g.neighbors(t) - {tp, b}
    rest_b = g.neighbors(b) - {bp, t}
    if len(rest_t) != 1 or len(rest_b) != 1:
        return None
    (t2,), (b2,) = rest_t, rest_b
    if t2 == b2 or not g.has_edge(t2, b2):
        return None
    return (t2, b2)


def _grow(g: Graph, seed) -> tuple:
    """Grow a seed square into its full strip.

    Returns (rungs, closure) with closure None for a path-like strip, "plain"
    for a circular ladder and "twist" for a Mobius ladder.
    """
    rungs = list(seed)
    used = {v for r in rungs for v in r}
    while True:
        nxt = _next_rung(g, rungs[-2], rungs[-1])
        if nxt is None:
            break
        if nxt[0] in used or nxt[1] in used:
            first = rungs[0]
            if nxt == first:
                return rungs, "plain"
            if nxt == first[::-1]:
                return rungs, "twist"
            break
        rungs.append(nxt)
        used.update(nxt)
    while True:
        nxt = _next_rung(g, rungs[1], rungs[0])
        if nxt is None or nxt[0] in used or nxt[1] in used:
            break
        rungs.insert(0, nxt)
        used.update(nxt)
    return rungs, None


def _windows(rungs: list, closure):
    n = len(rungs)
    if closure is None:
        for i in range(n):
            for j in range(i + 1, n):
                yield rungs[i:j + 1]
        return
    # unroll once; a Mobius closure swaps the rails past the seam
    seq = rungs + ([r[::-1] for r in rungs] if closure == "twist" else list(rungs))
    for i in range(n):
        for size in range(2, n + 1):
            yield seq[i:i + size]


def find_ladders(g: Graph, min_length: int = 1) -> list:
    """All maximal ladders of length >= ``min_length``, canonicalised, sorted.

    Maximal means no other ladder of ``g`` has a strictly larger vertex set
    containing this one's.
    """
    if min_length < 1:
        raise PreconditionError("min_length must be >= 1")
    found: dict = {}
    strips_seen = set()
    for seed in sorted(_square_seeds(g), key=lambda s: [vkey(v) for r in s for v in r]):
        rungs, closure = _grow(g, seed)
        key = frozenset(rungs) | frozenset(r[::-1] for r in rungs)
        if key in strips_seen:
            continue
        strips_seen.add(key)
        for window in _windows(rungs, closure):
            tops = tuple(r[0] for r in window)
            bots = tuple(r[1] for r in window)
            if len(set(tops + bots)) != 2 * len(window):
                continue
            lad = Ladder(tops, bots)
            if is_ladder(g, lad):
                lad = lad.canonical()
                prev = found.get(lad.vertices)
                if prev is None or _ladder_key(lad) < _ladder_key(prev):
                    found[lad.vertices] = lad
    ladders = sorted(found.values(), key=_ladder_key)
    sets = list(found)
    maximal = [L for L in ladders if not any(L.vertices < s for s in sets)]
    return [L for L in maximal if L.length >= min_length]


def _ladder_key(L: Ladder):
    return ([vkey(v) for v in L.top], [vkey(v) for v in L.bottom])


# -- classification -----------------------------------------------------------

def classify(g: Graph, L: Ladder) -> LadderClass:
    """Disconnecting flag, degree-2 corners and the tw >= 3 certificate for ``L``."""
    _require(g, L)
    verdicts = []
    for u, v, w, x in L.squares():
        verdicts.append(is_edge_cut(g, [(u, w), (v, x)]) is not None)
    if len(set(verdicts)) != 1:
        raise AssertionError(f"squares of {L} disagree on disconnection")
    disconnecting = verdicts[0]
    deg2 = tuple(c for c in L.cornerpoints if g.degree(c) == 2)
    return LadderClass(disconnecting, deg2, L.length >= 2 and not disconnecting)


# -- length surgery -------------------------------------------------------------

def shorten(g: Graph, L: Ladder, target: int) -> tuple:
    """Contract rungs out of the middle of ``L`` until it has length ``target``.

    Corners are kept, so the ladder's attachment to the rest of ``g`` is untouched.
    """
    _require(g, L)
    if not 1 <= target <= L.length:
        raise PreconditionError(f"target {target} outside [1, {L.length}]")
    top, bottom = list(L.top), list(L.bottom)
    while len(top) - 1 > target:
        m = (len(top) - 1) // 2
        g = contract_edge(g, (top[m + 1], top[m]))
        g = contract_edge(g, (bottom[m + 1], bottom[m]))
        del top[m], bottom[m]
    return g, Ladder(top, bottom)


def _insert_rung(g: Graph, top: list, bottom: list, i: int):
    """Subdivide both rails between rungs i and i+1 and join the new pair."""
    u2, v2 = g.fresh_ids(2)
    u, w, v, x = top[i], top[i + 1], bottom[i], bottom[i + 1]
    g = g.remove_edges([(u, w), (v, x)]).add_edges([(u, u2), (u2, w), (v, v2), (v2, x), (u2, v2)])
    top.insert(i + 1, u2)
    bottom.insert(i + 1, v2)
    return g, u2, v2


def lengthen(g: Graph, L: Ladder, extra: int) -> tuple:
    """Insert ``extra`` new rungs into the middle of ``L`` using fresh vertex ids."""
    _require(g, L)
    if extra < 1:
        raise PreconditionError("extra must be >= 1")
    top, bottom = list(L.top), list(L.bottom)
    for _ in range(extra):
        g, _, _ = _insert_rung(g, top, bottom, (len(top) - 1) // 2)
    return g, Ladder(top, bottom)


# -- constructive decomposition extensions ---------------------------------------

class Extension(NamedTuple):
    graph: Graph
    decomposition: TreeDecomposition
    ladder: Ladder
    bag_index: int


def square_extension(g: Graph, td: TreeDecomposition, L: Ladder, bag_index: int) -> Extension:
    """Lengthen ``L`` by one square inside a bag that holds a whole square.

    With square (u, v, w, x) in bag B, a new rung (u', v') goes between the
    rungs u-v and w-x; bags {u', u, v, w, x} and {u', v', v, w, x} hang off B
    as a path. The last bag again holds a full square, so the step chains.
    """
    _require(g, L)
    bag = td.bags[bag_index]
    squares = [i for i, sq in enumerate(L.squares()) if set(sq) <= bag]
    if not squares:
        raise PreconditionError(f"bag {bag_index} holds no complete square of the ladder")
    i = squares[0]
    if not validate(g, td).ok:
        raise PreconditionError("input decomposition does not validate")
    top, bottom = list(L.top), list(L.bottom)
    u, v, w, x = L.squares()[i]
    g2, u2, v2 = _insert_rung(g, top, bottom, i)
    td2, b1 = td.add_bag({u2, u, v, w, x}, bag_index)
    td2, b2 = td2.add_bag({u2, v2, v, w, x}, b1)
    return Extension(g2, td2, Ladder(top, bottom), b2)


def extend_decomposition_square(g: Graph, td: TreeDecomposition, L: Ladder, bag_index: int) -> tuple:
    ext = square_extension(g, td, L, bag_index)
    return ext.graph, ext.decomposition


def _orient_pointed(g: Graph, L: Ladder):
    """Rewrite ``L`` so its top-right corner has degree 2, or None."""
    for var in (L, Ladder(L.bottom, L.top), Ladder(L.top[::-1], L.bottom[::-1]),
                Ladder(L.bottom[::-1], L.top[::-1])):
        if g.degree(var.top[-1]) == 2:
            return var
    return None


def pointed_extension(g: Graph, td: TreeDecomposition, L: Ladder) -> Extension:
    """Lengthen ``L`` by one rung at a degree-2 corner without growing any bag past 4.

    With corner c (neighbours w and d) suppressed into d, the triangle
    {w, x, d} sits in some bag B. The chain {w, x, w', d}, {x, w', x', d}
    hangs off B for the new rung (w', x'); c comes back by subdividing w'-d,
    covered by the bag {w', c, d}.
    """
    _require(g, L)
    oriented = _orient_pointed(g, L)
    if oriented is None:
        raise PreconditionError("ladder has no degree-2 cornerpoint")
    if not validate(g, td).ok:
        raise PreconditionError("input decomposition does not validate")
    top, bottom = list(oriented.top), list(oriented.bottom)
    c, d, w, x = top[-1], bottom[-1], top[-2], bottom[-2]
    # suppressing c is contracting c into d; project that onto the bags
    td1 = td.replace(c, d)
    host = td1.find_bag({w, x, d})
    if host is None:
        raise PreconditionError(f"no bag contains the triangle {(w, x, d)!r}")
    w2, x2 = g.fresh_ids(2)
    g2 = (g.remove_edges([(x, d), (w, c)])
           .add_edges([(w, w2), (x, x2), (w2, x2), (w2, c), (x2, d)]))
    td2, b1 = td1.add_bag({w, x, w2, d}, host)
    td2, b2 = td2.add_bag({x, w2, x2, d}, b1)
    td2, b3 = td2.add_bag({w2, c, d}, b2)
    new = Ladder(top[:-1] + [w2, c], bottom[:-1] + [x2, d])
    return Extension(g2, td2, new, b3)


def extend_decomposition_pointed(g: Graph, td: TreeDecomposition, L: Ladder) -> tuple:
    ext = pointed_extension(g, td, L)
    return ext.graph, ext.decomposition
