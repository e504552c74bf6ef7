"""Simple undirected graphs with stable vertex ids, plus minor/surgery primitives.

Every operation returns a new :class:`Graph`; inputs are never mutated.
Vertex ids are opaque hashables (ints for everything this package creates).
Fresh ids come from a per-graph monotone counter that survives surgery, so an
id deleted by one rewrite is never reused by a later one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional

from .errors import MalformedInputError, PreconditionError

Vertex = Hashable
Edge = tuple


def vkey(v):
    """Total order over mixed int/str ids: ints first, then by text."""
    if isinstance(v, bool):
        return (1, str(v))
    if isinstance(v, int):
        return (0, v)
    return (1, str(v))


def norm_edge(u, v) -> Edge:
    return (u, v) if vkey(u) <= vkey(v) else (v, u)


class Graph:
    """Simple undirected graph.

    ``labels`` maps some vertices to text (phylogenetic leaves); it must be
    injective.
    """

    __slots__ = ("_adj", "_labels", "_next_id")

    def __init__(self, adj: Mapping, labels: Optional[Mapping] = None, next_id: Optional[int] = None):
        self._adj = {v: frozenset(nb) for v, nb in adj.items()}
        self._labels = dict(labels or {})
        ints = [v for v in self._adj if isinstance(v, int) and not isinstance(v, bool)]
        floor = max(ints) + 1 if ints else 0
        self._next_id = max(floor, next_id or 0)

    # -- queries -----------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return sum(len(nb) for nb in self._adj.values()) // 2

    @property
    def labels(self) -> dict:
        return dict(self._labels)

    @property
    def next_id(self) -> int:
        return self._next_id

    def vertices(self) -> list:
        return sorted(self._adj, key=vkey)

    def vertex_set(self) -> frozenset:
        return frozenset(self._adj)

    def edges(self) -> list:
        out = set()
        for u, nb in self._adj.items():
            for v in nb:
                out.add(norm_edge(u, v))
        return sorted(out, key=lambda e: (vkey(e[0]), vkey(e[1])))

    def neighbors(self, v) -> frozenset:
        return self._adj[v]

    def sorted_neighbors(self, v) -> list:
        return sorted(self._adj[v], key=vkey)

    def degree(self, v) -> int:
        return len(self._adj[v])

    def has_vertex(self, v) -> bool:
        return v in self._adj

    def has_edge(self, u, v) -> bool:
        return u in self._adj and v in self._adj[u]

    def label(self, v):
        return self._labels.get(v)

    def adjacency(self) -> dict:
        return {v: set(nb) for v, nb in self._adj.items()}

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj and self._labels == other._labels

    def __hash__(self):
        return hash((frozenset(self._adj.items()), frozenset(self._labels.items())))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- construction helpers (all return new graphs) ------------------------
    def _derive(self, adj, labels=None, next_id=None) -> "Graph":
        g = Graph.__new__(Graph)
        g._adj = {v: frozenset(nb) for v, nb in adj.items()}
        g._labels = {v: t for v, t in (self._labels if labels is None else labels).items() if v in g._adj}
        ints = [v for v in g._adj if isinstance(v, int) and not isinstance(v, bool)]
        floors = [self._next_id, next_id or 0]
        if ints:
            floors.append(max(ints) + 1)
        g._next_id = max(floors)
        return g

    def fresh_ids(self, k: int) -> list:
        """The next ``k`` ids this graph would hand out."""
        return list(range(self._next_id, self._next_id + k))

    def add_vertex(self, v=None) -> tuple["Graph", Vertex]:
        if v is None:
            v = self._next_id
        if v in self._adj:
            raise PreconditionError(f"vertex {v!r} already present")
        adj = self.adjacency()
        adj[v] = set()
        return self._derive(adj), v

    def add_edges(self, edges: Iterable) -> "Graph":
        adj = self.adjacency()
        for u, v in edges:
            if u == v:
                raise MalformedInputError(f"self-loop at {u!r}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return self._derive(adj)

    def remove_edges(self, edges: Iterable) -> "Graph":
        adj = self.adjacency()
        for u, v in edges:
            if v not in adj.get(u, ()):
                raise PreconditionError(f"edge {(u, v)!r} not in graph")
            adj[u].discard(v)
            adj[v].discard(u)
        return self._derive(adj)

    def remove_vertices(self, vs: Iterable) -> "Graph":
        drop = set(vs)
        for v in drop:
            if v not in self._adj:
                raise PreconditionError(f"vertex {v!r} not in graph")
        adj = {v: nb - drop for v, nb in self._adj.items() if v not in drop}
        return self._derive(adj)

    def induced_subgraph(self, vs: Iterable) -> "Graph":
        keep = set(vs)
        adj = {v: self._adj[v] & keep for v in keep}
        return self._derive(adj)

    def with_labels(self, labels: Mapping) -> "Graph":
        _check_labels(labels, self._adj)
        return self._derive(self.adjacency(), labels=dict(labels))

    def relabel(self, mapping: Mapping) -> "Graph":
        """Rename vertices; ids missing from ``mapping`` keep their name."""
        f = lambda v: mapping.get(v, v)
        new_ids = [f(v) for v in self._adj]
        if len(set(new_ids)) != len(new_ids):
            raise PreconditionError("relabelling is not injective")
        adj = {f(v): {f(u) for u in nb} for v, nb in self._adj.items()}
        labels = {f(v): t for v, t in self._labels.items()}
        g = Graph(adj, labels)
        return g


def _check_labels(labels, adj):
    seen = {}
    for v, text in labels.items():
        if v not in adj:
            raise MalformedInputError(f"label for unknown vertex {v!r}")
        if text in seen:
            raise MalformedInputError(f"label {text!r} used for {seen[text]!r} and {v!r}")
        seen[text] = v


def build_graph(edge_list: Iterable, labels: Optional[Mapping] = None, vertices: Iterable = ()) -> Graph:
    """Build a simple graph from an edge list.

    Isolated vertices can be supplied through ``vertices``. Self-loops and
    duplicate edges (in either orientation) raise :class:`MalformedInputError`.
    """
    adj: dict = {v: set() for v in vertices}
    for pair in edge_list:
        try:
            u, v = pair
        except (TypeError, ValueError):
            raise MalformedInputError(f"not a vertex pair: {pair!r}") from None
        if u == v:
            raise MalformedInputError(f"self-loop {(u, v)!r}")
        if v in adj.get(u, ()):
            raise MalformedInputError(f"duplicate edge {(u, v)!r}")
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    labels = dict(labels or {})
    _check_labels(labels, adj)
    return Graph(adj, labels)


# -- surgery -----------------------------------------------------------------

def suppress_degree2(g: Graph, v) -> Graph:
    """Remove a degree-2 vertex and join its two neighbours.

    If the neighbours are already adjacent, ``v`` is simply deleted. Refuses to
    collapse a lone triangle, the one case where suppression changes treewidth
    by destroying the graph's only cycle.
    """
    if v not in g:
        raise PreconditionError(f"vertex {v!r} not in graph")
    if g.degree(v) != 2:
        raise PreconditionError(f"vertex {v!r} has degree {g.degree(v)}, expected 2")
    p, q = g.sorted_neighbors(v)
    if g.has_edge(p, q) and g.n == 3:
        raise PreconditionError("suppressing a vertex of a triangle destroys its only cycle")
    h = g.remove_vertices([v])
    if not h.has_edge(p, q):
        h = h.add_edges([(p, q)])
    return h


def subdivide_edge(g: Graph, e: Edge, new_vertex=None) -> tuple[Graph, Vertex]:
    """Replace edge ``e`` by a path through a fresh vertex; returns (graph, new id)."""
    u, v = e
    if not g.has_edge(u, v):
        raise PreconditionError(f"edge {e!r} not in graph")
    h, x = g.add_vertex(new_vertex)
    h = h.remove_edges([(u, v)]).add_edges([(u, x), (x, v)])
    return h, x


def contract_edge(g: Graph, e: Edge) -> Graph:
    """Merge the endpoints of ``e`` into its first endpoint.

    Parallel edges and the self-loop are dropped immediately. The merged
    vertex keeps the first endpoint's id and label.
    """
    keep, gone = e
    if not g.has_edge(keep, gone):
        raise PreconditionError(f"edge {e!r} not in graph")
    adj = g.adjacency()
    for w in adj.pop(gone):
        adj[w].discard(gone)
        if w != keep:
            adj[w].add(keep)
            adj[keep].add(w)
    labels = g.labels
    if keep not in labels and gone in labels:
        labels[keep] = labels[gone]
    labels.pop(gone, None)
    return g._derive(adj, labels=labels)


# -- connectivity ------------------------------------------------------------

@dataclass(frozen=True)
class EdgeCut:
    edges: frozenset
    sides: tuple


def connected_components(g: Graph, removed_edges: Iterable = ()) -> list:
    """Components as frozensets, ordered by their smallest vertex."""
    removed = {frozenset(e) for e in removed_edges}
    seen = set()
    comps = []
    for s in g.vertices():
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w in seen or frozenset((u, w)) in removed:
                    continue
                seen.add(w)
                comp.add(w)
                stack.append(w)
        comps.append(frozenset(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def is_edge_cut(g: Graph, edges: Iterable) -> Optional[EdgeCut]:
    """Return an :class:`EdgeCut` if deleting ``edges`` adds a component, else None.

    ``sides`` is (component holding the first listed edge's smaller endpoint,
    all remaining vertices).
    """
    edges = [norm_edge(*e) for e in edges]
    for u, v in edges:
        if not g.has_edge(u, v):
            raise PreconditionError(f"edge {(u, v)!r} not in graph")
    if not edges:
        return None
    before = len(connected_components(g))
    comps = connected_components(g, edges)
    if len(comps) <= before:
        return None
    anchor = edges[0][0]
    side = next(c for c in comps if anchor in c)
    return EdgeCut(frozenset(edges), (side, g.vertex_set() - side))


def biconnected_components(g: Graph) -> list:
    """Blocks of ``g`` as frozensets, sorted by their sorted member keys.

    Isolated vertices form singleton blocks. Iterative Hopcroft-Tarjan.
    """
    disc: dict = {}
    low: dict = {}
    blocks = []
    counter = 0
    for root in g.vertices():
        if root in disc:
            continue
        if g.degree(root) == 0:
            disc[root] = counter
            counter += 1
            blocks.append(frozenset([root]))
            continue
        disc[root] = low[root] = counter
        counter += 1
        edge_stack = []
        stack = [(root, None, iter(g.sorted_neighbors(root)))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w not in disc:
                    disc[w] = low[w] = counter
                    counter += 1
                    edge_stack.append((u, w))
                    stack.append((w, u, iter(g.sorted_neighbors(w))))
                    advanced = True
                    break
                if disc[w] < disc[u]:
                    low[u] = min(low[u], disc[w])
                    edge_stack.append((u, w))
            if advanced:
                continue
            stack.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[u])
                if low[u] >= disc[parent]:
                    block = set()
                    while True:
                        a, b = edge_stack.pop()
                        block.update((a, b))
                        if (a, b) == (parent, u):
                            break
                    blocks.append(frozenset(block))
    return sorted(blocks, key=lambda b: [vkey(v) for v in sorted(b, key=vkey)])


def articulation_points(g: Graph) -> set:
    seen: dict = {}
    for block in biconnected_components(g):
        for v in block:
            seen[v] = seen.get(v, 0) + 1
    return {v for v, c in seen.items() if c > 1}
