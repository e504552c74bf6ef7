"""Tree decompositions: the validator, treewidth bounds and the exact engine.

The exact engine splits the graph into biconnected blocks and, per block,
runs a memoised decision search over elimination orderings ("is tw <= k?")
for k climbing from a lower bound towards the min-fill upper bound. States
are the sets of already-eliminated vertices; the filled graph of a state does
not depend on the order in which it was reached, so failed states are cached.
Simplicial and almost-simplicial vertices of degree <= k are eliminated
without branching, which is exact for the decision problem.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .errors import StructuralError, TreewidthUnknown
from .graph import Graph, biconnected_components, vkey


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple
    tree_edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "tree_edges", tuple((int(i), int(j)) for i, j in self.tree_edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbors(self) -> dict:
        nb = {i: set() for i in range(len(self.bags))}
        for i, j in self.tree_edges:
            nb[i].add(j)
            nb[j].add(i)
        return nb

    def add_bag(self, bag, attach_to: Optional[int] = None) -> tuple["TreeDecomposition", int]:
        """Append ``bag`` pendant to bag ``attach_to``; returns (new td, its index)."""
        idx = len(self.bags)
        edges = self.tree_edges + (((attach_to, idx),) if attach_to is not None else ())
        return TreeDecomposition(self.bags + (frozenset(bag),), edges), idx

    def replace(self, old, new) -> "TreeDecomposition":
        """Rename vertex ``old`` to ``new`` in every bag."""
        bags = [(b - {old}) | {new} if old in b else b for b in self.bags]
        return TreeDecomposition(bags, self.tree_edges)

    def find_bag(self, vertices) -> Optional[int]:
        need = set(vertices)
        for i, b in enumerate(self.bags):
            if need <= b:
                return i
        return None

    def small(self) -> "TreeDecomposition":
        """Merge every bag into an adjacent superset until no bag contains a neighbour."""
        bags = list(self.bags)
        nb = self.neighbors()
        alive = set(range(len(bags)))
        changed = True
        while changed:
            changed = False
            for i in sorted(alive):
                for j in sorted(nb[i]):
                    if bags[i] <= bags[j]:
                        for k in nb[i] - {j}:
                            nb[k].discard(i)
                            nb[k].add(j)
                            nb[j].add(k)
                        nb[j].discard(i)
                        del nb[i]
                        alive.discard(i)
                        changed = True
                        break
        order = sorted(alive)
        pos = {old: new for new, old in enumerate(order)}
        edges = sorted({tuple(sorted((pos[i], pos[j]))) for i in order for j in nb[i]})
        return TreeDecomposition([bags[i] for i in order], edges)


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: object


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def check_tree(td: TreeDecomposition) -> None:
    """Raise :class:`StructuralError` unless ``tree_edges`` form a tree on all bags."""
    q = len(td.bags)
    seen_edges = set()
    for i, j in td.tree_edges:
        if not (0 <= i < q and 0 <= j < q):
            raise StructuralError(f"tree edge {(i, j)} references a missing bag", (i, j))
        if i == j:
            raise StructuralError(f"tree edge {(i, j)} is a loop", (i, j))
        key = frozenset((i, j))
        if key in seen_edges:
            raise StructuralError(f"tree edge {(i, j)} repeated", (i, j))
        seen_edges.add(key)
    if q == 0:
        if td.tree_edges:
            raise StructuralError("edges without bags", td.tree_edges[0])
        return
    nb = td.neighbors()
    seen = {0}
    stack = [0]
    while stack:
        for j in nb[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != q:
        rest = tuple(sorted(set(range(q)) - seen))
        raise StructuralError(f"bag graph is disconnected; bags {list(rest)} unreachable from bag 0", rest)
    if len(td.tree_edges) != q - 1:
        # connected with too many edges: report an edge closing a cycle
        parent = list(range(q))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for i, j in td.tree_edges:
            a, b = find(i), find(j)
            if a == b:
                raise StructuralError(f"bag graph has a cycle through tree edge {(i, j)}", (i, j))
            parent[a] = b


def validate(g: Graph, td: TreeDecomposition) -> ValidationReport:
    """Check (tw1) vertex cover, (tw2) edge cover and (tw3) running intersection.

    Every violation is reported. Bag vertices unknown to ``g`` are reported
    under tw1. A bag graph that is not a tree raises :class:`StructuralError`.
    """
    check_tree(td)
    report = ValidationReport()
    covered = set().union(*td.bags) if td.bags else set()
    for v in g.vertices():
        if v not in covered:
            report.violations.append(Violation("tw1", v))
    for v in sorted(covered - g.vertex_set(), key=vkey):
        report.violations.append(Violation("tw1", v))
    for u, v in g.edges():
        if not any(u in b and v in b for b in td.bags):
            report.violations.append(Violation("tw2", (u, v)))
    nb = td.neighbors()
    for v in g.vertices():
        holders = {i for i, b in enumerate(td.bags) if v in b}
        if len(holders) <= 1:
            continue
        start = min(holders)
        seen = {start}
        stack = [start]
        while stack:
            for j in nb[stack.pop()]:
                if j in holders and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if seen != holders:
            report.violations.append(Violation("tw3", v))
    return report


# -- elimination orderings ---------------------------------------------------

def elimination_width(g: Graph, order) -> int:
    adj = g.adjacency()
    width = -1 if not order else 0
    for v in order:
        nb = adj.pop(v)
        width = max(width, len(nb))
        for u in nb:
            adj[u].discard(v)
            adj[u] |= nb - {u}
    return width


def ordering_to_decomposition(g: Graph, order) -> TreeDecomposition:
    """Tree decomposition induced by eliminating vertices in ``order``."""
    pos = {v: i for i, v in enumerate(order)}
    adj = g.adjacency()
    bags = []
    edges = []
    higher = []
    for v in order:
        nb = adj.pop(v)
        for u in nb:
            adj[u].discard(v)
            adj[u] |= nb - {u}
        higher.append(nb)
        bags.append(frozenset(nb | {v}))
    last_root = None
    for i, v in enumerate(order):
        if higher[i]:
            edges.append((i, min(pos[u] for u in higher[i])))
        else:
            if last_root is not None:
                edges.append((last_root, i))
            last_root = i
    return TreeDecomposition(bags, edges)


def min_fill_ordering(g: Graph) -> list:
    """Greedy min-fill elimination, ties broken by (degree, lowest id)."""
    adj = g.adjacency()
    order = []
    while adj:
        best = None
        for v in sorted(adj, key=vkey):
            nb = adj[v]
            fill = 0
            nbl = list(nb)
            for i, a in enumerate(nbl):
                fill += sum(1 for b in nbl[i + 1:] if b not in adj[a])
            key = (fill, len(nb))
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        nb = adj.pop(v)
        for u in nb:
            adj[u].discard(v)
            adj[u] |= nb - {u}
        order.append(v)
    return order


def upper_bound_heuristic(g: Graph) -> TreeDecomposition:
    """Min-fill decomposition; always valid, width >= treewidth."""
    return ordering_to_decomposition(g, min_fill_ordering(g))


# -- lower bounds ------------------------------------------------------------

def degeneracy(g: Graph) -> int:
    adj = g.adjacency()
    best = 0
    while adj:
        v = min(adj, key=lambda x: (len(adj[x]), vkey(x)))
        best = max(best, len(adj[v]))
        for u in adj.pop(v):
            adj[u].discard(v)
    return best


def minor_min_width(g: Graph) -> int:
    """MMD+ (min-d): contract a min-degree vertex into its least-shared neighbour."""
    adj = g.adjacency()
    best = 0
    while len(adj) > 1:
        v = min(adj, key=lambda x: (len(adj[x]), vkey(x)))
        best = max(best, len(adj[v]))
        nb = adj.pop(v)
        if not nb:
            continue
        u = min(nb, key=lambda x: (len(adj[x] & nb), vkey(x)))
        for w in nb:
            adj[w].discard(v)
        for w in nb - {u}:
            adj[w].add(u)
            adj[u].add(w)
    return best


def max_clique(g: Graph) -> frozenset:
    """Largest clique by Bron-Kerbosch with pivoting (desk-scale graphs)."""
    adj = g.adjacency()
    best = frozenset()

    def expand(r, p, x):
        nonlocal best
        if not p and not x:
            if len(r) > len(best):
                best = frozenset(r)
            return
        if len(r) + len(p) <= len(best):
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot], key=vkey):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(adj), set())
    return best


def bound_evidence(g: Graph, with_ladders: bool = True) -> list:
    """All lower-bound arguments as (name, value, witness) triples."""
    out = [("degeneracy", degeneracy(g), None), ("minor-min-width", minor_min_width(g), None)]
    clique = max_clique(g)
    out.append(("clique", len(clique) - 1, tuple(sorted(clique, key=vkey))))
    if g.m > 0:
        out.append(("edge", 1, g.edges()[0]))
    if with_ladders:
        from .ladder import find_ladders, classify

        for lad in find_ladders(g, min_length=2):
            if classify(g, lad).tw3_certified:
                out.append(("non-disconnecting-ladder", 3, lad))
                break
    return out


def lower_bound(g: Graph) -> int:
    """Max of degeneracy, MMD+, clique size - 1 and the ladder rule; never exceeds tw."""
    if g.n == 0:
        return -1
    return max(v for _, v, _ in bound_evidence(g))


# -- exact engine ------------------------------------------------------------

@dataclass
class Budget:
    """Limits for the exact search. None means unlimited."""

    max_seconds: Optional[float] = None
    max_states: Optional[int] = None

    @classmethod
    def from_env(cls) -> "Budget":
        secs = os.environ.get("LADDERTW_MAX_SECONDS")
        states = os.environ.get("LADDERTW_MAX_STATES")
        return cls(float(secs) if secs else None, int(states) if states else None)


class TreewidthResult(NamedTuple):
    width: int
    witness: TreeDecomposition


class _Search:
    def __init__(self, budget: Budget):
        self.budget = budget
        self.states = 0
        self.deadline = time.monotonic() + budget.max_seconds if budget.max_seconds else None

    def tick(self):
        self.states += 1
        if self.budget.max_states is not None and self.states > self.budget.max_states:
            raise _OutOfBudget
        if self.deadline is not None and self.states & 255 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget


class _OutOfBudget(Exception):
    pass


def _bits(x):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _is_clique(mask: int, adj: list) -> bool:
    for u in _bits(mask):
        if (mask & ~(1 << u)) & ~adj[u]:
            return False
    return True


def _first_missing(mask: int, adj: list):
    for u in _bits(mask):
        rest = (mask & ~(1 << u)) & ~adj[u]
        if rest:
            return u, next(_bits(rest))
    return None


def _decide(adj0: list, k: int, search: _Search) -> Optional[list]:
    """Elimination ordering of width <= k over bitmask adjacency, or None."""
    n = len(adj0)
    failed = set()

    def solve(rem: int, adj: list) -> Optional[list]:
        if bin(rem).count("1") <= k + 1:
            return list(_bits(rem))
        if rem in failed:
            return None
        search.tick()
        cand = []
        forced = None
        for v in _bits(rem):
            nb = adj[v]
            d = bin(nb).count("1")
            if d > k:
                continue
            if _is_clique(nb, adj):
                forced = v
                break
            a, b = _first_missing(nb, adj)
            if _is_clique(nb & ~(1 << a), adj) or _is_clique(nb & ~(1 << b), adj):
                forced = v
                break
            cand.append((d, v))
        if forced is not None:
            order = [forced]
        else:
            if not cand:
                failed.add(rem)
                return None
            cand.sort()
            order = [v for _, v in cand]
        for v in order:
            nb = adj[v]
            child = adj[:]
            for u in _bits(nb):
                child[u] = (adj[u] | nb) & ~(1 << u) & ~(1 << v)
            res = solve(rem & ~(1 << v), child)
            if res is not None:
                return [v] + res
        failed.add(rem)
        return None

    return solve((1 << n) - 1, adj0[:])


def _block_treewidth(g: Graph, search: _Search):
    """(width, ordering) for a connected graph; raises _OutOfBudget."""
    verts = g.vertices()
    n = len(verts)
    if n <= 1:
        return 0, verts
    if g.m == n * (n - 1) // 2:
        return n - 1, verts
    idx = {v: i for i, v in enumerate(verts)}
    adj = [0] * n
    for u, v in g.edges():
        adj[idx[u]] |= 1 << idx[v]
        adj[idx[v]] |= 1 << idx[u]
    ub_order = min_fill_ordering(g)
    ub = elimination_width(g, ub_order)
    lb = max(degeneracy(g), minor_min_width(g), len(max_clique(g)) - 1)
    search.lower, search.upper = lb, ub
    for k in range(lb, ub):
        found = _decide(adj, k, search)
        if found is not None:
            return k, [verts[i] for i in found]
        search.lower = k + 1
    return ub, ub_order


def _suppress_series(g: Graph):
    """Suppress degree-2 vertices; returns (reduced graph, undo list)."""
    undo = []
    adj = g.adjacency()
    changed = True
    while changed:
        changed = False
        for v in sorted(adj, key=vkey):
            if len(adj[v]) == 2 and len(adj) > 3:
                p, q = sorted(adj[v], key=vkey)
                del adj[v]
                adj[p].discard(v)
                adj[q].discard(v)
                adj[p].add(q)
                adj[q].add(p)
                undo.append((v, p, q))
                changed = True
    return Graph(adj), undo


def exact_treewidth(g: Graph, budget: Optional[Budget] = None, suppress_degree2: bool = False) -> TreewidthResult:
    """Exact treewidth with a witness decomposition that passes :func:`validate`.

    Raises :class:`TreewidthUnknown` (with the best bounds) when the budget
    runs out; a number is only ever returned once proven.
    """
    budget = budget or Budget.from_env()
    search = _Search(budget)
    blocks = biconnected_components(g)
    width = -1 if g.n == 0 else 0
    pieces = []
    lower = 0
    for block in blocks:
        sub = g.induced_subgraph(block)
        undo = []
        if suppress_degree2 and sub.n >= 3:
            sub, undo = _suppress_series(sub)
        try:
            w, order = _block_treewidth(sub, search)
        except _OutOfBudget:
            ub = upper_bound_heuristic(g).width
            raise TreewidthUnknown(max(lower, getattr(search, "lower", 0), width), ub) from None
        td = ordering_to_decomposition(sub, order)
        for v, p, q in reversed(undo):
            i = td.find_bag((p, q))
            td, _ = td.add_bag({v, p, q}, i)
            w = max(w, 2)
        width = max(width, w)
        lower = width
        pieces.append(td)
    return TreewidthResult(width, _glue(pieces))


def _glue(pieces: list) -> TreeDecomposition:
    """Join block decompositions along shared (cut) vertices, BFS over blocks."""
    if not pieces:
        return TreeDecomposition((), ())
    verts = [set().union(*p.bags) for p in pieces]
    bags: list = []
    edges: list = []
    offsets = {}
    holder: dict = {}

    def place(i, attach_vertex):
        off = len(bags)
        offsets[i] = off
        bags.extend(pieces[i].bags)
        edges.extend((a + off, b + off) for a, b in pieces[i].tree_edges)
        if attach_vertex is not None:
            local = pieces[i].find_bag({attach_vertex})
            edges.append((holder[attach_vertex], local + off))
        elif off > 0:
            edges.append((0, off))
        for j, b in enumerate(pieces[i].bags):
            for v in b:
                holder.setdefault(v, j + off)

    placed = set()
    for start in range(len(pieces)):
        if start in placed:
            continue
        place(start, None)
        placed.add(start)
        queue = [start]
        while queue:
            i = queue.pop(0)
            for j in range(len(pieces)):
                if j in placed:
                    continue
                shared = verts[i] & verts[j]
                if shared:
                    place(j, min(shared, key=vkey))
                    placed.add(j)
                    queue.append(j)
    return TreeDecomposition(bags, edges)


def treewidth(g: Graph, budget: Optional[Budget] = None) -> int:
    return exact_treewidth(g, budget).width
