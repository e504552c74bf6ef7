"""Unrooted binary phylogenetic trees, display graphs, and the subtree and
common-chain reductions.

Trees are stored as adjacency over integer node ids with a label map on the
leaves. Taxon labels are opaque strings; a cherry reduction joins the two
labels with :data:`SEP`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .errors import MalformedInputError, PolicyError, PreconditionError
from .graph import Graph, suppress_degree2

SEP = "+"
CHAIN_FLOOR = 4


class PhyloTree:
    """Unrooted binary tree with bijectively labelled leaves."""

    __slots__ = ("adj", "labels", "_by_label")

    def __init__(self, adj: dict, labels: dict):
        self.adj = {v: frozenset(nb) for v, nb in adj.items()}
        self.labels = dict(labels)
        self._by_label = {t: v for v, t in self.labels.items()}
        self._check()

    def _check(self):
        n = len(self.adj)
        if n == 0:
            raise MalformedInputError("empty tree")
        if sum(len(nb) for nb in self.adj.values()) // 2 != n - 1:
            raise MalformedInputError("not a tree")
        leaves = [v for v, nb in self.adj.items() if len(nb) <= 1]
        for v, nb in self.adj.items():
            if len(nb) not in (0, 1, 3):
                raise MalformedInputError(f"vertex {v} has degree {len(nb)}; trees must be binary")
        if set(leaves) != set(self.labels):
            raise MalformedInputError("labels must sit exactly on the leaves")
        if len(self._by_label) != len(self.labels):
            raise MalformedInputError("duplicate leaf label")
        start = next(iter(self.adj))
        seen = {start}
        stack = [start]
        while stack:
            for w in self.adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise MalformedInputError("tree is disconnected")

    @property
    def taxa(self) -> frozenset:
        return frozenset(self._by_label)

    def leaf(self, label):
        return self._by_label[label]

    def parent(self, label):
        """The unique neighbour of a leaf (trees with >= 3 leaves)."""
        (p,) = self.adj[self._by_label[label]]
        return p

    def splits(self) -> frozenset:
        """Bipartitions induced by the edges, each as the side without the smallest taxon."""
        if len(self.labels) < 2:
            return frozenset()
        root_label = min(self._by_label)
        root = self._by_label[root_label]
        below: dict = {}
        order = []
        parent = {root: None}
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            for w in self.adj[v]:
                if w not in parent:
                    parent[w] = v
                    stack.append(w)
        for v in reversed(order):
            s = {self.labels[v]} if v in self.labels and v != root else set()
            for w in self.adj[v]:
                if parent.get(w) == v:
                    s |= below[w]
            below[v] = frozenset(s)
        return frozenset(below[v] for v in order if v != root)

    def __eq__(self, other):
        if not isinstance(other, PhyloTree):
            return NotImplemented
        return self.taxa == other.taxa and self.splits() == other.splits()

    def __hash__(self):
        return hash((self.taxa, self.splits()))

    def __repr__(self):
        return f"PhyloTree({serialize(self)!r})"

    # -- edits ----------------------------------------------------------------
    def _mutable(self):
        return {v: set(nb) for v, nb in self.adj.items()}, dict(self.labels)

    def remove_leaf(self, label) -> "PhyloTree":
        """Delete a leaf and suppress the degree-2 vertex left behind."""
        adj, labels = self._mutable()
        v = self._by_label[label]
        del labels[v]
        nbs = adj.pop(v)
        for p in nbs:
            adj[p].discard(v)
            if len(adj[p]) == 2:
                a, b = adj.pop(p)
                adj[a].discard(p)
                adj[b].discard(p)
                adj[a].add(b)
                adj[b].add(a)
        return PhyloTree(adj, labels)

    def merge_cherry(self, x, y, label) -> "PhyloTree":
        """Replace cherry leaves ``x`` and ``y`` by their parent, now a leaf called ``label``."""
        adj, labels = self._mutable()
        vx, vy = self._by_label[x], self._by_label[y]
        (p,) = adj[vx]
        if adj[vy] != {p}:
            raise PreconditionError(f"{x!r} and {y!r} are not a cherry")
        for v in (vx, vy):
            adj.pop(v)
            adj[p].discard(v)
            del labels[v]
        labels[p] = label
        return PhyloTree(adj, labels)


# -- Newick ------------------------------------------------------------------

_DELIMS = set("(),:;[]")


def parse_newick(text: str) -> PhyloTree:
    """Parse one Newick tree. Branch lengths and internal labels are ignored.

    A rooted binary tree is unrooted by suppressing its degree-2 root.
    """
    pos = 0
    n = len(text)
    adj: dict = {}
    labels: dict = {}
    seen_labels: dict = {}
    starts: dict = {}
    counter = itertools.count()

    def err(msg, at=None):
        at = pos if at is None else at
        return MalformedInputError(f"{msg} at position {at}")

    def skip():
        nonlocal pos
        while pos < n:
            if text[pos].isspace():
                pos += 1
            elif text[pos] == "[":
                end = text.find("]", pos)
                if end < 0:
                    raise err("unterminated comment")
                pos = end + 1
            else:
                break

    def read_label():
        nonlocal pos
        skip()
        start = pos
        if pos < n and text[pos] == "'":
            end = text.find("'", pos + 1)
            if end < 0:
                raise err("unterminated quoted label")
            pos = end + 1
            return text[start + 1:end], start
        while pos < n and text[pos] not in _DELIMS and not text[pos].isspace():
            pos += 1
        return text[start:pos], start

    def read_length():
        nonlocal pos
        skip()
        if pos < n and text[pos] == ":":
            pos += 1
            tok, at = read_label()
            try:
                float(tok)
            except ValueError:
                raise err(f"bad branch length {tok!r}", at) from None

    def node():
        nonlocal pos
        skip()
        v = next(counter)
        adj[v] = set()
        starts[v] = pos
        if pos < n and text[pos] == "(":
            pos += 1
            while True:
                c = node()
                adj[v].add(c)
                adj[c].add(v)
                skip()
                if pos < n and text[pos] == ",":
                    pos += 1
                    continue
                if pos < n and text[pos] == ")":
                    pos += 1
                    break
                raise err("expected ',' or ')'")
            read_label()
        else:
            label, at = read_label()
            if not label:
                raise err("missing leaf label")
            if label in seen_labels:
                raise err(f"duplicate label {label!r}", at)
            seen_labels[label] = at
            labels[v] = label
        read_length()
        return v

    root = node()
    skip()
    if pos >= n or text[pos] != ";":
        raise err("expected ';'")
    pos += 1
    skip()
    if pos != n:
        raise err("trailing text")
    kids = len(adj[root])
    if kids == 1:
        raise err("root with a single child", 0)
    if kids == 2 and root not in labels:
        a, b = adj.pop(root)
        adj[a].discard(root)
        adj[b].discard(root)
        adj[a].add(b)
        adj[b].add(a)
    for v, nb in adj.items():
        if v not in labels and len(nb) != 3:
            raise err(f"non-binary vertex with {len(nb)} neighbours", starts[v])
    return PhyloTree(adj, labels)


def _quote(label: str) -> str:
    if any(ch in _DELIMS or ch.isspace() or ch == "'" for ch in label):
        return "'" + label + "'"
    return label


def serialize(t: PhyloTree) -> str:
    """Deterministic Newick text, rooted at the neighbour of the smallest taxon."""
    if len(t.labels) == 1:
        return f"{_quote(next(iter(t.labels.values())))};"
    first = t.leaf(min(t.taxa))
    (root,) = t.adj[first]
    if root in t.labels:
        return f"({','.join(_quote(x) for x in sorted(t.taxa))});"

    def render(v, parent):
        if v in t.labels:
            return t.labels[v], _quote(t.labels[v])
        parts = sorted(render(w, v) for w in t.adj[v] if w != parent)
        return parts[0][0], "(" + ",".join(p[1] for p in parts) + ")"

    parts = sorted(render(w, root) for w in t.adj[root])
    return "(" + ",".join(p[1] for p in parts) + ");"


def trees_equal(t1: PhyloTree, t2: PhyloTree) -> bool:
    """Label-preserving isomorphism test via split sets."""
    if t1.taxa != t2.taxa:
        raise PreconditionError("trees are on different taxon sets")
    return t1.splits() == t2.splits()


# -- generation --------------------------------------------------------------

def all_trees(taxa: Iterable) -> Iterator[PhyloTree]:
    """Every unrooted binary tree on ``taxa`` (stepwise leaf insertion)."""
    taxa = sorted(taxa)
    if len(taxa) <= 2:
        adj = {i: set() for i in range(len(taxa))}
        if len(taxa) == 2:
            adj = {0: {1}, 1: {0}}
        yield PhyloTree(adj, dict(enumerate(taxa)))
        return
    base_adj = {0: {3}, 1: {3}, 2: {3}, 3: {0, 1, 2}}
    base_lab = {0: taxa[0], 1: taxa[1], 2: taxa[2]}

    def grow(adj, lab, i, nxt):
        if i == len(taxa):
            yield PhyloTree(adj, lab)
            return
        edges = sorted({tuple(sorted((u, v))) for u in adj for v in adj[u]})
        for u, v in edges:
            a2 = {x: set(nb) for x, nb in adj.items()}
            mid, leaf = nxt, nxt + 1
            a2[u].discard(v)
            a2[v].discard(u)
            a2[mid] = {u, v, leaf}
            a2[u].add(mid)
            a2[v].add(mid)
            a2[leaf] = {mid}
            l2 = dict(lab)
            l2[leaf] = taxa[i]
            yield from grow(a2, l2, i + 1, nxt + 2)

    yield from grow(base_adj, base_lab, 3, 4)


def random_tree(taxa: Iterable, rng) -> PhyloTree:
    """Uniform random unrooted binary tree by random stepwise insertion."""
    taxa = list(taxa)
    rng.shuffle(taxa)
    if len(taxa) <= 3:
        return next(all_trees(taxa))
    adj = {0: {3}, 1: {3}, 2: {3}, 3: {0, 1, 2}}
    lab = {0: taxa[0], 1: taxa[1], 2: taxa[2]}
    nxt = 4
    for t in taxa[3:]:
        edges = sorted({tuple(sorted((u, v))) for u in adj for v in adj[u]})
        u, v = edges[rng.randrange(len(edges))]
        adj[u].discard(v)
        adj[v].discard(u)
        adj[nxt] = {u, v, nxt + 1}
        adj[u].add(nxt)
        adj[v].add(nxt)
        adj[nxt + 1] = {nxt}
        lab[nxt + 1] = t
        nxt += 2
    return PhyloTree(adj, lab)


def caterpillar(taxa: Iterable) -> PhyloTree:
    """Caterpillar tree with the taxa in the given order along the spine."""
    taxa = list(taxa)
    if len(taxa) <= 3:
        return next(all_trees(taxa))
    n = len(taxa)
    leaves = list(range(n))
    spine = list(range(n, 2 * n - 2))
    adj = {v: set() for v in leaves + spine}

    def link(a, b):
        adj[a].add(b)
        adj[b].add(a)

    for i in range(len(spine) - 1):
        link(spine[i], spine[i + 1])
    link(leaves[0], spine[0])
    link(leaves[1], spine[0])
    for i in range(2, n - 2):
        link(leaves[i], spine[i - 1])
    link(leaves[n - 2], spine[-1])
    link(leaves[n - 1], spine[-1])
    return PhyloTree(adj, dict(zip(leaves, taxa)))


# -- display graph -----------------------------------------------------------

class DisplayGraph(NamedTuple):
    graph: Graph
    provenance: dict


def build_display(t1: PhyloTree, t2: PhyloTree, suppress: bool = False) -> DisplayGraph:
    """Display graph plus provenance: vertex -> ("leaf", label) or (tree index, node id)."""
    if t1.taxa != t2.taxa:
        raise PreconditionError("trees are on different taxon sets")
    taxa = sorted(t1.taxa)
    vid = {("leaf", t): i for i, t in enumerate(taxa)}
    for k, t in enumerate((t1, t2), start=1):
        for v in sorted(t.adj):
            if v not in t.labels:
                vid[(k, v)] = len(vid)

    def ref(k, t, v):
        return vid[("leaf", t.labels[v])] if v in t.labels else vid[(k, v)]

    adj: dict = {i: set() for i in vid.values()}
    for k, t in enumerate((t1, t2), start=1):
        for u in t.adj:
            for w in t.adj[u]:
                a, b = ref(k, t, u), ref(k, t, w)
                adj[a].add(b)
                adj[b].add(a)
    labels = {vid[("leaf", t)]: t for t in taxa}
    g = Graph(adj, labels)
    provenance = {i: key for key, i in vid.items()}
    if suppress:
        for t in taxa:
            v = vid[("leaf", t)]
            if g.degree(v) == 2 and g.n > 3:
                g = suppress_degree2(g, v)
                provenance.pop(v)
    return DisplayGraph(g, provenance)


def display_graph(t1: PhyloTree, t2: PhyloTree, suppress: bool = False) -> Graph:
    """Graph obtained by gluing the two trees at equally labelled leaves."""
    return build_display(t1, t2, suppress).graph


# -- reductions --------------------------------------------------------------

def common_cherries(t1: PhyloTree, t2: PhyloTree) -> list:
    if len(t1.labels) < 3:
        return []
    out = []
    for x, y in itertools.combinations(sorted(t1.taxa), 2):
        if t1.parent(x) == t1.parent(y) and t2.parent(x) == t2.parent(y):
            out.append((x, y))
    return out


def subtree_reduce(t1: PhyloTree, t2: PhyloTree) -> tuple:
    """Cherry reduction to exhaustion; returns (t1', t2', log of (x, y, new label))."""
    if t1.taxa != t2.taxa:
        raise PreconditionError("trees are on different taxon sets")
    log = []
    while len(t1.labels) > 3:
        cherries = common_cherries(t1, t2)
        if not cherries:
            break
        x, y = cherries[0]
        new = f"{x}{SEP}{y}"
        t1, t2 = t1.merge_cherry(x, y, new), t2.merge_cherry(x, y, new)
        log.append((x, y, new))
    return t1, t2, log


@dataclass(frozen=True)
class CommonChain:
    taxa: tuple
    pendant_in: tuple

    @property
    def size(self) -> int:
        return len(self.taxa)


def is_chain(t: PhyloTree, seq) -> bool:
    """Walk-based chain test: parents form a path, with the two end pairs allowed to share a parent."""
    n = len(seq)
    if n < 2 or len(set(seq)) != n or len(t.labels) < 3:
        return False
    par = [t.parent(x) for x in seq]
    for i in range(n - 1):
        if par[i] == par[i + 1]:
            if i not in (0, n - 2):
                return False
        elif par[i + 1] not in t.adj[par[i]]:
            return False
    # parents distinct apart from the permitted end coincidences
    for i, j in itertools.combinations(range(n), 2):
        if par[i] == par[j] and not (j == i + 1 and i in (0, n - 2)):
            return False
    return True


def is_pendant(t: PhyloTree, seq) -> bool:
    return t.parent(seq[0]) == t.parent(seq[1]) or t.parent(seq[-2]) == t.parent(seq[-1])


def _extensions(t: PhyloTree, last) -> list:
    """Taxa whose parent equals or neighbours the parent of ``last``."""
    p = t.parent(last)
    out = []
    for q in {p} | set(t.adj[p]):
        for w in t.adj[q]:
            if w in t.labels and t.labels[w] != last:
                out.append(t.labels[w])
        if q in t.labels and t.labels[q] != last:
            out.append(t.labels[q])
    return out


def all_common_chains(t1: PhyloTree, t2: PhyloTree) -> list:
    """Every common chain (as a tuple of taxa, both orientations), not only maximal ones."""
    if t1.taxa != t2.taxa:
        raise PreconditionError("trees are on different taxon sets")
    if len(t1.labels) < 4:
        return []
    found = []
    stack = [(x,) for x in sorted(t1.taxa)]
    while stack:
        seq = stack.pop()
        for z in sorted(set(_extensions(t1, seq[-1])) & set(_extensions(t2, seq[-1]))):
            if z in seq:
                continue
            nxt = seq + (z,)
            if is_chain(t1, nxt) and is_chain(t2, nxt):
                found.append(nxt)
                stack.append(nxt)
    return found


def _contains(big, small) -> bool:
    n, m = len(big), len(small)
    for s in (small, small[::-1]):
        for i in range(n - m + 1):
            if big[i:i + m] == s:
                return True
    return False


def find_common_chains(t1: PhyloTree, t2: PhyloTree) -> list:
    """All maximal common chains, one representative per taxon set, sorted."""
    chains = all_common_chains(t1, t2)
    chains.sort(key=len, reverse=True)
    maximal = []
    for c in chains:
        if any(len(m) > len(c) and _contains(m, c) for m in chains):
            continue
        maximal.append(c)
    best: dict = {}
    for c in maximal:
        c = min(c, c[::-1])
        key = frozenset(c)
        if key not in best or c < best[key]:
            best[key] = c
    out = [CommonChain(c, (is_pendant(t1, c), is_pendant(t2, c))) for c in best.values()]
    return sorted(out, key=lambda ch: (-ch.size, ch.taxa))


def truncate_chain(t1: PhyloTree, t2: PhyloTree, chain: CommonChain, keep: int) -> tuple:
    """Drop interior taxa of ``chain`` so that ``keep`` remain (first keep-2 and last two).

    No safety floor is applied here; :func:`chain_reduce` enforces it.
    """
    if keep < 2:
        raise PreconditionError("keep must be >= 2")
    seq = chain.taxa
    if len(seq) <= keep:
        return t1, t2, []
    drop = list(seq[keep - 2:len(seq) - 2])
    for x in drop:
        t1, t2 = t1.remove_leaf(x), t2.remove_leaf(x)
    return t1, t2, drop


def _chain_reduce(t1, t2, keep):
    log = []
    while True:
        long = [c for c in find_common_chains(t1, t2) if c.size > keep]
        if not long:
            return t1, t2, log
        chain = long[0]
        t1, t2, dropped = truncate_chain(t1, t2, chain, keep)
        log.append((chain.taxa, tuple(dropped)))


def chain_reduce(t1: PhyloTree, t2: PhyloTree, keep: int = 4) -> tuple:
    """Truncate every common chain longer than ``keep`` taxa; returns (t1', t2', log).

    ``keep`` below 4 is refused: three taxa can lower the display-graph treewidth.
    """
    if keep < CHAIN_FLOOR:
        raise PolicyError(f"keep={keep} is below the safe floor of {CHAIN_FLOOR} taxa")
    if t1.taxa != t2.taxa:
        raise PreconditionError("trees are on different taxon sets")
    return _chain_reduce(t1, t2, keep)


def reduce_pair(t1: PhyloTree, t2: PhyloTree, keep: int = 4) -> tuple:
    """Alternate subtree and chain reduction until neither applies."""
    log = []
    while True:
        t1, t2, sub = subtree_reduce(t1, t2)
        t1, t2, ch = chain_reduce(t1, t2, keep)
        log += [("cherry",) + e for e in sub] + [("chain",) + e for e in ch]
        if not sub and not ch:
            return t1, t2, log
