"""Randomised searches for tightness witnesses, checked with the exact engine.

A ladder witness is a graph G of treewidth ``tw`` holding a non-disconnecting
ladder of the given length such that one extra rung raises the treewidth.
A chain witness is a pair of trees with a 4-taxon common chain whose
truncation to 3 taxa changes the display-graph treewidth.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Optional

from .decomposition import Budget, TreeDecomposition, exact_treewidth, validate
from .graph import Graph, build_graph, is_connected
from .ladder import Ladder, classify, is_ladder, lengthen
from .phylo import (PhyloTree, build_display, find_common_chains, random_tree, serialize,
                    subtree_reduce, truncate_chain)

PROBABILITIES = (0.3, 0.4, 0.5, 0.6, 0.7, 0.8)


@dataclass
class LadderWitness:
    graph: Graph
    ladder: Ladder
    width: int
    witness: TreeDecomposition
    lengthened: Graph
    lengthened_ladder: Ladder
    lengthened_width: int
    lengthened_witness: TreeDecomposition
    attempts: int

    def certificate(self) -> dict:
        return {
            "kind": "ladder-tightness",
            "ladder_length": self.ladder.length,
            "width": self.width,
            "lengthened_width": self.lengthened_width,
            "vertices": self.graph.n,
            "ladder": self.ladder.to_json(),
            "lengthened_ladder": self.lengthened_ladder.to_json(),
            "witness_valid": validate(self.graph, self.witness).ok,
            "lengthened_witness_valid": validate(self.lengthened, self.lengthened_witness).ok,
            "attempts": self.attempts,
        }


def ladder_with_host(length: int, host_edges, host_size: int) -> tuple:
    """Graph made of a ladder (ids 0..2k+1) plus host vertices numbered after it."""
    top = list(range(length + 1))
    bottom = list(range(length + 1, 2 * length + 2))
    edges = [(top[i], top[i + 1]) for i in range(length)]
    edges += [(bottom[i], bottom[i + 1]) for i in range(length)]
    edges += [(top[i], bottom[i]) for i in range(length + 1)]
    host = range(2 * length + 2, 2 * length + 2 + host_size)
    g = build_graph(edges + list(host_edges), vertices=host)
    return g, Ladder(top, bottom)


def _random_host(rng, length: int, host_size: int, p: float) -> list:
    base = 2 * length + 2
    host = list(range(base, base + host_size))
    corners = [0, length + 1, length, 2 * length + 1]
    edges = []
    for i, u in enumerate(host):
        edges += [(u, v) for v in host[i + 1:] if rng.random() < p]
        edges += [(u, c) for c in corners if rng.random() < p]
    return edges


def find_ladder_witness(tw: int, length: int, max_n: int, seed: int = 0, attempts: int = 200_000,
                        max_seconds: Optional[float] = None, budget: Optional[Budget] = None) -> Optional[LadderWitness]:
    """Random hosts around a ladder of ``length`` squares, at most ``max_n`` vertices in total."""
    rng = random.Random(seed)
    start = time.monotonic()
    min_host = 1
    max_host = max_n - (2 * length + 2)
    if max_host < min_host:
        return None
    for attempt in range(1, attempts + 1):
        if max_seconds is not None and time.monotonic() - start > max_seconds:
            return None
        host_size = rng.randint(min_host, max_host)
        p = rng.choice(PROBABILITIES)
        g, L = ladder_with_host(length, _random_host(rng, length, host_size, p), host_size)
        if not is_connected(g) or not is_ladder(g, L) or classify(g, L).disconnecting:
            continue
        width, td = exact_treewidth(g, budget)
        if width != tw:
            continue
        g2, L2 = lengthen(g, L, 1)
        width2, td2 = exact_treewidth(g2, budget)
        if width2 > width:
            return LadderWitness(g, L, width, td, g2, L2, width2, td2, attempt)
    return None


@dataclass
class ChainWitness:
    t1: PhyloTree
    t2: PhyloTree
    chain: tuple
    width: int
    truncated: tuple
    truncated_width: int
    attempts: int

    def certificate(self) -> dict:
        return {
            "kind": "chain-tightness",
            "t1": serialize(self.t1),
            "t2": serialize(self.t2),
            "chain": list(self.chain),
            "width": self.width,
            "truncated_t1": serialize(self.truncated[0]),
            "truncated_t2": serialize(self.truncated[1]),
            "truncated_width": self.truncated_width,
            "attempts": self.attempts,
        }


def display_width(t1: PhyloTree, t2: PhyloTree, budget: Optional[Budget] = None) -> int:
    return exact_treewidth(build_display(t1, t2, suppress=True).graph, budget).width


def find_chain_witness(max_taxa: int = 8, seed: int = 0, attempts: int = 100_000,
                       budget: Optional[Budget] = None) -> Optional[ChainWitness]:
    """Random distinct tree pairs (after subtree reduction) with a maximal 4-taxon common chain."""
    rng = random.Random(seed)
    letters = [chr(ord("a") + i) for i in range(max_taxa)]
    for attempt in range(1, attempts + 1):
        n = rng.randint(6, max_taxa)
        taxa = letters[:n]
        t1, t2 = random_tree(taxa, rng), random_tree(taxa, rng)
        if t1 == t2:
            continue
        t1, t2, _ = subtree_reduce(t1, t2)
        chains = [c for c in find_common_chains(t1, t2) if c.size == 4]
        if not chains:
            continue
        width = display_width(t1, t2, budget)
        for c in chains:
            a, b, _ = truncate_chain(t1, t2, c, 3)
            w3 = display_width(a, b, budget)
            if w3 != width:
                return ChainWitness(t1, t2, c.taxa, width, (a, b), w3, attempt)
    return None
