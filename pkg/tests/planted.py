"""Random host graphs with a planted ladder, for the reduction-rule suites."""
import random

from laddertw.decomposition import exact_treewidth, min_fill_ordering, ordering_to_decomposition
from laddertw.graph import build_graph, is_connected
from laddertw.ladder import Ladder, classify, find_ladders, is_ladder

EXTRA_DEGREE = (0.5, 1.0, 2.0, 3.0)


def random_connected(rng, n, p, offset=0):
    """Random tree plus extra G(n, p) edges on ids offset..offset+n-1."""
    vs = list(range(offset, offset + n))
    edges = set()
    for i in range(1, n):
        edges.add((vs[rng.randrange(i)], vs[i]))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((vs[i], vs[j]))
    return edges


def clique(vs):
    vs = list(vs)
    return {(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))}


def plant(rng, length, host_n, kind="general", p=0.3, dense=0):
    """Graph = host + ladder of ``length`` squares; returns (graph, ladder).

    kind: "general" all four corners attached to one connected host;
    "disconnecting" left and right corners attached to two disjoint hosts;
    "degree2" like general but one corner gets no host edge.
    ``dense`` > 0 plants a clique of that size in the host.
    """
    top = list(range(length + 1))
    bottom = list(range(length + 1, 2 * length + 2))
    lad = {(top[i], top[i + 1]) for i in range(length)}
    lad |= {(bottom[i], bottom[i + 1]) for i in range(length)}
    lad |= {(top[i], bottom[i]) for i in range(length + 1)}
    base = 2 * length + 2
    a, b, c, d = top[0], bottom[0], top[-1], bottom[-1]
    if kind == "disconnecting":
        half = max(1, host_n // 2)
        left = random_connected(rng, half, p, base)
        right = random_connected(rng, host_n - half, p, base + half) if host_n > half else set()
        lhost = list(range(base, base + half))
        rhost = list(range(base + half, base + host_n)) or lhost
        host = left | right
        if dense:
            host |= clique(lhost[:dense])
        attach = [(a, lhost), (b, lhost), (c, rhost), (d, rhost)]
        if rhost is lhost:
            attach = attach[:2]
    else:
        hv = list(range(base, base + host_n))
        host = random_connected(rng, host_n, p, base)
        if dense:
            host |= clique(hv[:dense])
        attach = [(a, hv), (b, hv), (c, hv), (d, hv)]
        if kind == "degree2":
            attach.pop(rng.randrange(4))
    edges = set(lad) | host
    for corner, pool in attach:
        for h in rng.sample(pool, rng.randint(1, min(2, len(pool)))):
            edges.add((corner, h))
    return build_graph(sorted(edges)), Ladder(top, bottom)


def planted_suite(seed, count, lengths, host_sizes, kind="general", dense=0, accept=None):
    """``count`` valid plantings; ``accept(g, L)`` may veto candidates."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        length = rng.choice(lengths)
        host_n = rng.choice(host_sizes)
        # sparse hosts: a spanning tree plus about 0.5-3 extra edges per vertex
        p = rng.choice(EXTRA_DEGREE) / max(1, host_n - 1)
        g, L = plant(rng, length, host_n, kind, min(p, 0.8), dense)
        if not is_connected(g) or not is_ladder(g, L):
            continue
        # the planted ladder must be maximal, not a piece of a longer one
        if L.canonical() not in find_ladders(g, L.length):
            continue
        cls = classify(g, L)
        if kind == "disconnecting" and not cls.disconnecting:
            continue
        if kind != "disconnecting" and cls.disconnecting:
            continue
        if kind == "degree2" and not cls.degree2_cornerpoints:
            continue
        if kind == "general" and cls.degree2_cornerpoints:
            continue
        if accept and not accept(g, L):
            continue
        out.append((g, L))
    return out


def square_fixture(width=4, seed=7):
    """Planted ladder plus a width-``width`` decomposition with the first square in one bag."""
    for g, L in planted_suite(seed, 50, [1, 2], range(5, 9), "general", dense=5):
        sq = L.squares()[0]
        order = [v for v in min_fill_ordering(g) if v not in sq] + list(sq)
        td = ordering_to_decomposition(g, order)
        if td.width == width == exact_treewidth(g).width:
            return g, td, L, next(i for i, b in enumerate(td.bags) if set(sq) <= b)
    raise AssertionError("no fixture")
