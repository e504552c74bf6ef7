"""Small graph families with known treewidth."""
import random

from laddertw.graph import build_graph


def path(n):
    return build_graph([(i, i + 1) for i in range(n - 1)], vertices=range(n))


def cycle(n):
    return build_graph([(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return build_graph([(i, j) for i in range(n) for j in range(i + 1, n)], vertices=range(n))


def grid(rows, cols):
    idx = lambda r, c: r * cols + c  # noqa: E731
    edges = [(idx(r, c), idx(r, c + 1)) for r in range(rows) for c in range(cols - 1)]
    edges += [(idx(r, c), idx(r + 1, c)) for r in range(rows - 1) for c in range(cols)]
    return build_graph(edges, vertices=range(rows * cols))


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(outer + spokes + inner)


def random_tree(n, rng):
    return build_graph([(rng.randrange(i), i) for i in range(1, n)], vertices=range(n))


def random_connected_graph(n, p, rng):
    edges = {(rng.randrange(i), i) for i in range(1, n)}
    edges |= {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p}
    return build_graph(sorted(edges), vertices=range(n))


def random_suite(count, max_n, seed):
    rng = random.Random(seed)
    return [random_connected_graph(rng.randint(1, max_n), rng.random(), rng) for _ in range(count)]
