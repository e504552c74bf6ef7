"""Figures for reduction runs and tightness witnesses (written to files, Agg backend)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from .graph import Graph, norm_edge  # noqa: E402

LADDER_COLOR = "#c0392b"
HOST_COLOR = "#7f8c8d"


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from(g.edges())
    return h


def draw_graph(ax, g: Graph, ladders=(), title: str = "", seed: int = 0) -> None:
    h = to_networkx(g)
    pos = nx.spring_layout(h, seed=seed)
    marked = set()
    for L in ladders:
        marked |= L.grid_edges()
    plain = [e for e in h.edges() if norm_edge(*e) not in marked]
    lad = [e for e in h.edges() if norm_edge(*e) in marked]
    nx.draw_networkx_edges(h, pos, edgelist=plain, ax=ax, edge_color=HOST_COLOR, width=1.0)
    nx.draw_networkx_edges(h, pos, edgelist=lad, ax=ax, edge_color=LADDER_COLOR, width=2.2)
    nx.draw_networkx_nodes(h, pos, ax=ax, node_size=160, node_color="white", edgecolors="black", linewidths=0.8)
    nx.draw_networkx_labels(h, pos, ax=ax, font_size=7)
    ax.set_title(title, fontsize=9)
    ax.set_axis_off()


def _pair(path, left, right) -> str:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4.5))
    for ax, (g, ladders, title) in zip(axes, (left, right)):
        draw_graph(ax, g, ladders, title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def plot_reduction(path, before: Graph, after: Graph, ladders_before=(), ladders_after=()) -> str:
    return _pair(path,
                 (before, ladders_before, f"input  n={before.n} m={before.m}"),
                 (after, ladders_after, f"reduced  n={after.n} m={after.m}"))


def plot_ladder_witness(path, w) -> str:
    return _pair(path,
                 (w.graph, [w.ladder], f"tw={w.width}, ladder length {w.ladder.length}"),
                 (w.lengthened, [w.lengthened_ladder], f"tw={w.lengthened_width}, ladder length {w.lengthened_ladder.length}"))


def plot_display_pair(path, before: Graph, after: Graph, width_before: int, width_after: int) -> str:
    return _pair(path,
                 (before, (), f"display graph, tw={width_before}"),
                 (after, (), f"chain cut to 3 taxa, tw={width_after}"))
