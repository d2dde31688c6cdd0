"""Isomorphism-reduced enumeration of small weighted oriented graphs.

Underlying simple graphs come from the networkx graph atlas (all graphs on up
to seven vertices, one per isomorphism class). Orientations of each are
reduced by a canonical form, and weight assignments on the non-sources by the
automorphism group of the oriented graph. Sources always carry weight 1.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator, Sequence

import networkx as nx

from .graphs import (
    SimpleGraph,
    WeightedOrientedGraph,
    complete_multipartite,
    find_forbidden,
    h_graph,
    is_chordal,
    is_cochordal,
    is_house_free,
    underlying,
)

__all__ = [
    "ATLAS_MAX_N",
    "canonical_form",
    "automorphisms",
    "simple_graphs",
    "orientations",
    "weightings",
    "enumerate_graphs",
    "CLASS_FILTERS",
    "passes_criterion4",
]

ATLAS_MAX_N = 7

# relation codes: rel[i][j] = 1 for an arc i->j, 2 for j->i, 0 for no edge
Rel = tuple[tuple[int, ...], ...]


def _rel(n: int, arcs) -> list[list[int]]:
    rel = [[0] * n for _ in range(n)]
    for t, h in arcs:
        rel[t][h] = 1
        rel[h][t] = 2
    return rel


def _refine(n: int, colors: Sequence[int], rel) -> list[int]:
    """Colour refinement; returned colours are invariant under relabelling."""
    colors = list(colors)
    while True:
        sigs = [
            (colors[i], tuple(sorted((colors[j], rel[i][j]) for j in range(n) if rel[i][j])))
            for i in range(n)
        ]
        table = {s: c for c, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _cell_orders(colors: Sequence[int]) -> Iterator[tuple[int, ...]]:
    cells = [
        [v for v in range(len(colors)) if colors[v] == c] for c in sorted(set(colors))
    ]
    for combo in itertools.product(*(itertools.permutations(cell) for cell in cells)):
        yield tuple(v for block in combo for v in block)


def canonical_form(n: int, weights: Sequence[int], arcs) -> tuple[tuple, tuple[int, ...]]:
    """``(key, order)``: isomorphic inputs share ``key``; ``order[p]`` is the
    input vertex placed at canonical position ``p``."""
    rel = _rel(n, arcs)
    base = sorted(set(weights))
    colors = _refine(n, [base.index(w) for w in weights], rel)
    best = None
    best_order = None
    pairs = list(itertools.combinations(range(n), 2))
    for order in _cell_orders(colors):
        code = tuple(rel[order[a]][order[b]] for a, b in pairs)
        if best is None or code < best:
            best, best_order = code, order
    key = (n, tuple(weights[v] for v in best_order), best)
    return key, best_order


def _from_key(key) -> tuple[int, tuple[int, ...], list[tuple[int, int]]]:
    n, weights, code = key
    arcs = []
    for (a, b), r in zip(itertools.combinations(range(n), 2), code):
        if r == 1:
            arcs.append((a, b))
        elif r == 2:
            arcs.append((b, a))
    return n, weights, arcs


def automorphisms(n: int, arcs, weights: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """All vertex permutations preserving the arcs (and weights, if given)."""
    weights = weights or (1,) * n
    rel = _rel(n, arcs)
    base = sorted(set(weights))
    colors = _refine(n, [base.index(w) for w in weights], rel)
    found = []
    cells = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    domain = [v for c in sorted(cells) for v in cells[c]]
    for images in itertools.product(*(itertools.permutations(cells[c]) for c in sorted(cells))):
        flat = [v for block in images for v in block]
        perm = [0] * n
        for src, dst in zip(domain, flat):
            perm[src] = dst
        if all(rel[perm[i]][perm[j]] == rel[i][j] for i in range(n) for j in range(i + 1, n)):
            found.append(tuple(perm))
    return found


def simple_graphs(n: int) -> Iterator[SimpleGraph]:
    """One simple graph per isomorphism class on exactly ``n`` vertices."""
    if not 1 <= n <= ATLAS_MAX_N:
        raise ValueError(f"the graph atlas covers 1..{ATLAS_MAX_N} vertices")
    names = [f"x{i + 1}" for i in range(n)]
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() != n:
            continue
        yield SimpleGraph.build(names, [(names[a], names[b]) for a, b in g.edges()])


def orientations(g: SimpleGraph) -> Iterator[tuple[int, tuple[tuple[int, int], ...]]]:
    """Orientations of ``g`` up to isomorphism, as canonical ``(n, arcs)`` on 0..n-1."""
    n = len(g.vertices)
    idx = g.index
    edges = [tuple(sorted((idx[a], idx[b]))) for a, b in g.sorted_edges()]
    seen = set()
    for bits in range(1 << len(edges)):
        arcs = [(a, b) if not bits >> e & 1 else (b, a) for e, (a, b) in enumerate(edges)]
        key, _ = canonical_form(n, (1,) * n, arcs)
        if key in seen:
            continue
        seen.add(key)
        _, _, canon_arcs = _from_key(key)
        yield n, tuple(sorted(canon_arcs))


def weightings(n: int, arcs, w_max: int) -> Iterator[tuple[int, ...]]:
    """Weight vectors up to automorphism; sources fixed at 1."""
    heads = sorted({h for _, h in arcs})
    auts = automorphisms(n, arcs)
    for choice in itertools.product(range(1, w_max + 1), repeat=len(heads)):
        w = [1] * n
        for v, x in zip(heads, choice):
            w[v] = x
        t = tuple(w)
        if all(tuple(t[p[i]] for i in range(n)) >= t for p in auts):
            yield t


def passes_criterion4(d: WeightedOrientedGraph) -> bool:
    return (
        find_forbidden(d) is None
        and is_cochordal(underlying(d)).chordal
        and is_cochordal(h_graph(d)).chordal
    )


def _connected(g: SimpleGraph) -> bool:
    if not g.vertices:
        return True
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        for u in g.adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(g.vertices)


CLASS_FILTERS: dict[str, Callable[[SimpleGraph], bool]] = {
    "all": lambda g: True,
    "chordal": lambda g: is_chordal(g).chordal,
    "house-free": lambda g: is_house_free(g) is None,
    "multipartite": lambda g: (m := complete_multipartite(g)) is not None and m.r >= 2,
    "cochordal": lambda g: is_cochordal(g).chordal,
    "characterized": lambda g: is_chordal(g).chordal or is_house_free(g) is None
    or ((m := complete_multipartite(g)) is not None and m.r >= 2),
}


def enumerate_graphs(
    n_max: int,
    w_max: int,
    *,
    n_min: int = 1,
    graph_class: str = "all",
    connected: bool = False,
    keep: Callable[[WeightedOrientedGraph], bool] | None = None,
) -> Iterator[WeightedOrientedGraph]:
    """All weighted oriented graphs with ``n_min <= n <= n_max`` vertices and
    weights in ``1..w_max``, one per isomorphism class, in deterministic order.

    ``graph_class`` filters on the underlying graph before orientations are
    generated; ``keep`` filters the final weighted graphs.
    """
    if w_max < 1:
        raise ValueError("w_max must be >= 1")
    if graph_class not in CLASS_FILTERS:
        raise ValueError(f"unknown graph class {graph_class!r}")
    accept = CLASS_FILTERS[graph_class]
    for n in range(n_min, n_max + 1):
        names = tuple(f"x{i + 1}" for i in range(n))
        for g in simple_graphs(n):
            if connected and not _connected(g):
                continue
            if not accept(g):
                continue
            for _, arcs in orientations(g):
                named = [(names[a], names[b]) for a, b in arcs]
                for w in weightings(n, arcs, w_max):
                    d = WeightedOrientedGraph(names, frozenset(named), w)
                    if keep is None or keep(d):
                        yield d
