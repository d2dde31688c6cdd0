import itertools

import networkx as nx
import pytest

from woglin.census import (
    automorphisms,
    canonical_form,
    enumerate_graphs,
    orientations,
    passes_criterion4,
    simple_graphs,
    weightings,
)
from woglin.graphs import complete_multipartite, is_chordal, underlying


def brute_force_classes(n, w_max):
    """Labeled enumeration deduplicated with networkx isomorphism tests."""
    pairs = list(itertools.combinations(range(n), 2))
    reps = []
    for rels in itertools.product(range(3), repeat=len(pairs)):
        arcs = []
        for (a, b), r in zip(pairs, rels):
            if r == 1:
                arcs.append((a, b))
            elif r == 2:
                arcs.append((b, a))
        heads = sorted({h for _, h in arcs})
        for choice in itertools.product(range(1, w_max + 1), repeat=len(heads)):
            g = nx.DiGraph()
            for v in range(n):
                g.add_node(v, w=1)
            for v, w in zip(heads, choice):
                g.nodes[v]["w"] = w
            g.add_edges_from(arcs)
            match = nx.algorithms.isomorphism.categorical_node_match("w", 1)
            if not any(nx.is_isomorphic(g, r, node_match=match) for r in reps):
                reps.append(g)
    return len(reps)


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 2), (3, 7), (4, 42), (5, 582)])
def test_orientation_counts(n, expected):
    assert sum(1 for g in simple_graphs(n) for _ in orientations(g)) == expected


@pytest.mark.parametrize("n,expected", [(2, 3), (3, 20), (4, 278)])
def test_weighted_counts(n, expected):
    assert sum(1 for _ in enumerate_graphs(n, 2, n_min=n)) == expected


@pytest.mark.parametrize("n", [2, 3])
def test_weighted_counts_match_brute_force(n):
    assert sum(1 for _ in enumerate_graphs(n, 2, n_min=n)) == brute_force_classes(n, 2)


def test_simple_graph_counts():
    assert [sum(1 for _ in simple_graphs(n)) for n in range(1, 6)] == [1, 2, 4, 11, 34]


def test_atlas_bound():
    with pytest.raises(ValueError):
        list(simple_graphs(8))


def test_canonical_form_is_invariant():
    arcs = [(0, 1), (1, 2), (0, 3)]
    weights = (1, 2, 1, 3)
    key, _ = canonical_form(4, weights, arcs)
    for perm in itertools.permutations(range(4)):
        moved = [(perm[a], perm[b]) for a, b in arcs]
        w = [0] * 4
        for v in range(4):
            w[perm[v]] = weights[v]
        assert canonical_form(4, tuple(w), moved)[0] == key


def test_canonical_form_separates_weights():
    arcs = [(0, 1), (0, 2)]
    assert canonical_form(3, (1, 2, 1), arcs)[0] != canonical_form(3, (1, 2, 2), arcs)[0]


def test_automorphisms_of_directed_triangle():
    assert len(automorphisms(3, [(0, 1), (1, 2), (2, 0)])) == 3
    assert len(automorphisms(3, [(0, 1), (0, 2)])) == 2


def test_weightings_respect_sources():
    for w in weightings(3, [(0, 1), (0, 2)], 3):
        assert w[0] == 1
    assert sum(1 for _ in weightings(3, [(0, 1), (0, 2)], 3)) == 6


def test_class_filters():
    for d in enumerate_graphs(5, 1, n_min=5, graph_class="chordal"):
        assert is_chordal(underlying(d)).chordal
    for d in enumerate_graphs(5, 1, n_min=5, graph_class="multipartite"):
        m = complete_multipartite(underlying(d))
        assert m is not None and m.r >= 2


def test_connected_filter():
    assert sum(1 for g in enumerate_graphs(3, 1, n_min=3, connected=True)) == 3 + 2  # path orientations plus triangle orientations


def test_keep_filter():
    assert all(passes_criterion4(d) for d in enumerate_graphs(4, 2, keep=passes_criterion4))


def test_unknown_class():
    with pytest.raises(ValueError):
        list(enumerate_graphs(3, 1, graph_class="planar"))
