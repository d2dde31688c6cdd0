"""Graph builders shared by the test modules."""

from woglin.graphs import SimpleGraph, WeightedOrientedGraph


def triangle_with_whiskers() -> WeightedOrientedGraph:
    """Triangle x1x2x3 with a weight-2 pendant head on each corner."""
    return WeightedOrientedGraph.build(
        ["x1", "x2", "x3", "x4", "x5", "x6"],
        [("x1", "x2"), ("x1", "x3"), ("x2", "x3"), ("x1", "x4"), ("x2", "x5"), ("x3", "x6")],
        {"x4": 2, "x5": 2, "x6": 2},
    )


def simple(names: str, edges: str) -> SimpleGraph:
    """``simple("abcd", "ab bc cd da")`` builds C4."""
    return SimpleGraph.build(list(names), [tuple(e) for e in edges.split()])


def cycle(n: int) -> SimpleGraph:
    names = [f"v{i}" for i in range(n)]
    return SimpleGraph.build(names, [(names[i], names[(i + 1) % n]) for i in range(n)])


def weight_one(g: SimpleGraph) -> WeightedOrientedGraph:
    return WeightedOrientedGraph.build(g.vertices, g.sorted_edges())
