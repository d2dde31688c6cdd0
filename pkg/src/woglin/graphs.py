"""Weighted oriented graphs, their underlying simple graphs, and the graph
predicates used by the linearity deciders.

Vertices are arbitrary non-empty strings without whitespace. All graph values
are immutable; every operation returns a new object.
"""

from __future__ import annotations

import itertools
import json
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

__all__ = [
    "GraphError",
    "GraphFormatError",
    "WeightedOrientedGraph",
    "SimpleGraph",
    "PatternMatch",
    "MultipartiteCertificate",
    "ChordalityCertificate",
    "PATTERNS",
    "PATTERN_CATALOG",
    "underlying",
    "v_plus",
    "complement",
    "is_chordal",
    "is_cochordal",
    "h_graph",
    "find_forbidden",
    "match_pattern",
    "is_house_free",
    "HOUSE_EDGES",
    "complete_multipartite",
    "induced",
    "is_minimal_vertex_cover",
    "load_graph",
    "parse_graph",
    "graph_to_dict",
    "dump_graph",
    "graph_from_dict",
    "pattern_instance",
]

_ID_RE = re.compile(r"^\S+$")


class GraphError(ValueError):
    """Invalid graph data (loops, anti-parallel arcs, bad weights, ...)."""


class GraphFormatError(GraphError):
    """A graph document could not be parsed."""


@dataclass(frozen=True)
class WeightedOrientedGraph:
    """A vertex-weighted oriented graph.

    ``weights`` is aligned with ``vertices``. ``normalized`` records the
    source vertices whose weight was reset to 1 at construction time.
    """

    vertices: tuple[str, ...]
    arcs: frozenset[tuple[str, str]]
    weights: tuple[int, ...]
    normalized: frozenset[str] = field(default=frozenset(), compare=False)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        if len(self.weights) != len(self.vertices):
            raise GraphError("weights must be aligned with vertices")
        for v in self.vertices:
            if not isinstance(v, str) or not _ID_RE.match(v):
                raise GraphError(f"invalid vertex id {v!r}")
        for v, w in zip(self.vertices, self.weights):
            if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                raise GraphError(f"vertex {v!r}: weight must be a positive integer, got {w!r}")
        known = set(self.vertices)
        for t, h in self.arcs:
            if t not in known or h not in known:
                raise GraphError(f"arc ({t}, {h}) uses an unknown vertex")
            if t == h:
                raise GraphError(f"loop arc ({t}, {h})")
            if (h, t) in self.arcs:
                raise GraphError(f"anti-parallel arcs ({t}, {h}) and ({h}, {t})")

    @classmethod
    def build(
        cls,
        vertices: Sequence[str],
        arcs: Iterable[tuple[str, str]],
        weights: Mapping[str, int] | None = None,
        *,
        normalize: bool = True,
    ) -> "WeightedOrientedGraph":
        """Construct a graph; sources get weight 1 unless ``normalize`` is off."""
        vertices = tuple(vertices)
        arcs = frozenset((t, h) for t, h in arcs)
        weights = dict(weights or {})
        unknown = set(weights) - set(vertices)
        if unknown:
            raise GraphError(f"weights given for unknown vertices {sorted(unknown)}")
        ws = [weights.get(v, 1) for v in vertices]
        reset: set[str] = set()
        if normalize:
            heads = {h for _, h in arcs}
            for i, v in enumerate(vertices):
                if v not in heads and ws[i] != 1:
                    reset.add(v)
                    ws[i] = 1
        return cls(vertices, arcs, tuple(ws), frozenset(reset))

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def weight(self, v: str) -> int:
        return self.weights[self.index[v]]

    @cached_property
    def weight_map(self) -> dict[str, int]:
        return dict(zip(self.vertices, self.weights))

    def out_neighbors(self, v: str) -> set[str]:
        return {h for t, h in self.arcs if t == v}

    def in_neighbors(self, v: str) -> set[str]:
        return {t for t, h in self.arcs if h == v}

    def is_source(self, v: str) -> bool:
        return not any(h == v for _, h in self.arcs)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def sorted_arcs(self) -> list[tuple[str, str]]:
        idx = self.index
        return sorted(self.arcs, key=lambda a: (idx[a[0]], idx[a[1]]))


@dataclass(frozen=True)
class SimpleGraph:
    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    def __post_init__(self) -> None:
        known = set(self.vertices)
        for e in self.edges:
            if len(e) != 2 or not e <= known:
                raise GraphError(f"bad edge {sorted(e)}")

    @classmethod
    def build(cls, vertices: Sequence[str], edges: Iterable[Iterable[str]]) -> "SimpleGraph":
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges))

    @cached_property
    def adj(self) -> dict[str, frozenset[str]]:
        nbrs: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            nbrs[a].add(b)
            nbrs[b].add(a)
        return {v: frozenset(s) for v, s in nbrs.items()}

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def has_edge(self, a: str, b: str) -> bool:
        return b in self.adj[a]

    def subgraph(self, keep: Iterable[str]) -> "SimpleGraph":
        keep = set(keep)
        return SimpleGraph(
            tuple(v for v in self.vertices if v in keep),
            frozenset(e for e in self.edges if e <= keep),
        )

    def sorted_edges(self) -> list[tuple[str, str]]:
        idx = self.index
        out = [tuple(sorted(e, key=idx.__getitem__)) for e in self.edges]
        return sorted(out, key=lambda p: (idx[p[0]], idx[p[1]]))


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class PatternMatch:
    """``witness[i]`` is the host vertex playing template position ``i``."""

    pattern: str
    witness: tuple[str, ...]


@dataclass(frozen=True)
class MultipartiteCertificate:
    parts: tuple[tuple[str, ...], ...]

    @property
    def r(self) -> int:
        return len(self.parts)

    def verify(self, g: SimpleGraph) -> list[str]:
        problems = []
        seen: list[str] = [v for p in self.parts for v in p]
        if any(not p for p in self.parts):
            problems.append("empty part")
        if sorted(seen) != sorted(g.vertices):
            problems.append("parts do not partition the vertex set")
            return problems
        where = {v: i for i, p in enumerate(self.parts) for v in p}
        for a, b in itertools.combinations(g.vertices, 2):
            same = where[a] == where[b]
            if same and g.has_edge(a, b):
                problems.append(f"edge {{{a},{b}}} inside a part")
            elif not same and not g.has_edge(a, b):
                problems.append(f"missing cross edge {{{a},{b}}}")
        return problems


@dataclass(frozen=True)
class ChordalityCertificate:
    """Exactly one of ``peo`` (chordal) and ``cycle`` (not chordal) is set."""

    peo: tuple[str, ...] | None = None
    cycle: tuple[str, ...] | None = None

    @property
    def chordal(self) -> bool:
        return self.peo is not None

    def verify(self, g: SimpleGraph) -> list[str]:
        if (self.peo is None) == (self.cycle is None):
            return ["exactly one of peo/cycle must be present"]
        if self.peo is not None:
            if sorted(self.peo) != sorted(g.vertices) or len(set(self.peo)) != len(self.peo):
                return ["peo is not a permutation of the vertices"]
            pos = {v: i for i, v in enumerate(self.peo)}
            for v in self.peo:
                later = [u for u in g.adj[v] if pos[u] > pos[v]]
                for a, b in itertools.combinations(later, 2):
                    if not g.has_edge(a, b):
                        return [f"peo violated at {v}: later neighbours {a},{b} not adjacent"]
            return []
        cyc = self.cycle
        if len(cyc) < 4 or len(set(cyc)) != len(cyc):
            return ["cycle must have at least 4 distinct vertices"]
        if any(v not in g.adj for v in cyc):
            return ["cycle uses unknown vertices"]
        m = len(cyc)
        for i, j in itertools.combinations(range(m), 2):
            consecutive = j == i + 1 or (i == 0 and j == m - 1)
            if consecutive and not g.has_edge(cyc[i], cyc[j]):
                return [f"cycle edge {{{cyc[i]},{cyc[j]}}} missing"]
            if not consecutive and g.has_edge(cyc[i], cyc[j]):
                return [f"cycle has chord {{{cyc[i]},{cyc[j]}}}"]
        return []


# ---------------------------------------------------------------------------
# pattern catalogue
#
# Each template is (arcs on positions 0..2, positions that must have weight >= 2).
#   D1  directed path 0->1->2, 0 and 2 non-adjacent, weighted heads 1, 2
#   D2  out-star 0->1, 0->2, 1 and 2 non-adjacent, weighted 1, 2
#   D3  directed 3-cycle, all three vertices weighted
#   D4  transitive triangle 0->1, 0->2, 2->1, weighted 1, 2 (plus 1->2 mirror)

PATTERNS = ("D1", "D2", "D3", "D4")

PATTERN_CATALOG: dict[str, tuple[tuple[frozenset[tuple[int, int]], frozenset[int]], ...]] = {
    "D1": ((frozenset({(0, 1), (1, 2)}), frozenset({1, 2})),),
    "D2": ((frozenset({(0, 1), (0, 2)}), frozenset({1, 2})),),
    "D3": ((frozenset({(0, 1), (1, 2), (2, 0)}), frozenset({0, 1, 2})),),
    "D4": (
        (frozenset({(0, 1), (0, 2), (2, 1)}), frozenset({1, 2})),
        (frozenset({(0, 1), (0, 2), (1, 2)}), frozenset({1, 2})),
    ),
}


def _local_arcs(d: WeightedOrientedGraph, triple: Sequence[str]) -> frozenset[tuple[int, int]]:
    return frozenset(
        (i, j)
        for i, j in itertools.permutations(range(3), 2)
        if (triple[i], triple[j]) in d.arcs
    )


def match_pattern(d: WeightedOrientedGraph, pattern: str, witness: Sequence[str]) -> bool:
    """Does the ordered triple ``witness`` realise ``pattern`` as an induced subgraph?"""
    if len(witness) != 3 or len(set(witness)) != 3 or any(v not in d.index for v in witness):
        return False
    local = _local_arcs(d, witness)
    for arcs, weighted in PATTERN_CATALOG.get(pattern, ()):
        if local == arcs and all(d.weight(witness[p]) >= 2 for p in weighted):
            return True
    return False


def find_forbidden(d: WeightedOrientedGraph) -> PatternMatch | None:
    """First induced copy of D1..D4, scanning triples in vertex order."""
    heavy = {v for v, w in zip(d.vertices, d.weights) if w >= 2}
    if len(heavy) < 2:
        return None
    for triple in itertools.combinations(d.vertices, 3):
        if len(heavy.intersection(triple)) < 2:
            continue
        for perm in itertools.permutations(triple):
            local = _local_arcs(d, perm)
            for name in PATTERNS:
                for arcs, weighted in PATTERN_CATALOG[name]:
                    if local == arcs and all(perm[p] in heavy for p in weighted):
                        return PatternMatch(name, perm)
    return None


# ---------------------------------------------------------------------------
# basic constructions


def underlying(d: WeightedOrientedGraph) -> SimpleGraph:
    return SimpleGraph(d.vertices, frozenset(frozenset(a) for a in d.arcs))


def v_plus(d: WeightedOrientedGraph) -> frozenset[str]:
    heads = {h for _, h in d.arcs}
    return frozenset(v for v, w in zip(d.vertices, d.weights) if w > 1 and v in heads)


def complement(g: SimpleGraph) -> SimpleGraph:
    return SimpleGraph(
        g.vertices,
        frozenset(
            frozenset((a, b))
            for a, b in itertools.combinations(g.vertices, 2)
            if not g.has_edge(a, b)
        ),
    )


def h_graph(d: WeightedOrientedGraph) -> SimpleGraph:
    """Graph of the degree-2 generators of I(D), on all of V(D)."""
    return SimpleGraph(
        d.vertices,
        frozenset(frozenset((t, h)) for t, h in d.arcs if d.weight(h) == 1),
    )


def induced(d: WeightedOrientedGraph, keep: Iterable[str]) -> WeightedOrientedGraph:
    """Induced subgraph; weights are inherited without source normalisation."""
    keep = set(keep)
    missing = keep - set(d.vertices)
    if missing:
        raise GraphError(f"unknown vertices {sorted(missing)}")
    verts = tuple(v for v in d.vertices if v in keep)
    return WeightedOrientedGraph(
        verts,
        frozenset(a for a in d.arcs if a[0] in keep and a[1] in keep),
        tuple(d.weight(v) for v in verts),
    )


def is_minimal_vertex_cover(g: SimpleGraph, cover: Iterable[str]) -> bool:
    cover = set(cover)
    if not cover <= set(g.vertices):
        raise GraphError("cover contains unknown vertices")

    def covers(c: set[str]) -> bool:
        return all(e & c for e in g.edges)

    return covers(cover) and not any(covers(cover - {v}) for v in cover)


# ---------------------------------------------------------------------------
# chordality


def _mcs_order(g: SimpleGraph) -> list[str]:
    """Maximum cardinality search; returns the reverse visit order."""
    weight = {v: 0 for v in g.vertices}
    left = list(g.vertices)
    visit = []
    while left:
        v = max(left, key=lambda u: weight[u])  # first maximum keeps ties stable
        left.remove(v)
        visit.append(v)
        for u in g.adj[v]:
            if u in weight and u in left:
                weight[u] += 1
    return visit[::-1]


def _chordless_cycle(g: SimpleGraph) -> tuple[str, ...] | None:
    for v in g.vertices:
        nbrs = sorted(g.adj[v], key=g.index.__getitem__)
        for a, b in itertools.combinations(nbrs, 2):
            if g.has_edge(a, b):
                continue
            blocked = (g.adj[v] | {v}) - {a, b}
            path = _shortest_path(g, a, b, blocked)
            if path is not None:
                return (v, *path)
    return None


def _shortest_path(g: SimpleGraph, src: str, dst: str, blocked: set[str]) -> list[str] | None:
    prev = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            path = [u]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for w in sorted(g.adj[u], key=g.index.__getitem__):
            if w not in prev and w not in blocked:
                prev[w] = u
                queue.append(w)
    return None


def is_chordal(g: SimpleGraph) -> ChordalityCertificate:
    peo = _mcs_order(g)
    cert = ChordalityCertificate(peo=tuple(peo))
    if not cert.verify(g):
        return cert
    cycle = _chordless_cycle(g)
    assert cycle is not None, "MCS order failed but no chordless cycle found"
    return ChordalityCertificate(cycle=cycle)


def is_cochordal(g: SimpleGraph) -> ChordalityCertificate:
    """Chordality certificate for the complement of ``g``."""
    return is_chordal(complement(g))


# ---------------------------------------------------------------------------
# house graph and complete multipartite recognition

# a-b-c-d-a square with roof e over the edge ab; positions a=0 .. e=4
HOUSE_EDGES = frozenset(
    frozenset(p) for p in [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4)]
)


def is_house_free(g: SimpleGraph) -> PatternMatch | None:
    """Returns an induced house (ordered as a, b, c, d, e) or None when house-free."""
    if len(g.edges) < 6:
        return None
    for five in itertools.combinations(g.vertices, 5):
        sub = [frozenset((i, j)) for i, j in itertools.combinations(range(5), 2)
               if g.has_edge(five[i], five[j])]
        if len(sub) != 6:
            continue
        for perm in itertools.permutations(five):
            if all(g.has_edge(perm[i], perm[j]) for i, j in (tuple(e) for e in HOUSE_EDGES)):
                return PatternMatch("House", perm)
    return None


def complete_multipartite(g: SimpleGraph) -> MultipartiteCertificate | None:
    comp = complement(g)
    seen: set[str] = set()
    parts = []
    for v in g.vertices:
        if v in seen:
            continue
        part = []
        queue = deque([v])
        seen.add(v)
        while queue:
            u = queue.popleft()
            part.append(u)
            for w in comp.adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        part.sort(key=g.index.__getitem__)
        if any(not comp.has_edge(a, b) for a, b in itertools.combinations(part, 2)):
            return None
        parts.append(tuple(part))
    return MultipartiteCertificate(tuple(parts))


# ---------------------------------------------------------------------------
# file format


def graph_to_dict(d: WeightedOrientedGraph) -> dict:
    return {
        "vertices": [{"id": v, "weight": w} for v, w in zip(d.vertices, d.weights)],
        "arcs": [list(a) for a in d.sorted_arcs()],
    }


def dump_graph(d: WeightedOrientedGraph) -> str:
    return json.dumps(graph_to_dict(d), indent=2)


def parse_graph(text: str, *, normalize: bool = True) -> WeightedOrientedGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        token = exc.doc[exc.pos:exc.pos + 12].split("\n")[0]
        raise GraphFormatError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg} near {token!r}"
        ) from None
    return graph_from_dict(doc, normalize=normalize)


def graph_from_dict(doc: object, *, normalize: bool = True) -> WeightedOrientedGraph:
    if not isinstance(doc, dict) or "vertices" not in doc or "arcs" not in doc:
        raise GraphFormatError("graph document needs 'vertices' and 'arcs' fields")
    vertices, weights = [], {}
    for entry in doc["vertices"]:
        if not isinstance(entry, dict) or "id" not in entry:
            raise GraphFormatError(f"bad vertex entry {entry!r}")
        vid = entry["id"]
        w = entry.get("weight", 1)
        if not isinstance(vid, str) or not _ID_RE.match(vid):
            raise GraphFormatError(f"invalid vertex id {vid!r}")
        if vid in weights:
            raise GraphFormatError(f"duplicate vertex id {vid!r}")
        if not isinstance(w, int) or isinstance(w, bool) or w < 1:
            raise GraphFormatError(f"vertex {vid!r}: weight must be a positive integer, got {w!r}")
        vertices.append(vid)
        weights[vid] = w
    arcs: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for entry in doc["arcs"]:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise GraphFormatError(f"bad arc entry {entry!r}")
        t, h = entry
        if t not in weights or h not in weights:
            raise GraphFormatError(f"arc [{t}, {h}] uses an unknown vertex")
        if t == h:
            raise GraphFormatError(f"loop arc [{t}, {h}]")
        if (t, h) in seen:
            raise GraphFormatError(f"duplicate arc [{t}, {h}]")
        if (h, t) in seen:
            raise GraphFormatError(f"anti-parallel arcs [{h}, {t}] and [{t}, {h}]")
        seen.add((t, h))
        arcs.append((t, h))
    return WeightedOrientedGraph.build(vertices, arcs, weights, normalize=normalize)


def load_graph(path: str, *, normalize: bool = True) -> WeightedOrientedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), normalize=normalize)


def pattern_instance(pattern: str, w2: int, w3: int, *, w1: int | None = None) -> WeightedOrientedGraph:
    """The three-vertex graph ``pattern`` on x1, x2, x3 with the given weights.

    Template position ``i`` is vertex ``x{i+1}``; ``w1`` only matters for D3
    (default 2) since x1 is a source in the other patterns.
    """
    if pattern not in PATTERN_CATALOG:
        raise GraphError(f"unknown pattern {pattern!r}")
    arcs, weighted = PATTERN_CATALOG[pattern][0]
    names = ("x1", "x2", "x3")
    ws = {"x1": (2 if w1 is None else w1) if 0 in weighted else 1, "x2": w2, "x3": w3}
    return WeightedOrientedGraph.build(names, [(names[a], names[b]) for a, b in sorted(arcs)], ws)
