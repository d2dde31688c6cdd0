import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import cycle, simple, triangle_with_whiskers, weight_one
from woglin.graphs import (
    GraphError,
    GraphFormatError,
    PATTERNS,
    WeightedOrientedGraph,
    complement,
    complete_multipartite,
    find_forbidden,
    h_graph,
    induced,
    is_chordal,
    is_cochordal,
    is_house_free,
    is_minimal_vertex_cover,
    match_pattern,
    parse_graph,
    pattern_instance,
    underlying,
    v_plus,
)


def build(arcs, weights=None, vertices=None):
    vertices = vertices or sorted({v for a in arcs for v in a})
    return WeightedOrientedGraph.build(vertices, arcs, weights or {})


@st.composite
def oriented_graphs(draw, max_n=6, max_w=2):
    n = draw(st.integers(1, max_n))
    names = [f"v{i}" for i in range(n)]
    arcs = []
    for a, b in itertools.combinations(range(n), 2):
        r = draw(st.integers(0, 2))
        if r == 1:
            arcs.append((names[a], names[b]))
        elif r == 2:
            arcs.append((names[b], names[a]))
    weights = {v: draw(st.integers(1, max_w)) for v in names}
    return WeightedOrientedGraph.build(names, arcs, weights)


class TestConstruction:
    def test_sources_are_normalized_and_reported(self):
        d = build([("a", "b")], {"a": 3, "b": 2})
        assert d.weight("a") == 1 and d.weight("b") == 2
        assert d.normalized == {"a"}

    def test_loop_rejected(self):
        with pytest.raises(GraphError):
            build([("a", "a")])

    def test_antiparallel_rejected(self):
        with pytest.raises(GraphError, match="anti-parallel"):
            build([("a", "b"), ("b", "a")])

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(GraphError):
            WeightedOrientedGraph(("a",), frozenset(), (0,))


class TestVPlus:
    def test_weight_one_graph(self):
        assert v_plus(weight_one(cycle(5))) == set()

    def test_single_heavy_head(self):
        assert v_plus(build([("a", "b")], {"b": 3})) == {"b"}

    def test_d4_instance(self):
        assert v_plus(pattern_instance("D4", 2, 2)) == {"x2", "x3"}


class TestComplement:
    def test_triangle(self):
        assert complement(simple("abc", "ab bc ca")).edges == frozenset()

    def test_square(self):
        c = complement(simple("abcd", "ab bc cd da"))
        assert c.edges == {frozenset("ac"), frozenset("bd")}

    def test_pentagon_is_self_complementary(self):
        c = complement(cycle(5))
        assert len(c.edges) == 5 and all(len(c.adj[v]) == 2 for v in c.vertices)
        assert not is_chordal(c).chordal

    @given(oriented_graphs())
    def test_involution(self, d):
        g = underlying(d)
        assert complement(complement(g)) == g


class TestChordality:
    def test_complete_graph(self):
        cert = is_chordal(simple("abcd", "ab ac ad bc bd cd"))
        assert cert.chordal and cert.verify(simple("abcd", "ab ac ad bc bd cd")) == []

    def test_square_gives_cycle(self):
        g = simple("abcd", "ab bc cd da")
        cert = is_chordal(g)
        assert not cert.chordal and len(cert.cycle) == 4 and cert.verify(g) == []

    def test_complement_of_hexagon(self):
        g = complement(cycle(6))
        cert = is_chordal(g)
        assert len(cert.cycle) == 4 and cert.verify(g) == []

    def test_cochordal_examples(self):
        two_k2 = simple("abcd", "ab cd")
        cert = is_cochordal(two_k2)
        assert not cert.chordal and cert.verify(complement(two_k2)) == []
        assert is_cochordal(simple("abcd", "ab ac ad bc bd cd")).chordal
        assert is_cochordal(simple("abcd", "ab bc cd")).chordal

    def test_tampered_peo_is_named(self):
        g = simple("abcd", "ab bc cd da ac")
        cert = is_chordal(g)
        bad = type(cert)(peo=("a", "b", "c", "d"))
        assert any("peo violated" in p for p in bad.verify(g))

    @given(oriented_graphs(max_n=7))
    @settings(max_examples=150)
    def test_certificates_verify(self, d):
        g = underlying(d)
        assert is_chordal(g).verify(g) == []
        assert is_cochordal(g).verify(complement(g)) == []


class TestHGraph:
    def test_weight_one_equals_underlying(self):
        d = weight_one(cycle(5))
        assert h_graph(d) == underlying(d)

    def test_single_weighted_arc(self):
        assert h_graph(build([("a", "b")], {"b": 2})).edges == frozenset()

    def test_whiskers(self):
        h = h_graph(triangle_with_whiskers())
        assert h.edges == {frozenset(p) for p in [("x1", "x2"), ("x1", "x3"), ("x2", "x3")]}
        assert h.vertices == triangle_with_whiskers().vertices

    @given(oriented_graphs())
    def test_subgraph_of_underlying(self, d):
        assert h_graph(d).edges <= underlying(d).edges


class TestForbidden:
    def test_star(self):
        d = build([("x", "a"), ("x", "b")], {"a": 2, "b": 2}, ["x", "a", "b"])
        m = find_forbidden(d)
        assert m.pattern == "D2" and m.witness == ("x", "a", "b")

    def test_weight_one_never_fires(self):
        assert find_forbidden(weight_one(simple("abcde", "ab bc cd de ea ac"))) is None

    def test_transitive_triangle(self):
        d = build([("x1", "x2"), ("x1", "x3"), ("x3", "x2")], {"x2": 2, "x3": 2})
        assert find_forbidden(d).pattern == "D4"

    def test_mirror_of_d4_uses_same_tag(self):
        d = build([("x1", "x2"), ("x1", "x3"), ("x2", "x3")], {"x2": 2, "x3": 2})
        assert find_forbidden(d).pattern == "D4"

    @pytest.mark.parametrize("name", PATTERNS)
    def test_catalog_instances_match_themselves(self, name):
        d = pattern_instance(name, 2, 3)
        m = find_forbidden(d)
        assert m is not None and match_pattern(d, m.pattern, m.witness)

    def test_cyclic_triangle_needs_three_weights(self):
        two = build([("x1", "x2"), ("x2", "x3"), ("x3", "x1")], {"x2": 2, "x3": 2})
        three = build([("x1", "x2"), ("x2", "x3"), ("x3", "x1")], {"x1": 2, "x2": 2, "x3": 2})
        assert find_forbidden(two) is None
        assert find_forbidden(three).pattern == "D3"

    def test_path_pattern(self):
        d = build([("x1", "x2"), ("x2", "x3")], {"x2": 2, "x3": 2})
        assert find_forbidden(d).pattern == "D1"

    def test_match_rejects_bad_witness(self):
        d = pattern_instance("D2", 2, 2)
        assert not match_pattern(d, "D2", ("x1", "x2", "zz"))
        assert not match_pattern(d, "D4", ("x1", "x2", "x3"))

    @given(oriented_graphs(max_n=5), st.data())
    @settings(max_examples=100)
    def test_induced_monotone(self, d, data):
        keep = data.draw(st.sets(st.sampled_from(d.vertices), min_size=1))
        if find_forbidden(induced(d, keep)) is not None:
            assert find_forbidden(d) is not None


class TestHouse:
    HOUSE = simple("abcde", "ab bc cd da ae be")

    def test_house_found(self):
        m = is_house_free(self.HOUSE)
        assert m.pattern == "House" and set(m.witness) == set("abcde")

    def test_chordal_is_house_free(self):
        assert is_house_free(simple("abcde", "ab ac bc bd cd de")) is None

    def test_pentagon(self):
        assert is_house_free(cycle(5)) is None


class TestMultipartite:
    def test_k23(self):
        g = simple("abcde", "ac ad ae bc bd be")
        m = complete_multipartite(g)
        assert sorted(len(p) for p in m.parts) == [2, 3] and m.r == 2 and m.verify(g) == []

    def test_path3(self):
        m = complete_multipartite(simple("abc", "ab bc"))
        assert sorted(m.parts) == [("a", "c"), ("b",)]

    def test_path4(self):
        assert complete_multipartite(simple("abcd", "ab bc cd")) is None

    def test_verify_names_problems(self):
        from woglin.graphs import MultipartiteCertificate

        g = simple("abc", "ab bc")
        assert MultipartiteCertificate((("a", "b"), ("c",))).verify(g)


class TestInduced:
    def test_whole_vertex_set(self):
        d = triangle_with_whiskers()
        assert induced(d, d.vertices) == d

    def test_d4_pair(self):
        sub = induced(pattern_instance("D4", 2, 2), {"x1", "x2"})
        assert sub.arcs == {("x1", "x2")} and sub.weight("x2") == 2

    def test_triangle_of_whiskers(self):
        sub = induced(triangle_with_whiskers(), {"x1", "x2", "x3"})
        assert len(sub.arcs) == 3 and set(sub.weights) == {1}

    def test_no_renormalization(self):
        sub = induced(pattern_instance("D4", 2, 2), {"x2", "x3"})
        assert sub.weight("x3") == 2  # x3 is now a source but keeps its weight

    def test_unknown_vertex(self):
        with pytest.raises(GraphError):
            induced(triangle_with_whiskers(), {"nope"})


class TestVertexCover:
    def test_examples(self):
        k3 = simple("abc", "ab bc ca")
        c4 = simple("abcd", "ab bc cd da")
        assert is_minimal_vertex_cover(k3, "ab")
        assert is_minimal_vertex_cover(c4, "ac")
        assert not is_minimal_vertex_cover(c4, "abc")


class TestFileFormat:
    def test_round_trip(self):
        from woglin.graphs import dump_graph

        d = triangle_with_whiskers()
        assert parse_graph(dump_graph(d)) == d

    def test_duplicate_arc_named(self):
        doc = {"vertices": [{"id": "a"}, {"id": "b"}], "arcs": [["a", "b"], ["a", "b"]]}
        with pytest.raises(GraphFormatError, match=r"duplicate arc \[a, b\]"):
            parse_graph(json.dumps(doc))

    def test_antiparallel_named(self):
        doc = {"vertices": [{"id": "a"}, {"id": "b"}], "arcs": [["a", "b"], ["b", "a"]]}
        with pytest.raises(GraphFormatError, match="anti-parallel"):
            parse_graph(json.dumps(doc))

    def test_loop_named(self):
        doc = {"vertices": [{"id": "a"}], "arcs": [["a", "a"]]}
        with pytest.raises(GraphFormatError, match=r"loop arc \[a, a\]"):
            parse_graph(json.dumps(doc))

    def test_syntax_error_has_position(self):
        with pytest.raises(GraphFormatError, match="line 2, column"):
            parse_graph('{"vertices": [],\n "arcs": [[}')

    def test_whitespace_id_rejected(self):
        with pytest.raises(GraphFormatError):
            parse_graph(json.dumps({"vertices": [{"id": "a b"}], "arcs": []}))

    def test_ids_are_case_sensitive(self):
        d = parse_graph(json.dumps({"vertices": [{"id": "a"}, {"id": "A"}], "arcs": [["a", "A"]]}))
        assert d.n == 2
