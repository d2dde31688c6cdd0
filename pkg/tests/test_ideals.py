import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import triangle_with_whiskers
from woglin.graphs import WeightedOrientedGraph, induced, pattern_instance
from woglin.ideals import (
    IdealError,
    Monomial,
    canonical_key,
    colon,
    component,
    edge_ideal,
    ideal_to_dict,
    membership,
    minimalize,
    parse_ideal,
    parse_monomial,
    polarize,
    power,
    product,
    restrict,
    variable_ideal,
)


def ideal(variables, *gens):
    variables = list(variables)
    return minimalize(variables, [parse_monomial(variables, g) for g in gens])


def gens(i):
    return [i.fmt(g) for g in i.generators]


@st.composite
def ideals(draw, nvars=3, max_exp=3, max_gens=4):
    variables = [f"y{i}" for i in range(nvars)]
    raw = draw(
        st.lists(
            st.lists(st.integers(0, max_exp), min_size=nvars, max_size=nvars).filter(any),
            min_size=1,
            max_size=max_gens,
        )
    )
    return minimalize(variables, raw)


class TestMonomial:
    def test_arithmetic(self):
        a, b = Monomial((2, 1, 0)), Monomial((1, 1, 1))
        assert a.lcm(b) == (2, 1, 1) and a.gcd(b) == (1, 1, 0)
        assert a.colon(b) == (1, 0, 0) and a.times(b) == (3, 2, 1)
        assert Monomial((1, 1, 0)).divides(a) and not b.divides(a)

    def test_negative_exponent(self):
        with pytest.raises(IdealError):
            Monomial((-1,))

    def test_overflow(self):
        with pytest.raises(OverflowError):
            Monomial((2**31,))


class TestEdgeIdeal:
    def test_single_arc(self):
        d = WeightedOrientedGraph.build(["a", "b"], [("a", "b")], {"b": 3})
        assert gens(edge_ideal(d)) == ["a*b^3"]

    def test_whiskers(self):
        i = edge_ideal(triangle_with_whiskers())
        assert set(gens(i)) == {"x1*x2", "x2*x3", "x1*x3", "x1*x4^2", "x2*x5^2", "x3*x6^2"}

    def test_d4(self):
        assert set(gens(edge_ideal(pattern_instance("D4", 2, 2)))) == {"x1*x2^2", "x1*x3^2", "x2^2*x3"}

    def test_induced_matches_supported_generators(self, whiskers):
        keep = {"x1", "x2", "x3", "x4"}
        sub = edge_ideal(induced(whiskers, keep))
        assert sub == restrict(edge_ideal(whiskers), keep)


class TestMinimalize:
    def test_examples(self):
        assert gens(ideal("x", "x", "x^2")) == ["x"]
        assert gens(ideal("xyz", "x*y", "y*z", "x*y*z")) == ["x*y", "y*z"]
        assert gens(ideal("ab", "a^2*b", "a*b^2")) == ["a^2*b", "a*b^2"]

    def test_canonical_order(self):
        i = ideal("abcd", "c*d^2", "b*c*d", "a*b*c", "a^2*b")
        assert gens(i) == ["a^2*b", "a*b*c", "b*c*d", "c*d^2"]

    @given(ideals(), st.randoms())
    def test_order_independent(self, i, rnd):
        shuffled = list(i.generators)
        rnd.shuffle(shuffled)
        assert minimalize(i.variables, shuffled) == i


class TestColon:
    def test_examples(self):
        i = ideal("abc", "a^2*b", "a*b*c")
        assert colon(i, i.monomial("a*b*c")).is_unit()
        assert gens(colon(ideal("abc", "a^2*b"), Monomial((0, 1, 1)))) == ["a^2"]
        j = ideal("abcd", "a^2*b", "a*b*c", "b*c*d")
        assert gens(colon(j, j.monomial("c*d^2"))) == ["b"]

    @given(ideals(), st.lists(st.integers(0, 2), min_size=3, max_size=3))
    def test_contains_original(self, i, g):
        c = colon(i, g)
        assert all(membership(c, u) for u in i.generators)


class TestComponent:
    def test_examples(self):
        assert gens(component(ideal("xyz", "x*y", "x*z^3"), 2)) == ["x*y"]
        assert set(gens(component(ideal("xyz", "x*y"), 3))) == {"x^2*y", "x*y^2", "x*y*z"}
        assert set(gens(component(edge_ideal(triangle_with_whiskers()), 2))) == {"x1*x2", "x2*x3", "x1*x3"}

    def test_below_minimum_is_zero(self):
        assert component(ideal("xy", "x*y"), 1).is_zero()

    @given(ideals(max_exp=2, max_gens=3), st.integers(0, 2))
    @settings(max_examples=50)
    def test_variable_multiple_lands_in_next(self, i, v):
        d = min(g.degree for g in i.generators) + 1
        nxt = component(i, d + 1)
        for u in component(i, d).generators:
            assert membership(nxt, u.times(Monomial.var(i.nvars, v)))


class TestProductPower:
    def test_product_examples(self):
        assert gens(product(ideal("xyz", "x"), ideal("xyz", "y", "z"))) == ["x*y", "x*z"]
        p = variable_ideal("abcd", "ab")
        i = ideal("abcd", "a^2*b", "a*b*c", "b*c*d", "c*d^2")
        assert set(gens(product(p, i))) == {
            "a^3*b", "a^2*b*c", "a*b*c*d", "a*c*d^2", "a^2*b^2", "a*b^2*c", "b^2*c*d", "b*c*d^2",
        }
        assert product(ideal("abcd", "1"), i) == i

    def test_power_examples(self):
        i = ideal("xyz", "x*y", "y*z")
        assert set(gens(power(i, 2))) == {"x^2*y^2", "x*y^2*z", "y^2*z^2"}
        assert power(i, 1) == i
        sq = set(gens(power(edge_ideal(pattern_instance("D4", 2, 2)), 2)))
        assert {"x1^2*x3^4", "x1*x2^2*x3^3"} <= sq

    def test_power_rejects_zero(self):
        with pytest.raises(IdealError):
            power(ideal("x", "x"), 0)

    def test_universe_mismatch(self):
        with pytest.raises(IdealError):
            product(ideal("xy", "x"), ideal("xz", "x"))

    @given(ideals(max_gens=3), st.integers(1, 2), st.integers(1, 2))
    @settings(max_examples=40)
    def test_power_additivity(self, i, j, k):
        big = power(i, j + k)
        assert all(membership(big, u) for u in product(power(i, j), power(i, k)).generators)
        low = j * min(g.degree for g in i.generators)
        assert all(g.degree >= low for g in power(i, j).generators)


class TestPolarize:
    def test_examples(self):
        p, _ = polarize(ideal("x", "x^2"))
        assert gens(p) == ["x_1*x_2"]
        p, _ = polarize(ideal("ab", "a*b^2"))
        assert gens(p) == ["a_1*b_1*b_2"]
        p, _ = polarize(edge_ideal(pattern_instance("D4", 2, 2)))
        assert all(g.is_squarefree() for g in p.generators) and len(p.generators) == 3

    @given(ideals())
    def test_preserves_count_and_degrees(self, i):
        p, pmap = polarize(i)
        assert sorted(g.degree for g in p.generators) == sorted(g.degree for g in i.generators)
        assert len(set(pmap.forward.values())) == len(pmap.forward)


class TestMembership:
    def test_examples(self):
        i = ideal("xy", "x*y")
        assert membership(i, i.monomial("x^2*y"))
        assert not membership(i, i.monomial("x^2"))
        assert membership(ideal("xy", "1"), Monomial((0, 0)))


class TestTextFormat:
    def test_round_trip(self):
        i = edge_ideal(triangle_with_whiskers())
        assert parse_ideal(json.dumps(ideal_to_dict(i))) == i

    def test_unknown_variable(self):
        with pytest.raises(IdealError, match="not in the declared universe"):
            parse_ideal(json.dumps({"variables": ["x"], "generators": ["x*q"]}))

    def test_syntax_error(self):
        with pytest.raises(IdealError, match="line 1"):
            parse_ideal('{"variables": [')


def test_restrict_random_agrees_with_induced():
    rnd = random.Random(5)
    for _ in range(30):
        names = [f"v{i}" for i in range(5)]
        arcs = []
        for a in range(5):
            for b in range(a + 1, 5):
                r = rnd.randrange(3)
                if r:
                    arcs.append((names[a], names[b]) if r == 1 else (names[b], names[a]))
        d = WeightedOrientedGraph.build(names, arcs, {v: rnd.randint(1, 3) for v in names})
        keep = set(rnd.sample(names, 3))
        assert edge_ideal(induced(d, keep)) == restrict(edge_ideal(d), keep)


@pytest.mark.parametrize("seed", range(5))
def test_minimalize_large_input_matches_pairwise_scan(seed):
    rnd = random.Random(seed)
    gens = [tuple(rnd.randint(0, 3) for _ in range(4)) for _ in range(60)]
    gens = [g for g in gens if any(g)]
    expected = {g for g in gens if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gens)}
    i = minimalize("abcd", gens)
    assert set(i.generators) == expected and list(i.generators) == sorted(i.generators, key=canonical_key)
