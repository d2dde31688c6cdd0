import itertools
import json
import random

import pytest

from fuzz import mutations
from helpers import cycle, simple, weight_one
from woglin.certify import (
    certificate_from_dict,
    certificate_to_dict,
    verdict_from_dict,
    verdict_to_dict,
    verify_verdict,
)
from woglin.graphs import WeightedOrientedGraph, pattern_instance
from woglin.linearity import DecideOptions, Verdict, decide_power


def bipartite_k22():
    return WeightedOrientedGraph.build(
        ["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")], {"c": 2}
    )


def h_obstruction():
    return WeightedOrientedGraph.build(
        ["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")], {"a": 2, "c": 2}
    )


def cases():
    """(graph, k, options) covering every certificate type the engine emits."""
    from helpers import triangle_with_whiskers

    house = weight_one(simple("abcde", "ab bc cd da ae be"))
    return [
        ("whiskers", triangle_with_whiskers(), 1, DecideOptions()),
        ("whiskers-square", triangle_with_whiskers(), 2, DecideOptions()),
        ("d4", pattern_instance("D4", 2, 2), 1, DecideOptions()),
        ("d3-cube", pattern_instance("D3", 2, 3), 3, DecideOptions()),
        ("two-edges", weight_one(simple("abcd", "ab cd")), 1, DecideOptions()),
        ("h-graph", h_obstruction(), 1, DecideOptions()),
        ("house", house, 1, DecideOptions()),
        ("undecided", weight_one(cycle(5)), 2, DecideOptions(use_oracle=False, lq_cap=1)),
        ("k22-power", bipartite_k22(), 3, DecideOptions()),
        ("lq-capped", bipartite_k22(), 1, DecideOptions(split_cap=1)),
        ("criterion4-report", bipartite_k22(), 1, DecideOptions(split_cap=1, lq_cap=1)),
        ("c5", weight_one(cycle(5)), 1, DecideOptions()),
    ]


CASES = cases()
IDS = [c[0] for c in CASES]


@pytest.mark.parametrize("name,d,k,opts", CASES, ids=IDS)
def test_emitted_verdicts_certify(name, d, k, opts):
    v = decide_power(d, k, opts)
    doc = json.loads(json.dumps(verdict_to_dict(v)))
    assert verify_verdict(d, doc, opts, k=k) == [], v


@pytest.mark.parametrize("name,d,k,opts", CASES, ids=IDS)
def test_round_trip(name, d, k, opts):
    v = decide_power(d, k, opts)
    back = verdict_from_dict(json.loads(json.dumps(verdict_to_dict(v))))
    assert verdict_to_dict(back) == verdict_to_dict(v)


def test_certificate_types_covered():
    types = {(verdict_to_dict(decide_power(d, k, o))["certificate"] or {}).get("type") for _, d, k, o in CASES}
    assert {"SplitTree", "LinearQuotientOrder", "Criterion4Report", "PatternMatch", "ChordalityCertificate",
            "BettiEvidence", "FormulaEvidence", "PowerTransfer", None} <= types


@pytest.mark.parametrize("name,d,k,opts", CASES, ids=IDS)
def test_mutations_are_named(name, d, k, opts):
    doc = json.loads(json.dumps(verdict_to_dict(decide_power(d, k, opts))))
    rnd = random.Random(name)
    for path, mutated in itertools.islice(mutations(doc, rnd), 25):
        problems = verify_verdict(d, mutated, opts, k=k)
        assert problems, path
        assert all(":" in p for p in problems)


class TestNamedViolations:
    def test_pattern_witness(self):
        d = pattern_instance("D4", 2, 2)
        doc = verdict_to_dict(decide_power(d, 1))
        doc["certificate"]["witness"] = ["x2", "x1", "x3"]
        assert verify_verdict(d, doc)[0].startswith("pattern-mismatch")

    def test_rule_answer(self):
        d = pattern_instance("D4", 2, 2)
        doc = verdict_to_dict(decide_power(d, 1))
        doc["answer"] = "Yes"
        assert verify_verdict(d, doc)[0].startswith("rule-answer-mismatch")

    def test_unknown_rule(self):
        d = pattern_instance("D4", 2, 2)
        doc = verdict_to_dict(decide_power(d, 1))
        doc["rule"] = "wishful-thinking"
        assert verify_verdict(d, doc)[0].startswith("unknown-rule")

    def test_malformed(self):
        assert verify_verdict(pattern_instance("D4", 2, 2), {"answer": "No"})[0].startswith("malformed-certificate")

    def test_formula_value(self):
        d = pattern_instance("D2", 2, 3)
        doc = verdict_to_dict(decide_power(d, 2))
        doc["certificate"]["predicted_regularity"] += 1
        assert verify_verdict(d, doc)[0].startswith("formula-value-mismatch")

    def test_other_valid_order_is_non_canonical(self):
        d = weight_one(simple("abcd", "ab bc cd"))
        v = decide_power(d, 1, DecideOptions(split_cap=1))
        doc = verdict_to_dict(v)
        assert doc["certificate"]["type"] == "LinearQuotientOrder"
        order = doc["certificate"]["order"]
        doc["certificate"]["order"] = order[1:2] + order[:1] + order[2:]
        problems = verify_verdict(d, doc, DecideOptions(split_cap=1))
        assert problems and (problems[0].startswith("linear-quotient-violation")
                             or problems[0].startswith("non-canonical-certificate"))

    def test_requested_k(self):
        d = pattern_instance("D2", 2, 3)
        doc = verdict_to_dict(decide_power(d, 2))
        assert verify_verdict(d, doc, k=2) == []
        assert verify_verdict(d, doc, k=3)[0].startswith("k-mismatch")

    def test_in_memory_verdict(self):
        d = pattern_instance("D4", 2, 2)
        v = decide_power(d, 1)
        assert verify_verdict(d, v) == []
        assert verify_verdict(d, Verdict("No", v.rule, v.certificate, k=2))


def test_certificate_dict_round_trip_none():
    assert certificate_to_dict(None) is None
    assert certificate_from_dict(None) is None
