"""Serialization of verdicts and independent re-verification of their certificates.

A serialized verdict is a plain dict with ``answer``, ``rule``, ``k``, ``notes``
and a typed ``certificate`` (``{"type": ..., ...}`` or null). Verification
first checks each certificate structurally against the input graph and then
compares it with a deterministic recomputation, so every violation has a name.
"""

from __future__ import annotations

import json
from typing import Any

from .graphs import (
    ChordalityCertificate,
    MultipartiteCertificate,
    PatternMatch,
    WeightedOrientedGraph,
    complement,
    h_graph,
    match_pattern,
    underlying,
)
from .ideals import IdealError, MonomialIdeal, edge_ideal, ideal_from_dict, ideal_to_dict, power
from .linearity import (
    NO,
    UNKNOWN,
    YES,
    Criterion4Report,
    DecideOptions,
    FormulaEvidence,
    LinearQuotientOrder,
    PowerTransfer,
    SplitLeaf,
    SplitNode,
    Verdict,
    decide_power,
    pattern_power_regularity,
    verify_split_tree,
)
from .oracle import BettiEvidence, OracleError, is_componentwise_linear_oracle, regularity

__all__ = [
    "CertificateError",
    "certificate_to_dict",
    "certificate_from_dict",
    "verdict_to_dict",
    "verdict_from_dict",
    "verify_verdict",
    "RULES",
]


class CertificateError(ValueError):
    pass


# rule -> (answers it may justify, certificate types it may carry)
RULES: dict[str, tuple[frozenset[str], frozenset[str]]] = {
    "forbidden-pattern": (frozenset({NO}), frozenset({"PatternMatch"})),
    "underlying-not-cochordal": (frozenset({NO}), frozenset({"ChordalityCertificate"})),
    "h-graph-not-cochordal": (frozenset({NO}), frozenset({"ChordalityCertificate"})),
    "house-free-characterization": (frozenset({YES}), frozenset({"SplitTree", "LinearQuotientOrder", "Criterion4Report"})),
    "multipartite-characterization": (frozenset({YES}), frozenset({"SplitTree", "LinearQuotientOrder", "Criterion4Report"})),
    "chordal-characterization": (frozenset({YES}), frozenset({"SplitTree", "LinearQuotientOrder", "Criterion4Report"})),
    "linear-quotients": (frozenset({YES}), frozenset({"LinearQuotientOrder"})),
    "oracle": (frozenset({YES, NO}), frozenset({"BettiEvidence"})),
    "zero-ideal": (frozenset({YES}), frozenset({"none"})),
    "undecided": (frozenset({UNKNOWN}), frozenset({"none"})),
    "forbidden-pattern-all-powers": (frozenset({NO}), frozenset({"FormulaEvidence"})),
    "multipartite-power-equivalence": (frozenset({YES, NO}), frozenset({"PowerTransfer"})),
    "house-free-power-obstruction": (frozenset({NO}), frozenset({"ChordalityCertificate", "PatternMatch", "BettiEvidence"})),
}


# ---------------------------------------------------------------------------
# serialization


def _chordality_to_dict(c: ChordalityCertificate) -> dict:
    return {
        "type": "ChordalityCertificate",
        "peo": None if c.peo is None else list(c.peo),
        "cycle": None if c.cycle is None else list(c.cycle),
    }


def _split_to_dict(tree) -> dict:
    gens = [tree.ideal.fmt(g) for g in tree.ideal.generators]
    if isinstance(tree, SplitLeaf):
        return {"leaf": tree.kind, "generators": gens}
    return {
        "split": tree.variable,
        "generators": gens,
        "left": _split_to_dict(tree.left),
        "right": _split_to_dict(tree.right),
    }


def certificate_to_dict(cert: Any) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, PatternMatch):
        return {"type": "PatternMatch", "pattern": cert.pattern, "witness": list(cert.witness)}
    if isinstance(cert, ChordalityCertificate):
        return _chordality_to_dict(cert)
    if isinstance(cert, LinearQuotientOrder):
        return {
            "type": "LinearQuotientOrder",
            "ideal": ideal_to_dict(cert.ideal),
            "order": [cert.ideal.fmt(g) for g in cert.order],
            "colon_witnesses": [list(w) for w in cert.colon_witnesses],
        }
    if isinstance(cert, (SplitLeaf, SplitNode)):
        return {"type": "SplitTree", "variables": list(cert.ideal.variables), "tree": _split_to_dict(cert)}
    if isinstance(cert, BettiEvidence):
        return {"type": "BettiEvidence", "ideal": ideal_to_dict(cert.ideal), **cert.to_dict()}
    if isinstance(cert, FormulaEvidence):
        return {
            "type": "FormulaEvidence",
            "pattern": cert.pattern,
            "k": cert.k,
            "weights": list(cert.weights),
            "predicted_regularity": cert.predicted_regularity,
            "witness": list(cert.witness),
        }
    if isinstance(cert, Criterion4Report):
        return {
            "type": "Criterion4Report",
            "underlying_cochordal": _chordality_to_dict(cert.underlying_cochordal),
            "h_cochordal": _chordality_to_dict(cert.h_cochordal),
            "pattern": certificate_to_dict(cert.pattern),
        }
    if isinstance(cert, PowerTransfer):
        return {
            "type": "PowerTransfer",
            "parts": [list(p) for p in cert.multipartite.parts],
            "base": verdict_to_dict(cert.base),
        }
    raise CertificateError(f"cannot serialize {type(cert).__name__}")


def verdict_to_dict(v: Verdict) -> dict:
    return {
        "answer": v.answer,
        "rule": v.rule,
        "k": v.k,
        "certificate": certificate_to_dict(v.certificate),
        "notes": list(v.notes),
    }


def _need(doc: dict, key: str, kind: type | tuple) -> Any:
    if key not in doc:
        raise CertificateError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise CertificateError(f"field {key!r} has the wrong type")
    return value


def _strings(values: Any, key: str) -> tuple[str, ...]:
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise CertificateError(f"field {key!r} must be a list of strings")
    return tuple(values)


def _chordality_from_dict(doc: dict) -> ChordalityCertificate:
    peo, cycle = doc.get("peo"), doc.get("cycle")
    return ChordalityCertificate(
        None if peo is None else _strings(peo, "peo"),
        None if cycle is None else _strings(cycle, "cycle"),
    )


def _split_from_dict(variables: tuple[str, ...], doc: Any):
    if not isinstance(doc, dict):
        raise CertificateError("split tree node must be an object")
    gens = _strings(doc.get("generators"), "generators")
    ideal = ideal_from_dict({"variables": list(variables), "generators": list(gens)})
    if "leaf" in doc:
        return SplitLeaf(ideal, _need(doc, "leaf", str))
    return SplitNode(
        ideal,
        _need(doc, "split", str),
        _split_from_dict(variables, _need(doc, "left", dict)),
        _split_from_dict(variables, _need(doc, "right", dict)),
    )


def certificate_from_dict(doc: Any) -> Any:
    if doc is None:
        return None
    if not isinstance(doc, dict):
        raise CertificateError("certificate must be an object or null")
    kind = _need(doc, "type", str)
    try:
        if kind == "PatternMatch":
            return PatternMatch(_need(doc, "pattern", str), _strings(doc.get("witness"), "witness"))
        if kind == "ChordalityCertificate":
            return _chordality_from_dict(doc)
        if kind == "LinearQuotientOrder":
            ideal = ideal_from_dict(_need(doc, "ideal", dict))
            order = tuple(ideal.monomial(m) for m in _strings(doc.get("order"), "order"))
            wit = _need(doc, "colon_witnesses", list)
            return LinearQuotientOrder(ideal, order, tuple(_strings(w, "colon_witnesses") for w in wit))
        if kind == "SplitTree":
            variables = _strings(doc.get("variables"), "variables")
            return _split_from_dict(variables, _need(doc, "tree", dict))
        if kind == "BettiEvidence":
            per = _need(doc, "per_degree", list)
            if not all(isinstance(p, list) and len(p) == 2 and all(type(x) is int for x in p) for p in per):
                raise CertificateError("per_degree must be a list of [degree, regularity] pairs")
            failing = doc.get("failing_degree")
            reg = doc.get("regularity")
            for name, value in (("failing_degree", failing), ("regularity", reg)):
                if value is not None and type(value) is not int:
                    raise CertificateError(f"field {name!r} must be an integer or null")
            return BettiEvidence(
                ideal_from_dict(_need(doc, "ideal", dict)),
                _need(doc, "characteristic", int),
                tuple(tuple(p) for p in per),
                failing,
                _need(doc, "method", str),
                reg,
            )
        if kind == "FormulaEvidence":
            weights = _need(doc, "weights", list)
            if len(weights) != 3 or not all(type(w) is int for w in weights):
                raise CertificateError("weights must be three integers")
            return FormulaEvidence(
                _need(doc, "pattern", str),
                _need(doc, "k", int),
                tuple(weights),
                _need(doc, "predicted_regularity", int),
                _strings(doc.get("witness"), "witness"),
            )
        if kind == "Criterion4Report":
            pattern = certificate_from_dict(doc.get("pattern"))
            return Criterion4Report(
                _chordality_from_dict(_need(doc, "underlying_cochordal", dict)),
                _chordality_from_dict(_need(doc, "h_cochordal", dict)),
                pattern,
            )
        if kind == "PowerTransfer":
            parts = tuple(_strings(p, "parts") for p in _need(doc, "parts", list))
            return PowerTransfer(MultipartiteCertificate(parts), verdict_from_dict(_need(doc, "base", dict)))
    except (IdealError, OverflowError) as exc:
        raise CertificateError(f"bad ideal in {kind}: {exc}") from None
    raise CertificateError(f"unknown certificate type {kind!r}")


def verdict_from_dict(doc: Any) -> Verdict:
    if not isinstance(doc, dict):
        raise CertificateError("verdict must be an object")
    notes = doc.get("notes", [])
    return Verdict(
        _need(doc, "answer", str),
        _need(doc, "rule", str),
        certificate_from_dict(doc.get("certificate")),
        _strings(notes, "notes"),
        _need(doc, "k", int),
    )


# ---------------------------------------------------------------------------
# verification


def _type_name(cert: Any) -> str:
    if cert is None:
        return "none"
    if isinstance(cert, (SplitLeaf, SplitNode)):
        return "SplitTree"
    return type(cert).__name__


def _target_ideal(d: WeightedOrientedGraph, k: int) -> MonomialIdeal:
    base = edge_ideal(d)
    return base if k == 1 else power(base, k)


def _verify_chordality(cert: ChordalityCertificate, graph, label: str) -> list[str]:
    return [f"{label}: {p}" for p in cert.verify(graph)]


def _verify_structure(d: WeightedOrientedGraph, v: Verdict, options: DecideOptions) -> list[str]:
    cert = v.certificate
    rule = v.rule
    if isinstance(cert, PatternMatch):
        if not match_pattern(d, cert.pattern, cert.witness):
            return [f"pattern-mismatch: {list(cert.witness)} is not an induced {cert.pattern}"]
        return []
    if isinstance(cert, ChordalityCertificate):
        if v.answer == NO and cert.chordal:
            return ["chordality-answer-mismatch: a No verdict needs a chordless cycle"]
        graph = h_graph(d) if rule == "h-graph-not-cochordal" else underlying(d)
        return _verify_chordality(cert, complement(graph), "chordality-violation")
    if isinstance(cert, LinearQuotientOrder):
        if cert.ideal != _target_ideal(d, v.k):
            return ["ideal-mismatch: certificate ideal differs from the input ideal"]
        return [f"linear-quotient-violation: {p}" for p in cert.verify()]
    if isinstance(cert, (SplitLeaf, SplitNode)):
        if cert.ideal != _target_ideal(d, v.k):
            return ["ideal-mismatch: split tree root differs from the input ideal"]
        return verify_split_tree(cert)
    if isinstance(cert, BettiEvidence):
        if cert.ideal != _target_ideal(d, v.k):
            return ["ideal-mismatch: evidence ideal differs from the input ideal"]
        if cert.characteristic != options.characteristic:
            return [f"characteristic-mismatch: evidence at {cert.characteristic}, request at {options.characteristic}"]
        try:
            redo = is_componentwise_linear_oracle(
                cert.ideal, cert.characteristic, method=cert.method, paranoid=options.paranoid
            )
            if cert.per_degree != redo.per_degree:
                return [f"betti-recomputation-mismatch: per-degree {list(cert.per_degree)} != {list(redo.per_degree)}"]
            if cert.failing_degree != redo.failing_degree:
                return ["betti-recomputation-mismatch: failing degree"]
            if cert.regularity is not None and cert.regularity != regularity(cert.ideal, cert.characteristic):
                return ["betti-recomputation-mismatch: regularity"]
        except OracleError as exc:
            return [f"betti-recomputation-failed: {exc}"]
        if (v.answer == YES) != cert.componentwise_linear:
            return ["evidence-answer-mismatch: evidence does not support the answer"]
        return []
    if isinstance(cert, FormulaEvidence):
        if cert.k != v.k:
            return ["formula-k-mismatch: certificate k differs from the verdict k"]
        if not match_pattern(d, cert.pattern, cert.witness):
            return [f"pattern-mismatch: {list(cert.witness)} is not an induced {cert.pattern}"]
        ws = tuple(d.weight(x) for x in cert.witness)
        if ws != cert.weights:
            return ["formula-weights-mismatch: weights differ from the witness weights"]
        w1 = ws[0] if cert.pattern == "D3" else None
        if cert.predicted_regularity != pattern_power_regularity(cert.pattern, cert.k, ws[1], ws[2], w1=w1):
            return ["formula-value-mismatch: predicted regularity disagrees with the closed form"]
        if cert.predicted_regularity <= cert.linear_bound:
            return ["formula-not-obstructive: predicted regularity does not exceed the top generator degree"]
        return []
    if isinstance(cert, Criterion4Report):
        problems = _verify_chordality(cert.underlying_cochordal, complement(underlying(d)), "criterion4-underlying")
        problems += _verify_chordality(cert.h_cochordal, complement(h_graph(d)), "criterion4-h-graph")
        if not cert.holds:
            problems.append("criterion4-fails: report does not certify the criterion")
        return problems
    if isinstance(cert, PowerTransfer):
        problems = [f"multipartite-violation: {p}" for p in cert.multipartite.verify(underlying(d))]
        if cert.multipartite.r < 2:
            problems.append("multipartite-violation: fewer than two parts")
        if cert.base.k != 1:
            problems.append("transfer-base-k: base verdict must be for k = 1")
        if cert.base.answer != v.answer:
            problems.append("transfer-answer-mismatch: power answer differs from base answer")
        return problems + [f"base: {p}" for p in _verify(d, cert.base, options, canonical=False)]
    return []


def _diff(a: Any, b: Any, path: str = "") -> str | None:
    if isinstance(a, dict) and isinstance(b, dict):
        for key in sorted(set(a) | set(b)):
            if key == "notes" and not path:  # free text at the verdict level
                continue
            found = _diff(a.get(key), b.get(key), f"{path}.{key}" if path else key)
            if found:
                return found
        return None
    if isinstance(a, list) and isinstance(b, list) and len(a) == len(b):
        for i, (x, y) in enumerate(zip(a, b)):
            found = _diff(x, y, f"{path}[{i}]")
            if found:
                return found
        return None
    return None if a == b and type(a) is type(b) else (path or "<root>")


def _verify(
    d: WeightedOrientedGraph, v: Verdict, options: DecideOptions, *, canonical: bool, raw: dict | None = None
) -> list[str]:
    if v.rule not in RULES:
        return [f"unknown-rule: {v.rule!r}"]
    answers, types = RULES[v.rule]
    if v.answer not in (YES, NO, UNKNOWN):
        return [f"unknown-answer: {v.answer!r}"]
    if v.answer not in answers:
        return [f"rule-answer-mismatch: rule {v.rule} cannot justify {v.answer}"]
    if _type_name(v.certificate) not in types:
        return [f"certificate-type-mismatch: rule {v.rule} does not accept {_type_name(v.certificate)}"]
    if v.k < 1:
        return ["invalid-k: k must be >= 1"]
    problems = _verify_structure(d, v, options)
    if problems or not canonical:
        return problems
    # compare the document as submitted, so reordered or re-tagged fields that
    # parse to the same objects are still caught
    expected = json.loads(json.dumps(verdict_to_dict(decide_power(d, v.k, options))))
    where = _diff(raw if raw is not None else verdict_to_dict(v), expected)
    if where is not None:
        return [f"non-canonical-certificate: field {where} differs from the recomputed verdict"]
    return []


def verify_verdict(
    d: WeightedOrientedGraph, doc: dict | Verdict, options: DecideOptions | None = None, *, k: int | None = None
) -> list[str]:
    """Named violations of a serialized (or in-memory) verdict; empty if it checks out.

    ``k`` is the requested power; a verdict answering a different power is rejected.
    """
    opts = options or DecideOptions()
    try:
        v = doc if isinstance(doc, Verdict) else verdict_from_dict(doc)
    except CertificateError as exc:
        return [f"malformed-certificate: {exc}"]
    except (TypeError, ValueError, KeyError) as exc:
        return [f"malformed-certificate: {exc}"]
    if k is not None and v.k != k:
        return [f"k-mismatch: verdict answers k={v.k} but k={k} was requested"]
    try:
        raw = None if isinstance(doc, Verdict) else json.loads(json.dumps(doc))
        return _verify(d, v, opts, canonical=True, raw=raw)
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        return [f"malformed-certificate: {type(exc).__name__}: {exc}"]
