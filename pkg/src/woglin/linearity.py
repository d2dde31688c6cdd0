"""Certificate-producing deciders for linear quotients, vertex splittability and
componentwise linearity of I(D) and its powers."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .graphs import (
    ChordalityCertificate,
    MultipartiteCertificate,
    PatternMatch,
    WeightedOrientedGraph,
    complete_multipartite,
    find_forbidden,
    h_graph,
    is_chordal,
    is_cochordal,
    is_house_free,
    underlying,
)
from .ideals import Monomial, MonomialIdeal, edge_ideal, minimalize, power
from .oracle import DEFAULT_CHARACTERISTIC, BettiEvidence, ComplexTooLarge, is_componentwise_linear_oracle

__all__ = [
    "SearchCapped",
    "TheoremViolation",
    "LinearQuotientOrder",
    "SplitLeaf",
    "SplitNode",
    "SplitTree",
    "Criterion4Report",
    "FormulaEvidence",
    "PowerTransfer",
    "Verdict",
    "DecideOptions",
    "YES",
    "NO",
    "UNKNOWN",
    "has_linear_quotients",
    "check_order",
    "stratified_order_check",
    "is_vertex_splittable",
    "verify_split_tree",
    "criterion4",
    "decide_componentwise_linear",
    "decide_power",
    "pattern_power_regularity",
    "square_lq_transfer_check",
    "LQ_CAP",
    "SPLIT_CAP",
]

YES, NO, UNKNOWN = "Yes", "No", "Unknown"
LQ_CAP = 24
SPLIT_CAP = 20


class SearchCapped(RuntimeError):
    """The ideal has more generators than the configured search cap."""

    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"{what} search capped: {count} generators exceed cap {cap}")
        self.count = count
        self.cap = cap


class TheoremViolation(AssertionError):
    """A characterisation promised a certificate that the search could not find."""


# ---------------------------------------------------------------------------
# linear quotients


@dataclass(frozen=True)
class LinearQuotientOrder:
    """``colon_witnesses[i]`` are the variables generating (u_1..u_{i}) : u_{i+1};
    the entry for the first generator is empty."""

    ideal: MonomialIdeal
    order: tuple[Monomial, ...]
    colon_witnesses: tuple[tuple[str, ...], ...]

    def verify(self) -> list[str]:
        ideal = self.ideal
        if sorted(self.order) != sorted(ideal.generators):
            return ["order is not a permutation of the minimal generators"]
        if len(self.colon_witnesses) != len(self.order):
            return ["one witness set per generator is required"]
        if self.colon_witnesses and self.colon_witnesses[0]:
            return ["first generator must have an empty witness set"]
        pos = {v: i for i, v in enumerate(ideal.variables)}
        for i in range(1, len(self.order)):
            u = self.order[i]
            quotients = minimalize(ideal.variables, [p.colon(u) for p in self.order[:i]])
            wanted = self.colon_witnesses[i]
            if any(v not in pos for v in wanted):
                return [f"position {i}: unknown witness variable"]
            expected = minimalize(ideal.variables, [Monomial.var(ideal.nvars, pos[v]) for v in wanted])
            if quotients != expected:
                return [f"position {i}: colon ideal {quotients} is not generated by {list(wanted)}"]
        return []


class _LQTables:
    def __init__(self, gens: Sequence[Monomial]):
        self.gens = gens
        n = len(gens)
        g = np.asarray(gens, dtype=np.int64).reshape(n, -1)
        q = np.maximum(g[:, None, :] - g[None, :, :], 0)  # q[i, j] = u_i : u_j
        support = (q > 0) @ (np.int64(1) << np.arange(g.shape[1], dtype=np.int64))
        linear = np.where(q.sum(axis=2) == 1, support, -1)
        np.fill_diagonal(support, 0)
        np.fill_diagonal(linear, -1)
        self.support = support.tolist()
        self.linear = linear.tolist()

    def witness(self, prefix: Sequence[int], j: int) -> int | None:
        """Variable mask generating (prefix) : u_j, or None if not linear."""
        lin = 0
        for i in prefix:
            m = self.linear[i][j]
            if m >= 0:
                lin |= m
        for i in prefix:
            if not self.support[i][j] & lin:
                return None
        return lin


def _names(variables: Sequence[str], mask: int) -> tuple[str, ...]:
    return tuple(v for k, v in enumerate(variables) if mask >> k & 1)


def check_order(ideal: MonomialIdeal, order: Sequence[Monomial]) -> LinearQuotientOrder | None:
    """The certificate for ``order`` if it is a linear-quotient order, else None."""
    index = {g: i for i, g in enumerate(ideal.generators)}
    if sorted(map(tuple, order)) != sorted(map(tuple, ideal.generators)):
        return None
    tables = _LQTables(ideal.generators)
    seq = [index[Monomial(g)] for g in order]
    witnesses = [()]
    for p in range(1, len(seq)):
        w = tables.witness(seq[:p], seq[p])
        if w is None:
            return None
        witnesses.append(_names(ideal.variables, w))
    return LinearQuotientOrder(ideal, tuple(ideal.generators[i] for i in seq), tuple(witnesses))


def has_linear_quotients(
    ideal: MonomialIdeal, *, cap: int = LQ_CAP, prefix: Sequence[Monomial] = ()
) -> LinearQuotientOrder | None:
    """Exhaustive backtracking over degree-increasing orders.

    Within a degree block candidates are tried in canonical generator order, so
    the returned order is deterministic. ``prefix`` forces the first generators
    (it must itself be a valid start). Raises :class:`SearchCapped` when the
    ideal has more than ``cap`` generators.
    """
    gens = ideal.generators
    n = len(gens)
    if n > cap:
        raise SearchCapped("linear-quotient", n, cap)
    if n == 0:
        return LinearQuotientOrder(ideal, (), ())
    tables = _LQTables(gens)
    degrees = [g.degree for g in gens]
    full = (1 << n) - 1
    failed: set[int] = set()
    order: list[int] = []
    witnesses: list[int] = []

    position = {g: j for j, g in enumerate(gens)}
    chosen = 0
    for g in prefix:
        j = position.get(Monomial(g))
        if j is None or chosen >> j & 1:
            raise ValueError("prefix must list distinct minimal generators")
        w = tables.witness(order, j) if order else 0
        if w is None:
            return None
        order.append(j)
        witnesses.append(w)
        chosen |= 1 << j

    def extend(chosen: int) -> bool:
        if chosen == full:
            return True
        if chosen in failed:
            return False
        low = min(degrees[j] for j in range(n) if not chosen >> j & 1)
        for j in range(n):
            if chosen >> j & 1 or degrees[j] != low:
                continue
            w = tables.witness(order, j) if order else 0
            if w is None:
                continue
            order.append(j)
            witnesses.append(w)
            if extend(chosen | 1 << j):
                return True
            order.pop()
            witnesses.pop()
        failed.add(chosen)
        return False

    limit = sys.getrecursionlimit()
    if limit < n + 100:
        sys.setrecursionlimit(n + 100)
    if not extend(chosen):
        return None
    return LinearQuotientOrder(
        ideal,
        tuple(gens[j] for j in order),
        tuple(_names(ideal.variables, w) for w in witnesses),
    )


def stratified_order_check(ideal: MonomialIdeal, *, cap: int = LQ_CAP) -> LinearQuotientOrder | None:
    """Search for a linear-quotient order whose first block is a linear-quotient
    order of the degree-2 generators (fixed first, then the rest is searched).

    Returns None when no such order exists.
    """
    low = minimalize(ideal.variables, [g for g in ideal.generators if g.degree == 2])
    head = has_linear_quotients(low, cap=cap)
    if head is None:
        return None
    return has_linear_quotients(ideal, cap=cap, prefix=head.order)


# ---------------------------------------------------------------------------
# vertex splittability


@dataclass(frozen=True)
class SplitLeaf:
    ideal: MonomialIdeal
    kind: str  # "monomial" | "zero" | "unit"


@dataclass(frozen=True)
class SplitNode:
    """I = x*I1 + I2 with ``left`` the tree for I1 and ``right`` for I2."""

    ideal: MonomialIdeal
    variable: str
    left: "SplitTree"
    right: "SplitTree"


SplitTree = Union[SplitLeaf, SplitNode]


def _leaf_kind(ideal: MonomialIdeal) -> str | None:
    if ideal.is_zero():
        return "zero"
    if ideal.is_unit():
        return "unit"
    if len(ideal.generators) == 1:
        return "monomial"
    return None


def _split_parts(ideal: MonomialIdeal, x: int):
    gens = ideal.generators
    i1 = minimalize(ideal.variables, [g.colon(Monomial.var(ideal.nvars, x)) for g in gens if g[x]])
    i2 = minimalize(ideal.variables, [g for g in gens if not g[x]])
    return i1, i2


def _contained(a: MonomialIdeal, b: MonomialIdeal) -> bool:
    return all(any(h.divides(g) for h in b.generators) for g in a.generators)


def is_vertex_splittable(ideal: MonomialIdeal, *, cap: int = SPLIT_CAP) -> SplitTree | None:
    """A split tree if ``ideal`` is vertex splittable, else None.

    Every variable is tried at every node (canonical order); results are
    memoised on the canonical generator tuple.
    """
    if len(ideal.generators) > cap:
        raise SearchCapped("split-tree", len(ideal.generators), cap)
    memo: dict[tuple, SplitTree | None] = {}

    def solve(cur: MonomialIdeal) -> SplitTree | None:
        key = cur.generators
        if key in memo:
            return memo[key]
        kind = _leaf_kind(cur)
        if kind is not None:
            memo[key] = SplitLeaf(cur, kind)
            return memo[key]
        memo[key] = None
        for x in range(cur.nvars):
            divisible = [g for g in cur.generators if g[x]]
            if not divisible or any(g[x] > 1 for g in divisible):
                continue
            i1, i2 = _split_parts(cur, x)
            if not _contained(i2, i1):
                continue
            left = solve(i1)
            if left is None:
                continue
            right = solve(i2)
            if right is None:
                continue
            memo[key] = SplitNode(cur, cur.variables[x], left, right)
            break
        return memo[key]

    return solve(ideal)


def verify_split_tree(tree: SplitTree) -> list[str]:
    """Named violations of the splitting conditions, empty if the tree is valid."""
    if isinstance(tree, SplitLeaf):
        kind = _leaf_kind(tree.ideal)
        if kind is None:
            return [f"leaf-not-trivial: {tree.ideal} is not a single monomial, zero or unit"]
        if kind != tree.kind:
            return [f"leaf-kind-mismatch: leaf labelled {tree.kind!r} but ideal is {kind!r}"]
        return []
    ideal = tree.ideal
    if tree.variable not in ideal.variables:
        return [f"unknown-split-variable: {tree.variable!r}"]
    x = ideal.variables.index(tree.variable)
    i1, i2 = tree.left.ideal, tree.right.ideal
    if i1.variables != ideal.variables or i2.variables != ideal.variables:
        return ["variable-universe-mismatch: children live over a different variable list"]
    if any(g[x] for g in i1.generators):
        return [f"split-variable-in-I1: a generator of I1 is divisible by {tree.variable}"]
    if any(g[x] for g in i2.generators):
        return [f"split-variable-in-I2: a generator of I2 is divisible by {tree.variable}"]
    xi1 = [g.times(Monomial.var(ideal.nvars, x)) for g in i1.generators]
    if sorted(xi1 + list(i2.generators)) != sorted(ideal.generators) or set(xi1) & set(i2.generators):
        return [f"generator-partition: G(I) != G({tree.variable}*I1) + G(I2)"]
    if not _contained(i2, i1):
        return ["I2-not-contained-in-I1: a generator of I2 is not in I1"]
    return verify_split_tree(tree.left) + verify_split_tree(tree.right)


# ---------------------------------------------------------------------------
# criterion (4)


@dataclass(frozen=True)
class Criterion4Report:
    """Co-chordality certificates of G and H = H(I(D)_<2>) plus the pattern scan."""

    underlying_cochordal: ChordalityCertificate
    h_cochordal: ChordalityCertificate
    pattern: PatternMatch | None

    @property
    def holds(self) -> bool:
        return self.underlying_cochordal.chordal and self.h_cochordal.chordal and self.pattern is None


def criterion4(d: WeightedOrientedGraph) -> Criterion4Report:
    return Criterion4Report(
        is_cochordal(underlying(d)),
        is_cochordal(h_graph(d)),
        find_forbidden(d),
    )


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class FormulaEvidence:
    """Induced pattern together with the closed-form regularity of its k-th power."""

    pattern: str
    k: int
    weights: tuple[int, int, int]
    predicted_regularity: int
    witness: tuple[str, ...]

    @property
    def linear_bound(self) -> int:
        """Degree of the top component of I(pattern)^k; exceeding it rules out linearity."""
        weighted = self.weights if self.pattern == "D3" else self.weights[1:]
        return self.k * (max(weighted) + 1)


@dataclass(frozen=True)
class PowerTransfer:
    """Power verdict for a complete multipartite D, transferred from the verdict on I(D)."""

    multipartite: MultipartiteCertificate
    base: "Verdict"


Certificate = Union[
    PatternMatch,
    ChordalityCertificate,
    LinearQuotientOrder,
    SplitLeaf,
    SplitNode,
    BettiEvidence,
    FormulaEvidence,
    Criterion4Report,
    PowerTransfer,
    None,
]


@dataclass(frozen=True)
class Verdict:
    answer: str
    rule: str
    certificate: Certificate = None
    notes: tuple[str, ...] = ()
    k: int = 1


@dataclass(frozen=True)
class DecideOptions:
    use_oracle: bool = True
    characteristic: int = DEFAULT_CHARACTERISTIC
    lq_cap: int = LQ_CAP
    split_cap: int = SPLIT_CAP
    paranoid: bool = False
    oracle_method: str = "truncation"


def _class_membership(d: WeightedOrientedGraph) -> dict[str, object]:
    g = underlying(d)
    multi = complete_multipartite(g)
    return {
        "chordal": is_chordal(g).chordal,
        "house_free": is_house_free(g) is None,
        "complete_multipartite": multi is not None and multi.r >= 2,
    }


def _oracle_verdict(ideal: MonomialIdeal, opts: DecideOptions, notes: list[str], k: int) -> Verdict:
    try:
        ev = is_componentwise_linear_oracle(
            ideal, opts.characteristic, method=opts.oracle_method, paranoid=opts.paranoid, with_regularity=True
        )
    except ComplexTooLarge as exc:
        return Verdict(UNKNOWN, "undecided", None, tuple(notes + [f"oracle aborted: {exc}"]), k)
    answer = YES if ev.componentwise_linear else NO
    return Verdict(answer, "oracle", ev, tuple(notes), k)


def _fallback(ideal: MonomialIdeal, opts: DecideOptions, notes: list[str], k: int) -> Verdict:
    if ideal.is_zero():
        return Verdict(YES, "zero-ideal", None, tuple(notes), k)
    try:
        order = has_linear_quotients(ideal, cap=opts.lq_cap)
    except SearchCapped as exc:
        notes.append(str(exc))
        order = None
    else:
        if order is not None:
            return Verdict(YES, "linear-quotients", order, tuple(notes), k)
        notes.append("no degree-increasing linear-quotient order (not decisive)")
    if opts.use_oracle:
        return _oracle_verdict(ideal, opts, notes, k)
    reason = "sufficient conditions inconclusive and oracle disabled"
    return Verdict(UNKNOWN, "undecided", None, tuple(notes + [reason]), k)


def decide_componentwise_linear(d: WeightedOrientedGraph, options: DecideOptions | None = None) -> Verdict:
    """Decide whether I(D) is componentwise linear.

    Cheap graph obstructions come first; inside the chordal, house-free and
    complete multipartite classes criterion (4) is decisive and the verdict
    carries a split tree. Outside them, linear quotients (sufficient) and the
    homological oracle are consulted.
    """
    opts = options or DecideOptions()
    ideal = edge_ideal(d)
    pattern = find_forbidden(d)
    if pattern is not None:
        return Verdict(NO, "forbidden-pattern", pattern)
    g_cert = is_cochordal(underlying(d))
    if not g_cert.chordal:
        return Verdict(NO, "underlying-not-cochordal", g_cert)
    h_cert = is_cochordal(h_graph(d))
    if not h_cert.chordal:
        return Verdict(NO, "h-graph-not-cochordal", h_cert)

    classes = _class_membership(d)
    rule = None
    if classes["house_free"]:
        rule = "house-free-characterization"
    elif classes["complete_multipartite"]:
        rule = "multipartite-characterization"
    elif classes["chordal"]:
        rule = "chordal-characterization"
    if rule is not None:
        notes = [f"{name}={value}" for name, value in classes.items()]
        try:
            tree = is_vertex_splittable(ideal, cap=opts.split_cap)
        except SearchCapped as exc:
            notes.append(str(exc))
        else:
            if tree is None:
                raise TheoremViolation(f"criterion (4) holds but {ideal} has no split tree")
            return Verdict(YES, rule, tree, tuple(notes))
        try:
            order = has_linear_quotients(ideal, cap=opts.lq_cap)
        except SearchCapped as exc:
            notes.append(str(exc))
            order = None
        if order is not None:
            return Verdict(YES, rule, order, tuple(notes))
        return Verdict(YES, rule, Criterion4Report(g_cert, h_cert, None), tuple(notes))
    return _fallback(ideal, opts, ["criterion (4) holds but the graph contains an induced house"], 1)


def pattern_power_regularity(pattern: str, k: int, w2: int, w3: int, *, w1: int | None = None) -> int:
    """Closed-form reg(I(pattern)^k) for the forbidden three-vertex patterns.

    ``w2``/``w3`` weight the two weighted vertices of D1, D2, D4 (and two of
    the three cycle vertices of D3, whose third weight ``w1`` defaults to 2).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if w2 < 2 or w3 < 2:
        raise ValueError("pattern weights must be >= 2")
    if pattern == "D3":
        w1 = 2 if w1 is None else w1
        if w1 < 2:
            raise ValueError("D3 needs all three weights >= 2")
        w = max(w1, w2, w3)
        return (w1 + w2 + w3) - 3 + 1 + (k - 1) * (w + 1)
    w = max(w2, w3)
    if pattern == "D1":
        return (1 + w2 + w3) - 1 + (k - 1) * (w + 1)
    if pattern in ("D2", "D4"):
        return (k - 1) * (w + 1) + w2 + w3
    raise ValueError(f"unknown pattern {pattern!r}")


def _formula_evidence(d: WeightedOrientedGraph, match: PatternMatch, k: int) -> FormulaEvidence:
    ws = tuple(d.weight(v) for v in match.witness)
    w1 = ws[0] if match.pattern == "D3" else None
    predicted = pattern_power_regularity(match.pattern, k, ws[1], ws[2], w1=w1)
    return FormulaEvidence(match.pattern, k, ws, predicted, match.witness)


def decide_power(d: WeightedOrientedGraph, k: int, options: DecideOptions | None = None) -> Verdict:
    """Decide whether I(D)^k is componentwise linear."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return decide_componentwise_linear(d, options)
    opts = options or DecideOptions()
    match = find_forbidden(d)
    if match is not None:
        return Verdict(NO, "forbidden-pattern-all-powers", _formula_evidence(d, match, k), k=k)
    g = underlying(d)
    multi = complete_multipartite(g)
    if multi is not None and multi.r >= 2:
        base = decide_componentwise_linear(d, opts)
        notes = []
        if base.answer == YES and k > 2:
            notes.append("k > 2: answer follows the power equivalence for complete multipartite graphs, not a direct computation")
        return Verdict(base.answer, "multipartite-power-equivalence", PowerTransfer(multi, base), tuple(notes), k)
    if is_house_free(g) is None and is_cochordal(g).chordal and is_cochordal(h_graph(d)).chordal:
        base = decide_componentwise_linear(d, opts)
        if base.answer == NO:
            return Verdict(NO, "house-free-power-obstruction", base.certificate, k=k)
    notes = ["no graph-level shortcut applies; computing the power"]
    return _fallback(power(edge_ideal(d), k), opts, notes, k)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransferReport:
    first: LinearQuotientOrder | None
    second: LinearQuotientOrder | None
    notes: tuple[str, ...] = field(default=())

    @property
    def violation(self) -> bool:
        return self.first is not None and self.second is None and not self.capped

    @property
    def capped(self) -> bool:
        return any("capped" in n for n in self.notes)


def square_lq_transfer_check(d: WeightedOrientedGraph, *, cap: int = 200) -> TransferReport:
    """Linear quotients of I(D) must carry over to I(D)^2 for complete multipartite D."""
    multi = complete_multipartite(underlying(d))
    if multi is None or multi.r < 2:
        raise ValueError("square_lq_transfer_check needs a complete multipartite graph")
    ideal = edge_ideal(d)
    notes = []
    first = second = None
    try:
        first = has_linear_quotients(ideal, cap=cap)
    except SearchCapped as exc:
        notes.append(str(exc))
    if first is None and not notes:
        notes.append("I(D) has no linear quotients; transfer holds vacuously")
        return TransferReport(None, None, tuple(notes))
    try:
        second = has_linear_quotients(power(ideal, 2), cap=cap)
    except SearchCapped as exc:
        notes.append(str(exc))
    return TransferReport(first, second, tuple(notes))


__all__ += ["TransferReport", "Certificate"]
