"""Exact monomial ideal arithmetic over a fixed, ordered variable universe.

Monomials are exponent vectors (a ``tuple`` subclass) so they hash and compare
cheaply; an ideal stores its minimal generators in canonical order: by degree,
then by descending exponent vector (so ``a^2 b`` precedes ``a b c``).
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graphs import WeightedOrientedGraph

__all__ = [
    "IdealError",
    "Monomial",
    "MonomialIdeal",
    "PolarizationMap",
    "MAX_EXPONENT",
    "canonical_key",
    "edge_ideal",
    "minimalize",
    "colon",
    "component",
    "product",
    "power",
    "polarize",
    "membership",
    "restrict",
    "variable_ideal",
    "format_monomial",
    "parse_monomial",
    "parse_ideal",
    "ideal_to_dict",
    "ideal_from_dict",
    "load_ideal",
]

MAX_EXPONENT = 2**31 - 1


class IdealError(ValueError):
    pass


class Monomial(tuple):
    """Exponent vector over the ideal's variable universe."""

    __slots__ = ()

    def __new__(cls, exps: Iterable[int]):
        exps = tuple(exps)
        for e in exps:
            if e < 0:
                raise IdealError(f"negative exponent {e}")
            if e > MAX_EXPONENT:
                raise OverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")
        return super().__new__(cls, exps)

    @classmethod
    def one(cls, nvars: int) -> "Monomial":
        return cls((0,) * nvars)

    @classmethod
    def var(cls, nvars: int, i: int, e: int = 1) -> "Monomial":
        exps = [0] * nvars
        exps[i] = e
        return cls(exps)

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def exponents(self) -> dict[int, int]:
        return {i: e for i, e in enumerate(self) if e}

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self) if e)

    def divides(self, other: Sequence[int]) -> bool:
        return all(a <= b for a, b in zip(self, other))

    def times(self, other: Sequence[int]) -> "Monomial":
        return Monomial(a + b for a, b in zip(self, other))

    def lcm(self, other: Sequence[int]) -> "Monomial":
        return Monomial(max(a, b) for a, b in zip(self, other))

    def gcd(self, other: Sequence[int]) -> "Monomial":
        return Monomial(min(a, b) for a, b in zip(self, other))

    def colon(self, other: Sequence[int]) -> "Monomial":
        """``self / gcd(self, other)``."""
        return Monomial(max(a - b, 0) for a, b in zip(self, other))

    def is_squarefree(self) -> bool:
        return all(e <= 1 for e in self)


def canonical_key(m: Sequence[int]) -> tuple:
    return (sum(m), tuple(-e for e in m))


@dataclass(frozen=True)
class MonomialIdeal:
    """Minimally generated monomial ideal; build through :func:`minimalize`."""

    variables: tuple[str, ...]
    generators: tuple[Monomial, ...]

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].degree == 0

    def degrees(self) -> list[int]:
        return sorted({g.degree for g in self.generators})

    def is_equigenerated(self) -> bool:
        return len(self.degrees()) <= 1

    def fmt(self, m: Sequence[int]) -> str:
        return format_monomial(self.variables, m)

    def __str__(self) -> str:
        return "(" + ", ".join(self.fmt(g) for g in self.generators) + ")"

    def monomial(self, text: str) -> Monomial:
        return parse_monomial(self.variables, text)


def minimalize(variables: Sequence[str], gens: Iterable[Sequence[int]]) -> MonomialIdeal:
    variables = tuple(variables)
    ordered = sorted({Monomial(g) for g in gens}, key=canonical_key)
    if any(len(g) != len(variables) for g in ordered):
        raise IdealError("monomial length does not match the variable universe")
    if len(ordered) > 16:
        # g is minimal iff it is divisible by no other (distinct) generator
        a = np.asarray(ordered, dtype=np.int64)
        divisors = (a[:, None, :] <= a[None, :, :]).all(axis=2).sum(axis=0)
        return MonomialIdeal(variables, tuple(g for g, c in zip(ordered, divisors.tolist()) if c == 1))
    kept: list[Monomial] = []
    for g in ordered:
        if not any(h.divides(g) for h in kept):
            kept.append(g)
    return MonomialIdeal(variables, tuple(kept))


def variable_ideal(variables: Sequence[str], chosen: Iterable[str]) -> MonomialIdeal:
    variables = tuple(variables)
    pos = {v: i for i, v in enumerate(variables)}
    return minimalize(variables, [Monomial.var(len(variables), pos[v]) for v in chosen])


def edge_ideal(d: WeightedOrientedGraph) -> MonomialIdeal:
    """I(D): one generator ``t * h^w(h)`` per arc ``(t, h)``."""
    n = d.n
    idx = d.index
    gens = []
    for t, h in d.arcs:
        exps = [0] * n
        exps[idx[t]] += 1
        exps[idx[h]] += d.weight(h)
        gens.append(exps)
    return minimalize(d.vertices, gens)


def membership(ideal: MonomialIdeal, m: Sequence[int]) -> bool:
    return any(g.divides(m) for g in ideal.generators)


def colon(ideal: MonomialIdeal, g: Sequence[int]) -> MonomialIdeal:
    return minimalize(ideal.variables, [u.colon(g) for u in ideal.generators])


def restrict(ideal: MonomialIdeal, keep: Iterable[str]) -> MonomialIdeal:
    """Generators supported on ``keep``, as an ideal over those variables only.

    Every Betti number of the result in a multidegree is a Betti number of
    ``ideal`` in the same multidegree, so obstructions found here lift.
    """
    keep = set(keep)
    unknown = keep - set(ideal.variables)
    if unknown:
        raise IdealError(f"unknown variables {sorted(unknown)}")
    cols = [i for i, v in enumerate(ideal.variables) if v in keep]
    outside = [i for i, v in enumerate(ideal.variables) if v not in keep]
    gens = [[g[i] for i in cols] for g in ideal.generators if not any(g[i] for i in outside)]
    return minimalize([ideal.variables[i] for i in cols], gens)


def _monomials_of_degree(nvars: int, d: int):
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        yield exps


def component(ideal: MonomialIdeal, d: int) -> MonomialIdeal:
    """The ideal generated by the degree-``d`` part of ``ideal``."""
    if d < 0:
        raise IdealError("degree must be nonnegative")
    n = ideal.nvars
    gens = []
    for u in ideal.generators:
        if u.degree > d:
            continue
        for m in _monomials_of_degree(n, d - u.degree):
            gens.append(u.times(m))
    return minimalize(ideal.variables, gens)


def _check_universe(a: MonomialIdeal, b: MonomialIdeal) -> None:
    if a.variables != b.variables:
        raise IdealError("ideals live over different variable universes")


def product(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _check_universe(a, b)
    return minimalize(a.variables, [u.times(v) for u in a.generators for v in b.generators])


def power(ideal: MonomialIdeal, k: int) -> MonomialIdeal:
    if k < 1:
        raise IdealError("power exponent must be >= 1")
    result = ideal
    for _ in range(k - 1):
        result = product(result, ideal)
    return result


@dataclass(frozen=True)
class PolarizationMap:
    """``forward[(v, i)]`` names the ``i``-th (1-based) occurrence variable of ``v``."""

    forward: dict
    origin: MonomialIdeal

    def apply(self, m: Sequence[int], target: Sequence[str]) -> Monomial:
        pos = {name: i for i, name in enumerate(target)}
        exps = [0] * len(target)
        for vi, e in enumerate(m):
            for occ in range(1, e + 1):
                exps[pos[self.forward[(self.origin.variables[vi], occ)]]] = 1
        return Monomial(exps)


def polarize(ideal: MonomialIdeal) -> tuple[MonomialIdeal, PolarizationMap]:
    top = [max((g[i] for g in ideal.generators), default=0) for i in range(ideal.nvars)]
    forward = {}
    names = []
    for v, e in zip(ideal.variables, top):
        for occ in range(1, e + 1):
            name = f"{v}_{occ}"
            forward[(v, occ)] = name
            names.append(name)
    pmap = PolarizationMap(forward, ideal)
    gens = [pmap.apply(g, names) for g in ideal.generators]
    return minimalize(names, gens), pmap


# ---------------------------------------------------------------------------
# text format: generators look like ``x1*x2^3``; ``1`` is the unit monomial


def format_monomial(variables: Sequence[str], m: Sequence[int]) -> str:
    parts = []
    for v, e in zip(variables, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_monomial(variables: Sequence[str], text: str) -> Monomial:
    pos = {v: i for i, v in enumerate(variables)}
    exps = [0] * len(variables)
    text = text.strip()
    if text == "1":
        return Monomial(exps)
    for factor in text.split("*"):
        factor = factor.strip()
        match = _FACTOR.match(factor)
        if not match:
            raise IdealError(f"cannot parse factor {factor!r} in {text!r}")
        name, e = match.group(1), match.group(2)
        if name not in pos:
            raise IdealError(f"variable {name!r} in {text!r} is not in the declared universe")
        e = 1 if e is None else int(e)
        if e <= 0:
            raise IdealError(f"exponent of {name!r} in {text!r} must be positive")
        exps[pos[name]] += e
    return Monomial(exps)


def ideal_to_dict(ideal: MonomialIdeal) -> dict:
    return {
        "variables": list(ideal.variables),
        "generators": [ideal.fmt(g) for g in ideal.generators],
    }


def ideal_from_dict(doc: object) -> MonomialIdeal:
    if not isinstance(doc, dict) or "variables" not in doc or "generators" not in doc:
        raise IdealError("ideal document needs 'variables' and 'generators' fields")
    variables = doc["variables"]
    if len(set(variables)) != len(variables) or not all(
        isinstance(v, str) and _FACTOR.match(v) and "^" not in v for v in variables
    ):
        raise IdealError("variables must be distinct identifiers")
    return minimalize(variables, [parse_monomial(variables, g) for g in doc["generators"]])


def parse_ideal(text: str) -> MonomialIdeal:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        token = exc.doc[exc.pos:exc.pos + 12].split("\n")[0]
        raise IdealError(f"line {exc.lineno}, column {exc.colno}: {exc.msg} near {token!r}") from None
    return ideal_from_dict(doc)


def load_ideal(path: str) -> MonomialIdeal:
    with open(path, encoding="utf-8") as fh:
        return parse_ideal(fh.read())
