"""Homological ground truth for monomial ideals.

Graded Betti numbers come from upper Koszul simplicial complexes,

    beta_{i,b}(I) = dim H~_{i-1}(K^b(I)),   K^b(I) = {W squarefree : x^b / x^W in I},

evaluated at every multidegree ``b`` of the lcm lattice of the generators.
Homology is computed by exact elimination over GF(p) or Q.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .ideals import (
    IdealError,
    Monomial,
    MonomialIdeal,
    component,
    polarize,
    power,
)

__all__ = [
    "OracleError",
    "ComplexTooLarge",
    "SimplicialComplex",
    "BettiTable",
    "BettiEvidence",
    "FormulaReport",
    "DEFAULT_CHARACTERISTIC",
    "FACE_CAP",
    "upper_koszul",
    "reduced_homology_ranks",
    "lcm_lattice",
    "betti_table",
    "regularity",
    "has_linear_resolution",
    "is_componentwise_linear_oracle",
    "formula_vs_oracle",
    "matrix_rank",
]

DEFAULT_CHARACTERISTIC = 2
FACE_CAP = 200_000


class OracleError(ValueError):
    pass


class ComplexTooLarge(OracleError):
    pass


def _check_char(char: int) -> None:
    if char < 0 or char == 1 or (char > 1 and any(char % p == 0 for p in range(2, int(char**0.5) + 1))):
        raise OracleError(f"characteristic must be 0 or a prime, got {char}")


# ---------------------------------------------------------------------------
# linear algebra


def matrix_rank(rows: Sequence[Sequence[int]], char: int) -> int:
    """Rank of an integer matrix over GF(char) (char prime) or Q (char 0)."""
    if not rows:
        return 0
    if char == 2:
        return _rank_gf2([sum(1 << j for j, x in enumerate(r) if x % 2) for r in rows])
    if char == 0:
        mat = [[Fraction(x) for x in r] for r in rows]
        zero = Fraction(0)
    else:
        mat = [[x % char for x in r] for r in rows]
        zero = 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != zero), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        prow = mat[rank]
        if char == 0:
            inv = 1 / prow[col]
        else:
            inv = pow(prow[col], char - 2, char)
        for i in range(rank + 1, len(mat)):
            f = mat[i][col]
            if f != zero:
                row = mat[i]
                if char == 0:
                    f = f * inv
                    mat[i] = [a - f * b for a, b in zip(row, prow)]
                else:
                    f = f * inv % char
                    mat[i] = [(a - f * b) % char for a, b in zip(row, prow)]
        rank += 1
        if rank == len(mat):
            break
    return rank


def _rank_gf2(rows: list[int]) -> int:
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                break
    return len(basis)


def _homology_of_faces(faces: list[int], nground: int, char: int) -> tuple[int, ...]:
    """Reduced homology ranks (dims -1, 0, 1, ...) of a complex given as face bitmasks."""
    if not faces:
        return ()
    by_dim: dict[int, list[int]] = {}
    for f in faces:
        by_dim.setdefault(f.bit_count() - 1, []).append(f)
    top = max(by_dim)
    index = {d: {f: i for i, f in enumerate(fs)} for d, fs in by_dim.items()}
    boundary_rank = {}
    for d in range(0, top + 1):
        fs = by_dim.get(d, [])
        lower = index.get(d - 1, {})
        if not fs or not lower:
            boundary_rank[d] = 0
            continue
        if char == 2:
            rows = []
            for f in fs:
                r = 0
                bits = f
                while bits:
                    low = bits & -bits
                    r |= 1 << lower[f ^ low]
                    bits ^= low
                rows.append(r)
            boundary_rank[d] = _rank_gf2(rows)
        else:
            rows = []
            width = len(lower)
            for f in fs:
                row = [0] * width
                sign = 1
                for j in range(nground):
                    if f >> j & 1:
                        row[lower[f & ~(1 << j)]] = sign
                        sign = -sign
                rows.append(row)
            boundary_rank[d] = matrix_rank(rows, char)
    ranks = []
    for d in range(-1, top + 1):
        n = len(by_dim.get(d, ()))
        ranks.append(n - boundary_rank.get(d, 0) - boundary_rank.get(d + 1, 0))
    return tuple(ranks)


@lru_cache(maxsize=200_000)
def _koszul_homology(s: int, tights: tuple[int, ...], char: int) -> tuple[int, ...]:
    """Homology of the complex on ``s`` points whose faces avoid at least one mask in ``tights``.

    The facets are the complements of the (inclusion-minimal) tight masks. When
    there are fewer facets than points the nerve of the facet cover is used
    instead, which has the same reduced homology.
    """
    if not tights:
        return ()
    full = (1 << s) - 1
    if tights == (full,):
        return (1,)
    if len(tights) < s:
        f = len(tights)
        faces = []
        for sub in range(1, 1 << f):
            union = 0
            bits = sub
            while bits:
                low = bits & -bits
                union |= tights[low.bit_length() - 1]
                bits ^= low
            if union != full:
                faces.append(sub)
        faces.append(0)
        if len(faces) > FACE_CAP:
            raise ComplexTooLarge(f"nerve has {len(faces)} faces (cap {FACE_CAP})")
        return _homology_of_faces(faces, f, char)
    if (1 << s) > FACE_CAP:
        raise ComplexTooLarge(f"complex on {s} vertices exceeds the face cap {FACE_CAP}")
    faces = [w for w in range(1 << s) if any(w & t == 0 for t in tights)]
    return _homology_of_faces(faces, s, char)


def _tight_masks(b: Sequence[int], gens: Sequence[Sequence[int]]) -> tuple[int, tuple[int, ...]]:
    supp = [j for j, e in enumerate(b) if e]
    masks = set()
    for g in gens:
        if all(x <= y for x, y in zip(g, b)):
            t = 0
            for p, j in enumerate(supp):
                if g[j] == b[j]:
                    t |= 1 << p
            masks.add(t)
    minimal = tuple(sorted(t for t in masks if not any(u != t and u & t == u for u in masks)))
    return len(supp), minimal


# ---------------------------------------------------------------------------
# simplicial complexes (public surface)


@dataclass(frozen=True)
class SimplicialComplex:
    """Complex given by its facets. ``facets == ()`` is the void complex;
    ``facets == (frozenset(),)`` is the complex whose only face is the empty set."""

    ground: tuple[str, ...]
    facets: tuple[frozenset[str], ...]

    @classmethod
    def from_faces(cls, ground: Sequence[str], faces) -> "SimplicialComplex":
        faces = [frozenset(f) for f in faces]
        maximal = [f for f in faces if not any(f < g for g in faces)]
        order = {v: i for i, v in enumerate(ground)}
        maximal = sorted(set(maximal), key=lambda f: sorted(order[v] for v in f))
        return cls(tuple(ground), tuple(maximal))

    def faces(self) -> set[frozenset[str]]:
        out: set[frozenset[str]] = set()
        for f in self.facets:
            items = sorted(f)
            for k in range(len(items) + 1):
                for sub in itertools.combinations(items, k):
                    out.add(frozenset(sub))
                    if len(out) > FACE_CAP:
                        raise ComplexTooLarge(f"more than {FACE_CAP} faces")
        return out


def upper_koszul(ideal: MonomialIdeal, a: Sequence[int]) -> SimplicialComplex:
    """K^a(I) on the variables dividing ``a``."""
    a = Monomial(a)
    supp = a.support
    s, tights = _tight_masks(a, ideal.generators)
    ground = tuple(ideal.variables[j] for j in supp)
    facets = []
    for t in tights:
        facets.append(frozenset(ground[p] for p in range(s) if not t >> p & 1))
    return SimplicialComplex.from_faces(ground, facets) if facets else SimplicialComplex(ground, ())


def reduced_homology_ranks(k: SimplicialComplex, char: int = DEFAULT_CHARACTERISTIC) -> dict[int, int]:
    """``{dim: rank of H~_dim}`` for dims -1 .. dim K; empty for the void complex."""
    _check_char(char)
    if not k.facets:
        return {}
    pos = {v: i for i, v in enumerate(k.ground)}
    faces = [sum(1 << pos[v] for v in f) for f in k.faces()]
    ranks = _homology_of_faces(sorted(faces), len(k.ground), char)
    return {d - 1: r for d, r in enumerate(ranks)}


# ---------------------------------------------------------------------------
# Betti tables and regularity


def _lattice_array(gens: Sequence[Sequence[int]]) -> np.ndarray:
    """Rows are the lcms of nonempty subsets of ``gens`` (closure under lcm).

    Exponent vectors are handled as mixed-radix integer keys so that
    deduplication is a 1-D sort.
    """
    g = np.asarray(gens, dtype=np.int64)
    base = g.max(axis=0) + 1
    if float(np.prod(base.astype(float))) >= 2.0**62:
        return np.array(sorted(_lattice_python(gens)), dtype=np.int64)
    radix = np.concatenate([[1], np.cumprod(base[:-1])]).astype(np.int64)

    def decode(keys: np.ndarray) -> np.ndarray:
        return (keys[:, None] // radix[None, :]) % base[None, :]

    keys = np.unique(g @ radix)
    frontier = decode(keys)
    g = frontier
    while len(frontier):
        cand = np.maximum(frontier[:, None, :], g[None, :, :]).reshape(-1, g.shape[1]) @ radix
        fresh = np.setdiff1d(cand, keys)
        if not len(fresh):
            break
        keys = np.union1d(keys, fresh)
        frontier = decode(fresh)
    return decode(keys)


def _lattice_python(gens: Sequence[Sequence[int]]) -> set[tuple[int, ...]]:
    gens = [tuple(g) for g in gens]
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        fresh = []
        for b in frontier:
            for g in gens:
                c = tuple(x if x >= y else y for x, y in zip(b, g))
                if c not in seen:
                    seen.add(c)
                    fresh.append(c)
        frontier = fresh
    return seen


def lcm_lattice(gens: Sequence[Sequence[int]]) -> set[tuple[int, ...]]:
    """All lcms of nonempty subsets of ``gens``."""
    if not gens:
        return set()
    return {tuple(int(x) for x in row) for row in _lattice_array(gens)}


@dataclass(frozen=True)
class BettiTable:
    """``entries[(i, j)]`` is beta_{i,j}(I), the i-th syzygies in degree j."""

    entries: dict
    characteristic: int

    def regularity(self) -> int:
        if not self.entries:
            raise OracleError("zero ideal has no regularity")
        return max(j - i for i, j in self.entries)

    def get(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def to_text(self) -> str:
        """Macaulay2-style table: rows are j - i, columns are i."""
        if not self.entries:
            return f"char {self.characteristic}: zero ideal"
        imax = max(i for i, _ in self.entries)
        rows = sorted({j - i for i, j in self.entries})
        width = max(len(str(v)) for v in self.entries.values()) + 1
        lines = [f"char {self.characteristic}", "      " + "".join(f"{i:>{width}}" for i in range(imax + 1))]
        for r in range(rows[0], rows[-1] + 1):
            cells = [self.get(i, i + r) for i in range(imax + 1)]
            lines.append(f"{r:>4}: " + "".join(f"{(c or '.'):>{width}}" for c in cells))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "characteristic": self.characteristic,
            "entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())],
        }


@lru_cache(maxsize=4096)
def _compress(mask: int, support: int) -> int:
    """Re-index the bits of ``mask`` by their rank among the bits of ``support``."""
    out = 0
    p = 0
    while support:
        low = support & -support
        if mask & low:
            out |= 1 << p
        p += 1
        support ^= low
    return out


@lru_cache(maxsize=100_000)
def _reduce_masks(masks: tuple[int, ...], support: int) -> tuple[int, tuple[int, ...]] | None:
    """Minimal tight masks re-indexed to the support, or None for a cone."""
    minimal = [t for t in masks if not any(u != t and u & t == u for u in masks)]
    union = 0
    for t in minimal:
        union |= t
    if union != support:
        return None  # some point lies in no minimal mask: the complex is a cone
    return support.bit_count(), tuple(sorted(_compress(t, support) for t in minimal))


VECTOR_VARIABLES = 12


def _minimal_patterns(tight: np.ndarray, admissible: np.ndarray, supports: np.ndarray, nv: int):
    """Group lattice rows by their set of minimal tight masks, dropping cones.

    Returns ``(rows, inverse, patterns)``: the surviving row indices, the
    pattern index of each, and each pattern as ``(s, tights)`` ready for
    :func:`_koszul_homology`. Masks are handled as a presence table over all
    ``2**nv`` subsets so that minimality is a subset-closure transform.
    """
    if nv > VECTOR_VARIABLES:
        rows, inverse, patterns, seen = [], [], [], {}
        for row in range(len(tight)):
            masks = tuple(sorted(set(tight[row][admissible[row]].tolist())))
            reduced = _reduce_masks(masks, int(supports[row]))
            if reduced is None:
                continue
            rows.append(row)
            inverse.append(seen.setdefault(reduced, len(seen)))
            if len(seen) > len(patterns):
                patterns.append(reduced)
        return np.asarray(rows, dtype=np.int64), np.asarray(inverse, dtype=np.int64), patterns
    size = 1 << nv
    present = np.zeros((len(tight), size), dtype=bool)
    r, c = np.nonzero(admissible)
    present[r, tight[r, c]] = True
    below = present.copy()  # below[m]: some present mask is a subset of m
    strict = np.zeros_like(present)  # strict[m]: some present mask is a proper subset of m
    cols = np.arange(size)
    for j in range(nv):
        idx = cols[cols >> j & 1 == 1]
        below[:, idx] |= below[:, idx ^ (1 << j)]
    for j in range(nv):
        idx = cols[cols >> j & 1 == 1]
        strict[:, idx] |= below[:, idx ^ (1 << j)]
    minimal = present & ~strict
    union = np.bitwise_or.reduce(np.where(minimal, cols[None, :], 0), axis=1)
    rows = np.nonzero(union == supports)[0]  # otherwise some point lies in no minimal mask: a cone
    if not len(rows):
        return rows, rows, []
    packed = np.packbits(minimal[rows], axis=1)
    keys = np.ascontiguousarray(packed).view(np.dtype((np.void, packed.shape[1]))).reshape(-1)
    uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    patterns = [_decode_pattern(packed[i].tobytes(), size) for i in first.tolist()]
    return rows, inverse.reshape(-1), patterns


@lru_cache(maxsize=100_000)
def _decode_pattern(packed: bytes, size: int) -> tuple[int, tuple[int, ...]]:
    masks = np.nonzero(np.unpackbits(np.frombuffer(packed, dtype=np.uint8))[:size])[0].tolist()
    support = 0
    for t in masks:
        support |= t
    return support.bit_count(), tuple(sorted(_compress(t, support) for t in masks))


def _lattice_tables(gens: tuple[tuple[int, ...], ...]):
    g = np.asarray(gens, dtype=np.int64)
    lattice = _lattice_array(gens)
    weights = np.int64(1) << np.arange(g.shape[1], dtype=np.int64)
    divides = (g[None, :, :] <= lattice[:, None, :]).all(axis=2)
    tight = ((g[None, :, :] == lattice[:, None, :]) & (lattice[:, None, :] > 0)) @ weights
    supports = (lattice > 0) @ weights
    return g, divides, tight, supports, lattice.sum(axis=1)


def _betti_entries(gens: tuple[tuple[int, ...], ...], char: int) -> dict:
    entries: dict = {}
    if not gens:
        return entries
    g, divides, tight, supports, degrees = _lattice_tables(gens)
    rows, inverse, patterns = _minimal_patterns(tight, divides, supports, g.shape[1])
    homology = [_koszul_homology(s, t, char) for s, t in patterns]
    for row, p in zip(rows.tolist(), inverse.tolist()):
        deg = int(degrees[row])
        for i, r in enumerate(homology[p]):
            if r:
                entries[(i, deg)] = entries.get((i, deg), 0) + r
    return entries


@lru_cache(maxsize=20_000)
def _cached_betti(gens: tuple[tuple[int, ...], ...], char: int) -> tuple:
    return tuple(sorted(_betti_entries(gens, char).items()))


def betti_table(ideal: MonomialIdeal, char: int = DEFAULT_CHARACTERISTIC, *, route: str = "direct") -> BettiTable:
    """Graded Betti numbers of ``ideal``.

    ``route="direct"`` evaluates upper Koszul complexes of ``ideal`` itself;
    ``route="polarized"`` evaluates them on the polarization. Both give the
    same table; the direct route is much cheaper for non-squarefree input.
    """
    _check_char(char)
    if route == "polarized":
        ideal = polarize(ideal)[0]
        entries = _betti_entries(tuple(tuple(g) for g in ideal.generators), char)
    elif route == "direct":
        entries = dict(_cached_betti(tuple(tuple(g) for g in ideal.generators), char))
    else:
        raise OracleError(f"unknown route {route!r}")
    return BettiTable(entries, char)


def regularity(ideal: MonomialIdeal, char: int = DEFAULT_CHARACTERISTIC, *, route: str = "direct") -> int:
    if ideal.is_zero():
        raise OracleError("regularity of the zero ideal is undefined")
    return betti_table(ideal, char, route=route).regularity()


def has_linear_resolution(ideal: MonomialIdeal, char: int = DEFAULT_CHARACTERISTIC) -> bool:
    if ideal.is_zero():
        raise OracleError("zero ideal")
    degs = ideal.degrees()
    if len(degs) != 1:
        raise OracleError(f"ideal is not equigenerated (degrees {degs}); pass a component")
    return regularity(ideal, char) == degs[0]


@dataclass(frozen=True)
class BettiEvidence:
    """Per-degree regularities of the components I_<d>."""

    ideal: MonomialIdeal
    characteristic: int
    per_degree: tuple[tuple[int, int], ...]
    failing_degree: int | None
    method: str = "truncation"
    regularity: int | None = None

    @property
    def componentwise_linear(self) -> bool:
        return self.failing_degree is None

    def to_dict(self) -> dict:
        return {
            "characteristic": self.characteristic,
            "method": self.method,
            "per_degree": [list(p) for p in self.per_degree],
            "failing_degree": self.failing_degree,
            "regularity": self.regularity,
        }


def _truncation_regularities(gens: tuple[tuple[int, ...], ...], char: int):
    """Yield (d, reg J_{<=d}) for increasing generator degrees d, where J_{<=d}
    is generated by the generators of degree at most d.

    Every lattice point of J_{<=d} is a lattice point of the whole ideal, and
    the Koszul complex at b only sees the generators dividing b, so one lattice
    serves every d. Points outside the lattice of J_{<=d} show up as cones.
    """
    g, divides, tight, supports, degrees = _lattice_tables(gens)
    gdeg = g.sum(axis=1)
    for d in sorted(set(gdeg.tolist())):
        rows, inverse, patterns = _minimal_patterns(tight, divides & (gdeg <= d)[None, :], supports, g.shape[1])
        reg = d
        if len(rows):
            top = np.full(len(patterns), -1, dtype=np.int64)
            np.maximum.at(top, inverse, degrees[rows])
            for (s, t), deg in zip(patterns, top.tolist()):
                for i, r in enumerate(_koszul_homology(s, t, char)):
                    if r and deg - i > reg:
                        reg = deg - i
        yield d, reg


def _component_regularity(ideal: MonomialIdeal, d: int, char: int) -> int:
    return regularity(component(ideal, d), char)


def is_componentwise_linear_oracle(
    ideal: MonomialIdeal,
    char: int = DEFAULT_CHARACTERISTIC,
    *,
    method: str = "truncation",
    paranoid: bool = False,
    with_regularity: bool = False,
    stop_at_failure: bool = True,
) -> BettiEvidence:
    """Check reg(I_<d>) == d for d from the lowest to the highest generator degree.

    ``paranoid`` extends the range two degrees beyond the top generator degree.
    """
    _check_char(char)
    if method not in ("truncation", "direct"):
        raise OracleError(f"unknown method {method!r}")
    if ideal.is_zero():
        raise OracleError("zero ideal")
    degs = ideal.degrees()
    top = degs[-1] + (2 if paranoid else 0)
    results = []
    failing = None
    if method == "truncation":
        # I_<d> is the truncation in degrees >= d of J_{<=d}, and
        # reg(J_{>=d}) = max(reg J, d); between generator degrees J is unchanged.
        truncated = dict(_truncation_regularities(tuple(tuple(g) for g in ideal.generators), char))
        last = None
        for d in range(degs[0], degs[-1] + 1):
            last = truncated.get(d, last)
            truncated[d] = max(last, d)
    for d in range(degs[0], top + 1):
        if method == "truncation" and d <= degs[-1]:
            r = truncated[d]
        else:
            r = _component_regularity(ideal, d, char)
        results.append((d, r))
        if r != d and failing is None:
            failing = d
            if stop_at_failure:
                break
    reg = regularity(ideal, char) if with_regularity else None
    return BettiEvidence(ideal, char, tuple(results), failing, method, reg)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FormulaReport:
    pattern: str
    k: int
    weights: tuple[int, int, int]
    characteristic: int
    formula: int
    oracle: int
    ideal: MonomialIdeal = field(compare=False)

    @property
    def match(self) -> bool:
        return self.formula == self.oracle


def formula_vs_oracle(
    pattern: str, k: int, w2: int, w3: int, char: int = DEFAULT_CHARACTERISTIC, *, w1: int | None = None
) -> FormulaReport:
    """Compare the closed-form regularity of I(pattern)^k with the homological value."""
    from .graphs import pattern_instance
    from .ideals import edge_ideal
    from .linearity import pattern_power_regularity

    d = pattern_instance(pattern, w2, w3, w1=w1)
    ideal = power(edge_ideal(d), k)
    predicted = pattern_power_regularity(pattern, k, w2, w3, w1=w1)
    return FormulaReport(pattern, k, tuple(d.weights), char, predicted, regularity(ideal, char), ideal)


__all__ += ["IdealError"]
