"""Single-field mutations of serialized verdicts."""

import copy
import random

from woglin.certify import RULES

FIELDS = ("answer", "rule", "k", "certificate")
ANSWERS = ("Yes", "No", "Unknown")


def leaf_paths(doc, prefix=()):
    """Paths to every scalar and every list inside ``doc``."""
    if isinstance(doc, dict):
        for key, value in doc.items():
            yield from leaf_paths(value, prefix + (key,))
    elif isinstance(doc, list):
        yield prefix
        for i, value in enumerate(doc):
            yield from leaf_paths(value, prefix + (i,))
    else:
        yield prefix


def _get(doc, path):
    for p in path:
        doc = doc[p]
    return doc


def _set(doc, path, value):
    for p in path[:-1]:
        doc = doc[p]
    doc[path[-1]] = value


def _mutate_value(value, rnd: random.Random, path):
    if path == ("answer",):
        return rnd.choice([a for a in ANSWERS if a != value])
    if path == ("rule",):
        return rnd.choice(sorted(r for r in RULES if r != value))
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return value + rnd.choice([-2, -1, 1, 2, 5])
    if isinstance(value, str):
        return rnd.choice([value + "_", value[:-1], "x9", value.upper() if value.upper() != value else value + "Z"])
    if value is None:
        return rnd.choice([0, "x1", [], {"type": "PatternMatch"}])
    if isinstance(value, list):
        out = list(value)
        if not out:
            return ["x1"]
        choice = rnd.randrange(3)
        if choice == 0:
            del out[rnd.randrange(len(out))]
        elif choice == 1:
            out.append(copy.deepcopy(rnd.choice(out)))
        else:
            rnd.shuffle(out)
        return out
    if isinstance(value, float):
        return value + 1.0
    return None


def mutations(doc: dict, rnd: random.Random):
    """Yield (path, mutated copy) pairs forever, each differing from ``doc`` in one field."""
    paths = [p for p in leaf_paths(doc) if p and p[0] in FIELDS]
    while True:
        path = rnd.choice(paths)
        original = _get(doc, path)
        new = _mutate_value(copy.deepcopy(original), rnd, path)
        if new == original:
            continue
        mutated = copy.deepcopy(doc)
        _set(mutated, path, new)
        yield path, mutated
