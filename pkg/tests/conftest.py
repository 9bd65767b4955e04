"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import json
import math
import random

import pytest

from reflattice import Lattice, ReferenceSet, Sentence

INDONESIA_REFS = [
    "Indonesia reiterated its opposition to foreign military presence",
    "Indonesia repeats its opposition against station of foreign troops in Indonesia",
    "Indonesia reiterates opposition to garrisoning foreign armies",
]

ELEPHANT_REFS = [
    "Two elephants in an enclosure next to a brick building",
    "Two elephants try to fit through a small entry",
]

ELEPHANT_WRONG_STRINGS = [
    "Two elephants try to a small entry",
    "Two elephants in an enclosure next to fit through a brick building",
]


def make_refset(example_id: str, texts: list[str]) -> ReferenceSet:
    return ReferenceSet(
        example_id=example_id,
        refs=tuple(
            Sentence.from_text(t, id=f"{example_id}#{k}") for k, t in enumerate(texts)
        ),
    )


@pytest.fixture
def indonesia() -> ReferenceSet:
    return make_refset("indo", INDONESIA_REFS)


@pytest.fixture
def elephant() -> ReferenceSet:
    return make_refset("eleph", ELEPHANT_REFS)


# --- independent oracles ---------------------------------------------------

def brute_force_best_score(raw, penalty: float) -> float:
    """Max over all monotone alignments of the summed penalized scores.

    Exhaustive recursion over every alignment, accumulating the running sum
    left to right exactly like the DP does, so equality can be exact.
    """
    rows = len(raw)
    cols = len(raw[0])
    best = 0.0  # the empty alignment

    def rec(u0: int, v0: int, acc: float):
        nonlocal best
        for u in range(u0, rows):
            for v in range(v0, cols):
                s = acc + (raw[u][v] - penalty)
                if s > best:
                    best = s
                rec(u + 1, v + 1, s)

    rec(0, 0, 0.0)
    return best


def brute_force_strings(lat: Lattice) -> set[str]:
    """All distinct start-to-end traversal strings, via an explicit stack
    of partial strings (structured differently from enumerate_paths)."""
    results: set[str] = set()
    stack: list[tuple[int, tuple[str, ...]]] = [(lat.start_id, ())]
    while stack:
        node, words = stack.pop()
        if node == lat.end_id:
            results.add(" ".join(words))
            continue
        for succ in lat.successors(node):
            if succ == lat.end_id:
                stack.append((succ, words))
            else:
                for v in lat.nodes[succ]:
                    stack.append((succ, words + (v,)))
    return results


# --- contextual vector crafting ---------------------------------------------

def one_hot_contextual_records(
    refset: ReferenceSet, shared: dict[str, str] | None = None
) -> dict[str, tuple[list[str], list[list[float]]]]:
    """Per-position one-hot vectors keyed by concept.

    Tokens mapping to the same concept get identical vectors (similarity 1.0);
    everything else is orthogonal (normalized cosine 0.5). ``shared`` maps
    "<sid>:<pos>" to a concept name; unmapped positions get a private axis.
    """
    shared = shared or {}
    axes: dict[str, int] = {}

    def axis(concept: str) -> int:
        if concept not in axes:
            axes[concept] = len(axes)
        return axes[concept]

    slots = []
    for k, sent in enumerate(refset.refs):
        for pos, word in enumerate(sent.words):
            key = f"{sent.id}:{pos}"
            concept = shared.get(key, key)
            slots.append((sent.id, pos, word, axis(concept)))

    dim = len(axes)
    records: dict[str, tuple[list[str], list[list[float]]]] = {}
    for sent in refset.refs:
        records[sent.id] = (list(sent.words), [[0.0] * dim for _ in sent.words])
    for sid, pos, _word, ax in slots:
        records[sid][1][pos][ax] = 1.0
    return records


def write_contextual_file(path, records) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for sid, (tokens, vectors) in records.items():
            f.write(json.dumps({"sentence_id": sid, "tokens": tokens, "vectors": vectors}) + "\n")


def elephant_contextual_records(refset: ReferenceSet):
    """Vectors where Two/elephants/a match across the two captions but the
    two occurrences of "to" are orthogonal (dissimilar in context)."""
    s0, s1 = refset.refs[0].id, refset.refs[1].id
    shared = {
        f"{s0}:0": "two", f"{s1}:0": "two",
        f"{s0}:1": "elephants", f"{s1}:1": "elephants",
        f"{s0}:7": "article-a", f"{s1}:6": "article-a",
        # positions 6 (ref 0) and 3 (ref 1) are the two "to"s: left private
    }
    return one_hot_contextual_records(refset, shared)


def random_small_corpus(rng: random.Random, example_id: str = "ex") -> ReferenceSet:
    """Distinct random references over a small vocabulary."""
    vocab = ["alpha", "bravo", "carol", "delta", "echo", "fox", "golf", "hotel"]
    k = rng.randint(1, 4)
    texts: list[str] = []
    seen: set[str] = set()
    attempts = 0
    while len(texts) < k and attempts < 60:
        attempts += 1
        length = rng.randint(1, 6)
        text = " ".join(rng.choice(vocab) for _ in range(length))
        if text not in seen:
            seen.add(text)
            texts.append(text)
    return make_refset(example_id, texts)


def random_provider(rng: random.Random):
    """Hard identity, synonym tables over random disjoint groups, or static
    vectors drawn at random, with roughly equal probability."""
    from reflattice import HardProvider, StaticVectorProvider, SynonymTableProvider

    pool = ["alpha", "bravo", "carol", "delta", "echo", "fox", "golf", "hotel"]
    pick = rng.random()
    if pick < 1 / 3:
        return HardProvider()
    if pick < 2 / 3:
        rng.shuffle(pool)
        groups = []
        while len(pool) >= 2 and rng.random() < 0.7:
            size = min(rng.randint(2, 3), len(pool))
            groups.append([pool.pop() for _ in range(size)])
        return SynonymTableProvider(groups)
    table = {t: [rng.uniform(-1, 1) for _ in range(4)] for t in pool}
    return StaticVectorProvider(table)


def schedule_fixture_refs() -> ReferenceSet:
    """Two references with shared anchors c0..c4 and per-gap filler pairs."""
    r1 = "c0 x0 X0 c1 x1 X1 c2 x2 X2 c3 x3 X3 c4"
    r2 = "c0 y0 c1 y1 c2 y2 c3 y3 c4"
    return make_refset("sched", [r1, r2])


def schedule_fixture_provider():
    """Static vectors where anchors always match and each xi/yi filler pair
    has similarity ~0.77: those pairs align only once the penalty reaches
    0.75, which multiplies the path count past the generation floor."""
    import numpy as np

    from reflattice import StaticVectorProvider

    cos = 0.54  # normalized similarity (cos + 1) / 2 = 0.77
    table = {}
    for i in range(4):
        x = np.zeros(32)
        y = np.zeros(32)
        x[2 * i] = 1.0
        y[2 * i] = cos
        y[2 * i + 1] = math.sqrt(1.0 - cos * cos)
        table[f"x{i}"] = x
        table[f"y{i}"] = y
    for i in range(5):
        v = np.zeros(32)
        v[16 + i] = 1.0
        table[f"c{i}"] = v
    for i in range(4):
        v = np.zeros(32)
        v[21 + i] = 1.0
        table[f"X{i}"] = v
    return StaticVectorProvider(table)
