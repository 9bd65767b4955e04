"""Lattice construction, iterative pair merging, path counting and enumeration."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .align import pair_alignments
from .core import (
    Alignment,
    CorpusFormatError,
    Lattice,
    ReferenceSet,
    Sentence,
    Token,
)
from .similarity import SimilarityProvider

SATURATION_LIMIT = 2**63 - 1


def initial_lattice(refs: ReferenceSet) -> Lattice:
    """One linear chain per reference between the shared sentinels."""
    lat = Lattice()
    for k, sentence in enumerate(refs.refs):
        prev = lat.start_id
        origin = {}
        for pos, tok in enumerate(sentence.tokens):
            node = lat.add_node({tok.text})
            lat.add_edge(prev, node)
            origin[pos] = node
            prev = node
        lat.add_edge(prev, lat.end_id)
        lat.origin_maps[k] = origin
    return lat


def merge_pair(lat: Lattice, ref_i: int, ref_j: int, alignment: Alignment) -> Lattice:
    """Unify the lattice nodes of each aligned position pair, in place.

    Aligned positions already holding the same node are a no-op. A unification
    that would create a cycle raises LatticeCycleError; under the merge-plan
    ordering rule that is unreachable.
    """
    origin_i = lat.origin_maps[ref_i]
    origin_j = lat.origin_maps[ref_j]
    for u, v in alignment.pairs:
        a, b = origin_i[u], origin_j[v]
        if a != b:
            lat.unify(a, b)
    return lat


@dataclass(frozen=True)
class PlannedMerge:
    pair: tuple[int, int]
    alignment: Alignment
    executed: bool


@dataclass(frozen=True)
class MergePlan:
    """All reference pairs in merge order, with the skip decision recorded."""

    steps: tuple[PlannedMerge, ...]

    @property
    def executed(self) -> tuple[PlannedMerge, ...]:
        return tuple(s for s in self.steps if s.executed)

    @property
    def skipped(self) -> tuple[PlannedMerge, ...]:
        return tuple(s for s in self.steps if not s.executed)


def plan_merges(
    refs: ReferenceSet, provider: SimilarityProvider, penalty: float
) -> MergePlan:
    """Order pairs by optimal alignment score, descending; skip a pair once
    both its references have already been merged (cycle prevention)."""
    if refs.k < 2:
        return MergePlan(steps=())
    merged: set[int] = set()
    steps = []
    for (i, j), alignment in pair_alignments(refs, provider, penalty):
        execute = not (i in merged and j in merged)
        if execute:
            merged.add(i)
            merged.add(j)
        steps.append(PlannedMerge(pair=(i, j), alignment=alignment, executed=execute))
    return MergePlan(steps=tuple(steps))


def compress(
    refs: ReferenceSet, provider: SimilarityProvider, penalty: float
) -> Lattice:
    """Initial lattice plus every executed merge of the plan, in order."""
    lat = initial_lattice(refs)
    for step in plan_merges(refs, provider, penalty).executed:
        merge_pair(lat, step.pair[0], step.pair[1], step.alignment)
    return lat


class PathCount(NamedTuple):
    value: int
    combinations: int
    verified: bool
    saturated: bool


def count_combinations(lat: Lattice) -> tuple[int, bool]:
    """DP over topological order; each node multiplies in its variant count.

    Counts (node sequence, variant choice) combinations, an upper bound on
    the distinct-string count that is exact unless two combinations spell the
    same string. Values beyond 2**63 - 1 saturate rather than fail.
    """
    order = lat.topological_order()
    succs: dict[int, list[int]] = {n: [] for n in lat.nodes}
    for a, b in lat.edges:
        succs[a].append(b)
    ways = {n: 0 for n in lat.nodes}
    ways[lat.end_id] = 1
    for n in reversed(order):
        if n == lat.end_id:
            continue
        total = sum(ways[m] for m in succs[n])
        ways[n] = total * max(1, len(lat.nodes[n]))
    value = ways[lat.start_id]
    if value > SATURATION_LIMIT:
        return SATURATION_LIMIT, True
    return value, False


DEFAULT_VERIFY_CAP = 10_000


def count_paths_detail(lat: Lattice, verify_cap: int = DEFAULT_VERIFY_CAP) -> PathCount:
    """Distinct-string path count with its verification status.

    The combination DP overcounts when two (node sequence, variant choice)
    combinations spell the same string, so whenever the combination count is
    within ``verify_cap`` the result is verified against deduplicated
    enumeration and the distinct-string count is returned; the difference is
    the collision delta the stats report surfaces. Beyond the cap the
    combination count stands in as an estimate.
    """
    combinations, saturated = count_combinations(lat)
    if not saturated and combinations <= verify_cap:
        distinct = len(enumerate_paths(lat, cap=max(combinations, 1)).sentences)
        return PathCount(value=distinct, combinations=combinations, verified=True, saturated=False)
    return PathCount(value=combinations, combinations=combinations, verified=False, saturated=saturated)


def count_paths(lat: Lattice, verify_cap: int = DEFAULT_VERIFY_CAP) -> int:
    """Number of distinct token strings over all start-to-end paths."""
    return count_paths_detail(lat, verify_cap=verify_cap).value


class EnumeratedPaths(NamedTuple):
    sentences: list[Sentence]
    truncated: bool


def enumerate_paths(lat: Lattice, cap: int) -> EnumeratedPaths:
    """Distinct traversal strings in deterministic order.

    Node paths are visited in lexicographic node-id order; within a node path,
    variants are chosen in sorted order, leftmost node varying slowest.
    Duplicate strings are dropped. Stops once ``cap`` distinct strings exist
    and another would have been added, setting the truncation flag.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    seen: set[str] = set()
    sentences: list[Sentence] = []
    truncated = False
    succs: dict[int, list[int]] = {n: [] for n in lat.nodes}
    for a, b in lat.edges:
        succs[a].append(b)
    for lst in succs.values():
        lst.sort()

    def node_paths(node: int, acc: list[int]):
        if node == lat.end_id:
            yield acc
            return
        for succ in succs[node]:
            yield from node_paths(succ, acc + [succ])

    for path in node_paths(lat.start_id, []):
        interior = [n for n in path if n != lat.end_id]
        variant_lists = [sorted(lat.nodes[n]) for n in interior]
        for combo in itertools.product(*variant_lists):
            text = " ".join(combo)
            if text in seen:
                continue
            if len(sentences) >= cap:
                truncated = True
                return EnumeratedPaths(sentences=sentences, truncated=truncated)
            seen.add(text)
            sentences.append(Sentence(tuple(Token(t) for t in combo), id=f"path{len(sentences)}"))
    return EnumeratedPaths(sentences=sentences, truncated=truncated)


def to_dot(lat: Lattice) -> str:
    """Stable DOT rendering; node label is the '/'-joined sorted variant set."""
    lines = ["digraph lattice {", "  rankdir=LR;"]
    for n in sorted(lat.nodes):
        if n == lat.start_id:
            label = "START"
        elif n == lat.end_id:
            label = "END"
        else:
            label = "/".join(sorted(lat.nodes[n]))
        label = label.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{n} [label="{label}"];')
    for a, b in sorted(lat.edges):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- lattice file format (line-delimited JSON) ----------------------------
#
# header record {"start_id", "end_id"}, then node records {"id", "variants"}
# sorted by id, then edge records {"from", "to"} sorted. Origin maps are
# construction metadata and are not serialized.

def serialize_lattice(lat: Lattice) -> str:
    lines = [json.dumps({"start_id": lat.start_id, "end_id": lat.end_id})]
    for n in sorted(lat.nodes):
        lines.append(json.dumps({"id": n, "variants": sorted(lat.nodes[n])}))
    for a, b in sorted(lat.edges):
        lines.append(json.dumps({"from": a, "to": b}))
    return "\n".join(lines) + "\n"


def parse_lattice(lines: Iterable[str]) -> Lattice:
    lat = Lattice.__new__(Lattice)
    lat.nodes = {}
    lat.edges = set()
    lat.origin_maps = {}
    header = None
    pending_edges = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusFormatError(f"invalid JSON ({e.msg})", line=lineno) from e
        if "start_id" in rec:
            if header is not None:
                raise CorpusFormatError("duplicate header record", line=lineno)
            header = rec
            lat.start_id = int(rec["start_id"])
            lat.end_id = int(rec["end_id"])
        elif "id" in rec:
            lat.nodes[int(rec["id"])] = set(rec.get("variants", []))
        elif "from" in rec:
            pending_edges.append((int(rec["from"]), int(rec["to"]), lineno))
        else:
            raise CorpusFormatError("unrecognized lattice record", line=lineno)
    if header is None:
        raise CorpusFormatError("missing lattice header record", line=1)
    if lat.start_id not in lat.nodes or lat.end_id not in lat.nodes:
        raise CorpusFormatError("header start/end ids have no node records", line=1)
    for a, b, lineno in pending_edges:
        if a not in lat.nodes or b not in lat.nodes:
            raise CorpusFormatError(f"edge ({a}, {b}) references unknown node", line=lineno)
        lat.edges.add((a, b))
    lat._next_id = max(lat.nodes, default=-1) + 1
    lat.topological_order()
    return lat


def load_lattice(path: str) -> Lattice:
    with open(path, encoding="utf-8") as f:
        return parse_lattice(f)
