"""Core domain types: tokens, sentences, reference sets, matrices, alignments, lattices."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np


class ReflatticeError(Exception):
    """Base class for all library errors."""


class ValidationError(ReflatticeError):
    """A domain object was constructed with invariant-violating fields."""


class CorpusFormatError(ReflatticeError):
    """A line-delimited input file is malformed.

    The message always names the offending 1-based line number when one is known.
    """

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ProviderError(ReflatticeError):
    """A similarity provider cannot score a token pair."""


class LatticeCycleError(ReflatticeError):
    """A lattice mutation would introduce a directed cycle."""


# tokenization splits on ASCII whitespace only; exotic Unicode spaces are
# caller-side normalization concerns and may legitimately sit inside tokens
_ASCII_WS = " \t\n\r\f\v"
_ASCII_WS_RE = re.compile(r"[ \t\n\r\f\v]+")


@dataclass(frozen=True)
class Token:
    """A single word. Tokens compare by exact, case-sensitive string equality."""

    text: str

    def __post_init__(self):
        if not self.text.strip(_ASCII_WS):
            raise ValidationError("token text must be non-empty")
        if any(c in _ASCII_WS for c in self.text):
            raise ValidationError(f"token text may not contain whitespace: {self.text!r}")

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Sentence:
    """An ordered, non-empty token sequence with an opaque id."""

    tokens: tuple[Token, ...]
    id: str = ""

    def __post_init__(self):
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))
        if len(self.tokens) < 1:
            raise ValidationError("sentence must contain at least one token")

    @classmethod
    def from_text(cls, text: str, id: str = "") -> "Sentence":
        """Split pre-tokenized text on ASCII whitespace. Never lowercases."""
        return cls(tuple(Token(t) for t in _ASCII_WS_RE.split(text) if t), id=id)

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)

    def text(self) -> str:
        return " ".join(self.words)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class ReferenceSet:
    """One training example's gold references."""

    example_id: str
    refs: tuple[Sentence, ...]
    source: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.refs, tuple):
            object.__setattr__(self, "refs", tuple(self.refs))
        if not self.example_id:
            raise ValidationError("example_id must be non-empty")
        if len(self.refs) < 1:
            raise ValidationError(f"example {self.example_id!r} has no references")

    @property
    def k(self) -> int:
        return len(self.refs)


class SubstitutionMatrix:
    """Pairwise word-similarity scores for one sentence pair, with global penalty applied.

    ``raw`` holds provider scores in [0, 1]; ``scores`` is ``raw - penalty``
    elementwise, which is what the aligner consumes.
    """

    def __init__(self, raw: np.ndarray, penalty: float):
        raw = np.asarray(raw, dtype=np.float64)
        if raw.ndim != 2 or raw.shape[0] < 1 or raw.shape[1] < 1:
            raise ValidationError("raw score matrix must be 2-D and non-empty")
        if not (0.0 <= penalty <= 1.0):
            raise ValidationError(f"penalty must be in [0, 1], got {penalty}")
        if np.any(raw < 0.0) or np.any(raw > 1.0):
            raise ValidationError("raw similarity scores must lie in [0, 1]")
        self.raw = raw
        self.penalty = float(penalty)
        self.scores = raw - self.penalty

    @property
    def rows(self) -> int:
        return self.raw.shape[0]

    @property
    def cols(self) -> int:
        return self.raw.shape[1]


@dataclass(frozen=True)
class Alignment:
    """Monotone aligned index pairs from DP traceback, plus the optimal score."""

    pairs: tuple[tuple[int, int], ...]
    score: float

    def __post_init__(self):
        if not isinstance(self.pairs, tuple):
            object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        prev_u, prev_v = -1, -1
        for u, v in self.pairs:
            if u <= prev_u or v <= prev_v:
                raise ValidationError(f"alignment pairs must be strictly increasing, got {self.pairs}")
            prev_u, prev_v = u, v


@dataclass(frozen=True)
class ExpandedDataset:
    """Ordered (example_id, reference) pairs produced by a dataset conversion."""

    entries: tuple[tuple[str, Sentence], ...]

    def __post_init__(self):
        if not isinstance(self.entries, tuple):
            object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, Sentence]]:
        return iter(self.entries)


class Lattice:
    """Node-labelled DAG with sentinel start/end nodes.

    Each node carries a set of surface-form variants (empty only for the
    sentinels). ``origin_maps[k][pos]`` is the node currently holding token
    ``pos`` of reference ``k``, so every gold reference stays generable.

    Mutation is single-writer; hand out ``copy()`` snapshots for sharing.
    """

    def __init__(self):
        self.nodes: dict[int, set[str]] = {}
        self.edges: set[tuple[int, int]] = set()
        self.origin_maps: dict[int, dict[int, int]] = {}
        self._next_id = 0
        self.start_id = self._new_node(sentinel=True)
        self.end_id = self._new_node(sentinel=True)

    def _new_node(self, variants: Iterable[str] = (), sentinel: bool = False) -> int:
        variants = set(variants)
        if not sentinel and not variants:
            raise ValidationError("non-sentinel nodes need at least one variant")
        node_id = self._next_id
        self._next_id += 1
        self.nodes[node_id] = variants
        return node_id

    def add_node(self, variants: Iterable[str]) -> int:
        return self._new_node(variants)

    def add_edge(self, a: int, b: int) -> None:
        if a not in self.nodes or b not in self.nodes:
            raise ValidationError(f"edge ({a}, {b}) references unknown node")
        if a == b:
            raise LatticeCycleError(f"self edge on node {a}")
        self.edges.add((a, b))

    def successors(self, node_id: int) -> list[int]:
        return sorted(b for a, b in self.edges if a == node_id)

    def predecessors(self, node_id: int) -> list[int]:
        return sorted(a for a, b in self.edges if b == node_id)

    def topological_order(self) -> list[int]:
        """Kahn's algorithm; raises LatticeCycleError if a cycle exists."""
        indeg = {n: 0 for n in self.nodes}
        for _, b in self.edges:
            indeg[b] += 1
        ready = sorted(n for n, d in indeg.items() if d == 0)
        order = []
        while ready:
            n = ready.pop(0)
            order.append(n)
            for m in self.successors(n):
                indeg[m] -= 1
                if indeg[m] == 0:
                    ready.append(m)
            ready.sort()
        if len(order) != len(self.nodes):
            raise LatticeCycleError("lattice contains a directed cycle")
        return order

    def _reachable(self, src: int, dst: int) -> bool:
        seen = {src}
        stack = [src]
        while stack:
            n = stack.pop()
            if n == dst:
                return True
            for m in self.successors(n):
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return False

    def unify(self, a: int, b: int) -> int:
        """Merge nodes ``a`` and ``b``; the lower id survives.

        Variant sets union, edges are re-targeted with duplicates collapsed,
        origin maps are rewritten. Unifying two nodes connected by a directed
        path would create a cycle and raises before any mutation.
        """
        if a == b:
            return a
        if a not in self.nodes or b not in self.nodes:
            raise ValidationError(f"unify({a}, {b}) references unknown node")
        if self._reachable(a, b) or self._reachable(b, a):
            raise LatticeCycleError(f"unifying nodes {a} and {b} would create a cycle")
        keep, drop = min(a, b), max(a, b)
        self.nodes[keep] |= self.nodes.pop(drop)
        self.edges = {
            (keep if x == drop else x, keep if y == drop else y) for x, y in self.edges
        }
        for origin in self.origin_maps.values():
            for pos, node in origin.items():
                if node == drop:
                    origin[pos] = keep
        return keep

    def variants(self, node_id: int) -> set[str]:
        return self.nodes[node_id]

    def copy(self) -> "Lattice":
        lat = Lattice.__new__(Lattice)
        lat.nodes = {n: set(v) for n, v in self.nodes.items()}
        lat.edges = set(self.edges)
        lat.origin_maps = {k: dict(m) for k, m in self.origin_maps.items()}
        lat.start_id = self.start_id
        lat.end_id = self.end_id
        lat._next_id = self._next_id
        return lat

    def check_invariants(self) -> None:
        """DAG, degree, and reachability invariants; raises on violation."""
        self.topological_order()
        if self.predecessors(self.start_id):
            raise ValidationError("start node has incoming edges")
        if self.successors(self.end_id):
            raise ValidationError("end node has outgoing edges")
        from_start = self._reach_set(self.start_id, forward=True)
        to_end = self._reach_set(self.end_id, forward=False)
        for n in self.nodes:
            if n not in from_start or n not in to_end:
                raise ValidationError(f"node {n} is not on any start-to-end path")

    def _reach_set(self, src: int, forward: bool) -> set[int]:
        step = self.successors if forward else self.predecessors
        seen = {src}
        stack = [src]
        while stack:
            n = stack.pop()
            for m in step(n):
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return seen


# --- corpus file format (line-delimited JSON, UTF-8) ---------------------
#
# One record per line with keys in fixed order (example_id, source, refs);
# `source` is omitted when absent. Refs are pre-tokenized sentences with
# single-space separators. parse -> serialize round-trips byte-identically.

def sentence_id(example_id: str, ref_index: int) -> str:
    """Canonical sentence id used across corpus and vector files."""
    return f"{example_id}#{ref_index}"


def parse_corpus_line(line: str, lineno: int) -> ReferenceSet:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as e:
        raise CorpusFormatError(f"invalid JSON ({e.msg})", line=lineno) from e
    if not isinstance(record, dict):
        raise CorpusFormatError("record must be a JSON object", line=lineno)
    example_id = record.get("example_id")
    if not isinstance(example_id, str) or not example_id:
        raise CorpusFormatError("missing or empty 'example_id'", line=lineno)
    source = record.get("source")
    if source is not None and not isinstance(source, str):
        raise CorpusFormatError("'source' must be a string when present", line=lineno)
    refs_raw = record.get("refs")
    if not isinstance(refs_raw, list) or not refs_raw:
        raise CorpusFormatError("'refs' must be a non-empty array of strings", line=lineno)
    refs = []
    for k, text in enumerate(refs_raw):
        if not isinstance(text, str):
            raise CorpusFormatError(f"ref {k} is not a string", line=lineno)
        try:
            refs.append(Sentence.from_text(text, id=sentence_id(example_id, k)))
        except ValidationError as e:
            raise CorpusFormatError(f"ref {k}: {e}", line=lineno) from e
    return ReferenceSet(example_id=example_id, refs=tuple(refs), source=source)


def parse_corpus(lines: Iterable[str]) -> list[ReferenceSet]:
    corpus = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        rs = parse_corpus_line(line, lineno)
        if rs.example_id in seen:
            raise CorpusFormatError(
                f"duplicate example_id {rs.example_id!r} (first seen on line {seen[rs.example_id]})",
                line=lineno,
            )
        seen[rs.example_id] = lineno
        corpus.append(rs)
    return corpus


def load_corpus(path: str) -> list[ReferenceSet]:
    with open(path, encoding="utf-8") as f:
        return parse_corpus(f)


def serialize_reference_set(rs: ReferenceSet) -> str:
    record: dict = {"example_id": rs.example_id}
    if rs.source is not None:
        record["source"] = rs.source
    record["refs"] = [s.text() for s in rs.refs]
    return json.dumps(record, ensure_ascii=False)


def serialize_corpus(corpus: Iterable[ReferenceSet]) -> str:
    return "".join(serialize_reference_set(rs) + "\n" for rs in corpus)


def write_corpus(corpus: Iterable[ReferenceSet], path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_corpus(corpus))
