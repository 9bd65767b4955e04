"""Word-similarity providers and substitution-matrix construction."""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

import numpy as np

from .core import (
    CorpusFormatError,
    ProviderError,
    Sentence,
    SubstitutionMatrix,
    ValidationError,
)


def normalized_cosine(a: Sequence[float], b: Sequence[float]) -> float:
    """Cosine similarity mapped affinely onto [0, 1]: (cos + 1) / 2."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape or a.shape[0] < 1:
        raise ValidationError(f"vector dimensions differ: {a.shape} vs {b.shape}")
    na = math.sqrt(float(a @ a))
    nb = math.sqrt(float(b @ b))
    if na == 0.0 or nb == 0.0:
        raise ValidationError("cannot take cosine of an all-zero vector")
    cos = float(a @ b) / (na * nb)
    cos = max(-1.0, min(1.0, cos))
    return (cos + 1.0) / 2.0


class SimilarityProvider:
    """Scores token pairs in [0, 1]. Subclasses must be symmetric."""

    kind = "abstract"

    def score(self, si: Sentence, u: int, sj: Sentence, v: int) -> float:
        """Similarity of token ``u`` of ``si`` against token ``v`` of ``sj``.

        The default implementation ignores context and delegates to
        ``score_tokens``; context-sensitive providers override this.
        """
        return self.score_tokens(si.tokens[u].text, sj.tokens[v].text)

    def score_tokens(self, a: str, b: str) -> float:
        raise NotImplementedError

    def prepare(self, sentence: Sentence) -> None:
        """Validate that this provider can score every token of ``sentence``."""


class HardProvider(SimilarityProvider):
    """Identity matching: 1.0 iff the surface forms are equal."""

    kind = "hard"

    def score_tokens(self, a: str, b: str) -> float:
        return 1.0 if a == b else 0.0


class SynonymTableProvider(SimilarityProvider):
    """Scores 1.0 within a synonym group (and for identical tokens), else 0.0.

    Not a trained model; a deterministic test vehicle for soft alignment.
    """

    kind = "synonym_table"

    def __init__(self, groups: Iterable[Iterable[str]]):
        self._group_of: dict[str, int] = {}
        for gid, group in enumerate(groups):
            for token in group:
                if token in self._group_of:
                    raise ValidationError(f"token {token!r} appears in more than one synonym group")
                self._group_of[token] = gid

    def score_tokens(self, a: str, b: str) -> float:
        if a == b:
            return 1.0
        ga = self._group_of.get(a)
        if ga is not None and ga == self._group_of.get(b):
            return 1.0
        return 0.0


class StaticVectorProvider(SimilarityProvider):
    """Normalized cosine over a static word-vector table. OOV is a hard error."""

    kind = "static_vectors"

    def __init__(self, table: dict[str, np.ndarray]):
        if not table:
            raise ValidationError("static vector table is empty")
        dims = {np.asarray(v).shape for v in table.values()}
        if len(dims) != 1:
            raise ValidationError(f"static vectors have mixed dimensions: {sorted(dims)}")
        self._table = {t: np.asarray(v, dtype=np.float64) for t, v in table.items()}

    def _vector(self, token: str) -> np.ndarray:
        vec = self._table.get(token)
        if vec is None:
            raise ProviderError(f"no static vector for token {token!r}")
        return vec

    def score_tokens(self, a: str, b: str) -> float:
        return normalized_cosine(self._vector(a), self._vector(b))

    def prepare(self, sentence: Sentence) -> None:
        for tok in sentence.tokens:
            if tok.text not in self._table:
                raise ProviderError(
                    f"no static vector for token {tok.text!r} (sentence {sentence.id!r})"
                )


class ContextualVectorProvider(SimilarityProvider):
    """Per-position contextual vectors consumed from a vector file.

    Because vectors are keyed by (sentence id, position), two occurrences of
    the same surface token may score differently against a third token.
    """

    kind = "contextual_vectors"

    def __init__(self, records: dict[str, tuple[list[str], list[np.ndarray]]]):
        self._records = records

    def prepare(self, sentence: Sentence) -> None:
        record = self._records.get(sentence.id)
        if record is None:
            raise ProviderError(f"no contextual vectors for sentence {sentence.id!r}")
        tokens, vectors = record
        if list(sentence.words) != tokens:
            raise ProviderError(
                f"token sequence mismatch for sentence {sentence.id!r}: "
                f"file has {tokens}, corpus has {list(sentence.words)}"
            )
        if len(vectors) != len(sentence.tokens):
            raise ProviderError(
                f"sentence {sentence.id!r} has {len(sentence.tokens)} tokens "
                f"but {len(vectors)} vectors"
            )

    def _vector(self, sentence: Sentence, pos: int) -> np.ndarray:
        record = self._records.get(sentence.id)
        if record is None:
            raise ProviderError(f"no contextual vectors for sentence {sentence.id!r}")
        tokens, vectors = record
        if pos >= len(vectors) or tokens[pos] != sentence.tokens[pos].text:
            raise ProviderError(
                f"vector file disagrees with token {sentence.tokens[pos].text!r} "
                f"at position {pos} of sentence {sentence.id!r}"
            )
        return vectors[pos]

    def score(self, si: Sentence, u: int, sj: Sentence, v: int) -> float:
        return normalized_cosine(self._vector(si, u), self._vector(sj, v))

    def score_tokens(self, a: str, b: str) -> float:
        raise ProviderError("contextual provider scores positions, not bare tokens")


def build_matrix(
    y_i: Sentence, y_j: Sentence, provider: SimilarityProvider, penalty: float
) -> SubstitutionMatrix:
    """Raw provider scores for every token pair of (y_i, y_j), penalty applied."""
    provider.prepare(y_i)
    provider.prepare(y_j)
    raw = np.empty((len(y_i), len(y_j)), dtype=np.float64)
    for u in range(len(y_i)):
        for v in range(len(y_j)):
            s = provider.score(y_i, u, y_j, v)
            if not (0.0 <= s <= 1.0):
                raise ProviderError(
                    f"provider returned out-of-range score {s} for "
                    f"({y_i.tokens[u].text!r}, {y_j.tokens[v].text!r})"
                )
            raw[u, v] = s
    return SubstitutionMatrix(raw, penalty)


# --- provider file formats ------------------------------------------------

def load_static_vectors(path: str) -> StaticVectorProvider:
    """Text format: one token per line, followed by its float components."""
    table: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) < 2:
                raise CorpusFormatError("expected: token followed by float components", line=lineno)
            token = parts[0]
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError as e:
                raise CorpusFormatError(f"bad float component for {token!r}", line=lineno) from e
            if token in table:
                raise CorpusFormatError(f"duplicate vector for token {token!r}", line=lineno)
            table[token] = vec
    if not table:
        raise CorpusFormatError("static vector file is empty", line=1)
    return StaticVectorProvider(table)


def load_synonym_groups(path: str) -> SynonymTableProvider:
    """Text format: one group per line, space-separated tokens."""
    groups = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            tokens = line.split()
            if tokens:
                groups.append(tokens)
    return SynonymTableProvider(groups)


def parse_contextual_vectors(lines: Iterable[str]) -> ContextualVectorProvider:
    """Line-delimited JSON: {"sentence_id": ..., "tokens": [...], "vectors": [[...], ...]}."""
    records: dict[str, tuple[list[str], list[np.ndarray]]] = {}
    dim = None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusFormatError(f"invalid JSON ({e.msg})", line=lineno) from e
        sid = rec.get("sentence_id")
        tokens = rec.get("tokens")
        vectors = rec.get("vectors")
        if not isinstance(sid, str) or not isinstance(tokens, list) or not isinstance(vectors, list):
            raise CorpusFormatError(
                "record needs 'sentence_id' (string), 'tokens' (array), 'vectors' (array)",
                line=lineno,
            )
        if len(tokens) != len(vectors):
            raise CorpusFormatError(
                f"sentence {sid!r}: {len(tokens)} tokens but {len(vectors)} vectors", line=lineno
            )
        if sid in records:
            raise CorpusFormatError(f"duplicate sentence_id {sid!r}", line=lineno)
        vecs = []
        for pos, v in enumerate(vectors):
            arr = np.asarray(v, dtype=np.float64)
            if arr.ndim != 1 or arr.shape[0] < 1:
                raise CorpusFormatError(f"vector {pos} of {sid!r} is not a flat array", line=lineno)
            if dim is None:
                dim = arr.shape[0]
            elif arr.shape[0] != dim:
                raise CorpusFormatError(
                    f"vector {pos} of {sid!r} has dimension {arr.shape[0]}, expected {dim}",
                    line=lineno,
                )
            vecs.append(arr)
        records[sid] = ([str(t) for t in tokens], vecs)
    return ContextualVectorProvider(records)


def load_contextual_vectors(path: str) -> ContextualVectorProvider:
    with open(path, encoding="utf-8") as f:
        return parse_contextual_vectors(f)
