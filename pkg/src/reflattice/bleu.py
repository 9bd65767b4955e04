"""Sentence-level multi-reference BLEU-4 used for ranking pseudo-references."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .core import Sentence

MAX_ORDER = 4


@dataclass(frozen=True)
class BleuScore:
    """BLEU in [0, 100] with its n-gram precisions and brevity penalty.

    brevity_penalty is 0 only for the degenerate empty-candidate case.
    """

    value: float
    precisions: tuple[float, float, float, float]
    brevity_penalty: float


def _ngrams(words: Sequence[str], n: int) -> Counter:
    return Counter(tuple(words[i : i + n]) for i in range(len(words) - n + 1))


def sentence_bleu(candidate: Sentence, refs: Sequence[Sentence]) -> BleuScore:
    """BLEU-4 with multi-reference clipped counts.

    Clipping uses the per-n-gram maximum count over all references. Brevity
    penalty uses the shortest reference length (the multi-bleu.perl variant):
    with the closest-length variant, adding a longer-but-closer reference can
    lower a score, breaking the monotonicity guarantee this ranking relies
    on. Smoothing: for n >= 2, a zero match count is replaced by 0.5 (so
    p_n = 1 / (2 * denominator)); a zero unigram match yields score 0.
    Candidates shorter than n words use denominator 1 for order n.
    """
    if not refs:
        raise ValueError("reference list must be non-empty")
    cand = candidate.words
    c = len(cand)
    if c == 0:
        return BleuScore(value=0.0, precisions=(0.0,) * MAX_ORDER, brevity_penalty=0.0)

    ref_words = [r.words for r in refs]
    r = min(len(w) for w in ref_words)
    bp = 1.0 if c >= r else math.exp(1.0 - r / c)

    precisions = []
    for n in range(1, MAX_ORDER + 1):
        cand_counts = _ngrams(cand, n)
        max_ref: Counter = Counter()
        for w in ref_words:
            for g, cnt in _ngrams(w, n).items():
                if cnt > max_ref[g]:
                    max_ref[g] = cnt
        match = sum(min(cnt, max_ref[g]) for g, cnt in cand_counts.items())
        denom = max(c - n + 1, 1)
        if match == 0 and n >= 2:
            precisions.append(0.5 / denom)
        else:
            precisions.append(match / denom)

    if precisions[0] == 0.0:
        value = 0.0
    else:
        log_sum = sum(math.log(p) for p in precisions)
        value = 100.0 * bp * math.exp(log_sum / MAX_ORDER)
    return BleuScore(value=value, precisions=tuple(precisions), brevity_penalty=bp)


def rank_by_bleu(candidates: Sequence[Sentence], refs: Sequence[Sentence]) -> list[tuple[Sentence, BleuScore]]:
    """Best-first; ties broken by lexicographic candidate string."""
    scored = [(cand, sentence_bleu(cand, refs)) for cand in candidates]
    scored.sort(key=lambda cs: (-cs[1].value, cs[0].text()))
    return scored
