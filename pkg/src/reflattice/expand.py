"""Pseudo-reference selection under a per-example budget and the three
multi-reference-to-single-reference dataset conversions."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Sequence

from .bleu import rank_by_bleu
from .core import ExpandedDataset, Lattice, ReferenceSet, Sentence, ValidationError
from .lattice import compress, enumerate_paths
from .similarity import SimilarityProvider

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(x: int) -> int:
    """SplitMix64 finalizer (Steele et al.); the documented seed hash."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


class SplitMix64:
    """Minimal portable PRNG: 64-bit state advanced by the golden gamma.

    Chosen over platform RNGs so that converted datasets are reproducible
    bit-for-bit across platforms and implementations. Bounded draws use plain
    modulo (documented; bias is ~n / 2^64, irrelevant at corpus scale).
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix64(self._state)

    def randbelow(self, n: int) -> int:
        if n < 1:
            raise ValueError("randbelow needs n >= 1")
        return self.next_u64() % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, descending index."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class EpochSeed:
    """Reproducible per-epoch randomness: stream seed = mix64(mix64(base_seed) ^ epoch)."""

    base_seed: int
    epoch: int = 0

    def __post_init__(self):
        if self.epoch < 0:
            raise ValidationError("epoch must be >= 0")

    def stream_seed(self) -> int:
        return _mix64(_mix64(self.base_seed) ^ self.epoch)

    def stream(self) -> SplitMix64:
        return SplitMix64(self.stream_seed())


@dataclass(frozen=True)
class SelectionConfig:
    """Budget and penalty-schedule knobs for pseudo-reference generation.

    With ``schedule`` enabled, compression reruns at penalty_initial,
    penalty_initial - penalty_step, ... until at least ``min_generated``
    pseudo-references exist or the grid is exhausted (next penalty <= 0).
    With ``schedule`` disabled there is a single run at penalty_initial.
    """

    k_prime: int
    penalty_initial: float = 0.9
    penalty_step: float = 0.05
    min_generated: int = 100
    cap: int = 100_000
    schedule: bool = True

    def __post_init__(self):
        if not (0.0 < self.penalty_step < self.penalty_initial <= 1.0):
            raise ValidationError(
                f"need 0 < penalty_step < penalty_initial <= 1, got "
                f"step={self.penalty_step}, initial={self.penalty_initial}"
            )
        if self.k_prime < 1 or self.min_generated < 0 or self.cap < 1:
            raise ValidationError("k_prime and cap must be >= 1, min_generated >= 0")

    def penalty_at(self, run_index: int) -> float:
        """Exact decimal grid: penalty_initial - run_index * penalty_step."""
        p = Decimal(str(self.penalty_initial)) - run_index * Decimal(str(self.penalty_step))
        return float(p)


@dataclass(frozen=True)
class ScheduleResult:
    lattice: Lattice
    pseudo_refs: tuple[Sentence, ...]
    final_penalty: float
    runs: int
    exhausted: bool
    truncated: bool


def generate_with_schedule(
    refs: ReferenceSet, provider: SimilarityProvider, cfg: SelectionConfig
) -> ScheduleResult:
    """Compress and enumerate, lowering the penalty until enough
    pseudo-references (traversal strings not equal to any gold) exist."""
    gold_texts = {s.text() for s in refs.refs}
    run = 0
    while True:
        penalty = cfg.penalty_at(run)
        lat = compress(refs, provider, penalty)
        enum = enumerate_paths(lat, cfg.cap)
        pseudo = tuple(s for s in enum.sentences if s.text() not in gold_texts)
        run += 1
        if not cfg.schedule or len(pseudo) >= cfg.min_generated:
            return ScheduleResult(
                lattice=lat, pseudo_refs=pseudo, final_penalty=penalty,
                runs=run, exhausted=False, truncated=enum.truncated,
            )
        if cfg.penalty_at(run) <= 0.0:
            return ScheduleResult(
                lattice=lat, pseudo_refs=pseudo, final_penalty=penalty,
                runs=run, exhausted=True, truncated=enum.truncated,
            )


def select_top(
    pseudo: Sequence[Sentence], golds: Sequence[Sentence], k_prime: int
) -> list[Sentence]:
    """Keep the (k_prime - len(golds)) pseudo-references with highest BLEU
    against the golds; ties broken by lexicographic string order."""
    budget = k_prime - len(golds)
    if budget < 0:
        raise ValidationError(f"k_prime={k_prime} is below the gold count {len(golds)}")
    if len(pseudo) <= budget:
        return list(pseudo)
    ranked = rank_by_bleu(pseudo, list(golds))
    return [cand for cand, _ in ranked[:budget]]


def expand_example(
    refs: ReferenceSet, provider: SimilarityProvider, cfg: SelectionConfig
) -> tuple[ReferenceSet, ScheduleResult]:
    """Augmented reference set: golds followed by the selected pseudo-refs."""
    result = generate_with_schedule(refs, provider, cfg)
    selected = select_top(result.pseudo_refs, refs.refs, cfg.k_prime)
    augmented = ReferenceSet(
        example_id=refs.example_id,
        refs=tuple(refs.refs) + tuple(selected),
        source=refs.source,
    )
    return augmented, result


# --- dataset conversions ---------------------------------------------------

def convert_sample_one(corpus: Sequence[ReferenceSet], seed: EpochSeed) -> ExpandedDataset:
    """One uniformly drawn reference per example, in corpus order."""
    rng = seed.stream()
    entries = tuple(
        (ex.example_id, ex.refs[rng.randbelow(ex.k)]) for ex in corpus
    )
    return ExpandedDataset(entries=entries)


def convert_uniform(corpus: Sequence[ReferenceSet]) -> ExpandedDataset:
    """Every reference of every example, grouped by example in corpus order."""
    entries = tuple(
        (ex.example_id, ref) for ex in corpus for ref in ex.refs
    )
    return ExpandedDataset(entries=entries)


def convert_shuffle(corpus: Sequence[ReferenceSet], seed: EpochSeed) -> ExpandedDataset:
    """A seeded uniform permutation of the Uniform conversion."""
    entries = list(convert_uniform(corpus).entries)
    seed.stream().shuffle(entries)
    return ExpandedDataset(entries=tuple(entries))
