"""Corpus-scale analysis of generated references: path counts and top-50 BLEU."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .bleu import rank_by_bleu
from .core import ReferenceSet, ReflatticeError
from .expand import SelectionConfig, generate_with_schedule
from .lattice import count_paths_detail
from .similarity import SimilarityProvider

CSV_HEADER = [
    "example_id",
    "mean_ref_length",
    "path_count_total",
    "pseudo_count",
    "mean_bleu_top50",
    "final_penalty",
    "string_collision_delta",
    "error",
]

TOP_N = 50


@dataclass(frozen=True)
class StatsRow:
    example_id: str
    mean_ref_length: Optional[float] = None
    path_count_total: Optional[int] = None
    pseudo_count: Optional[int] = None
    mean_bleu_top50: Optional[float] = None
    final_penalty: Optional[float] = None
    string_collision_delta: Optional[int] = None
    error: str = ""

    def as_csv_fields(self) -> list[str]:
        return [
            self.example_id,
            "" if self.mean_ref_length is None else f"{self.mean_ref_length:.4f}",
            "" if self.path_count_total is None else str(self.path_count_total),
            "" if self.pseudo_count is None else str(self.pseudo_count),
            "" if self.mean_bleu_top50 is None else f"{self.mean_bleu_top50:.2f}",
            "" if self.final_penalty is None else f"{self.final_penalty:g}",
            "" if self.string_collision_delta is None else str(self.string_collision_delta),
            self.error,
        ]


def example_stats(
    refs: ReferenceSet, provider: SimilarityProvider, cfg: SelectionConfig
) -> StatsRow:
    try:
        result = generate_with_schedule(refs, provider, cfg)
        counted = count_paths_detail(result.lattice, verify_cap=cfg.cap)
        # Collision delta (combination overcount) is only well-defined when
        # the count could be verified by complete enumeration.
        delta = counted.combinations - counted.value if counted.verified else None
        mean_bleu = None
        if result.pseudo_refs:
            ranked = rank_by_bleu(list(result.pseudo_refs), list(refs.refs))
            top = ranked[:TOP_N]
            mean_bleu = sum(score.value for _, score in top) / len(top)
        mean_len = sum(len(s) for s in refs.refs) / refs.k
        return StatsRow(
            example_id=refs.example_id,
            mean_ref_length=mean_len,
            path_count_total=counted.value,
            pseudo_count=len(result.pseudo_refs),
            mean_bleu_top50=mean_bleu,
            final_penalty=result.final_penalty,
            string_collision_delta=delta,
        )
    except ReflatticeError as e:
        return StatsRow(example_id=refs.example_id, error=str(e))


def corpus_stats(
    corpus: Sequence[ReferenceSet],
    provider: SimilarityProvider,
    cfg: SelectionConfig,
    threads: int = 1,
) -> list[StatsRow]:
    """One row per example, in corpus order regardless of thread count.
    Per-example failures land in the error column; the run continues."""
    if threads <= 1:
        return [example_stats(ex, provider, cfg) for ex in corpus]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ex: example_stats(ex, provider, cfg), corpus))


def rows_to_csv(rows: Sequence[StatsRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv_fields())
    return buf.getvalue()
