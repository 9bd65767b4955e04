"""Pairwise DP alignment over the penalized substitution matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Alignment, ReferenceSet, SubstitutionMatrix
from .similarity import SimilarityProvider, build_matrix

# back-pointer codes
_NONE, _DIAG, _UP, _LEFT = 0, 1, 2, 3


@dataclass(frozen=True)
class DPTable:
    """Cumulative optimum and back-pointers for a substitution matrix.

    opt[u][v] is the best total over monotone alignments of the first u rows
    against the first v columns; gap moves (up/left) are free, a diagonal move
    adds the penalized cell score.
    """

    opt: np.ndarray
    move: np.ndarray


def build_dp_table(m: SubstitutionMatrix) -> DPTable:
    rows, cols = m.rows, m.cols
    opt = np.zeros((rows + 1, cols + 1), dtype=np.float64)
    move = np.zeros((rows + 1, cols + 1), dtype=np.int8)
    move[1:, 0] = _UP
    move[0, 1:] = _LEFT
    s = m.scores
    for u in range(1, rows + 1):
        for v in range(1, cols + 1):
            diag = opt[u - 1, v - 1] + s[u - 1, v - 1]
            up = opt[u - 1, v]
            left = opt[u, v - 1]
            best = max(diag, up, left)
            # Tie order diag > up > left, except that a diagonal over a
            # below-penalty cell is never taken: alignment requires raw >= p.
            if best == diag and s[u - 1, v - 1] >= 0.0:
                move[u, v] = _DIAG
            elif best == up:
                move[u, v] = _UP
            else:
                move[u, v] = _LEFT
            opt[u, v] = best
    return DPTable(opt=opt, move=move)


def dp_align(m: SubstitutionMatrix) -> Alignment:
    """Optimal monotone alignment; pairs are the diagonal traceback steps."""
    table = build_dp_table(m)
    pairs = []
    u, v = m.rows, m.cols
    while u > 0 or v > 0:
        mv = table.move[u, v]
        if mv == _DIAG:
            pairs.append((u - 1, v - 1))
            u, v = u - 1, v - 1
        elif mv == _UP:
            u -= 1
        else:
            v -= 1
    pairs.reverse()
    return Alignment(pairs=tuple(pairs), score=float(table.opt[m.rows, m.cols]))


def pair_alignments(
    refs: ReferenceSet, provider: SimilarityProvider, penalty: float
) -> list[tuple[tuple[int, int], Alignment]]:
    """Optimal alignment for every reference pair i < j, sorted by score.

    Descending by score, ties broken by (i, j) lexicographic. Each pair DP is
    independent, so the list is identical regardless of evaluation order.
    """
    out = []
    for i in range(refs.k):
        for j in range(i + 1, refs.k):
            m = build_matrix(refs.refs[i], refs.refs[j], provider, penalty)
            out.append(((i, j), dp_align(m)))
    out.sort(key=lambda item: (-item[1].score, item[0]))
    return out


def pair_scores(
    refs: ReferenceSet, provider: SimilarityProvider, penalty: float
) -> list[tuple[tuple[int, int], float]]:
    """Maximum alignment score per reference pair, best first."""
    if refs.k < 2:
        raise ValueError("pair scoring needs at least two references")
    return [(ij, a.score) for ij, a in pair_alignments(refs, provider, penalty)]


def format_dp_table(m: SubstitutionMatrix, table: DPTable, alignment: Alignment) -> str:
    """Human-readable DP table with the traceback path marked (debug aid)."""
    aligned = set(alignment.pairs)
    lines = ["opt (rows+1 x cols+1), * marks aligned cells:"]
    for u in range(m.rows + 1):
        cells = []
        for v in range(m.cols + 1):
            mark = "*" if u >= 1 and v >= 1 and (u - 1, v - 1) in aligned else " "
            cells.append(f"{table.opt[u, v]:7.3f}{mark}")
        lines.append(" ".join(cells))
    lines.append(f"alignment pairs: {list(alignment.pairs)}")
    lines.append(f"score: {alignment.score:g}")
    return "\n".join(lines)
