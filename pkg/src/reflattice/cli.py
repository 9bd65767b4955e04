"""Command-line interface: align / compress / generate / expand / stats / dot."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from . import __version__
from .align import build_dp_table, dp_align, format_dp_table
from .core import (
    ReferenceSet,
    ReflatticeError,
    load_corpus,
    serialize_reference_set,
)
from .expand import (
    EpochSeed,
    SelectionConfig,
    convert_sample_one,
    convert_shuffle,
    convert_uniform,
    expand_example,
)
from .lattice import compress, load_lattice, serialize_lattice, to_dot
from .similarity import (
    HardProvider,
    build_matrix,
    load_contextual_vectors,
    load_static_vectors,
    load_synonym_groups,
)
from .stats import corpus_stats, rows_to_csv


def _add_provider_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--provider",
        choices=["hard", "static", "synonyms", "contextual"],
        default="hard",
        help="word-similarity provider (default: hard identity matching)",
    )
    p.add_argument("--vectors", metavar="FILE", help="static word-vector table (text format)")
    p.add_argument("--syn", metavar="FILE", help="synonym groups, one group per line")
    p.add_argument(
        "--context-vectors", metavar="FILE", help="contextual vector file (JSON lines)"
    )


def _build_provider(args: argparse.Namespace, parser: argparse.ArgumentParser):
    if args.provider == "hard":
        return HardProvider()
    if args.provider == "static":
        if not args.vectors:
            parser.error("--provider static requires --vectors")
        return load_static_vectors(args.vectors)
    if args.provider == "synonyms":
        if not args.syn:
            parser.error("--provider synonyms requires --syn")
        return load_synonym_groups(args.syn)
    if not args.context_vectors:
        parser.error("--provider contextual requires --context-vectors")
    return load_contextual_vectors(args.context_vectors)


def _write_output(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _pick_example(corpus: list[ReferenceSet], example_id: Optional[str],
                  parser: argparse.ArgumentParser) -> ReferenceSet:
    if example_id is None:
        if len(corpus) == 1:
            return corpus[0]
        parser.error(f"corpus has {len(corpus)} examples; pick one with --example")
    for ex in corpus:
        if ex.example_id == example_id:
            return ex
    raise ReflatticeError(f"no example with id {example_id!r} in corpus")


def _selection_config(args: argparse.Namespace) -> SelectionConfig:
    schedule = args.min_refs is not None
    return SelectionConfig(
        k_prime=getattr(args, "k_prime", 1),
        penalty_initial=args.penalty,
        penalty_step=args.penalty_step,
        min_generated=args.min_refs if schedule else 0,
        cap=args.cap,
        schedule=schedule,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reflattice",
        description="Compress multi-reference corpora into word lattices and "
        "generate ranked pseudo-references. File formats are documented in formats.md.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_align = sub.add_parser("align", help="print the DP table and traceback for one reference pair")
    p_align.add_argument("--in", dest="infile", required=True, metavar="CORPUS")
    p_align.add_argument("--example", help="example id (optional when the corpus has one example)")
    p_align.add_argument("--pair", nargs=2, type=int, required=True, metavar=("I", "J"),
                         help="0-based reference indices")
    p_align.add_argument("--penalty", type=float, default=0.5)
    _add_provider_args(p_align)

    p_compress = sub.add_parser("compress", help="compress one example's references into a lattice")
    p_compress.add_argument("--in", dest="infile", required=True, metavar="CORPUS")
    p_compress.add_argument("--example", help="example id (optional when the corpus has one example)")
    p_compress.add_argument("--penalty", type=float, default=0.9)
    p_compress.add_argument("--out", metavar="FILE", help="write the serialized lattice here")
    p_compress.add_argument("--dot", metavar="FILE", help="also write a DOT rendering here")
    _add_provider_args(p_compress)

    p_gen = sub.add_parser("generate", help="write an augmented corpus (golds + selected pseudo-refs)")
    p_gen.add_argument("--in", dest="infile", required=True, metavar="CORPUS")
    p_gen.add_argument("--out", metavar="FILE")
    p_gen.add_argument("--penalty", type=float, default=0.9)
    p_gen.add_argument("--penalty-step", type=float, default=0.05)
    p_gen.add_argument("--min-refs", type=int, default=None,
                       help="enable the penalty schedule: lower the penalty by --penalty-step "
                            "until at least this many pseudo-references exist")
    p_gen.add_argument("--k-prime", type=int, required=True,
                       help="total reference budget per example (golds included)")
    p_gen.add_argument("--cap", type=int, default=100_000, help="enumeration cap per example")
    p_gen.add_argument("--threads", type=int, default=1)
    _add_provider_args(p_gen)

    p_exp = sub.add_parser("expand", help="convert a multi-reference corpus to a single-reference dataset")
    p_exp.add_argument("--in", dest="infile", required=True, metavar="CORPUS")
    p_exp.add_argument("--out", metavar="FILE")
    p_exp.add_argument("--method", choices=["sample-one", "uniform", "shuffle"], required=True)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--epoch", type=int, default=0)

    p_stats = sub.add_parser("stats", help="per-example lattice statistics as CSV")
    p_stats.add_argument("--in", dest="infile", required=True, metavar="CORPUS")
    p_stats.add_argument("--out", metavar="FILE")
    p_stats.add_argument("--penalty", type=float, default=0.9)
    p_stats.add_argument("--penalty-step", type=float, default=0.05)
    p_stats.add_argument("--min-refs", type=int, default=None)
    p_stats.add_argument("--cap", type=int, default=100_000)
    p_stats.add_argument("--threads", type=int, default=1)
    _add_provider_args(p_stats)

    p_dot = sub.add_parser("dot", help="render a serialized lattice file as DOT")
    p_dot.add_argument("--in", dest="infile", required=True, metavar="LATTICE")
    p_dot.add_argument("--out", metavar="FILE")

    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "align":
        corpus = load_corpus(args.infile)
        provider = _build_provider(args, parser)
        ex = _pick_example(corpus, args.example, parser)
        i, j = args.pair
        if not (0 <= i < ex.k and 0 <= j < ex.k):
            raise ReflatticeError(f"pair indices must be in [0, {ex.k - 1}]")
        m = build_matrix(ex.refs[i], ex.refs[j], provider, args.penalty)
        table = build_dp_table(m)
        alignment = dp_align(m)
        print(f"example {ex.example_id}: refs {i} x {j}, penalty {args.penalty:g}")
        print(format_dp_table(m, table, alignment))
        return 0

    if args.command == "compress":
        corpus = load_corpus(args.infile)
        provider = _build_provider(args, parser)
        ex = _pick_example(corpus, args.example, parser)
        lat = compress(ex, provider, args.penalty)
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as f:
                f.write(to_dot(lat))
        if args.out or not args.dot:
            _write_output(serialize_lattice(lat), args.out)
        return 0

    if args.command == "generate":
        corpus = load_corpus(args.infile)
        provider = _build_provider(args, parser)
        cfg = _selection_config(args)

        def one(ex: ReferenceSet) -> str:
            augmented, _ = expand_example(ex, provider, cfg)
            return serialize_reference_set(augmented) + "\n"

        if args.threads > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                lines = list(pool.map(one, corpus))
        else:
            lines = [one(ex) for ex in corpus]
        _write_output("".join(lines), args.out)
        return 0

    if args.command == "expand":
        corpus = load_corpus(args.infile)
        seed = EpochSeed(base_seed=args.seed, epoch=args.epoch)
        if args.method == "sample-one":
            dataset = convert_sample_one(corpus, seed)
        elif args.method == "uniform":
            dataset = convert_uniform(corpus)
        else:
            dataset = convert_shuffle(corpus, seed)
        lines = [
            json.dumps({"example_id": ex_id, "ref": ref.text()}, ensure_ascii=False) + "\n"
            for ex_id, ref in dataset
        ]
        _write_output("".join(lines), args.out)
        return 0

    if args.command == "stats":
        corpus = load_corpus(args.infile)
        provider = _build_provider(args, parser)
        cfg = _selection_config(args)
        rows = corpus_stats(corpus, provider, cfg, threads=args.threads)
        _write_output(rows_to_csv(rows), args.out)
        return 0

    # dot
    lat = load_lattice(args.infile)
    _write_output(to_dot(lat), args.out)
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    try:
        return run(argv)
    except ReflatticeError as e:
        print(f"reflattice: error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"reflattice: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
