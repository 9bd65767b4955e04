"""Compress multi-reference corpora into word lattices and generate pseudo-references."""

from .core import (
    Alignment,
    CorpusFormatError,
    ExpandedDataset,
    Lattice,
    LatticeCycleError,
    ProviderError,
    ReferenceSet,
    ReflatticeError,
    Sentence,
    SubstitutionMatrix,
    Token,
    ValidationError,
    load_corpus,
    parse_corpus,
    sentence_id,
    serialize_corpus,
    write_corpus,
)
from .similarity import (
    ContextualVectorProvider,
    HardProvider,
    SimilarityProvider,
    StaticVectorProvider,
    SynonymTableProvider,
    build_matrix,
    load_contextual_vectors,
    load_static_vectors,
    load_synonym_groups,
    normalized_cosine,
)
from .align import DPTable, build_dp_table, dp_align, pair_alignments, pair_scores
from .lattice import (
    MergePlan,
    compress,
    count_combinations,
    count_paths,
    count_paths_detail,
    enumerate_paths,
    initial_lattice,
    load_lattice,
    merge_pair,
    parse_lattice,
    plan_merges,
    serialize_lattice,
    to_dot,
)

__version__ = "0.1.0"
