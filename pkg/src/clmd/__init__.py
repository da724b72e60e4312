"""Cross-linguistic morphosyntactic divergence analysis over aligned UD treebanks."""

from .alignment import (
    AlignmentComponent,
    AlignmentGraph,
    AlignmentSummary,
    ReducedAlignment,
    alignment_pr,
    components,
    parse_alignment,
    parse_alignment_file,
    reduce,
    summarize_alignment,
)
from .conllu import (
    DepTree,
    ParseOptions,
    Sentence,
    Token,
    build_tree,
    parse_conllu,
    parse_conllu_file,
    serialize,
    strip_subtype,
)
from .corpus import SentencePair, load_corpus, pair_sentences
from .divergence import (
    COLLAPSED,
    DEFAULT_CONTENT_DEPRELS,
    DEFAULT_EDGE_LABELS,
    PATH,
    SCOPE_ONE_TO_ONE,
    SCOPE_REDUCED,
    UNALIGNED,
    ConfusionMatrix,
    ContentPolicy,
    Csr,
    PathType,
    dependency_path,
    edge_confusion,
    extract_csr,
    is_content,
    percentages,
    pos_confusion,
    preservation,
    translation_entropy,
)
from .dorr import DorrReport, detect_dorr, dorr_report
from .errors import ClmdError, DataError, ParseError, PathError, TreeError, UsageError
from .stats import correlate_preservation, spearman

__version__ = "0.1.0"

__all__ = [
    "AlignmentComponent",
    "AlignmentGraph",
    "AlignmentSummary",
    "COLLAPSED",
    "ClmdError",
    "ConfusionMatrix",
    "ContentPolicy",
    "Csr",
    "DEFAULT_CONTENT_DEPRELS",
    "DEFAULT_EDGE_LABELS",
    "DataError",
    "DepTree",
    "DorrReport",
    "PATH",
    "ParseError",
    "ParseOptions",
    "PathError",
    "PathType",
    "ReducedAlignment",
    "SCOPE_ONE_TO_ONE",
    "SCOPE_REDUCED",
    "Sentence",
    "SentencePair",
    "Token",
    "TreeError",
    "UNALIGNED",
    "UsageError",
    "alignment_pr",
    "build_tree",
    "components",
    "correlate_preservation",
    "dependency_path",
    "detect_dorr",
    "dorr_report",
    "edge_confusion",
    "extract_csr",
    "is_content",
    "load_corpus",
    "pair_sentences",
    "parse_alignment",
    "parse_alignment_file",
    "parse_conllu",
    "parse_conllu_file",
    "percentages",
    "pos_confusion",
    "preservation",
    "reduce",
    "serialize",
    "spearman",
    "strip_subtype",
    "summarize_alignment",
    "translation_entropy",
]
