"""Loading and pairing of parallel CoNLL-U files with their alignment."""

from __future__ import annotations

from dataclasses import dataclass

from .alignment import AlignmentGraph, parse_alignment
from .conllu import DepTree, ParseOptions, Sentence, build_tree, parse_conllu
from .errors import DataError, ParseError

PAIR_BY_POSITION = "position"
PAIR_BY_SENT_ID = "sent_id"


@dataclass
class SentencePair:
    """One aligned sentence pair with both trees built."""

    index: int
    src: DepTree
    tgt: DepTree
    align: AlignmentGraph


def read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def pair_sentences(
    src: list[Sentence], tgt: list[Sentence], pair_by: str = PAIR_BY_POSITION
) -> list[tuple[Sentence, Sentence]]:
    """Pair source and target sentences positionally or on sent_id."""
    if pair_by == PAIR_BY_POSITION:
        if len(src) != len(tgt):
            raise DataError(
                f"source has {len(src)} sentences, target {len(tgt)}"
            )
        return list(zip(src, tgt))
    if pair_by != PAIR_BY_SENT_ID:
        raise ValueError(f"unknown pairing mode {pair_by!r}")
    by_id: dict[str, Sentence] = {}
    for sentence in tgt:
        if sentence.sent_id is None:
            raise DataError("target sentence without sent_id under sent_id pairing")
        if sentence.sent_id in by_id:
            raise DataError(f"duplicate target sent_id {sentence.sent_id!r}")
        by_id[sentence.sent_id] = sentence
    pairs = []
    for sentence in src:
        if sentence.sent_id is None:
            raise DataError("source sentence without sent_id under sent_id pairing")
        if sentence.sent_id not in by_id:
            raise DataError(f"sent_id {sentence.sent_id!r} missing from target")
        pairs.append((sentence, by_id[sentence.sent_id]))
    return pairs


def load_corpus(
    src_path: str,
    tgt_path: str,
    align_path: str,
    *,
    pair_by: str = PAIR_BY_POSITION,
    index_base: int = 1,
    parse_options: ParseOptions | None = None,
) -> list[SentencePair]:
    """Load a parallel corpus; raises on the first inconsistency found."""
    src_sentences = _parse_side(src_path, parse_options)
    tgt_sentences = _parse_side(tgt_path, parse_options)
    try:
        graphs = parse_alignment(read_text(align_path), index_base)
    except ParseError as exc:
        raise ParseError(f"{align_path}: {exc}") from exc
    paired = pair_sentences(src_sentences, tgt_sentences, pair_by)
    if len(graphs) != len(paired):
        raise DataError(
            f"{align_path}: {len(graphs)} alignment lines for {len(paired)} sentence pairs"
        )
    out: list[SentencePair] = []
    for index, ((src_sentence, tgt_sentence), graph) in enumerate(zip(paired, graphs)):
        src_tree = build_tree(src_sentence)
        tgt_tree = build_tree(tgt_sentence)
        for s, t in sorted(graph.links):
            if not 1 <= s <= len(src_tree):
                raise DataError(
                    f"pair {index + 1}: link {s}-{t} source id outside 1..{len(src_tree)}"
                )
            if not 1 <= t <= len(tgt_tree):
                raise DataError(
                    f"pair {index + 1}: link {s}-{t} target id outside 1..{len(tgt_tree)}"
                )
        out.append(SentencePair(index=index, src=src_tree, tgt=tgt_tree, align=graph))
    return out


def _parse_side(path: str, options: ParseOptions | None) -> list[Sentence]:
    try:
        return parse_conllu(read_text(path), options)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc
