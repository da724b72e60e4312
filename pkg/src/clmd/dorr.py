"""Detection of the six formalizable Dorr divergence classes over CSRs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .alignment import ONE_TO_MANY, components
from .conllu import strip_subtype
from .corpus import SentencePair
from .divergence import PATH, SCOPE_ONE_TO_ONE, ContentPolicy, Csr, extract_csr

THEMATIC_FULL = "thematic_full"
THEMATIC_NSUBJ_TO_OBJ_OBL = "thematic_nsubj_to_obj_obl"
PROMOTIONAL = "promotional"
DEMOTIONAL = "demotional"
STRUCTURAL = "structural"
CONFLATIONAL = "conflational"
CATEGORIAL_NSUBJ_OBJ = "categorial_nsubj_obj"
CATEGORIAL_NSUBJ_IOBJ_OBL = "categorial_nsubj_iobj_obl"

_THEMATIC_TARGETS = {"obj", "obl"}
_CATEGORIAL_TARGETS = {"nsubj+obj", "nsubj+iobj", "nsubj+obl"}


@dataclass
class DorrReport:
    """Counts of divergence classes plus a per-sentence hit log.

    Hits are (pair index, divergence type, endpoint ids); endpoints are
    source-side token ids, except for conflational hits which record
    (source root id, target root id).
    """

    thematic_full: int = 0
    thematic_nsubj_to_obj_obl: int = 0
    promotional: int = 0
    demotional: int = 0
    structural: int = 0
    conflational: int = 0
    categorial_nsubj_obj: int = 0
    categorial_nsubj_iobj_obl: int = 0
    sentences: int = 0
    per_sentence_hits: list[tuple[int, str, tuple[int, ...]]] = field(default_factory=list)

    def merge(self, other: "DorrReport") -> "DorrReport":
        return DorrReport(
            thematic_full=self.thematic_full + other.thematic_full,
            thematic_nsubj_to_obj_obl=self.thematic_nsubj_to_obj_obl
            + other.thematic_nsubj_to_obj_obl,
            promotional=self.promotional + other.promotional,
            demotional=self.demotional + other.demotional,
            structural=self.structural + other.structural,
            conflational=self.conflational + other.conflational,
            categorial_nsubj_obj=self.categorial_nsubj_obj + other.categorial_nsubj_obj,
            categorial_nsubj_iobj_obl=self.categorial_nsubj_iobj_obl
            + other.categorial_nsubj_iobj_obl,
            sentences=self.sentences + other.sentences,
            per_sentence_hits=self.per_sentence_hits + other.per_sentence_hits,
        )


def detect_dorr(
    csrs: list[Csr],
    pair: SentencePair,
    *,
    direction_sensitive: bool = False,
) -> DorrReport:
    """Classify one sentence pair's CSRs into Dorr divergence counters.

    CSR patterns are matched on label sequences; pass direction_sensitive
    to compare full direction-annotated renderings instead. The conflational
    check inspects one-to-many components directly: a source root aligned
    with a target root plus one of its objects.
    """

    def key(path) -> str:
        return path.render() if direction_sensitive else path.bare()

    report = DorrReport(sentences=1)
    hits = report.per_sentence_hits
    forward: tuple[int, int] | None = None
    inverse = False
    for csr in csrs:
        if csr.outcome != PATH:
            continue
        src_key, tgt_key = key(csr.src_path), key(csr.tgt_path)
        if src_key == "nsubj":
            if tgt_key in _THEMATIC_TARGETS:
                report.thematic_nsubj_to_obj_obl += 1
                hits.append((pair.index, THEMATIC_NSUBJ_TO_OBJ_OBL, csr.src_endpoints))
                if forward is None:
                    forward = csr.src_endpoints
            if tgt_key == "nsubj+obj":
                report.categorial_nsubj_obj += 1
                hits.append((pair.index, CATEGORIAL_NSUBJ_OBJ, csr.src_endpoints))
            if tgt_key in _CATEGORIAL_TARGETS:
                report.categorial_nsubj_iobj_obl += 1
                hits.append((pair.index, CATEGORIAL_NSUBJ_IOBJ_OBL, csr.src_endpoints))
        elif src_key in _THEMATIC_TARGETS and tgt_key == "nsubj":
            inverse = True
        if src_key == "advmod" and tgt_key == "xcomp":
            report.promotional += 1
            hits.append((pair.index, PROMOTIONAL, csr.src_endpoints))
        elif src_key == "xcomp" and tgt_key == "advmod":
            report.demotional += 1
            hits.append((pair.index, DEMOTIONAL, csr.src_endpoints))
        elif src_key == "obj" and tgt_key == "obl":
            report.structural += 1
            hits.append((pair.index, STRUCTURAL, csr.src_endpoints))
    if forward is not None and inverse:
        report.thematic_full += 1
        hits.append((pair.index, THEMATIC_FULL, forward))

    for comp in components(pair.align):
        if comp.kind != ONE_TO_MANY:
            continue
        (src_id,) = comp.src_ids
        if pair.src.parent[src_id] != 0:
            continue
        for tgt_root in sorted(comp.tgt_ids):
            if pair.tgt.parent[tgt_root] != 0:
                continue
            has_obj = any(
                pair.tgt.parent[tid] == tgt_root
                and strip_subtype(pair.tgt.deprel(tid)) == "obj"
                for tid in comp.tgt_ids
            )
            if has_obj:
                report.conflational += 1
                hits.append((pair.index, CONFLATIONAL, (src_id, tgt_root)))
                break
    return report


def dorr_report(
    pairs: list[SentencePair],
    policy: ContentPolicy,
    *,
    with_direction: bool = False,
    direction_sensitive: bool = False,
) -> DorrReport:
    """Run divergence detection over a corpus; subtypes are always stripped."""
    report = DorrReport()
    for pair in pairs:
        csrs = extract_csr(
            pair,
            policy,
            SCOPE_ONE_TO_ONE,
            strip_subtypes=True,
            with_direction=with_direction,
        )
        report = report.merge(
            detect_dorr(csrs, pair, direction_sensitive=direction_sensitive)
        )
    return report
