"""Deterministic TSV/JSON rendering of analysis results.

All emitters produce UTF-8 text with LF line endings; label order follows the
matrix ordering (configured order for relation matrices, lexicographic for
POS matrices) so reruns are byte-identical.
"""

from __future__ import annotations

import json
import os

from .alignment import (
    MANY_TO_MANY,
    MANY_TO_ONE,
    ONE_TO_MANY,
    ONE_TO_ONE,
    AlignmentSummary,
)
from .divergence import ConfusionMatrix, percentages, preservation, translation_entropy
from .dorr import DorrReport

TSV = "tsv"
JSON = "json"

DORR_ROWS = (
    ("Thematic-Full", "thematic_full"),
    ("Thematic nsubj→obj/obl", "thematic_nsubj_to_obj_obl"),
    ("Promotional", "promotional"),
    ("Demotional", "demotional"),
    ("Structural", "structural"),
    ("Conflational", "conflational"),
    ("Categorial nsubj+obj", "categorial_nsubj_obj"),
    ("Categorial nsubj+(i)obj/obl", "categorial_nsubj_iobj_obl"),
    ("#Sentences", "sentences"),
)


def write_text(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def to_json(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def _sorted_tail(tail: dict[str, int]) -> dict[str, int]:
    return dict(sorted(tail.items(), key=lambda kv: (-kv[1], kv[0])))


MAX_TSV_PATH_EDGES = 8


def _display_path(rendered: str) -> str:
    """Truncate long paths in TSV cells; JSON keeps the full rendering."""
    segments = rendered.split("+")
    if len(segments) <= MAX_TSV_PATH_EDGES:
        return rendered
    return "+".join(segments[:MAX_TSV_PATH_EDGES]) + "+..."


def matrix_counts_tsv(matrix: ConfusionMatrix, include_tail: bool = True) -> str:
    """Raw-count table; relation matrices add Collapsed/Other/MCOP columns."""
    header = ["label", *matrix.col_labels]
    if include_tail:
        header += ["Collapsed", "Other", "MCOP#", "MCOP"]
    lines = ["\t".join(header)]
    for row in matrix.row_labels:
        cells = [row] + [str(matrix.count(row, col)) for col in matrix.col_labels]
        if include_tail:
            top = matrix.mcop(row)
            cells += [
                str(matrix.collapsed.get(row, 0)),
                str(matrix.other_total(row)),
                str(top[1]) if top else "0",
                _display_path(top[0]) if top else "",
            ]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def matrix_percent_tsv(matrix: ConfusionMatrix, include_tail: bool = True) -> str:
    """Per-row percentage table; empty rows are omitted."""
    header = ["label", *matrix.col_labels]
    if include_tail:
        header += ["Collapsed", "Other", "MCOP%", "MCOP"]
    lines = ["\t".join(header)]
    rows = percentages(matrix)
    for row in matrix.row_labels:
        if row not in rows:
            continue
        values = rows[row]
        cells = [row] + [f"{values[col]:.2f}" for col in matrix.col_labels]
        if include_tail:
            cells += [
                f"{values['Collapsed']:.2f}",
                f"{values['Other']:.2f}",
                f"{values['MCOP%']:.2f}",
                _display_path(str(values["MCOP"])),
            ]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def matrix_counts_json(matrix: ConfusionMatrix) -> str:
    payload = {
        "row_labels": list(matrix.row_labels),
        "col_labels": list(matrix.col_labels),
        "counts": {
            row: {
                col: matrix.count(row, col)
                for col in matrix.col_labels
                if matrix.count(row, col)
            }
            for row in matrix.row_labels
        },
        "collapsed": {
            row: matrix.collapsed[row]
            for row in matrix.row_labels
            if matrix.collapsed.get(row)
        },
        "unaligned": {
            row: matrix.unaligned[row]
            for row in matrix.row_labels
            if matrix.unaligned.get(row)
        },
        "other": {
            row: _sorted_tail(matrix.other[row])
            for row in matrix.row_labels
            if matrix.other.get(row)
        },
    }
    return to_json(payload)


def matrix_percent_json(matrix: ConfusionMatrix) -> str:
    rows = percentages(matrix)
    payload_rows = {}
    for row in matrix.row_labels:
        if row not in rows:
            continue
        values = rows[row]
        entry = {col: values[col] for col in matrix.col_labels}
        entry["Collapsed"] = values["Collapsed"]
        entry["Other"] = values["Other"]
        # Both long-tail conventions: the bare tail and the tail plus collapse.
        entry["Other+Collapsed"] = values["Other"] + values["Collapsed"]
        entry["MCOP%"] = values["MCOP%"]
        entry["MCOP"] = values["MCOP"]
        payload_rows[row] = entry
    omitted = [row for row in matrix.row_labels if row not in rows]
    return to_json({"rows": payload_rows, "omitted": omitted})


def entropy_table(matrix: ConfusionMatrix, include_unaligned: bool = False) -> dict[str, float]:
    out = {}
    for row in matrix.row_labels:
        if matrix.row_total(row, include_unaligned) > 0:
            out[row] = translation_entropy(matrix, row, include_unaligned)
    return out


def entropy_tsv(matrix: ConfusionMatrix) -> str:
    lines = ["label\tentropy"]
    lines += [f"{row}\t{value:.6f}" for row, value in entropy_table(matrix).items()]
    return "\n".join(lines) + "\n"


def entropy_json(matrix: ConfusionMatrix) -> str:
    return to_json(entropy_table(matrix))


def preservation_tsv(matrix: ConfusionMatrix) -> str:
    lines = ["label\tpreservation"]
    lines += [f"{row}\t{value:.6f}" for row, value in preservation(matrix).items()]
    return "\n".join(lines) + "\n"


def preservation_json(matrix: ConfusionMatrix) -> str:
    return to_json(preservation(matrix))


def dorr_tsv(report: DorrReport) -> str:
    lines = [f"{title}\t{getattr(report, attr)}" for title, attr in DORR_ROWS]
    return "\n".join(lines) + "\n"


def dorr_json(report: DorrReport) -> str:
    payload = {attr: getattr(report, attr) for _, attr in DORR_ROWS}
    payload["hits"] = [
        {"pair": pair_index, "type": kind, "endpoints": list(endpoints)}
        for pair_index, kind, endpoints in report.per_sentence_hits
    ]
    return to_json(payload)


def dorr_hits_json(report: DorrReport) -> str:
    return to_json(
        [
            {"pair": pair_index, "type": kind, "endpoints": list(endpoints)}
            for pair_index, kind, endpoints in report.per_sentence_hits
        ]
    )


def _summary_items(summary: AlignmentSummary) -> list[tuple[str, object]]:
    share = summary.one_to_one_src_share
    return [
        ("pairs", summary.pairs),
        ("links", summary.links),
        ("components_one_to_one", summary.component_kinds.get(ONE_TO_ONE, 0)),
        ("components_many_to_one", summary.component_kinds.get(MANY_TO_ONE, 0)),
        ("components_one_to_many", summary.component_kinds.get(ONE_TO_MANY, 0)),
        ("components_many_to_many", summary.component_kinds.get(MANY_TO_MANY, 0)),
        ("aligned_src_tokens", summary.aligned_src_tokens),
        ("one_to_one_src_tokens", summary.one_to_one_src_tokens),
        ("one_to_one_src_share", round(share, 6) if share is not None else None),
        ("reduced_pairs", summary.reduced_pairs),
        ("dropped_tie_components", summary.dropped_tie_components),
        ("dropped_many_to_many_components", summary.dropped_many_to_many),
    ]


def alignment_summary_tsv(summary: AlignmentSummary) -> str:
    lines = []
    for key, value in _summary_items(summary):
        rendered = "" if value is None else (
            f"{value:.6f}" if isinstance(value, float) else str(value)
        )
        lines.append(f"{key}\t{rendered}")
    return "\n".join(lines) + "\n"


def alignment_summary_json(summary: AlignmentSummary) -> str:
    return to_json(dict(_summary_items(summary)))


def pr_report_tsv(result: dict) -> str:
    lines = []
    for key in ("precision", "recall"):
        value = result[key]
        lines.append(f"{key}\t{'undefined' if value is None else f'{value:.6f}'}")
    for key in ("matched", "predicted", "gold"):
        lines.append(f"{key}\t{result[key]}")
    for label, value in result["per_label_recall"].items():
        lines.append(f"recall[{label}]\t{value:.6f}")
    return "\n".join(lines) + "\n"


def pr_report_json(result: dict) -> str:
    return to_json(result)
