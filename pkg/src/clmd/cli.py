"""Command-line front end: validate, analyze, and export divergence reports."""

from __future__ import annotations

import argparse
import multiprocessing
import os
import sys
from dataclasses import dataclass, replace

from . import reports
from .alignment import (
    MANY_TO_MANY,
    AlignmentSummary,
    alignment_pr,
    components,
    parse_alignment,
    reduce,
    summarize_alignment,
)
from .conllu import build_tree, parse_conllu
from .corpus import SentencePair, load_corpus, pair_sentences, read_text
from .divergence import (
    DEFAULT_EDGE_LABELS,
    ConfusionMatrix,
    ContentPolicy,
    edge_confusion,
    pos_confusion,
)
from .dorr import DorrReport, dorr_report
from .errors import ClmdError, DataError, UsageError
from .stats import correlate_preservation, read_scores_tsv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

THREADS_ENV = "CLMD_THREADS"


@dataclass
class RunConfig:
    src: str | None = None
    tgt: str | None = None
    align: str | None = None
    pred: str | None = None
    scores: str | None = None
    pair_by: str = "position"
    index_base: int = 1
    policy: str = "deprel"
    deprel_whitelist: tuple[str, ...] | None = None
    upos_content: tuple[str, ...] | None = None
    upos_function: tuple[str, ...] | None = None
    spatial_adp_as_content: bool = False
    spatial_lemmas: tuple[str, ...] | None = None
    keep_subtypes: bool = False
    direction: bool = False
    rows: tuple[str, ...] = DEFAULT_EDGE_LABELS
    cols: tuple[str, ...] = DEFAULT_EDGE_LABELS
    format: str = "tsv"
    out: str | None = None
    percent: bool = False

    def content_policy(self) -> ContentPolicy:
        policy = ContentPolicy(mode=self.policy)
        if self.deprel_whitelist:
            policy = replace(policy, deprel_whitelist=frozenset(self.deprel_whitelist))
        if self.upos_content:
            policy = replace(policy, upos_content=frozenset(self.upos_content))
        if self.upos_function:
            policy = replace(policy, upos_function=frozenset(self.upos_function))
        if self.spatial_adp_as_content:
            policy = replace(policy, spatial_adp_as_content=True)
        if self.spatial_lemmas:
            policy = replace(policy, spatial_adp_lemmas=frozenset(self.spatial_lemmas))
        return policy


_LIST_KEYS = {"deprel_whitelist", "upos_content", "upos_function", "spatial_lemmas", "rows", "cols"}
_BOOL_KEYS = {"keep_subtypes", "direction", "spatial_adp_as_content", "percent"}
_INT_KEYS = {"index_base"}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise UsageError(message)


def _split_list(value: str) -> tuple[str, ...]:
    return tuple(item.strip() for item in value.split(",") if item.strip())


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"cannot parse boolean value {value!r}")


def load_config_file(path: str) -> dict:
    """Flat key=value configuration; '#' comments and blank lines ignored."""
    values: dict = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in RunConfig.__dataclass_fields__:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        if key in _LIST_KEYS:
            values[key] = _split_list(value)
        elif key in _BOOL_KEYS:
            values[key] = _parse_bool(value)
        elif key in _INT_KEYS:
            values[key] = int(value)
        else:
            values[key] = value
    return values


def build_parser() -> _Parser:
    parser = _Parser(prog="clmd", description=__doc__)
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--src", help="source-side CoNLL-U file")
    common.add_argument("--tgt", help="target-side CoNLL-U file")
    common.add_argument("--align", help="Pharaoh alignment file")
    common.add_argument("--pred", help="predicted alignment file (align-eval)")
    common.add_argument("--scores", help="two-column label/score TSV (preservation)")
    common.add_argument("--pair-by", choices=("position", "sent_id"), dest="pair_by")
    common.add_argument("--index-base", type=int, choices=(0, 1), dest="index_base")
    common.add_argument("--policy", choices=("deprel", "upos", "hybrid"))
    common.add_argument(
        "--keep-subtypes",
        action="store_const",
        const=True,
        dest="keep_subtypes",
        help="keep relation subtypes (acl:relcl) in paths and matrices",
    )
    common.add_argument(
        "--direction",
        action="store_const",
        const=True,
        help="annotate path edges with tree direction",
    )
    common.add_argument("--rows", help="comma-separated matrix row labels")
    common.add_argument("--cols", help="comma-separated matrix column labels")
    common.add_argument("--format", choices=("tsv", "json"))
    common.add_argument("--out", help="output directory")
    common.add_argument(
        "--percent",
        action="store_const",
        const=True,
        help="emit percentages instead of raw counts (matrix commands)",
    )

    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    sub.add_parser("validate", parents=[common]).set_defaults(func=cmd_validate)
    sub.add_parser("analyze", parents=[common]).set_defaults(func=cmd_analyze)
    sub.add_parser("pos-matrix", parents=[common]).set_defaults(func=cmd_pos_matrix)
    sub.add_parser("path-matrix", parents=[common]).set_defaults(func=cmd_path_matrix)
    sub.add_parser("entropy", parents=[common]).set_defaults(func=cmd_entropy)
    sub.add_parser("preservation", parents=[common]).set_defaults(func=cmd_preservation)
    sub.add_parser("dorr", parents=[common]).set_defaults(func=cmd_dorr)
    sub.add_parser("align-eval", parents=[common]).set_defaults(func=cmd_align_eval)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Apply precedence: command-line flags > config file > defaults."""
    values: dict = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for key in RunConfig.__dataclass_fields__:
        flag = getattr(args, key, None)
        if flag is not None:
            if key in _LIST_KEYS and isinstance(flag, str):
                flag = _split_list(flag)
            values[key] = flag
    config = RunConfig(**values)
    if not config.rows or not config.cols:
        raise UsageError("row/column label lists must not be empty")
    return config


def _require(config: RunConfig, *fields: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in fields if getattr(config, name) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join(missing)}")


def _worker_count(n_units: int) -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        threads = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    return max(1, min(threads, n_units)) if n_units else 1


def _load(config: RunConfig) -> list[SentencePair]:
    _require(config, "src", "tgt", "align")
    return load_corpus(
        config.src,
        config.tgt,
        config.align,
        pair_by=config.pair_by,
        index_base=config.index_base,
    )


@dataclass
class AnalysisBundle:
    pos: ConfusionMatrix
    edge: ConfusionMatrix
    dorr: DorrReport
    summary: AlignmentSummary

    def merge(self, other: "AnalysisBundle") -> "AnalysisBundle":
        return AnalysisBundle(
            pos=self.pos.merge(other.pos),
            edge=self.edge.merge(other.edge),
            dorr=self.dorr.merge(other.dorr),
            summary=self.summary.merge(other.summary),
        )


def _analyze_chunk(task: tuple[list[SentencePair], RunConfig]) -> AnalysisBundle:
    pairs, config = task
    policy = config.content_policy()
    summary = AlignmentSummary()
    for pair in pairs:
        summary = summary.merge(summarize_alignment(pair.align, pair.src, pair.tgt))
    return AnalysisBundle(
        pos=pos_confusion(pairs, policy),
        edge=edge_confusion(
            pairs,
            policy,
            row_labels=config.rows,
            col_labels=config.cols,
            strip_subtypes=not config.keep_subtypes,
            with_direction=config.direction,
        ),
        dorr=dorr_report(pairs, policy, with_direction=config.direction),
        summary=summary,
    )


def analyze_corpus(pairs: list[SentencePair], config: RunConfig) -> AnalysisBundle:
    """Run the full analysis, sharding across workers when CLMD_THREADS > 1."""
    workers = _worker_count(len(pairs))
    if workers <= 1 or len(pairs) < 2 * workers:
        return _analyze_chunk((pairs, config))
    chunk_size = (len(pairs) + workers - 1) // workers
    chunks = [pairs[i : i + chunk_size] for i in range(0, len(pairs), chunk_size)]
    with multiprocessing.Pool(workers) as pool:
        bundles = pool.map(_analyze_chunk, [(chunk, config) for chunk in chunks])
    merged = bundles[0]
    for bundle in bundles[1:]:
        merged = merged.merge(bundle)
    return merged


def _emit(config: RunConfig, name: str, tsv_text: str, json_text: str) -> None:
    """Write `name.<fmt>` under --out, or print to stdout when --out is absent."""
    text = json_text if config.format == "json" else tsv_text
    if config.out:
        reports.write_text(os.path.join(config.out, f"{name}.{config.format}"), text)
    else:
        sys.stdout.write(text)


def cmd_validate(config: RunConfig) -> int:
    _require(config, "src", "tgt", "align")
    fatal: list[str] = []
    warnings: list[str] = []
    try:
        src_sentences = parse_conllu(read_text(config.src))
        tgt_sentences = parse_conllu(read_text(config.tgt))
        align_text = read_text(config.align)
        graphs = parse_alignment(align_text, config.index_base)
        align_lines = [
            lineno
            for lineno, raw in enumerate(align_text.splitlines(), start=1)
            if not raw.strip().startswith("#")
        ]
        paired = pair_sentences(src_sentences, tgt_sentences, config.pair_by)
        if len(graphs) != len(paired):
            raise DataError(
                f"{len(graphs)} alignment lines for {len(paired)} sentence pairs"
            )
    except ClmdError as exc:
        print(f"fatal: {exc}", file=sys.stderr)
        print("0 pairs, 1 issues")
        return EXIT_DATA

    n_pairs = len(paired)
    for index, ((src_sentence, tgt_sentence), graph) in enumerate(zip(paired, graphs)):
        lineno = align_lines[index] if index < len(align_lines) else -1
        try:
            src_tree = build_tree(src_sentence)
            tgt_tree = build_tree(tgt_sentence)
        except ClmdError as exc:
            fatal.append(f"pair {index + 1}: {exc}")
            continue
        for s, t in sorted(graph.links):
            if not 1 <= s <= len(src_tree):
                fatal.append(
                    f"pair {index + 1} (alignment line {lineno}): "
                    f"link {s}-{t} source id outside 1..{len(src_tree)}"
                )
            if not 1 <= t <= len(tgt_tree):
                fatal.append(
                    f"pair {index + 1} (alignment line {lineno}): "
                    f"link {s}-{t} target id outside 1..{len(tgt_tree)}"
                )
        if any(not 1 <= s <= len(src_tree) or not 1 <= t <= len(tgt_tree) for s, t in graph.links):
            continue
        comps = components(graph)
        n_mm = sum(1 for comp in comps if comp.kind == MANY_TO_MANY)
        if n_mm:
            warnings.append(
                f"pair {index + 1} (alignment line {lineno}): {n_mm} many-to-many component(s)"
            )
        reduced = reduce(graph, src_tree, tgt_tree)
        ties = [c for c in reduced.dropped_components if c.kind != MANY_TO_MANY]
        if ties:
            warnings.append(
                f"pair {index + 1} (alignment line {lineno}): "
                f"{len(ties)} component(s) dropped by depth tie"
            )
    for issue in fatal:
        print(f"fatal: {issue}", file=sys.stderr)
    for issue in warnings:
        print(f"warning: {issue}", file=sys.stderr)
    print(f"{n_pairs} pairs, {len(fatal) + len(warnings)} issues")
    return EXIT_DATA if fatal else EXIT_OK


def cmd_analyze(config: RunConfig) -> int:
    _require(config, "src", "tgt", "align", "out")
    pairs = _load(config)
    bundle = analyze_corpus(pairs, config)
    ext = config.format
    outputs = {
        "pos_counts": (
            reports.matrix_counts_tsv(bundle.pos, include_tail=False),
            reports.matrix_counts_json(bundle.pos),
        ),
        "pos_percent": (
            reports.matrix_percent_tsv(bundle.pos, include_tail=False),
            reports.matrix_percent_json(bundle.pos),
        ),
        "edge_counts": (
            reports.matrix_counts_tsv(bundle.edge),
            reports.matrix_counts_json(bundle.edge),
        ),
        "edge_percent": (
            reports.matrix_percent_tsv(bundle.edge),
            reports.matrix_percent_json(bundle.edge),
        ),
        "entropy": (reports.entropy_tsv(bundle.edge), reports.entropy_json(bundle.edge)),
        "preservation": (
            reports.preservation_tsv(bundle.edge),
            reports.preservation_json(bundle.edge),
        ),
        "dorr": (reports.dorr_tsv(bundle.dorr), reports.dorr_json(bundle.dorr)),
        "alignment_summary": (
            reports.alignment_summary_tsv(bundle.summary),
            reports.alignment_summary_json(bundle.summary),
        ),
    }
    for name, (tsv_text, json_text) in outputs.items():
        text = json_text if ext == "json" else tsv_text
        reports.write_text(os.path.join(config.out, f"{name}.{ext}"), text)
    print(f"wrote {len(outputs)} report files to {config.out}")
    return EXIT_OK


def cmd_pos_matrix(config: RunConfig) -> int:
    pairs = _load(config)
    matrix = pos_confusion(pairs, config.content_policy())
    if config.percent:
        _emit(config, "pos_percent", reports.matrix_percent_tsv(matrix, include_tail=False),
              reports.matrix_percent_json(matrix))
    else:
        _emit(config, "pos_counts", reports.matrix_counts_tsv(matrix, include_tail=False),
              reports.matrix_counts_json(matrix))
    return EXIT_OK


def _edge_matrix(config: RunConfig) -> ConfusionMatrix:
    pairs = _load(config)
    return edge_confusion(
        pairs,
        config.content_policy(),
        row_labels=config.rows,
        col_labels=config.cols,
        strip_subtypes=not config.keep_subtypes,
        with_direction=config.direction,
    )


def cmd_path_matrix(config: RunConfig) -> int:
    matrix = _edge_matrix(config)
    if config.percent:
        _emit(config, "edge_percent", reports.matrix_percent_tsv(matrix),
              reports.matrix_percent_json(matrix))
    else:
        _emit(config, "edge_counts", reports.matrix_counts_tsv(matrix),
              reports.matrix_counts_json(matrix))
    return EXIT_OK


def cmd_entropy(config: RunConfig) -> int:
    matrix = _edge_matrix(config)
    _emit(config, "entropy", reports.entropy_tsv(matrix), reports.entropy_json(matrix))
    return EXIT_OK


def cmd_preservation(config: RunConfig) -> int:
    from .divergence import preservation as preservation_index

    matrix = _edge_matrix(config)
    correlation = None
    if config.scores is not None:
        scores = read_scores_tsv(config.scores)
        correlation = reports.to_json(
            correlate_preservation(preservation_index(matrix), scores)
        )
    if config.out:
        _emit(config, "preservation", reports.preservation_tsv(matrix),
              reports.preservation_json(matrix))
        if correlation is not None:
            reports.write_text(os.path.join(config.out, "correlation.json"), correlation)
    else:
        # stdout carries one artifact: the correlation when scores are given
        sys.stdout.write(correlation if correlation is not None
                         else reports.preservation_tsv(matrix)
                         if config.format == "tsv"
                         else reports.preservation_json(matrix))
    return EXIT_OK


def cmd_dorr(config: RunConfig) -> int:
    pairs = _load(config)
    report = dorr_report(pairs, config.content_policy(), with_direction=config.direction)
    _emit(config, "dorr", reports.dorr_tsv(report), reports.dorr_json(report))
    if config.out:
        reports.write_text(
            os.path.join(config.out, "dorr_hits.json"), reports.dorr_hits_json(report)
        )
    return EXIT_OK


def cmd_align_eval(config: RunConfig) -> int:
    _require(config, "align", "pred")
    gold = parse_alignment(read_text(config.align), config.index_base)
    pred = parse_alignment(read_text(config.pred), config.index_base)
    labels = None
    src_trees = None
    if config.src is not None:
        sentences = parse_conllu(read_text(config.src))
        src_trees = [build_tree(sentence) for sentence in sentences]
        policy = config.content_policy()
        labels = set(policy.deprel_whitelist)
    result = alignment_pr(gold, pred, labels=labels, src_trees=src_trees)
    _emit(config, "align_eval", reports.pr_report_tsv(result), reports.pr_report_json(result))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = resolve_config(args)
        return args.func(config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClmdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
