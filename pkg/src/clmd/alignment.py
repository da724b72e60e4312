"""Content-word alignments: Pharaoh parsing, component analysis, one-to-one reduction."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .conllu import DepTree, strip_subtype
from .errors import DataError, ParseError

ONE_TO_ONE = "one-to-one"
MANY_TO_ONE = "many-to-one"
ONE_TO_MANY = "one-to-many"
MANY_TO_MANY = "many-to-many"


@dataclass(frozen=True)
class AlignmentGraph:
    """Token-level links (src_id, tgt_id) for one sentence pair, 1-based."""

    links: frozenset[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.links)

    def src_ids(self) -> set[int]:
        return {s for s, _ in self.links}

    def tgt_ids(self) -> set[int]:
        return {t for _, t in self.links}


@dataclass(frozen=True)
class AlignmentComponent:
    """A connected component of the bipartite link graph."""

    src_ids: frozenset[int]
    tgt_ids: frozenset[int]
    kind: str


@dataclass
class ReducedAlignment:
    """One-to-one correspondence kept after highest-node reduction."""

    pairs: dict[int, int]
    dropped_components: list[AlignmentComponent]


def classify(n_src: int, n_tgt: int) -> str:
    if n_src == 1 and n_tgt == 1:
        return ONE_TO_ONE
    if n_src > 1 and n_tgt == 1:
        return MANY_TO_ONE
    if n_src == 1 and n_tgt > 1:
        return ONE_TO_MANY
    return MANY_TO_MANY


def parse_alignment(text: str, index_base: int = 1) -> list[AlignmentGraph]:
    """Parse Pharaoh-style alignments, one sentence pair per line.

    Lines hold whitespace-separated "i-j" pairs; an empty line is an empty
    alignment; '#'-prefixed lines are ignored. Indices are converted to
    1-based ids and duplicates dropped.
    """
    if index_base not in (0, 1):
        raise ValueError(f"index_base must be 0 or 1, got {index_base}")
    graphs: list[AlignmentGraph] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        links: set[tuple[int, int]] = set()
        for chunk in line.split():
            src_part, sep, tgt_part = chunk.partition("-")
            if not sep or not src_part.isdigit() or not tgt_part.isdigit():
                raise ParseError(f"malformed link {chunk!r}", lineno)
            src, tgt = int(src_part), int(tgt_part)
            if index_base == 1 and (src == 0 or tgt == 0):
                raise ParseError(f"index 0 in link {chunk!r} under 1-based indexing", lineno)
            if index_base == 0:
                src, tgt = src + 1, tgt + 1
            links.add((src, tgt))
        graphs.append(AlignmentGraph(frozenset(links)))
    return graphs


def parse_alignment_file(path: str, index_base: int = 1) -> list[AlignmentGraph]:
    with open(path, encoding="utf-8") as handle:
        return parse_alignment(handle.read(), index_base)


def components(graph: AlignmentGraph) -> list[AlignmentComponent]:
    """Split the bipartite link graph into connected components, classified by kind."""
    src_adj: dict[int, set[int]] = defaultdict(set)
    tgt_adj: dict[int, set[int]] = defaultdict(set)
    for s, t in graph.links:
        src_adj[s].add(t)
        tgt_adj[t].add(s)
    seen_src: set[int] = set()
    out: list[AlignmentComponent] = []
    for start in sorted(src_adj):
        if start in seen_src:
            continue
        comp_src: set[int] = set()
        comp_tgt: set[int] = set()
        stack: list[tuple[str, int]] = [("s", start)]
        while stack:
            side, node = stack.pop()
            if side == "s":
                if node in comp_src:
                    continue
                comp_src.add(node)
                stack.extend(("t", t) for t in src_adj[node])
            else:
                if node in comp_tgt:
                    continue
                comp_tgt.add(node)
                stack.extend(("s", s) for s in tgt_adj[node])
        seen_src |= comp_src
        out.append(
            AlignmentComponent(
                frozenset(comp_src),
                frozenset(comp_tgt),
                classify(len(comp_src), len(comp_tgt)),
            )
        )
    return out


def _unique_shallowest(ids: frozenset[int], tree: DepTree) -> int | None:
    """Return the id with strictly minimal depth, or None on a tie."""
    best: int | None = None
    best_depth: int | None = None
    tied = False
    for tid in sorted(ids):
        d = tree.depth[tid]
        if best_depth is None or d < best_depth:
            best, best_depth, tied = tid, d, False
        elif d == best_depth:
            tied = True
    return None if tied else best


def reduce(graph: AlignmentGraph, src: DepTree, tgt: DepTree) -> ReducedAlignment:
    """Reduce many-to-one / one-to-many groups to the shallowest participant.

    A group with no unique shallowest node, and every many-to-many component,
    is dropped rather than guessed at.
    """
    pairs: dict[int, int] = {}
    dropped: list[AlignmentComponent] = []
    for comp in components(graph):
        if comp.kind == ONE_TO_ONE:
            (s,) = comp.src_ids
            (t,) = comp.tgt_ids
            pairs[s] = t
        elif comp.kind == MANY_TO_ONE:
            keeper = _unique_shallowest(comp.src_ids, src)
            if keeper is None:
                dropped.append(comp)
            else:
                (t,) = comp.tgt_ids
                pairs[keeper] = t
        elif comp.kind == ONE_TO_MANY:
            keeper = _unique_shallowest(comp.tgt_ids, tgt)
            if keeper is None:
                dropped.append(comp)
            else:
                (s,) = comp.src_ids
                pairs[s] = keeper
        else:
            dropped.append(comp)
    return ReducedAlignment(pairs=pairs, dropped_components=dropped)


def alignment_pr(
    gold: list[AlignmentGraph],
    pred: list[AlignmentGraph],
    labels: set[str] | None = None,
    src_trees: list[DepTree] | None = None,
) -> dict:
    """Precision/recall of predicted links against gold links.

    When `labels` and `src_trees` are given, only links whose source token
    carries one of the (subtype-stripped) relation labels are scored.
    Per-label recall buckets gold links by source deprel and requires trees.
    Undefined ratios (empty denominator) are reported as None.
    """
    if len(gold) != len(pred):
        raise DataError(f"gold has {len(gold)} pairs, predictions {len(pred)}")
    if labels is not None and src_trees is None:
        raise DataError("label restriction requires source trees")
    if src_trees is not None and len(src_trees) != len(gold):
        raise DataError(f"gold has {len(gold)} pairs, source trees {len(src_trees)}")

    matched = n_pred = n_gold = 0
    gold_by_label: Counter[str] = Counter()
    matched_by_label: Counter[str] = Counter()
    for k, (g, p) in enumerate(zip(gold, pred)):
        gold_links, pred_links = set(g.links), set(p.links)
        if src_trees is not None:
            tree = src_trees[k]

            def kept(link: tuple[int, int]) -> bool:
                src_id = link[0]
                if not 1 <= src_id <= len(tree):
                    raise DataError(
                        f"pair {k + 1}: link source id {src_id} outside 1..{len(tree)}"
                    )
                label = strip_subtype(tree.deprel(src_id))
                return labels is None or label in labels

            gold_links = {l for l in gold_links if kept(l)}
            pred_links = {l for l in pred_links if kept(l)}
            for link in gold_links:
                label = strip_subtype(tree.deprel(link[0]))
                gold_by_label[label] += 1
                if link in pred_links:
                    matched_by_label[label] += 1
        both = gold_links & pred_links
        matched += len(both)
        n_pred += len(pred_links)
        n_gold += len(gold_links)
    per_label = {
        label: matched_by_label[label] / total
        for label, total in sorted(gold_by_label.items())
    }
    return {
        "precision": matched / n_pred if n_pred else None,
        "recall": matched / n_gold if n_gold else None,
        "matched": matched,
        "predicted": n_pred,
        "gold": n_gold,
        "per_label_recall": per_label,
    }


@dataclass
class AlignmentSummary:
    """Corpus-level alignment statistics; merges associatively."""

    pairs: int = 0
    links: int = 0
    component_kinds: Counter = field(default_factory=Counter)
    aligned_src_tokens: int = 0
    one_to_one_src_tokens: int = 0
    reduced_pairs: int = 0
    dropped_tie_components: int = 0
    dropped_many_to_many: int = 0

    def merge(self, other: "AlignmentSummary") -> "AlignmentSummary":
        merged = AlignmentSummary(
            pairs=self.pairs + other.pairs,
            links=self.links + other.links,
            component_kinds=self.component_kinds + other.component_kinds,
            aligned_src_tokens=self.aligned_src_tokens + other.aligned_src_tokens,
            one_to_one_src_tokens=self.one_to_one_src_tokens + other.one_to_one_src_tokens,
            reduced_pairs=self.reduced_pairs + other.reduced_pairs,
            dropped_tie_components=self.dropped_tie_components + other.dropped_tie_components,
            dropped_many_to_many=self.dropped_many_to_many + other.dropped_many_to_many,
        )
        return merged

    @property
    def one_to_one_src_share(self) -> float | None:
        if self.aligned_src_tokens == 0:
            return None
        return self.one_to_one_src_tokens / self.aligned_src_tokens


def summarize_alignment(graph: AlignmentGraph, src: DepTree, tgt: DepTree) -> AlignmentSummary:
    """Summary statistics for a single sentence pair."""
    summary = AlignmentSummary(pairs=1, links=len(graph.links))
    comps = components(graph)
    reduced = reduce(graph, src, tgt)
    summary.reduced_pairs = len(reduced.pairs)
    for comp in comps:
        summary.component_kinds[comp.kind] += 1
        summary.aligned_src_tokens += len(comp.src_ids)
        if comp.kind == ONE_TO_ONE:
            summary.one_to_one_src_tokens += len(comp.src_ids)
    for comp in reduced.dropped_components:
        if comp.kind == MANY_TO_MANY:
            summary.dropped_many_to_many += 1
        else:
            summary.dropped_tie_components += 1
    return summary
