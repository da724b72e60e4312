"""Content-word classification, dependency paths, CSR extraction, confusion matrices.

The central objects are Corresponding Syntactic Relations (CSRs): for a pair of
aligned content words in the source sentence, the dependency path between them
is paired with the path between their target-side correspondents. Aggregating
CSRs yields POS and edge-label confusion matrices, per-relation translation
entropies, and preservation indices.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING

from .alignment import ONE_TO_ONE, components, reduce
from .conllu import DepTree, Token, strip_subtype
from .errors import PathError

if TYPE_CHECKING:
    from .corpus import SentencePair

# Relation labels whose tokens count as content words by default: lexical
# predicates, arguments, and modifiers, i.e. the labels a content-word
# aligner is expected to cover.
DEFAULT_CONTENT_DEPRELS = frozenset(
    {
        "root",
        "nsubj",
        "amod",
        "nmod",
        "advmod",
        "nummod",
        "acl",
        "advcl",
        "xcomp",
        "compound",
        "flat",
        "obj",
        "obl",
    }
)

# Open-class / lexical POS tags vs. grammatical ones, used by the upos and
# hybrid policies. Adpositions are grammatical unless explicitly whitelisted
# as spatial markers.
DEFAULT_CONTENT_UPOS = frozenset(
    {"ADJ", "ADV", "INTJ", "NOUN", "NUM", "PRON", "PROPN", "SYM", "VERB", "X"}
)
DEFAULT_FUNCTION_UPOS = frozenset(
    {"ADP", "AUX", "CCONJ", "DET", "PART", "PUNCT", "SCONJ"}
)

# Row/column set of the single-edge relation matrix.
DEFAULT_EDGE_LABELS = (
    "acl",
    "advcl",
    "advmod",
    "amod",
    "appos",
    "ccomp",
    "compound",
    "conj",
    "fixed",
    "flat",
    "nmod",
    "nsubj",
    "nummod",
    "obj",
    "obl",
    "parataxis",
    "xcomp",
)

UNALIGNED_LABEL = "None"

UP = "up"
DOWN = "down"
_ARROW = {UP: "↑", DOWN: "↓"}

# CSR outcomes.
PATH = "path"
COLLAPSED = "collapsed"
UNALIGNED = "unaligned"

# Correspondent scopes.
SCOPE_ONE_TO_ONE = "one-to-one"
SCOPE_REDUCED = "reduced"


@dataclass(frozen=True)
class ContentPolicy:
    """Decides which tokens count as content words.

    mode "deprel": subtype-stripped deprel must be whitelisted.
    mode "upos":   UPOS must be in upos_content.
    mode "hybrid": deprel test overridden by the upos_function blacklist;
                   ADP tokens are content only for whitelisted spatial lemmas.
    """

    mode: str = "deprel"
    deprel_whitelist: frozenset[str] = DEFAULT_CONTENT_DEPRELS
    upos_content: frozenset[str] = DEFAULT_CONTENT_UPOS
    upos_function: frozenset[str] = DEFAULT_FUNCTION_UPOS
    spatial_adp_as_content: bool = False
    spatial_adp_lemmas: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.mode not in ("deprel", "upos", "hybrid"):
            raise ValueError(f"unknown content policy mode {self.mode!r}")
        if self.mode in ("deprel", "hybrid") and not self.deprel_whitelist:
            raise ValueError("deprel whitelist must not be empty")
        if self.mode == "upos" and not self.upos_content:
            raise ValueError("upos content set must not be empty")


def is_content(token: Token, policy: ContentPolicy) -> bool:
    """True when the token counts as a content word under the policy."""
    if policy.mode == "deprel":
        return strip_subtype(token.deprel) in policy.deprel_whitelist
    if policy.mode == "upos":
        return token.upos in policy.upos_content
    if token.upos == "ADP":
        return policy.spatial_adp_as_content and token.lemma in policy.spatial_adp_lemmas
    if token.upos in policy.upos_function:
        return False
    return strip_subtype(token.deprel) in policy.deprel_whitelist


@dataclass(frozen=True)
class PathType:
    """A dependency-path type: edge labels, optionally direction-annotated."""

    labels: tuple[str, ...]
    directions: tuple[str, ...] | None = None

    def render(self) -> str:
        if self.directions is None:
            return "+".join(self.labels)
        return "+".join(
            label + _ARROW[direction]
            for label, direction in zip(self.labels, self.directions)
        )

    def bare(self) -> str:
        """Rendered form ignoring directions."""
        return "+".join(self.labels)

    def stripped(self) -> "PathType":
        return PathType(
            tuple(strip_subtype(label) for label in self.labels), self.directions
        )

    def __str__(self) -> str:
        return self.render()

    def __len__(self) -> int:
        return len(self.labels)


def dependency_path(tree: DepTree, u: int, v: int, with_direction: bool = False) -> PathType:
    """Edge labels along the unique tree path from u to v.

    Each edge contributes the deprel of its child token; edges walked
    child-to-parent are "up", parent-to-child "down". The artificial root
    node 0 is never traversed: endpoints living under different head-0
    tokens have no path and raise PathError.
    """
    if u == v:
        raise ValueError("path endpoints must be distinct")
    chain_u = _ancestor_chain(tree, u)
    chain_v = _ancestor_chain(tree, v)
    index_v = {node: i for i, node in enumerate(chain_v)}
    lca = None
    steps_up = 0
    for i, node in enumerate(chain_u):
        if node in index_v:
            lca = node
            steps_up = i
            break
    if lca is None:
        raise PathError(f"no path between tokens {u} and {v}: different root fragments")
    up_nodes = chain_u[:steps_up]
    down_nodes = list(reversed(chain_v[: index_v[lca]]))
    labels = [tree.deprel(node) for node in up_nodes] + [
        tree.deprel(node) for node in down_nodes
    ]
    directions = None
    if with_direction:
        directions = tuple([UP] * len(up_nodes) + [DOWN] * len(down_nodes))
    return PathType(tuple(labels), directions)


def _ancestor_chain(tree: DepTree, node: int) -> list[int]:
    chain = [node]
    while tree.parent[chain[-1]] != 0:
        chain.append(tree.parent[chain[-1]])
    return chain


@dataclass(frozen=True)
class Csr:
    """One corresponding-syntactic-relations observation.

    outcome is "path" (tgt_path/tgt_endpoints set), "collapsed" (both source
    words share a target token), or "unaligned" (a correspondent is missing;
    no_path marks the target-side-disconnected special case).
    """

    src_path: PathType
    src_endpoints: tuple[int, int]
    outcome: str
    tgt_path: PathType | None = None
    tgt_endpoints: tuple[int, int] | None = None
    no_path: bool = False


def extract_csr(
    pair: "SentencePair",
    policy: ContentPolicy,
    scope: str = SCOPE_ONE_TO_ONE,
    *,
    strip_subtypes: bool = True,
    with_direction: bool = False,
) -> list[Csr]:
    """Extract CSRs for every unordered pair of source content words.

    Pairs are ordered so paths start at the leftmost (smaller-id) source
    word. Correspondents come from one-to-one components only (scope
    "one-to-one") or from the highest-node reduction (scope "reduced");
    collapse onto a shared target token is detected from the full link set
    either way. Source word pairs split across root fragments yield no CSR.
    """
    if scope not in (SCOPE_ONE_TO_ONE, SCOPE_REDUCED):
        raise ValueError(f"unknown scope {scope!r}")
    src, tgt, align = pair.src, pair.tgt, pair.align
    if scope == SCOPE_ONE_TO_ONE:
        mapping: dict[int, int] = {}
        for comp in components(align):
            if comp.kind == ONE_TO_ONE:
                (s,) = comp.src_ids
                (t,) = comp.tgt_ids
                mapping[s] = t
    else:
        mapping = reduce(align, src, tgt).pairs
    shared_targets: dict[int, set[int]] = defaultdict(set)
    for s, t in align.links:
        shared_targets[s].add(t)

    content_ids = [t.id for t in src.sentence.tokens if is_content(t, policy)]
    out: list[Csr] = []
    for a, b in combinations(content_ids, 2):
        try:
            src_path = dependency_path(src, a, b, with_direction)
        except PathError:
            continue
        if strip_subtypes:
            src_path = src_path.stripped()
        a2, b2 = mapping.get(a), mapping.get(b)
        if a2 is not None and b2 is not None and a2 != b2:
            try:
                tgt_path = dependency_path(tgt, a2, b2, with_direction)
            except PathError:
                out.append(Csr(src_path, (a, b), UNALIGNED, no_path=True))
                continue
            if strip_subtypes:
                tgt_path = tgt_path.stripped()
            out.append(Csr(src_path, (a, b), PATH, tgt_path, (a2, b2)))
        elif shared_targets[a] & shared_targets[b]:
            out.append(Csr(src_path, (a, b), COLLAPSED))
        else:
            out.append(Csr(src_path, (a, b), UNALIGNED))
    return out


@dataclass
class ConfusionMatrix:
    """Counts of source label -> target outcome.

    Regular outcomes live in `counts`; collapse events, unaligned source
    relations, and the long tail of off-matrix target paths are kept in
    separate per-row buckets. Every observation lands in exactly one bucket.
    """

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    counts: dict[str, dict[str, int]] = field(default_factory=dict)
    collapsed: dict[str, int] = field(default_factory=dict)
    unaligned: dict[str, int] = field(default_factory=dict)
    other: dict[str, dict[str, int]] = field(default_factory=dict)

    def count(self, row: str, col: str) -> int:
        return self.counts.get(row, {}).get(col, 0)

    def add(self, row: str, col: str, n: int = 1) -> None:
        self.counts.setdefault(row, {})[col] = self.count(row, col) + n

    def add_collapsed(self, row: str, n: int = 1) -> None:
        self.collapsed[row] = self.collapsed.get(row, 0) + n

    def add_unaligned(self, row: str, n: int = 1) -> None:
        self.unaligned[row] = self.unaligned.get(row, 0) + n

    def add_other(self, row: str, path: str, n: int = 1) -> None:
        tail = self.other.setdefault(row, {})
        tail[path] = tail.get(path, 0) + n

    def row_total(self, row: str, include_unaligned: bool = False) -> int:
        """Observations in a row; unaligned ones excluded unless requested."""
        total = sum(self.counts.get(row, {}).values())
        total += self.collapsed.get(row, 0)
        total += sum(self.other.get(row, {}).values())
        if include_unaligned:
            total += self.unaligned.get(row, 0)
        return total

    def other_total(self, row: str) -> int:
        return sum(self.other.get(row, {}).values())

    def mcop(self, row: str) -> tuple[str, int] | None:
        """Most common other path of a row; count ties break lexicographically."""
        tail = self.other.get(row)
        if not tail:
            return None
        top = max(tail.values())
        path = min(p for p, c in tail.items() if c == top)
        return path, top

    def merge(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        """Combine two matrices; associative and commutative on the counts."""
        merged = ConfusionMatrix(
            row_labels=_merge_labels(self.row_labels, other.row_labels),
            col_labels=_merge_labels(self.col_labels, other.col_labels),
        )
        for source in (self, other):
            for row, cells in source.counts.items():
                for col, n in cells.items():
                    merged.add(row, col, n)
            for row, n in source.collapsed.items():
                merged.add_collapsed(row, n)
            for row, n in source.unaligned.items():
                merged.add_unaligned(row, n)
            for row, tail in source.other.items():
                for path, n in tail.items():
                    merged.add_other(row, path, n)
        return merged


def _merge_labels(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    if a == b:
        return a
    return tuple(sorted(set(a) | set(b)))


def pos_confusion(pairs: list["SentencePair"], policy: ContentPolicy) -> ConfusionMatrix:
    """POS confusion matrix over the one-to-one reduction of the alignment.

    Each source content word contributes (its UPOS, UPOS of its correspondent);
    words without a correspondent fall in the "None" column. An extra "None"
    row buckets target content words left without a correspondent.
    """
    cells: dict[str, Counter[str]] = defaultdict(Counter)
    for pair in pairs:
        mapping = reduce(pair.align, pair.src, pair.tgt).pairs
        for token in pair.src.sentence.tokens:
            if not is_content(token, policy):
                continue
            tgt_id = mapping.get(token.id)
            col = pair.tgt.token(tgt_id).upos if tgt_id is not None else UNALIGNED_LABEL
            cells[token.upos][col] += 1
        covered = set(mapping.values())
        for token in pair.tgt.sentence.tokens:
            if is_content(token, policy) and token.id not in covered:
                cells[UNALIGNED_LABEL][token.upos] += 1
    rows = tuple(sorted(cells))
    cols = tuple(sorted(set().union(*cells.values()))) if cells else ()
    matrix = ConfusionMatrix(row_labels=rows, col_labels=cols)
    for row, row_cells in cells.items():
        for col, n in row_cells.items():
            matrix.add(row, col, n)
    return matrix


def edge_confusion(
    pairs: list["SentencePair"],
    policy: ContentPolicy,
    *,
    row_labels: tuple[str, ...] = DEFAULT_EDGE_LABELS,
    col_labels: tuple[str, ...] = DEFAULT_EDGE_LABELS,
    strip_subtypes: bool = True,
    with_direction: bool = False,
) -> ConfusionMatrix:
    """Confusion matrix of single-edge source relations vs. target paths.

    Rows are single-edge source CSRs whose label is in `row_labels`. Target
    single edges matching `col_labels` land in the matrix proper; shared
    target tokens in the Collapsed bucket; everything else (multi-edge paths,
    off-matrix labels) in the long tail; unaligned relations are tallied
    separately and excluded from row totals.
    """
    matrix = ConfusionMatrix(row_labels=tuple(row_labels), col_labels=tuple(col_labels))
    row_set = set(row_labels)
    col_set = set(col_labels)
    for pair in pairs:
        csrs = extract_csr(
            pair,
            policy,
            SCOPE_ONE_TO_ONE,
            strip_subtypes=strip_subtypes,
            with_direction=with_direction,
        )
        for csr in csrs:
            if len(csr.src_path) != 1:
                continue
            row = csr.src_path.labels[0]
            if row not in row_set:
                continue
            if csr.outcome == COLLAPSED:
                matrix.add_collapsed(row)
            elif csr.outcome == UNALIGNED:
                matrix.add_unaligned(row)
            else:
                rendered = csr.tgt_path.render()
                if len(csr.tgt_path) == 1 and rendered in col_set:
                    matrix.add(row, rendered)
                else:
                    matrix.add_other(row, rendered)
    return matrix


def percentages(matrix: ConfusionMatrix) -> dict[str, dict[str, float | str]]:
    """Per-row percentage rendering of a confusion matrix.

    Row totals span regular counts, Collapsed, and the long tail; unaligned
    observations are excluded. Rows without observations are omitted. Each
    row carries its column percentages plus "Collapsed", "Other" (summed
    tail), "MCOP%" and "MCOP" (the modal tail path).
    """
    out: dict[str, dict[str, float | str]] = {}
    for row in matrix.row_labels:
        total = matrix.row_total(row)
        if total == 0:
            continue
        cells: dict[str, float | str] = {
            col: 100.0 * matrix.count(row, col) / total for col in matrix.col_labels
        }
        cells["Collapsed"] = 100.0 * matrix.collapsed.get(row, 0) / total
        cells["Other"] = 100.0 * matrix.other_total(row) / total
        top = matrix.mcop(row)
        cells["MCOP%"] = 100.0 * top[1] / total if top else 0.0
        cells["MCOP"] = top[0] if top else ""
        out[row] = cells
    return out


def translation_entropy(
    matrix: ConfusionMatrix, row: str, include_unaligned: bool = False
) -> float:
    """Shannon entropy (base 2) of a row's outcome distribution.

    Every distinct target path is one outcome and Collapsed is one outcome;
    unaligned observations are excluded unless requested.
    """
    if row not in matrix.row_labels:
        raise KeyError(f"unknown row {row!r}")
    outcomes = [n for n in matrix.counts.get(row, {}).values() if n > 0]
    outcomes.extend(n for n in matrix.other.get(row, {}).values() if n > 0)
    if matrix.collapsed.get(row, 0) > 0:
        outcomes.append(matrix.collapsed[row])
    if include_unaligned and matrix.unaligned.get(row, 0) > 0:
        outcomes.append(matrix.unaligned[row])
    total = sum(outcomes)
    if total == 0:
        raise ValueError(f"row {row!r} has no observations")
    entropy = 0.0
    for n in outcomes:
        p = n / total
        entropy -= p * math.log2(p)
    return entropy


def preservation(matrix: ConfusionMatrix) -> dict[str, float]:
    """Share of identity mappings per row, over the same totals as percentages()."""
    out: dict[str, float] = {}
    for row in matrix.row_labels:
        total = matrix.row_total(row)
        if total == 0:
            continue
        out[row] = matrix.count(row, row) / total
    return out
