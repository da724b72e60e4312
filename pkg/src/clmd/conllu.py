"""CoNLL-U parsing, validation, serialization, and indexed dependency trees."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, TreeError

_WORD_ID = re.compile(r"^[1-9][0-9]*$")
_RANGE_ID = re.compile(r"^([1-9][0-9]*)-([1-9][0-9]*)$")
_EMPTY_ID = re.compile(r"^([0-9]+)\.[1-9][0-9]*$")

N_COLUMNS = 10


@dataclass(frozen=True)
class Token:
    """One word line of a CoNLL-U sentence. head == 0 marks a root."""

    id: int
    form: str
    lemma: str
    upos: str
    xpos: str
    feats: str
    head: int
    deprel: str
    deps: str
    misc: str

    def line(self) -> str:
        return "\t".join(
            (
                str(self.id),
                self.form,
                self.lemma,
                self.upos,
                self.xpos,
                self.feats,
                str(self.head),
                self.deprel,
                self.deps,
                self.misc,
            )
        )


@dataclass(frozen=True)
class MultiwordToken:
    """A surface-token range line ("a-b"), kept verbatim for round-trips."""

    start: int
    end: int
    line: str


@dataclass(frozen=True)
class EmptyNode:
    """An empty-node line ("a.b"), anchored after word `anchor` (0 = before word 1)."""

    anchor: int
    line: str


@dataclass
class Sentence:
    tokens: list[Token]
    sent_id: str | None = None
    text: str | None = None
    comments: list[str] = field(default_factory=list)
    multiword_tokens: list[MultiwordToken] = field(default_factory=list)
    empty_nodes: list[EmptyNode] = field(default_factory=list)

    @property
    def multiword_ranges(self) -> list[tuple[int, int]]:
        return [(m.start, m.end) for m in self.multiword_tokens]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class ParseOptions:
    """Corpus-load options.

    strip_subtypes rewrites every deprel to its bare label at load time;
    the default keeps labels verbatim so serialization round-trips.
    """

    strip_subtypes: bool = False


def strip_subtype(label: str) -> str:
    """Return the relation label without its subtype ("acl:relcl" -> "acl")."""
    return label.split(":", 1)[0]


def parse_conllu(text: str, options: ParseOptions | None = None) -> list[Sentence]:
    """Parse CoNLL-U text into sentences.

    Word lines become tokens; multiword-token ranges and empty nodes are
    recorded verbatim but excluded from the token list. Comment keys
    `sent_id` and `text` are extracted. Raises ParseError with the offending
    line number on malformed input.
    """
    options = options or ParseOptions()
    sentences: list[Sentence] = []
    current = _BlockState()
    text = text.lstrip("﻿")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            if current.started():
                sentences.append(current.finish(options))
                current = _BlockState()
            continue
        if line.startswith("#"):
            current.add_comment(line)
            continue
        current.add_token_line(line, lineno)
    if current.started():
        sentences.append(current.finish(options))
    return sentences


def parse_conllu_file(path: str, options: ParseOptions | None = None) -> list[Sentence]:
    with open(path, encoding="utf-8") as handle:
        return parse_conllu(handle.read(), options)


class _BlockState:
    """Accumulates one sentence block during parsing."""

    def __init__(self) -> None:
        self.comments: list[str] = []
        self.tokens: list[Token] = []
        self.mwts: list[MultiwordToken] = []
        self.empties: list[EmptyNode] = []
        self.first_token_line: int | None = None

    def started(self) -> bool:
        return bool(self.comments or self.tokens or self.mwts or self.empties)

    def add_comment(self, line: str) -> None:
        self.comments.append(line)

    def add_token_line(self, line: str, lineno: int) -> None:
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise ParseError(f"expected {N_COLUMNS} columns, found {len(cols)}", lineno)
        raw_id = cols[0]
        if _RANGE_ID.match(raw_id):
            start, end = (int(part) for part in raw_id.split("-"))
            if end < start:
                raise ParseError(f"inverted token range {raw_id}", lineno)
            self.mwts.append(MultiwordToken(start, end, line))
            return
        m = _EMPTY_ID.match(raw_id)
        if m:
            self.empties.append(EmptyNode(int(m.group(1)), line))
            return
        if not _WORD_ID.match(raw_id):
            raise ParseError(f"non-numeric token id {raw_id!r}", lineno)
        tid = int(raw_id)
        if not cols[6].isdigit():
            raise ParseError(f"non-numeric head {cols[6]!r}", lineno)
        head = int(cols[6])
        expected = len(self.tokens) + 1
        if tid != expected:
            kind = "duplicate id" if tid <= len(self.tokens) else "id gap"
            raise ParseError(f"{kind}: got {tid}, expected {expected}", lineno)
        if head == tid:
            raise ParseError(f"self-loop: token {tid} headed by itself", lineno)
        if not cols[3]:
            raise ParseError("empty UPOS field", lineno)
        if not cols[7]:
            raise ParseError("empty DEPREL field", lineno)
        if self.first_token_line is None:
            self.first_token_line = lineno
        self.tokens.append(
            Token(
                id=tid,
                form=cols[1],
                lemma=cols[2],
                upos=cols[3],
                xpos=cols[4],
                feats=cols[5],
                head=head,
                deprel=cols[7],
                deps=cols[8],
                misc=cols[9],
            )
        )

    def finish(self, options: ParseOptions) -> Sentence:
        if self.tokens and not any(t.head == 0 for t in self.tokens):
            raise ParseError("no root token (head 0)", self.first_token_line)
        tokens = self.tokens
        if options.strip_subtypes:
            tokens = [
                Token(
                    id=t.id,
                    form=t.form,
                    lemma=t.lemma,
                    upos=t.upos,
                    xpos=t.xpos,
                    feats=t.feats,
                    head=t.head,
                    deprel=strip_subtype(t.deprel),
                    deps=t.deps,
                    misc=t.misc,
                )
                for t in tokens
            ]
        sent_id = None
        text = None
        for comment in self.comments:
            body = comment.lstrip("#").strip()
            if "=" in body:
                key, value = body.split("=", 1)
                key = key.strip()
                if key == "sent_id" and sent_id is None:
                    sent_id = value.strip()
                elif key == "text" and text is None:
                    text = value.strip()
        return Sentence(
            tokens=tokens,
            sent_id=sent_id,
            text=text,
            comments=self.comments,
            multiword_tokens=self.mwts,
            empty_nodes=self.empties,
        )


def serialize(sentences: list[Sentence]) -> str:
    """Render sentences back to CoNLL-U; token lines are reproduced field-for-field."""
    blocks: list[str] = []
    for sentence in sentences:
        lines: list[str] = list(sentence.comments)
        mwt_by_start: dict[int, list[str]] = {}
        for mwt in sentence.multiword_tokens:
            mwt_by_start.setdefault(mwt.start, []).append(mwt.line)
        empties_by_anchor: dict[int, list[str]] = {}
        for node in sentence.empty_nodes:
            empties_by_anchor.setdefault(node.anchor, []).append(node.line)
        lines.extend(empties_by_anchor.get(0, ()))
        for token in sentence.tokens:
            lines.extend(mwt_by_start.get(token.id, ()))
            lines.append(token.line())
            lines.extend(empties_by_anchor.get(token.id, ()))
        blocks.append("\n".join(lines) + "\n\n")
    return "".join(blocks)


@dataclass
class DepTree:
    """A sentence with parent/children/depth indices over its head links."""

    sentence: Sentence
    parent: dict[int, int]
    children: dict[int, list[int]]
    depth: dict[int, int]

    def token(self, tid: int) -> Token:
        return self.sentence.tokens[tid - 1]

    def deprel(self, tid: int) -> str:
        return self.sentence.tokens[tid - 1].deprel

    @property
    def roots(self) -> list[int]:
        return self.children[0]

    def __len__(self) -> int:
        return len(self.sentence.tokens)


def build_tree(sentence: Sentence) -> DepTree:
    """Index a sentence into a DepTree; rejects cycles and unreachable tokens."""
    n = len(sentence.tokens)
    parent: dict[int, int] = {}
    children: dict[int, list[int]] = {i: [] for i in range(n + 1)}
    for token in sentence.tokens:
        if token.head > n:
            raise TreeError(
                f"head {token.head} of token {token.id} out of range 1..{n}",
                sentence.sent_id,
            )
        parent[token.id] = token.head
        children[token.head].append(token.id)
    depth: dict[int, int] = {}
    queue = list(children[0])
    for root in queue:
        depth[root] = 0
    i = 0
    while i < len(queue):
        node = queue[i]
        i += 1
        for child in children[node]:
            depth[child] = depth[node] + 1
            queue.append(child)
    if len(depth) != n:
        stranded = sorted(set(parent) - set(depth))
        raise TreeError(
            f"cyclic head structure involving tokens {stranded}", sentence.sent_id
        )
    return DepTree(sentence=sentence, parent=parent, children=children, depth=depth)
