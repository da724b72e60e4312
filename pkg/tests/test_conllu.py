import random

import pytest

from clmd import ParseError, ParseOptions, TreeError, build_tree, parse_conllu, serialize, strip_subtype
from corpora import NOMINAL_EN_ROWS, conllu_block, make_tree, random_rows


def test_parse_nominal_fragment():
    (sentence,) = parse_conllu(conllu_block(NOMINAL_EN_ROWS, sent_id="s1", text="The recent article by Thompson on syntax"))
    assert len(sentence.tokens) == 7
    assert sentence.sent_id == "s1"
    assert sentence.text == "The recent article by Thompson on syntax"
    article = sentence.tokens[2]
    assert (article.form, article.head, article.deprel) == ("article", 0, "root")
    assert [t.deprel for t in sentence.tokens] == [
        "det", "amod", "root", "case", "nmod", "case", "nmod",
    ]


def test_parse_empty_input():
    assert parse_conllu("") == []
    assert parse_conllu("\n\n\n") == []


def test_parse_tolerates_bom_and_crlf():
    text = "﻿# sent_id = s1\r\n1\ta\ta\tX\t_\t_\t0\troot\t_\t_\r\n\r\n"
    (sentence,) = parse_conllu(text)
    assert sentence.sent_id == "s1"
    assert sentence.tokens[0].form == "a"


def test_parse_self_loop_reports_line():
    text = "1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\n2\tb\tb\tX\t_\t_\t0\troot\t_\t_\n3\tc\tc\tX\t_\t_\t3\tdep\t_\t_\n"
    with pytest.raises(ParseError) as err:
        parse_conllu(text)
    assert "self-loop" in str(err.value)
    assert err.value.line == 3


def test_parse_column_count_error():
    with pytest.raises(ParseError) as err:
        parse_conllu("1\ta\ta\tX\t_\t_\t0\troot\t_\n")
    assert "columns" in str(err.value)
    assert err.value.line == 1


def test_parse_non_numeric_head():
    with pytest.raises(ParseError) as err:
        parse_conllu("1\ta\ta\tX\t_\t_\tx\troot\t_\t_\n")
    assert "head" in str(err.value)


def test_parse_duplicate_and_gap_ids():
    dup = (
        "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n"
        "1\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n"
    )
    with pytest.raises(ParseError, match="duplicate id"):
        parse_conllu(dup)
    gap = (
        "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n"
        "3\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n"
    )
    with pytest.raises(ParseError, match="id gap"):
        parse_conllu(gap)


def test_parse_requires_a_root():
    text = "1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\n2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n"
    with pytest.raises(ParseError, match="root"):
        parse_conllu(text)


def test_multiword_and_empty_nodes_excluded_from_tokens():
    text = (
        "# sent_id = m1\n"
        "1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tde\tde\tADP\t_\t_\t3\tcase\t_\t_\n"
        "2\tel\tel\tDET\t_\t_\t3\tdet\t_\t_\n"
        "3\tmar\tmar\tNOUN\t_\t_\t0\troot\t_\t_\n"
        "3.1\telided\telided\tVERB\t_\t_\t_\t_\t_\t_\n"
    )
    (sentence,) = parse_conllu(text)
    assert [t.id for t in sentence.tokens] == [1, 2, 3]
    assert sentence.multiword_ranges == [(1, 2)]
    assert len(sentence.empty_nodes) == 1
    assert sentence.empty_nodes[0].anchor == 3
    tree = build_tree(sentence)
    assert tree.depth == {1: 1, 2: 1, 3: 0}


def test_serialize_round_trip_with_special_lines():
    text = (
        "# sent_id = m1\n"
        "# text = de el mar\n"
        "1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tde\tde\tADP\t_\t_\t3\tcase\t_\t_\n"
        "2\tel\tel\tDET\t_\t_\t3\tdet\t_\t_\n"
        "3\tmar\tmar\tNOUN\t_\t_\t0\troot\t_\t_\n"
        "3.1\telided\telided\tVERB\t_\t_\t_\t_\t_\t_\n"
        "\n"
        "1\tsolo\tsolo\tADV\t_\t_\t0\troot\t_\t_\n"
        "\n"
    )
    assert serialize(parse_conllu(text)) == text


def test_serialize_round_trip_random_corpora():
    rng = random.Random(411)
    blocks = "".join(
        conllu_block(random_rows(rng, rng.randint(1, 12)), sent_id=f"s{i}")
        for i in range(25)
    )
    assert serialize(parse_conllu(blocks)) == blocks


def test_strip_subtypes_at_load():
    text = conllu_block([(1, "w", "NOUN", 0, "root"), (2, "x", "VERB", 1, "acl:relcl")])
    (kept,) = parse_conllu(text)
    (stripped,) = parse_conllu(text, ParseOptions(strip_subtypes=True))
    assert kept.tokens[1].deprel == "acl:relcl"
    assert stripped.tokens[1].deprel == "acl"


def test_build_tree_depths_nominal_fragment():
    tree = make_tree(NOMINAL_EN_ROWS)
    assert tree.depth[3] == 0  # article
    assert tree.depth[5] == 1  # Thompson
    assert tree.depth[4] == 2  # by
    assert tree.children[3] == [1, 2, 5, 7]
    assert tree.roots == [3]


def test_build_tree_single_token():
    tree = make_tree([(1, "Yes", "INTJ", 0, "root")])
    assert tree.depth == {1: 0}


def test_build_tree_chain_depths():
    tree = make_tree([(1, "a", "X", 2, "dep"), (2, "b", "X", 3, "dep"), (3, "c", "X", 0, "root")])
    assert tree.depth == {1: 2, 2: 1, 3: 0}


def test_build_tree_multiple_roots_allowed():
    tree = make_tree([(1, "a", "X", 0, "root"), (2, "b", "X", 0, "root"), (3, "c", "X", 2, "dep")])
    assert tree.roots == [1, 2]
    assert tree.depth == {1: 0, 2: 0, 3: 1}


def test_build_tree_rejects_cycle():
    text = (
        "# sent_id = cyc\n"
        "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n"
        "2\tb\tb\tX\t_\t_\t3\tdep\t_\t_\n"
        "3\tc\tc\tX\t_\t_\t2\tdep\t_\t_\n"
    )
    (sentence,) = parse_conllu(text)
    with pytest.raises(TreeError) as err:
        build_tree(sentence)
    assert err.value.sent_id == "cyc"


def test_build_tree_rejects_out_of_range_head():
    text = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\tX\t_\t_\t9\tdep\t_\t_\n"
    (sentence,) = parse_conllu(text)
    with pytest.raises(TreeError, match="out of range"):
        build_tree(sentence)


def test_parent_walk_terminates_and_reaches_root():
    rng = random.Random(7)
    for _ in range(50):
        tree = make_tree(random_rows(rng, rng.randint(1, 15)))
        n = len(tree)
        for token in tree.sentence.tokens:
            node, steps = token.id, 0
            while tree.parent[node] != 0:
                node = tree.parent[node]
                steps += 1
                assert steps <= n
            assert tree.parent[node] == 0


@pytest.mark.parametrize(
    "label,expected",
    [("acl:relcl", "acl"), ("nsubj", "nsubj"), ("obl:tmod", "obl"), ("a:b:c", "a")],
)
def test_strip_subtype(label, expected):
    assert strip_subtype(label) == expected


def test_strip_subtype_idempotent():
    for label in ["acl:relcl", "nsubj", "obl:tmod", "compound:prt", "x"]:
        assert strip_subtype(strip_subtype(label)) == strip_subtype(label)
