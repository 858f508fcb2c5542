"""Tests for the surjectivity deciders and their graphs."""

import pytest

from carev import (
    Alphabet,
    Neighborhood,
    Node,
    check_image_covering,
    decide_surjective,
    graph_to_text,
    rule_from_number,
    successor_node,
    successor_node_full,
)
from carev.amoroso import FULL, OPTIMIZED

P2 = Alphabet(2)
NB11 = Neighborhood(1, 1)


def test_image_covering():
    assert not check_image_covering(rule_from_number(0, P2, NB11))
    assert check_image_covering(rule_from_number(150, P2, NB11))
    assert check_image_covering(rule_from_number(204, P2, NB11))


def test_successor_node_derived_examples():
    # rule 153 table: f(000)=1 f(001)=0 f(010)=0 f(011)=1
    #                 f(100)=1 f(101)=0 f(110)=0 f(111)=1
    rule = rule_from_number(153, P2, NB11)
    x = Node(4, 0b0011)  # {00, 01}
    assert successor_node(rule, x, 0).members() == [1, 2]  # {01, 10}
    assert successor_node(rule, x, 1).members() == [0, 3]  # {00, 11}
    assert successor_node(rule, Node(4, 0), 0).is_empty()
    assert successor_node(rule, Node(4, 0), 1).is_empty()


def test_successor_node_full_identity_rule():
    # identity rule, X = middle-zero windows {000,001,100,101}: suffixes
    # are {00,01}, so the label-0 successors are the middle-zero windows
    # starting 00 or 01, i.e. {000,001}
    rule = rule_from_number(204, P2, NB11)
    middle_zero = {idx for idx in range(8) if ((idx >> 1) & 1) == 0}
    assert successor_node_full(rule, middle_zero, 0) == {0, 1}
    assert successor_node_full(rule, set(), 0) == set()
    assert successor_node_full(rule, set(), 1) == set()


def test_successor_node_full_agrees_with_bruteforce():
    # independent reconstruction from the overlap definition, over every
    # subset of the 8 windows
    for number in (46, 150, 110, 90):
        rule = rule_from_number(number, P2, NB11)
        for seed in range(256):
            x = {i for i in range(8) if (seed >> i) & 1}
            for a in (0, 1):
                expected = set()
                for alpha in range(8):
                    if rule.table[alpha] != a:
                        continue
                    if any(alpha >> 1 == member & 0b11 for member in x):
                        expected.add(alpha)
                assert successor_node_full(rule, x, a) == expected


def test_rule46_is_non_surjective_both_variants():
    rule = rule_from_number(46, P2, NB11)
    for variant in (FULL, OPTIMIZED):
        verdict, _ = decide_surjective(rule, variant, b=0)
        assert not verdict.surjective
        assert verdict.reason == "empty-node-reached"


def test_rule46_garden_of_eden_path():
    # the configurations ...,0,1,0,... lose every preimage: follow the
    # label path 0 (seed), 1, 0 and land on the empty set
    rule = rule_from_number(46, P2, NB11)
    x = {alpha for alpha in range(8) if rule.table[alpha] == 0}
    x = successor_node_full(rule, x, 1)
    x = successor_node_full(rule, x, 0)
    assert x == set()


def test_identity_rule_is_surjective():
    rule = rule_from_number(204, P2, NB11)
    for variant in (FULL, OPTIMIZED):
        verdict, _ = decide_surjective(rule, variant, b=0)
        assert verdict.surjective
        assert verdict.reason == "graph-closed"


def test_rule85_node_counts():
    rule = rule_from_number(85, P2, NB11)
    full_v, _ = decide_surjective(rule, FULL, b=0)
    opt_v, _ = decide_surjective(rule, OPTIMIZED, b=0)
    assert (full_v.node_count, opt_v.node_count) == (11, 5)


def test_unbalanced_rule_shortcut():
    verdict, graph = decide_surjective(rule_from_number(0, P2, NB11))
    assert not verdict.surjective
    assert verdict.reason == "unbalanced-image"
    assert verdict.node_count == 0
    assert graph.nodes == ()


def test_variant_agreement_all_elementary_rules():
    for number in range(256):
        rule = rule_from_number(number, P2, NB11)
        for b in (0, 1):
            full_v, _ = decide_surjective(rule, FULL, b)
            opt_v, _ = decide_surjective(rule, OPTIMIZED, b)
            assert full_v.surjective == opt_v.surjective, (number, b)
            assert opt_v.node_count <= full_v.node_count, (number, b)


def test_node_count_bounds():
    for number in (85, 101, 150, 22, 46):
        rule = rule_from_number(number, P2, NB11)
        full_v, _ = decide_surjective(rule, FULL, 0, complete_graph=True)
        opt_v, _ = decide_surjective(rule, OPTIMIZED, 0, complete_graph=True)
        assert full_v.node_count <= 2**8
        assert opt_v.node_count <= 2**4


def test_suffix_projection_commutes():
    # projecting every full-variant node to its member suffixes and
    # deduplicating yields exactly the optimized node set
    for number in range(256):
        rule = rule_from_number(number, P2, NB11)
        if not check_image_covering(rule):
            continue
        for b in (0, 1):
            _, full_g = decide_surjective(rule, FULL, b, complete_graph=True)
            _, opt_g = decide_surjective(rule, OPTIMIZED, b,
                                         complete_graph=True)
            projected = set()
            for bits in full_g.nodes:
                suffixes = 0
                v = bits
                while v:
                    lsb = v & -v
                    suffixes |= 1 << ((lsb.bit_length() - 1) % 4)
                    v ^= lsb
                projected.add(suffixes)
            assert projected == set(opt_g.nodes), (number, b)


def test_closed_graph_out_degree():
    rule = rule_from_number(204, P2, NB11)
    _, graph = decide_surjective(rule, OPTIMIZED, 0)
    outdeg = {}
    for from_id, _, _ in graph.edges:
        outdeg[from_id] = outdeg.get(from_id, 0) + 1
    assert all(outdeg[i] == 2 for i in range(len(graph.nodes)))


def test_graph_export_format():
    rule = rule_from_number(85, P2, NB11)
    verdict, graph = decide_surjective(rule, OPTIMIZED, 0)
    text = graph_to_text(graph)
    lines = text.splitlines()
    assert lines[0] == "carev-amoroso-graph 1"
    assert lines[1] == "variant optimized b 0 width 4"
    assert lines[2] == f"nodes {verdict.node_count}"
    node_lines = lines[3:3 + verdict.node_count]
    assert all(" : {" in ln for ln in node_lines)
    edge_header = lines[3 + verdict.node_count]
    n_edges = int(edge_header.split()[1])
    edge_lines = lines[4 + verdict.node_count:]
    assert len(edge_lines) == n_edges
    for ln in edge_lines:
        from_id, label, to_id = map(int, ln.split())
        assert 0 <= from_id < verdict.node_count
        assert 0 <= to_id < verdict.node_count
        assert label in (0, 1)


def test_three_state_rule_surjectivity():
    # p=3 permutation-of-states rule (depends only on the centre):
    # globally a relabelling, hence surjective
    p3 = Alphabet(3)
    nb = Neighborhood(1, 1)
    table = tuple((((idx // 3) % 3) + 1) % 3 for idx in range(27))
    number = 0
    for entry in reversed(table):
        number = number * 3 + entry
    rule = rule_from_number(number, p3, nb)
    for variant in (FULL, OPTIMIZED):
        verdict, _ = decide_surjective(rule, variant, b=0)
        assert verdict.surjective, variant


def test_invalid_variant_and_seed():
    rule = rule_from_number(150, P2, NB11)
    from carev import InvalidArgumentError

    with pytest.raises(InvalidArgumentError):
        decide_surjective(rule, "other")
    with pytest.raises(InvalidArgumentError):
        decide_surjective(rule, FULL, b=2)
