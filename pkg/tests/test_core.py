"""Tests for sequence encodings, rule numbers and bitset types."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from carev import (
    Alphabet,
    CapacityError,
    InvalidArgumentError,
    InvalidStateError,
    Neighborhood,
    Node,
    RuleNumberOverflowError,
    SequenceIndex,
    decode_sequence,
    encode_sequence,
    is_left_zero,
    is_right_zero,
    mirror_rule,
    rule_from_digits,
    rule_from_number,
    rule_to_number,
)

P2 = Alphabet(2)
P3 = Alphabet(3)
NB11 = Neighborhood(1, 1)


def test_encode_examples():
    assert encode_sequence([1, 0, 1], P2) == SequenceIndex(3, 5)
    assert encode_sequence([0, 0, 0], P2) == SequenceIndex(3, 0)
    assert encode_sequence([2, 1], P3) == SequenceIndex(2, 7)
    assert encode_sequence([], P2) == SequenceIndex(0, 0)


def test_encode_rejects_bad_digit():
    with pytest.raises(InvalidStateError):
        encode_sequence([0, 2], P2)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_encode_decode_roundtrip_exhaustive(p):
    alphabet = Alphabet(p)
    for length in range(0, 7):
        for index in range(p**length):
            seq = SequenceIndex(length, index)
            assert encode_sequence(decode_sequence(seq, alphabet),
                                   alphabet) == seq


def test_decode_rejects_out_of_range_index():
    with pytest.raises(InvalidStateError):
        decode_sequence(SequenceIndex(2, 4), P2)


def test_rule_150_table_matches_published_map():
    rule = rule_from_number(150, P2, NB11)
    # (0,0,0)->0 (0,0,1)->1 (0,1,0)->1 (0,1,1)->0
    # (1,0,0)->1 (1,0,1)->0 (1,1,0)->0 (1,1,1)->1
    assert rule.table == (0, 1, 1, 0, 1, 0, 0, 1)


def test_rule_zero_and_identity_tables():
    assert rule_from_number(0, P2, NB11).table == (0,) * 8
    # 204 = 11001100 in binary: output equals the centre cell
    rule = rule_from_number(204, P2, NB11)
    for idx in range(8):
        centre = (idx >> 1) & 1
        assert rule.table[idx] == centre


def test_rule_number_roundtrip_examples():
    rule = rule_from_number(150, P2, NB11)
    assert rule_to_number(rule) == 150
    assert rule_to_number(rule_from_number(0, P2, NB11)) == 0


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=2**256 - 1), st.data())
def test_rule_number_roundtrip_random(raw, data):
    p, r_l, r_r = data.draw(st.sampled_from(
        [(2, 1, 1), (2, 1, 2), (2, 2, 2), (3, 1, 1)]))
    alphabet = Alphabet(p)
    nb = Neighborhood(r_l, r_r)
    number = raw % p ** (p**nb.k)
    assert rule_to_number(rule_from_number(number, alphabet, nb)) == number


def test_rule_number_overflow():
    with pytest.raises(RuleNumberOverflowError):
        rule_from_number(2**256, P2, NB11)
    with pytest.raises(RuleNumberOverflowError):
        rule_from_number(-1, P2, NB11)


def test_rule_from_digits_wolfram_order():
    # digits are written from index p^k-1 down to 0
    rule = rule_from_digits("10010110", P2, NB11)
    assert rule_to_number(rule) == 150
    with pytest.raises(InvalidArgumentError):
        rule_from_digits("1001", P2, NB11)


def test_capacity_guard():
    with pytest.raises(CapacityError):
        rule_from_number(0, P2, Neighborhood(11, 11))  # 2**21 wide nodes
    # explicit cap override
    with pytest.raises(CapacityError):
        rule_from_number(0, P2, Neighborhood(2, 2), width_cap=8)


def test_left_right_zero_examples():
    seq = encode_sequence([0, 0, 1, 0], P2)
    assert is_left_zero(seq, 2, P2)
    assert not is_left_zero(seq, 3, P2)
    seq = encode_sequence([1, 0, 0, 0], P2)
    assert is_right_zero(seq, 2, P2)
    assert is_right_zero(seq, 3, P2)
    assert not is_left_zero(seq, 1, P2)
    # m = 0 is vacuous
    for index in range(16):
        s = SequenceIndex(4, index)
        assert is_left_zero(s, 0, P2)
        assert is_right_zero(s, 0, P2)


def test_zero_predicate_errors():
    with pytest.raises(InvalidArgumentError):
        is_left_zero(SequenceIndex(3, 0), 4, P2)
    with pytest.raises(InvalidArgumentError):
        is_right_zero(SequenceIndex(3, 0), -1, P2)


@pytest.mark.parametrize("p,length", [(2, 5), (3, 4)])
def test_zero_predicate_counts(p, length):
    alphabet = Alphabet(p)
    for m in range(length + 1):
        left = sum(is_left_zero(SequenceIndex(length, i), m, alphabet)
                   for i in range(p**length))
        right = sum(is_right_zero(SequenceIndex(length, i), m, alphabet)
                    for i in range(p**length))
        assert left == right == p ** (length - m)


@pytest.mark.parametrize("p,length", [(2, 4), (3, 3)])
def test_full_zero_iff_index_zero(p, length):
    alphabet = Alphabet(p)
    for i in range(p**length):
        seq = SequenceIndex(length, i)
        assert is_left_zero(seq, length, alphabet) == (i == 0)
        assert is_right_zero(seq, length, alphabet) == (i == 0)


@settings(max_examples=300)
@given(st.integers(min_value=0, max_value=2**16 - 1))
def test_mirror_is_an_involution(number):
    rule = rule_from_number(number, P2, Neighborhood(1, 2))
    mirrored = mirror_rule(rule)
    assert mirrored.neighborhood == Neighborhood(2, 1)
    assert mirror_rule(mirrored) == rule


def test_mirror_reverses_windows():
    rule = rule_from_number(150, P2, NB11)
    mirrored = mirror_rule(rule)
    for idx in range(8):
        rev = int(f"{idx:03b}"[::-1], 2)
        assert mirrored.table[rev] == rule.table[idx]


def test_node_members_and_cardinality():
    node = Node(width=4, bits=0b0101)
    assert node.members() == [0, 2]
    assert node.cardinality() == 2
    assert not node.is_empty()
    assert Node(4, 0).is_empty()
    with pytest.raises(InvalidArgumentError):
        Node(width=2, bits=0b100)


def test_alphabet_and_neighborhood_validation():
    with pytest.raises(InvalidArgumentError):
        Alphabet(1)
    with pytest.raises(InvalidArgumentError):
        Neighborhood(-1, 0)
    assert Neighborhood(0, 0).k == 1
