"""Tests for the evolution step and the brute-force oracle."""

import numpy as np
import pytest

from carev import (
    Alphabet,
    BudgetError,
    InvalidStateError,
    Neighborhood,
    brute_force_reversible,
    count_preimages,
    evolve_null,
    rule_from_number,
)

P2 = Alphabet(2)
NB11 = Neighborhood(1, 1)
NB22 = Neighborhood(2, 2)


def reference_evolve(rule, cells):
    """Independent single-step evolution: per-cell window lookup."""
    r_l, r_r = rule.neighborhood.r_l, rule.neighborhood.r_r
    n = len(cells)
    out = []
    for i in range(n):
        idx = 0
        for j in range(i - r_l, i + r_r + 1):
            idx = idx * rule.p + (cells[j] if 0 <= j < n else 0)
        out.append(rule.table[idx])
    return out


def test_rule150_example():
    rule = rule_from_number(150, P2, NB11)
    assert list(evolve_null(rule, [0, 1, 0])) == [1, 1, 1]


def test_wide_rule_path_example():
    rule = rule_from_number(4161270000, P2, NB22)
    assert list(evolve_null(rule, [1, 0, 1, 1, 0])) == [1, 0, 0, 1, 0]


def test_quiescent_configuration_stays_quiescent():
    for number in (150, 90, 204, 60):
        rule = rule_from_number(number, P2, NB11)
        assert rule.table[0] == 0
        assert list(evolve_null(rule, [0] * 6)) == [0] * 6


def test_evolve_matches_reference_on_random_rules():
    rng = np.random.default_rng(7)
    for _ in range(50):
        p = int(rng.integers(2, 4))
        r_l, r_r = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        alphabet, nb = Alphabet(p), Neighborhood(r_l, r_r)
        number = int(rng.integers(0, p ** min(p**nb.k, 30)))
        rule = rule_from_number(number, alphabet, nb)
        n = int(rng.integers(1, 9))
        cells = [int(s) for s in rng.integers(0, p, n)]
        assert list(evolve_null(rule, cells)) == reference_evolve(rule, cells)


def test_evolve_rejects_states_outside_alphabet():
    rule = rule_from_number(150, P2, NB11)
    with pytest.raises(InvalidStateError):
        evolve_null(rule, [0, 2, 0])


def test_oracle_examples():
    assert brute_force_reversible(rule_from_number(153, P2, NB11), 4)
    rule90 = rule_from_number(90, P2, NB11)
    assert not brute_force_reversible(rule90, 3)
    assert brute_force_reversible(rule90, 4)
    assert not brute_force_reversible(rule_from_number(170, P2, NB11), 1)


def test_oracle_budget():
    rule = rule_from_number(150, P2, NB11)
    with pytest.raises(BudgetError):
        brute_force_reversible(rule, 25)
    with pytest.raises(BudgetError):
        brute_force_reversible(rule, 10, budget=512)


def test_count_preimages_identity_and_constant():
    identity = rule_from_number(204, P2, NB11)
    assert count_preimages(identity, [0, 1, 1, 0, 1]) == 1
    zero = rule_from_number(0, P2, NB11)
    assert count_preimages(zero, [0, 0, 0]) == 8
    assert count_preimages(zero, [0, 1, 0]) == 0


def test_count_preimages_includes_known_preimage():
    rule = rule_from_number(4161270000, P2, NB22)
    image = [1, 0, 0, 1, 0]
    assert list(evolve_null(rule, [1, 0, 1, 1, 0])) == image
    assert count_preimages(rule, image) >= 1


def test_reversible_iff_every_image_has_one_preimage():
    for number in (90, 150, 204, 30, 19):
        rule = rule_from_number(number, P2, NB11)
        for n in range(1, 7):
            counts = [
                count_preimages(rule, [(c >> (n - 1 - i)) & 1
                                       for i in range(n)])
                for c in range(2**n)
            ]
            assert brute_force_reversible(rule, n) == all(
                c == 1 for c in counts)


def test_preimage_conservation_on_random_rules():
    # summing preimage counts over every image recovers p**n
    rng = np.random.default_rng(11)
    for _ in range(50):
        number = int(rng.integers(0, 256))
        rule = rule_from_number(number, P2, NB11)
        n = int(rng.integers(1, 6))
        total = sum(
            count_preimages(rule, [(c >> (n - 1 - i)) & 1 for i in range(n)])
            for c in range(2**n)
        )
        assert total == 2**n
