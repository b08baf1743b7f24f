"""Unit tests for maximum-weight bipartite matching."""

import itertools
import random
from fractions import Fraction

import pytest

from connfair import ValidationError, max_weight_matching


def brute_force_total(num_left, num_right, weights):
    """Best total over all injective assignments, taking absent pairs as 0."""
    best = Fraction(0)
    sides = (num_left, num_right)
    small, large = min(sides), max(sides)
    for combo in itertools.permutations(range(large), small):
        if num_left <= num_right:
            pairs = ((i, combo[i]) for i in range(num_left))
        else:
            pairs = ((combo[j], j) for j in range(num_right))
        total = sum((weights.get(p, Fraction(0)) for p in pairs), Fraction(0))
        best = max(best, total)
    return best


def random_weights(rng, num_left, num_right, density=0.7):
    weights = {}
    for i in range(num_left):
        for j in range(num_right):
            if rng.random() < density:
                weights[(i, j)] = Fraction(rng.randint(0, 12), rng.randint(1, 4))
    return weights


class TestMatching:
    def test_tiny_known_case(self):
        weights = {
            (0, 0): Fraction(2), (0, 1): Fraction(1),
            (1, 0): Fraction(1), (1, 1): Fraction(3),
        }
        matching, total = max_weight_matching(2, 2, weights)
        assert matching == {0: 0, 1: 1}
        assert total == Fraction(5)

    def test_empty_weights(self):
        assert max_weight_matching(2, 2, {}) == ({}, Fraction(0))
        assert max_weight_matching(0, 0, {}) == ({}, Fraction(0))

    def test_zero_weight_pairs_left_unmatched(self):
        matching, total = max_weight_matching(
            2, 2, {(0, 0): Fraction(0), (1, 1): Fraction(2)}
        )
        assert matching == {1: 1}
        assert total == Fraction(2)

    def test_negative_weight_rejected(self):
        with pytest.raises(ValidationError):
            max_weight_matching(1, 1, {(0, 0): Fraction(-1)})

    def test_square_matrices_match_brute_force(self):
        rng = random.Random(61)
        for _ in range(30):
            weights = random_weights(rng, 6, 6)
            matching, total = max_weight_matching(6, 6, weights)
            assert total == brute_force_total(6, 6, weights)
            assert sum(weights.get(p, Fraction(0)) for p in matching.items()) == total

    def test_rectangular_matrices_match_brute_force(self):
        rng = random.Random(67)
        for _ in range(30):
            num_left = rng.randint(1, 5)
            num_right = rng.randint(1, 7)
            weights = random_weights(rng, num_left, num_right)
            matching, total = max_weight_matching(num_left, num_right, weights)
            assert total == brute_force_total(num_left, num_right, weights)

    def test_matching_is_injective_and_positive(self):
        rng = random.Random(71)
        for _ in range(30):
            num_left = rng.randint(1, 6)
            num_right = rng.randint(1, 6)
            weights = random_weights(rng, num_left, num_right, density=0.5)
            matching, _ = max_weight_matching(num_left, num_right, weights)
            assert len(set(matching.values())) == len(matching)
            for pair in matching.items():
                assert pair in weights
                assert weights[pair] > 0
                assert 0 <= pair[0] < num_left
                assert 0 <= pair[1] < num_right
