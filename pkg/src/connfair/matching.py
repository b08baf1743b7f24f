"""Maximum-weight bipartite matching with exact rational arithmetic.

Hungarian algorithm with potentials on a square padded cost matrix.
Weights must be non-negative; absent pairs are never matched. The result
keeps only pairs with positive weight, which never changes the total.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .errors import ValidationError

Weights = Mapping[tuple[int, int], Fraction]


def max_weight_matching(
    num_left: int, num_right: int, weights: Weights
) -> tuple[dict[int, int], Fraction]:
    """Return (matching, total weight); matching maps left index -> right index."""
    for (left, right), w in weights.items():
        if not (0 <= left < num_left and 0 <= right < num_right):
            raise ValidationError(f"weight for ({left}, {right}) is out of range")
        if w < 0:
            raise ValidationError("matching weights must be non-negative")
    if num_left == 0 or num_right == 0:
        return {}, Fraction(0)

    size = max(num_left, num_right)
    zero = Fraction(0)
    # Minimization on negated weights; padding cells cost 0.
    cost = [[zero] * size for _ in range(size)]
    for (left, right), w in weights.items():
        cost[left][right] = -Fraction(w)

    infinity = sum((abs(c) for row in cost for c in row), Fraction(1))
    u = [zero] * (size + 1)
    v = [zero] * (size + 1)
    match_of_col = [0] * (size + 1)  # row matched to each column; 0 = free
    way = [0] * (size + 1)
    for row in range(1, size + 1):
        match_of_col[0] = row
        col0 = 0
        min_slack = [infinity] * (size + 1)
        used = [False] * (size + 1)
        while True:
            used[col0] = True
            row0 = match_of_col[col0]
            delta = None
            col1 = -1
            for col in range(1, size + 1):
                if used[col]:
                    continue
                current = cost[row0 - 1][col - 1] - u[row0] - v[col]
                if current < min_slack[col]:
                    min_slack[col] = current
                    way[col] = col0
                if delta is None or min_slack[col] < delta:
                    delta = min_slack[col]
                    col1 = col
            assert delta is not None
            for col in range(size + 1):
                if used[col]:
                    u[match_of_col[col]] += delta
                    v[col] -= delta
                else:
                    min_slack[col] -= delta
            col0 = col1
            if match_of_col[col0] == 0:
                break
        while col0:
            col1 = way[col0]
            match_of_col[col0] = match_of_col[col1]
            col0 = col1

    matching: dict[int, int] = {}
    total = Fraction(0)
    for col in range(1, size + 1):
        left = match_of_col[col] - 1
        right = col - 1
        if left < num_left and right < num_right:
            w = weights.get((left, right))
            if w is not None and w > 0:
                matching[left] = right
                total += Fraction(w)
    return matching, total
