"""Shared generators and reference implementations for the test suite.

The reference implementations here are deliberately independent of the
package internals: they recompute properties by direct definition so the
package's oracle has something honest to be checked against.
"""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

from connfair import (
    Allocation,
    AdditiveValuation,
    BinaryValuation,
    Budget,
    Instance,
    ItemGraph,
    check_non_nested,
    interval_profile,
    iter_partition_assignments,
    build_allocation,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


def random_additive_path(rng: random.Random, max_items: int, max_agents: int,
                         max_value: int = 3) -> Instance:
    m = rng.randint(1, max_items)
    n = rng.randint(1, max_agents)
    graph = ItemGraph.path(m)
    valuations = tuple(
        AdditiveValuation(tuple(Fraction(rng.randint(0, max_value)) for _ in range(m)))
        for _ in range(n)
    )
    return Instance(graph, valuations)


def random_identical_additive_path(rng: random.Random, max_items: int,
                                   max_agents: int, max_value: int = 3) -> Instance:
    m = rng.randint(1, max_items)
    n = rng.randint(1, max_agents)
    graph = ItemGraph.path(m)
    shared = AdditiveValuation(
        tuple(Fraction(rng.randint(0, max_value)) for _ in range(m))
    )
    return Instance(graph, (shared,) * n)


def random_additive_star(rng: random.Random, max_items: int, max_agents: int,
                         max_value: int = 3) -> Instance:
    m = rng.randint(1, max_items)
    n = rng.randint(1, max_agents)
    graph = ItemGraph.star(m)
    valuations = tuple(
        AdditiveValuation(tuple(Fraction(rng.randint(0, max_value)) for _ in range(m)))
        for _ in range(n)
    )
    return Instance(graph, valuations)


def random_non_nested_binary_path(rng: random.Random, max_items: int,
                                  max_agents: int) -> Instance:
    """Binary interval approvals on a path with no strict nesting.

    Every agent approves a non-empty contiguous interval; profiles are
    rejection-sampled until the non-nested condition holds.
    """
    m = rng.randint(1, max_items)
    n = rng.randint(1, max_agents)
    graph = ItemGraph.path(m)
    while True:
        valuations = []
        for _ in range(n):
            lo = rng.randint(0, m - 1)
            hi = rng.randint(lo, m - 1)
            valuations.append(BinaryValuation(m, frozenset(range(lo, hi + 1))))
        instance = Instance(graph, tuple(valuations))
        if check_non_nested(interval_profile(instance)):
            return instance


def random_tree_graph(rng: random.Random, num_items: int) -> ItemGraph:
    edges = [(rng.randint(0, i - 1), i) for i in range(1, num_items)]
    return ItemGraph.from_edge_list(num_items, edges)


def random_connected_graph(rng: random.Random, num_items: int,
                           extra_edges: int) -> ItemGraph:
    tree = random_tree_graph(rng, num_items)
    edges = set(tree.edges)
    candidates = [
        (a, b)
        for a in range(num_items)
        for b in range(a + 1, num_items)
        if (a, b) not in edges
    ]
    rng.shuffle(candidates)
    edges.update(candidates[:extra_edges])
    return ItemGraph.from_edge_list(num_items, sorted(edges))


def all_allocations(instance: Instance, budget: Budget | None = None) -> list[Allocation]:
    budget = budget or Budget()
    return [
        build_allocation(instance.num_agents, blocks, chosen)
        for blocks, chosen in iter_partition_assignments(
            instance.graph, instance.num_agents, budget
        )
    ]


def reference_is_po(instance: Instance, allocation: Allocation,
                    budget: Budget | None = None) -> bool:
    """Pareto optimality by direct definition: no allocation dominates."""
    mine = [instance.value(i, allocation.bundles[i]) for i in range(instance.num_agents)]
    for other in all_allocations(instance, budget):
        theirs = [instance.value(i, other.bundles[i]) for i in range(instance.num_agents)]
        if all(t >= m for t, m in zip(theirs, mine)) and theirs != mine:
            return False
    return True


def reference_max_welfare(instance: Instance, budget: Budget | None = None) -> Fraction:
    best = Fraction(0)
    for other in all_allocations(instance, budget):
        total = sum(
            (instance.value(i, other.bundles[i]) for i in range(instance.num_agents)),
            Fraction(0),
        )
        best = max(best, total)
    return best


def reference_mms(instance: Instance, agent: int,
                  budget: Budget | None = None) -> Fraction:
    """Maximin share by direct definition over connected partitions."""
    from connfair import enumerate_connected_partitions

    budget = budget or Budget()
    n = instance.num_agents
    best = None
    for blocks in enumerate_connected_partitions(instance.graph, n, budget):
        worst = min(instance.value(agent, block) for block in blocks)
        if best is None or worst > best:
            best = worst
    return Fraction(0) if best is None else best
