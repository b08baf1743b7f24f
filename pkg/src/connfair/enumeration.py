"""Exhaustive enumeration of connected subsets, partitions, and allocations.

Everything here is exponential and guarded by a size budget so that
exhaustive runs stay at desk scale and fail loudly instead of hanging.
Enumeration order is deterministic; oracle witnesses are defined as the
first hit in this order.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import BudgetExceededError
from .model import Allocation, Bundle, EMPTY_BUNDLE, Instance, ItemGraph

PATH_ITEM_LIMIT = 12
PATH_AGENT_LIMIT = 5
GENERAL_ITEM_LIMIT = 10
GENERAL_AGENT_LIMIT = 4
SUBSET_ITEM_LIMIT = 20


@dataclass(frozen=True)
class Budget:
    """Caps for exhaustive enumeration; None fields fall back to topology defaults."""

    max_items: int | None = None
    max_agents: int | None = None
    max_subset_items: int = SUBSET_ITEM_LIMIT

    def limits_for(self, graph: ItemGraph) -> tuple[int, int]:
        on_path = graph.topology == "path"
        items = self.max_items if self.max_items is not None else (
            PATH_ITEM_LIMIT if on_path else GENERAL_ITEM_LIMIT
        )
        agents = self.max_agents if self.max_agents is not None else (
            PATH_AGENT_LIMIT if on_path else GENERAL_AGENT_LIMIT
        )
        return items, agents


DEFAULT_BUDGET = Budget()


def check_enumeration_budget(graph: ItemGraph, num_agents: int, budget: Budget) -> None:
    item_cap, agent_cap = budget.limits_for(graph)
    if graph.num_items > item_cap:
        raise BudgetExceededError(
            f"{graph.num_items} items exceed the enumeration budget of {item_cap} "
            f"for {graph.topology} graphs (raise --budget-items to override)"
        )
    if num_agents > agent_cap:
        raise BudgetExceededError(
            f"{num_agents} agents exceed the enumeration budget of {agent_cap} "
            f"for {graph.topology} graphs (raise --budget-agents to override)"
        )


def enumerate_connected_subsets(graph: ItemGraph, budget: Budget = DEFAULT_BUDGET) -> Iterator[Bundle]:
    """Yield the empty set and every connected subset exactly once."""
    if graph.num_items > budget.max_subset_items:
        raise BudgetExceededError(
            f"{graph.num_items} items exceed the connected-subset budget of {budget.max_subset_items}"
        )
    return _subsets_iter(graph)


def _subsets_iter(graph: ItemGraph) -> Iterator[Bundle]:
    yield EMPTY_BUNDLE
    for anchor in range(graph.num_items):
        # subsets whose minimum item is the anchor: grow using larger items only
        yield from _connected_supersets(graph, anchor, range(anchor, graph.num_items))


def _connected_supersets(graph: ItemGraph, anchor: int, allowed) -> Iterator[Bundle]:
    """All connected subsets of `allowed` containing `anchor`, each exactly once."""
    allowed_set = frozenset(allowed)
    start = frozenset((anchor,))
    seen = {start}
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        yield subset
        frontier: set[int] = set()
        for item in subset:
            for neigh in graph.adjacency[item]:
                if neigh in allowed_set and neigh not in subset:
                    frontier.add(neigh)
        for neigh in sorted(frontier):
            grown = subset | {neigh}
            if grown not in seen:
                seen.add(grown)
                queue.append(grown)


def enumerate_connected_partitions(
    graph: ItemGraph, num_blocks: int, budget: Budget = DEFAULT_BUDGET
) -> Iterator[tuple[Bundle, ...]]:
    """Partitions of all items into num_blocks non-empty connected blocks.

    Blocks are emitted sorted by their minimum item. On forests this cuts
    edge subsets (a bijection); otherwise it searches anchored blocks.
    """
    if num_blocks < 1:
        raise ValueError("num_blocks must be at least 1")
    check_enumeration_budget(graph, num_blocks, budget)
    if graph.is_forest():
        return _partitions_by_edge_cuts(graph, num_blocks)
    return _partitions_generic(graph, num_blocks)


def _partitions_by_edge_cuts(graph: ItemGraph, num_blocks: int) -> Iterator[tuple[Bundle, ...]]:
    base_components = len(graph.components)
    cuts = num_blocks - base_components
    if cuts < 0 or cuts > len(graph.edges):
        return
    # Cut sets are tried highest edge first, so on a path the rightmost cut
    # comes first; the canonical order freezes first-witness choices.
    edges = sorted(graph.edges, reverse=True)
    for removed in itertools.combinations(edges, cuts):
        removed_set = set(removed)
        parent = list(range(graph.num_items))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in edges:
            if (a, b) in removed_set:
                continue
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        blocks: dict[int, set[int]] = {}
        for item in range(graph.num_items):
            blocks.setdefault(find(item), set()).add(item)
        yield tuple(frozenset(b) for b in sorted(blocks.values(), key=min))


def _partitions_generic(graph: ItemGraph, num_blocks: int) -> Iterator[tuple[Bundle, ...]]:
    all_items = frozenset(range(graph.num_items))

    def recurse(remaining: Bundle, blocks_left: int) -> Iterator[tuple[Bundle, ...]]:
        if blocks_left == 1:
            if graph.is_connected_subset(remaining):
                yield (remaining,)
            return
        if len(remaining) < blocks_left:
            return
        anchor = min(remaining)
        candidates = sorted(
            _connected_supersets(graph, anchor, remaining),
            key=lambda b: tuple(sorted(b)),
        )
        for block in candidates:
            if len(remaining) - len(block) < blocks_left - 1:
                continue
            for rest in recurse(remaining - block, blocks_left - 1):
                yield (block,) + rest

    return recurse(all_items, num_blocks)


def iter_partition_assignments(
    graph: ItemGraph, num_agents: int, budget: Budget = DEFAULT_BUDGET
) -> Iterator[tuple[tuple[Bundle, ...], tuple[int, ...]]]:
    """Yield (blocks, agents) pairs: blocks[j] goes to agents[j], the rest get nothing.

    This is the canonical enumeration order for allocations: block count
    ascending, partitions in their order, agent injections lexicographic.
    The same blocks tuple is reused across its injections, so consumers
    may cache per-partition work by identity.
    """
    check_enumeration_budget(graph, num_agents, budget)

    def generate() -> Iterator[tuple[tuple[Bundle, ...], tuple[int, ...]]]:
        for k in range(1, min(num_agents, graph.num_items) + 1):
            if graph.is_forest():
                parts: Iterator[tuple[Bundle, ...]] = _partitions_by_edge_cuts(graph, k)
            else:
                parts = _partitions_generic(graph, k)
            for blocks in parts:
                for chosen in itertools.permutations(range(num_agents), k):
                    yield blocks, chosen

    return generate()


def enumerate_allocations(
    instance: Instance, budget: Budget = DEFAULT_BUDGET
) -> Iterator[Allocation]:
    """Every allocation of connected bundles to agents; empty bundles allowed."""
    assignments = iter_partition_assignments(instance.graph, instance.num_agents, budget)

    def generate() -> Iterator[Allocation]:
        for blocks, chosen in assignments:
            yield build_allocation(instance.num_agents, blocks, chosen)

    return generate()


def build_allocation(
    num_agents: int, blocks: Sequence[Bundle], chosen: Sequence[int]
) -> Allocation:
    bundles: list[Bundle] = [EMPTY_BUNDLE] * num_agents
    for block, agent in zip(blocks, chosen):
        bundles[agent] = block
    return Allocation(tuple(bundles))
