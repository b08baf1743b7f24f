"""Polynomial-time solvers for special graph classes.

- Pareto-optimal allocation on paths (additive valuations).
- Welfare-maximal (hence Pareto-optimal) allocation on stars via matching.
- Exact maximin share value on paths.
- Moving-knife allocation that is Pareto-optimal and MMS for non-nested
  binary interval approvals on paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InternalCheckError, PreconditionError
from .matching import max_weight_matching
from .model import (
    Allocation,
    BinaryValuation,
    Bundle,
    EMPTY_BUNDLE,
    Instance,
    ItemGraph,
    Valuation,
    is_additive_like,
)

Trace = list[dict]


def _require_path(instance_or_graph) -> ItemGraph:
    graph = (
        instance_or_graph.graph
        if isinstance(instance_or_graph, Instance)
        else instance_or_graph
    )
    if not graph.is_path():
        raise PreconditionError(f"requires a path graph, got {graph.topology}")
    return graph


def _require_additive(instance: Instance) -> None:
    for i, val in enumerate(instance.valuations):
        if not is_additive_like(val):
            raise PreconditionError(
                f"agent {i} has a non-additive valuation; this solver needs additive values"
            )


def po_path_additive(instance: Instance, trace: Optional[Trace] = None) -> Allocation:
    """Pareto-optimal connected allocation on a path, additive valuations.

    Walk the path left to right. Skip items worthless to every remaining
    agent (they merge into the next bundle). Among remaining agents, the
    lowest-indexed one valuing the current item positively takes the
    minimal interval covering all of their remaining positive items, so
    their bundle is worth as much to them as the whole remaining path.
    """
    graph = _require_path(instance)
    _require_additive(instance)
    order = graph.path_order
    m, n = instance.num_items, instance.num_agents
    value_at = [
        [instance.valuations[i].item_value(order[p]) for p in range(m)] for i in range(n)
    ]
    bundles: list[Bundle] = [EMPTY_BUNDLE] * n
    remaining = list(range(n))
    pos = 0
    segment_start = 0  # start of the zero-value prefix carried into the next bundle

    def assign(agent: int, start: int, stop: int) -> None:
        bundles[agent] = frozenset(order[p] for p in range(start, stop))
        if trace is not None:
            trace.append(
                {"agent": agent, "items": sorted(order[p] for p in range(start, stop))}
            )

    while pos < m:
        if len(remaining) == 1:
            assign(remaining[0], segment_start, m)
            remaining = []
            pos = m
            break
        while pos < m and all(value_at[i][pos] == 0 for i in remaining):
            pos += 1
        if pos == m:
            # nobody left values the tail; it goes whole to one agent
            assign(remaining[0], segment_start, m)
            remaining.pop(0)
            break
        agent = next(i for i in remaining if value_at[i][pos] > 0)
        last = max(p for p in range(pos, m) if value_at[agent][p] > 0)
        assign(agent, segment_start, last + 1)
        remaining.remove(agent)
        pos = last + 1
        segment_start = pos
    return Allocation(tuple(bundles))


def po_star_additive(instance: Instance, trace: Optional[Trace] = None) -> Allocation:
    """Welfare-maximal connected allocation on a star, additive valuations.

    Guess the agent receiving the center; match every other agent, plus
    one slot per leaf for the center's owner, to leaves at maximum total
    weight. Leaves left unmatched join the center bundle.
    """
    graph = (
        instance.graph if isinstance(instance, Instance) else instance
    )
    if not graph.is_star():
        raise PreconditionError(f"requires a star graph, got {graph.topology}")
    _require_additive(instance)
    center = graph.star_center()
    leaves = [item for item in range(instance.num_items) if item != center]
    n = instance.num_agents
    best: tuple[Fraction, int, dict[int, int], list[int]] | None = None
    for owner in range(n):
        others = [j for j in range(n) if j != owner]
        slots = others + [owner] * len(leaves)
        weights = {}
        for li, agent in enumerate(slots):
            for ri, leaf in enumerate(leaves):
                w = instance.valuations[agent].item_value(leaf)
                if w > 0:
                    weights[(li, ri)] = w
        matching, total = max_weight_matching(len(slots), len(leaves), weights)
        total_welfare = total + instance.valuations[owner].item_value(center)
        if best is None or total_welfare > best[0]:
            best = (total_welfare, owner, matching, slots)
    assert best is not None
    total_welfare, owner, matching, slots = best
    bundles: list[set[int]] = [set() for _ in range(n)]
    bundles[owner].add(center)
    matched_leaves = set()
    for li, ri in matching.items():
        bundles[slots[li]].add(leaves[ri])
        matched_leaves.add(ri)
    for ri, leaf in enumerate(leaves):
        if ri not in matched_leaves:
            bundles[owner].add(leaf)
    allocation = Allocation(tuple(frozenset(b) for b in bundles))
    realized = sum(
        (instance.value(i, allocation.bundle(i)) for i in range(n)), Fraction(0)
    )
    if realized != total_welfare:
        raise InternalCheckError(
            f"star solver welfare mismatch: matching said {total_welfare}, got {realized}"
        )
    if trace is not None:
        trace.append({"center_owner": owner, "welfare": str(total_welfare)})
    return allocation


def _mms_ordered(values: Sequence[Fraction], num_blocks: int) -> Fraction:
    """Exact maximin share of one additive agent on a path given in order.

    Feasibility of a threshold t (can the path split into >= num_blocks
    intervals each worth >= t, extras merging right) is monotone in t, so
    binary-search the achievable interval sums.
    """
    m = len(values)
    if num_blocks > m:
        return Fraction(0)
    if num_blocks < 1:
        raise ValueError("need at least one block")

    def feasible(threshold: Fraction) -> bool:
        count = 0
        running = Fraction(0)
        for v in values:
            running += v
            if running >= threshold:
                count += 1
                running = Fraction(0)
                if count == num_blocks:
                    return True
        return False

    candidates: set[Fraction] = {Fraction(0)}
    prefix = [Fraction(0)]
    for v in values:
        prefix.append(prefix[-1] + v)
    for start in range(m):
        for stop in range(start + 1, m + 1):
            candidates.add(prefix[stop] - prefix[start])
    ordered = sorted(candidates)
    lo, hi = 0, len(ordered) - 1
    best = Fraction(0)
    while lo <= hi:
        mid = (lo + hi) // 2
        if feasible(ordered[mid]):
            best = ordered[mid]
            lo = mid + 1
        else:
            hi = mid - 1
    return best


def mms_value_path(graph: ItemGraph, valuation: Valuation, num_agents: int) -> Fraction:
    """Exact MMS value on a path for one additive agent; 0 when num_agents
    exceeds the item count (no partition into that many non-empty blocks)."""
    graph = _require_path(graph)
    if not is_additive_like(valuation):
        raise PreconditionError("mms_value_path needs an additive valuation")
    if num_agents < 1:
        raise ValueError("num_agents must be at least 1")
    values = [valuation.item_value(item) for item in graph.path_order]
    return _mms_ordered(values, num_agents)


@dataclass(frozen=True)
class IntervalApprovalProfile:
    """Binary approvals on a path, each forming a contiguous interval.

    Intervals are (lo, hi) positions along the path, inclusive; None for
    agents approving nothing (they are skipped by the interval checks).
    """

    order: tuple[int, ...]
    intervals: tuple[Optional[tuple[int, int]], ...]


def interval_profile(instance: Instance) -> IntervalApprovalProfile:
    graph = _require_path(instance)
    order = graph.path_order
    position = {item: p for p, item in enumerate(order)}
    intervals: list[Optional[tuple[int, int]]] = []
    for i, val in enumerate(instance.valuations):
        if not isinstance(val, BinaryValuation):
            raise PreconditionError(f"agent {i} is not a binary (approval) valuation")
        if not val.approved:
            intervals.append(None)
            continue
        positions = sorted(position[item] for item in val.approved)
        lo, hi = positions[0], positions[-1]
        if hi - lo + 1 != len(positions):
            raise PreconditionError(
                f"agent {i}'s approval set is not contiguous on the path"
            )
        intervals.append((lo, hi))
    return IntervalApprovalProfile(order, tuple(intervals))


def check_non_nested(profile: IntervalApprovalProfile) -> bool:
    """No approval interval strictly contains another (empty ones ignored)."""
    real = [iv for iv in profile.intervals if iv is not None]
    for lo_i, hi_i in real:
        for lo_j, hi_j in real:
            if lo_i < lo_j and hi_j < hi_i:
                return False
    return True


def moving_knife_po_mms(
    instance: Instance, force: bool = False, trace: Optional[Trace] = None
) -> Allocation:
    """Pareto-optimal MMS allocation for non-nested interval approvals on a path.

    Repeatedly order the remaining agents by (interval start, interval
    end, index). The first agent takes the shortest prefix reaching their
    maximin share on the remaining sub-instance, extended to just before
    the second agent's interval when the prefix misses it entirely. Items
    approved by no remaining agent attach to the next assigned bundle.

    force=True skips the non-nestedness check (the precondition the
    guarantee rests on) so the failure mode can be demonstrated.
    """
    profile = interval_profile(instance)
    if not force and not check_non_nested(profile):
        raise PreconditionError(
            "approval intervals are nested; the moving-knife guarantee needs "
            "a non-nested profile"
        )
    order = profile.order
    m, n = instance.num_items, instance.num_agents
    position = {item: p for p, item in enumerate(order)}
    approvals: list[set[int]] = [
        {position[item] for item in val.approved} for val in instance.valuations  # type: ignore[attr-defined]
    ]
    agents_left = [i for i in range(n) if approvals[i]]
    assigned: dict[int, set[int]] = {}
    assignment_sequence: list[int] = []
    seq = sorted(p for p in range(m) if any(p in approvals[i] for i in agents_left))
    while agents_left and seq:
        seq = [p for p in seq if any(p in approvals[i] for i in agents_left)]
        agents_left = [i for i in agents_left if approvals[i] & set(seq)]
        if not seq or not agents_left:
            break
        if len(agents_left) == 1:
            agent = agents_left[0]
            assigned[agent] = set(seq)
            assignment_sequence.append(agent)
            if trace is not None:
                trace.append({"agent": agent, "rule": "last-agent", "items": _to_items(order, seq)})
            agents_left = []
            break
        seq_set = set(seq)

        def sort_key(i: int) -> tuple[int, int, int]:
            mine = approvals[i] & seq_set
            return (min(mine), max(mine), i)

        ranked = sorted(agents_left, key=sort_key)
        first, second = ranked[0], ranked[1]
        values = [Fraction(1 if p in approvals[first] else 0) for p in seq]
        share = _mms_ordered(values, len(agents_left))
        running = Fraction(0)
        cut = len(values)
        for idx, v in enumerate(values):
            running += v
            if running >= share:
                cut = idx + 1
                break
        prefix = seq[:cut]
        if any(p in approvals[second] for p in prefix):
            core = prefix
            rule = "take-threshold-prefix"
        else:
            second_start = min(approvals[second] & seq_set)
            core = [p for p in seq if p < second_start]
            rule = "stop-before-next-interval"
        assigned[first] = set(core)
        assignment_sequence.append(first)
        if trace is not None:
            trace.append(
                {
                    "agent": first,
                    "rule": rule,
                    "share": str(share),
                    "items": _to_items(order, core),
                }
            )
        core_set = set(core)
        seq = [p for p in seq if p not in core_set]
        agents_left.remove(first)

    bundles: list[set[int]] = [set() for _ in range(n)]
    if not assigned:
        # nobody approves anything: the whole path goes to the first agent
        bundles[0] = set(range(m))
    else:
        owner_by_position = sorted(
            (p, agent) for agent, positions in assigned.items() for p in positions
        )
        for p in range(m):
            if any(p in positions for positions in assigned.values()):
                continue
            following = next((agent for q, agent in owner_by_position if q > p), None)
            if following is None:
                following = owner_by_position[-1][1]
            assigned[following].add(p)
        for agent, positions in assigned.items():
            bundles[agent] = positions
    return Allocation(
        tuple(frozenset(order[p] for p in positions) for positions in bundles)
    )


def _to_items(order: tuple[int, ...], positions) -> list[int]:
    return sorted(order[p] for p in positions)
