"""Brute-force oracles: Pareto checks, welfare maximization, EF1, MMS.

These scan all connected allocations (within budget) and define ground
truth for the polynomial algorithms. Witnesses are deterministic: always
the first hit in enumeration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .enumeration import (
    Budget,
    DEFAULT_BUDGET,
    build_allocation,
    enumerate_connected_partitions,
    iter_partition_assignments,
)
from .errors import InternalCheckError
from .model import (
    Allocation,
    Bundle,
    Instance,
    MmsProfile,
    is_additive_like,
    rational_to_json,
)

UtilityVector = tuple[Fraction, ...]


def utility_vector(instance: Instance, allocation: Allocation) -> UtilityVector:
    return tuple(
        instance.value(i, allocation.bundle(i)) for i in range(instance.num_agents)
    )


def welfare(instance: Instance, allocation: Allocation) -> Fraction:
    return sum(utility_vector(instance, allocation), Fraction(0))


def dominates(better: UtilityVector, worse: UtilityVector) -> bool:
    """Weakly better for everyone and strictly better for someone."""
    return better != worse and all(a >= b for a, b in zip(better, worse))


def _iter_vector_assignments(
    instance: Instance, budget: Budget
) -> Iterator[tuple[UtilityVector, tuple[Bundle, ...], tuple[int, ...]]]:
    """Assignments in enumeration order with their utility vectors.

    Per-partition value matrices are cached, which keeps full scans cheap
    enough for the oracle suites.
    """
    n = instance.num_agents
    zero = Fraction(0)
    last_blocks: tuple[Bundle, ...] | None = None
    values: list[tuple[Fraction, ...]] = []
    for blocks, chosen in iter_partition_assignments(instance.graph, n, budget):
        if blocks is not last_blocks:
            last_blocks = blocks
            values = [
                tuple(instance.value(agent, block) for agent in range(n))
                for block in blocks
            ]
        vec = [zero] * n
        for j, agent in enumerate(chosen):
            vec[agent] = values[j][agent]
        yield tuple(vec), blocks, chosen


def find_pareto_improvement(
    instance: Instance, allocation: Allocation, budget: Budget = DEFAULT_BUDGET
) -> Optional[Allocation]:
    """First connected allocation dominating the given one, or None."""
    improvement, _ = _find_pareto_improvement(instance, allocation, budget)
    return improvement


def _find_pareto_improvement(
    instance: Instance, allocation: Allocation, budget: Budget
) -> tuple[Optional[Allocation], int]:
    target = utility_vector(instance, allocation)
    scanned = 0
    for vec, blocks, chosen in _iter_vector_assignments(instance, budget):
        scanned += 1
        if dominates(vec, target):
            return build_allocation(instance.num_agents, blocks, chosen), scanned
    return None, scanned


def is_pareto_optimal(
    instance: Instance, allocation: Allocation, budget: Budget = DEFAULT_BUDGET
) -> bool:
    return find_pareto_improvement(instance, allocation, budget) is None


def complete_to_pareto_optimum(
    instance: Instance, allocation: Allocation, budget: Budget = DEFAULT_BUDGET
) -> Allocation:
    """Follow Pareto improvements until none remain; terminates because each
    step strictly increases the utility vector over a finite allocation set."""
    current = allocation
    while True:
        better = find_pareto_improvement(instance, current, budget)
        if better is None:
            return current
        current = better


def max_welfare_allocation(
    instance: Instance, budget: Budget = DEFAULT_BUDGET
) -> Allocation:
    """First allocation (enumeration order) with maximum utilitarian welfare.

    Welfare-maximal allocations are Pareto-optimal, so this doubles as a
    certified-PO solver at oracle scale.
    """
    upper_bound: Fraction | None = None
    if all(is_additive_like(v) for v in instance.valuations):
        upper_bound = sum(
            (
                max(v.item_value(item) for v in instance.valuations)
                for item in range(instance.num_items)
            ),
            Fraction(0),
        )
    best_welfare: Fraction | None = None
    best: tuple[tuple[Bundle, ...], tuple[int, ...]] | None = None
    for vec, blocks, chosen in _iter_vector_assignments(instance, budget):
        total = sum(vec, Fraction(0))
        if best_welfare is None or total > best_welfare:
            best_welfare = total
            best = (blocks, chosen)
            if upper_bound is not None and total == upper_bound:
                break
    assert best is not None  # at least one allocation always exists
    return build_allocation(instance.num_agents, best[0], best[1])


def _removable_items(instance: Instance, bundle: Bundle) -> list[int]:
    """Items whose removal keeps the bundle connected (outer items)."""
    return [
        item
        for item in sorted(bundle)
        if instance.graph.is_connected_subset(bundle - {item})
    ]


def ef1_violation(
    instance: Instance, allocation: Allocation
) -> Optional[tuple[int, int]]:
    """First agent pair (i, j) where i envies j even after removing one
    connectivity-preserving item from j's bundle; None when EF1 holds."""
    n = instance.num_agents
    own = [instance.value(i, allocation.bundle(i)) for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            other = allocation.bundle(j)
            if own[i] >= instance.value(i, other):
                continue
            if not any(
                own[i] >= instance.value(i, other - {item})
                for item in _removable_items(instance, other)
            ):
                return (i, j)
    return None


def is_ef1(instance: Instance, allocation: Allocation) -> bool:
    return ef1_violation(instance, allocation) is None


def mms_profile_bruteforce(
    instance: Instance, budget: Budget = DEFAULT_BUDGET
) -> MmsProfile:
    """Maximin share per agent over all partitions into n non-empty connected
    blocks; all zero (flagged) when no such partition exists."""
    n = instance.num_agents
    zero = Fraction(0)
    best: list[Fraction | None] = [None] * n
    saw_partition = False
    for blocks in enumerate_connected_partitions(instance.graph, n, budget):
        saw_partition = True
        for agent in range(n):
            worst = min(instance.value(agent, block) for block in blocks)
            if best[agent] is None or worst > best[agent]:
                best[agent] = worst
    if not saw_partition:
        return MmsProfile(
            values=tuple(zero for _ in range(n)),
            graph=instance.graph,
            method="brute",
            partition_set_empty=True,
        )
    return MmsProfile(
        values=tuple(v if v is not None else zero for v in best),
        graph=instance.graph,
        method="brute",
        partition_set_empty=False,
    )


def _check_profile(instance: Instance, profile: MmsProfile) -> None:
    if profile.graph != instance.graph or len(profile.values) != instance.num_agents:
        raise InternalCheckError("MMS profile was computed for a different instance")


def is_mms(
    instance: Instance,
    allocation: Allocation,
    profile: MmsProfile | None = None,
    budget: Budget = DEFAULT_BUDGET,
) -> bool:
    if profile is None:
        profile = mms_profile_bruteforce(instance, budget)
    _check_profile(instance, profile)
    vec = utility_vector(instance, allocation)
    return all(u >= share for u, share in zip(vec, profile.values))


def alpha_mms_level(
    instance: Instance,
    allocation: Allocation,
    profile: MmsProfile | None = None,
    budget: Budget = DEFAULT_BUDGET,
) -> Fraction:
    """Largest alpha in [0, 1] such that every agent gets alpha times their
    maximin share; 1 by convention when every share is 0."""
    if profile is None:
        profile = mms_profile_bruteforce(instance, budget)
    _check_profile(instance, profile)
    vec = utility_vector(instance, allocation)
    level = Fraction(1)
    for u, share in zip(vec, profile.values):
        if share > 0:
            level = min(level, u / share)
    return level


@dataclass(frozen=True)
class ExistenceScan:
    """Outcome of an exhaustive scan for an allocation with required properties."""

    witness: Optional[Allocation]
    scanned: int
    required: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "witness": None if self.witness is None else self.witness.to_json_dict(),
            "scanned": self.scanned,
            "required": list(self.required),
        }


def _pareto_frontier(vectors: list[UtilityVector]) -> set[UtilityVector]:
    """Vectors not dominated by any other vector in the list."""
    unique = sorted(set(vectors), key=lambda v: (-sum(v), v))
    frontier: list[UtilityVector] = []
    kept: set[UtilityVector] = set()
    for vec in unique:
        if not any(dominates(top, vec) for top in frontier):
            frontier.append(vec)
            kept.add(vec)
    return kept


def scan_for_allocation(
    instance: Instance,
    require_po: bool = False,
    require_ef1: bool = False,
    require_mms: bool = False,
    budget: Budget = DEFAULT_BUDGET,
) -> ExistenceScan:
    """First allocation satisfying all required properties, scanning every
    connected allocation in enumeration order."""
    required = tuple(
        name
        for name, flag in (("po", require_po), ("ef1", require_ef1), ("mms", require_mms))
        if flag
    )
    if not required:
        raise ValueError("at least one property is required")
    frontier: set[UtilityVector] | None = None
    if require_po:
        frontier = _pareto_frontier(
            [vec for vec, _, _ in _iter_vector_assignments(instance, budget)]
        )
    shares: MmsProfile | None = None
    if require_mms:
        shares = mms_profile_bruteforce(instance, budget)
    scanned = 0
    for vec, blocks, chosen in _iter_vector_assignments(instance, budget):
        scanned += 1
        if frontier is not None and vec not in frontier:
            continue
        if shares is not None and any(
            u < share for u, share in zip(vec, shares.values)
        ):
            continue
        candidate = build_allocation(instance.num_agents, blocks, chosen)
        if require_ef1 and ef1_violation(instance, candidate) is not None:
            continue
        return ExistenceScan(candidate, scanned, required)
    return ExistenceScan(None, scanned, required)


def exists_po_and_ef1(
    instance: Instance, budget: Budget = DEFAULT_BUDGET
) -> Optional[Allocation]:
    return scan_for_allocation(instance, require_po=True, require_ef1=True, budget=budget).witness


def exists_po_and_mms(
    instance: Instance, budget: Budget = DEFAULT_BUDGET
) -> Optional[Allocation]:
    witness = scan_for_allocation(
        instance, require_po=True, require_mms=True, budget=budget
    ).witness
    if witness is None and instance.graph.is_tree():
        raise InternalCheckError(
            "a Pareto-optimal MMS allocation must exist on a tree; scan found none"
        )
    return witness


@dataclass(frozen=True)
class FairnessReport:
    """Full brute-force audit of one allocation."""

    utilities: UtilityVector
    welfare: Fraction
    is_po: bool
    pareto_improvement: Optional[Allocation]
    is_ef1: bool
    envy_pair: Optional[tuple[int, int]]
    is_mms: bool
    alpha_mms: Fraction
    mms: MmsProfile
    allocations_scanned: int

    def to_json_dict(self) -> dict:
        return {
            "utilities": [rational_to_json(u) for u in self.utilities],
            "welfare": rational_to_json(self.welfare),
            "is_po": self.is_po,
            "pareto_improvement": None
            if self.pareto_improvement is None
            else self.pareto_improvement.to_json_dict(),
            "is_ef1": self.is_ef1,
            "envy_pair": None if self.envy_pair is None else list(self.envy_pair),
            "is_mms": self.is_mms,
            "alpha_mms": rational_to_json(self.alpha_mms),
            "mms": self.mms.to_json_dict(),
            "allocations_scanned": self.allocations_scanned,
        }


def fairness_report(
    instance: Instance, allocation: Allocation, budget: Budget = DEFAULT_BUDGET
) -> FairnessReport:
    allocation.validate(instance.graph, instance.num_agents)
    improvement, scanned = _find_pareto_improvement(instance, allocation, budget)
    envy = ef1_violation(instance, allocation)
    profile = mms_profile_bruteforce(instance, budget)
    vec = utility_vector(instance, allocation)
    return FairnessReport(
        utilities=vec,
        welfare=sum(vec, Fraction(0)),
        is_po=improvement is None,
        pareto_improvement=improvement,
        is_ef1=envy is None,
        envy_pair=envy,
        is_mms=all(u >= share for u, share in zip(vec, profile.values)),
        alpha_mms=alpha_mms_level(instance, allocation, profile),
        mms=profile,
        allocations_scanned=scanned,
    )
