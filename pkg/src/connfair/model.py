"""Core data model: item graphs, valuations, instances, allocations.

All values are exact rationals (int / fractions.Fraction); floats are
rejected at parse time so every comparison in the solvers is exact.
Items are indexed 0..m-1; agents 0..n-1. Bundles are frozensets of item
indices, and an allocation assigns one (possibly empty) connected bundle
to every agent so that the bundles partition the item set.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import ValidationError

Bundle = frozenset[int]
EMPTY_BUNDLE: Bundle = frozenset()

Rational = Union[int, Fraction]


def parse_rational(raw) -> Fraction:
    """Parse a JSON scalar into an exact Fraction. Floats are rejected."""
    if isinstance(raw, bool):
        raise ValidationError(f"expected a rational value, got {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse rational {raw!r}") from exc
    if isinstance(raw, float):
        raise ValidationError(
            f"floating-point value {raw!r} not accepted; use an int or a 'p/q' string"
        )
    raise ValidationError(f"cannot parse rational {raw!r}")


def rational_to_json(value: Rational):
    frac = Fraction(value)
    if frac.denominator == 1:
        return int(frac)
    return f"{frac.numerator}/{frac.denominator}"


@dataclass(frozen=True)
class ItemGraph:
    """Undirected graph on items 0..m-1 with optional string labels."""

    num_items: int
    edges: frozenset[tuple[int, int]]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.num_items < 1:
            raise ValidationError("graph needs at least one item")
        for edge in self.edges:
            a, b = edge
            if not (0 <= a < b < self.num_items):
                raise ValidationError(f"bad edge {edge}: endpoints must satisfy 0 <= a < b < m")
        if self.labels and len(self.labels) != self.num_items:
            raise ValidationError("label count must match item count")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"v{i + 1}" for i in range(self.num_items)))

    @staticmethod
    def from_edge_list(num_items: int, edges: Iterable[Sequence[int]], labels=()) -> "ItemGraph":
        canon = frozenset((min(a, b), max(a, b)) for a, b in edges)
        for a, b in canon:
            if a == b:
                raise ValidationError(f"self-loop on item {a}")
        return ItemGraph(num_items, canon, tuple(labels))

    @staticmethod
    def path(num_items: int, labels=()) -> "ItemGraph":
        edges = [(i, i + 1) for i in range(num_items - 1)]
        return ItemGraph.from_edge_list(num_items, edges, labels)

    @staticmethod
    def star(num_items: int, labels=()) -> "ItemGraph":
        """Star with center 0 and leaves 1..m-1."""
        edges = [(0, i) for i in range(1, num_items)]
        return ItemGraph.from_edge_list(num_items, edges, labels)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        neigh: list[list[int]] = [[] for _ in range(self.num_items)]
        for a, b in sorted(self.edges):
            neigh[a].append(b)
            neigh[b].append(a)
        return tuple(tuple(sorted(ns)) for ns in neigh)

    def degree(self, item: int) -> int:
        return len(self.adjacency[item])

    def is_connected_subset(self, bundle: Iterable[int]) -> bool:
        """True for the empty set and every bundle inducing a connected subgraph."""
        members = set(bundle)
        if not members:
            return True
        start = next(iter(members))
        seen = {start}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nxt in self.adjacency[cur]:
                if nxt in members and nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return len(seen) == len(members)

    @cached_property
    def components(self) -> tuple[frozenset[int], ...]:
        seen: set[int] = set()
        comps: list[frozenset[int]] = []
        for start in range(self.num_items):
            if start in seen:
                continue
            queue = deque([start])
            comp = {start}
            seen.add(start)
            while queue:
                cur = queue.popleft()
                for nxt in self.adjacency[cur]:
                    if nxt not in seen:
                        seen.add(nxt)
                        comp.add(nxt)
                        queue.append(nxt)
            comps.append(frozenset(comp))
        return tuple(comps)

    def is_connected(self) -> bool:
        return len(self.components) == 1

    def is_forest(self) -> bool:
        return len(self.edges) == self.num_items - len(self.components)

    def is_tree(self) -> bool:
        return self.is_connected() and self.is_forest()

    def is_path(self) -> bool:
        if self.num_items <= 2:
            return self.is_tree()
        if not self.is_tree():
            return False
        degs = [self.degree(i) for i in range(self.num_items)]
        return max(degs) <= 2 and degs.count(1) == 2

    def is_star(self) -> bool:
        if self.num_items <= 2:
            return self.is_tree()
        if not self.is_tree():
            return False
        return any(self.degree(i) == self.num_items - 1 for i in range(self.num_items))

    @cached_property
    def topology(self) -> str:
        """Most specific of path / star / tree / forest / general."""
        if self.is_path():
            return "path"
        if self.is_star():
            return "star"
        if self.is_tree():
            return "tree"
        if self.is_forest():
            return "forest"
        return "general"

    @cached_property
    def path_order(self) -> tuple[int, ...]:
        """Items in order along the path, starting from the lower-indexed endpoint."""
        if not self.is_path():
            raise ValidationError("path_order requires a path graph")
        if self.num_items == 1:
            return (0,)
        endpoints = [i for i in range(self.num_items) if self.degree(i) == 1]
        cur = min(endpoints)
        order = [cur]
        prev = -1
        while len(order) < self.num_items:
            nxt = next(n for n in self.adjacency[cur] if n != prev)
            order.append(nxt)
            prev, cur = cur, nxt
        return tuple(order)

    def star_center(self) -> int:
        """Center of a star graph; for m <= 2 the lower-indexed item."""
        if not self.is_star():
            raise ValidationError("star_center requires a star graph")
        if self.num_items <= 2:
            return 0
        return next(i for i in range(self.num_items) if self.degree(i) == self.num_items - 1)

    def distances_from(self, start: int) -> list[int]:
        dist = [-1] * self.num_items
        dist[start] = 0
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nxt in self.adjacency[cur]:
                if dist[nxt] < 0:
                    dist[nxt] = dist[cur] + 1
                    queue.append(nxt)
        return dist

    def diameter(self) -> int:
        """Largest shortest-path edge count between any two items (graph must be connected)."""
        if not self.is_connected():
            raise ValidationError("diameter requires a connected graph")
        best = 0
        for start in range(self.num_items):
            best = max(best, max(self.distances_from(start)))
        return best


def concatenate_paths(paths: Sequence[ItemGraph]) -> ItemGraph:
    """Join path graphs end to end into one path, preserving labels."""
    if not paths:
        raise ValidationError("need at least one path to concatenate")
    labels: list[str] = []
    edges: list[tuple[int, int]] = []
    offset = 0
    for piece in paths:
        order = piece.path_order
        labels.extend(piece.labels[i] for i in order)
        edges.extend((offset + k, offset + k + 1) for k in range(len(order) - 1))
        if offset > 0:
            edges.append((offset - 1, offset))
        offset += len(order)
    return ItemGraph.from_edge_list(offset, edges, labels)


class Valuation:
    """Common interface: exact value of a connected bundle."""

    num_items: int

    def value(self, bundle: Bundle) -> Fraction:
        raise NotImplementedError

    def to_json_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class AdditiveValuation(Valuation):
    item_values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "item_values", tuple(Fraction(v) for v in self.item_values))
        if any(v < 0 for v in self.item_values):
            raise ValidationError("additive item values must be non-negative")

    @property
    def num_items(self) -> int:
        return len(self.item_values)

    def item_value(self, item: int) -> Fraction:
        return self.item_values[item]

    def value(self, bundle: Bundle) -> Fraction:
        return sum((self.item_values[i] for i in bundle), Fraction(0))

    def to_json_dict(self) -> dict:
        return {"kind": "additive", "values": [rational_to_json(v) for v in self.item_values]}


@dataclass(frozen=True)
class BinaryValuation(Valuation):
    """Approval valuation: each item is worth 1 (approved) or 0."""

    num_items: int
    approved: Bundle

    def __post_init__(self):
        if any(not (0 <= i < self.num_items) for i in self.approved):
            raise ValidationError("approved item out of range")

    def item_value(self, item: int) -> Fraction:
        return Fraction(1 if item in self.approved else 0)

    def value(self, bundle: Bundle) -> Fraction:
        return Fraction(len(self.approved & bundle))

    def to_json_dict(self) -> dict:
        return {"kind": "binary", "approves": sorted(self.approved)}


@dataclass(frozen=True)
class TwoAdditiveValuation(Valuation):
    """Sum of weights over singletons and pairs inside the bundle.

    Pair weights may be negative and pairs need not be graph edges; only
    the total value of each connected bundle must be non-negative, which
    validate_instance checks by enumeration.
    """

    num_items: int
    weights: tuple[tuple[Bundle, Fraction], ...]

    def __post_init__(self):
        canon: dict[Bundle, Fraction] = {}
        for part, w in self.weights:
            part = frozenset(part)
            if not 1 <= len(part) <= 2:
                raise ValidationError("two-additive weights are for singletons and pairs only")
            if any(not (0 <= i < self.num_items) for i in part):
                raise ValidationError("weight references item out of range")
            if part in canon:
                raise ValidationError(f"duplicate weight entry for {sorted(part)}")
            canon[part] = Fraction(w)
        object.__setattr__(self, "weights", tuple(sorted(canon.items(), key=lambda kv: sorted(kv[0]))))
        object.__setattr__(self, "_by_part", canon)

    def value(self, bundle: Bundle) -> Fraction:
        total = Fraction(0)
        members = sorted(bundle)
        by_part = self._by_part
        for idx, a in enumerate(members):
            total += by_part.get(frozenset((a,)), Fraction(0))
            for b in members[idx + 1:]:
                total += by_part.get(frozenset((a, b)), Fraction(0))
        return total

    def to_json_dict(self) -> dict:
        return {
            "kind": "two_additive",
            "weights": [
                {"items": sorted(part), "w": rational_to_json(w)} for part, w in self.weights
            ],
        }


@dataclass(frozen=True)
class TableValuation(Valuation):
    """Explicit bundle-value table; must cover every connected bundle of the graph."""

    num_items: int
    entries: tuple[tuple[Bundle, Fraction], ...]

    def __post_init__(self):
        table: dict[Bundle, Fraction] = {}
        for bundle, val in self.entries:
            bundle = frozenset(bundle)
            if any(not (0 <= i < self.num_items) for i in bundle):
                raise ValidationError("table bundle references item out of range")
            if bundle in table:
                raise ValidationError(f"duplicate table entry for {sorted(bundle)}")
            table[bundle] = Fraction(val)
        if table.get(EMPTY_BUNDLE, Fraction(0)) != 0:
            raise ValidationError("table value of the empty bundle must be 0")
        table[EMPTY_BUNDLE] = Fraction(0)
        object.__setattr__(
            self, "entries", tuple(sorted(table.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))))
        )
        object.__setattr__(self, "_table", table)

    def value(self, bundle: Bundle) -> Fraction:
        try:
            return self._table[frozenset(bundle)]
        except KeyError:
            raise ValidationError(f"bundle {sorted(bundle)} missing from value table") from None

    def to_json_dict(self) -> dict:
        return {
            "kind": "table",
            "entries": [
                {"bundle": sorted(b), "value": rational_to_json(v)} for b, v in self.entries
            ],
        }


def is_additive_like(valuation: Valuation) -> bool:
    """Additive and binary valuations expose per-item values."""
    return isinstance(valuation, (AdditiveValuation, BinaryValuation))


@dataclass(frozen=True)
class Instance:
    """An item graph plus one valuation per agent."""

    graph: ItemGraph
    valuations: tuple[Valuation, ...]
    name: str = ""
    provenance: str = ""

    def __post_init__(self):
        if not self.valuations:
            raise ValidationError("instance needs at least one agent")
        for i, val in enumerate(self.valuations):
            if val.num_items != self.graph.num_items:
                raise ValidationError(
                    f"agent {i} valuation covers {val.num_items} items, graph has {self.graph.num_items}"
                )

    @property
    def num_items(self) -> int:
        return self.graph.num_items

    @property
    def num_agents(self) -> int:
        return len(self.valuations)

    def value(self, agent: int, bundle: Bundle) -> Fraction:
        return self.valuations[agent].value(bundle)

    def to_json_dict(self) -> dict:
        data = {
            "items": list(self.graph.labels),
            "edges": [list(e) for e in sorted(self.graph.edges)],
            "agents": [v.to_json_dict() for v in self.valuations],
        }
        if self.name:
            data["name"] = self.name
        if self.provenance:
            data["provenance"] = self.provenance
        return data


@dataclass(frozen=True)
class Allocation:
    """One bundle per agent; bundles are disjoint, connected, and cover all items."""

    bundles: tuple[Bundle, ...]

    def __post_init__(self):
        object.__setattr__(self, "bundles", tuple(frozenset(b) for b in self.bundles))

    def bundle(self, agent: int) -> Bundle:
        return self.bundles[agent]

    def validate(self, graph: ItemGraph, num_agents: int | None = None) -> None:
        if num_agents is not None and len(self.bundles) != num_agents:
            raise ValidationError(
                f"allocation has {len(self.bundles)} bundles, instance has {num_agents} agents"
            )
        seen: set[int] = set()
        total = 0
        for i, bundle in enumerate(self.bundles):
            for item in bundle:
                if not (0 <= item < graph.num_items):
                    raise ValidationError(f"bundle {i} references item {item} out of range")
            if seen & bundle:
                raise ValidationError(f"bundle {i} overlaps an earlier bundle")
            seen |= bundle
            total += len(bundle)
            if not graph.is_connected_subset(bundle):
                raise ValidationError(f"bundle {i} is not connected: {sorted(bundle)}")
        if total != graph.num_items:
            missing = sorted(set(range(graph.num_items)) - seen)
            raise ValidationError(f"allocation does not cover items {missing}")

    def to_json_dict(self) -> dict:
        return {"bundles": [sorted(b) for b in self.bundles]}


@dataclass(frozen=True)
class MmsProfile:
    """Per-agent maximin shares, tied to the graph they were computed on.

    When the graph admits no partition into num_agents non-empty connected
    blocks, every share is 0 and partition_set_empty records that.
    """

    values: tuple[Fraction, ...]
    graph: ItemGraph
    method: str
    partition_set_empty: bool = False

    def to_json_dict(self) -> dict:
        return {
            "values": [rational_to_json(v) for v in self.values],
            "method": self.method,
            "partition_set_empty": self.partition_set_empty,
        }


def _parse_valuation(raw: dict, num_items: int) -> Valuation:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ValidationError(f"agent entry must be an object with a 'kind': {raw!r}")
    kind = raw["kind"]
    if kind == "additive":
        values = [parse_rational(v) for v in raw.get("values", [])]
        if len(values) != num_items:
            raise ValidationError("additive 'values' length must equal item count")
        return AdditiveValuation(tuple(values))
    if kind == "binary":
        approves = raw.get("approves", [])
        if not all(isinstance(i, int) and not isinstance(i, bool) for i in approves):
            raise ValidationError("binary 'approves' must be a list of item indices")
        return BinaryValuation(num_items, frozenset(approves))
    if kind == "two_additive":
        weights = []
        for entry in raw.get("weights", []):
            items = entry.get("items")
            if not isinstance(items, list):
                raise ValidationError("two_additive weight entry needs an 'items' list")
            weights.append((frozenset(items), parse_rational(entry.get("w"))))
        return TwoAdditiveValuation(num_items, tuple(weights))
    if kind == "table":
        entries = []
        for entry in raw.get("entries", []):
            bundle = entry.get("bundle")
            if not isinstance(bundle, list):
                raise ValidationError("table entry needs a 'bundle' list")
            entries.append((frozenset(bundle), parse_rational(entry.get("value"))))
        return TableValuation(num_items, tuple(entries))
    raise ValidationError(f"unknown valuation kind {kind!r}")


def validate_instance(data: dict) -> Instance:
    """Build a validated Instance from parsed JSON data."""
    if not isinstance(data, dict):
        raise ValidationError("instance JSON must be an object")
    items = data.get("items")
    if not isinstance(items, list) or not items:
        raise ValidationError("instance needs a non-empty 'items' list of labels")
    labels = tuple(str(lbl) for lbl in items)
    edges_raw = data.get("edges", [])
    edges = []
    for edge in edges_raw:
        if not (isinstance(edge, list) and len(edge) == 2):
            raise ValidationError(f"edge {edge!r} must be a two-item list")
        edges.append((edge[0], edge[1]))
    graph = ItemGraph.from_edge_list(len(labels), edges, labels)
    agents_raw = data.get("agents")
    if not isinstance(agents_raw, list) or not agents_raw:
        raise ValidationError("instance needs a non-empty 'agents' list")
    valuations = tuple(_parse_valuation(raw, len(labels)) for raw in agents_raw)
    instance = Instance(
        graph,
        valuations,
        name=str(data.get("name", "")),
        provenance=str(data.get("provenance", "")),
    )
    _validate_tables(instance)
    return instance


def _validate_tables(instance: Instance) -> None:
    """Check table valuations for totality and monotonicity over connected bundles."""
    tables = [v for v in instance.valuations if isinstance(v, TableValuation)]
    if not tables:
        return
    from .enumeration import enumerate_connected_subsets

    connected = list(enumerate_connected_subsets(instance.graph))
    for val in tables:
        for bundle in connected:
            val.value(bundle)  # raises if missing
        listed = [b for b, _ in val.entries]
        for small in listed:
            for big in listed:
                if small < big and val.value(small) > val.value(big):
                    raise ValidationError(
                        f"table not monotone: value({sorted(small)}) > value({sorted(big)})"
                    )


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return validate_instance(data)


def dump_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def allocation_from_dict(data: dict, instance: Instance) -> Allocation:
    if not isinstance(data, dict) or "bundles" not in data:
        raise ValidationError("allocation JSON must be an object with a 'bundles' list")
    bundles = data["bundles"]
    if not isinstance(bundles, list):
        raise ValidationError("'bundles' must be a list of item-index lists")
    alloc = Allocation(tuple(frozenset(b) for b in bundles))
    alloc.validate(instance.graph, instance.num_agents)
    return alloc


def load_allocation(path, instance: Instance) -> Allocation:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return allocation_from_dict(data, instance)
