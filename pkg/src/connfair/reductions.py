"""Hardness gadgets linking fair division to exact cover and vertex cover.

Each generator turns an exact-3-cover instance (or a vertex cover instance)
into a fair-division instance whose Pareto-optimal allocations encode the
combinatorial answer.  The module also provides the reverse direction: a
solver that builds the gadget, asks the allocation machinery for a suitable
allocation, checks the success condition, and extracts a verified cover.

Gadget kinds:

- "forest":    disjoint 3-item paths, one per set; binary agents.
- "tree":      two mirrored copies of the forest joined through a center
               item attached to every middle vertex (diameter 5 vertices).
- "maxdeg3":   a spine with one comb per set and one pendant 3-item arm per
               (set, family); max degree 3; one agent family per spare slot.
- "2add-path": all set paths concatenated into a single path; agents use
               singleton-plus-pair weights with values capped at 0 or 1.
- "po-ef1":    a long path where a PO+EF1 allocation exists iff the cover
               does; built from impossibility blocks and two-item separators.
- "po-mms":    set paths separated by blocks owned by filler agents; a
               PO+MMS allocation exists iff the cover does.
- "vc-star":   a star whose center/leaf split encodes vertex cover via one
               pair-weight agent plus unit dummies.

All agents are indexed in the order their roles are listed in
``GadgetInstance.agent_roles``; items likewise via ``item_roles``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .enumeration import Budget, DEFAULT_BUDGET
from .errors import InternalCheckError, PreconditionError, ValidationError
from .model import (
    Allocation,
    BinaryValuation,
    Instance,
    ItemGraph,
    TwoAdditiveValuation,
)
from .oracle import exists_po_and_mms, max_welfare_allocation

GADGET_KINDS = ("forest", "tree", "maxdeg3", "2add-path", "po-ef1", "po-mms")


@dataclass(frozen=True)
class X3CInstance:
    """Exact cover by 3-sets: 3r elements and s candidate triples.

    Sets are stored as ascending triples of distinct elements.  The family
    may contain repeated triples; an instance is a list, not a set.
    """

    num_elements: int
    sets: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.num_elements < 3 or self.num_elements % 3 != 0:
            raise ValidationError(
                "number of elements must be a positive multiple of 3, got %r"
                % (self.num_elements,)
            )
        canon = []
        for triple in self.sets:
            if len(triple) != 3 or len(set(triple)) != 3:
                raise ValidationError("each set must contain 3 distinct elements, got %r" % (triple,))
            for x in triple:
                if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < self.num_elements:
                    raise ValidationError("set element %r out of range" % (x,))
            canon.append(tuple(sorted(triple)))
        object.__setattr__(self, "sets", tuple(canon))
        if self.num_sets < self.num_triples_needed:
            raise ValidationError(
                "need at least %d sets to cover %d elements, got %d"
                % (self.num_triples_needed, self.num_elements, self.num_sets)
            )

    @property
    def num_sets(self) -> int:
        return len(self.sets)

    @property
    def num_triples_needed(self) -> int:
        return self.num_elements // 3

    def occurrences(self, element: int) -> list[tuple[int, int]]:
        """All (set index, position) pairs where the element appears."""
        out = []
        for j, triple in enumerate(self.sets):
            for pos, x in enumerate(triple):
                if x == element:
                    out.append((j, pos))
        return out

    def to_json_dict(self) -> dict:
        return {"elements": self.num_elements, "sets": [list(t) for t in self.sets]}


def x3c_from_json_dict(data: dict) -> X3CInstance:
    if not isinstance(data, dict):
        raise ValidationError("exact cover instance must be an object")
    if "elements" not in data or "sets" not in data:
        raise ValidationError("exact cover instance needs 'elements' and 'sets'")
    elements = data["elements"]
    if not isinstance(elements, int) or isinstance(elements, bool):
        raise ValidationError("'elements' must be an integer")
    raw_sets = data["sets"]
    if not isinstance(raw_sets, list):
        raise ValidationError("'sets' must be a list of triples")
    sets = []
    for triple in raw_sets:
        if not isinstance(triple, list):
            raise ValidationError("each set must be a list, got %r" % (triple,))
        sets.append(tuple(triple))
    return X3CInstance(num_elements=elements, sets=tuple(sets))


@dataclass(frozen=True)
class VCInstance:
    """Vertex cover: find k vertices touching every edge."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    k: int

    def __post_init__(self) -> None:
        if self.num_vertices < 1:
            raise ValidationError("vertex cover instance needs at least one vertex")
        canon = set()
        for edge in self.edges:
            if len(edge) != 2:
                raise ValidationError("edge must have two endpoints, got %r" % (edge,))
            a, b = edge
            for x in (a, b):
                if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < self.num_vertices:
                    raise ValidationError("edge endpoint %r out of range" % (x,))
            if a == b:
                raise ValidationError("self-loop %r not allowed" % (edge,))
            canon.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        if not 1 <= self.k <= self.num_vertices:
            raise ValidationError("cover size k=%r out of range" % (self.k,))

    def to_json_dict(self) -> dict:
        return {
            "vertices": self.num_vertices,
            "edges": [list(e) for e in self.edges],
            "k": self.k,
        }


def vc_from_json_dict(data: dict) -> VCInstance:
    if not isinstance(data, dict):
        raise ValidationError("vertex cover instance must be an object")
    for key in ("vertices", "edges", "k"):
        if key not in data:
            raise ValidationError("vertex cover instance needs %r" % (key,))
    raw_edges = data["edges"]
    if not isinstance(raw_edges, list):
        raise ValidationError("'edges' must be a list of pairs")
    edges = []
    for edge in raw_edges:
        if not isinstance(edge, list) or len(edge) != 2:
            raise ValidationError("each edge must be a pair, got %r" % (edge,))
        edges.append((edge[0], edge[1]))
    return VCInstance(num_vertices=data["vertices"], edges=tuple(edges), k=data["k"])


@dataclass(frozen=True)
class GadgetInstance:
    """A fair-division instance plus the role bookkeeping of its parts."""

    kind: str
    instance: Instance
    agent_roles: tuple[tuple, ...]
    item_roles: tuple[tuple, ...]
    x3c: Optional[X3CInstance] = None
    vc: Optional[VCInstance] = None

    def agents_with_role(self, name: str) -> list[int]:
        return [i for i, role in enumerate(self.agent_roles) if role[0] == name]

    def items_with_role(self, name: str) -> list[int]:
        return [v for v, role in enumerate(self.item_roles) if role[0] == name]

    def agent_by_role(self, role: tuple) -> int:
        for i, r in enumerate(self.agent_roles):
            if r == role:
                return i
        raise KeyError(role)

    def item_by_role(self, role: tuple) -> int:
        for v, r in enumerate(self.item_roles):
            if r == role:
                return v
        raise KeyError(role)

    def to_json_dict(self) -> dict:
        data = self.instance.to_json_dict()
        roles: dict = {
            "kind": self.kind,
            "agents": [list(role) for role in self.agent_roles],
            "items": [list(role) for role in self.item_roles],
        }
        if self.x3c is not None:
            roles["x3c"] = self.x3c.to_json_dict()
        if self.vc is not None:
            roles["vc"] = self.vc.to_json_dict()
        data["roles"] = roles
        return data


class _ItemBuilder:
    """Accumulates labels, roles, and edges while laying out gadget items."""

    def __init__(self) -> None:
        self.labels: list[str] = []
        self.roles: list[tuple] = []
        self.edges: list[tuple[int, int]] = []

    def add(self, label: str, role: tuple) -> int:
        self.labels.append(label)
        self.roles.append(role)
        return len(self.labels) - 1

    def link(self, a: int, b: int) -> None:
        self.edges.append((a, b))

    def graph(self) -> ItemGraph:
        return ItemGraph.from_edge_list(len(self.labels), self.edges, tuple(self.labels))


def _set_path(builder: _ItemBuilder, j: int, label_stem: str, role_name: str) -> list[int]:
    """Lay out the 3-item path for set j and return its item indices."""
    idx = [
        builder.add("%s%d.%d" % (label_stem, j + 1, pos + 1), (role_name, j, pos))
        for pos in range(3)
    ]
    builder.link(idx[0], idx[1])
    builder.link(idx[1], idx[2])
    return idx


def gen_forest_gadget(x3c: X3CInstance) -> GadgetInstance:
    """One 3-item path per set; elements approve their occurrences, dummies all."""
    r = x3c.num_triples_needed
    s = x3c.num_sets
    builder = _ItemBuilder()
    set_items = [_set_path(builder, j, "s", "set_item") for j in range(s)]
    graph = builder.graph()

    agent_roles: list[tuple] = []
    valuations = []
    for x in range(x3c.num_elements):
        agent_roles.append(("element", x))
        approved = frozenset(set_items[j][pos] for j, pos in x3c.occurrences(x))
        valuations.append(BinaryValuation(graph.num_items, approved))
    for k in range(s - r):
        agent_roles.append(("dummy", k))
        valuations.append(BinaryValuation(graph.num_items, frozenset(range(graph.num_items))))

    instance = Instance(graph, tuple(valuations), name="cover-forest(r=%d,s=%d)" % (r, s))
    return GadgetInstance("forest", instance, tuple(agent_roles), tuple(builder.roles), x3c=x3c)


def gen_tree_gadget(x3c: X3CInstance) -> GadgetInstance:
    """Two mirrored forests joined by a center item adjacent to every middle."""
    r = x3c.num_triples_needed
    s = x3c.num_sets
    builder = _ItemBuilder()
    originals = [_set_path(builder, j, "s", "set_item") for j in range(s)]
    copies = [_set_path(builder, j, "sc", "set_item_copy") for j in range(s)]
    center = builder.add("c", ("center",))
    for j in range(s):
        builder.link(originals[j][1], center)
        builder.link(copies[j][1], center)
    graph = builder.graph()

    agent_roles: list[tuple] = []
    valuations = []
    all_original = frozenset(v for triple in originals for v in triple)
    all_copies = frozenset(v for triple in copies for v in triple)
    for x in range(x3c.num_elements):
        agent_roles.append(("element", x))
        approved = frozenset(originals[j][pos] for j, pos in x3c.occurrences(x))
        valuations.append(BinaryValuation(graph.num_items, approved))
    for k in range(s - r):
        agent_roles.append(("dummy", k))
        valuations.append(BinaryValuation(graph.num_items, all_original))
    for x in range(x3c.num_elements):
        agent_roles.append(("element_copy", x))
        approved = frozenset(copies[j][pos] for j, pos in x3c.occurrences(x))
        valuations.append(BinaryValuation(graph.num_items, approved))
    for k in range(s - r):
        agent_roles.append(("dummy_copy", k))
        valuations.append(BinaryValuation(graph.num_items, all_copies))

    instance = Instance(graph, tuple(valuations), name="cover-tree(r=%d,s=%d)" % (r, s))
    return GadgetInstance("tree", instance, tuple(agent_roles), tuple(builder.roles), x3c=x3c)


def gen_maxdeg3_gadget(x3c: X3CInstance) -> GadgetInstance:
    """Spine plus per-set combs; one full agent family per comb tooth.

    Set j becomes a comb: spine item b_j, a ladder of s+1 items hanging off
    it, and a pendant 3-item arm for each family attached at its ladder rung.
    Family f has its own copies of all element and dummy agents, approving
    only family-f arm items.  No item has more than 3 neighbors.
    """
    r = x3c.num_triples_needed
    s = x3c.num_sets
    num_families = s + 1
    builder = _ItemBuilder()
    spine = [builder.add("b%d" % (j + 1), ("spine", j)) for j in range(s)]
    for j in range(s - 1):
        builder.link(spine[j], spine[j + 1])
    arm_items: dict[tuple[int, int], list[int]] = {}
    for j in range(s):
        prev = spine[j]
        rung = []
        for f in range(num_families):
            c = builder.add("c%d.%d" % (j + 1, f + 1), ("ladder", j, f))
            builder.link(prev, c)
            prev = c
            rung.append(c)
        for f in range(num_families):
            tip = rung[f]
            arm = []
            for pos in range(3):
                a = builder.add("a%d.f%d.%d" % (j + 1, f + 1, pos + 1), ("arm", j, f, pos))
                builder.link(tip, a)
                tip = a
                arm.append(a)
            arm_items[(j, f)] = arm
    graph = builder.graph()

    agent_roles: list[tuple] = []
    valuations = []
    for f in range(num_families):
        for x in range(x3c.num_elements):
            agent_roles.append(("family_element", f, x))
            approved = frozenset(arm_items[(j, f)][pos] for j, pos in x3c.occurrences(x))
            valuations.append(BinaryValuation(graph.num_items, approved))
        family_arms = frozenset(v for j in range(s) for v in arm_items[(j, f)])
        for k in range(s - r):
            agent_roles.append(("family_dummy", f, k))
            valuations.append(BinaryValuation(graph.num_items, family_arms))

    instance = Instance(graph, tuple(valuations), name="cover-maxdeg3(r=%d,s=%d)" % (r, s))
    return GadgetInstance("maxdeg3", instance, tuple(agent_roles), tuple(builder.roles), x3c=x3c)


def gen_2add_path_gadget(x3c: X3CInstance) -> GadgetInstance:
    """All set paths concatenated; singleton-plus-pair weights cap utility at 1.

    Element agents value each occurrence at 1 and penalize holding two
    consecutive occurrences; dummy agents value the endpoints of each set
    path as a pair and penalize bridging into the next set path.  Every
    agent's utility over a connected bundle lands in {0, 1}.
    """
    r = x3c.num_triples_needed
    s = x3c.num_sets
    builder = _ItemBuilder()
    set_items = []
    for j in range(s):
        idx = [
            builder.add("s%d.%d" % (j + 1, pos + 1), ("set_item", j, pos))
            for pos in range(3)
        ]
        set_items.append(idx)
    flat = [v for triple in set_items for v in triple]
    for a, b in zip(flat, flat[1:]):
        builder.link(a, b)
    graph = builder.graph()

    agent_roles: list[tuple] = []
    valuations = []
    one = Fraction(1)
    for x in range(x3c.num_elements):
        agent_roles.append(("element", x))
        occ = sorted(set_items[j][pos] for j, pos in x3c.occurrences(x))
        weights: list[tuple[tuple[int, ...], Fraction]] = [((v,), one) for v in occ]
        for a, b in zip(occ, occ[1:]):
            weights.append(((a, b), -one))
        valuations.append(TwoAdditiveValuation(graph.num_items, tuple(weights)))
    for k in range(s - r):
        agent_roles.append(("dummy", k))
        weights = []
        for j in range(s):
            weights.append(((set_items[j][0], set_items[j][2]), one))
        for j in range(s - 1):
            weights.append(((set_items[j][0], set_items[j + 1][2]), -one))
        valuations.append(TwoAdditiveValuation(graph.num_items, tuple(weights)))

    instance = Instance(graph, tuple(valuations), name="cover-2add-path(r=%d,s=%d)" % (r, s))
    return GadgetInstance("2add-path", instance, tuple(agent_roles), tuple(builder.roles), x3c=x3c)


def gen_po_ef1_gadget(x3c: X3CInstance) -> GadgetInstance:
    """Path where a PO+EF1 allocation exists iff an exact cover does.

    The path concatenates, in order: the s set paths, one 11-item block per
    element, and one 10-item block per dummy slot, each piece followed by a
    2-item separator owned by a filler agent.  The blocks are the two known
    PO+EF1 impossibility patterns, wired so the block owner can be satisfied
    exactly when it is free to fall back on its block.
    """
    r = x3c.num_triples_needed
    s = x3c.num_sets
    builder = _ItemBuilder()
    seps: list[list[int]] = []

    def separator() -> None:
        h = len(seps)
        idx = [
            builder.add("z%d.%d" % (h + 1, pos + 1), ("separator", h, pos))
            for pos in range(2)
        ]
        seps.append(idx)

    set_items = []
    for j in range(s):
        set_items.append(
            [
                builder.add("s%d.%d" % (j + 1, pos + 1), ("set_item", j, pos))
                for pos in range(3)
            ]
        )
        separator()
    element_blocks = []
    for x in range(x3c.num_elements):
        element_blocks.append(
            [
                builder.add("gx%d.%d" % (x + 1, pos + 1), ("element_block", x, pos))
                for pos in range(11)
            ]
        )
        separator()
    dummy_blocks = []
    for k in range(s - r):
        dummy_blocks.append(
            [
                builder.add("gd%d.%d" % (k + 1, pos + 1), ("dummy_block", k, pos))
                for pos in range(10)
            ]
        )
        separator()

    # Items were added in path order, so link them consecutively.
    for a in range(len(builder.labels) - 1):
        builder.link(a, a + 1)
    graph = builder.graph()

    agent_roles: list[tuple] = []
    valuations = []
    n_items = graph.num_items
    for x in range(x3c.num_elements):
        agent_roles.append(("element", x))
        approved = set(set_items[j][pos] for j, pos in x3c.occurrences(x))
        approved.update(element_blocks[x][pos] for pos in (3, 4))
        valuations.append(BinaryValuation(n_items, frozenset(approved)))
    for k in range(s - r):
        agent_roles.append(("dummy", k))
        approved = set(v for triple in set_items for v in triple)
        approved.update(dummy_blocks[k][pos] for pos in (0, 1, 2, 3, 6, 7, 8, 9))
        valuations.append(BinaryValuation(n_items, frozenset(approved)))
    for x in range(x3c.num_elements):
        for t in (1, 2):
            agent_roles.append(("element_pad", x, t))
            valuations.append(BinaryValuation(n_items, frozenset(element_blocks[x])))
    for k in range(s - r):
        for t in (1, 2):
            agent_roles.append(("dummy_pad", k, t))
            approved = frozenset(dummy_blocks[k][pos] for pos in (0, 1, 2, 3, 6, 7, 8, 9))
            valuations.append(BinaryValuation(n_items, approved))
        agent_roles.append(("blocker", k))
        valuations.append(BinaryValuation(n_items, frozenset(dummy_blocks[k][pos] for pos in (4, 5))))
    for h, sep in enumerate(seps):
        agent_roles.append(("filler", h))
        valuations.append(BinaryValuation(n_items, frozenset(sep)))

    instance = Instance(graph, tuple(valuations), name="cover-po-ef1(r=%d,s=%d)" % (r, s))
    return GadgetInstance("po-ef1", instance, tuple(agent_roles), tuple(builder.roles), x3c=x3c)


def gen_po_mms_gadget(x3c: X3CInstance) -> GadgetInstance:
    """Set paths separated by long blocks, each block owned by one filler agent.

    Filler agent z_k approves only the items of block k.  Its maximin share
    is 1, so any PO+MMS allocation hands it a nonempty piece of its block,
    which disconnects the set paths from each other and pins the cover
    structure in place.
    """
    r = x3c.num_triples_needed
    s = x3c.num_sets
    num_agents = x3c.num_elements + (s - r) + s
    block_len = num_agents
    builder = _ItemBuilder()
    set_items = []
    block_items = []
    order: list[int] = []
    for j in range(s):
        idx = [
            builder.add("s%d.%d" % (j + 1, pos + 1), ("set_item", j, pos))
            for pos in range(3)
        ]
        set_items.append(idx)
        order.extend(idx)
        blk = [
            builder.add("blk%d.%d" % (j + 1, pos + 1), ("block", j, pos))
            for pos in range(block_len)
        ]
        block_items.append(blk)
        order.extend(blk)
    for a, b in zip(order, order[1:]):
        builder.link(a, b)
    graph = builder.graph()

    agent_roles: list[tuple] = []
    valuations = []
    for x in range(x3c.num_elements):
        agent_roles.append(("element", x))
        approved = frozenset(set_items[j][pos] for j, pos in x3c.occurrences(x))
        valuations.append(BinaryValuation(graph.num_items, approved))
    all_set_items = frozenset(v for triple in set_items for v in triple)
    for k in range(s - r):
        agent_roles.append(("dummy", k))
        valuations.append(BinaryValuation(graph.num_items, all_set_items))
    for k in range(s):
        agent_roles.append(("filler", k))
        valuations.append(BinaryValuation(graph.num_items, frozenset(block_items[k])))

    instance = Instance(graph, tuple(valuations), name="cover-po-mms(r=%d,s=%d)" % (r, s))
    return GadgetInstance("po-mms", instance, tuple(agent_roles), tuple(builder.roles), x3c=x3c)


def gen_vc_star_gadget(vc: VCInstance) -> GadgetInstance:
    """Star encoding vertex cover: leaves are vertices, weights count edges.

    The main agent values leaf w at its degree and each graph edge at -1,
    so its utility equals the number of edges its leaves cover.  Each of
    the |W| - k dummies values every item at 1 and each (center, leaf) pair
    at -1, capping it at 1; dummies soak up the leaves outside the cover.
    """
    W = vc.num_vertices
    builder = _ItemBuilder()
    center = builder.add("c", ("vc_center",))
    leaves = [builder.add("w%d" % (i + 1), ("vc_vertex", i)) for i in range(W)]
    for leaf in leaves:
        builder.link(center, leaf)
    graph = builder.graph()

    degree = [0] * W
    for a, b in vc.edges:
        degree[a] += 1
        degree[b] += 1

    one = Fraction(1)
    main_weights: list[tuple[tuple[int, ...], Fraction]] = []
    for i in range(W):
        if degree[i]:
            main_weights.append(((leaves[i],), Fraction(degree[i])))
    for a, b in vc.edges:
        main_weights.append(((leaves[a], leaves[b]), -one))

    agent_roles: list[tuple] = [("vc_main",)]
    valuations = [TwoAdditiveValuation(graph.num_items, tuple(main_weights))]
    for j in range(W - vc.k):
        weights = [((v,), one) for v in range(graph.num_items)]
        for leaf in leaves:
            weights.append(((center, leaf), -one))
        agent_roles.append(("vc_dummy", j))
        valuations.append(TwoAdditiveValuation(graph.num_items, tuple(weights)))

    instance = Instance(
        graph, tuple(valuations), name="vc-star(n=%d,m=%d,k=%d)" % (W, len(vc.edges), vc.k)
    )
    return GadgetInstance("vc-star", instance, tuple(agent_roles), tuple(builder.roles), vc=vc)


GADGET_BUILDERS = {
    "forest": gen_forest_gadget,
    "tree": gen_tree_gadget,
    "maxdeg3": gen_maxdeg3_gadget,
    "2add-path": gen_2add_path_gadget,
    "po-ef1": gen_po_ef1_gadget,
    "po-mms": gen_po_mms_gadget,
}


def _agent_utilities(gadget: GadgetInstance, allocation: Allocation) -> list[Fraction]:
    inst = gadget.instance
    return [inst.value(i, allocation.bundles[i]) for i in range(inst.num_agents)]


def _utilities_match(
    gadget: GadgetInstance,
    allocation: Allocation,
    element_role: str,
    dummy_role: str,
    element_target: int,
    dummy_target: int,
) -> bool:
    util = _agent_utilities(gadget, allocation)
    for i in gadget.agents_with_role(element_role):
        if util[i] != element_target:
            return False
    for i in gadget.agents_with_role(dummy_role):
        if util[i] != dummy_target:
            return False
    return True


def _maxdeg3_witness_family(gadget: GadgetInstance, allocation: Allocation) -> Optional[int]:
    """First family none of whose members holds a spine item and whose
    members hit the target utilities, or None."""
    x3c = gadget.x3c
    assert x3c is not None
    num_families = x3c.num_sets + 1
    spine = set(gadget.items_with_role("spine"))
    util = _agent_utilities(gadget, allocation)
    members: dict[int, list[tuple[tuple, int]]] = {f: [] for f in range(num_families)}
    for i, role in enumerate(gadget.agent_roles):
        members[role[1]].append((role, i))
    for f in range(num_families):
        ok = True
        for role, i in members[f]:
            if allocation.bundles[i] & spine:
                ok = False
                break
            target = 1 if role[0] == "family_element" else 3
            if util[i] != target:
                ok = False
                break
        if ok:
            return f
    return None


def check_perfect_condition(gadget: GadgetInstance, allocation: Allocation) -> bool:
    """Does the allocation satisfy the gadget's success condition?

    The condition is a pure statement about agent utilities (plus, for the
    degree-3 gadget, which family avoids the spine), so it can be evaluated
    on any allocation of the gadget instance.
    """
    kind = gadget.kind
    if kind in ("forest", "po-mms"):
        return _utilities_match(gadget, allocation, "element", "dummy", 1, 3)
    if kind == "2add-path":
        return _utilities_match(gadget, allocation, "element", "dummy", 1, 1)
    if kind == "po-ef1":
        util = _agent_utilities(gadget, allocation)
        return all(util[i] >= 1 for i in gadget.agents_with_role("element")) and all(
            util[i] >= 3 for i in gadget.agents_with_role("dummy")
        )
    if kind == "tree":
        return _utilities_match(gadget, allocation, "element", "dummy", 1, 3) or _utilities_match(
            gadget, allocation, "element_copy", "dummy_copy", 1, 3
        )
    if kind == "maxdeg3":
        return _maxdeg3_witness_family(gadget, allocation) is not None
    if kind == "vc-star":
        assert gadget.vc is not None
        util = _agent_utilities(gadget, allocation)
        main = gadget.agent_by_role(("vc_main",))
        if util[main] != len(gadget.vc.edges):
            return False
        return all(util[i] == 1 for i in gadget.agents_with_role("vc_dummy"))
    raise PreconditionError("unknown gadget kind %r" % (kind,))


def normalize_tree_allocation(
    gadget: GadgetInstance, allocation: Allocation
) -> tuple[Allocation, str]:
    """Pick the half of the doubled tree to read the cover from and tidy it.

    The side not owning the center item is the decision side (its agents'
    bundles cannot span multiple set paths).  Bundles of decision-side
    agents that consist purely of other-side items are worthless to their
    owners; they are merged into an adjacent bundle so that each decision
    agent's bundle lives on its own side.  Utilities must not change.
    """
    if gadget.kind != "tree":
        raise PreconditionError("normalization applies to the doubled-tree gadget")
    inst = gadget.instance
    center = gadget.item_by_role(("center",))
    bundles = [set(b) for b in allocation.bundles]
    owner_of_center = next(i for i, b in enumerate(bundles) if center in b)
    original_agents = set(gadget.agents_with_role("element") + gadget.agents_with_role("dummy"))
    side = "copy" if owner_of_center in original_agents else "original"
    if side == "copy":
        side_agents = gadget.agents_with_role("element_copy") + gadget.agents_with_role("dummy_copy")
        own_items = set(gadget.items_with_role("set_item_copy"))
    else:
        side_agents = sorted(original_agents)
        own_items = set(gadget.items_with_role("set_item"))
    wrong_items = (
        set(gadget.items_with_role("set_item"))
        | set(gadget.items_with_role("set_item_copy"))
    ) - own_items

    adjacency = inst.graph.adjacency
    before = _agent_utilities(gadget, allocation)
    while True:
        moved = False
        for agent in side_agents:
            bundle = bundles[agent]
            if bundle and bundle <= wrong_items:
                outside = sorted({nb for v in bundle for nb in adjacency[v]} - bundle)
                target = center if center in outside else outside[0]
                receiver = next(i for i, b in enumerate(bundles) if target in b)
                bundles[receiver] |= bundle
                bundles[agent] = set()
                moved = True
                break
        if not moved:
            break
    normalized = Allocation(tuple(frozenset(b) for b in bundles))
    normalized.validate(inst.graph, inst.num_agents)
    after = _agent_utilities(gadget, normalized)
    if before != after:
        raise InternalCheckError("tree normalization changed a utility, which should be impossible")
    return normalized, side


def _tree_side_roles(side: str) -> tuple[str, str, str]:
    if side == "copy":
        return "element_copy", "dummy_copy", "set_item_copy"
    return "element", "dummy", "set_item"


def _cover_from_untouched_sets(
    gadget: GadgetInstance,
    allocation: Allocation,
    dummy_role: str,
    item_role: str,
) -> list[int]:
    """Sets none of whose items lie inside a dummy's bundle of all three."""
    x3c = gadget.x3c
    assert x3c is not None
    triples: dict[int, set[int]] = {}
    for v, role in enumerate(gadget.item_roles):
        if role[0] == item_role:
            triples.setdefault(role[1], set()).add(v)
    dummies = gadget.agents_with_role(dummy_role)
    chosen = []
    for j in range(x3c.num_sets):
        triple = triples[j]
        if not any(triple <= allocation.bundles[i] for i in dummies):
            chosen.append(j)
    return chosen


def _verify_exact_cover(x3c: X3CInstance, chosen: Sequence[int]) -> tuple[int, ...]:
    chosen = tuple(sorted(chosen))
    if len(chosen) != x3c.num_triples_needed:
        raise InternalCheckError(
            "extracted %d sets, expected %d" % (len(chosen), x3c.num_triples_needed)
        )
    covered: set[int] = set()
    for j in chosen:
        covered.update(x3c.sets[j])
    if len(covered) != x3c.num_elements:
        raise InternalCheckError("extracted sets do not form an exact cover: %r" % (chosen,))
    return chosen


def extract_exact_cover(gadget: GadgetInstance, allocation: Allocation) -> tuple[int, ...]:
    """Read an exact cover out of a condition-satisfying allocation.

    Raises InternalCheckError if the extracted family is not a verified
    exact cover, which would mean the success condition was asserted on an
    allocation that does not actually encode one.
    """
    x3c = gadget.x3c
    if x3c is None:
        raise PreconditionError("gadget does not carry an exact cover instance")
    kind = gadget.kind
    if kind in ("forest", "po-mms"):
        chosen = _cover_from_untouched_sets(gadget, allocation, "dummy", "set_item")
    elif kind == "tree":
        normalized, side = normalize_tree_allocation(gadget, allocation)
        element_role, dummy_role, item_role = _tree_side_roles(side)
        if not _utilities_match(gadget, normalized, element_role, dummy_role, 1, 3):
            raise InternalCheckError("%s side does not satisfy the success condition" % side)
        chosen = _cover_from_untouched_sets(gadget, normalized, dummy_role, item_role)
    elif kind == "maxdeg3":
        f = _maxdeg3_witness_family(gadget, allocation)
        if f is None:
            raise InternalCheckError("no spine-free family satisfies the success condition")
        triples: dict[int, set[int]] = {}
        for v, role in enumerate(gadget.item_roles):
            if role[0] == "arm" and role[2] == f:
                triples.setdefault(role[1], set()).add(v)
        dummies = [
            i
            for i, role in enumerate(gadget.agent_roles)
            if role[0] == "family_dummy" and role[1] == f
        ]
        chosen = [
            j
            for j in range(x3c.num_sets)
            if not any(triples[j] <= allocation.bundles[i] for i in dummies)
        ]
    elif kind == "2add-path":
        taken: set[int] = set()
        for i in gadget.agents_with_role("element"):
            taken |= set(allocation.bundles[i])
        triples = {}
        for v, role in enumerate(gadget.item_roles):
            if role[0] == "set_item":
                triples.setdefault(role[1], set()).add(v)
        chosen = [j for j in range(x3c.num_sets) if triples[j] & taken]
    else:
        raise PreconditionError("no exact cover extraction for gadget kind %r" % (kind,))
    return _verify_exact_cover(x3c, chosen)


def extract_vertex_cover(gadget: GadgetInstance, allocation: Allocation) -> tuple[int, ...]:
    """Read a vertex cover out of a condition-satisfying star allocation."""
    vc = gadget.vc
    if vc is None or gadget.kind != "vc-star":
        raise PreconditionError("gadget does not carry a vertex cover instance")
    main = gadget.agent_by_role(("vc_main",))
    leaf_of_vertex = {role[1]: v for v, role in enumerate(gadget.item_roles) if role[0] == "vc_vertex"}
    bundle = allocation.bundles[main]
    chosen = tuple(sorted(i for i, leaf in leaf_of_vertex.items() if leaf in bundle))
    if len(chosen) > vc.k:
        raise InternalCheckError("extracted %d vertices, expected at most %d" % (len(chosen), vc.k))
    uncovered = [e for e in vc.edges if e[0] not in chosen and e[1] not in chosen]
    if uncovered:
        raise InternalCheckError("extracted vertices miss edges %r" % (uncovered,))
    return chosen


def solve_x3c_bruteforce(x3c: X3CInstance) -> Optional[tuple[int, ...]]:
    """First exact cover in lexicographic order of set-index combinations."""
    r = x3c.num_triples_needed
    for combo in itertools.combinations(range(x3c.num_sets), r):
        covered: set[int] = set()
        ok = True
        for j in combo:
            triple = set(x3c.sets[j])
            if covered & triple:
                ok = False
                break
            covered |= triple
        if ok and len(covered) == x3c.num_elements:
            return combo
    return None


def solve_vc_bruteforce(vc: VCInstance) -> Optional[tuple[int, ...]]:
    """First vertex cover of size k in lexicographic order."""
    for combo in itertools.combinations(range(vc.num_vertices), vc.k):
        chosen = set(combo)
        if all(a in chosen or b in chosen for a, b in vc.edges):
            return combo
    return None


def solve_x3c_via_po(
    x3c: X3CInstance, kind: str = "forest", budget: Budget = DEFAULT_BUDGET
) -> Optional[tuple[int, ...]]:
    """Decide exact 3-cover through the corresponding allocation question.

    Builds the gadget, obtains a witness allocation (welfare-maximal, hence
    Pareto-optimal, for most kinds; a PO+MMS witness for "po-mms" since the
    filler agents' claim on their blocks is what pins the structure), checks
    the success condition, and extracts a verified cover.  Returns None when
    the condition fails, i.e. no exact cover exists.
    """
    if kind == "po-ef1":
        raise PreconditionError(
            "the po-ef1 gadget has no decision driver; its correspondence is "
            "checked through PO+EF1 existence scans"
        )
    if kind not in GADGET_BUILDERS:
        raise PreconditionError("unknown gadget kind %r" % (kind,))
    gadget = GADGET_BUILDERS[kind](x3c)
    if kind == "po-mms":
        allocation = exists_po_and_mms(gadget.instance, budget)
        if allocation is None:
            raise InternalCheckError("a PO+MMS allocation always exists on a path")
    else:
        allocation = max_welfare_allocation(gadget.instance, budget)
    if kind == "tree":
        normalized, side = normalize_tree_allocation(gadget, allocation)
        element_role, dummy_role, item_role = _tree_side_roles(side)
        if not _utilities_match(gadget, normalized, element_role, dummy_role, 1, 3):
            return None
        chosen = _cover_from_untouched_sets(gadget, normalized, dummy_role, item_role)
        return _verify_exact_cover(x3c, chosen)
    if not check_perfect_condition(gadget, allocation):
        return None
    return extract_exact_cover(gadget, allocation)


def solve_vc_via_po(vc: VCInstance, budget: Budget = DEFAULT_BUDGET) -> Optional[tuple[int, ...]]:
    """Decide vertex cover through welfare maximization on the star gadget."""
    gadget = gen_vc_star_gadget(vc)
    allocation = max_welfare_allocation(gadget.instance, budget)
    if not check_perfect_condition(gadget, allocation):
        return None
    return extract_vertex_cover(gadget, allocation)


def random_x3c(rng: random.Random, num_elements: int, num_sets: int) -> X3CInstance:
    """Random family of ascending triples over the given ground set."""
    sets = tuple(
        tuple(sorted(rng.sample(range(num_elements), 3))) for _ in range(num_sets)
    )
    return X3CInstance(num_elements=num_elements, sets=sets)
