"""Unit tests for the hardness gadget constructions and their drivers."""

import random
from fractions import Fraction

import pytest

from connfair import (
    Allocation,
    Budget,
    BudgetExceededError,
    GADGET_BUILDERS,
    GADGET_KINDS,
    InternalCheckError,
    PreconditionError,
    VCInstance,
    ValidationError,
    X3CInstance,
    check_perfect_condition,
    enumerate_connected_subsets,
    extract_exact_cover,
    gen_2add_path_gadget,
    gen_forest_gadget,
    gen_maxdeg3_gadget,
    gen_po_ef1_gadget,
    gen_po_mms_gadget,
    gen_tree_gadget,
    gen_vc_star_gadget,
    mms_value_path,
    normalize_tree_allocation,
    random_x3c,
    scan_for_allocation,
    solve_vc_bruteforce,
    solve_vc_via_po,
    solve_x3c_bruteforce,
    solve_x3c_via_po,
    validate_instance,
    vc_from_json_dict,
    x3c_from_json_dict,
)

X3C_ONE_SET = X3CInstance(3, ((0, 1, 2),))
X3C_DUP = X3CInstance(3, ((0, 1, 2), (0, 1, 2)))
X3C_SOLVABLE_6 = X3CInstance(6, ((0, 1, 2), (3, 4, 5), (1, 2, 3)))
X3C_UNSOLVABLE_6 = X3CInstance(6, ((0, 1, 2), (2, 3, 4)))
WIDE_BUDGET = Budget(max_items=9, max_agents=7)


def cover_is_exact(x3c, cover):
    seen = set()
    for j in cover:
        triple = set(x3c.sets[j])
        if seen & triple:
            return False
        seen |= triple
    return seen == set(range(x3c.num_elements))


class TestProblemInstances:
    def test_x3c_validation(self):
        with pytest.raises(ValidationError):
            X3CInstance(4, ((0, 1, 2),))
        with pytest.raises(ValidationError):
            X3CInstance(6, ((0, 1, 2),))
        with pytest.raises(ValidationError):
            X3CInstance(3, ((0, 1, 7),))
        with pytest.raises(ValidationError):
            X3CInstance(3, ((0, 1, 1),))

    def test_x3c_sets_are_canonicalized(self):
        x = X3CInstance(3, ((2, 0, 1),))
        assert x.sets == ((0, 1, 2),)

    def test_x3c_duplicate_sets_allowed(self):
        assert X3C_DUP.sets == ((0, 1, 2), (0, 1, 2))

    def test_x3c_occurrences(self):
        occ = X3C_SOLVABLE_6.occurrences(2)
        assert list(occ) == [(0, 2), (2, 1)]

    def test_x3c_json_round_trip(self):
        data = X3C_SOLVABLE_6.to_json_dict()
        assert data == {"elements": 6, "sets": [[0, 1, 2], [3, 4, 5], [1, 2, 3]]}
        assert x3c_from_json_dict(data) == X3C_SOLVABLE_6

    def test_vc_validation(self):
        with pytest.raises(ValidationError):
            VCInstance(3, ((1, 1),), 1)
        with pytest.raises(ValidationError):
            VCInstance(3, ((0, 5),), 1)
        with pytest.raises(ValidationError):
            VCInstance(3, ((0, 1),), 0)
        with pytest.raises(ValidationError):
            VCInstance(3, ((0, 1),), 4)

    def test_vc_edges_canonicalized(self):
        vc = VCInstance(3, ((2, 0), (1, 0)), 1)
        assert vc.edges == ((0, 1), (0, 2))

    def test_vc_json_round_trip(self):
        vc = VCInstance(3, ((0, 1), (1, 2), (0, 2)), 2)
        assert vc_from_json_dict(vc.to_json_dict()) == vc

    def test_random_x3c_is_deterministic(self):
        a = random_x3c(random.Random(5), 6, 4)
        b = random_x3c(random.Random(5), 6, 4)
        assert a == b
        assert a.num_elements == 6
        assert len(a.sets) == 4


class TestGadgetShapes:
    def test_all_kinds_have_builders(self):
        assert set(GADGET_KINDS) == set(GADGET_BUILDERS)
        assert set(GADGET_KINDS) == {
            "forest", "tree", "maxdeg3", "2add-path", "po-ef1", "po-mms",
        }

    def test_forest_shape(self):
        g = gen_forest_gadget(X3C_SOLVABLE_6)
        s, r = 3, 2
        assert g.instance.num_items == 3 * s
        assert g.instance.num_agents == 3 * r + (s - r)
        assert g.instance.graph.topology == "forest"
        assert len(g.agents_with_role("element")) == 3 * r
        assert len(g.agents_with_role("dummy")) == s - r
        # elements approve exactly their occurrences; dummies approve all
        for agent in g.agents_with_role("element"):
            _, x = g.agent_roles[agent]
            want = {
                g.item_by_role(("set_item", j, pos))
                for j, pos in X3C_SOLVABLE_6.occurrences(x)
            }
            assert g.instance.valuations[agent].approved == want
        for agent in g.agents_with_role("dummy"):
            assert g.instance.valuations[agent].approved == frozenset(range(9))

    def test_tree_shape(self):
        for x3c, s, r in ((X3C_ONE_SET, 1, 1), (X3C_DUP, 2, 1)):
            g = gen_tree_gadget(x3c)
            assert g.instance.num_items == 6 * s + 1
            assert g.instance.num_agents == 2 * (3 * r + (s - r))
            assert g.instance.graph.topology == "tree"
            assert g.instance.graph.diameter() == 4

    def test_tree_center_touches_every_middle(self):
        g = gen_tree_gadget(X3C_DUP)
        center = g.item_by_role(("center",))
        middles = [
            g.item_by_role((role, j, 1))
            for role in ("set_item", "set_item_copy")
            for j in range(2)
        ]
        for mid in middles:
            assert center in g.instance.graph.adjacency[mid]

    def test_maxdeg3_shape(self):
        for x3c, s, r in ((X3C_ONE_SET, 1, 1), (X3C_DUP, 2, 1)):
            g = gen_maxdeg3_gadget(x3c)
            assert g.instance.num_items == s + s * (s + 1) + 3 * s * (s + 1)
            assert g.instance.num_agents == (s + 1) * (2 * r + s)
            degrees = [
                g.instance.graph.degree(i) for i in range(g.instance.num_items)
            ]
            assert max(degrees) <= 3

    def test_2add_path_shape_and_unit_utilities(self):
        g = gen_2add_path_gadget(X3C_DUP)
        assert g.instance.num_items == 6
        assert g.instance.graph.topology == "path"
        for bundle in enumerate_connected_subsets(g.instance.graph):
            for agent in range(g.instance.num_agents):
                assert g.instance.value(agent, bundle) in (
                    Fraction(0), Fraction(1),
                )

    def test_po_ef1_shape(self):
        for x3c, s, r in ((X3C_ONE_SET, 1, 1), (X3C_DUP, 2, 1)):
            g = gen_po_ef1_gadget(x3c)
            assert g.instance.num_items == 17 * s + 27 * r
            assert g.instance.num_agents == 7 * r + 6 * s
            assert g.instance.graph.topology == "path"

    def test_po_mms_shape(self):
        g = gen_po_mms_gadget(X3C_ONE_SET)
        s, r = 1, 1
        assert g.instance.graph.topology == "path"
        assert g.instance.num_agents == 2 * r + 2 * s
        assert g.instance.num_items == 3 * s + s * (2 * r + 2 * s)

    def test_po_mms_fillers_have_share_one(self):
        g = gen_po_mms_gadget(X3C_ONE_SET)
        for agent in g.agents_with_role("filler"):
            share = mms_value_path(
                g.instance.graph, g.instance.valuations[agent],
                g.instance.num_agents,
            )
            assert share == Fraction(1)

    def test_vc_star_shape(self):
        vc = VCInstance(3, ((0, 1), (1, 2), (0, 2)), 2)
        g = gen_vc_star_gadget(vc)
        assert g.instance.num_items == 4
        assert g.instance.graph.topology == "star"
        assert g.instance.num_agents == 1 + (3 - 2)
        main = g.agent_by_role(("vc_main",))
        full = frozenset(range(4))
        assert g.instance.value(main, full) == Fraction(3)

    def test_gadget_json_round_trip(self):
        g = gen_forest_gadget(X3C_SOLVABLE_6)
        data = g.to_json_dict()
        inst = validate_instance(data)
        assert inst.num_agents == g.instance.num_agents
        assert x3c_from_json_dict(data["roles"]["x3c"]) == X3C_SOLVABLE_6
        vc = VCInstance(3, ((0, 1),), 1)
        gv = gen_vc_star_gadget(vc)
        assert vc_from_json_dict(gv.to_json_dict()["roles"]["vc"]) == vc


class TestPerfectCondition:
    def perfect_forest_allocation(self):
        g = gen_forest_gadget(X3C_SOLVABLE_6)
        bundles = [frozenset()] * g.instance.num_agents
        # cover sets 0 and 1: each element takes its occurrence there
        for x, (j, pos) in zip(range(6), ((0, 0), (0, 1), (0, 2),
                                          (1, 0), (1, 1), (1, 2))):
            agent = g.agent_by_role(("element", x))
            bundles[agent] = frozenset({g.item_by_role(("set_item", j, pos))})
        dummy = g.agent_by_role(("dummy", 0))
        bundles[dummy] = frozenset(
            g.item_by_role(("set_item", 2, pos)) for pos in range(3)
        )
        return g, Allocation(tuple(bundles))

    def test_perfect_forest_allocation_accepted(self):
        g, alloc = self.perfect_forest_allocation()
        alloc.validate(g.instance.graph, g.instance.num_agents)
        assert check_perfect_condition(g, alloc)
        assert extract_exact_cover(g, alloc) == (0, 1)

    def test_imperfect_forest_allocation_rejected(self):
        g = gen_forest_gadget(X3C_SOLVABLE_6)
        # dummy swallows set 0; elements 0..2 are left with useless items
        bundles = [frozenset()] * g.instance.num_agents
        dummy = g.agent_by_role(("dummy", 0))
        bundles[dummy] = frozenset({0, 1, 2})
        for agent, item in zip(range(6), (3, 4, 5, 6, 7, 8)):
            bundles[agent] = frozenset({item})
        alloc = Allocation(tuple(bundles))
        alloc.validate(g.instance.graph, g.instance.num_agents)
        assert not check_perfect_condition(g, alloc)

    def test_extraction_guards_against_bad_covers(self):
        g = gen_forest_gadget(X3C_UNSOLVABLE_6)
        # no dummies here, so every set is "untouched" and the claimed
        # cover cannot be exact; extraction must notice
        bundles = [frozenset()] * g.instance.num_agents
        bundles[0] = frozenset({0, 1, 2})
        bundles[1] = frozenset({3, 4, 5})
        alloc = Allocation(tuple(bundles))
        alloc.validate(g.instance.graph, g.instance.num_agents)
        with pytest.raises(InternalCheckError):
            extract_exact_cover(g, alloc)


class TestTreeNormalization:
    def test_wrong_side_bundle_merged_without_utility_change(self):
        g = gen_tree_gadget(X3C_ONE_SET)
        # original agent 0 owns the center; copy agent for element 0 holds a
        # worthless original-side item that must be folded away
        alloc = Allocation((
            frozenset({1, 6}),   # element 0: middle + center
            frozenset({0}),      # element 1
            frozenset(),         # element 2
            frozenset({2}),      # element_copy 0: wrong side
            frozenset({3, 4, 5}),  # element_copy 1: whole copy path
            frozenset(),         # element_copy 2
        ))
        normalized, side = normalize_tree_allocation(g, alloc)
        assert side == "copy"
        assert normalized.bundles[3] == frozenset()
        assert normalized.bundles[0] == frozenset({1, 2, 6})

    def test_side_is_original_when_copy_agent_owns_center(self):
        g = gen_tree_gadget(X3C_ONE_SET)
        alloc = Allocation((
            frozenset({0}),
            frozenset({1}),
            frozenset({2}),
            frozenset({3, 4, 6}),
            frozenset({5}),
            frozenset(),
        ))
        normalized, side = normalize_tree_allocation(g, alloc)
        assert side == "original"
        assert normalized == alloc

    def test_merge_that_would_change_utility_is_refused(self):
        g = gen_tree_gadget(X3C_ONE_SET)
        # copy agent holds item 0; the receiving bundle belongs to the agent
        # who approves item 0, so the merge would raise a utility
        alloc = Allocation((
            frozenset({1, 6}),   # element 0 (approves item 0) owns the center
            frozenset({2}),
            frozenset(),
            frozenset({0}),      # element_copy 0: wrong side, approver adjacent
            frozenset({3, 4, 5}),
            frozenset(),
        ))
        with pytest.raises(InternalCheckError):
            normalize_tree_allocation(g, alloc)

    def test_only_tree_gadgets_accepted(self):
        g = gen_forest_gadget(X3C_ONE_SET)
        alloc = Allocation((
            frozenset({0}), frozenset({1}), frozenset({2}),
        ))
        with pytest.raises(PreconditionError):
            normalize_tree_allocation(g, alloc)


class TestBruteForceSolvers:
    def test_x3c_lexicographically_first_cover(self):
        assert solve_x3c_bruteforce(X3C_ONE_SET) == (0,)
        assert solve_x3c_bruteforce(X3C_DUP) == (0,)
        assert solve_x3c_bruteforce(X3C_SOLVABLE_6) == (0, 1)

    def test_x3c_unsolvable(self):
        assert solve_x3c_bruteforce(X3C_UNSOLVABLE_6) is None

    def test_vc_known_cases(self):
        triangle2 = VCInstance(3, ((0, 1), (1, 2), (0, 2)), 2)
        assert solve_vc_bruteforce(triangle2) == (0, 1)
        triangle1 = VCInstance(3, ((0, 1), (1, 2), (0, 2)), 1)
        assert solve_vc_bruteforce(triangle1) is None
        path4 = VCInstance(4, ((0, 1), (1, 2), (2, 3)), 2)
        assert solve_vc_bruteforce(path4) == (0, 2)

    def test_x3c_random_agreement_with_definition(self):
        rng = random.Random(73)
        for _ in range(40):
            x3c = random_x3c(rng, 6, rng.randint(2, 5))
            cover = solve_x3c_bruteforce(x3c)
            if cover is not None:
                assert cover_is_exact(x3c, cover)


class TestDrivers:
    def test_forest_driver_matches_brute_force(self):
        cases = (X3C_ONE_SET, X3C_DUP, X3C_SOLVABLE_6, X3C_UNSOLVABLE_6)
        for x3c in cases:
            brute = solve_x3c_bruteforce(x3c)
            got = solve_x3c_via_po(x3c, kind="forest", budget=WIDE_BUDGET)
            assert (got is None) == (brute is None)
            if got is not None:
                assert cover_is_exact(x3c, got)

    def test_tree_driver_single_set(self):
        got = solve_x3c_via_po(
            X3C_ONE_SET, kind="tree", budget=Budget(max_items=7, max_agents=6)
        )
        assert got == (0,)

    def test_maxdeg3_driver_single_set(self):
        got = solve_x3c_via_po(
            X3C_ONE_SET, kind="maxdeg3", budget=Budget(max_items=9, max_agents=6)
        )
        assert got == (0,)

    def test_2add_path_driver_matches_brute_force(self):
        cases = (X3C_ONE_SET, X3C_DUP, X3C_SOLVABLE_6, X3C_UNSOLVABLE_6)
        for x3c in cases:
            brute = solve_x3c_bruteforce(x3c)
            got = solve_x3c_via_po(x3c, kind="2add-path", budget=WIDE_BUDGET)
            assert (got is None) == (brute is None)
            if got is not None:
                assert cover_is_exact(x3c, got)

    def test_po_mms_driver_single_set(self):
        got = solve_x3c_via_po(X3C_ONE_SET, kind="po-mms")
        assert got == (0,)

    def test_po_ef1_has_no_driver(self):
        with pytest.raises(PreconditionError):
            solve_x3c_via_po(X3C_ONE_SET, kind="po-ef1")

    def test_po_ef1_gadget_exceeds_scan_budget(self):
        g = gen_po_ef1_gadget(X3C_ONE_SET)
        with pytest.raises(BudgetExceededError):
            scan_for_allocation(g.instance, require_po=True, require_ef1=True)

    def test_unknown_kind_rejected(self):
        with pytest.raises(PreconditionError):
            solve_x3c_via_po(X3C_ONE_SET, kind="nonsense")

    def test_vc_driver_matches_brute_force(self):
        cases = (
            VCInstance(3, ((0, 1), (1, 2), (0, 2)), 2),
            VCInstance(3, ((0, 1), (1, 2), (0, 2)), 1),
            VCInstance(4, ((0, 1), (1, 2), (2, 3)), 2),
            VCInstance(4, ((0, 1), (1, 2), (2, 3)), 1),
            VCInstance(5, ((0, 1), (0, 2), (0, 3), (0, 4)), 1),
        )
        for vc in cases:
            brute = solve_vc_bruteforce(vc)
            got = solve_vc_via_po(vc, budget=Budget(max_agents=5))
            assert (got is None) == (brute is None)
            if got is not None:
                covered = {
                    e for e in vc.edges if e[0] in got or e[1] in got
                }
                assert covered == set(vc.edges)
                assert len(got) <= vc.k
