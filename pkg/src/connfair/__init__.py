"""Fair division of indivisible items into connected bundles on an item graph.

The package provides exact (rational arithmetic) tooling for connected fair
division at desk scale: instance modeling, exhaustive enumeration, a
brute-force fairness oracle (Pareto optimality, EF1, maximin shares),
polynomial-time solvers for paths and stars, and reductions that tie the
hard allocation questions to exact cover and vertex cover.
"""

from .algorithms import (
    IntervalApprovalProfile,
    check_non_nested,
    interval_profile,
    mms_value_path,
    moving_knife_po_mms,
    po_path_additive,
    po_star_additive,
)
from .enumeration import (
    Budget,
    DEFAULT_BUDGET,
    GENERAL_AGENT_LIMIT,
    GENERAL_ITEM_LIMIT,
    PATH_AGENT_LIMIT,
    PATH_ITEM_LIMIT,
    SUBSET_ITEM_LIMIT,
    build_allocation,
    check_enumeration_budget,
    enumerate_allocations,
    enumerate_connected_partitions,
    enumerate_connected_subsets,
    iter_partition_assignments,
)
from .errors import (
    BudgetExceededError,
    ConnFairError,
    InternalCheckError,
    PreconditionError,
    ValidationError,
)
from .matching import max_weight_matching
from .model import (
    AdditiveValuation,
    Allocation,
    BinaryValuation,
    Instance,
    ItemGraph,
    MmsProfile,
    TableValuation,
    TwoAdditiveValuation,
    Valuation,
    allocation_from_dict,
    concatenate_paths,
    dump_instance,
    is_additive_like,
    load_allocation,
    load_instance,
    parse_rational,
    rational_to_json,
    validate_instance,
)
from .oracle import (
    ExistenceScan,
    FairnessReport,
    alpha_mms_level,
    complete_to_pareto_optimum,
    dominates,
    ef1_violation,
    exists_po_and_ef1,
    exists_po_and_mms,
    fairness_report,
    find_pareto_improvement,
    is_ef1,
    is_mms,
    is_pareto_optimal,
    max_welfare_allocation,
    mms_profile_bruteforce,
    scan_for_allocation,
    utility_vector,
    welfare,
)
from .reductions import (
    GADGET_BUILDERS,
    GADGET_KINDS,
    GadgetInstance,
    VCInstance,
    X3CInstance,
    check_perfect_condition,
    extract_exact_cover,
    extract_vertex_cover,
    gen_2add_path_gadget,
    gen_forest_gadget,
    gen_maxdeg3_gadget,
    gen_po_ef1_gadget,
    gen_po_mms_gadget,
    gen_tree_gadget,
    gen_vc_star_gadget,
    normalize_tree_allocation,
    random_x3c,
    solve_vc_bruteforce,
    solve_vc_via_po,
    solve_x3c_bruteforce,
    solve_x3c_via_po,
    vc_from_json_dict,
    x3c_from_json_dict,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
