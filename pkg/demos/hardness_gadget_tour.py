"""Tour the gadget constructions that tie cover problems to fair division.

Run with: python3 demos/hardness_gadget_tour.py
"""

from connfair import (
    Budget,
    GADGET_BUILDERS,
    VCInstance,
    X3CInstance,
    gen_vc_star_gadget,
    solve_vc_bruteforce,
    solve_vc_via_po,
    solve_x3c_bruteforce,
    solve_x3c_via_po,
)


def main():
    x3c = X3CInstance(3, ((0, 1, 2),))
    print("Exact 3-cover input: elements {0, 1, 2}, candidate sets",
          [list(s) for s in x3c.sets])
    print("\nEach gadget turns this cover question into a fair-division")
    print("instance whose welfare-maximizing connected allocations reveal")
    print("the answer:")
    for kind, builder in GADGET_BUILDERS.items():
        gadget = builder(x3c)
        graph = gadget.instance.graph
        print(f"  {kind:9s} -> {gadget.instance.num_items:3d} items, "
              f"{gadget.instance.num_agents:3d} agents, "
              f"{graph.topology} graph")

    print("\nDeciding the cover through the allocation oracle:")
    for kind, budget in (
        ("forest", Budget(max_items=9, max_agents=7)),
        ("tree", Budget(max_items=7, max_agents=6)),
        ("maxdeg3", Budget(max_items=9, max_agents=6)),
        ("2add-path", Budget()),
        ("po-mms", Budget()),
    ):
        cover = solve_x3c_via_po(x3c, kind=kind, budget=budget)
        print(f"  via {kind:9s}: cover = {cover}")
    print(f"  brute force  : cover = {solve_x3c_bruteforce(x3c)}")

    print("\nVertex cover on a star of items (2-additive main agent):")
    vc = VCInstance(3, ((0, 1), (1, 2), (0, 2)), 2)
    gadget = gen_vc_star_gadget(vc)
    print(f"  triangle, k={vc.k} -> {gadget.instance.num_items} items, "
          f"{gadget.instance.num_agents} agents")
    print(f"  via allocations: {solve_vc_via_po(vc)}")
    print(f"  brute force    : {solve_vc_bruteforce(vc)}")
    infeasible = VCInstance(3, ((0, 1), (1, 2), (0, 2)), 1)
    print(f"  k=1 (impossible): {solve_vc_via_po(infeasible)}")


if __name__ == "__main__":
    main()
