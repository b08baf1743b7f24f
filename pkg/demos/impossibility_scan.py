"""Exhaustively verify that some instances admit no PO+EF1 allocation.

Run with: python3 demos/impossibility_scan.py
"""

from pathlib import Path

from connfair import load_instance, scan_for_allocation

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def scan(name, description):
    instance = load_instance(FIXTURES / name)
    print(f"\n{description}")
    print(f"  items: {instance.num_items}, agents: {instance.num_agents}")
    result = scan_for_allocation(instance, require_po=True, require_ef1=True)
    print(f"  connected allocations scanned: {result.scanned}")
    if result.witness is None:
        print("  verdict: NO allocation is both Pareto-optimal and EF1.")
    else:
        print(f"  witness: {[sorted(b) for b in result.witness.bundles]}")


def main():
    print("Pareto optimality and envy-freeness up to one item can be")
    print("incompatible once bundles must stay connected on a path.")
    print("The scanner enumerates every connected allocation, so a NONE")
    print("answer below is a proof for that instance, not a heuristic.")
    scan(
        "no_po_ef1_four_agents.json",
        "Four agents on a 10-item path (three agents share wide approvals,"
        "\none wants only the middle):",
    )
    scan(
        "no_po_ef1_three_agents.json",
        "Three agents on an 11-item path (two want everything, one wants"
        "\nonly two middle items):",
    )
    scan(
        "subadditive_identical.json",
        "Two agents with identical non-additive valuations on a 4-item path:",
    )


if __name__ == "__main__":
    main()
