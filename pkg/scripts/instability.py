"""Y-graph instability: equal arms stall at 4/9, perturbed arms reach 1.

For each arm triple the script prints the exact classification, the
finite-depth eigenvalue-ratio diagnostic, and the windowed sup transfer
between the two wells on the longer arms.

Usage:
    python3 scripts/instability.py [--arms 3,3,3 2,3,3 3,4,4]
"""

from __future__ import annotations

import argparse

from qtunnel.graph import y_graph
from qtunnel.spectral import PotentialSpec
from qtunnel.triple import classify_triple_well, finite_depth_ratio
from qtunnel.tunneling import SweepConfig, tc_curve

SCHEDULE = (1e2, 10 ** 2.5, 1e3)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--arms", nargs="+", default=["3,3,3", "2,3,3", "3,4,4"])
    args = ap.parse_args()
    for spec in args.arms:
        arms = tuple(int(a) for a in spec.split(","))
        g, hubs = y_graph(arms)
        y, z = hubs[1], hubs[2]
        regime = classify_triple_well(g, hubs, y, z)
        diag = finite_depth_ratio(g, regime, SCHEDULE)
        curve = tc_curve(g, PotentialSpec.simple(g.n, hubs), y, z,
                         SweepConfig(q_schedule=SCHEDULE, window_exp=2.0))
        print(f"Y{arms}: {regime.tag}, predicted TC(y,z) = {regime.tc_table[y, z]}, "
              f"time {regime.time_scale}")
        print("   ratio along schedule: " + ", ".join(f"{r:.6f}" for r in diag.ratios)
              + f"  (gamma = {diag.gamma})")
        print("   sup transfer (window 32 Q^2): " + ", ".join(f"{e.sup_prob:.4f}" for e in curve.estimates))
        for note in regime.notes:
            print(f"   note: {note}")


if __name__ == "__main__":
    main()
