#!/usr/bin/env python3
"""Finite-difference oracle vs analytic coefficients as a function of the step h.

Prints, for each h, the worst relative deviation over a few catalog points
with and without one Richardson level.  Useful for seeing where round-off
overtakes truncation in the second differences.
"""
import argparse

import numpy as np

from zmcrot.catalog import CATALOG
from zmcrot.fd_oracle import OracleConfig, oracle_coefficients
from zmcrot.profiles import interior_samples, regularity_scan
from zmcrot.surface_geom import fundamental_data


def worst_deviation(cfg, points):
    worst = 0.0
    for s, u in points:
        got, _ = oracle_coefficients(s, u, 0.3, cfg)
        ref = np.array(fundamental_data(s, u).astuple())
        worst = max(worst, float(np.max(np.abs(np.array(got) - ref) / np.maximum(1, np.abs(ref)))))
    return worst


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--examples", default="ex3.4,ex3.5,ex3.10,ex3.12")
    ap.add_argument("--samples", type=int, default=5)
    args = ap.parse_args()

    points = []
    for name in args.examples.split(","):
        e = CATALOG[name]
        pc = regularity_scan(e.surface, e.window)[0]
        points += [(e.surface, u) for u in interior_samples(pc.interval, args.samples, 0.2)]

    print(f"{'h':>8} {'plain':>10} {'richardson':>11} {'gain':>7}")
    for h in (2e-2, 1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 1e-4):
        plain = worst_deviation(OracleConfig(h=h, richardson_levels=0), points)
        rich = worst_deviation(OracleConfig(h=h, richardson_levels=1), points)
        print(f"{h:8.0e} {plain:10.2e} {rich:11.2e} {plain / max(rich, 1e-300):7.1f}")


if __name__ == "__main__":
    main()
