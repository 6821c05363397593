#!/usr/bin/env python3
"""Compare two-valued tautologies with validity in the hexagon O6."""

import argparse

from orthologic.formula import render
from orthologic.lattice import O6, two
from orthologic.semantics import behaviour_classes, is_valid, tautology


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--vars", type=int, default=3)
    ap.add_argument("--depth", type=int, default=4)
    args = ap.parse_args()

    L = O6()
    classes = behaviour_classes([two(), L], args.vars, args.depth)
    taut = mismatch = 0
    for f, _ in classes:
        t = tautology(f)
        taut += t
        if t != is_valid(L, f).valid:
            mismatch += 1
            print("mismatch:", render(f))
    print(f"{len(classes)} behaviour classes, {taut} tautologous, {mismatch} mismatches")
    raise SystemExit(1 if mismatch else 0)


if __name__ == "__main__":
    main()
