#!/usr/bin/env python3
"""Class counts and law status of the two-variable quotients, depth by depth."""

import argparse
import time

from orthologic.lindenbaum import MAX_DEPTH, build_congruence, build_universe, check_laws, quotient

LAWS = ("woml", "wdol", "orthomodularity", "distributivity")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-depth", type=int, default=5, choices=range(1, MAX_DEPTH + 1))
    args = ap.parse_args()

    print(f"{'logic':5} {'kind':8} {'d':>2} {'classes':>7}  " + "  ".join(f"{law:>15}" for law in LAWS))
    for logic in ("QL", "CL"):
        for kind in ("standard", "refined"):
            for d in range(1, args.max_depth + 1):
                t = time.perf_counter()
                U = build_universe(2, d)
                q = quotient(U, build_congruence(kind, logic, U))
                rep = check_laws(q)
                cells = "  ".join(f"{rep.status(law):>15}" for law in LAWS)
                print(f"{logic:5} {kind:8} {d:2d} {q.size:7d}  {cells}  ({time.perf_counter() - t:.1f}s)")


if __name__ == "__main__":
    main()
