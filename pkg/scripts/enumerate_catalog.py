#!/usr/bin/env python3
"""Enumerate ortholattices up to a size bound and write them to a directory."""

import argparse
from pathlib import Path

from orthologic import catalog


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=10)
    ap.add_argument("--out", type=Path, default=Path("catalog"))
    args = ap.parse_args()

    entries = catalog.enumerate(args.max_size)
    index = catalog.write_catalog(entries, args.out)
    by_size = {}
    for e in entries:
        by_size.setdefault(e.size, []).append(e)
    for n, group in sorted(by_size.items()):
        print(f"size {n:2d}: {len(group):3d}  " + " ".join(f"{e.name}[{e.flags.as_line()}]" for e in group))
    print(f"index written to {index}")


if __name__ == "__main__":
    main()
