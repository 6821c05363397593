"""Exhaustive enumeration of small ortholattices up to isomorphism.

Every finite ortholattice admits a *self-dual linear extension*: a labelling
``0..n-1`` of its elements such that ``a < b`` implies ``label(a) <
label(b)`` and ``label(a') = n - 1 - label(a)``.  (Peel a minimal element
``m`` of what is left together with the maximal element ``m'``; the rest is
again closed under ``'``.)  So it suffices to search strict orders on the
middle elements that are upper-triangular in this labelling and symmetric
under ``(i, j) -> (j', i')``.  Complementary pairs are never comparable.

The canonical key of a lattice is the lexicographically least encoding of
its order over all of its self-dual linear extensions.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from orthologic.lattice import (
    ClassFlags,
    FiniteOrthoLattice,
    LatticeError,
    MO2,
    O6,
    boolean,
    classify,
    format_lattice,
    two,
    verify_ortholattice,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_SIZE = 8
HARD_MAX_SIZE = 10


class BoundExceeded(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    lattice: FiniteOrthoLattice
    flags: ClassFlags
    canonical_key: str
    name: str

    @property
    def size(self) -> int:
        return self.lattice.n


# -- canonical form ---------------------------------------------------------


def _self_dual_extensions(L: FiniteOrthoLattice) -> Iterator[list[int]]:
    """Yield element orders (position -> element) that are self-dual linear extensions."""
    n = L.n
    order = [None] * n
    order[0], order[n - 1] = L.zero, L.one
    lt = L.leq & ~np.eye(n, dtype=bool)

    def rec(remaining: frozenset[int], pos: int):
        if not remaining:
            yield list(order)
            return
        for m in sorted(remaining):
            if any(lt[r, m] for r in remaining):
                continue
            mc = L.comp(m)
            order[pos], order[n - 1 - pos] = m, mc
            yield from rec(remaining - {m, mc}, pos + 1)

    middle = frozenset(L.elements) - {L.zero, L.one}
    yield from rec(middle, 1)


def canonical_key(L: FiniteOrthoLattice) -> str:
    """Isomorphism-invariant string; equal keys mean isomorphic lattices."""
    if L.n > 16:
        raise BoundExceeded(f"canonical keys are limited to 16 elements, got {L.n}")
    n = L.n
    if n == 1:
        return "1:"
    mid = range(1, n - 1)
    pairs = [(i, j) for i in mid for j in mid if i < j and i + j != n - 1]
    best = None
    for order in _self_dual_extensions(L):
        bits = "".join("1" if L.leq[order[i], order[j]] else "0" for i, j in pairs)
        if best is None or bits < best:
            best = bits
    value = int(best, 2) if best else 0
    return f"{n}:{value:0{(len(pairs) + 3) // 4}x}" if pairs else f"{n}:"


# -- enumeration ------------------------------------------------------------


def _orbits(n: int) -> list[tuple[tuple[int, int], ...]]:
    c = lambda i: n - 1 - i  # noqa: E731
    seen = set()
    out = []
    for i in range(1, n - 1):
        for j in range(i + 1, n - 1):
            if j == c(i) or (i, j) in seen:
                continue
            orbit = {(i, j), (c(j), c(i))}
            seen |= orbit
            out.append(tuple(sorted(orbit)))
    return out


def _candidate_orders(n: int) -> Iterator[np.ndarray]:
    orbits = _orbits(n)
    base = np.eye(n, dtype=bool)
    base[0, :] = True
    base[:, n - 1] = True
    for choice in itertools.product((False, True), repeat=len(orbits)):
        leq = base.copy()
        for on, orbit in zip(choice, orbits):
            if on:
                for i, j in orbit:
                    leq[i, j] = True
        # must already be transitively closed, otherwise it is generated elsewhere
        closed = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
        if (closed == leq).all():
            yield leq


def _is_lattice(leq: np.ndarray) -> bool:
    n = len(leq)
    for a in range(n):
        for b in range(a + 1, n):
            ub = np.nonzero(leq[a] & leq[b])[0]
            if not any(leq[u, ub].all() for u in ub):
                return False
    return True


def enumerate_lattices(max_size: int = DEFAULT_MAX_SIZE) -> list[FiniteOrthoLattice]:
    """One representative per isomorphism class, sizes 2..max_size."""
    if max_size > HARD_MAX_SIZE:
        raise BoundExceeded(f"max_size {max_size} exceeds the hard cap {HARD_MAX_SIZE}")
    if max_size < 2:
        raise BoundExceeded("max_size must be at least 2")
    found: dict[str, FiniteOrthoLattice] = {}
    for n in range(2, max_size + 1, 2):
        comp = [n - 1 - i for i in range(n)]
        names = [str(i) for i in range(n)]
        count = 0
        for leq in _candidate_orders(n):
            if not _is_lattice(leq):
                continue
            try:
                L = verify_ortholattice(names, comp, leq)
            except LatticeError:
                continue
            key = canonical_key(L)
            if key not in found:
                found[key] = L
                count += 1
        log.info("size %d: %d ortholattices", n, count)
    return [found[k] for k in sorted(found, key=lambda k: (int(k.split(":")[0]), k))]


def _builtin_names() -> dict[str, str]:
    named = {"2": two(), "B2": boolean(2), "O6": O6(), "MO2": MO2(), "B3": boolean(3)}
    return {canonical_key(L): nm for nm, L in named.items()}


def enumerate(max_size: int = DEFAULT_MAX_SIZE) -> list[CatalogEntry]:  # noqa: A001
    """All ortholattices with at most ``max_size`` elements, classified."""
    known = _builtin_names()
    entries = []
    per_size: dict[int, int] = {}
    for L in enumerate_lattices(max_size):
        key = canonical_key(L)
        per_size[L.n] = per_size.get(L.n, 0) + 1
        name = known.get(key, f"OL{L.n}_{per_size[L.n]}")
        entries.append(CatalogEntry(L, classify(L), key, name))
    return entries


def witness_search(entries: list[CatalogEntry], **required: bool) -> CatalogEntry | None:
    """First entry whose flags match, e.g. ``witness_search(cat, woml=True, oml=False)``."""
    for e in entries:
        if e.flags.matches(**required):
            return e
    return None


def write_catalog(entries: list[CatalogEntry], out_dir: str | Path) -> Path:
    """One ``<name>.lat`` file per entry plus ``index.tsv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = ["key\tsize\tol\twoml\twdol\toml\tba\tname"]
    for e in entries:
        (out / f"{e.name}.lat").write_text(f"# {e.name} key={e.canonical_key}\n" + format_lattice(e.lattice))
        f = e.flags
        rows.append(
            f"{e.canonical_key}\t{e.size}\t{int(f.ol)}\t{int(f.woml)}\t{int(f.wdol)}"
            f"\t{int(f.oml)}\t{int(f.boolean)}\t{e.name}"
        )
    index = out / "index.tsv"
    index.write_text("\n".join(rows) + "\n")
    return index
