import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthologic import catalog
from orthologic.catalog import BoundExceeded, canonical_key, witness_search, write_catalog
from orthologic.lattice import MO2, O6, FiniteOrthoLattice, boolean, parse_lattice, product, two


def _naive_ortholattices(n):
    """Every ortholattice on {0..n-1} with 0 bottom and n-1 top, by brute force."""
    mid = list(range(1, n - 1))
    pairs = [(i, j) for i in mid for j in mid if i != j]
    found = []
    for comp_mid in _involutions(mid):
        comp = {0: n - 1, n - 1: 0, **comp_mid}
        for bits in range(1 << len(pairs)):
            le = {(i, i) for i in range(n)} | {(0, i) for i in range(n)} | {(i, n - 1) for i in range(n)}
            le |= {p for k, p in enumerate(pairs) if bits >> k & 1}
            if _is_ortholattice(n, le, comp):
                found.append((le, comp))
    return found


def _involutions(items):
    if not items:
        yield {}
        return
    a, rest = items[0], items[1:]
    for b in rest:
        for tail in _involutions([x for x in rest if x != b]):
            yield {a: b, b: a, **tail}


def _is_ortholattice(n, le, comp):
    E = range(n)
    if any((a, b) in le and (b, c) in le and (a, c) not in le for a in E for b in E for c in E):
        return False
    if any((a, b) in le and (b, a) in le and a != b for a in E for b in E):
        return False
    for a, b in itertools.product(E, E):
        ub = [u for u in E if (a, u) in le and (b, u) in le]
        if sum(all((u, v) in le for v in ub) for u in ub) != 1:
            return False
    for a, b in itertools.product(E, E):
        if (a, b) in le and (comp[b], comp[a]) not in le:
            return False
    # a v a' = 1: the only upper bound of a and a' is the top
    return all(not any((a, u) in le and (comp[a], u) in le for u in E if u != n - 1) for a in E)


def _naive_classes(n):
    """Isomorphism classes by trying every permutation of the middle elements."""
    reps = []
    for le, comp in _naive_ortholattices(n):
        mid = list(range(1, n - 1))
        clash = False
        for rle, rcomp in reps:
            for perm in itertools.permutations(mid):
                f = {0: 0, n - 1: n - 1, **dict(zip(mid, perm))}
                if {(f[a], f[b]) for a, b in le} == rle and all(f[comp[a]] == rcomp[f[a]] for a in range(n)):
                    clash = True
                    break
            if clash:
                break
        if not clash:
            reps.append((le, comp))
    return reps


def _as_lattice(le, comp, n):
    leq = np.zeros((n, n), dtype=bool)
    for a, b in le:
        leq[a, b] = True
    return FiniteOrthoLattice([str(i) for i in range(n)], leq, [comp[i] for i in range(n)])


@pytest.mark.parametrize("n", [2, 4, 6])
def test_matches_brute_force(n):
    naive = _naive_classes(n)
    keys = {canonical_key(_as_lattice(le, comp, n)) for le, comp in naive}
    assert len(keys) == len(naive)
    ours = [e for e in catalog.enumerate(n) if e.size == n]
    assert {e.canonical_key for e in ours} == keys


def test_size_two():
    (only,) = catalog.enumerate(2)
    assert only.name == "2" and only.flags.boolean


def test_builtins_found(cat10):
    keys = {e.canonical_key: e.name for e in cat10}
    for name, L in [("2", two()), ("B2", boolean(2)), ("O6", O6()), ("MO2", MO2()), ("B3", boolean(3))]:
        assert keys[canonical_key(L)] == name
    assert canonical_key(product(two(), two())) in keys


def test_entries_are_pairwise_non_isomorphic(cat8):
    by_size = {}
    for e in cat8:
        by_size.setdefault(e.size, []).append(e.lattice)
    for n, group in by_size.items():
        for A, B in itertools.combinations(group, 2):
            assert not _isomorphic(A, B)


def _isomorphic(A, B):
    if A.n != B.n:
        return False
    n = A.n
    for middle in itertools.permutations(range(1, n - 1)):
        p = np.array([0, *middle, n - 1])
        if (A.leq == B.leq[np.ix_(p, p)]).all() and (p[A.comp_table] == B.comp_table[p]).all():
            return True
    return False


_CAT10 = catalog.enumerate(10)


@given(st.sampled_from(range(24)), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_relabelling_keeps_key(i, rnd):
    e = _CAT10[i % len(_CAT10)]
    perm = list(range(e.size))
    rnd.shuffle(perm)
    assert canonical_key(e.lattice.relabel(perm)) == e.canonical_key


def test_counts_are_monotone():
    counts = [len(catalog.enumerate(n)) for n in range(2, 11)]
    assert counts == sorted(counts)


def test_order_and_validity(cat10):
    assert [(e.size, e.canonical_key) for e in cat10] == sorted((e.size, e.canonical_key) for e in cat10)
    assert all(e.flags.ol for e in cat10)


def test_bounds():
    with pytest.raises(BoundExceeded):
        catalog.enumerate(12)
    with pytest.raises(BoundExceeded):
        catalog.enumerate(1)


class TestWitnesses:
    def test_woml_not_oml_is_o6(self, cat10):
        assert witness_search(cat10, woml=True, oml=False).name == "O6"

    def test_wdol_not_oml_is_o6(self, cat10):
        assert witness_search(cat10, wdol=True, oml=False).name == "O6"

    def test_woml_not_wdol(self, cat10):
        hit = witness_search(cat10, woml=True, wdol=False)
        assert hit is not None and hit.flags.woml and not hit.flags.wdol

    def test_neither(self, cat10):
        hit = witness_search(cat10, woml=False, wdol=False)
        assert hit is not None and not hit.flags.woml and not hit.flags.wdol

    def test_none_reported(self, cat10):
        assert witness_search(cat10, boolean=True, oml=False) is None


def test_write_catalog(tmp_path, cat8):
    index = write_catalog(cat8, tmp_path)
    rows = index.read_text().splitlines()
    assert rows[0].split("\t") == ["key", "size", "ol", "woml", "wdol", "oml", "ba", "name"]
    assert len(rows) == len(cat8) + 1
    for row in rows[1:]:
        key, size, *_, name = row.split("\t")
        L = parse_lattice((tmp_path / f"{name}.lat").read_text())
        assert canonical_key(L) == key and L.n == int(size)
