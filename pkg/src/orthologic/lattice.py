"""Finite ortholattices: validation, derived operations, class membership.

Elements are dense integer ids ``0..n-1``; display names are kept for
witnesses.  Every class predicate is decided by brute-force quantification
over all element tuples, vectorised with numpy.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np


class LatticeError(ValueError):
    """Raised when tables do not describe a finite ortholattice."""

    def __init__(self, condition: str, witness: tuple[str, ...] = (), detail: str = ""):
        self.condition = condition
        self.witness = witness
        msg = f"violates {condition}"
        if witness:
            msg += f" at ({', '.join(witness)})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class InconsistentDefinitionsError(AssertionError):
    """Two definitions that must agree as class predicates disagreed."""


OL_CONDITIONS = (
    "a v b = b v a",
    "(a v b) v c = a v (b v c)",
    "a'' = a",
    "a v (b v b') = b v b'",
    "a v (a ^ b) = a",
    "a ^ b = (a' v b')'",
)


class FiniteOrthoLattice:
    """An immutable, validated finite ortholattice.

    Build instances with :func:`verify_ortholattice` or the builtins; the
    constructor assumes ``leq`` is already a lattice order and only derives
    join/meet tables from it.
    """

    def __init__(self, names: Sequence[str], leq: np.ndarray, comp: Sequence[int], meet_table=None):
        self.names: tuple[str, ...] = tuple(names)
        self.n = len(self.names)
        self.leq = np.array(leq, dtype=bool)
        self.leq.setflags(write=False)
        self.comp_table = np.array(comp, dtype=np.int64)
        self.comp_table.setflags(write=False)
        self.join_table = _joins_from_order(self.leq)
        self.join_table.setflags(write=False)
        if meet_table is None:
            meet_table = _joins_from_order(self.leq.T)
        self.meet_table = np.asarray(meet_table)
        self.meet_table.setflags(write=False)
        below = self.leq.sum(axis=0)
        self.zero = int(np.argmin(below))
        self.one = int(np.argmax(below))
        self._index = {name: i for i, name in enumerate(self.names)}

    def __repr__(self):
        return f"FiniteOrthoLattice({' '.join(self.names)})"

    def __len__(self):
        return self.n

    @property
    def elements(self) -> range:
        return range(self.n)

    def element(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no element named {name!r}") from None

    def name(self, a: int) -> str:
        return self.names[a]

    # primitive operations

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def comp(self, a: int) -> int:
        return int(self.comp_table[a])

    # derived operations; all accept numpy arrays as well as ints

    def imp(self, i: int, a, b):
        J, M, C = self.join_table, self.meet_table, self.comp_table
        if i == 0:
            return J[C[a], b]
        if i == 1:
            return J[C[a], M[a, b]]
        if i == 2:
            return self.imp(1, C[b], C[a])
        if i == 3:
            return J[J[M[C[a], b], M[C[a], C[b]]], M[a, J[C[a], b]]]
        if i == 4:
            return self.imp(3, C[b], C[a])
        if i == 5:
            return J[J[M[a, b], M[C[a], b]], M[C[a], C[b]]]
        raise ValueError(f"implication index must be 0..5, got {i}")

    def equiv_q(self, a, b):
        J, M, C = self.join_table, self.meet_table, self.comp_table
        return J[M[a, b], M[C[a], C[b]]]

    def equiv_0(self, a, b):
        return self.meet_table[self.imp(0, a, b), self.imp(0, b, a)]

    def commutes(self, a, b):
        J, M, C = self.join_table, self.meet_table, self.comp_table
        return J[M[a, b], M[a, C[b]]] == a

    # order structure

    @cached_property
    def covers(self) -> list[tuple[int, int]]:
        """Pairs ``(a, b)`` with ``a < b`` and nothing strictly between."""
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        out = []
        for a, b in zip(*np.nonzero(lt)):
            between = lt[a] & lt[:, b]
            if not between.any():
                out.append((int(a), int(b)))
        return out

    @cached_property
    def heights(self) -> list[int]:
        h = [0] * self.n
        for b in sorted(self.elements, key=lambda e: int(self.leq[:, e].sum())):
            for a, c in self.covers:
                if c == b:
                    h[b] = max(h[b], h[a] + 1)
        return h

    @cached_property
    def canonical_key(self) -> str:
        from orthologic.catalog import canonical_key

        return canonical_key(self)

    @cached_property
    def flags(self) -> ClassFlags:
        return classify(self)

    def relabel(self, perm: Sequence[int]) -> FiniteOrthoLattice:
        """Return an isomorphic copy where old element ``a`` gets id ``perm[a]``."""
        inv = np.argsort(perm)
        names = [self.names[inv[i]] for i in range(self.n)]
        leq = self.leq[np.ix_(inv, inv)]
        comp = [perm[self.comp_table[inv[i]]] for i in range(self.n)]
        return FiniteOrthoLattice(names, leq, comp)


def _joins_from_order(leq: np.ndarray) -> np.ndarray:
    # join[a, b] = the least common upper bound; assumes it exists
    n = len(leq)
    upper = leq[:, None, :] & leq[None, :, :]  # upper[a, b, c]: a<=c and b<=c
    count_below = leq.sum(axis=0)
    # among common upper bounds, the least one has the fewest elements below it
    score = np.where(upper, count_below[None, None, :], n + 1)
    return np.argmin(score, axis=2)


# -- validation -------------------------------------------------------------


def verify_ortholattice(
    names: Sequence[str],
    comp: Mapping[str, str] | Sequence[int],
    le: Iterable[tuple[str, str]] | np.ndarray,
) -> FiniteOrthoLattice:
    """Validate raw tables and return the lattice.

    ``le`` is either a boolean matrix or a collection of ``(x, y)`` name
    pairs; its reflexive-transitive closure is taken.  Raises
    :class:`LatticeError` naming the first violated condition with a witness.
    """
    names = list(names)
    n = len(names)
    if n == 0:
        raise LatticeError("non-empty carrier")
    if len(set(names)) != n:
        raise LatticeError("distinct element names")
    index = {nm: i for i, nm in enumerate(names)}

    if isinstance(comp, Mapping):
        missing = [nm for nm in names if nm not in comp]
        if missing:
            raise LatticeError("comp is total", (missing[0],))
        try:
            comp_ids = [index[comp[nm]] for nm in names]
        except KeyError as e:
            raise LatticeError("comp maps into the carrier", (str(e.args[0]),)) from None
    else:
        comp_ids = [int(c) for c in comp]
        if len(comp_ids) != n or not all(0 <= c < n for c in comp_ids):
            raise LatticeError("comp maps into the carrier")

    if isinstance(le, np.ndarray):
        rel = le.astype(bool).copy()
    else:
        rel = np.zeros((n, n), dtype=bool)
        for x, y in le:
            if x not in index or y not in index:
                bad = x if x not in index else y
                raise LatticeError("le mentions only carrier elements", (bad,))
            rel[index[x], index[y]] = True
    rel |= np.eye(n, dtype=bool)
    # transitive closure (Warshall)
    for k in range(n):
        rel |= rel[:, k : k + 1] & rel[k : k + 1, :]
    both = rel & rel.T & ~np.eye(n, dtype=bool)
    if both.any():
        a, b = np.argwhere(both)[0]
        raise LatticeError("antisymmetry of le", (names[a], names[b]))

    upper = rel[:, None, :] & rel[None, :, :]
    for a in range(n):
        for b in range(n):
            ub = np.nonzero(upper[a, b])[0]
            if not any(rel[c, ub].all() for c in ub):
                raise LatticeError("existence of joins", (names[a], names[b]))
            lb = np.nonzero(rel[:, a] & rel[:, b])[0]
            if not any(rel[lb, c].all() for c in lb):
                raise LatticeError("existence of meets", (names[a], names[b]))

    L = FiniteOrthoLattice(names, rel, comp_ids)
    _check_ol_conditions(L)
    return L


def _check_ol_conditions(L: FiniteOrthoLattice) -> None:
    J, M, C = L.join_table, L.meet_table, L.comp_table
    a, b, c = np.meshgrid(L.elements, L.elements, L.elements, indexing="ij")
    checks = [
        J[a, b] == J[b, a],
        J[J[a, b], c] == J[a, J[b, c]],
        C[C[a]] == a,
        J[a, J[b, C[b]]] == J[b, C[b]],
        J[a, M[a, b]] == a,
        M[a, b] == C[J[C[a], C[b]]],
    ]
    for cond, ok in zip(OL_CONDITIONS, checks):
        if not ok.all():
            i, j, k = np.argwhere(~ok)[0]
            used = "abc"[: 1 + ("b" in cond) + ("c" in cond)]
            wit = tuple(L.names[t] for t in (i, j, k)[: len(used)])
            raise LatticeError(cond, wit)


# -- class membership -------------------------------------------------------


@dataclass(frozen=True)
class ClassFlags:
    ol: bool = True
    woml: bool = False
    wdol: bool = False
    oml: bool = False
    boolean: bool = False

    def as_line(self) -> str:
        return (
            f"ol={int(self.ol)} woml={int(self.woml)} wdol={int(self.wdol)} "
            f"oml={int(self.oml)} ba={int(self.boolean)}"
        )

    def matches(self, **required: bool) -> bool:
        return all(getattr(self, k) == v for k, v in required.items())


@dataclass(frozen=True)
class ClassReport:
    """Outcome of every individual defining condition, with witnesses."""

    flags: ClassFlags
    woml_witness: tuple[str, ...] | None
    wdol_witness: tuple[str, ...] | None
    oml_by_equiv_witness: tuple[str, ...] | None
    oml_by_law_witness: tuple[str, ...] | None
    ba_by_equiv0_witness: tuple[str, ...] | None
    ba_by_distributivity_witness: tuple[str, ...] | None
    # the commutation-based condition is recorded but not trusted (see README)
    commuting_distributivity_holds: bool = False
    commuting_distributivity_witness: tuple[str, ...] | None = field(default=None)


def _first(L: FiniteOrthoLattice, failed: np.ndarray, grids) -> tuple[str, ...] | None:
    if not failed.any():
        return None
    idx = np.argwhere(failed)[0]
    return tuple(L.names[g[tuple(idx)]] for g in grids)


def class_report(L: FiniteOrthoLattice) -> ClassReport:
    J, M, C = L.join_table, L.meet_table, L.comp_table
    one = L.one
    e = L.elements
    a2, b2 = np.meshgrid(e, e, indexing="ij")
    a3, b3, c3 = np.meshgrid(e, e, e, indexing="ij")

    eq_ab = L.equiv_q(a3, b3) == one
    woml_fail = eq_ab & (L.equiv_q(J[a3, c3], J[b3, c3]) != one)
    wdol_fail = J[L.equiv_q(a2, b2), L.equiv_q(a2, C[b2])] != one

    oml_eq_fail = (L.equiv_q(a2, b2) == one) & (a2 != b2)
    oml_law_fail = J[a2, M[C[a2], J[a2, b2]]] != J[a2, b2]
    distrib_fail = M[a3, J[b3, c3]] != J[M[a3, b3], M[a3, c3]]
    commuting_fail = L.commutes(a3, b3) & L.commutes(a3, c3) & distrib_fail
    ba_eq0_fail = (L.equiv_0(a2, b2) == one) & (a2 != b2)

    by_equiv = not oml_eq_fail.any()
    by_law = not oml_law_fail.any()
    if by_equiv != by_law:
        raise InconsistentDefinitionsError(
            f"orthomodularity definitions disagree on {L!r}: "
            f"a=b from a==b=1 gives {by_equiv}, a v (a' ^ (a v b)) = a v b gives {by_law}"
        )
    ba_eq0 = not ba_eq0_fail.any()
    ba_dist = not distrib_fail.any()
    if ba_eq0 != ba_dist:
        raise InconsistentDefinitionsError(
            f"Boolean definitions disagree on {L!r}: "
            f"a=b from a=0=b=1 gives {ba_eq0}, distributivity gives {ba_dist}"
        )
    flags = ClassFlags(
        ol=True,
        woml=not woml_fail.any(),
        wdol=not wdol_fail.any(),
        oml=by_law,
        boolean=ba_dist,
    )
    return ClassReport(
        flags=flags,
        woml_witness=_first(L, woml_fail, (a3, b3, c3)),
        wdol_witness=_first(L, wdol_fail, (a2, b2)),
        oml_by_equiv_witness=_first(L, oml_eq_fail, (a2, b2)),
        oml_by_law_witness=_first(L, oml_law_fail, (a2, b2)),
        ba_by_equiv0_witness=_first(L, ba_eq0_fail, (a2, b2)),
        ba_by_distributivity_witness=_first(L, distrib_fail, (a3, b3, c3)),
        commuting_distributivity_holds=not commuting_fail.any(),
        commuting_distributivity_witness=_first(L, commuting_fail, (a3, b3, c3)),
    )


def classify(L: FiniteOrthoLattice) -> ClassFlags:
    return class_report(L).flags


def implication_characterizes_order(L: FiniteOrthoLattice, i: int) -> bool:
    """Whether ``a ->i b = 1  <=>  a <= b`` holds for all a, b."""
    e = L.elements
    a, b = np.meshgrid(e, e, indexing="ij")
    return bool(((L.imp(i, a, b) == L.one) == L.leq[a, b]).all())


def commutation_is_symmetric(L: FiniteOrthoLattice) -> bool:
    e = L.elements
    a, b = np.meshgrid(e, e, indexing="ij")
    return bool((L.commutes(a, b) == L.commutes(b, a)).all())


# -- subalgebras ------------------------------------------------------------


def subalgebra_closure(L: FiniteOrthoLattice, gens: Iterable[int]) -> frozenset[int]:
    S = {L.zero, L.one, *gens}
    while True:
        new = {L.comp(a) for a in S}
        new |= {L.join(a, b) for a in S for b in S}
        new |= {L.meet(a, b) for a in S for b in S}
        if new <= S:
            return frozenset(S)
        S |= new


def find_O6_subalgebra(L: FiniteOrthoLattice) -> dict[str, int] | None:
    """An embedding of O6 into ``L`` (keys are O6 element names), or None.

    Candidates ``x < y`` are closed under the operations first; the closure
    must have six elements and the map must respect the O6 tables.
    """
    hexagon = O6()
    for x, y in itertools.permutations(L.elements, 2):
        if x in (L.zero, L.one) or y in (L.zero, L.one) or not L.le(x, y):
            continue
        S = subalgebra_closure(L, (x, y))
        if len(S) != 6:
            continue
        image = {
            "0": L.zero,
            "x": x,
            "y": y,
            "y'": L.comp(y),
            "x'": L.comp(x),
            "1": L.one,
        }
        if set(image.values()) != S:
            continue
        f = {hexagon.element(k): v for k, v in image.items()}
        if _is_homomorphism(hexagon, L, f):
            return image
    return None


def _is_homomorphism(src: FiniteOrthoLattice, dst: FiniteOrthoLattice, f: Mapping[int, int]) -> bool:
    for a in src.elements:
        if f[src.comp(a)] != dst.comp(f[a]):
            return False
        for b in src.elements:
            if f[src.join(a, b)] != dst.join(f[a], f[b]):
                return False
    return True


# -- derived identities -----------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    zero1_holds: bool
    zero5_holds: bool
    equiv3_equals_equiv_q: bool
    equiv3_equals_equiv_0: bool
    # pairs (i, j) with (a ->i b) ^ (b ->j a) equal to the equiv3 polynomial everywhere
    equiv3_factorisations: tuple[tuple[int, int], ...]
    union_identity_holds: dict[int, bool]
    union_identity_witness: dict[int, tuple[str, str] | None]


def derived_identities_check(L: FiniteOrthoLattice) -> IdentityReport:
    J, M, C = L.join_table, L.meet_table, L.comp_table
    e = L.elements
    a, b = np.meshgrid(e, e, indexing="ij")

    zero1 = M[M[a, J[C[a], b]], J[a, C[b]]]
    zero5 = M[M[M[J[a, b], J[a, C[b]]], J[C[a], b]], J[C[a], C[b]]]
    eqv3 = M[J[C[a], b], J[a, M[C[a], C[b]]]]

    factorisations = tuple(
        (i, j)
        for i in range(6)
        for j in range(6)
        if (M[L.imp(i, a, b), L.imp(j, b, a)] == eqv3).all()
    )
    holds, witness = {}, {}
    for i in range(1, 6):
        ab = L.imp(i, a, b)
        ba = L.imp(i, b, a)
        expr = L.imp(i, ab, L.imp(i, L.imp(i, ab, ba), a))
        bad = expr != J[a, b]
        holds[i] = not bad.any()
        witness[i] = _first(L, bad, (a, b))
    return IdentityReport(
        zero1_holds=bool((zero1 == L.zero).all()),
        zero5_holds=bool((zero5 == L.zero).all()),
        equiv3_equals_equiv_q=bool((eqv3 == L.equiv_q(a, b)).all()),
        equiv3_equals_equiv_0=bool((eqv3 == L.equiv_0(a, b)).all()),
        equiv3_factorisations=factorisations,
        union_identity_holds=holds,
        union_identity_witness=witness,
    )


# -- constructions ----------------------------------------------------------


def _from_order(names, lt_pairs, comp_pairs) -> FiniteOrthoLattice:
    comp = {}
    for a, b in comp_pairs:
        comp[a], comp[b] = b, a
    return verify_ortholattice(names, comp, lt_pairs)


def two() -> FiniteOrthoLattice:
    return _from_order(["0", "1"], [("0", "1")], [("0", "1")])


def O6() -> FiniteOrthoLattice:
    """The hexagon: 0 < x < y < 1 and 0 < y' < x' < 1."""
    return _from_order(
        ["0", "x", "y", "y'", "x'", "1"],
        [("0", "x"), ("x", "y"), ("y", "1"), ("0", "y'"), ("y'", "x'"), ("x'", "1")],
        [("0", "1"), ("x", "x'"), ("y", "y'")],
    )


def MO2() -> FiniteOrthoLattice:
    """Two complementary pairs of atoms (the smallest non-Boolean OML)."""
    mids = ["a", "a'", "b", "b'"]
    return _from_order(
        ["0", *mids, "1"],
        [("0", m) for m in mids] + [(m, "1") for m in mids],
        [("0", "1"), ("a", "a'"), ("b", "b'")],
    )


def boolean(n: int) -> FiniteOrthoLattice:
    """The power-set algebra on ``n`` atoms."""
    if n < 0:
        raise ValueError("n must be non-negative")
    full = (1 << n) - 1
    letters = "abcdefghijklmnopqrstuvwxyz"

    def nm(s: int) -> str:
        if s == 0:
            return "0"
        if s == full:
            return "1"
        return "".join(letters[i] for i in range(n) if s >> i & 1)

    subsets = list(range(1 << n))
    names = [nm(s) for s in subsets]
    leq = np.array([[s & t == s for t in subsets] for s in subsets])
    comp = [full ^ s for s in subsets]
    L = FiniteOrthoLattice(names, leq, comp)
    _check_ol_conditions(L)
    return L


def product(L1: FiniteOrthoLattice, L2: FiniteOrthoLattice) -> FiniteOrthoLattice:
    pairs = list(itertools.product(L1.elements, L2.elements))
    names = [f"({L1.name(a)},{L2.name(b)})" for a, b in pairs]
    leq = L1.leq[np.ix_([p[0] for p in pairs], [p[0] for p in pairs])] & L2.leq[
        np.ix_([p[1] for p in pairs], [p[1] for p in pairs])
    ]
    pos = {p: i for i, p in enumerate(pairs)}
    comp = [pos[(L1.comp(a), L2.comp(b))] for a, b in pairs]
    return FiniteOrthoLattice(names, leq, comp)


BUILTINS = {
    "two": two,
    "2": two,
    "O6": O6,
    "MO2": MO2,
    "B2": lambda: boolean(2),
    "B3": lambda: boolean(3),
    "B4": lambda: boolean(4),
}


def builtin(name: str) -> FiniteOrthoLattice:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin lattice {name!r}; choose from {sorted(BUILTINS)}") from None


# -- text format ------------------------------------------------------------


_ARROW = re.compile(r"\s*(?:->|→)\s*")


def parse_lattice(text: str) -> FiniteOrthoLattice:
    """Read the line-based lattice format and validate it.

    ``elements: ...`` then ``comp: a->a' ...`` then ``le: x y`` lines;
    ``#`` starts a comment.
    """
    names = None
    comp: dict[str, str] = {}
    le: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise LatticeError("lattice file syntax", detail=f"line {lineno}: expected 'key: value'")
        key = key.strip()
        if key == "elements":
            names = rest.split()
        elif key == "comp":
            for item in _ARROW.sub("->", rest).split():
                a, arrow, b = item.partition("->")
                if not arrow or not a or not b:
                    raise LatticeError("lattice file syntax", detail=f"line {lineno}: bad comp pair {item!r}")
                comp[a] = b
        elif key == "le":
            parts = rest.split()
            if len(parts) != 2:
                raise LatticeError("lattice file syntax", detail=f"line {lineno}: 'le' needs two elements")
            le.append((parts[0], parts[1]))
        else:
            raise LatticeError("lattice file syntax", detail=f"line {lineno}: unknown key {key!r}")
    if names is None:
        raise LatticeError("lattice file syntax", detail="missing 'elements:' line")
    return verify_ortholattice(names, comp, le)


def format_lattice(L: FiniteOrthoLattice) -> str:
    """Canonical text form: declared order, covering pairs only."""
    lines = ["elements: " + " ".join(L.names)]
    lines.append("comp: " + " ".join(f"{L.name(a)}->{L.name(L.comp(a))}" for a in L.elements))
    for a, b in sorted(L.covers):
        lines.append(f"le: {L.name(a)} {L.name(b)}")
    return "\n".join(lines) + "\n"


def hasse_export(L: FiniteOrthoLattice, title: str = "L") -> str:
    """DOT digraph of the covering relation, drawn bottom-up by height."""
    h = L.heights
    lines = [f'digraph "{title}" {{', "  rankdir=BT;", "  node [shape=circle];"]
    for a in L.elements:
        lines.append(f'  n{a} [label="{L.name(a)}"];')
    for level in sorted(set(h)):
        members = " ".join(f"n{a};" for a in L.elements if h[a] == level)
        lines.append(f"  {{ rank=same; {members} }}")
    for a, b in sorted(L.covers):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
