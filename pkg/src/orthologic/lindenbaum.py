"""Bounded Lindenbaum quotients of the formula algebra (with empty Gamma).

The universe is every primitive formula over ``p0..p{k-1}`` of depth at most
``d``.  Two congruences are built:

* standard: ``A ~ B`` iff ``|- A == B`` (QL) or ``|- A =0= B`` (CL);
* refined: additionally every valuation into O6 agrees on ``A`` and ``B``.

Theoremhood is decided through completeness (OML validity for QL, truth
tables for CL).  Because provable equivalence is then determined by the
values of ``A`` and ``B`` under finitely many valuations, each class has a
*signature*: the vector of its values under all valuations into MO2 and 2
(QL) or 2 (CL), plus O6 for the refined congruence.  The partition of the
universe is the partition by signature, which lets the quotient be computed
one depth layer at a time without listing every member.

Quotient operations are partial: ``'`` is defined on a class when some
member's negation is in the universe (its shallowest member has depth below
``d``), and likewise for joins.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from orthologic.formula import (
    Formula,
    Neg,
    Or,
    Var,
    count_primitive_formulas,
    depth,
    equiv,
    equiv0,
    expand,
    primitive_formulas,
    render,
    variables,
)
from orthologic.lattice import MO2, O6, FiniteOrthoLattice, two
from orthologic.semantics import TooManyVariables, oml_valid, tautology, term_vectors

MAX_VARS = 2
MAX_DEPTH = 6
# beyond this many members the universe is not listed explicitly
LISTABLE = 200_000


# quotients of universes up to this size are re-checked member by member
VERIFY_LIMIT = 10_000


class BoundExceeded(ValueError):
    pass


class WellDefinednessError(RuntimeError):
    pass


# -- universe ---------------------------------------------------------------


@dataclass(frozen=True)
class FormulaUniverse:
    variables: int
    depth: int

    def __post_init__(self):
        if not 1 <= self.variables <= MAX_VARS:
            raise BoundExceeded(f"vars must be 1..{MAX_VARS}, got {self.variables}")
        if not 0 <= self.depth <= MAX_DEPTH:
            raise BoundExceeded(f"depth must be 0..{MAX_DEPTH}, got {self.depth}")

    @property
    def size(self) -> int:
        return count_primitive_formulas(self.variables, self.depth)

    @property
    def listable(self) -> bool:
        return self.size <= LISTABLE

    def members(self) -> list[Formula]:
        if not self.listable:
            raise BoundExceeded(f"universe has {self.size} members; too many to list")
        return primitive_formulas(self.variables, self.depth)

    def __contains__(self, f: Formula) -> bool:
        g = expand(f)
        return g == f and all(v < self.variables for v in variables(f)) and depth(f) <= self.depth


def build_universe(k: int, d: int) -> FormulaUniverse:
    return FormulaUniverse(k, d)


# -- theoremhood and congruences --------------------------------------------


def theoremhood(logic: str, f: Formula) -> bool:
    """Provability with empty Gamma, for formulas in at most two variables."""
    if len(variables(f)) > MAX_VARS:
        raise TooManyVariables("theoremhood is only decided for at most 2 variables")
    logic = logic.upper()
    if logic == "QL":
        return oml_valid(f)
    if logic == "CL":
        return tautology(f)
    raise ValueError(f"unknown logic {logic!r}")


def _equivalence(logic: str) -> Callable[[Formula, Formula], Formula]:
    return equiv if logic.upper() == "QL" else equiv0


def related(kind: str, logic: str, a: Formula, b: Formula) -> bool:
    """The congruence relation itself, straight from its definition."""
    if not theoremhood(logic, _equivalence(logic)(a, b)):
        return False
    if kind == "standard":
        return True
    hexagon = O6()
    vs = tuple(sorted(set(variables(a)) | set(variables(b))))
    va, vb = term_vectors(hexagon, [a, b], vs)
    return bool((va == vb).all())


class _SignatureAlgebra:
    """Products of finite ortholattices evaluated on all assignments of k variables."""

    def __init__(self, kind: str, logic: str, k: int):
        logic = logic.upper()
        if kind not in ("standard", "refined"):
            raise ValueError(f"kind must be 'standard' or 'refined', got {kind!r}")
        if logic not in ("QL", "CL"):
            raise ValueError(f"logic must be QL or CL, got {logic!r}")
        models: list[FiniteOrthoLattice] = [MO2(), two()] if logic == "QL" else [two()]
        if kind == "refined":
            models.append(O6())
        self.models = models
        self.k = k
        self.segments = []
        start = 0
        for L in models:
            width = L.n**k
            self.segments.append((L, slice(start, start + width)))
            start += width
        self.width = start

    def of(self, f: Formula) -> np.ndarray:
        parts = [term_vectors(L, [f], range(self.k))[0] for L, _ in self.segments]
        return np.concatenate(parts)

    def neg(self, s: np.ndarray) -> np.ndarray:
        out = np.empty_like(s)
        for L, sl in self.segments:
            out[..., sl] = L.comp_table[s[..., sl]]
        return out

    def join(self, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        s, t = np.broadcast_arrays(s, t)
        out = np.empty_like(s)
        for L, sl in self.segments:
            out[..., sl] = L.join_table[s[..., sl], t[..., sl]]
        return out

    def top(self) -> np.ndarray:
        return np.concatenate([np.full(sl.stop - sl.start, L.one) for L, sl in self.segments])


@dataclass
class Congruence:
    kind: str
    logic: str
    universe: FormulaUniverse
    algebra: _SignatureAlgebra = field(repr=False)

    def signature(self, f: Formula) -> bytes:
        return self.algebra.of(f).astype(np.int8).tobytes()

    def __call__(self, a: Formula, b: Formula) -> bool:
        return self.signature(a) == self.signature(b)

    def partition(self, members: list[Formula]) -> list[list[Formula]]:
        groups: dict[bytes, list[Formula]] = {}
        for f in members:
            groups.setdefault(self.signature(f), []).append(f)
        return list(groups.values())


def build_congruence(kind: str, logic: str, universe: FormulaUniverse) -> Congruence:
    return Congruence(kind, logic.upper(), universe, _SignatureAlgebra(kind, logic, universe.variables))


# -- quotient ---------------------------------------------------------------


@dataclass
class QuotientAlgebra:
    congruence: Congruence
    signatures: np.ndarray  # (classes, width)
    representatives: list[Formula]
    min_depth: list[int]
    neg_table: np.ndarray  # (classes + 1,), UNDEF where undefined
    join_table: np.ndarray  # (classes + 1, classes + 1)
    index: dict[bytes, int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.representatives)

    @property
    def UNDEF(self) -> int:
        return self.size

    def class_of(self, f: Formula) -> int | None:
        """Class id of ``f`` or None when no universe member shares its class."""
        return self.index.get(self.congruence.signature(f))

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def meet(self, a: int, b: int) -> int:
        return self.neg(self.join(self.neg(a), self.neg(b)))

    @property
    def one(self) -> int | None:
        return self.index.get(self.congruence.algebra.top().astype(np.int8).tobytes())

    def describe(self, a: int) -> str:
        return render(self.representatives[a]) if a != self.UNDEF else "undefined"


def quotient(universe: FormulaUniverse, congruence: Congruence) -> QuotientAlgebra:
    """Classes of the universe with their partial ``'`` and ``v`` tables."""
    alg = congruence.algebra
    sigs: list[np.ndarray] = []
    reps: list[Formula] = []
    mind: list[int] = []
    index: dict[bytes, int] = {}

    def add(sig: np.ndarray, rep: Formula, d: int) -> None:
        key = sig.astype(np.int8).tobytes()
        if key not in index:
            index[key] = len(reps)
            sigs.append(sig)
            reps.append(rep)
            mind.append(d)

    for i in range(universe.variables):
        add(alg.of(Var(i)), Var(i), 0)
    for d in range(1, universe.depth + 1):
        frontier = len(reps)
        S = np.array(sigs[:frontier])
        for i in range(frontier):
            add(alg.neg(S[i]), Neg(reps[i]), d)
        for i in range(frontier):
            joined = alg.join(S[i][None, :], S)
            for j in range(frontier):
                add(joined[j], Or(reps[i], reps[j]), d)

    n = len(reps)
    S = np.array(sigs)
    neg_table = np.full(n + 1, n, dtype=np.int64)
    join_table = np.full((n + 1, n + 1), n, dtype=np.int64)
    usable = [i for i in range(n) if mind[i] < universe.depth]
    for i in usable:
        neg_table[i] = index[alg.neg(S[i]).astype(np.int8).tobytes()]
        joined = alg.join(S[i][None, :], S[usable])
        for j, row in zip(usable, joined):
            join_table[i, j] = index[row.astype(np.int8).tobytes()]
    q = QuotientAlgebra(congruence, S, reps, mind, neg_table, join_table, index)
    if universe.size <= VERIFY_LIMIT:
        problems = verify_well_defined(q, universe.members())
        if problems:
            raise WellDefinednessError(problems[0])
    return q


def verify_well_defined(q: QuotientAlgebra, members: list[Formula]) -> list[str]:
    """Problems found when recomputing the tables from every listed member."""
    problems = []
    for f in members:
        c = q.class_of(f)
        if c is None:
            problems.append(f"member {render(f)} has no class")
            continue
        if isinstance(f, Neg):
            a = q.class_of(f.child)
            if q.neg(a) != c:
                problems.append(f"~ not well defined at {render(f)}")
        elif isinstance(f, Or):
            a, b = q.class_of(f.left), q.class_of(f.right)
            if q.join(a, b) != c:
                problems.append(f"v not well defined at {render(f)}")
    return problems


# -- law checks -------------------------------------------------------------


@dataclass
class LawResult:
    law: str
    status: str  # holds | fails | undefined
    checked: int
    total: int
    witness: list[str] | None = None

    @property
    def coverage(self) -> float:
        return self.checked / self.total if self.total else 0.0


@dataclass
class LawReport:
    kind: str
    logic: str
    classes: int
    laws: dict[str, LawResult]

    def status(self, law: str) -> str:
        return self.laws[law].status

    @property
    def ol_ok(self) -> bool:
        return all(self.laws[k].status != "fails" for k in OL_LAWS)

    @property
    def woml_ok(self) -> bool:
        return self.laws["woml"].status != "fails"

    @property
    def wdol_ok(self) -> bool:
        return self.laws["wdol"].status != "fails"

    @property
    def oml_counterexample(self) -> list[str] | None:
        return self.laws["orthomodularity"].witness

    @property
    def distributivity_counterexample(self) -> list[str] | None:
        return self.laws["distributivity"].witness


OL_LAWS = ("commutativity", "associativity", "involution", "unit", "absorption", "de_morgan")


class _Ops:
    """Vectorised partial operations with an absorbing UNDEF index."""

    def __init__(self, q: QuotientAlgebra):
        self.N, self.J, self.U = q.neg_table, q.join_table, q.UNDEF
        one = q.one
        self.one = self.U if one is None else one

    def n(self, a):
        return self.N[a]

    def j(self, a, b):
        return self.J[a, b]

    def m(self, a, b):
        return self.N[self.J[self.N[a], self.N[b]]]

    def eq(self, a, b):
        return self.j(self.m(a, b), self.m(self.n(a), self.n(b)))

    def eq0(self, a, b):
        return self.m(self.j(self.n(a), b), self.j(self.n(b), a))


def _laws(o: _Ops):
    # (name, arity, lhs, rhs, premise or None); premise(a, b, c) -> (term, must equal one)
    return [
        ("commutativity", 2, lambda a, b, c: o.j(a, b), lambda a, b, c: o.j(b, a), None),
        ("associativity", 3, lambda a, b, c: o.j(o.j(a, b), c), lambda a, b, c: o.j(a, o.j(b, c)), None),
        ("involution", 1, lambda a, b, c: o.n(o.n(a)), lambda a, b, c: a, None),
        ("unit", 2, lambda a, b, c: o.j(a, o.j(b, o.n(b))), lambda a, b, c: o.j(b, o.n(b)), None),
        ("absorption", 2, lambda a, b, c: o.j(a, o.m(a, b)), lambda a, b, c: a, None),
        ("de_morgan", 2, lambda a, b, c: o.m(a, b), lambda a, b, c: o.n(o.j(o.n(a), o.n(b))), None),
        (
            "woml",
            3,
            lambda a, b, c: o.eq(o.j(a, c), o.j(b, c)),
            lambda a, b, c: np.full_like(a, o.one),
            lambda a, b, c: o.eq(a, b),
        ),
        ("wdol", 2, lambda a, b, c: o.j(o.eq(a, b), o.eq(a, o.n(b))), lambda a, b, c: np.full_like(a, o.one), None),
        (
            "orthomodularity",
            2,
            lambda a, b, c: o.j(a, o.m(o.n(a), o.j(a, b))),
            lambda a, b, c: o.j(a, b),
            None,
        ),
        ("distributivity", 3, lambda a, b, c: o.m(a, o.j(b, c)), lambda a, b, c: o.j(o.m(a, b), o.m(a, c)), None),
        ("equiv_one_implies_equal", 2, lambda a, b, c: a, lambda a, b, c: b, lambda a, b, c: o.eq(a, b)),
        ("equiv0_one_implies_equal", 2, lambda a, b, c: a, lambda a, b, c: b, lambda a, b, c: o.eq0(a, b)),
    ]


def _priority_order(q: QuotientAlgebra) -> np.ndarray:
    # variables first so that witnesses use the simplest classes
    return np.array(sorted(range(q.size), key=lambda i: (q.min_depth[i], i)))


def check_laws(q: QuotientAlgebra, chunk: int = 64) -> LawReport:
    """Evaluate each law on every class tuple where all needed operations are defined."""
    o = _Ops(q)
    order = _priority_order(q)
    n = q.size
    results = {}
    for name, arity, lhs, rhs, premise in _laws(o):
        checked, total, witness = 0, n**arity, None
        for first in range(0, n, chunk):
            head = order[first : first + chunk]
            grids = list(np.meshgrid(head, *[order] * (arity - 1), indexing="ij"))
            grids += [grids[0]] * (3 - arity)
            a, b, c = grids
            L, R = lhs(a, b, c), rhs(a, b, c)
            defined = (L != o.U) & (R != o.U)
            applies = defined
            if premise is not None:
                p = premise(a, b, c)
                defined &= p != o.U
                applies = defined & (p == o.one)
            checked += int(defined.sum())
            bad = applies & (L != R)
            if witness is None and bad.any():
                idx = tuple(np.argwhere(bad)[0])
                names = "abc"[:arity]
                witness = [f"{v}={q.describe(int(g[idx]))}" for v, g in zip(names, grids)]
                witness += [f"lhs={q.describe(int(L[idx]))}", f"rhs={q.describe(int(R[idx]))}"]
        status = "fails" if witness else ("holds" if checked else "undefined")
        results[name] = LawResult(name, status, checked, total, witness)
    return LawReport(q.congruence.kind, q.congruence.logic, n, results)


def law_instance(q: QuotientAlgebra, law: str, *args: Formula) -> tuple[int, int] | None:
    """Class ids of both sides of ``law`` at the classes of ``args``; None if undefined."""
    spec = {name: (arity, lhs, rhs) for name, arity, lhs, rhs, _ in _laws(_Ops(q))}
    arity, lhs, rhs = spec[law]
    if len(args) != arity:
        raise ValueError(f"{law} takes {arity} arguments")
    ids = [q.class_of(f) for f in args]
    if None in ids:
        return None
    ids += [ids[0]] * (3 - arity)
    a, b, c = (np.array(i) for i in ids)
    L, R = int(lhs(a, b, c)), int(rhs(a, b, c))
    if q.UNDEF in (L, R):
        return None
    return L, R


def orthomodularity_instance(q: QuotientAlgebra, a: Formula, b: Formula) -> tuple[int, int] | None:
    """Classes of ``a v (~a ^ (a v b))`` and ``a v b``, if defined."""
    return law_instance(q, "orthomodularity", a, b)


def refinement_violations(fine: QuotientAlgebra, coarse: QuotientAlgebra, members) -> list[tuple[Formula, Formula]]:
    """Pairs of members sharing a ``fine`` class but not a ``coarse`` one."""
    seen: dict[int, tuple[Formula, int]] = {}
    bad = []
    for f in members:
        i, j = fine.class_of(f), coarse.class_of(f)
        first = seen.setdefault(i, (f, j))
        if first[1] != j:
            bad.append((first[0], f))
    return bad


def unit_class_non_theorems(q: QuotientAlgebra, members) -> list[Formula]:
    """Members in the class of 1 that are not theorems."""
    one = q.one
    logic = q.congruence.logic
    return [f for f in members if q.class_of(f) == one and not theoremhood(logic, f)]


# -- reporting --------------------------------------------------------------


def lindenbaum_report(logic: str, kind: str, k: int, d: int) -> Iterator[dict]:
    """JSON-lines records: a header, one per class, one per law."""
    U = build_universe(k, d)
    cong = build_congruence(kind, logic, U)
    q = quotient(U, cong)
    laws = check_laws(q)
    yield {
        "record": "header",
        "logic": cong.logic,
        "kind": kind,
        "vars": k,
        "depth": d,
        "universe_size": U.size,
        "classes": q.size,
    }
    for i, rep in enumerate(q.representatives):
        yield {
            "record": "class",
            "id": i,
            "representative": render(rep),
            "min_depth": q.min_depth[i],
            "is_one": i == q.one,
        }
    for r in laws.laws.values():
        yield {
            "record": "law",
            "law": r.law,
            "status": r.status,
            "checked": r.checked,
            "total": r.total,
            "coverage": round(r.coverage, 6),
            "witness": r.witness,
        }


def dump_jsonl(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)

