"""Valuations of formulas into finite ortholattices.

A valuation sends ``~`` to ``'`` and ``v`` to the join; derived connectives
are evaluated through :func:`orthologic.formula.expand`.  Validity and
consequence quantify over every assignment of lattice elements to the
variables occurring in the formulas, in lexicographic order (first variable
most significant, element ids ascending), so the first counterexample found
is the least one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from orthologic.formula import Formula, Neg, Or, Sugar, Var, expand, variables
from orthologic.lattice import MO2, FiniteOrthoLattice, O6, two


class UnassignedVariable(KeyError):
    pass


@dataclass(frozen=True)
class Valuation:
    lattice: FiniteOrthoLattice
    assignment: Mapping[int, int]

    def __call__(self, f: Formula) -> int:
        return evaluate(self, f)

    def describe(self) -> list[str]:
        return [f"p{v}={self.lattice.name(a)}" for v, a in sorted(self.assignment.items())]


@dataclass(frozen=True)
class Verdict:
    valid: bool
    counterexample: Valuation | None = None
    value: int | None = None

    def __bool__(self):
        return self.valid

    def describe(self) -> list[str]:
        if self.counterexample is None:
            return []
        L = self.counterexample.lattice
        return self.counterexample.describe() + [f"value={L.name(self.value)}"]


def assignment_grid(n: int, k: int) -> np.ndarray:
    """All ``n**k`` assignments as rows, lexicographic."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(n)] * k, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def term_vectors(
    L: FiniteOrthoLattice, formulas: Sequence[Formula], var_order: Sequence[int]
) -> list[np.ndarray]:
    """Values of each formula under every assignment to ``var_order``.

    Each result is an int array of length ``n**len(var_order)``.
    """
    grid = assignment_grid(L.n, len(var_order))
    columns = {v: grid[:, i] for i, v in enumerate(var_order)}
    J, C = L.join_table, L.comp_table
    memo: dict[int, tuple[Formula, np.ndarray]] = {}

    def go(g: Formula) -> np.ndarray:
        hit = memo.get(id(g))
        if hit is not None:
            return hit[1]
        if isinstance(g, Var):
            if g.index not in columns:
                raise UnassignedVariable(f"p{g.index} has no value")
            out = columns[g.index]
        elif isinstance(g, Neg):
            out = C[go(g.child)]
        elif isinstance(g, Or):
            out = J[go(g.left), go(g.right)]
        else:
            raise TypeError("formula must be expanded first")
        memo[id(g)] = (g, out)
        return out

    return [go(expand(f)) for f in formulas]


def evaluate(v: Valuation, f: Formula) -> int:
    """The element that the homomorphic extension of ``v`` assigns to ``f``."""
    L = v.lattice
    memo: dict[int, tuple[Formula, int]] = {}

    def go(g: Formula) -> int:
        hit = memo.get(id(g))
        if hit is not None:
            return hit[1]
        if isinstance(g, Var):
            try:
                out = v.assignment[g.index]
            except KeyError:
                raise UnassignedVariable(f"p{g.index} has no value") from None
        elif isinstance(g, Neg):
            out = L.comp(go(g.child))
        else:
            out = L.join(go(g.left), go(g.right))
        memo[id(g)] = (g, out)
        return out

    return go(expand(f))


def valuation_from_names(L: FiniteOrthoLattice, **assignment: str) -> Valuation:
    """``valuation_from_names(O6(), p0="x", p1="y")``."""
    return Valuation(L, {int(k[1:]): L.element(nm) for k, nm in assignment.items()})


def _counterexample(L, var_order, index) -> Valuation:
    grid_row = np.unravel_index(index, (L.n,) * len(var_order)) if var_order else ()
    return Valuation(L, {v: int(a) for v, a in zip(var_order, grid_row)})


def is_valid(L: FiniteOrthoLattice, f: Formula) -> Verdict:
    """``h(f) = 1`` for every valuation ``h`` into ``L``."""
    vs = variables(f)
    (vec,) = term_vectors(L, [f], vs)
    bad = np.nonzero(vec != L.one)[0]
    if len(bad) == 0:
        return Verdict(True)
    i = int(bad[0])
    return Verdict(False, _counterexample(L, vs, i), int(vec[i]))


def is_consequence(L: FiniteOrthoLattice, gamma: Iterable[Formula], f: Formula) -> Verdict:
    """Every valuation sending all of ``gamma`` to 1 sends ``f`` to 1."""
    gamma = list(gamma)
    vs = tuple(sorted({v for g in [*gamma, f] for v in variables(g)}))
    vecs = term_vectors(L, [*gamma, f], vs)
    premises = np.ones(len(vecs[-1]), dtype=bool)
    for g in vecs[:-1]:
        premises &= g == L.one
    bad = np.nonzero(premises & (vecs[-1] != L.one))[0]
    if len(bad) == 0:
        return Verdict(True)
    i = int(bad[0])
    return Verdict(False, _counterexample(L, vs, i), int(vecs[-1][i]))


def truth_value(f: Formula, assignment: Mapping[int, bool]) -> bool:
    """Classical two-valued evaluation, independent of the lattice code."""
    g = expand(f)
    memo: dict[int, tuple[Formula, bool]] = {}

    def go(h: Formula) -> bool:
        hit = memo.get(id(h))
        if hit is not None:
            return hit[1]
        if isinstance(h, Var):
            out = assignment[h.index]
        elif isinstance(h, Neg):
            out = not go(h.child)
        else:
            out = go(h.left) or go(h.right)
        memo[id(h)] = (h, out)
        return out

    return go(g)


def tautology(f: Formula) -> bool:
    """Truth-table check over {0, 1}."""
    vs = variables(f)
    for bits in range(1 << len(vs)):
        row = {v: bool(bits >> (len(vs) - 1 - i) & 1) for i, v in enumerate(vs)}
        if not truth_value(f, row):
            return False
    return True


class TooManyVariables(ValueError):
    pass


_MO2 = MO2()
_TWO = two()


def oml_valid(f: Formula) -> bool:
    """Validity in every orthomodular lattice, for formulas in at most two variables.

    Decided by validity in MO2 and in 2: the free OML on two generators is
    a product of copies of those two.
    """
    if len(variables(f)) > 2:
        raise TooManyVariables("oml_valid is only decided for formulas with at most 2 variables")
    return is_valid(_MO2, f).valid and is_valid(_TWO, f).valid


def o6_valid(f: Formula) -> bool:
    return is_valid(O6(), f).valid


# -- soundness harness ------------------------------------------------------

SUBSTITUTION_POOL_TEXT = ("p0", "p1", "~p0", "p0 v p1")


@dataclass
class SoundnessViolation:
    entry: str
    schema: str
    instance: str
    counterexample: list[str]


@dataclass
class SoundnessReport:
    logic: str
    checked: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    instances_per_entry: int = 0
    violations: list[SoundnessViolation] = field(default_factory=list)
    rule_failures: list[tuple[str, str, str]] = field(default_factory=list)
    # for entries outside the model class: schema ids that fail there
    outside_class_failures: dict[str, list[str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.rule_failures


def rule_closure_failures(L: FiniteOrthoLattice, imp_index: int) -> list[tuple[int, int]]:
    """Pairs with ``a = 1`` and ``a ->i b = 1`` but ``b != 1``."""
    e = L.elements
    a, b = np.meshgrid(e, e, indexing="ij")
    bad = (a == L.one) & (L.imp(imp_index, a, b) == L.one) & (b != L.one)
    return [(int(x), int(y)) for x, y in zip(a[bad], b[bad])]


def soundness_suite(logic: str, entries) -> SoundnessReport:
    """Check every axiom instance over the substitution pool, and detachment closure.

    ``entries`` are :class:`orthologic.catalog.CatalogEntry` objects; QL is
    checked in the WOML ones and CL in the WDOL ones.
    """
    from orthologic.formula import parse
    from orthologic.proofs import axiom_instances, schemas_for

    logic = logic.upper()
    pool = [parse(t) for t in SUBSTITUTION_POOL_TEXT]
    instances = [(s, inst) for s in schemas_for(logic) for inst in axiom_instances(s, pool)]
    imp_index = 3 if logic == "QL" else 0
    report = SoundnessReport(logic, instances_per_entry=len(instances))
    for entry in entries:
        L = entry.lattice
        in_class = entry.flags.woml if logic == "QL" else entry.flags.wdol
        failing_schemas = []
        for schema, inst in instances:
            verdict = is_valid(L, inst)
            if verdict.valid:
                continue
            if in_class:
                report.violations.append(
                    SoundnessViolation(entry.name, schema.id, str(inst), verdict.describe())
                )
            elif schema.id not in failing_schemas:
                failing_schemas.append(schema.id)
        closure = rule_closure_failures(L, imp_index)
        if in_class:
            report.checked.append(entry.name)
            for a, b in closure:
                report.rule_failures.append((entry.name, L.name(a), L.name(b)))
        else:
            report.skipped.append(entry.name)
            if closure:
                failing_schemas.append("R1")
            report.outside_class_failures[entry.name] = failing_schemas
    return report


# -- exhaustive sweeps by behaviour -----------------------------------------


def behaviour_classes(
    lattices: Sequence[FiniteOrthoLattice], num_vars: int, max_depth: int
) -> list[tuple[Formula, int]]:
    """One representative per distinct behaviour of primitive formulas.

    Two formulas behave alike when they take the same value under every
    assignment of ``p0..p{num_vars-1}`` into every lattice in ``lattices``.
    Any property decided by those values (validity in one of the lattices,
    for instance) is constant on a behaviour class, so checking the
    representatives covers every formula of depth at most ``max_depth``.
    Returns ``(representative, least depth)`` pairs.
    """
    grids = [assignment_grid(L.n, num_vars) for L in lattices]

    def pack(parts):
        return b"".join(p.astype(np.int8).tobytes() for p in parts)

    vecs: list[list[np.ndarray]] = []
    reps: list[tuple[Formula, int]] = []
    seen: set[bytes] = set()

    def add(parts, f, d):
        key = pack(parts)
        if key not in seen:
            seen.add(key)
            vecs.append(parts)
            reps.append((f, d))

    for v in range(num_vars):
        add([g[:, v] for g in grids], Var(v), 0)
    for d in range(1, max_depth + 1):
        n = len(reps)
        stacked = [np.array([vecs[i][m] for i in range(n)]) for m in range(len(lattices))]
        for i in range(n):
            add([L.comp_table[s[i]] for L, s in zip(lattices, stacked)], Neg(reps[i][0]), d)
        for i in range(n):
            rows = [L.join_table[s[i][None, :], s] for L, s in zip(lattices, stacked)]
            for j in range(n):
                add([r[j] for r in rows], Or(reps[i][0], reps[j][0]), d)
    return reps
