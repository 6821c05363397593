"""Hilbert-style derivations in QL (Kalmbach) and CL (Principia, Hilbert-Ackermann form).

Axioms are schemata over the metavariables ``A``, ``B``, ``C``; the only
rule is detachment, with ``->3`` as the major premise's connective in QL and
``->0`` in CL.  Formulas in a script are compared after expansion into
primitives, so a step may be written with or without sugar.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from orthologic.formula import (
    ConnectiveId,
    Formula,
    FormulaSyntaxError,
    Sugar,
    equiv,
    equiv0,
    expand,
    imp,
    parse,
    render,
    substitute,
    variables,
)

METAVARS = {"A": 0, "B": 1, "C": 2}


@dataclass(frozen=True)
class AxiomSchema:
    id: str
    text: str

    @property
    def template(self) -> Formula:
        return parse(self.text, METAVARS)

    @property
    def metavariables(self) -> tuple[str, ...]:
        names = {v: k for k, v in METAVARS.items()}
        return tuple(names[i] for i in variables(self.template))


_QL = [
    ("A1", "A = A"),
    ("A2", "A = B -0> (B = C -0> A = C)"),
    ("A3", "A = B -0> ~A = ~B"),
    ("A4", "A = B -0> A ^ C = B ^ C"),
    ("A5", "A ^ B = B ^ A"),
    ("A6", "A ^ (B ^ C) = (A ^ B) ^ C"),
    ("A7", "A ^ (A v B) = A"),
    ("A8", "~A ^ A = (~A ^ A) ^ B"),
    ("A9", "A = ~~A"),
    ("A10", "~(A v B) = ~A ^ ~B"),
    ("A11", "A v (~A ^ (A v B)) = A v B"),
    ("A12", "(A = B) = (B = A)"),
    ("A13", "A = B -0> (A -0> B)"),
    ("A14", "(A -0> B) -3> (A -3> (A -3> B))"),
    ("A15", "(A -3> B) -0> (A -0> B)"),
]
_CL = [
    ("A1", "A v A -0> A"),
    ("A2", "A -0> A v B"),
    ("A3", "A v B -0> B v A"),
    ("A4", "(A -0> B) -0> (C v A -0> C v B)"),
]

SCHEMAS: dict[str, AxiomSchema] = {
    **{f"QL.{k}": AxiomSchema(f"QL.{k}", t) for k, t in _QL},
    **{f"CL.{k}": AxiomSchema(f"CL.{k}", t) for k, t in _CL},
}

DETACHMENT = {"QL": ConnectiveId.IMP3, "CL": ConnectiveId.IMP0}


class ProofError(ValueError):
    pass


def schemas_for(logic: str) -> list[AxiomSchema]:
    return [s for k, s in SCHEMAS.items() if k.startswith(logic.upper() + ".")]


def instantiate(schema: AxiomSchema | str, subst: Mapping[str, Formula]) -> Formula:
    """Replace the schema's metavariables simultaneously."""
    if isinstance(schema, str):
        schema = SCHEMAS[schema]
    missing = [m for m in schema.metavariables if m not in subst]
    if missing:
        raise ProofError(f"{schema.id}: no substitution for metavariable {missing[0]}")
    return substitute(schema.template, {METAVARS[m]: subst[m] for m in schema.metavariables})


def axiom_instances(schema: AxiomSchema, pool: Sequence[Formula]) -> list[Formula]:
    """Every instance with metavariables drawn (independently) from ``pool``."""
    ms = schema.metavariables
    return [instantiate(schema, dict(zip(ms, combo))) for combo in itertools.product(pool, repeat=len(ms))]


# -- scripts ----------------------------------------------------------------


@dataclass(frozen=True)
class Axiom:
    id: str
    subst: Mapping[str, Formula]


@dataclass(frozen=True)
class Hypothesis:
    index: int


@dataclass(frozen=True)
class ModusPonens:
    minor: int  # 1-based step holding A
    major: int  # 1-based step holding A -> B


Justification = Union[Axiom, Hypothesis, ModusPonens]


@dataclass(frozen=True)
class Step:
    formula: Formula
    justification: Justification


@dataclass
class ProofScript:
    logic: str
    steps: list[Step]
    gamma: list[Formula] = field(default_factory=list)
    conclusion: Formula | None = None


@dataclass(frozen=True)
class ProofVerdict:
    accepted: bool
    step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.accepted


def check_proof(script: ProofScript) -> ProofVerdict:
    """Accept iff each step is an axiom instance, a hypothesis or a correct detachment."""
    logic = script.logic.upper()
    if logic not in DETACHMENT:
        return ProofVerdict(False, None, f"unknown logic {script.logic!r}")
    if not script.steps:
        return ProofVerdict(False, None, "empty proof")
    expanded = []
    for k, step in enumerate(script.steps, 1):
        f = expand(step.formula)
        j = step.justification
        if isinstance(j, Axiom):
            sid = j.id if "." in j.id else f"{logic}.{j.id}"
            if not sid.startswith(logic + "."):
                return ProofVerdict(False, k, f"{sid} is not an axiom of {logic}")
            if sid not in SCHEMAS:
                return ProofVerdict(False, k, f"unknown axiom {sid}")
            try:
                inst = instantiate(SCHEMAS[sid], j.subst)
            except ProofError as e:
                return ProofVerdict(False, k, str(e))
            if expand(inst) != f:
                return ProofVerdict(False, k, f"not an instance of {sid}: expected {render(inst)}")
        elif isinstance(j, Hypothesis):
            if not 0 <= j.index < len(script.gamma):
                return ProofVerdict(False, k, f"no hypothesis {j.index}")
            if expand(script.gamma[j.index]) != f:
                return ProofVerdict(False, k, f"formula differs from hypothesis {j.index}")
        elif isinstance(j, ModusPonens):
            for ref in (j.minor, j.major):
                if not 1 <= ref < k:
                    return ProofVerdict(False, k, f"modus ponens cites step {ref}, which is not earlier")
            minor = script.steps[j.minor - 1].formula
            wanted = expand(Sugar(DETACHMENT[logic], (minor, step.formula)))
            if expanded[j.major - 1] != wanted:
                shape = render(Sugar(DETACHMENT[logic], (minor, step.formula)))
                return ProofVerdict(False, k, f"step {j.major} is not of the form {shape}")
        else:
            return ProofVerdict(False, k, f"bad justification {j!r}")
        expanded.append(f)
    if script.conclusion is not None and expand(script.conclusion) != expanded[-1]:
        return ProofVerdict(False, len(script.steps), "last step is not the claimed conclusion")
    return ProofVerdict(True)


# -- text format ------------------------------------------------------------

_STEP_RE = re.compile(r"^\s*(\d+)\s*\.\s*(.*?)\s*;\s*(.*)$")
_SUBST_RE = re.compile(r"(?:^|\s)([ABC])\s*=(?!0=)")


def _parse_subst(text: str) -> dict[str, Formula]:
    marks = list(_SUBST_RE.finditer(text))
    if marks and text[: marks[0].start()].strip():
        raise ProofError(f"unexpected text before substitution: {text!r}")
    out = {}
    for m, nxt in zip(marks, marks[1:] + [None]):
        body = text[m.end() : nxt.start() if nxt else len(text)]
        out[m.group(1)] = parse(body.strip())
    return out


def parse_script(text: str) -> ProofScript:
    logic = None
    gamma: list[Formula] = []
    conclusion = None
    steps: list[Step] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("logic:"):
                logic = line.split(":", 1)[1].strip().upper()
            elif line.startswith("gamma:"):
                gamma.append(parse(line.split(":", 1)[1]))
            elif line.startswith("conclusion:"):
                conclusion = parse(line.split(":", 1)[1])
            else:
                m = _STEP_RE.match(line)
                if not m:
                    raise ProofError("expected 'k. <formula> ; <justification>'")
                num, ftext, jtext = int(m.group(1)), m.group(2), m.group(3).strip()
                if num != len(steps) + 1:
                    raise ProofError(f"steps must be numbered consecutively, expected {len(steps) + 1}")
                kind, _, rest = jtext.partition(" ")
                if kind == "axiom":
                    sid, _, subst = rest.strip().partition(" ")
                    just = Axiom(sid, _parse_subst(subst))
                elif kind == "hyp":
                    just = Hypothesis(int(rest))
                elif kind == "mp":
                    i, j = rest.split()
                    just = ModusPonens(int(i), int(j))
                else:
                    raise ProofError(f"unknown justification {kind!r}")
                steps.append(Step(parse(ftext), just))
        except (FormulaSyntaxError, ValueError) as e:
            raise ProofError(f"line {lineno}: {e}") from e
    if logic is None:
        raise ProofError("missing 'logic:' header")
    return ProofScript(logic, steps, gamma, conclusion)


def format_script(script: ProofScript) -> str:
    lines = [f"logic: {script.logic}"]
    lines += [f"gamma: {render(g)}" for g in script.gamma]
    if script.conclusion is not None:
        lines.append(f"conclusion: {render(script.conclusion)}")
    for k, s in enumerate(script.steps, 1):
        j = s.justification
        if isinstance(j, Axiom):
            subst = " ".join(f"{m}=({render(f)})" for m, f in sorted(j.subst.items()))
            jt = f"axiom {j.id} {subst}"
        elif isinstance(j, Hypothesis):
            jt = f"hyp {j.index}"
        else:
            jt = f"mp {j.minor} {j.major}"
        lines.append(f"{k}. {render(s.formula)} ; {jt}")
    return "\n".join(lines) + "\n"


# -- macros -----------------------------------------------------------------


def transitivity_steps(ab: int, bc: int, a: Formula, b: Formula, c: Formula, first: int) -> list[Step]:
    """Steps deriving ``a = c`` from earlier steps ``ab`` (``a = b``) and ``bc`` (``b = c``).

    Uses QL.A2 once, QL.A14 twice and detachment six times.  ``first`` is the
    number the first emitted step will get.
    """
    x, z = equiv(a, b), equiv(b, c)
    y = imp(0, z, equiv(a, c))
    n = first
    return [
        Step(imp(0, x, y), Axiom("QL.A2", {"A": a, "B": b, "C": c})),  # n
        Step(imp(3, imp(0, x, y), imp(3, x, imp(3, x, y))), Axiom("QL.A14", {"A": x, "B": y})),  # n+1
        Step(imp(3, x, imp(3, x, y)), ModusPonens(n, n + 1)),  # n+2
        Step(imp(3, x, y), ModusPonens(ab, n + 2)),  # n+3
        Step(y, ModusPonens(ab, n + 3)),  # n+4
        Step(
            imp(3, y, imp(3, z, imp(3, z, equiv(a, c)))),
            Axiom("QL.A14", {"A": z, "B": equiv(a, c)}),
        ),  # n+5
        Step(imp(3, z, imp(3, z, equiv(a, c))), ModusPonens(n + 4, n + 5)),  # n+6
        Step(imp(3, z, equiv(a, c)), ModusPonens(bc, n + 6)),  # n+7
        Step(equiv(a, c), ModusPonens(bc, n + 7)),  # n+8
    ]


def transitivity_script(a: Formula, b: Formula, c: Formula) -> ProofScript:
    """``a = b, b = c  |-  a = c`` in QL."""
    steps = [Step(equiv(a, b), Hypothesis(0)), Step(equiv(b, c), Hypothesis(1))]
    steps += transitivity_steps(1, 2, a, b, c, first=3)
    return ProofScript("QL", steps, [equiv(a, b), equiv(b, c)], equiv(a, c))


def cl_identity_script(a: Formula) -> ProofScript:
    """``|- a ->0 a`` in CL from A1, A2, A4."""
    aa = a | a
    steps = [
        Step(imp(0, a, aa), Axiom("CL.A2", {"A": a, "B": a})),
        Step(imp(0, aa, a), Axiom("CL.A1", {"A": a})),
        Step(
            imp(0, imp(0, aa, a), imp(0, ~a | aa, ~a | a)),
            Axiom("CL.A4", {"A": aa, "B": a, "C": ~a}),
        ),
        Step(imp(0, imp(0, a, aa), imp(0, a, a)), ModusPonens(2, 3)),
        Step(imp(0, a, a), ModusPonens(1, 4)),
    ]
    return ProofScript("CL", steps, [], imp(0, a, a))


def detachment_script(a: Formula, b: Formula) -> ProofScript:
    """``a, a ->3 b  |-  b`` in QL."""
    steps = [
        Step(a, Hypothesis(0)),
        Step(imp(3, a, b), Hypothesis(1)),
        Step(b, ModusPonens(1, 2)),
    ]
    return ProofScript("QL", steps, [a, imp(3, a, b)], b)


# -- equational simulation --------------------------------------------------


@dataclass(frozen=True)
class EquationalStep:
    lhs: Formula
    rhs: Formula
    justification: str = ""

    def __post_init__(self):
        for t in (self.lhs, self.rhs):
            if not _is_lattice_term(t):
                raise ProofError(f"not a lattice term (only ', v, ^ allowed): {render(t)}")


def _is_lattice_term(t: Formula) -> bool:
    from orthologic.formula import subformulas

    return all(not isinstance(g, Sugar) or g.connective is ConnectiveId.CONJ for g in subformulas(t))


def equation(text: str, justification: str = "") -> EquationalStep:
    """Parse ``"t == s"`` where both sides use ``~ v ^`` only."""
    lhs, sep, rhs = text.partition("==")
    if not sep:
        raise ProofError("an equation needs '=='")
    return EquationalStep(parse(lhs.strip()), parse(rhs.strip()), justification)


@dataclass
class SimulatedStep:
    step: EquationalStep
    mapped: Formula
    mapped_valid_everywhere: bool
    mapped_failures: list[str]
    unmapped_holds_in_O6: bool
    unmapped_O6_witness: list[str] | None


@dataclass
class SimulationReport:
    target: str
    steps: list[SimulatedStep]
    models: list[str]

    @property
    def all_mapped_valid(self) -> bool:
        return all(s.mapped_valid_everywhere for s in self.steps)

    @property
    def O6_separates(self) -> bool:
        """O6 satisfies every mapped equation but breaks some unmapped one."""
        return self.all_mapped_valid and any(not s.unmapped_holds_in_O6 for s in self.steps)


def simulate_equational(proof: Sequence[EquationalStep], target_class: str, entries) -> SimulationReport:
    """Map each ``t = s`` to ``t == s = 1`` (OML) or ``t =0= s = 1`` (BA) and check it.

    Mapped formulas are checked in every WOML (resp. WDOL) entry; the plain
    equality is checked in O6.
    """
    from orthologic.lattice import O6
    from orthologic.semantics import is_valid, term_vectors

    target = target_class.upper()
    if target not in ("OML", "BA"):
        raise ProofError("target_class must be OML or BA")
    mapper = equiv if target == "OML" else equiv0
    models = [e for e in entries if (e.flags.woml if target == "OML" else e.flags.wdol)]
    hexagon = O6()
    out = []
    for st in proof:
        mapped = mapper(st.lhs, st.rhs)
        failures = [e.name for e in models if not is_valid(e.lattice, mapped).valid]
        vs = tuple(sorted(set(variables(st.lhs)) | set(variables(st.rhs))))
        lv, rv = term_vectors(hexagon, [st.lhs, st.rhs], vs)
        diff = [i for i in range(len(lv)) if lv[i] != rv[i]]
        witness = None
        if diff:
            from orthologic.semantics import _counterexample

            val = _counterexample(hexagon, vs, diff[0])
            witness = val.describe() + [
                f"lhs={hexagon.name(int(lv[diff[0]]))}",
                f"rhs={hexagon.name(int(rv[diff[0]]))}",
            ]
        out.append(SimulatedStep(st, mapped, not failures, failures, not diff, witness))
    return SimulationReport(target, out, [e.name for e in models])


ORTHOMODULAR_PROOF = [
    equation("p0 v p1 == p1 v p0", "commutativity"),
    equation("p0 == ~~p0", "involution"),
    equation("p0 v (~p0 ^ (p0 v p1)) == p0 v p1", "orthomodularity"),
]
DISTRIBUTIVE_PROOF = [
    equation("p0 ^ p1 == ~(~p0 v ~p1)", "De Morgan"),
    equation("p0 ^ (p1 v p2) == (p0 ^ p1) v (p0 ^ p2)", "distributivity"),
]
IDENTITY_PROOF = [equation("p0 == p0", "identity")]
