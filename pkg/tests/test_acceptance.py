"""Acceptance gate.  Prints one PASS/FAIL line per criterion.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
"""

import sys
from pathlib import Path

import pytest

from orthologic import catalog
from orthologic.formula import parse
from orthologic.lattice import MO2, O6, classify, find_O6_subalgebra, implication_characterizes_order, two
from orthologic.lindenbaum import build_congruence, build_universe, check_laws, quotient
from orthologic.proofs import (
    DISTRIBUTIVE_PROOF,
    ORTHOMODULAR_PROOF,
    check_proof,
    parse_script,
    simulate_equational,
)
from orthologic.semantics import behaviour_classes, evaluate, is_valid, oml_valid, soundness_suite, tautology
from orthologic.semantics import valuation_from_names

PROOFS = Path(__file__).resolve().parent.parent / "data" / "proofs"
# the orthomodularity instance is first defined in the depth-5 quotient
LINDENBAUM_DEPTH = 5

_cache = {}


def _catalog(n):
    if n not in _cache:
        _cache[n] = catalog.enumerate(n)
    return _cache[n]


def c1():
    f = classify(O6())
    ok = (f.ol, f.woml, f.wdol, f.oml, f.boolean) == (True, True, True, False, False)
    return ok, f.as_line()


def c2():
    L = O6()
    v = valuation_from_names(L, p0="y", p1="x")
    lhs = L.name(evaluate(v, parse("p0 ^ (p1 v ~p1)")))
    rhs = L.name(evaluate(v, parse("(p0 ^ p1) v (p0 ^ ~p1)")))
    return (lhs, rhs) == ("y", "x"), f"y^(xvx')={lhs}, (y^x)v(y^x')={rhs}"


def c3():
    rep = soundness_suite("QL", _catalog(8))
    womls = sorted(e.name for e in _catalog(8) if e.flags.woml)
    ok = rep.ok and sorted(rep.checked) == womls and not rep.violations and not rep.rule_failures
    return ok, f"{len(rep.checked)} WOMLs, {rep.instances_per_entry} instances each, {len(rep.violations)} violations"


def c4():
    rep = soundness_suite("CL", _catalog(8))
    wdols = sorted(e.name for e in _catalog(8) if e.flags.wdol)
    sound = rep.ok and sorted(rep.checked) == wdols
    L = O6()
    classes = behaviour_classes([two(), L], 3, 4)
    mismatches = [f for f, _ in classes if tautology(f) != is_valid(L, f).valid]
    detail = f"CL sound in {len(rep.checked)} WDOLs; {len(classes)} classes (k=3, d=4), {len(mismatches)} mismatches"
    return sound and not mismatches, detail


PAIRS = {
    "QL": ("orthomodularity", "p0 v p1", "p0 v (~p0 ^ (p0 v p1))"),
    "CL": ("distributivity", "p0 ^ (p1 v ~p1)", "(p0 ^ p1) v (p0 ^ ~p1)"),
}


def c5():
    U = build_universe(2, LINDENBAUM_DEPTH)
    notes, ok = [], True
    for logic, (law, a, b) in PAIRS.items():
        a, b = parse(a), parse(b)
        fine = quotient(U, build_congruence("refined", logic, U))
        coarse = quotient(U, build_congruence("standard", logic, U))
        rf, rc = check_laws(fine), check_laws(coarse)
        separated = fine.class_of(a) != fine.class_of(b)
        merged = coarse.class_of(a) == coarse.class_of(b)
        ok &= separated and merged and rf.status(law) == "fails" and rc.status(law) == "holds"
        notes.append(
            f"{logic} refined {'separates' if separated else 'merges'} the pair, {law} {rf.status(law)}; "
            f"standard {'merges' if merged else 'separates'}, {law} {rc.status(law)}"
        )
    return ok, "; ".join(notes)


def c6():
    cat = _catalog(8)
    om = simulate_equational(ORTHOMODULAR_PROOF, "OML", cat)
    ba = simulate_equational(DISTRIBUTIVE_PROOF, "BA", cat)
    ok = all(r.all_mapped_valid and r.O6_separates and "O6" in r.models for r in (om, ba))
    return ok, f"OML over {len(om.models)} WOMLs, BA over {len(ba.models)} WDOLs"


def c7():
    bad = [e.name for e in _catalog(8) if not e.flags.oml and find_O6_subalgebra(e.lattice) is None]
    n = sum(not e.flags.oml for e in _catalog(8))
    return not bad, f"{n} non-OML entries, {len(bad)} without an O6 subalgebra"


def c8():
    cat = _catalog(10)
    bad = [
        e.name
        for e in cat
        if implication_characterizes_order(e.lattice, 1) != e.flags.oml
        or implication_characterizes_order(e.lattice, 0) != e.flags.boolean
    ]
    return not bad, f"{len(cat)} entries, {len(bad)} disagreements"


def c9():
    omls = [e.lattice for e in _catalog(8) if e.flags.oml]
    classes = behaviour_classes([MO2(), two(), *omls], 2, 4)
    bad = [f for f, _ in classes if oml_valid(f) != all(is_valid(L, f).valid for L in omls)]
    return not bad, f"{len(classes)} classes over {len(omls)} OMLs, {len(bad)} disagreements"


def c10():
    v = {p.stem: check_proof(parse_script(p.read_text())) for p in PROOFS.glob("*.prf")}
    ok = (
        v["transitivity"].accepted
        and v["cl_identity"].accepted
        and v["detachment"].accepted
        and (v["detachment_wrong_arrow"].accepted, v["detachment_wrong_arrow"].step) == (False, 3)
        and (v["cl_identity_swapped"].accepted, v["cl_identity_swapped"].step) == (False, 5)
    )
    return ok, ", ".join(f"{k}: {'accepted' if r.accepted else f'rejected at {r.step}'}" for k, r in sorted(v.items()))


CRITERIA = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10]


def _line(i, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {i}: {detail}"


@pytest.mark.slow
@pytest.mark.parametrize("i", range(1, 11))
def test_criterion(i, capsys):
    ok, detail = CRITERIA[i - 1]()
    with capsys.disabled():
        print("\n" + _line(i, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(i, *fn()) for i, fn in enumerate(CRITERIA, 1)]
    for r in results:
        print(_line(*r))
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
