import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthologic.formula import Neg, Or, Var, depth, equiv, expand, parse, primitive_formulas, variables
from orthologic.lattice import MO2, O6, boolean, two
from orthologic.proofs import instantiate
from orthologic.semantics import (
    TooManyVariables,
    UnassignedVariable,
    Valuation,
    behaviour_classes,
    evaluate,
    is_consequence,
    is_valid,
    oml_valid,
    soundness_suite,
    tautology,
    term_vectors,
    valuation_from_names,
)
from strategies import formulas, lattices, valuations


def naive_value(L, assignment, f):
    f = expand(f)
    if isinstance(f, Var):
        return assignment[f.index]
    if isinstance(f, Neg):
        return L.comp(naive_value(L, assignment, f.child))
    return L.join(naive_value(L, assignment, f.left), naive_value(L, assignment, f.right))


def naive_first_failure(L, gamma, f):
    vs = sorted({v for g in [*gamma, f] for v in variables(g)})
    for values in itertools.product(L.elements, repeat=len(vs)):
        a = dict(zip(vs, values))
        if all(naive_value(L, a, g) == L.one for g in gamma) and naive_value(L, a, f) != L.one:
            return a
    return None


class TestEvaluate:
    def test_orthomodular_instance_in_o6(self):
        v = valuation_from_names(O6(), p0="x", p1="y")
        assert O6().name(evaluate(v, parse("p0 v (~p0 ^ (p0 v p1))"))) == "x"

    def test_excluded_middle(self):
        for L in (two(), O6(), MO2()):
            for a in L.elements:
                assert evaluate(Valuation(L, {0: a}), parse("p0 v ~p0")) == L.one

    def test_distributivity_witness(self):
        L = O6()
        v = valuation_from_names(L, p0="y", p1="x")
        assert L.name(evaluate(v, parse("p0 ^ (p1 v ~p1)"))) == "y"
        assert L.name(evaluate(v, parse("(p0 ^ p1) v (p0 ^ ~p1)"))) == "x"

    def test_unassigned(self):
        with pytest.raises(UnassignedVariable):
            evaluate(Valuation(two(), {0: 1}), parse("p0 v p1"))

    @given(formulas(max_leaves=8), st.data())
    @settings(max_examples=150)
    def test_matches_naive(self, f, data):
        L = data.draw(lattices())
        a = data.draw(valuations(L))
        assert evaluate(Valuation(L, a), f) == naive_value(L, a, f)


class TestValidity:
    def test_a11_instance_valid_in_o6(self):
        assert is_valid(O6(), parse("p0 v (~p0 ^ (p0 v p1)) = p0 v p1"))

    def test_equation_valid_but_sides_differ(self):
        L = O6()
        assert is_valid(L, parse("(p0 v (~p0 ^ (p0 v p1))) = (p0 v p1)"))
        v = valuation_from_names(L, p0="x", p1="y")
        assert evaluate(v, parse("p0 v (~p0 ^ (p0 v p1))")) != evaluate(v, parse("p0 v p1"))

    def test_counterexample_in_two(self):
        verdict = is_valid(two(), parse("p0"))
        assert not verdict.valid
        assert verdict.describe() == ["p0=0", "value=0"]

    @given(formulas(max_vars=2, max_leaves=6), lattices())
    @settings(max_examples=150)
    def test_least_counterexample(self, f, L):
        verdict = is_valid(L, f)
        naive = naive_first_failure(L, [], f)
        assert verdict.valid == (naive is None)
        if naive is not None:
            assert dict(verdict.counterexample.assignment) == naive

    @given(formulas(max_vars=2, max_leaves=5), formulas(max_vars=2, max_leaves=5), lattices())
    @settings(max_examples=100)
    def test_consequence_matches_naive(self, g, f, L):
        verdict = is_consequence(L, [g], f)
        naive = naive_first_failure(L, [g], f)
        assert verdict.valid == (naive is None)
        if naive is not None:
            assert dict(verdict.counterexample.assignment) == naive

    def test_modus_ponens_in_womls(self, cat8):
        a, b = Var(0), Var(1)
        for e in cat8:
            if e.flags.woml:
                assert is_consequence(e.lattice, [a, parse("p0 -3> p1")], b), e.name

    def test_consequence_examples(self):
        assert is_consequence(O6(), [Var(0)], parse("p0 v p1"))
        f = parse("p0 v ~p0 -1> p1")
        assert bool(is_consequence(MO2(), [], f)) == bool(is_valid(MO2(), f))

    @given(formulas(max_vars=2, max_leaves=6))
    def test_validity_ignores_absent_variables(self, f):
        padded = Or(f, Neg(Or(Var(5), Neg(Var(5)))))
        for L in (two(), O6()):
            assert bool(is_valid(L, f)) == bool(is_valid(L, padded))


class TestTautology:
    def test_examples(self):
        assert tautology(parse("p0 v p1 -0> p1 v p0"))
        assert not tautology(parse("p0"))

    def test_agrees_with_two_valued_validity(self):
        for f in primitive_formulas(2, 3):
            assert tautology(f) == is_valid(two(), f).valid

    def test_cl_axioms(self):
        for sid in ("CL.A1", "CL.A2", "CL.A3", "CL.A4"):
            assert tautology(instantiate(sid, {"A": Var(0), "B": Var(1), "C": Var(2)})), sid


class TestOmlValid:
    def test_a11(self):
        assert oml_valid(parse("p0 v p1 = p0 v (~p0 ^ (p0 v p1))"))

    def test_not_valid(self):
        assert not oml_valid(parse("p0 = p1"))

    def test_variable_limit(self):
        with pytest.raises(TooManyVariables):
            oml_valid(parse("(p0 v p1) v p2"))

    def test_o6_distinguishes_sides(self):
        f = equiv(parse("p0 v p1"), parse("p0 v (~p0 ^ (p0 v p1))"))
        assert oml_valid(f) and is_valid(O6(), f)

    def test_agrees_with_catalog_omls(self, cat8):
        omls = [e.lattice for e in cat8 if e.flags.oml]
        for f, _ in behaviour_classes([MO2(), two(), *omls], 2, 4):
            everywhere = all(is_valid(L, f).valid for L in omls)
            assert oml_valid(f) == everywhere
            if oml_valid(f):
                assert all(is_valid(L, f).valid for L in omls)

    def test_ql_axioms_in_two_variables(self):
        from orthologic.proofs import schemas_for

        for s in schemas_for("QL"):
            if len(s.metavariables) <= 2:
                assert oml_valid(instantiate(s, {"A": Var(0), "B": Var(1)})), s.id


class TestBehaviourClasses:
    def test_representatives_cover_small_universe(self):
        reps = behaviour_classes([two(), O6()], 2, 2)
        keys = {_key(f) for f, _ in reps}
        assert len(keys) == len(reps)
        assert {_key(f) for f in primitive_formulas(2, 2)} == keys

    def test_least_depth(self):
        reps = behaviour_classes([two(), O6()], 2, 3)
        by_key = {_key(f): d for f, d in reps}
        for f in primitive_formulas(2, 3):
            assert by_key[_key(f)] <= depth(f)


def _key(f):
    return tuple(tuple(v) for L in (two(), O6()) for v in term_vectors(L, [f], (0, 1)))


class TestSoundness:
    def test_ql(self, cat8):
        rep = soundness_suite("QL", cat8)
        assert rep.ok and "O6" in rep.checked
        assert rep.instances_per_entry > 0

    def test_cl(self, cat8):
        rep = soundness_suite("CL", cat8)
        assert rep.ok and "O6" in rep.checked

    def test_outside_class_failures_reported(self, cat8):
        rep = soundness_suite("QL", cat8)
        for name in rep.skipped:
            assert name in rep.outside_class_failures

    def test_monotone_classes(self, cat8):
        womls = [e.lattice for e in cat8 if e.flags.woml]
        omls = [e.lattice for e in cat8 if e.flags.oml]
        for f in primitive_formulas(2, 2):
            if all(is_valid(L, f).valid for L in womls):
                assert all(is_valid(L, f).valid for L in omls)


def test_hexagon_completeness_small():
    for f in primitive_formulas(2, 3):
        assert tautology(f) == is_valid(O6(), f).valid
    for f, _ in behaviour_classes([two(), O6()], 3, 3):
        assert tautology(f) == is_valid(O6(), f).valid


def test_boolean_powers_agree_with_two():
    for f in primitive_formulas(2, 2):
        assert is_valid(boolean(3), f).valid == tautology(f)
