import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthologic.formula import (
    ConnectiveId,
    FormulaSyntaxError,
    Neg,
    Or,
    Sugar,
    Var,
    conj,
    count_primitive_formulas,
    depth,
    equiv,
    expand,
    imp,
    is_primitive,
    parse,
    primitive_formulas,
    render,
    render_full,
    subformulas,
    substitute,
    variables,
)
from strategies import formulas, lattices, primitive_formulas as prim_st, valuations

p0, p1, p2, p3, p4 = (Var(i) for i in range(5))
C = ConnectiveId


class TestParse:
    def test_kalmbach_arrow(self):
        assert parse("p0 -3> p1") == Sugar(C.IMP3, (p0, p1))

    def test_primitive_input(self):
        assert parse("~p0 v p0") == Or(Neg(p0), p0)

    def test_or_binds_tighter_than_equiv(self):
        assert parse("p0 = p1 v p2") == Sugar(C.EQUIV_Q, (p0, Or(p1, p2)))

    def test_full_precedence_ladder(self):
        got = parse("p0 -0> p1 = p2 v p3 ^ ~p4")
        want = imp(0, p0, equiv(p1, Or(p2, conj(p3, Neg(p4)))))
        assert got == want

    def test_unicode_aliases(self):
        assert parse("p0 →₁ ¬p1 ∨ p2 ∧ p0") == parse("p0 -1> ~p1 v p2 ^ p0")
        assert parse("p0 ≡₀ p1") == Sugar(C.EQUIV_0, (p0, p1))
        assert parse("p0 ≡ p1") == Sugar(C.EQUIV_Q, (p0, p1))

    def test_equiv0_token_not_split(self):
        assert parse("p0 =0= p1").connective is C.EQUIV_0

    @pytest.mark.parametrize(
        "text",
        ["p0 -1> p1 -1> p2", "p0 v p1 v p2", "p0 ^ p1 ^ p2", "p0 = p1 = p2", "p0 -0> p1 -3> p2"],
    )
    def test_equal_precedence_chains_rejected(self, text):
        with pytest.raises(FormulaSyntaxError, match="parentheses"):
            parse(text)

    @pytest.mark.parametrize("text", ["", "p0 v", "(p0", "p0)", "v p1", "p0 & p1", "p0 -7> p1", "q1"])
    def test_syntax_errors_have_position(self, text):
        with pytest.raises(FormulaSyntaxError) as err:
            parse(text)
        assert err.value.position >= 0

    def test_metavariables(self):
        assert parse("A -0> B v C", metavars={"A": 0, "B": 1, "C": 2}) == imp(0, p0, Or(p1, p2))
        with pytest.raises(FormulaSyntaxError):
            parse("A v B")


class TestExpand:
    def test_sasaki(self):
        assert expand(imp(1, p0, p1)) == Or(Neg(p0), Neg(Or(Neg(p0), Neg(p1))))

    def test_dishkant_keeps_double_negations(self):
        assert expand(imp(2, p0, p1)) == expand(imp(1, Neg(p1), Neg(p0)))
        assert Neg(Neg(p1)) in set(subformulas(expand(imp(2, p0, p1))))

    def test_kalmbach_left_grouping(self):
        want = Or(Or(conj(Neg(p0), p1), conj(Neg(p0), Neg(p1))), conj(p0, Or(Neg(p0), p1)))
        assert expand(imp(3, p0, p1)) == expand(want)

    def test_non_tollens_via_kalmbach(self):
        assert expand(imp(4, p0, p1)) == expand(imp(3, Neg(p1), Neg(p0)))

    @given(formulas())
    def test_primitive_and_idempotent(self, f):
        g = expand(f)
        assert is_primitive(g)
        assert expand(g) == g

    @given(formulas(max_leaves=8), st.data())
    @settings(max_examples=200)
    def test_sugar_matches_lattice_polynomials(self, f, data):
        L = data.draw(lattices())
        val = data.draw(valuations(L))
        assert _direct_value(L, val, f) == _direct_value(L, val, expand(f))


_DEPTH3 = set(primitive_formulas(2, 3))


def _direct_value(L, val, f):
    """Evaluate sugar through the lattice-side polynomials, not through expand."""
    if isinstance(f, Var):
        return val[f.index]
    if isinstance(f, Neg):
        return L.comp(_direct_value(L, val, f.child))
    if isinstance(f, Or):
        return L.join(_direct_value(L, val, f.left), _direct_value(L, val, f.right))
    a, b = (_direct_value(L, val, o) for o in f.operands)
    c = f.connective
    if c is C.CONJ:
        return L.meet(a, b)
    if c is C.EQUIV_Q:
        return int(L.equiv_q(a, b))
    if c is C.EQUIV_0:
        return int(L.equiv_0(a, b))
    return int(L.imp(int(c.value[1]), a, b))


class TestRender:
    def test_examples(self):
        assert render(Or(Neg(p0), p0)) == "~p0 v p0"
        assert render(Sugar(C.IMP1, (p0, p1))) == "p0 -1> p1"

    def test_minimal_parentheses(self):
        assert render(parse("p0 v (p1 ^ p2)")) == "p0 v p1 ^ p2"
        assert render(parse("(p0 v p1) ^ p2")) == "(p0 v p1) ^ p2"
        assert render(parse("~(p0 v p1)")) == "~(p0 v p1)"
        assert render(parse("(p0 v p1) v p2")) == "(p0 v p1) v p2"

    def test_unicode(self):
        assert render(parse("p0 -3> ~p1"), unicode=True) == "p0 →₃ ¬p1"

    @given(formulas())
    @settings(max_examples=1000)
    def test_round_trip(self, f):
        assert parse(render(f)) == f
        assert parse(render(f, unicode=True)) == f

    @given(formulas())
    def test_full_parentheses_agree(self, f):
        assert parse(render_full(f)) == f


class TestStructure:
    def test_variables(self):
        assert variables(Or(p0, p0)) == (0,)
        assert variables(parse("p3 v ~p1 -1> p3")) == (1, 3)

    def test_depth(self):
        assert depth(p0) == 0
        assert depth(Neg(Neg(p0))) == 2
        assert depth(Or(Neg(p0), p1)) == 2

    def test_substitute_is_simultaneous(self):
        assert substitute(Or(p0, p1), {0: p1, 1: p0}) == Or(p1, p0)

    @pytest.mark.parametrize("k,d", [(1, 0), (1, 1), (1, 2), (2, 2), (2, 3)])
    def test_enumeration(self, k, d):
        fs = primitive_formulas(k, d)
        assert len(fs) == count_primitive_formulas(k, d) == len(set(fs))
        assert all(depth(f) <= d and set(variables(f)) <= set(range(k)) for f in fs)
        members = set(fs)
        assert all(g in members for f in fs for g in subformulas(f))

    def test_enumeration_one_variable_depth_one(self):
        assert set(primitive_formulas(1, 1)) == {p0, Neg(p0), Or(p0, p0)}

    @given(prim_st(max_vars=2, max_leaves=5))
    def test_enumeration_is_complete(self, f):
        if depth(f) <= 3:
            assert f in _DEPTH3
