"""Well-formed formulas over the primitive connectives ``~`` and ``v``.

Derived connectives (conjunction, the six implications, the two
equivalences) are kept as :class:`Sugar` nodes after parsing and are
rewritten into primitives by :func:`expand`.

ASCII surface syntax::

    p0 p1 ...      variables
    ~              negation          (strongest)
    ^              conjunction
    v              disjunction
    =  =0=         quantum / classical equivalence
    -0> ... -5>    implications      (weakest)

Unicode aliases ``¬ ∧ ∨ ≡ ≡₀ →₀..→₅`` are accepted by the parser.  Two
binary connectives of the same precedence level may not be chained
without parentheses.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Mapping


class ConnectiveId(enum.Enum):
    CONJ = "^"
    IMP0 = "-0>"
    IMP1 = "-1>"
    IMP2 = "-2>"
    IMP3 = "-3>"
    IMP4 = "-4>"
    IMP5 = "-5>"
    EQUIV_Q = "="
    EQUIV_0 = "=0="

    @property
    def arity(self) -> int:
        return 2

    @property
    def level(self) -> int:
        if self is ConnectiveId.CONJ:
            return AND
        if self in (ConnectiveId.EQUIV_Q, ConnectiveId.EQUIV_0):
            return EQUIV
        return IMP

    @property
    def unicode(self) -> str:
        return _UNICODE_SYMBOL[self]


# precedence levels, weakest first
IMP, EQUIV, OR, AND, NOT, ATOM = range(6)

IMPLICATIONS = (
    ConnectiveId.IMP0,
    ConnectiveId.IMP1,
    ConnectiveId.IMP2,
    ConnectiveId.IMP3,
    ConnectiveId.IMP4,
    ConnectiveId.IMP5,
)

_SUBSCRIPTS = "₀₁₂₃₄₅"
_UNICODE_SYMBOL = {
    ConnectiveId.CONJ: "∧",
    ConnectiveId.EQUIV_Q: "≡",
    ConnectiveId.EQUIV_0: "≡₀",
    **{c: "→" + _SUBSCRIPTS[i] for i, c in enumerate(IMPLICATIONS)},
}


class Formula:
    """Base class of the formula AST; nodes are immutable and hashable."""

    __slots__ = ()

    def __invert__(self) -> Formula:
        return Neg(self)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __and__(self, other: Formula) -> Formula:
        return Sugar(ConnectiveId.CONJ, (self, other))

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Var(Formula):
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"variable index must be non-negative, got {self.index}")

    def __repr__(self):
        return f"p{self.index}"


@dataclass(frozen=True, repr=False)
class Neg(Formula):
    child: Formula

    def __repr__(self):
        return f"Neg({self.child!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Sugar(Formula):
    connective: ConnectiveId
    operands: tuple[Formula, ...]

    def __post_init__(self):
        if not isinstance(self.operands, tuple):
            object.__setattr__(self, "operands", tuple(self.operands))
        if len(self.operands) != self.connective.arity:
            raise ValueError(
                f"{self.connective.name} takes {self.connective.arity} operands, "
                f"got {len(self.operands)}"
            )

    def __repr__(self):
        ops = ", ".join(repr(o) for o in self.operands)
        return f"Sugar({self.connective.name}, [{ops}])"


# -- constructors -----------------------------------------------------------


def conj(a: Formula, b: Formula) -> Sugar:
    return Sugar(ConnectiveId.CONJ, (a, b))


def imp(i: int, a: Formula, b: Formula) -> Sugar:
    return Sugar(IMPLICATIONS[i], (a, b))


def equiv(a: Formula, b: Formula) -> Sugar:
    return Sugar(ConnectiveId.EQUIV_Q, (a, b))


def equiv0(a: Formula, b: Formula) -> Sugar:
    return Sugar(ConnectiveId.EQUIV_0, (a, b))


# -- expansion --------------------------------------------------------------


def _template(conn: ConnectiveId, a: Formula, b: Formula) -> Formula:
    # One rewrite step; the result may still contain sugar.
    C = ConnectiveId
    if conn is C.CONJ:
        return Neg(Or(Neg(a), Neg(b)))
    if conn is C.IMP0:
        return Or(Neg(a), b)
    if conn is C.IMP1:
        return Or(Neg(a), conj(a, b))
    if conn is C.IMP2:
        return imp(1, Neg(b), Neg(a))
    if conn is C.IMP3:
        # (~a ^ b) v (~a ^ ~b) v (a ^ (~a v b)), grouped to the left
        return Or(Or(conj(Neg(a), b), conj(Neg(a), Neg(b))), conj(a, Or(Neg(a), b)))
    if conn is C.IMP4:
        return imp(3, Neg(b), Neg(a))
    if conn is C.IMP5:
        return Or(Or(conj(a, b), conj(Neg(a), b)), conj(Neg(a), Neg(b)))
    if conn is C.EQUIV_Q:
        return Or(conj(a, b), conj(Neg(a), Neg(b)))
    if conn is C.EQUIV_0:
        return conj(imp(0, a, b), imp(0, b, a))
    raise AssertionError(conn)


def unfold(f: Formula) -> Formula:
    """Rewrite only the outermost sugar node of ``f`` (one template step)."""
    if isinstance(f, Sugar):
        return _template(f.connective, *f.operands)
    return f


def expand(f: Formula) -> Formula:
    """Return the primitive-only (``Var``/``Neg``/``Or``) form of ``f``.

    Operands are expanded before their enclosing template is applied.  Shared
    subtrees of the input stay shared in the output.
    """
    # id-keyed; the key object is stored alongside so its id stays unique
    memo: dict[int, tuple[Formula, Formula]] = {}

    def go(g: Formula) -> Formula:
        key = id(g)
        hit = memo.get(key)
        if hit is not None:
            return hit[1]
        if isinstance(g, Var):
            out = g
        elif isinstance(g, Neg):
            c = go(g.child)
            out = g if c is g.child else Neg(c)
        elif isinstance(g, Or):
            l, r = go(g.left), go(g.right)
            out = g if (l is g.left and r is g.right) else Or(l, r)
        elif isinstance(g, Sugar):
            ops = [go(o) for o in g.operands]
            out = go(_template(g.connective, *ops))
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[key] = (g, out)
        return out

    return go(f)


def is_primitive(f: Formula) -> bool:
    return all(not isinstance(g, Sugar) for g in subformulas(f))


# -- inspection -------------------------------------------------------------


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal (with repetitions)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Neg):
            stack.append(g.child)
        elif isinstance(g, Or):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, Sugar):
            stack.extend(reversed(g.operands))


def variables(f: Formula) -> tuple[int, ...]:
    return tuple(sorted({g.index for g in subformulas(f) if isinstance(g, Var)}))


def depth(f: Formula) -> int:
    """Connective nesting depth; a variable has depth 0."""
    if isinstance(f, Var):
        return 0
    if isinstance(f, Neg):
        return 1 + depth(f.child)
    if isinstance(f, Or):
        return 1 + max(depth(f.left), depth(f.right))
    return 1 + max(depth(o) for o in f.operands)


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def substitute(f: Formula, mapping: Mapping[int, Formula]) -> Formula:
    """Simultaneously replace variables by formulas.

    Variables absent from ``mapping`` are left alone.
    """
    if isinstance(f, Var):
        return mapping.get(f.index, f)
    if isinstance(f, Neg):
        return Neg(substitute(f.child, mapping))
    if isinstance(f, Or):
        return Or(substitute(f.left, mapping), substitute(f.right, mapping))
    return Sugar(f.connective, tuple(substitute(o, mapping) for o in f.operands))


# -- parsing ----------------------------------------------------------------


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<var>p(?P<num>\d+))
  | (?P<imp>-(?P<impi>[0-5])>)
  | (?P<uimp>→(?P<uimpi>[₀-₅]))
  | (?P<eq0>=0=|≡₀)
  | (?P<eq>=|≡)
  | (?P<not>~|¬)
  | (?P<or>v|∨)
  | (?P<and>\^|∧)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<meta>[A-Z])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: object
    pos: int


def _tokenize(text: str, metavars: Mapping[str, int] | None) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unknown symbol {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind == "ws":
            pass
        elif kind == "var":
            toks.append(_Tok("var", int(m.group("num")), pos))
        elif kind == "meta":
            if not metavars or m.group() not in metavars:
                raise FormulaSyntaxError(f"unknown symbol {m.group()!r}", pos, text)
            toks.append(_Tok("var", metavars[m.group()], pos))
        elif kind == "imp":
            toks.append(_Tok("bin", IMPLICATIONS[int(m.group("impi"))], pos))
        elif kind == "uimp":
            toks.append(_Tok("bin", IMPLICATIONS[_SUBSCRIPTS.index(m.group("uimpi"))], pos))
        elif kind == "eq0":
            toks.append(_Tok("bin", ConnectiveId.EQUIV_0, pos))
        elif kind == "eq":
            toks.append(_Tok("bin", ConnectiveId.EQUIV_Q, pos))
        elif kind == "or":
            toks.append(_Tok("bin", "or", pos))
        elif kind == "and":
            toks.append(_Tok("bin", ConnectiveId.CONJ, pos))
        else:
            toks.append(_Tok(kind, None, pos))
        pos = m.end()
    toks.append(_Tok("eof", None, len(text)))
    return toks


def _level(op) -> int:
    return OR if op == "or" else op.level


class _Parser:
    def __init__(self, text: str, metavars):
        self.text = text
        self.toks = _tokenize(text, metavars)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(msg, tok.pos, self.text)

    def parse(self) -> Formula:
        if self.peek().kind == "eof":
            self.error("empty formula")
        f = self.binary(IMP)
        t = self.peek()
        if t.kind != "eof":
            self.error("unexpected " + ("')'" if t.kind == "rp" else "token"))
        return f

    def binary(self, level: int) -> Formula:
        if level == NOT:
            return self.unary()
        left = self.binary(level + 1)
        t = self.peek()
        if t.kind == "bin" and _level(t.value) == level:
            self.take()
            if self.peek().kind in ("eof", "rp", "bin"):
                self.error("binary connective is missing its right operand")
            right = self.binary(level + 1)
            nxt = self.peek()
            if nxt.kind == "bin" and _level(nxt.value) == level:
                self.error("chained connectives of equal precedence need parentheses", nxt)
            if t.value == "or":
                return Or(left, right)
            return Sugar(t.value, (left, right))
        return left

    def unary(self) -> Formula:
        t = self.peek()
        if t.kind == "not":
            self.take()
            return Neg(self.unary())
        if t.kind == "var":
            self.take()
            return Var(t.value)
        if t.kind == "lp":
            self.take()
            f = self.binary(IMP)
            if self.peek().kind != "rp":
                self.error("expected ')'")
            self.take()
            return f
        if t.kind == "bin":
            self.error("binary connective is missing its left operand")
        if t.kind == "eof":
            self.error("unexpected end of formula")
        self.error("unexpected ')'")


def parse(text: str, metavars: Mapping[str, int] | None = None) -> Formula:
    """Parse ASCII or Unicode formula text.

    ``metavars`` optionally maps single capital letters to variable indices,
    which is how axiom schemata are written (``A`` -> ``p0`` and so on).
    """
    return _Parser(text, metavars).parse()


# -- rendering --------------------------------------------------------------


def _node_level(f: Formula) -> int:
    if isinstance(f, Var):
        return ATOM
    if isinstance(f, Neg):
        return NOT
    if isinstance(f, Or):
        return OR
    return f.connective.level


def render(f: Formula, unicode: bool = False, names: Mapping[int, str] | None = None) -> str:
    """Minimal-parenthesis text that parses back to ``f``."""
    neg = "¬" if unicode else "~"
    orsym = "∨" if unicode else "v"

    def go(g: Formula) -> str:
        if isinstance(g, Var):
            return names[g.index] if names and g.index in names else f"p{g.index}"
        if isinstance(g, Neg):
            inner = go(g.child)
            return neg + (inner if _node_level(g.child) >= NOT else f"({inner})")
        if isinstance(g, Or):
            sym, lvl, ops = orsym, OR, (g.left, g.right)
        else:
            c = g.connective
            sym, lvl, ops = (c.unicode if unicode else c.value), c.level, g.operands
        parts = []
        for o in ops:
            s = go(o)
            parts.append(s if _node_level(o) > lvl else f"({s})")
        return f" {sym} ".join(parts)

    return go(f)


def render_full(f: Formula) -> str:
    """Fully parenthesised rendering (every binary node wrapped)."""
    if isinstance(f, Var):
        return f"p{f.index}"
    if isinstance(f, Neg):
        return "~" + render_full(f.child)
    if isinstance(f, Or):
        return f"({render_full(f.left)} v {render_full(f.right)})"
    a, b = f.operands
    return f"({render_full(a)} {f.connective.value} {render_full(b)})"


# -- enumeration ------------------------------------------------------------


def primitive_formulas(num_vars: int, max_depth: int) -> list[Formula]:
    """All primitive formulas over ``p0..p{num_vars-1}`` with depth <= ``max_depth``.

    Ordered by depth, then by construction order.  Sizes grow doubly
    exponentially; callers keep the bounds small.
    """
    layer: list[Formula] = [Var(i) for i in range(num_vars)]
    out = list(layer)
    for _ in range(max_depth):
        prev = out
        new = [Neg(a) for a in layer]
        # at least one operand must come from the newest layer
        newest = set(map(id, layer))
        for a in prev:
            for b in prev:
                if id(a) in newest or id(b) in newest:
                    new.append(Or(a, b))
        out = prev + new
        layer = new
    return out


def count_primitive_formulas(num_vars: int, max_depth: int) -> int:
    n = num_vars
    for _ in range(max_depth):
        n = num_vars + n + n * n
    return n
