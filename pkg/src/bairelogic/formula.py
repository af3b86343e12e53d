"""Formulas of the modal language with a closure modality and a universal modality.

Desugared trees are built from five node kinds only: ``Var``, ``And``, ``Not``,
``Diamond`` and ``Forall``.  Everything else (``|``, ``->``, ``<->``, ``[]``,
``E``, ``top``, ``bot``) is surface syntax that the parser rewrites away.

Surface grammar, loosest binding first::

    iff   := imp ('<->' imp)*          left associative
    imp   := or ('->' imp)?            right associative
    or    := and ('|' and)*
    and   := unary ('&' unary)*
    unary := ('~' | '<>' | '[]' | 'A' | 'E') unary | atom
    atom  := 'p' digits | 'top' | 'bot' | '(' iff ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple

from .errors import FormulaSyntaxError, UnknownAxiomError, VariableBudgetError

DEFAULT_VARIABLE_BUDGET = 64


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class Diamond:
    child: "Formula"


@dataclass(frozen=True)
class Forall:
    child: "Formula"


Formula = Var | And | Not | Diamond | Forall

PRIMITIVES = (Var, And, Not, Diamond, Forall)


# -- derived connectives ---------------------------------------------------

def Or(a, b):
    return Not(And(Not(a), Not(b)))


def Implies(a, b):
    return Not(And(a, Not(b)))


def Iff(a, b):
    return And(Implies(a, b), Implies(b, a))


def Box(a):
    return Not(Diamond(Not(a)))


def Exists(a):
    return Not(Forall(Not(a)))


# bottom is p0 & ~p0, with p0 fixed once and for all
BOT = And(Var(0), Not(Var(0)))
TOP = Not(BOT)


def conjunction(items):
    items = list(items)
    if not items:
        return TOP
    out = items[0]
    for f in items[1:]:
        out = And(out, f)
    return out


def disjunction(items):
    items = list(items)
    if not items:
        return BOT
    out = items[0]
    for f in items[1:]:
        out = Or(out, f)
    return out


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<op><->|->|<>|\[\]|[~&|()])"
    r"|(?P<kw>top|bot)(?![A-Za-z0-9_])"
    r"|(?P<var>p\d+)"
    r"|(?P<quant>[AE])"
)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


class Surface(NamedTuple):
    """A node of the sugared parse tree; ``op`` names the surface connective."""

    op: str
    children: tuple
    value: int | None = None


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        else:
            for i, ch in enumerate(chunk):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        pos = m.end()
    col = len(text) - line_start + 1
    tokens.append(Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text, budget):
        self.tokens = tokenize(text)
        self.i = 0
        self.budget = budget

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(message, tok.line, tok.column)

    def expect(self, text):
        tok = self.peek()
        if tok.text != text or tok.kind == "end":
            what = "end of input" if tok.kind == "end" else repr(tok.text)
            self.fail(f"expected {text!r}, found {what}")
        return self.take()

    def parse(self):
        node = self.iff()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().text!r}")
        return node

    def iff(self):
        node = self.imp()
        while self.peek().text == "<->":
            self.take()
            node = Surface("<->", (node, self.imp()))
        return node

    def imp(self):
        node = self.disj()
        if self.peek().text == "->":
            self.take()
            node = Surface("->", (node, self.imp()))
        return node

    def disj(self):
        node = self.conj()
        while self.peek().text == "|":
            self.take()
            node = Surface("|", (node, self.conj()))
        return node

    def conj(self):
        node = self.unary()
        while self.peek().text == "&":
            self.take()
            node = Surface("&", (node, self.unary()))
        return node

    def unary(self):
        tok = self.peek()
        if tok.text in ("~", "<>", "[]", "A", "E") and tok.kind != "end":
            self.take()
            return Surface(tok.text, (self.unary(),))
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok.kind == "var":
            self.take()
            index = int(tok.text[1:])
            if index >= self.budget:
                raise VariableBudgetError(
                    f"variable {tok.text} exceeds the budget of {self.budget} variables "
                    f"(line {tok.line}, column {tok.column})"
                )
            return Surface("var", (), index)
        if tok.kind == "kw":
            self.take()
            return Surface(tok.text, ())
        if tok.text == "(" and tok.kind == "op":
            self.take()
            node = self.iff()
            self.expect(")")
            return node
        if tok.kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {tok.text!r}")


def parse_surface(text: str, budget: int = DEFAULT_VARIABLE_BUDGET) -> Surface:
    return _Parser(text, budget).parse()


def desugar(node) -> Formula:
    """Rewrite a surface tree into the five primitive kinds.

    Primitive trees pass through unchanged, so ``desugar`` is idempotent.
    """
    if isinstance(node, PRIMITIVES):
        return node
    op, kids = node.op, [desugar(k) for k in node.children]
    if op == "var":
        return Var(node.value)
    if op == "top":
        return TOP
    if op == "bot":
        return BOT
    unary = {"~": Not, "<>": Diamond, "[]": Box, "A": Forall, "E": Exists}
    if op in unary:
        return unary[op](kids[0])
    binary = {"&": And, "|": Or, "->": Implies, "<->": Iff}
    return binary[op](*kids)


def parse(text: str, budget: int = DEFAULT_VARIABLE_BUDGET) -> Formula:
    """Parse surface text into a desugared formula.

    >>> parse("p0 & ~p1")
    And(left=Var(index=0), right=Not(child=Var(index=1)))
    """
    return desugar(parse_surface(text, budget))


# -- rendering -------------------------------------------------------------

_IFF, _IMP, _OR, _AND, _UNARY, _ATOM = range(1, 7)
_BINARY = {
    "<->": (_IFF, "left"),
    "->": (_IMP, "right"),
    "|": (_OR, "left"),
    "&": (_AND, "left"),
}


def _view(f):
    """Recognise the sugar a primitive node was built from, if any."""
    if isinstance(f, Not):
        c = f.child
        if isinstance(c, Diamond) and isinstance(c.child, Not):
            return "[]", (c.child.child,)
        if isinstance(c, Forall) and isinstance(c.child, Not):
            return "E", (c.child.child,)
        if isinstance(c, And) and isinstance(c.right, Not):
            # read a sugared left operand ([]a, Ea, a | b) as an implication
            if isinstance(c.left, Not) and _view(c.left)[0] == "~":
                return "|", (c.left.child, c.right.child)
            return "->", (c.left, c.right.child)
        return "~", (c,)
    if isinstance(f, And):
        l, r = f.left, f.right
        if _view(l)[0] == "->" and _view(r)[0] == "->":
            (a, b), (b2, a2) = _view(l)[1], _view(r)[1]
            if a == a2 and b == b2:
                return "<->", (a, b)
        return "&", (l, r)
    if isinstance(f, Diamond):
        return "<>", (f.child,)
    if isinstance(f, Forall):
        return "A", (f.child,)
    return "var", ()


def _render(f) -> tuple[str, int]:
    op, kids = _view(f)
    if op == "var":
        return f"p{f.index}", _ATOM
    if op in _BINARY:
        prec, assoc = _BINARY[op]
        (ls, lp), (rs, rp) = _render(kids[0]), _render(kids[1])
        if lp < prec or (lp == prec and assoc == "right"):
            ls = f"({ls})"
        if rp < prec or (rp == prec and assoc == "left"):
            rs = f"({rs})"
        return f"{ls} {op} {rs}", prec
    s, p = _render(kids[0])
    if p < _UNARY:
        s = f"({s})"
    return op + s, _UNARY


def render(f: Formula) -> str:
    """Minimal-parenthesis surface text; ``parse(render(f)) == f``."""
    return _render(f)[0]


# -- structure -------------------------------------------------------------

@dataclass(frozen=True)
class SubformulaInfo:
    subformulas: tuple
    diamonds: int
    foralls: int
    variables: frozenset


def subformulas(f: Formula) -> SubformulaInfo:
    """Distinct subtrees in post-order (children before parents)."""
    seen: dict = {}

    def walk(g):
        if g in seen:
            return
        for child in children(g):
            walk(child)
        seen[g] = None

    walk(f)
    subs = tuple(seen)
    return SubformulaInfo(
        subformulas=subs,
        diamonds=sum(isinstance(g, Diamond) for g in subs),
        foralls=sum(isinstance(g, Forall) for g in subs),
        variables=frozenset(g.index for g in subs if isinstance(g, Var)),
    )


def children(f) -> tuple:
    if isinstance(f, And):
        return (f.left, f.right)
    if isinstance(f, (Not, Diamond, Forall)):
        return (f.child,)
    return ()


def variables(f) -> frozenset:
    return subformulas(f).variables


def size(f) -> int:
    """Node count of the tree, counting repeated subtrees every time."""
    return 1 + sum(size(c) for c in children(f))


def modal_depth(f) -> int:
    inner = max((modal_depth(c) for c in children(f)), default=0)
    return inner + isinstance(f, (Diamond, Forall))


def has_forall(f) -> bool:
    return subformulas(f).foralls > 0


def iter_nodes(f) -> Iterator:
    yield f
    for c in children(f):
        yield from iter_nodes(c)


def substitute(f: Formula, mapping: Mapping[int, Formula]) -> Formula:
    """Simultaneous substitution of formulas for variables."""
    memo: dict = {}

    def go(g):
        if g in memo:
            return memo[g]
        if isinstance(g, Var):
            out = mapping.get(g.index, g)
        elif isinstance(g, And):
            out = And(go(g.left), go(g.right))
        else:
            out = type(g)(go(g.child))
        memo[g] = out
        return out

    return go(f)


# -- axioms ----------------------------------------------------------------

_AXIOM_TEXT = {
    "M": "<>(p1 | p2) -> <>p1 | <>p2",
    "T": "p1 -> <>p1",
    "4": "<><>p1 -> <>p1",
    "5": "<>p1 -> []<>p1",
    "shehtman": "A([]p1 | []~p1) -> Ap1 | A~p1",
    "s5u-connect": "<>p1 -> Ep1",
}

AXIOM_NAMES = ("M", "T", "4", "N", "5", "bd", "shehtman", "s5u-connect")
S5_AXIOMS = ("M", "T", "4", "N", "5")


def bounded_width(n: int) -> Formula:
    """The axiom bounding cluster width by ``n``, over variables p1..p_{n+1}."""
    if n < 1:
        raise ValueError("bd needs n >= 1")
    ps = [Var(i) for i in range(1, n + 2)]
    antecedent = conjunction(Diamond(p) for p in ps)
    consequent = disjunction(
        Diamond(And(ps[i], ps[j])) for i in range(n + 1) for j in range(i + 1, n + 1)
    )
    return Implies(antecedent, consequent)


def axiom_library(name: str, n: int | None = None) -> Formula:
    if name == "bd":
        if n is None:
            raise UnknownAxiomError("axiom bd needs a width n")
        return bounded_width(n)
    if name == "N":
        return Not(Diamond(BOT))
    if name not in _AXIOM_TEXT:
        raise UnknownAxiomError(f"unknown axiom {name!r}; known: {', '.join(AXIOM_NAMES)}")
    return parse(_AXIOM_TEXT[name])


# -- random generation -----------------------------------------------------

def random_formula(rng, n_vars=3, max_size=12, max_depth=3, forall=False):
    """A random primitive tree with at most ``max_size`` nodes.

    ``max_depth`` bounds the nesting of modal nodes (``Diamond`` and, when
    ``forall`` is set, ``Forall``).
    """

    def gen(budget, depth):
        kinds = ["var"]
        if budget >= 2:
            kinds.append("not")
            if depth < max_depth:
                kinds.append("dia")
                if forall:
                    kinds.append("all")
        if budget >= 3:
            kinds += ["and", "and"]
        kind = rng.choice(kinds)
        if kind == "var":
            return Var(rng.randrange(n_vars))
        if kind == "not":
            return Not(gen(budget - 1, depth))
        if kind == "dia":
            return Diamond(gen(budget - 1, depth + 1))
        if kind == "all":
            return Forall(gen(budget - 1, depth + 1))
        left_budget = rng.randint(1, budget - 2)
        return And(gen(left_budget, depth), gen(budget - 1 - left_budget, depth))

    return gen(rng.randint(1, max_size), 0)
