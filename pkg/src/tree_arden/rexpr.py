"""Rational tree expressions with variables.

Concrete syntax (sum < product < closure in binding strength)::

    expr   := term ('+' term)*
    term   := factor ('.[' name ']' factor)*      left-associative c-product
    factor := atom ('*[' name ']')*               postfix c-closure
    atom   := '0' | name | name '(' expr (',' expr)* ')' | '(' expr ')'
"""

from dataclasses import dataclass, field
from typing import Mapping, Union

from . import langset
from .errors import (
    ArityError,
    FreshSymbolError,
    ParseError,
    UnboundVariableError,
    UnknownSymbolError,
)
from .langset import FiniteTreeSet
from .lexer import TokenStream
from .trees import RankedAlphabet


@dataclass(frozen=True)
class Zero:
    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Apply:
    symbol: str
    args: tuple = ()

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Sum:
    left: "RExpr"
    right: "RExpr"

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Prod:
    """``left ._symbol right``."""

    left: "RExpr"
    symbol: str
    right: "RExpr"

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Star:
    """``body^{*symbol}``."""

    body: "RExpr"
    symbol: str

    def __str__(self):
        return render(self)


RExpr = Union[Zero, Var, Apply, Sum, Prod, Star]
Context = Mapping[str, FiniteTreeSet]

ZERO = Zero()


def sym(name, *args):
    return Apply(name, tuple(args))


def sum_of(terms):
    """Left-nested sum of ``terms``; ``0`` when empty."""
    terms = list(terms)
    if not terms:
        return ZERO
    out = terms[0]
    for t in terms[1:]:
        out = Sum(out, t)
    return out


def summands(e):
    """Flatten nested sums left to right."""
    out = []
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Sum):
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def children(e):
    if isinstance(e, Apply):
        return e.args
    if isinstance(e, (Sum, Prod)):
        return (e.left, e.right)
    if isinstance(e, Star):
        return (e.body,)
    return ()


# -- rendering -------------------------------------------------------------

_SUM, _PROD, _STAR, _ATOM = range(4)


def render(e, prec=_SUM) -> str:
    """Text form using the minimal parentheses the grammar needs."""
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Apply):
        if not e.args:
            return e.symbol
        return f"{e.symbol}({','.join(render(a) for a in e.args)})"
    if isinstance(e, Sum):
        # sums parse left-associatively, so only a right operand sum needs parentheses
        text = f"{render(e.left, _SUM)} + {render(e.right, _PROD)}"
        return f"({text})" if prec > _SUM else text
    if isinstance(e, Prod):
        text = f"{render(e.left, _PROD)} .[{e.symbol}] {render(e.right, _STAR)}"
        return f"({text})" if prec > _PROD else text
    if isinstance(e, Star):
        return f"{render(e.body, _STAR)}*[{e.symbol}]"
    raise TypeError(f"not an expression: {e!r}")


# -- parsing ---------------------------------------------------------------


def parse(text: str, alphabet: RankedAlphabet, variables=()) -> RExpr:
    """Parse ``text`` over ``alphabet`` and ``variables``.

    Names used as a product or closure subscript that are not in the alphabet
    are taken as extra nullary symbols (as introduced by factorization).
    """
    return parse_with_alphabet(text, alphabet, variables)[0]


def parse_with_alphabet(text, alphabet, variables=(), infer=False):
    """Like ``parse`` but also return the alphabet extended by subscript-only symbols.

    With ``infer`` unknown symbols are accepted and take their arity from
    their first use; later uses must agree.
    """
    variables = frozenset(variables)
    clash = variables & set(alphabet)
    if clash:
        raise ParseError(f"names used both as variable and symbol: {', '.join(sorted(clash))}")
    ts = TokenStream(text)
    for i, tok in enumerate(ts.tokens[:-1]):
        if tok.kind in ("dot", "star"):
            name = ts.tokens[i + 1]
            if name.kind == "name" and name.text not in alphabet and name.text not in variables:
                alphabet = alphabet.with_symbol(name.text, 0)
    parser = _Parser(ts, alphabet, variables, infer)
    e = parser.expr()
    ts.expect_end()
    return e, parser.alphabet


class _Parser:
    def __init__(self, ts, alphabet, variables, infer=False):
        self.ts = ts
        self.alphabet = alphabet
        self.variables = variables
        self.infer = infer

    def expr(self):
        e = self.term()
        while self.ts.accept("+"):
            e = Sum(e, self.term())
        return e

    def term(self):
        e = self.factor()
        while self.ts.peek().kind == "dot":
            self.ts.next()
            c = self.subscript()
            e = Prod(e, c, self.factor())
        return e

    def factor(self):
        e = self.atom()
        while self.ts.peek().kind == "star":
            self.ts.next()
            e = Star(e, self.subscript())
        return e

    def subscript(self):
        tok = self.ts.expect("name")
        if tok.text in self.variables:
            self.ts.fail(f"variable {tok.text!r} cannot be an operator subscript", tok)
        if self.alphabet.arity(tok.text) != 0:
            self.ts.fail(f"operator subscript {tok.text!r} is not nullary", tok, ArityError)
        self.ts.expect("]")
        return tok.text

    def atom(self):
        ts = self.ts
        if ts.accept("zero"):
            return ZERO
        if ts.accept("("):
            e = self.expr()
            ts.expect(")")
            return e
        tok = ts.expect("name")
        args = []
        if ts.accept("("):
            args.append(self.expr())
            while ts.accept(","):
                args.append(self.expr())
            ts.expect(")")
        if tok.text in self.variables:
            if args:
                ts.fail(f"variable {tok.text!r} takes no arguments", tok, ArityError)
            return Var(tok.text)
        if tok.text not in self.alphabet:
            if not self.infer:
                ts.fail(f"unknown symbol {tok.text!r}", tok, UnknownSymbolError)
            self.alphabet = self.alphabet.with_symbol(tok.text, len(args))
        arity = self.alphabet.arity(tok.text)
        if arity != len(args):
            ts.fail(f"symbol {tok.text!r} has arity {arity}, got {len(args)}", tok, ArityError)
        return Apply(tok.text, tuple(args))


# -- structure -------------------------------------------------------------


def variables_of(e) -> frozenset:
    out = set()
    _walk(e, lambda n: out.add(n.name) if isinstance(n, Var) else None)
    return frozenset(out)


def symbols_of(e) -> dict:
    """Symbol name -> arity for every symbol used in ``e``, subscripts included."""
    out = {}

    def visit(n):
        if isinstance(n, Apply):
            out[n.symbol] = len(n.args)
        elif isinstance(n, (Prod, Star)):
            out[n.symbol] = 0

    _walk(e, visit)
    return out


def occurs(e, name) -> bool:
    """Whether variable ``name`` appears in ``e``."""
    if isinstance(e, Var):
        return e.name == name
    return any(occurs(c, name) for c in children(e))


def size(e) -> int:
    return 1 + sum(size(c) for c in children(e))


def _walk(e, visit):
    stack = [e]
    while stack:
        node = stack.pop()
        visit(node)
        stack.extend(children(node))


def ops_of(e) -> frozenset:
    """The product and closure operators of ``e`` as ``('.', c)`` / ``('*', c)`` pairs."""
    out = set()

    def visit(n):
        if isinstance(n, Prod):
            out.add((".", n.symbol))
        elif isinstance(n, Star):
            out.add(("*", n.symbol))

    _walk(e, visit)
    return frozenset(out)


# -- semantics -------------------------------------------------------------


def denote_bounded(e, ctx: Context | None = None, H: int = 4) -> FiniteTreeSet:
    """The trees of height <= H in the language of ``e`` under ``ctx``."""
    if H < 1:
        raise ValueError("height bound must be at least 1")
    ctx = ctx or {}
    memo = {}

    def go(node, h):
        key = (id(node), h)
        hit = memo.get(key)
        if hit is not None:
            return hit[1]
        if h < 1:
            out = FiniteTreeSet(bound=h)
        elif isinstance(node, Zero):
            out = FiniteTreeSet(bound=h)
        elif isinstance(node, Var):
            if node.name not in ctx:
                raise UnboundVariableError(node.name)
            out = langset.truncate(langset.as_tree_set(ctx[node.name]), h)
        elif isinstance(node, Apply):
            out = langset.apply_symbol(node.symbol, [go(a, h - 1) for a in node.args], h)
        elif isinstance(node, Sum):
            out = langset.union(go(node.left, h), go(node.right, h), h)
        elif isinstance(node, Prod):
            out = langset.c_product(go(node.left, h), node.symbol, go(node.right, h), h)
        elif isinstance(node, Star):
            out = langset.closure_bounded(go(node.body, h), node.symbol, h)
        else:
            raise TypeError(f"not an expression: {node!r}")
        # keep node alive so its id is not reused during this call
        memo[key] = (node, out)
        return out

    return go(e, H)


def substitute(e, x: str, f) -> RExpr:
    """``e`` with every occurrence of variable ``x`` replaced by ``f``."""
    if isinstance(e, Var):
        return f if e.name == x else e
    if isinstance(e, Zero):
        return e
    if isinstance(e, Apply):
        if not e.args:
            return e
        args = tuple(substitute(a, x, f) for a in e.args)
        return e if all(a is b for a, b in zip(args, e.args)) else Apply(e.symbol, args)
    if isinstance(e, Sum):
        l, r = substitute(e.left, x, f), substitute(e.right, x, f)
        return e if (l is e.left and r is e.right) else Sum(l, r)
    if isinstance(e, Prod):
        l, r = substitute(e.left, x, f), substitute(e.right, x, f)
        return e if (l is e.left and r is e.right) else Prod(l, e.symbol, r)
    if isinstance(e, Star):
        b = substitute(e.body, x, f)
        return e if b is e.body else Star(b, e.symbol)
    raise TypeError(f"not an expression: {e!r}")


# -- closedness ------------------------------------------------------------


@dataclass(frozen=True)
class Occurrence:
    """Where a nullary symbol occurs: child-index ``path`` from the root of ``label``."""

    symbol: str
    path: tuple
    label: str | None = None

    def __str__(self):
        where = ".".join(map(str, self.path)) or "root"
        prefix = f"{self.label}: " if self.label else ""
        return f"{prefix}unbounded occurrence of {self.symbol!r} at position {where}"


@dataclass(frozen=True)
class ClosednessReport:
    closed: bool
    bounded_symbols: frozenset = field(default_factory=frozenset)
    free_symbols: frozenset = field(default_factory=frozenset)
    witness: Occurrence | None = None

    def __bool__(self):
        return self.closed


def closedness(e, label=None) -> ClosednessReport:
    """Check that every occurrence of an operator symbol lies in that operator's scope."""
    return closedness_of([(label, e)])


def closedness_of(labelled) -> ClosednessReport:
    """Closedness of several expressions taken together (an equation system)."""
    labelled = list(labelled)
    bounded = set()
    leaves = []  # (symbol, path, label, in_scope)
    for label, e in labelled:
        _collect(e, (), frozenset(), label, bounded, leaves)
    witness = None
    free = set()
    for symbol, path, label, in_scope in leaves:
        if symbol in bounded:
            if not in_scope and witness is None:
                witness = Occurrence(symbol, path, label)
        else:
            free.add(symbol)
    return ClosednessReport(witness is None, frozenset(bounded), frozenset(free), witness)


def _collect(e, path, scope, label, bounded, leaves):
    if isinstance(e, Apply):
        if not e.args:
            leaves.append((e.symbol, path, label, e.symbol in scope))
        for i, a in enumerate(e.args):
            _collect(a, path + (i,), scope, label, bounded, leaves)
    elif isinstance(e, Sum):
        _collect(e.left, path + (0,), scope, label, bounded, leaves)
        _collect(e.right, path + (1,), scope, label, bounded, leaves)
    elif isinstance(e, Prod):
        bounded.add(e.symbol)
        inner = scope | {e.symbol}
        _collect(e.left, path + (0,), inner, label, bounded, leaves)
        _collect(e.right, path + (1,), inner, label, bounded, leaves)
    elif isinstance(e, Star):
        bounded.add(e.symbol)
        _collect(e.body, path + (0,), scope | {e.symbol}, label, bounded, leaves)


def exposed_symbols(e, exposure: Mapping[str, frozenset] | None = None) -> frozenset:
    """Nullary symbols that may occur in some tree of ``L(e)``.

    ``exposure`` gives the same information for the variables. The result
    over-approximates: a product ``l .[c] r`` hides ``c`` and only exposes
    ``r`` when ``c`` may occur in ``l``; a closure ``b*[c]`` always exposes ``c``.
    """
    exposure = exposure or {}
    if isinstance(e, Zero):
        return frozenset()
    if isinstance(e, Var):
        return frozenset(exposure.get(e.name, ()))
    if isinstance(e, Apply):
        if not e.args:
            return frozenset([e.symbol])
        return frozenset().union(*(exposed_symbols(a, exposure) for a in e.args))
    if isinstance(e, Sum):
        return exposed_symbols(e.left, exposure) | exposed_symbols(e.right, exposure)
    if isinstance(e, Prod):
        left = exposed_symbols(e.left, exposure)
        if e.symbol not in left:
            return left
        return (left - {e.symbol}) | exposed_symbols(e.right, exposure)
    if isinstance(e, Star):
        return exposed_symbols(e.body, exposure) | {e.symbol}
    raise TypeError(f"not an expression: {e!r}")


# -- split, factorization, normalization ------------------------------------


def k_split(f, xk: str):
    """Split the summands of ``f`` into those mentioning ``xk`` and the rest.

    ``0`` summands are dropped; an empty side is ``0``.
    """
    with_x, without = [], []
    for s in summands(f):
        if isinstance(s, Zero):
            continue
        (with_x if occurs(s, xk) else without).append(s)
    return sum_of(with_x), sum_of(without)


def factorize(f, xk: str, fresh: str, alphabet=None, variables=()):
    """Rewrite ``f`` as ``F'[xk <- fresh] .[fresh] xk + F''``.

    Empty sides degenerate: no ``xk`` summand gives ``F''``; no other summand
    gives the product alone.
    """
    if fresh in symbols_of(f) or fresh in variables or (alphabet is not None and fresh in alphabet):
        raise FreshSymbolError(f"symbol {fresh!r} is not fresh")
    rec, rest = k_split(f, xk)
    if isinstance(rec, Zero):
        return rest
    head = Prod(substitute(rec, xk, sym(fresh)), fresh, Var(xk))
    if isinstance(rest, Zero):
        return head
    return Sum(head, rest)


def normalize(e) -> RExpr:
    """Apply the language-preserving rewrites ``0+E -> E``, ``E+0 -> E``,
    ``0 .[c] E -> 0``, ``0*[c] -> c`` and ``c .[c] E -> E`` bottom-up."""
    if isinstance(e, (Zero, Var)):
        return e
    if isinstance(e, Apply):
        if not e.args:
            return e
        args = tuple(normalize(a) for a in e.args)
        return e if all(a is b for a, b in zip(args, e.args)) else Apply(e.symbol, args)
    if isinstance(e, Sum):
        l, r = normalize(e.left), normalize(e.right)
        if isinstance(l, Zero):
            return r
        if isinstance(r, Zero):
            return l
        return e if (l is e.left and r is e.right) else Sum(l, r)
    if isinstance(e, Prod):
        l, r = normalize(e.left), normalize(e.right)
        if isinstance(l, Zero):
            return ZERO
        if isinstance(l, Apply) and not l.args and l.symbol == e.symbol:
            return r
        return e if (l is e.left and r is e.right) else Prod(l, e.symbol, r)
    if isinstance(e, Star):
        b = normalize(e.body)
        if isinstance(b, Zero):
            return sym(e.symbol)
        return e if b is e.body else Star(b, e.symbol)
    raise TypeError(f"not an expression: {e!r}")
