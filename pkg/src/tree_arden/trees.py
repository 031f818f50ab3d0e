"""Ranked alphabets and finite ordered trees."""

from itertools import product
from typing import Iterable, Mapping

from .errors import ArityError, ParseError, UnknownSymbolError
from .lexer import NAME_RE, TokenStream


class RankedAlphabet:
    """An immutable map from symbol name to arity.

    Extending the alphabet (``with_symbol``) returns a new value.
    """

    __slots__ = ("_arities",)

    def __init__(self, arities: Mapping[str, int] = ()):
        arities = dict(arities)
        for name, arity in arities.items():
            if not isinstance(name, str) or not NAME_RE.match(name):
                raise ValueError(f"invalid symbol name {name!r}")
            if not isinstance(arity, int) or arity < 0:
                raise ValueError(f"invalid arity {arity!r} for {name!r}")
        self._arities = dict(sorted(arities.items()))

    @classmethod
    def parse(cls, text):
        """Build from ``"f/2 h/1 a/0"``."""
        arities = {}
        for item in text.split():
            name, sep, arity = item.partition("/")
            if not sep or not arity.isdigit():
                raise ParseError(f"bad alphabet entry {item!r}, expected name/arity")
            if name in arities:
                raise ParseError(f"duplicate symbol {name!r}")
            arities[name] = int(arity)
        return cls(arities)

    def arity(self, name):
        try:
            return self._arities[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol {name!r}") from None

    def rank(self, n):
        """The symbols of arity ``n``."""
        return frozenset(s for s, a in self._arities.items() if a == n)

    @property
    def nullary(self):
        return self.rank(0)

    @property
    def max_arity(self):
        return max(self._arities.values(), default=0)

    def with_symbol(self, name, arity=0):
        if name in self._arities and self._arities[name] != arity:
            raise ValueError(f"symbol {name!r} already has arity {self._arities[name]}")
        return RankedAlphabet({**self._arities, name: arity})

    def union(self, other):
        merged = dict(self._arities)
        for name, arity in other.items():
            if merged.setdefault(name, arity) != arity:
                raise ValueError(f"symbol {name!r} has conflicting arities")
        return RankedAlphabet(merged)

    def tree(self, symbol, *children):
        """Construct a tree, checking the arity of ``symbol``."""
        if self.arity(symbol) != len(children):
            raise ArityError(
                f"symbol {symbol!r} has arity {self.arity(symbol)}, got {len(children)} arguments"
            )
        return Tree(symbol, children)

    def items(self):
        return self._arities.items()

    def __contains__(self, name):
        return name in self._arities

    def __iter__(self):
        return iter(self._arities)

    def __len__(self):
        return len(self._arities)

    def __eq__(self, other):
        return isinstance(other, RankedAlphabet) and self._arities == other._arities

    def __hash__(self):
        return hash(tuple(self._arities.items()))

    def __str__(self):
        return " ".join(f"{s}/{a}" for s, a in self._arities.items())

    def __repr__(self):
        return f"RankedAlphabet({self._arities!r})"


class Tree:
    """A finite ordered tree ``symbol(children...)``.

    Trees are hashable values. Height, size and the canonical sort key are
    computed once at construction.
    """

    __slots__ = ("symbol", "children", "height", "size", "leaf_symbols", "_hash", "_key")

    def __init__(self, symbol: str, children: Iterable["Tree"] = ()):
        children = tuple(children)
        object.__setattr__(self, "symbol", symbol)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "height", 1 + max((c.height for c in children), default=0))
        object.__setattr__(self, "size", 1 + sum(c.size for c in children))
        object.__setattr__(self, "leaf_symbols", _leaf_symbols(symbol, children))
        object.__setattr__(self, "_hash", hash((symbol, children)))
        object.__setattr__(
            self, "_key", (self.height, self.size, symbol, tuple(c._key for c in children))
        )

    def __setattr__(self, name, value):
        raise AttributeError("Tree is immutable")

    @property
    def arity(self):
        return len(self.children)

    @property
    def sort_key(self):
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Tree) or self._hash != other._hash:
            return False
        return self.symbol == other.symbol and self.children == other.children

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __str__(self):
        if not self.children:
            return self.symbol
        return f"{self.symbol}({','.join(map(str, self.children))})"

    def __repr__(self):
        return f"Tree({str(self)!r})"

    def __reduce__(self):
        return (Tree, (self.symbol, self.children))

    def symbols(self):
        """Set of symbol names occurring in the tree."""
        out = {self.symbol}
        for c in self.children:
            out |= c.symbols()
        return out

    def contains_symbol(self, name):
        if name in self.leaf_symbols:
            return True
        return self.symbol == name or any(c.contains_symbol(name) for c in self.children)

    def validate(self, alphabet: RankedAlphabet):
        if alphabet.arity(self.symbol) != len(self.children):
            raise ArityError(f"symbol {self.symbol!r} used with {len(self.children)} arguments")
        for c in self.children:
            c.validate(alphabet)
        return self


def _leaf_symbols(symbol, children):
    if not children:
        return frozenset((symbol,))
    first = children[0].leaf_symbols
    if all(c.leaf_symbols is first for c in children[1:]):
        return first
    return frozenset().union(*(c.leaf_symbols for c in children))


def leaf(name):
    return Tree(name, ())


def height(t: Tree) -> int:
    """Height of ``t``; a leaf has height 1."""
    return t.height


def subtrees(t: Tree):
    """All distinct subtrees of ``t``, ``t`` included."""
    from .langset import FiniteTreeSet

    seen = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if u not in seen:
            seen.add(u)
            stack.extend(u.children)
    return FiniteTreeSet(seen)


def substitute_leaf(t: Tree, c: str, by_height, budget: int, memo=None):
    """Trees of height <= budget obtained by replacing every ``c`` leaf of ``t``.

    ``by_height[h]`` lists the replacement trees of height <= h (index 0 is
    empty). Each ``c`` leaf is replaced independently. Returns a list without
    duplicates.
    """
    if memo is None:
        memo = {}
    return _subst(t, c, by_height, budget, memo)


def _subst(t, c, by_height, budget, memo):
    if t.height > budget:
        return []
    if c not in t.leaf_symbols:
        return [t]
    key = (t, budget)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if not t.children:
        if t.symbol == c:
            out = by_height[min(budget, len(by_height) - 1)] if budget > 0 else []
        else:
            out = [t] if budget >= 1 else []
    elif budget <= 1:
        out = []
    else:
        parts = []
        for child in t.children:
            sub = _subst(child, c, by_height, budget - 1, memo)
            if not sub:
                parts = None
                break
            parts.append(sub)
        if parts is None:
            out = []
        else:
            # distinct argument tuples give distinct trees
            out = [Tree(t.symbol, args) for args in product(*parts)]
    memo[key] = out
    return out


def tree_c_product(t: Tree, c: str, language):
    """``t`` with each leaf ``c`` replaced by any member of ``language``."""
    from .langset import FiniteTreeSet, as_tree_set

    language = as_tree_set(language)
    if not t.contains_symbol(c):
        return FiniteTreeSet([t])
    members = sorted(language)
    if not members:
        return FiniteTreeSet()
    top = max(m.height for m in members)
    bound = t.height + top
    by_height = _by_height(members, bound)
    return FiniteTreeSet(substitute_leaf(t, c, by_height, bound))


def _by_height(members, bound):
    """Cumulative height buckets: index h holds members of height <= h."""
    table = [[] for _ in range(bound + 1)]
    for m in members:
        if m.height <= bound:
            table[m.height].append(m)
    acc = []
    out = [[]]
    for h in range(1, bound + 1):
        acc = acc + table[h]
        out.append(acc)
    return out


def parse_tree(text: str, alphabet: RankedAlphabet | None = None) -> Tree:
    """Parse ``name`` or ``name(child, ...)``. Arity is checked when an alphabet is given."""
    ts = TokenStream(text)
    t = _parse_tree(ts, alphabet)
    ts.expect_end()
    return t


def _parse_tree(ts, alphabet):
    tok = ts.expect("name")
    children = []
    if ts.accept("("):
        children.append(_parse_tree(ts, alphabet))
        while ts.accept(","):
            children.append(_parse_tree(ts, alphabet))
        ts.expect(")")
    if alphabet is not None:
        if tok.text not in alphabet:
            ts.fail(f"unknown symbol {tok.text!r}", tok, UnknownSymbolError)
        if alphabet.arity(tok.text) != len(children):
            ts.fail(
                f"symbol {tok.text!r} has arity {alphabet.arity(tok.text)}, got {len(children)}",
                tok,
                ArityError,
            )
    return Tree(tok.text, children)
