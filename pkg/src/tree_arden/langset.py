"""Finite tree languages and height-bounded language operations.

Infinite languages are never materialised. Every operation takes an optional
height bound ``H`` and returns exactly the members of the true result whose
height is at most ``H``. Substituting a tree for a leaf never lowers the
height, so truncating operands first and the result afterwards loses nothing.
"""

from itertools import product
from typing import Iterable

from .trees import Tree, _by_height, substitute_leaf


class FiniteTreeSet:
    """An immutable finite set of trees.

    ``bound`` records that the set is the truncation of a possibly infinite
    language to heights ``<= bound``. Iteration follows the canonical tree
    order. Equality compares members only.
    """

    __slots__ = ("members", "bound", "_sorted")

    def __init__(self, members: Iterable[Tree] = (), bound: int | None = None):
        members = frozenset(members)
        if bound is not None:
            if bound < 0:
                raise ValueError("bound must be non-negative")
            if any(t.height > bound for t in members):
                raise ValueError(f"member exceeds height bound {bound}")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "bound", bound)
        object.__setattr__(self, "_sorted", None)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteTreeSet is immutable")

    def sorted(self):
        if self._sorted is None:
            object.__setattr__(self, "_sorted", tuple(sorted(self.members)))
        return self._sorted

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.members)

    def __bool__(self):
        return bool(self.members)

    def __contains__(self, t):
        return t in self.members

    def __eq__(self, other):
        if isinstance(other, FiniteTreeSet):
            return self.members == other.members
        if isinstance(other, (set, frozenset)):
            return self.members == other
        return NotImplemented

    def __hash__(self):
        return hash(self.members)

    def __le__(self, other):
        return self.members <= as_tree_set(other).members

    def __ge__(self, other):
        return self.members >= as_tree_set(other).members

    def __or__(self, other):
        return union(self, as_tree_set(other))

    def __str__(self):
        return "{" + ", ".join(map(str, self)) + "}"

    def __repr__(self):
        b = "" if self.bound is None else f", bound={self.bound}"
        return f"FiniteTreeSet({str(self)}{b})"

    @property
    def max_height(self):
        return max((t.height for t in self.members), default=0)

    def truncate(self, H):
        return truncate(self, H)

    def contains_symbol(self, name):
        return any(name in t.leaf_symbols or t.contains_symbol(name) for t in self.members)


def as_tree_set(value) -> FiniteTreeSet:
    if isinstance(value, FiniteTreeSet):
        return value
    if isinstance(value, Tree):
        return FiniteTreeSet([value])
    return FiniteTreeSet(value)


def _meet(*bounds):
    present = [b for b in bounds if b is not None]
    return min(present) if present else None


def truncate(L, H: int | None) -> FiniteTreeSet:
    L = as_tree_set(L)
    if H is None:
        return L
    if L.bound is not None and L.bound <= H:
        return L
    return FiniteTreeSet((t for t in L.members if t.height <= H), bound=H)


def union(L1, L2, bound: int | None = None) -> FiniteTreeSet:
    """Set union; the result bound is the smallest bound present."""
    L1, L2 = as_tree_set(L1), as_tree_set(L2)
    H = _meet(L1.bound, L2.bound, bound)
    members = L1.members | L2.members
    if H is not None:
        members = (t for t in members if t.height <= H)
    return FiniteTreeSet(members, bound=H)


def apply_symbol(f: str, args, bound: int | None = None) -> FiniteTreeSet:
    """All trees ``f(t1, ..., tn)`` with ``ti`` drawn from ``args[i]``."""
    args = [as_tree_set(a) for a in args]
    if bound is not None:
        if bound < 1:
            return FiniteTreeSet(bound=bound)
        args = [truncate(a, bound - 1) for a in args]
    return FiniteTreeSet((Tree(f, ch) for ch in product(*(a.sorted() for a in args))), bound=bound)


def c_product(L1, c: str, L2, bound: int | None = None) -> FiniteTreeSet:
    """``L1 ._c L2``: every ``c`` leaf of every tree of ``L1`` replaced, independently,
    by a tree of ``L2``."""
    L1, L2 = as_tree_set(L1), as_tree_set(L2)
    H = bound
    if H is None:
        H = L1.max_height + L2.max_height
    by_height = _by_height(L2.sorted(), H)
    memo = {}
    out = set()
    for t in L1.members:
        if t.height > H:
            continue
        if c not in t.leaf_symbols:
            out.add(t)
        else:
            out.update(substitute_leaf(t, c, by_height, H, memo))
    return FiniteTreeSet(out, bound=bound)


def iter_product(L, c: str, n: int, bound: int | None = None) -> FiniteTreeSet:
    """The n-th iterate: ``L^0 = {c}``, ``L^(k+1) = L^k | L ._c L^k``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    L = as_tree_set(L)
    acc = FiniteTreeSet([Tree(c)], bound=bound) if bound != 0 else FiniteTreeSet(bound=0)
    for _ in range(n):
        acc = union(acc, c_product(L, c, acc, bound), bound)
    return acc


class FixpointError(RuntimeError):
    """The bounded closure failed to stabilise within its iteration cap."""


def closure_bounded(L, c: str, H: int) -> FiniteTreeSet:
    """Members of ``L^{*c}`` with height at most ``H``."""
    if H < 1:
        raise ValueError("height bound must be at least 1")
    L = truncate(as_tree_set(L), H)
    acc = FiniteTreeSet([Tree(c)], bound=H)
    cap = 2 * H + 1
    for _ in range(cap):
        nxt = union(acc, c_product(L, c, acc, H), H)
        if nxt == acc:
            return acc
        if not acc.members <= nxt.members:
            raise FixpointError("closure iteration is not monotone")
        acc = nxt
    raise FixpointError(f"closure did not stabilise after {cap} iterations (H={H})")


def all_trees(alphabet, H: int) -> FiniteTreeSet:
    """Every tree over ``alphabet`` of height at most ``H`` (brute force)."""
    levels = FiniteTreeSet(bound=0)
    for h in range(1, H + 1):
        layer = set()
        for name, arity in alphabet.items():
            for ch in product(levels.sorted(), repeat=arity):
                layer.add(Tree(name, ch))
        levels = FiniteTreeSet(layer, bound=h)
    return levels


def first_difference(L1, L2):
    """The least tree (canonical order, so minimal height) in exactly one of the sets."""
    diff = as_tree_set(L1).members ^ as_tree_set(L2).members
    return min(diff) if diff else None
