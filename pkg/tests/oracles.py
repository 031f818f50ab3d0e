"""Independent reference implementations used to check the library.

Nothing here calls the bounded engine in ``tree_arden.langset``: products are
computed by the plain recursive definition, closures either by unbounded
iteration or by deciding membership of every candidate tree.
"""

from functools import lru_cache
from itertools import product

from tree_arden.trees import Tree


def every_tree(arities, H):
    """All trees of height <= H over ``arities`` (name -> arity), by height layers."""
    upto = set()
    for _ in range(H):
        layer = set()
        pool = sorted(upto)
        for name, arity in sorted(arities.items()):
            for ch in product(pool, repeat=arity):
                layer.add(Tree(name, ch))
        upto = layer
    return upto


def naive_height(t):
    if not t.children:
        return 1
    return 1 + max(naive_height(c) for c in t.children)


def naive_tree_product(t, c, L):
    """``t ._c L`` straight from the three-case definition."""
    if not t.children:
        return set(L) if t.symbol == c else {t}
    parts = [naive_tree_product(u, c, L) for u in t.children]
    return {Tree(t.symbol, ch) for ch in product(*parts)}


def naive_product(L1, c, L2):
    out = set()
    for t in L1:
        out |= naive_tree_product(t, c, L2)
    return out


def naive_iterate(L, c, n):
    acc = {Tree(c)}
    for _ in range(n):
        acc = acc | naive_product(L, c, acc)
    return acc


def trunc(L, H):
    return {t for t in L if t.height <= H}


def in_product(t, u, c, member):
    """Whether ``t`` is in ``u ._c M`` where ``member`` decides membership in M."""
    if not u.children and u.symbol == c:
        return member(t)
    if t.symbol != u.symbol or len(t.children) != len(u.children):
        return False
    return all(in_product(a, b, c, member) for a, b in zip(t.children, u.children))


def closure_by_membership(L, c, candidates):
    """Members of ``L^{*c}`` among ``candidates``, deciding membership recursively.

    ``t`` is in the closure iff ``t == c`` or ``t`` lies in ``u ._c L^{*c}`` for
    some ``u`` in ``L`` with ``u != c`` (the tree ``c`` only maps the closure to
    itself).
    """
    L = [u for u in L if not (not u.children and u.symbol == c)]

    @lru_cache(maxsize=None)
    def member(t):
        if not t.children and t.symbol == c:
            return True
        # u != c, so every c leaf of u matches a proper subtree of t
        return any(u.height <= t.height and in_product(t, u, c, member) for u in L)

    return {t for t in candidates if member(t)}


def product_by_membership(L1, c, L2, candidates):
    L2 = set(L2)
    return {t for t in candidates if any(in_product(t, u, c, L2.__contains__) for u in L1)}


def brute_accepted(A, H):
    """Accepted trees found by running the automaton on every tree up to H."""
    return {t for t in every_tree(dict(A.alphabet.items()), H) if A.accepts(t)}


def naive_output(A, t):
    """Output function straight from its definition, without memoisation."""
    kids = [naive_output(A, c) for c in t.children]
    return {
        tr.target
        for tr in A.transitions
        if tr.symbol == t.symbol and len(tr.sources) == len(kids)
        and all(q in s for q, s in zip(tr.sources, kids))
    }
