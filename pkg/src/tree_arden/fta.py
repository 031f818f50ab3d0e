"""Bottom-up finite tree automata."""

from dataclasses import dataclass
from typing import Iterable

from . import langset
from .eqsys import EquationSystem
from .errors import ArityError, ParseError, UnknownSymbolError
from .langset import FiniteTreeSet
from .lexer import TokenStream
from .rexpr import Apply, Var, sum_of
from .trees import RankedAlphabet, Tree


@dataclass(frozen=True, order=True)
class Transition:
    """``symbol(sources...) -> target``."""

    symbol: str
    sources: tuple
    target: int

    def __str__(self):
        args = ",".join(map(str, self.sources))
        return f"{self.symbol}({args}) -> {self.target}" if self.sources else f"{self.symbol} -> {self.target}"


class TreeAutomaton:
    """A finite tree automaton ``(alphabet, states, finals, transitions)``.

    States are the integers ``1..n`` so that state ``q`` corresponds to the
    equation variable ``E<q>``.
    """

    def __init__(self, alphabet: RankedAlphabet, states: Iterable[int], finals: Iterable[int],
                 transitions: Iterable):
        self.alphabet = alphabet
        self.states = frozenset(states)
        self.finals = frozenset(finals)
        trans = set()
        for t in transitions:
            if not isinstance(t, Transition):
                symbol, sources, target = t
                t = Transition(symbol, tuple(sources), target)
            trans.add(t)
        self.transitions = frozenset(trans)
        if not self.finals <= self.states:
            raise ValueError(f"final states {sorted(self.finals - self.states)} are not states")
        for t in self.transitions:
            if alphabet.arity(t.symbol) != len(t.sources):
                raise ArityError(f"transition {t} does not match arity of {t.symbol!r}")
            missing = ({t.target} | set(t.sources)) - self.states
            if missing:
                raise ValueError(f"transition {t} uses unknown states {sorted(missing)}")
        self._by_symbol = {}
        for t in sorted(self.transitions):
            self._by_symbol.setdefault(t.symbol, []).append(t)

    def __eq__(self, other):
        return (isinstance(other, TreeAutomaton) and self.alphabet == other.alphabet
                and self.states == other.states and self.finals == other.finals
                and self.transitions == other.transitions)

    def __hash__(self):
        return hash((self.alphabet, self.states, self.finals, self.transitions))

    def __repr__(self):
        return (f"TreeAutomaton(states={sorted(self.states)}, finals={sorted(self.finals)}, "
                f"transitions={len(self.transitions)})")

    def incoming(self, q):
        """Transitions targeting ``q`` ordered by symbol then source states."""
        return sorted(t for t in self.transitions if t.target == q)

    def output(self, t: Tree):
        return output(self, t)

    def accepts(self, t: Tree):
        return accepts(self, t)


def output(A: TreeAutomaton, t: Tree) -> frozenset:
    """The set of states reached bottom-up on ``t``."""
    memo = {}

    def go(u):
        hit = memo.get(u)
        if hit is not None:
            return hit
        kids = [go(c) for c in u.children]
        out = frozenset(
            tr.target
            for tr in A._by_symbol.get(u.symbol, ())
            if len(tr.sources) == len(kids) and all(q in s for q, s in zip(tr.sources, kids))
        )
        memo[u] = out
        return out

    return go(t)


def accepts(A: TreeAutomaton, t: Tree) -> bool:
    return bool(output(A, t) & A.finals)


def down_languages(A: TreeAutomaton, H: int) -> dict:
    """State -> trees of height <= H reaching that state.

    Least fixpoint of ``L(q) = union over (f, q1..qn, q) of f(L(q1), ..., L(qn))``.
    """
    if H < 1:
        raise ValueError("height bound must be at least 1")
    langs = {q: FiniteTreeSet(bound=H) for q in A.states}
    for _ in range(H + 1):
        nxt = {}
        for q in sorted(A.states):
            acc = FiniteTreeSet(bound=H)
            for tr in A.incoming(q):
                acc = langset.union(acc, langset.apply_symbol(tr.symbol, [langs[s] for s in tr.sources], H), H)
            nxt[q] = acc
        if nxt == langs:
            return langs
        langs = nxt
    raise langset.FixpointError("down-language iteration did not stabilise")


def enumerate_accepted(A: TreeAutomaton, H: int) -> FiniteTreeSet:
    """Accepted trees of height at most ``H``."""
    langs = down_languages(A, H)
    acc = FiniteTreeSet(bound=H)
    for q in sorted(A.finals):
        acc = langset.union(acc, langs[q], H)
    return acc


def trim_accessible(A: TreeAutomaton) -> TreeAutomaton:
    """Drop states with an empty down language, renumbering survivors ``1..m``."""
    alive = set()
    changed = True
    while changed:
        changed = False
        for tr in A.transitions:
            if tr.target not in alive and all(s in alive for s in tr.sources):
                alive.add(tr.target)
                changed = True
    if alive == set(A.states):
        return A
    renum = {q: i for i, q in enumerate(sorted(alive), 1)}
    trans = [
        Transition(tr.symbol, tuple(renum[s] for s in tr.sources), renum[tr.target])
        for tr in A.transitions
        if tr.target in alive and all(s in alive for s in tr.sources)
    ]
    return TreeAutomaton(A.alphabet, renum.values(), [renum[q] for q in A.finals if q in alive], trans)


def state_variable(q):
    return f"E{q}"


def to_equation_system(A: TreeAutomaton) -> EquationSystem:
    """One equation per state: ``E_q`` is the sum of ``f(E_q1, ..., E_qn)`` over
    transitions into ``q``."""
    states = sorted(A.states)
    if states != list(range(1, len(states) + 1)):
        raise ValueError("states must be numbered 1..n")
    variables = [state_variable(q) for q in states]
    equations = {}
    for q in states:
        terms = [Apply(tr.symbol, tuple(Var(state_variable(s)) for s in tr.sources)) for tr in A.incoming(q)]
        equations[state_variable(q)] = sum_of(terms)
    return EquationSystem(A.alphabet, variables, equations)


# -- file format ------------------------------------------------------------


def parse_automaton(text: str, source=None) -> TreeAutomaton:
    """Read the line-oriented automaton format::

        alphabet: f/2 h/1 a/0 b/0
        states: 1 2 3 4
        final: 1 3
        trans: f(1,1) -> 1
        trans: a -> 3
    """
    alphabet = None
    state_names = None
    finals = []
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        key, sep, rest = body.partition(":")
        key = key.strip()
        if not sep:
            raise ParseError("expected 'key: value'", lineno, 1, source)
        offset = len(body) - len(rest)
        try:
            if key == "alphabet":
                alphabet = RankedAlphabet.parse(rest)
            elif key == "states":
                state_names = rest.split()
                if len(set(state_names)) != len(state_names):
                    raise ParseError("duplicate state")
            elif key in ("final", "finals"):
                finals.extend(rest.split())
            elif key == "trans":
                raw.append((lineno, offset, _parse_transition(rest)))
            else:
                raise ParseError(f"unknown key {key!r}")
        except ParseError as err:
            raise err.relocate(source, lineno - 1, offset) from None
    if alphabet is None:
        raise ParseError("missing 'alphabet:' line", None, None, source)
    if state_names is None:
        raise ParseError("missing 'states:' line", None, None, source)
    ids = _number_states(state_names)
    trans = []
    for lineno, offset, (sym_tok, source_toks, target_tok) in raw:
        def fail(msg, tok, cls=ParseError):
            raise cls(msg, lineno, offset + tok.column, source)

        if sym_tok.text not in alphabet:
            fail(f"unknown symbol {sym_tok.text!r}", sym_tok, UnknownSymbolError)
        if alphabet.arity(sym_tok.text) != len(source_toks):
            fail(f"symbol {sym_tok.text!r} has arity {alphabet.arity(sym_tok.text)}, "
                 f"got {len(source_toks)}", sym_tok, ArityError)
        for tok in (*source_toks, target_tok):
            if tok.text not in ids:
                fail(f"unknown state {tok.text!r}", tok)
        trans.append(Transition(sym_tok.text, tuple(ids[t.text] for t in source_toks), ids[target_tok.text]))
    for f in finals:
        if f not in ids:
            raise ParseError(f"unknown final state {f!r}", None, None, source)
    return TreeAutomaton(alphabet, ids.values(), [ids[f] for f in finals], trans)


def _number_states(names):
    if all(n.isdigit() for n in names) and sorted(int(n) for n in names) == list(range(1, len(names) + 1)):
        return {n: int(n) for n in names}
    return {n: i for i, n in enumerate(names, 1)}


def _parse_transition(text):
    ts = TokenStream(text)
    sym_tok = ts.expect("name")
    sources = []
    if ts.accept("("):
        if not ts.accept(")"):
            sources.append(_state_token(ts))
            while ts.accept(","):
                sources.append(_state_token(ts))
            ts.expect(")")
    ts.expect("arrow")
    target = _state_token(ts)
    ts.expect_end()
    return sym_tok, sources, target


def _state_token(ts):
    tok = ts.peek()
    if tok.kind in ("name", "number", "zero"):
        return ts.next()
    ts.fail(f"expected a state, found {tok.text or 'end of input'!r}", tok)


def format_automaton(A: TreeAutomaton) -> str:
    lines = [
        f"alphabet: {A.alphabet}",
        "states: " + " ".join(map(str, sorted(A.states))),
        "final: " + " ".join(map(str, sorted(A.finals))),
    ]
    lines += [f"trans: {t}" for t in sorted(A.transitions)]
    return "\n".join(lines) + "\n"


DEFAULT_RANDOM_ALPHABET = RankedAlphabet({"a": 0, "b": 0, "h": 1, "f": 2})


def random_automaton(rng, max_states=4, max_transitions=6, alphabet=DEFAULT_RANDOM_ALPHABET,
                     trim=True):
    """A random automaton drawn from ``rng`` (a ``random.Random``).

    With ``trim`` the result is accessible and has at least one state; draws
    that trim to nothing are retried.
    """
    symbols = sorted(alphabet.items())
    leaves = [s for s, a in symbols if a == 0]
    if not leaves:
        raise ValueError("alphabet needs a nullary symbol")
    while True:
        n = rng.randint(1, max_states)
        count = rng.randint(1, max_transitions)
        trans = [(rng.choice(leaves), (), rng.randint(1, n))]
        for _ in range(count - 1):
            name, arity = rng.choice(symbols)
            trans.append((name, tuple(rng.randint(1, n) for _ in range(arity)), rng.randint(1, n)))
        finals = [q for q in range(1, n + 1) if rng.random() < 0.5] or [rng.randint(1, n)]
        A = TreeAutomaton(alphabet, range(1, n + 1), finals, trans)
        if not trim:
            return A
        A = trim_accessible(A)
        if A.states:
            return A
