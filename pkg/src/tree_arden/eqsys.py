"""Tree-language equation systems and their Arden-style elimination."""

import re
from dataclasses import dataclass, field
from typing import Mapping

from . import langset
from .errors import ExposedSymbolError, NotClosedError, ParseError, ShapeError, UnboundVariableError
from .langset import FiniteTreeSet
from .rexpr import (
    Prod,
    Star,
    Sum,
    Var,
    Zero,
    children,
    closedness_of,
    denote_bounded,
    exposed_symbols,
    factorize,
    normalize,
    occurs,
    parse_with_alphabet,
    render,
    substitute,
    sum_of,
    symbols_of,
    variables_of,
)
from .trees import RankedAlphabet


class EquationSystem:
    """Equations ``E_j = F_j``, one per variable, in declaration order."""

    def __init__(self, alphabet: RankedAlphabet, variables, equations: Mapping):
        self.alphabet = alphabet
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable")
        if set(equations) != set(self.variables):
            raise ValueError("exactly one equation per variable is required")
        self.equations = {v: equations[v] for v in self.variables}
        declared = set(self.variables)
        for v, rhs in self.equations.items():
            stray = variables_of(rhs) - declared
            if stray:
                raise UnboundVariableError(sorted(stray)[0])

    def __getitem__(self, var):
        return self.equations[self._name(var)]

    def __iter__(self):
        return iter(self.variables)

    def __len__(self):
        return len(self.variables)

    def __eq__(self, other):
        return (isinstance(other, EquationSystem) and self.variables == other.variables
                and self.equations == other.equations)

    def __repr__(self):
        return f"EquationSystem({self.format()!r})"

    def _name(self, var):
        if isinstance(var, int):
            if not 1 <= var <= len(self.variables):
                raise IndexError(f"variable index {var} out of range")
            return self.variables[var - 1]
        if var not in self.equations:
            raise KeyError(var)
        return var

    def index(self, var):
        """1-based position of ``var``."""
        return self.variables.index(self._name(var)) + 1

    def replace(self, var, rhs):
        var = self._name(var)
        return EquationSystem(self.alphabet, self.variables, {**self.equations, var: rhs})

    def without(self, var):
        """Drop the equation of ``var``, which must not occur in any other right-hand side."""
        var = self._name(var)
        users = [v for v in self.variables if v != var and occurs(self.equations[v], var)]
        if users:
            raise ValueError(f"{var} still occurs in the equation of {users[0]}")
        rest = [v for v in self.variables if v != var]
        return EquationSystem(self.alphabet, rest, {v: self.equations[v] for v in rest})

    def all_symbols(self):
        out = dict(self.alphabet.items())
        for rhs in self.equations.values():
            out.update(symbols_of(rhs))
        return out

    def format(self, include_alphabet=True):
        lines = []
        if include_alphabet:
            lines.append(f"alphabet: {self.alphabet}")
        lines.append("vars: " + " ".join(self.variables))
        lines += [f"{v} = {render(self.equations[v])}" for v in self.variables]
        return "\n".join(lines) + "\n"


def parse_system(text: str, alphabet: RankedAlphabet | None = None, source=None) -> EquationSystem:
    """Read ``[alphabet: ...]``, ``vars: E1 E2 ...`` and one ``Ej = <expr>`` line per variable.

    Without an alphabet line (or argument), symbol arities are inferred from use.
    """
    variables = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        m = re.match(r"\s*(alphabet|vars)\s*:(.*)$", body)
        if m:
            try:
                if m.group(1) == "alphabet":
                    alphabet = RankedAlphabet.parse(m.group(2))
                else:
                    variables = m.group(2).split()
            except ParseError as err:
                raise err.relocate(source, lineno - 1, m.start(2)) from None
            continue
        m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=(.*)$", body)
        if not m:
            raise ParseError("expected 'VAR = expression'", lineno, 1, source)
        rows.append((lineno, m.start(2), m.group(1), m.group(2)))
    if variables is None:
        raise ParseError("missing 'vars:' line", None, None, source)
    infer = alphabet is None
    alphabet = alphabet or RankedAlphabet()
    equations = {}
    for lineno, col, var, text_rhs in rows:
        if var not in variables:
            raise ParseError(f"undeclared variable {var!r}", lineno, 1, source)
        if var in equations:
            raise ParseError(f"second equation for {var!r}", lineno, 1, source)
        try:
            rhs, alphabet = parse_with_alphabet(text_rhs, alphabet, variables, infer=infer)
        except ParseError as err:
            raise err.relocate(source, lineno - 1, col) from None
        equations[var] = rhs
    missing = [v for v in variables if v not in equations]
    if missing:
        raise ParseError(f"no equation for {missing[0]!r}", None, None, source)
    return EquationSystem(alphabet, variables, equations)


# -- semantics --------------------------------------------------------------


def is_solution_bounded(X: EquationSystem, candidate: Mapping, H: int, only=None) -> bool:
    """Whether ``candidate`` satisfies every equation (or those in ``only``) up to height ``H``."""
    targets = X.variables if only is None else [X._name(v) for v in only]
    ctx = {}
    for v in X.variables:
        if v not in candidate:
            raise UnboundVariableError(v)
        ctx[v] = langset.truncate(langset.as_tree_set(candidate[v]), H)
    return all(ctx[v] == denote_bounded(X.equations[v], ctx, H) for v in targets)


def least_solution_bounded(X: EquationSystem, H: int) -> dict:
    """Least solution truncated to height ``H`` by Kleene iteration from the empty tuple.

    Right-hand sides are monotone in their variables, so the iterates increase
    and stabilise. This is the brute-force reference the solver is checked
    against.
    """
    ctx = {v: FiniteTreeSet(bound=H) for v in X.variables}
    while True:
        nxt = {v: denote_bounded(X.equations[v], ctx, H) for v in X.variables}
        if nxt == ctx:
            return ctx
        ctx = nxt


# -- transformations ----------------------------------------------------------


def substitute_system(X: EquationSystem, k) -> EquationSystem:
    """Substitute equation ``k`` into every other right-hand side."""
    var = X._name(k)
    rhs = X.equations[var]
    return EquationSystem(
        X.alphabet,
        X.variables,
        {v: (f if v == var else substitute(f, var, rhs)) for v, f in X.equations.items()},
    )


@dataclass(frozen=True)
class RecursionRelation:
    direct: frozenset  # pairs (j, k): E_j occurs in F_k
    closure: frozenset  # transitive closure of ``direct``
    self_recursive: frozenset  # E_k occurring in its own F_k
    on_cycle: frozenset  # E_k reaching itself through the closure

    @property
    def recursive(self):
        return bool(self.on_cycle)


def exposure(X: EquationSystem) -> dict:
    """Variable -> nullary symbols that may occur in its least solution (least fixpoint)."""
    out = {v: frozenset() for v in X.variables}
    while True:
        nxt = {v: exposed_symbols(X.equations[v], out) for v in X.variables}
        if nxt == out:
            return out
        out = nxt


def check_solvable(X: EquationSystem):
    """Raise unless ``X`` is closed and no bounded symbol can reach a variable's language."""
    report = closedness_of((v, X.equations[v]) for v in X.variables)
    if not report.closed:
        raise NotClosedError(f"system is not closed: {report.witness}", report.witness)
    exposed = exposure(X)
    for v in X.variables:
        leaked = sorted(exposed[v] & report.bounded_symbols)
        if leaked:
            raise ExposedSymbolError(
                f"bounded symbol {leaked[0]!r} may occur in the language of {v}; "
                "factorization would not preserve the solution", v, leaked[0])
    return report


def recursion_relation(X: EquationSystem) -> RecursionRelation:
    direct = {(j, k) for k in X.variables for j in variables_of(X.equations[k])}
    closure = set(direct)
    while True:
        extra = {(a, d) for (a, b) in closure for (c, d) in closure if b == c} - closure
        if not extra:
            break
        closure |= extra
    return RecursionRelation(
        frozenset(direct),
        frozenset(closure),
        frozenset(k for (j, k) in direct if j == k),
        frozenset(k for (j, k) in closure if j == k),
    )


def split_factorized(rhs, var):
    """Return ``(F', c, F'')`` for ``rhs = F' .[c] var + F''`` (``F''`` may be absent)."""
    head, rest = (rhs.left, rhs.right) if isinstance(rhs, Sum) else (rhs, Zero())
    if not (isinstance(head, Prod) and head.right == Var(var)):
        raise ShapeError(f"equation of {var} is not of the form F' .[c] {var} + F''")
    if occurs(head.left, var) or occurs(rest, var):
        raise ShapeError(f"{var} occurs outside the factorized position")
    return head.left, head.symbol, rest


def contract(rhs, var):
    """Arden step: ``F' .[c] var + F''`` becomes ``F'*[c] .[c] F''``."""
    head, c, rest = split_factorized(rhs, var)
    return Prod(Star(head, c), c, rest)


def contract_equation(X: EquationSystem, k) -> EquationSystem:
    var = X._name(k)
    return X.replace(var, contract(X.equations[var], var))


def fresh_symbol(X: EquationSystem, var, taken=()):
    """``x<k>`` for the k-th variable, suffixed ``_1, _2, ...`` on collision."""
    used = set(X.all_symbols()) | set(X.variables) | set(taken)
    base = f"x{X.index(var)}"
    name, n = base, 0
    while name in used:
        n += 1
        name = f"{base}_{n}"
    return name


# -- solving ----------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    kind: str  # Substitute, Factorize, Contract or BackSubstitute
    var: str
    fresh: str | None = None

    def __str__(self):
        return f"{self.kind}({self.var}, {self.fresh})" if self.fresh else f"{self.kind}({self.var})"


@dataclass
class SolveTrace:
    steps: list = field(default_factory=list)
    normalized: bool = True

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)

    def lines(self):
        return [str(s) for s in self.steps]


class _Solver:
    """Working state of an elimination: the remaining system plus deferred equations."""

    def __init__(self, X, normalized, on_step=None):
        self.X = X
        self.work = dict(X.equations)
        self.deferred = {}
        self.solved = {}
        self.norm = normalize if normalized else (lambda e: e)
        self.on_step = on_step

    def apply(self, step):
        v = step.var
        if step.kind == "Factorize":
            self.work[v] = self.norm_top(factorize(self.work[v], v, step.fresh))
        elif step.kind == "Contract":
            self.work[v] = self.norm(contract(self.work[v], v))
        elif step.kind == "Substitute":
            rhs = self.work.pop(v)
            for u in self.work:
                self.work[u] = self.norm(substitute(self.work[u], v, rhs))
            self.deferred[v] = rhs
        elif step.kind == "BackSubstitute":
            rhs = self.deferred[v]
            for u in sorted(variables_of(rhs)):
                rhs = substitute(rhs, u, self.solved[u])
            self.solved[v] = self.norm(rhs)
        else:
            raise ValueError(f"unknown step {step.kind!r}")
        if self.on_step is not None:
            self.on_step(step, self.snapshot())

    def norm_top(self, e):
        # normalize the parts but keep the factorized product, which `c .[c] E -> E`
        # would otherwise undo for a bare recursive summand
        if isinstance(e, Sum) and isinstance(e.left, Prod):
            return Sum(self._norm_prod(e.left), self.norm(e.right))
        if isinstance(e, Prod):
            return self._norm_prod(e)
        return self.norm(e)

    def _norm_prod(self, p):
        return Prod(self.norm(p.left), p.symbol, p.right)

    def snapshot(self):
        """Current equations (remaining, then deferred or solved) as a system."""
        eqs = {**self.deferred, **self.solved, **self.work}
        return EquationSystem(self.X.alphabet, self.X.variables, eqs)


def _order_key(order, X, work):
    if order == "desc":
        return lambda v: -X.index(v)
    if order == "asc":
        return lambda v: X.index(v)
    if order == "min-occ":
        def key(v):
            count = sum(_count_var(f, v) for u, f in work.items() if u != v)
            return (count, -X.index(v))
        return key
    raise ValueError(f"unknown elimination order {order!r}")


def _count_var(e, name):
    if isinstance(e, Var):
        return int(e.name == name)
    return sum(_count_var(c, name) for c in children(e))


def solve(X: EquationSystem, order="desc", normalized=True, on_step=None):
    """Solve a closed system by successive factorization, contraction and substitution.

    Returns ``(solutions, trace)`` where ``solutions`` maps each variable to a
    variable-free expression. Each contraction picks the least solution of its
    equation, so the result is the least solution of ``X``.

    Raises ``NotClosedError`` for systems that are not closed and
    ``ExposedSymbolError`` when a bounded symbol may reach a variable's
    language (for instance ``E1 = h(E1) + a*[a]``), where factorization would
    change the solutions.
    """
    check_solvable(X)
    trace = SolveTrace(normalized=normalized)
    solver = _Solver(X, normalized, on_step)
    taken = set()
    eliminated = []

    def run(step):
        trace.steps.append(step)
        solver.apply(step)

    while solver.work:
        var = min(solver.work, key=_order_key(order, X, solver.work))
        if occurs(solver.work[var], var):
            fresh = fresh_symbol(X, var, taken)
            taken.add(fresh)
            run(Step("Factorize", var, fresh))
            run(Step("Contract", var))
        run(Step("Substitute", var))
        eliminated.append(var)
    for var in reversed(eliminated):
        run(Step("BackSubstitute", var))
    return {v: solver.solved[v] for v in X.variables}, trace


def replay(X: EquationSystem, trace: SolveTrace):
    """Re-run the steps of ``trace`` on ``X`` and return the solutions."""
    solver = _Solver(X, trace.normalized)
    for step in trace:
        solver.apply(step)
    return {v: solver.solved[v] for v in X.variables}


def solution_system(X: EquationSystem, solutions) -> EquationSystem:
    """The solved equations as a system over the same variables."""
    return EquationSystem(X.alphabet, X.variables, solutions)


def automaton_to_expression(A, order="desc", normalized=True):
    """An expression for the language accepted by ``A``: the sum of the solved
    expressions of its final states."""
    from .fta import state_variable, to_equation_system

    solutions, _ = solve(to_equation_system(A), order=order, normalized=normalized)
    e = sum_of(solutions[state_variable(q)] for q in sorted(A.finals))
    return normalize(e) if normalized else e
