"""Rational tree expressions, finite tree automata and Arden-style equation solving."""

from .eqsys import (
    EquationSystem,
    SolveTrace,
    automaton_to_expression,
    contract_equation,
    is_solution_bounded,
    parse_system,
    recursion_relation,
    solve,
    substitute_system,
)
from .fta import (
    TreeAutomaton,
    accepts,
    enumerate_accepted,
    output,
    parse_automaton,
    to_equation_system,
    trim_accessible,
)
from .langset import (
    FiniteTreeSet,
    apply_symbol,
    c_product,
    closure_bounded,
    iter_product,
    union,
)
from .rexpr import (
    closedness,
    denote_bounded,
    factorize,
    k_split,
    normalize,
    ops_of,
    parse,
    render,
    substitute,
)
from .trees import RankedAlphabet, Tree, height, parse_tree, subtrees, tree_c_product

__version__ = "0.1.0"
