import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import trees
from helpers import S, T
from oracles import brute_accepted, every_tree, naive_output
from tree_arden.eqsys import is_solution_bounded, least_solution_bounded, parse_system
from tree_arden.errors import ArityError, ParseError, UnknownSymbolError
from tree_arden.fta import (
    DEFAULT_RANDOM_ALPHABET,
    Transition,
    TreeAutomaton,
    accepts,
    down_languages,
    enumerate_accepted,
    format_automaton,
    output,
    parse_automaton,
    random_automaton,
    state_variable,
    to_equation_system,
    trim_accessible,
)
from tree_arden.langset import apply_symbol, union
from tree_arden.rexpr import ZERO, summands
from tree_arden.trees import RankedAlphabet

SIGMA = RankedAlphabet.parse("f/2 h/1 a/0 b/0")
automata = st.integers(0, 2**32 - 1).map(lambda s: random_automaton(random.Random(s)))
raw_automata = st.integers(0, 2**32 - 1).map(lambda s: random_automaton(random.Random(s), trim=False))


def single(A, finals):
    return TreeAutomaton(A.alphabet, A.states, finals, A.transitions)


class TestOutput:
    @pytest.mark.parametrize("text,states", [("a", {3, 4}), ("h(a)", {3, 4}), ("f(b,a)", {1, 2}), ("b", {2})])
    def test_examples(self, worked_example, text, states):
        assert output(worked_example, T(text)) == states

    def test_accepts(self, worked_example):
        assert accepts(worked_example, T("h(h(a))"))
        assert not accepts(worked_example, T("b"))
        assert not single(worked_example, []).accepts(T("a"))

    @given(automata, trees(DEFAULT_RANDOM_ALPHABET, max_leaves=8))
    def test_matches_definition(self, A, t):
        assert output(A, t) == naive_output(A, t)

    @given(automata, trees(DEFAULT_RANDOM_ALPHABET, max_leaves=8), st.data())
    def test_monotone_in_transitions(self, A, t, data):
        q = max(A.states)
        extra = data.draw(st.sampled_from([("a", (), q), ("h", (q,), q), ("f", (q, q), q)]))
        bigger = TreeAutomaton(A.alphabet, A.states, A.finals, set(A.transitions) | {extra})
        assert output(A, t) <= output(bigger, t)


class TestEnumerate:
    def test_examples(self, worked_example):
        assert enumerate_accepted(worked_example, 2) == S("a", "h(a)", "f(b,a)")
        assert enumerate_accepted(single(worked_example, [3]), 3) == S("a", "h(a)", "h(h(a))")
        assert enumerate_accepted(TreeAutomaton(SIGMA, [1, 2], [1], []), 3) == S()

    def test_worked_example_against_brute_force(self, worked_example):
        for H in range(1, 4):
            assert enumerate_accepted(worked_example, H) == brute_accepted(worked_example, H)

    @given(raw_automata, st.integers(1, 3))
    @settings(max_examples=50)
    def test_against_brute_force(self, A, H):
        assert enumerate_accepted(A, H) == brute_accepted(A, H)

    @given(raw_automata, st.integers(1, 4))
    def test_down_languages_decompose_over_transitions(self, A, H):
        langs = down_languages(A, H)
        for q in A.states:
            want = S()
            for tr in A.incoming(q):
                want = union(want, apply_symbol(tr.symbol, [langs[s] for s in tr.sources], H))
            assert langs[q] == want

    @given(raw_automata, st.integers(1, 4))
    def test_down_languages_solve_the_associated_system(self, A, H):
        A = trim_accessible(A)
        if not A.states:
            return
        X = to_equation_system(A)
        langs = {state_variable(q): L for q, L in down_languages(A, H).items()}
        assert is_solution_bounded(X, langs, H)
        assert least_solution_bounded(X, H) == langs

    def test_invalid_bound(self, worked_example):
        with pytest.raises(ValueError):
            enumerate_accepted(worked_example, 0)


class TestTrim:
    def test_examples(self, worked_example):
        assert trim_accessible(worked_example) == worked_example
        A = TreeAutomaton(SIGMA, [1, 2, 3, 4, 5], [1], worked_example.transitions | {Transition("h", (5,), 5)})
        assert trim_accessible(A).states == {1, 2, 3, 4}
        empty = trim_accessible(TreeAutomaton(SIGMA, [1, 2], [1], [("h", (1,), 2), ("f", (1, 2), 1)]))
        assert empty.states == frozenset() and empty.transitions == frozenset()

    def test_renumbers_densely(self):
        A = TreeAutomaton(SIGMA, [1, 2, 3], [3], [("h", (1,), 1), ("a", (), 3), ("h", (3,), 2)])
        B = trim_accessible(A)
        assert B.states == {1, 2} and B.finals == {2}
        assert B.transitions == {Transition("a", (), 2), Transition("h", (2,), 1)}

    @given(raw_automata, trees(DEFAULT_RANDOM_ALPHABET, max_leaves=8))
    def test_preserves_acceptance(self, A, t):
        assert accepts(A, t) == accepts(trim_accessible(A), t)


class TestEquationSystem:
    def test_worked_example_system(self, worked_example_system):
        want = parse_system(
            "vars: E1 E2 E3 E4\n"
            "E1 = f(E1,E1) + f(E2,E4)\n"
            "E2 = b + f(E2,E4)\n"
            "E3 = a + h(E4)\n"
            "E4 = a + h(E3)\n",
            SIGMA,
        )
        assert worked_example_system.variables == want.variables
        for v in want.variables:
            assert set(summands(worked_example_system[v])) == set(summands(want[v]))

    def test_summands_are_ordered(self, worked_example_system):
        assert worked_example_system.format(include_alphabet=False) == (
            "vars: E1 E2 E3 E4\n"
            "E1 = f(E1,E1) + f(E2,E4)\n"
            "E2 = b + f(E2,E4)\n"
            "E3 = a + h(E4)\n"
            "E4 = a + h(E3)\n"
        )

    def test_small_cases(self):
        X = to_equation_system(TreeAutomaton(SIGMA, [1], [1], [("a", (), 1)]))
        assert X.format(include_alphabet=False) == "vars: E1\nE1 = a\n"
        X = to_equation_system(TreeAutomaton(SIGMA, [1, 2], [1], [("a", (), 1)]))
        assert X["E2"] == ZERO


class TestFileFormat:
    def test_round_trip(self, worked_example):
        assert parse_automaton(format_automaton(worked_example)) == worked_example

    def test_named_states_map_to_dense_ids(self):
        A = parse_automaton("alphabet: a/0 h/1\nstates: even odd\nfinal: even\n"
                            "trans: a -> even\ntrans: h(even) -> odd\ntrans: h(odd) -> even\n")
        assert A.states == {1, 2} and A.finals == {1}
        assert accepts(A, T("h(h(a))")) and not accepts(A, T("h(a)"))

    def test_comments_and_nullary_forms(self, worked_example):
        text = ("# header\nalphabet: f/2 h/1 a/0 b/0   # symbols\nstates: 1 2 3 4\nfinals: 1 3\n"
                + "".join(f"trans: {t}\n" for t in sorted(worked_example.transitions)))
        assert parse_automaton(text) == worked_example

    @pytest.mark.parametrize("text,error,line,column", [
        ("alphabet: a/0\nstates: 1\ntrans: a -> 2\n", ParseError, 3, 13),
        ("alphabet: a/0\nstates: 1\ntrans: q -> 1\n", UnknownSymbolError, 3, 8),
        ("alphabet: a/0 h/1\nstates: 1\ntrans: h(1,1) -> 1\n", ArityError, 3, 8),
        ("alphabet: a/0\nstates: 1\ntrans: a -> \n", ParseError, 3, 13),
        ("alphabet: a/0\nstates: 1\ncolour: red\n", ParseError, 3, None),
        ("alphabet: a/0\nstates: 1\njunk\n", ParseError, 3, 1),
    ])
    def test_diagnostics(self, text, error, line, column):
        with pytest.raises(error) as info:
            parse_automaton(text, source="m.fta")
        assert info.value.line == line
        if column is not None:
            assert info.value.column == column
        assert str(info.value).startswith(f"m.fta:{line}:")

    def test_missing_sections(self):
        with pytest.raises(ParseError):
            parse_automaton("states: 1\n")
        with pytest.raises(ParseError):
            parse_automaton("alphabet: a/0\n")
        with pytest.raises(ParseError):
            parse_automaton("alphabet: a/0\nstates: 1\nfinal: 7\n")


class TestConstruction:
    def test_validation(self):
        with pytest.raises(ValueError):
            TreeAutomaton(SIGMA, [1], [2], [])
        with pytest.raises(ArityError):
            TreeAutomaton(SIGMA, [1], [1], [("f", (1,), 1)])
        with pytest.raises(ValueError):
            TreeAutomaton(SIGMA, [1], [1], [("h", (3,), 1)])

    def test_duplicate_transitions_collapse(self):
        A = TreeAutomaton(SIGMA, [1], [1], [("a", (), 1), ("a", [], 1)])
        assert len(A.transitions) == 1

    def test_random_automata_are_trimmed_and_bounded(self):
        rng = random.Random(11)
        for _ in range(100):
            A = random_automaton(rng)
            assert 1 <= len(A.states) <= 4 and len(A.transitions) <= 6
            assert trim_accessible(A) == A

    def test_brute_force_oracle_is_exhaustive(self, worked_example):
        assert len(every_tree(dict(SIGMA.items()), 2)) == 2 + 2 + 4
