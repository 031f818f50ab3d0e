"""Command-line front end.

    tree-arden solve FILE [--order desc|asc|min-occ] [--trace] [--system] [--no-normalize]
    tree-arden enumerate FILE [--height H]
    tree-arden equiv FILE_A FILE_B [--height H]
    tree-arden check-closed FILE
    tree-arden random [--seed N]

FILE is an automaton (has a ``states:`` line), an equation system (has a
``vars:`` line) or a single expression, optionally preceded by ``alphabet:``.
Exit status 2 signals a parse error, reported as ``file:line:column: message``.
"""

import argparse
import random
import re
import sys

from . import eqsys, fta, langset, rexpr
from .errors import ExposedSymbolError, NotClosedError, ParseError, TreeArdenError
from .trees import RankedAlphabet


def load(path):
    """Return ``('automaton' | 'system' | 'expression', value)`` for the file at ``path``."""
    with open(path) as fh:
        text = fh.read()
    return load_text(text, path)


def load_text(text, source=None):
    if re.search(r"^\s*states\s*:", text, re.M):
        return "automaton", fta.parse_automaton(text, source)
    if re.search(r"^\s*vars\s*:", text, re.M):
        return "system", eqsys.parse_system(text, source=source)
    return "expression", parse_expression_text(text, source)


def parse_expression_text(text, source=None):
    alphabet = None
    body_lines = []
    first = None
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        m = re.match(r"\s*alphabet\s*:(.*)$", body)
        if m:
            try:
                alphabet = RankedAlphabet.parse(m.group(1))
            except ParseError as err:
                raise err.relocate(source, lineno - 1, m.start(1)) from None
            body_lines.append("")
            continue
        if first is None and body.strip():
            first = lineno
        body_lines.append(body)
    try:
        expr, _ = rexpr.parse_with_alphabet(
            "\n".join(body_lines), alphabet or RankedAlphabet(), infer=alphabet is None
        )
    except ParseError as err:
        raise err.relocate(source) from None
    return expr


def language(kind, value, H):
    if kind == "automaton":
        return fta.enumerate_accepted(value, H)
    if kind == "expression":
        free = rexpr.variables_of(value)
        if free:
            raise TreeArdenError(f"expression has unbound variables: {', '.join(sorted(free))}")
        return rexpr.denote_bounded(value, {}, H)
    raise TreeArdenError("expected an automaton or an expression, got an equation system")


def cmd_solve(args, out):
    kind, value = load(args.file)
    normalized = not args.no_normalize
    if kind == "expression":
        raise TreeArdenError("solve expects an automaton or an equation system")
    system = fta.to_equation_system(value) if kind == "automaton" else value
    solutions, trace = eqsys.solve(system, order=args.order, normalized=normalized)
    if args.trace:
        for line in trace.lines():
            out.write(f"# step: {line}\n")
    if kind == "system" or args.system:
        text = eqsys.solution_system(system, solutions).format(include_alphabet=kind == "system")
        prefix = "" if kind == "system" else "# "
        out.write("".join(prefix + line + "\n" for line in text.splitlines()))
    if kind == "automaton":
        final = rexpr.sum_of(solutions[fta.state_variable(q)] for q in sorted(value.finals))
        if normalized:
            final = rexpr.normalize(final)
        out.write(rexpr.render(final) + "\n")
    return 0


def cmd_enumerate(args, out):
    kind, value = load(args.file)
    for t in language(kind, value, args.height):
        out.write(f"{t}\n")
    return 0


def cmd_equiv(args, out):
    left = language(*load(args.file_a), args.height)
    right = language(*load(args.file_b), args.height)
    witness = langset.first_difference(left, right)
    if witness is None:
        out.write(f"equivalent up to height {args.height} ({len(left)} trees)\n")
        return 0
    side = args.file_a if witness in left else args.file_b
    out.write(f"different: witness {witness} only in {side}\n")
    return 1


def cmd_check_closed(args, out):
    kind, value = load(args.file)
    if kind == "automaton":
        value = fta.to_equation_system(value)
        kind = "system"
    if kind == "system":
        report = rexpr.closedness_of((v, value[v]) for v in value.variables)
    else:
        report = rexpr.closedness(value)
    if report.closed:
        free = " ".join(sorted(report.free_symbols))
        bounded = " ".join(sorted(report.bounded_symbols))
        out.write(f"closed\nfree: {free}\nbounded: {bounded}\n")
        return 0
    out.write(f"not closed: {report.witness}\n")
    return 1


def cmd_random(args, out):
    rng = random.Random(args.seed)
    A = fta.random_automaton(rng, max_states=args.states, max_transitions=args.transitions)
    out.write(fta.format_automaton(A))
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized commands")

    parser = argparse.ArgumentParser(prog="tree-arden", description=__doc__.splitlines()[0],
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="solve an automaton or equation system")
    p.add_argument("file")
    p.add_argument("--order", choices=["desc", "asc", "min-occ"], default="desc")
    p.add_argument("--trace", action="store_true", help="print the elimination steps")
    p.add_argument("--system", action="store_true",
                   help="for automata, also print the solved system as comments")
    p.add_argument("--no-normalize", action="store_true", help="skip the safe rewrite rules")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("enumerate", parents=[common], help="list the trees up to a height")
    p.add_argument("file")
    p.add_argument("--height", type=_height, default=4)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("equiv", parents=[common], help="compare two languages up to a height")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--height", type=_height, default=4)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("check-closed", parents=[common], help="check closedness")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_closed)

    p = sub.add_parser("random", parents=[common], help="print a random trimmed automaton")
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--transitions", type=int, default=6)
    p.set_defaults(func=cmd_random)
    return parser


def _height(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("height must be at least 1")
    return value


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as err:
        sys.stderr.write(f"{err}\n")
        return 2
    except (NotClosedError, ExposedSymbolError) as err:
        sys.stderr.write(f"error: {err}\n")
        return 1
    except (TreeArdenError, OSError) as err:
        sys.stderr.write(f"error: {err}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
