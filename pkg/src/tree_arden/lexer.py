"""Tokenizer shared by the tree, expression and file-format parsers."""

import re
from dataclasses import dataclass

from .errors import ParseError

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<zero>0(?![0-9]))
  | (?P<number>[0-9]+)
  | (?P<dot>\.\[)
  | (?P<star>\*\[)
  | (?P<arrow>->)
  | (?P<punct>[(),+\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'name', 'zero', 'number', 'dot', 'star', 'arrow', one of "(),+]", or 'eof'
    text: str
    line: int
    column: int


def tokenize(text):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rindex("\n") + 1
        else:
            if kind == "punct":
                kind = m.group()
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self, offset=0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def accept(self, kind):
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind):
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {_describe(kind)}, found {_describe(tok.kind, tok.text)}", tok)
        return self.next()

    def expect_end(self):
        tok = self.peek()
        if tok.kind != "eof":
            self.fail(f"unexpected {_describe(tok.kind, tok.text)}", tok)

    def fail(self, message, tok=None, cls=ParseError):
        tok = tok or self.peek()
        raise cls(message, tok.line, tok.column)


def _describe(kind, text=None):
    if kind == "eof":
        return "end of input"
    if kind == "name":
        return f"name {text!r}" if text else "a name"
    if kind in ("dot", "star"):
        return repr(text or (".[" if kind == "dot" else "*["))
    return repr(text or kind)
