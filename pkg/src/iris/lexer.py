"""Regex-driven tokenizer for Java-syntax source text.

Comments and whitespace are consumed but never emitted; string, char and
text-block literals are emitted as single tokens so that comment delimiters
or dots inside them can never confuse the structural parser. Multi-character
operators are split into single characters except ``->`` and ``::``, which
the body scanner needs as units.
"""

from __future__ import annotations

import re
from typing import NamedTuple

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null""".split()
)

# Contextual keywords (var, record, yield, sealed, permits) are lexed as
# plain names; the parser decides from context.
PRIMITIVES = frozenset(
    "boolean byte char short int long float double".split()
)

MODIFIER_KEYWORDS = frozenset(
    """public protected private static abstract final native synchronized
    transient volatile strictfp default""".split()
)


class Token(NamedTuple):
    kind: str  # "name" | "kw" | "num" | "str" | "char" | "op" | "err" | "eof"
    text: str
    line: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f]+)
  | (?P<linecomment>//[^\n]*)
  | (?P<blockcomment>/\*(?s:.*?)\*/)
  | (?P<badcomment>/\*(?s:.*))                      # unterminated block comment
  | (?P<textblock>\"\"\"(?s:.*?)(?<!\\)\"\"\")
  | (?P<string>"(?:\\.|[^"\\\n])*")
  | (?P<badstring>"(?:\\.|[^"\\\n])*)               # unterminated string
  | (?P<char>'(?:\\.|[^'\\\n])*?')
  | (?P<number>
        0[xX][0-9a-fA-F_]+[lL]?
      | 0[bB][01_]+[lL]?
      | \d[\d_]*\.[\d_]*(?:[eE][+-]?\d+)?[fFdD]?
      | \.\d[\d_]*(?:[eE][+-]?\d+)?[fFdD]?
      | \d[\d_]*(?:[eE][+-]?\d+)?[fFdDlL]?
    )
  | (?P<name>(?:[^\W\d]|\$)[\w$]*)
  | (?P<arrow>->)
  | (?P<coloncolon>::)
  | (?P<op>[{}()\[\];,.@<>=+\-*/%!&|^?:~])
  | (?P<other>.)
    """,
    re.VERBOSE,
)

# Groups whose lexeme can span lines and therefore needs newline counting.
_MULTILINE_GROUPS = ("ws", "blockcomment", "badcomment", "textblock")


def tokenize(text: str) -> list[Token]:
    """Tokenize source text; always succeeds, flagging bad lexemes as "err"."""
    tokens: list[Token] = []
    append = tokens.append
    line = 1
    for match in _TOKEN_RE.finditer(text):
        group = match.lastgroup
        lexeme = match.group()
        if group == "ws":
            line += lexeme.count("\n")
            continue
        if group in ("linecomment", "blockcomment"):
            line += lexeme.count("\n")
            continue
        if group == "name":
            kind = "kw" if lexeme in KEYWORDS else "name"
        elif group == "number":
            kind = "num"
        elif group in ("string", "textblock"):
            kind = "str"
        elif group == "char":
            kind = "char"
        elif group in ("arrow", "coloncolon", "op"):
            kind = "op"
        elif group in ("badcomment", "badstring", "other"):
            kind = "err"
        else:
            kind = "op"
        append(Token(kind, lexeme, line))
        if group in _MULTILINE_GROUPS or "\n" in lexeme:
            line += lexeme.count("\n")
    append(Token("eof", "", line))
    return tokens
