"""Comment-aware line counting.

A line counts when at least one of its characters lies outside every comment
region and is not whitespace. Comment regions are ``//`` to end of line and
``/* ... */`` (possibly spanning lines); delimiters inside string, char or
text-block literals never open a comment. Characters inside string literals
are code, so a line holding only ``"..."`` counts, while a whitespace-only
interior line of a text block does not.
"""

from __future__ import annotations

from .lexer import _TOKEN_RE

_COMMENT_GROUPS = ("linecomment", "blockcomment", "badcomment")


def count_loc(text: str) -> int:
    """Count non-blank, non-comment physical lines of Java-syntax source."""
    loc = 0
    has_code = False
    for match in _TOKEN_RE.finditer(text):
        group = match.lastgroup
        lexeme = match.group()
        if group == "ws" or group in _COMMENT_GROUPS:
            if "\n" in lexeme:
                if has_code:
                    loc += 1
                has_code = False
            continue
        if "\n" in lexeme:
            # Multi-line token (text block): account line by line.
            parts = lexeme.split("\n")
            if has_code or parts[0].strip():
                loc += 1
            for part in parts[1:-1]:
                if part.strip():
                    loc += 1
            has_code = bool(parts[-1].strip())
        else:
            has_code = True
    if has_code:
        loc += 1
    return loc
