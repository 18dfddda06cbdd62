"""Minimal s-expression reader/writer.

One parenthesized syntax is shared by every file format in the package
(structures, trees, formulas, alphabets, schemes).  Atoms are bare tokens
or double-quoted strings; `;` starts a comment running to end of line.
Parsed atoms are plain Python strings; nesting is plain lists.
"""

from __future__ import annotations

from .errors import FormatError

_DELIMS = set("()\";")


def tokenize(text):
    """Yield (token, line, col) triples; token '(' and ')' are structural."""
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            col += 1
            i += 1
        elif ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            buf = []
            while i < n and text[i] != '"':
                c = text[i]
                if c == "\\" and i + 1 < n:
                    i += 1
                    col += 1
                    c = text[i]
                if c == "\n":
                    line += 1
                    col = 0
                buf.append(c)
                i += 1
                col += 1
            if i >= n:
                raise FormatError("unterminated string", start_line, start_col)
            i += 1
            col += 1
            yield "".join(buf), start_line, start_col
        else:
            start = i
            start_col = col
            while i < n and not text[i].isspace() and text[i] not in _DELIMS:
                i += 1
                col += 1
            yield text[start:i], line, start_col


def parse(text):
    """Parse a single s-expression; trailing content is an error."""
    exprs = parse_many(text)
    if len(exprs) != 1:
        raise FormatError(f"expected exactly one expression, found {len(exprs)}")
    return exprs[0]


def parse_many(text):
    """Parse a sequence of s-expressions."""
    stack = [[]]
    for tok, line, col in tokenize(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise FormatError("unmatched ')'", line, col)
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise FormatError("unclosed '('")
    return stack[0]


def _needs_quoting(atom):
    if atom == "":
        return True
    return any(c.isspace() or c in _DELIMS for c in atom)


def dump(expr):
    """Render an s-expression (str atoms, nested lists) back to text."""
    if isinstance(expr, str):
        if _needs_quoting(expr):
            escaped = expr.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return expr
    if isinstance(expr, int):
        return str(expr)
    return "(" + " ".join(dump(e) for e in expr) + ")"
