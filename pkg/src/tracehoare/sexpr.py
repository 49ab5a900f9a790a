"""Minimal s-expression reader/writer with source positions."""

from __future__ import annotations


class SExprError(ValueError):
    """Raised on malformed input; carries line/column of the offending token."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class Sym(str):
    """A bare token. Behaves as a plain string; remembers where it was read."""

    line: int
    col: int

    def __new__(cls, text: str, line: int = 0, col: int = 0):
        obj = super().__new__(cls, text)
        obj.line = line
        obj.col = col
        return obj


class Quoted(str):
    """A double-quoted string literal (kept distinct from bare symbols)."""

    line: int
    col: int

    def __new__(cls, text: str, line: int = 0, col: int = 0):
        obj = super().__new__(cls, text)
        obj.line = line
        obj.col = col
        return obj


def _tokenize(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield (c, line, col)
            i += 1
            col += 1
        elif c == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            buf = []
            while i < n and text[i] != '"':
                if text[i] == "\\" and i + 1 < n:
                    i += 1
                    col += 1
                if text[i] == "\n":
                    line += 1
                    col = 0
                buf.append(text[i])
                i += 1
                col += 1
            if i >= n:
                raise SExprError("unterminated string", start_line, start_col)
            i += 1
            col += 1
            yield (Quoted("".join(buf), start_line, start_col), start_line, start_col)
        else:
            start_line, start_col = line, col
            j = i
            while j < n and text[j] not in ' \t\r\n();"':
                j += 1
            yield (Sym(text[i:j], start_line, start_col), start_line, start_col)
            col += j - i
            i = j


def parse_many(text: str) -> list:
    """Parse all toplevel forms. Lists become Python lists, atoms Sym/Quoted."""
    stack: list[list] = []
    top: list = []
    last_open: list[tuple[int, int]] = []
    for tok, ln, co in _tokenize(text):
        if tok == "(" and isinstance(tok, str) and not isinstance(tok, (Sym, Quoted)):
            stack.append(top)
            top = []
            last_open.append((ln, co))
        elif tok == ")" and isinstance(tok, str) and not isinstance(tok, (Sym, Quoted)):
            if not stack:
                raise SExprError("unbalanced ')'", ln, co)
            done = top
            top = stack.pop()
            last_open.pop()
            top.append(done)
        else:
            top.append(tok)
    if stack:
        ln, co = last_open[-1]
        raise SExprError("unclosed '('", ln, co)
    return top


def parse_one(text: str):
    forms = parse_many(text)
    if len(forms) != 1:
        raise SExprError(f"expected exactly one form, got {len(forms)}", 1, 1)
    return forms[0]


def write_sexpr(node) -> str:
    if isinstance(node, Quoted):
        escaped = str(node).replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(node, str):
        return str(node)
    return "(" + " ".join(write_sexpr(x) for x in node) + ")"


def head(node) -> str:
    """Lower-case head symbol of a list form, or '' if not applicable."""
    if isinstance(node, list) and node and isinstance(node[0], str):
        return str(node[0]).lower()
    return ""


def position(node) -> tuple[int, int]:
    if isinstance(node, (Sym, Quoted)):
        return node.line, node.col
    if isinstance(node, list) and node:
        return position(node[0])
    return 0, 0
