"""First-order term language over program variables.

Integer terms use +, -, * and constants; boolean terms use comparisons,
conjunction, disjunction, negation and bounded existential quantification.
Both a prefix s-expression syntax and a small infix syntax (for quoted
formula/cost strings) are supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from .sexpr import Quoted, SExprError, Sym, position, write_sexpr


class ExprError(ValueError):
    pass


# --- integer terms ---------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - *
    left: "IntExpr"
    right: "IntExpr"


IntExpr = Union[Var, Lit, Bin]


# --- boolean terms ---------------------------------------------------------


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str  # one of = != <= < >= >
    left: IntExpr
    right: IntExpr


@dataclass(frozen=True)
class And:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Or:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Not:
    body: "BoolExpr"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "BoolExpr"


BoolExpr = Union[BoolLit, Cmp, And, Or, Not, Exists]

Normalizer = Optional[Callable[[int], int]]


def eval_int(e: IntExpr, env: Mapping[str, int], norm: Normalizer = None) -> int:
    """Evaluate an integer term.

    When `norm` is given, every arithmetic step is normalized into the
    configured finite domain (program semantics); without it the term is
    evaluated over unbounded integers (assertion/cost formulas).
    """
    if isinstance(e, Lit):
        return norm(e.value) if norm else e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise ExprError(f"unbound variable {e.name!r}") from None
    l = eval_int(e.left, env, norm)
    r = eval_int(e.right, env, norm)
    if e.op == "+":
        v = l + r
    elif e.op == "-":
        v = l - r
    elif e.op == "*":
        v = l * r
    else:
        raise ExprError(f"unknown operator {e.op!r}")
    return norm(v) if norm else v


_CMP = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


def eval_bool(e: BoolExpr, env: Mapping[str, int], norm: Normalizer = None,
              domain=None) -> bool:
    if isinstance(e, BoolLit):
        return e.value
    if isinstance(e, Cmp):
        return _CMP[e.op](eval_int(e.left, env, norm), eval_int(e.right, env, norm))
    if isinstance(e, And):
        return eval_bool(e.left, env, norm, domain) and eval_bool(e.right, env, norm, domain)
    if isinstance(e, Or):
        return eval_bool(e.left, env, norm, domain) or eval_bool(e.right, env, norm, domain)
    if isinstance(e, Not):
        return not eval_bool(e.body, env, norm, domain)
    if isinstance(e, Exists):
        if domain is None:
            raise ExprError("existential quantifier needs a finite domain")
        inner = dict(env)
        for v in domain:
            inner[e.var] = v
            if eval_bool(e.body, inner, norm, domain):
                return True
        return False
    raise ExprError(f"not a boolean term: {e!r}")


def int_vars(e: IntExpr) -> frozenset:
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Lit):
        return frozenset()
    return int_vars(e.left) | int_vars(e.right)


def bool_vars(e: BoolExpr) -> frozenset:
    if isinstance(e, BoolLit):
        return frozenset()
    if isinstance(e, Cmp):
        return int_vars(e.left) | int_vars(e.right)
    if isinstance(e, (And, Or)):
        return bool_vars(e.left) | bool_vars(e.right)
    if isinstance(e, Not):
        return bool_vars(e.body)
    return bool_vars(e.body) - {e.var}


def substitute_int(e: IntExpr, var: str, repl: IntExpr) -> IntExpr:
    if isinstance(e, Var):
        return repl if e.name == var else e
    if isinstance(e, Lit):
        return e
    return Bin(e.op, substitute_int(e.left, var, repl), substitute_int(e.right, var, repl))


def substitute_bool(e: BoolExpr, var: str, repl: IntExpr) -> BoolExpr:
    if isinstance(e, BoolLit):
        return e
    if isinstance(e, Cmp):
        return Cmp(e.op, substitute_int(e.left, var, repl), substitute_int(e.right, var, repl))
    if isinstance(e, And):
        return And(substitute_bool(e.left, var, repl), substitute_bool(e.right, var, repl))
    if isinstance(e, Or):
        return Or(substitute_bool(e.left, var, repl), substitute_bool(e.right, var, repl))
    if isinstance(e, Not):
        return Not(substitute_bool(e.body, var, repl))
    if isinstance(e, Exists):
        if e.var == var:
            return e
        return Exists(e.var, substitute_bool(e.body, var, repl))
    raise ExprError(f"not a boolean term: {e!r}")


# --- prefix (s-expression) syntax ------------------------------------------


def parse_int_sx(node) -> IntExpr:
    if isinstance(node, Sym):
        s = str(node)
        try:
            return Lit(int(s))
        except ValueError:
            return Var(s)
    if isinstance(node, list) and node:
        op = str(node[0])
        if op in ("+", "-", "*"):
            if len(node) < 3:
                ln, co = position(node)
                raise SExprError(f"operator {op} needs two arguments", ln, co)
            acc = parse_int_sx(node[1])
            for arg in node[2:]:
                acc = Bin(op, acc, parse_int_sx(arg))
            return acc
    ln, co = position(node)
    raise SExprError(f"bad integer term {write_sexpr(node)}", ln, co)


def parse_bool_sx(node) -> BoolExpr:
    if isinstance(node, Sym):
        s = str(node).lower()
        if s in ("true", "#t"):
            return BoolLit(True)
        if s in ("false", "#f"):
            return BoolLit(False)
    if isinstance(node, list) and node:
        op = str(node[0]).lower()
        if op in _CMP:
            return Cmp(op, parse_int_sx(node[1]), parse_int_sx(node[2]))
        if op == "==":
            return Cmp("=", parse_int_sx(node[1]), parse_int_sx(node[2]))
        if op == "and":
            acc = parse_bool_sx(node[1])
            for arg in node[2:]:
                acc = And(acc, parse_bool_sx(arg))
            return acc
        if op == "or":
            acc = parse_bool_sx(node[1])
            for arg in node[2:]:
                acc = Or(acc, parse_bool_sx(arg))
            return acc
        if op == "not":
            return Not(parse_bool_sx(node[1]))
        if op == "exists":
            return Exists(str(node[1]), parse_bool_sx(node[2]))
    ln, co = position(node)
    raise SExprError(f"bad boolean term {write_sexpr(node)}", ln, co)


def format_int_sx(e: IntExpr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Lit):
        return str(e.value)
    return f"({e.op} {format_int_sx(e.left)} {format_int_sx(e.right)})"


def format_bool_sx(e: BoolExpr) -> str:
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, Cmp):
        return f"({e.op} {format_int_sx(e.left)} {format_int_sx(e.right)})"
    if isinstance(e, And):
        return f"(and {format_bool_sx(e.left)} {format_bool_sx(e.right)})"
    if isinstance(e, Or):
        return f"(or {format_bool_sx(e.left)} {format_bool_sx(e.right)})"
    if isinstance(e, Not):
        return f"(not {format_bool_sx(e.body)})"
    return f"(exists {e.var} {format_bool_sx(e.body)})"


# --- infix syntax for quoted formula/cost strings --------------------------

_INFIX_OPS = ("<=", ">=", "!=", "=", "<", ">", "&", "|", "!", "+", "-", "*", "(", ")")


def _lex_infix(text: str):
    i, n = 0, len(text)
    out = []
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for op in _INFIX_OPS:
            if text.startswith(op, i):
                out.append(op)
                i += len(op)
                break
        else:
            if c.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                out.append(int(text[i:j]))
                i = j
            elif c.isalpha() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                out.append(text[i:j])
                i = j
            else:
                raise ExprError(f"bad character {c!r} in {text!r}")
    return out


class _InfixParser:
    """Precedence climbing: | < & < ! < comparison < additive < multiplicative."""

    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, t):
        got = self.take()
        if got != t:
            raise ExprError(f"expected {t!r}, got {got!r}")

    def parse_bool(self) -> BoolExpr:
        e = self.parse_or()
        if self.peek() is not None:
            raise ExprError(f"trailing input at {self.peek()!r}")
        return e

    def parse_or(self):
        e = self.parse_and()
        while self.peek() == "|":
            self.take()
            e = Or(e, self.parse_and())
        return e

    def parse_and(self):
        e = self.parse_not()
        while self.peek() == "&":
            self.take()
            e = And(e, self.parse_not())
        return e

    def parse_not(self):
        if self.peek() == "!":
            self.take()
            return Not(self.parse_not())
        if self.peek() == "exists":
            self.take()
            var = self.take()
            if not isinstance(var, str) or var in _INFIX_OPS:
                raise ExprError("exists needs a variable name")
            self.expect("(")
            body = self.parse_or()
            self.expect(")")
            return Exists(var, body)
        return self.parse_cmp()

    def parse_cmp(self):
        if self.peek() == "(":
            # Could be a parenthesized boolean or an integer subterm; try
            # boolean first and fall back to a comparison of integer terms.
            save = self.i
            try:
                self.take()
                e = self.parse_or()
                self.expect(")")
                return e
            except ExprError:
                self.i = save
        if self.peek() in ("true", "false"):
            return BoolLit(self.take() == "true")
        left = self.parse_add()
        op = self.peek()
        if op not in _CMP:
            raise ExprError(f"expected comparison, got {op!r}")
        self.take()
        right = self.parse_add()
        return Cmp(op, left, right)

    def parse_int(self) -> IntExpr:
        e = self.parse_add()
        if self.peek() is not None:
            raise ExprError(f"trailing input at {self.peek()!r}")
        return e

    def parse_add(self):
        e = self.parse_mul()
        while self.peek() in ("+", "-"):
            op = self.take()
            e = Bin(op, e, self.parse_mul())
        return e

    def parse_mul(self):
        e = self.parse_atom()
        while self.peek() == "*":
            self.take()
            e = Bin("*", e, self.parse_atom())
        return e

    def parse_atom(self):
        t = self.take()
        if t == "(":
            e = self.parse_add()
            self.expect(")")
            return e
        if t == "-":
            inner = self.parse_atom()
            return Bin("-", Lit(0), inner)
        if isinstance(t, int):
            return Lit(t)
        if isinstance(t, str) and t not in _INFIX_OPS:
            return Var(t)
        raise ExprError(f"unexpected token {t!r}")


def parse_bool_infix(text: str) -> BoolExpr:
    return _InfixParser(_lex_infix(text)).parse_bool()


def parse_int_infix(text: str) -> IntExpr:
    return _InfixParser(_lex_infix(text)).parse_int()
