"""Typed block diagrams: basic blocks plus Seq/Par/Fb constructors.

Wires are not named; a diagram's type is the pair (input arity, output
arity). Feedback traces exactly one wire, the last one; multi-wire feedback
is expressed as nested Fb nodes. Flowchart, pointer and stream blocks form
three overlapping alphabets (identity and twist belong to all of them), and
diagrams that mix incompatible alphabets are rejected at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import expr as ex
from .sexpr import SExprError, Sym, position, write_sexpr

ALL = frozenset(("fc", "pp", "sc"))
IMPERATIVE = frozenset(("fc", "pp"))
POINTER = frozenset(("pp",))
STREAM = frozenset(("sc",))


class DiagramTypeError(TypeError):
    """Arity mismatch or alphabet clash; carries the offending arities."""

    def __init__(self, message: str, *arities):
        super().__init__(message)
        self.arities = arities


@dataclass(frozen=True)
class BasicKind:
    tag: str
    var: Optional[str] = None
    iexpr: Optional[ex.IntExpr] = None
    iexpr2: Optional[ex.IntExpr] = None
    bexpr: Optional[ex.BoolExpr] = None
    exprs: tuple = ()
    scalar: Optional[Fraction] = None


# tag -> (in arity, out arity, alphabets)
BASIC_SIGNATURES = {
    "id": (1, 1, ALL),
    "twist": (2, 2, ALL),
    "assign": (1, 1, IMPERATIVE),
    "cond": (1, 2, IMPERATIVE),
    "join": (2, 1, IMPERATIVE),
    "lookup": (1, 1, POINTER),
    "mutate": (1, 1, POINTER),
    "new": (1, 1, POINTER),
    "dispose": (1, 1, POINTER),
    "scal": (1, 1, STREAM),
    "copy": (1, 2, STREAM),
    "sum": (2, 1, STREAM),
    "integrator": (1, 1, STREAM),
}


@dataclass(frozen=True)
class Basic:
    kind: BasicKind
    in_arity: int
    out_arity: int
    alphabets: frozenset


@dataclass(frozen=True)
class Seq:
    first: "Diagram"
    second: "Diagram"
    in_arity: int
    out_arity: int
    alphabets: frozenset


@dataclass(frozen=True)
class Par:
    left: "Diagram"
    right: "Diagram"
    in_arity: int
    out_arity: int
    alphabets: frozenset


@dataclass(frozen=True)
class Fb:
    inner: "Diagram"
    in_arity: int
    out_arity: int
    alphabets: frozenset


Diagram = Union[Basic, Seq, Par, Fb]


def basic(kind: BasicKind) -> Basic:
    try:
        m, n, alphas = BASIC_SIGNATURES[kind.tag]
    except KeyError:
        raise DiagramTypeError(f"unknown basic block {kind.tag!r}") from None
    return Basic(kind, m, n, alphas)


def make_seq(a: Diagram, b: Diagram) -> Seq:
    if a.out_arity != b.in_arity:
        raise DiagramTypeError(
            f"sequential composition mismatch: {a.out_arity} outputs vs "
            f"{b.in_arity} inputs", a.out_arity, b.in_arity)
    alphas = a.alphabets & b.alphabets
    if not alphas:
        raise DiagramTypeError("cannot mix stream and imperative blocks")
    return Seq(a, b, a.in_arity, b.out_arity, alphas)


def make_par(a: Diagram, b: Diagram) -> Par:
    alphas = a.alphabets & b.alphabets
    if not alphas:
        raise DiagramTypeError("cannot mix stream and imperative blocks")
    return Par(a, b, a.in_arity + b.in_arity, a.out_arity + b.out_arity, alphas)


def make_fb(a: Diagram) -> Fb:
    if a.in_arity < 1 or a.out_arity < 1:
        raise DiagramTypeError(
            f"feedback needs at least one input and one output wire, got "
            f"{a.in_arity}->{a.out_arity}", a.in_arity, a.out_arity)
    return Fb(a, a.in_arity - 1, a.out_arity - 1, a.alphabets)


# Convenience constructors for the basic blocks.

def ident() -> Basic:
    return basic(BasicKind("id"))


def twist() -> Basic:
    return basic(BasicKind("twist"))


def assign(var: str, e: ex.IntExpr) -> Basic:
    return basic(BasicKind("assign", var=var, iexpr=e))


def cond(b: ex.BoolExpr) -> Basic:
    return basic(BasicKind("cond", bexpr=b))


def join() -> Basic:
    return basic(BasicKind("join"))


def lookup(var: str, t: ex.IntExpr) -> Basic:
    return basic(BasicKind("lookup", var=var, iexpr=t))


def mutate(t: ex.IntExpr, s: ex.IntExpr) -> Basic:
    return basic(BasicKind("mutate", iexpr=t, iexpr2=s))


def new(var: str, ts) -> Basic:
    return basic(BasicKind("new", var=var, exprs=tuple(ts)))


def dispose(t: ex.IntExpr) -> Basic:
    return basic(BasicKind("dispose", iexpr=t))


def scal(a) -> Basic:
    return basic(BasicKind("scal", scalar=Fraction(a)))


def copy() -> Basic:
    return basic(BasicKind("copy"))


def stream_sum() -> Basic:
    return basic(BasicKind("sum"))


def integrator() -> Basic:
    return basic(BasicKind("integrator"))


# Macros.

def while_macro(b: ex.BoolExpr, body: Diagram) -> Fb:
    """while_b(body) as a feedback loop: join, test, then (id | body).

    The no-branch of the test exits, the yes-branch runs the body and
    loops back on the traced wire.
    """
    if body.in_arity != 1 or body.out_arity != 1:
        raise DiagramTypeError(
            f"while body must be 1->1, got {body.in_arity}->{body.out_arity}",
            body.in_arity, body.out_arity)
    return make_fb(make_seq(make_seq(join(), cond(b)), make_par(ident(), body)))


def fdback_macro(f: Diagram) -> Fb:
    """Stream feedback around f: output = input + f(output)."""
    if f.in_arity != 1 or f.out_arity != 1:
        raise DiagramTypeError(
            f"fdback argument must be 1->1, got {f.in_arity}->{f.out_arity}",
            f.in_arity, f.out_arity)
    return make_fb(make_seq(make_seq(make_par(ident(), f), stream_sum()), copy()))


def sum_macro(f: Diagram, g: Diagram) -> Diagram:
    """Pointwise sum of two 1->1 stream circuits."""
    for d in (f, g):
        if d.in_arity != 1 or d.out_arity != 1:
            raise DiagramTypeError(
                f"sum arguments must be 1->1, got {d.in_arity}->{d.out_arity}",
                d.in_arity, d.out_arity)
    return make_seq(make_seq(copy(), make_par(g, f)), stream_sum())


def recompute_type(d: Diagram) -> tuple:
    """Recompute (in, out) bottom-up, ignoring the cached fields."""
    if isinstance(d, Basic):
        m, n, _ = BASIC_SIGNATURES[d.kind.tag]
        return m, n
    if isinstance(d, Seq):
        m1, n1 = recompute_type(d.first)
        m2, n2 = recompute_type(d.second)
        if n1 != m2:
            raise DiagramTypeError("ill-typed Seq", n1, m2)
        return m1, n2
    if isinstance(d, Par):
        m1, n1 = recompute_type(d.left)
        m2, n2 = recompute_type(d.right)
        return m1 + m2, n1 + n2
    m, n = recompute_type(d.inner)
    if m < 1 or n < 1:
        raise DiagramTypeError("ill-typed Fb", m, n)
    return m - 1, n - 1


def iter_basics(d: Diagram):
    if isinstance(d, Basic):
        yield d.kind
    elif isinstance(d, Seq):
        yield from iter_basics(d.first)
        yield from iter_basics(d.second)
    elif isinstance(d, Par):
        yield from iter_basics(d.left)
        yield from iter_basics(d.right)
    else:
        yield from iter_basics(d.inner)


# --- concrete syntax --------------------------------------------------------


def parse_diagram(node) -> Diagram:
    """Parse a diagram from an s-expression node (see README for the grammar)."""
    if isinstance(node, Sym):
        ln, co = position(node)
        raise SExprError(f"expected a diagram form, got atom {node}", ln, co)
    if not isinstance(node, list) or not node or not isinstance(node[0], str):
        ln, co = position(node)
        raise SExprError("expected a diagram form", ln, co)
    op = str(node[0]).lower()
    args = node[1:]
    ln, co = position(node)

    def need(n):
        if len(args) != n:
            raise SExprError(f"({op} ...) takes {n} argument(s), got {len(args)}", ln, co)

    try:
        if op == "seq":
            if len(args) < 2:
                raise SExprError("(seq ...) needs at least two diagrams", ln, co)
            acc = parse_diagram(args[0])
            for sub in args[1:]:
                acc = make_seq(acc, parse_diagram(sub))
            return acc
        if op == "par":
            if len(args) < 2:
                raise SExprError("(par ...) needs at least two diagrams", ln, co)
            acc = parse_diagram(args[0])
            for sub in args[1:]:
                acc = make_par(acc, parse_diagram(sub))
            return acc
        if op == "fb":
            need(1)
            return make_fb(parse_diagram(args[0]))
        if op == "id":
            need(0)
            return ident()
        if op == "twist":
            need(0)
            return twist()
        if op == "assign":
            need(2)
            return assign(_varname(args[0]), ex.parse_int_sx(args[1]))
        if op == "cond":
            need(1)
            return cond(ex.parse_bool_sx(args[0]))
        if op == "join":
            need(0)
            return join()
        if op == "lookup":
            need(2)
            return lookup(_varname(args[0]), ex.parse_int_sx(args[1]))
        if op == "mutate":
            need(2)
            return mutate(ex.parse_int_sx(args[0]), ex.parse_int_sx(args[1]))
        if op == "new":
            need(2)
            if not isinstance(args[1], list):
                raise SExprError("(new x (t1 t2 ...)) needs a list of terms", ln, co)
            return new(_varname(args[0]), tuple(ex.parse_int_sx(t) for t in args[1]))
        if op == "dispose":
            need(1)
            return dispose(ex.parse_int_sx(args[0]))
        if op == "scal":
            need(1)
            return scal(_fraction(args[0]))
        if op == "copy":
            need(0)
            return copy()
        if op == "sum":
            if len(args) == 0:
                return stream_sum()
            need(2)
            return sum_macro(parse_diagram(args[0]), parse_diagram(args[1]))
        if op in ("int", "integrator"):
            need(0)
            return integrator()
        if op == "while":
            need(2)
            return while_macro(ex.parse_bool_sx(args[0]), parse_diagram(args[1]))
        if op == "fdback":
            need(1)
            return fdback_macro(parse_diagram(args[0]))
    except DiagramTypeError as e:
        raise SExprError(str(e), ln, co) from e
    raise SExprError(f"unknown diagram form ({op} ...)", ln, co)


def _varname(node) -> str:
    if not isinstance(node, Sym):
        ln, co = position(node)
        raise SExprError("expected a variable name", ln, co)
    return str(node)


def _fraction(node) -> Fraction:
    try:
        return Fraction(str(node))
    except (ValueError, ZeroDivisionError):
        ln, co = position(node)
        raise SExprError(f"bad rational literal {node}", ln, co) from None


def parse_diagram_text(text: str) -> Diagram:
    from .sexpr import parse_one
    return parse_diagram(parse_one(text))


def format_diagram(d: Diagram) -> str:
    if isinstance(d, Seq):
        return f"(seq {format_diagram(d.first)} {format_diagram(d.second)})"
    if isinstance(d, Par):
        return f"(par {format_diagram(d.left)} {format_diagram(d.right)})"
    if isinstance(d, Fb):
        return f"(fb {format_diagram(d.inner)})"
    k = d.kind
    if k.tag == "assign":
        return f"(assign {k.var} {ex.format_int_sx(k.iexpr)})"
    if k.tag == "cond":
        return f"(cond {ex.format_bool_sx(k.bexpr)})"
    if k.tag == "lookup":
        return f"(lookup {k.var} {ex.format_int_sx(k.iexpr)})"
    if k.tag == "mutate":
        return f"(mutate {ex.format_int_sx(k.iexpr)} {ex.format_int_sx(k.iexpr2)})"
    if k.tag == "new":
        terms = " ".join(ex.format_int_sx(t) for t in k.exprs)
        return f"(new {k.var} ({terms}))"
    if k.tag == "dispose":
        return f"(dispose {ex.format_int_sx(k.iexpr)})"
    if k.tag == "scal":
        return f"(scal {k.scalar})"
    if k.tag == "integrator":
        return "(int)"
    return f"({k.tag})"
