"""Abstract syntax: types, core expressions, surface sugar, desugaring, printing.

Core expressions are the kernel the evaluator, tracker, and analyzer consume.
Surface trees produced by the parser may additionally contain sugar nodes
(``Or``, ``Count``, ``BagLit``, ``SurfaceComp``); ``desugar`` rewrites them
into the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Type:
    pass


@dataclass(frozen=True)
class IntType(Type):
    def __str__(self) -> str:
        return "int"


@dataclass(frozen=True)
class BoolType(Type):
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class RecordType(Type):
    fields: tuple[tuple[str, Type], ...]

    def __post_init__(self):
        names = [n for n, _ in self.fields]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate record field in {names}")

    def field(self, name: str) -> Type:
        for n, t in self.fields:
            if n == name:
                return t
        raise KeyError(name)

    def __str__(self) -> str:
        inner = ", ".join(f"{n}: {t}" for n, t in self.fields)
        return f"({inner})"


@dataclass(frozen=True)
class BagType(Type):
    elem: Type

    def __str__(self) -> str:
        return f"{{{self.elem}}}"


INT = IntType()
BOOL = BoolType()


def record_type(**fields: Type) -> RecordType:
    return RecordType(tuple(fields.items()))


def render_type(t: Type) -> str:
    return str(t)


# ---------------------------------------------------------------------------
# Expressions (core kernel)


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Let(Expr):
    name: str
    bound: Expr
    body: Expr


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sum(Expr):
    arg: Expr


@dataclass(frozen=True)
class Not(Expr):
    arg: Expr


@dataclass(frozen=True)
class And(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Eq(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class If(Expr):
    cond: Expr
    then: Expr
    orelse: Expr


@dataclass(frozen=True)
class RecordExpr(Expr):
    fields: tuple[tuple[str, Expr], ...]

    def __post_init__(self):
        names = [n for n, _ in self.fields]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate record field in {names}")


@dataclass(frozen=True)
class Proj(Expr):
    arg: Expr
    field: str


@dataclass(frozen=True)
class Empty(Expr):
    elem_type: Type | None = None


@dataclass(frozen=True)
class Singleton(Expr):
    arg: Expr


@dataclass(frozen=True)
class Union(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Diff(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Comp(Expr):
    """Single-generator comprehension ``{ body | var <- source }``."""

    body: Expr
    var: str
    source: Expr


@dataclass(frozen=True)
class Flatten(Expr):
    arg: Expr


# ---------------------------------------------------------------------------
# Surface-only sugar nodes


@dataclass(frozen=True)
class Or(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Count(Expr):
    arg: Expr


@dataclass(frozen=True)
class BagLit(Expr):
    """Display form ``{e1, ..., en}``; at least one element."""

    items: tuple[Expr, ...]


@dataclass(frozen=True)
class Gen:
    """Generator clause ``var <- source`` of a surface comprehension."""

    var: str
    source: Expr


@dataclass(frozen=True)
class Guard:
    """Filter clause of a surface comprehension."""

    cond: Expr


@dataclass(frozen=True)
class SurfaceComp(Expr):
    """Multi-generator comprehension with interleaved filter conditions."""

    body: Expr
    clauses: tuple[Gen | Guard, ...]

    def __post_init__(self):
        binders = [c.var for c in self.clauses if isinstance(c, Gen)]
        if len(set(binders)) != len(binders):
            raise ValueError(f"duplicate comprehension binders in {binders}")


_SUGAR = (Or, Count, BagLit, SurfaceComp)


def is_core(e: Expr) -> bool:
    """True iff no sugar node occurs anywhere in the tree."""
    if isinstance(e, _SUGAR):
        return False
    return all(is_core(c) for c in children(e))


def children(e: Expr) -> tuple[Expr, ...]:
    match e:
        case Var() | IntLit() | BoolLit() | Empty():
            return ()
        case Let(_, bound, body):
            return (bound, body)
        case Add(l, r) | And(l, r) | Eq(l, r) | Union(l, r) | Diff(l, r) | Or(l, r):
            return (l, r)
        case Sum(a) | Not(a) | Flatten(a) | Singleton(a) | Count(a) | Proj(a, _):
            return (a,)
        case If(c, t, o):
            return (c, t, o)
        case RecordExpr(fields):
            return tuple(v for _, v in fields)
        case Comp(body, _, source):
            return (body, source)
        case BagLit(items):
            return items
        case SurfaceComp(body, clauses):
            out = [body]
            for c in clauses:
                out.append(c.source if isinstance(c, Gen) else c.cond)
            return tuple(out)
    raise AssertionError(f"unknown expression node {e!r}")


def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Var(name):
            return frozenset({name})
        case Let(name, bound, body):
            return free_vars(bound) | (free_vars(body) - {name})
        case Comp(body, var, source):
            return free_vars(source) | (free_vars(body) - {var})
        case SurfaceComp(body, clauses):
            # Clauses bind left to right; each source sees earlier binders.
            bound: set[str] = set()
            out: set[str] = set()
            for c in clauses:
                if isinstance(c, Gen):
                    out |= free_vars(c.source) - bound
                    bound.add(c.var)
                else:
                    out |= free_vars(c.cond) - bound
            out |= free_vars(body) - bound
            return frozenset(out)
        case _:
            out = frozenset()
            for c in children(e):
                out |= free_vars(c)
            return out


def _fresh(avoid: frozenset[str]) -> str:
    i = 0
    while f"_x{i}" in avoid:
        i += 1
    return f"_x{i}"


# ---------------------------------------------------------------------------
# Desugaring


def desugar(e: Expr) -> Expr:
    """Rewrite sugar nodes to the core kernel, bottom-up."""
    match e:
        case Var() | IntLit() | BoolLit() | Empty():
            return e
        case Let(name, bound, body):
            return Let(name, desugar(bound), desugar(body))
        case Add(l, r):
            return Add(desugar(l), desugar(r))
        case Sum(a):
            return Sum(desugar(a))
        case Not(a):
            return Not(desugar(a))
        case And(l, r):
            return And(desugar(l), desugar(r))
        case Eq(l, r):
            return Eq(desugar(l), desugar(r))
        case If(c, t, o):
            return If(desugar(c), desugar(t), desugar(o))
        case RecordExpr(fields):
            return RecordExpr(tuple((n, desugar(v)) for n, v in fields))
        case Proj(a, f):
            return Proj(desugar(a), f)
        case Singleton(a):
            return Singleton(desugar(a))
        case Union(l, r):
            return Union(desugar(l), desugar(r))
        case Diff(l, r):
            return Diff(desugar(l), desugar(r))
        case Comp(body, var, source):
            return Comp(desugar(body), var, desugar(source))
        case Flatten(a):
            return Flatten(desugar(a))
        case Or(l, r):
            return Not(And(Not(desugar(l)), Not(desugar(r))))
        case Count(a):
            a = desugar(a)
            x = _fresh(free_vars(a))
            return Sum(Comp(IntLit(1), x, a))
        case BagLit(items):
            out: Expr = Singleton(desugar(items[0]))
            for item in items[1:]:
                out = Union(out, Singleton(desugar(item)))
            return out
        case SurfaceComp(body, clauses):
            return _desugar_comp(desugar(body), clauses)
    raise AssertionError(f"unknown expression node {e!r}")


def _desugar_comp(body: Expr, clauses: tuple[Gen | Guard, ...]) -> Expr:
    head, rest = clauses[0], clauses[1:]
    if isinstance(head, Gen):
        source = desugar(head.source)
        if not rest:
            return Comp(body, head.var, source)
        return Flatten(Comp(_desugar_comp(body, rest), head.var, source))
    cond = desugar(head.cond)
    inner = Singleton(body) if not rest else _desugar_comp(body, rest)
    return If(cond, inner, Empty(None))


# ---------------------------------------------------------------------------
# Pretty-printing (core expressions only)

_PREC_TOP = 0
_PREC_AND = 2
_PREC_EQ = 3
_PREC_BAG = 4
_PREC_ADD = 5
_PREC_NOT = 6
_PREC_POST = 7
_PREC_ATOM = 8


def render(e: Expr) -> str:
    """Print a core expression; ``parse`` + ``desugar`` round-trips it."""
    return _render(e, _PREC_TOP)


def _render(e: Expr, prec: int) -> str:
    match e:
        case Var(name):
            return name
        case IntLit(v):
            return str(v)
        case BoolLit(v):
            return "true" if v else "false"
        case Let(name, bound, body):
            s = f"let {name} = {_render(bound, _PREC_TOP)} in {_render(body, _PREC_TOP)}"
            return _wrap(s, prec > _PREC_TOP)
        case If(c, t, o):
            s = (
                f"if {_render(c, _PREC_TOP)} then {_render(t, _PREC_TOP)}"
                f" else {_render(o, _PREC_TOP)}"
            )
            return _wrap(s, prec > _PREC_TOP)
        case And(l, r):
            return _binop("and", l, r, _PREC_AND, prec)
        case Eq(l, r):
            return _binop("==", l, r, _PREC_EQ, prec)
        case Union(l, r):
            lit = _bag_display(e)
            if lit is not None:
                return lit
            return _binop("union", l, r, _PREC_BAG, prec)
        case Diff(l, r):
            return _binop("diff", l, r, _PREC_BAG, prec)
        case Add(l, r):
            return _binop("+", l, r, _PREC_ADD, prec)
        case Not(a):
            return _wrap(f"not {_render(a, _PREC_NOT)}", prec > _PREC_NOT)
        case Proj(a, f):
            return f"{_render(a, _PREC_POST)}.{f}"
        case Sum(a):
            return f"sum({_render(a, _PREC_TOP)})"
        case Flatten(a):
            return f"flatten({_render(a, _PREC_TOP)})"
        case Singleton(a):
            return f"{{{_render(a, _PREC_TOP)}}}"
        case Empty(t):
            return "empty" if t is None else f"empty : {render_type(BagType(t))}"
        case RecordExpr(fields):
            inner = ", ".join(f"{n}: {_render(v, _PREC_TOP)}" for n, v in fields)
            return f"({inner})"
        case Comp(body, var, source):
            return f"{{ {_render(body, _PREC_TOP)} | {var} <- {_render(source, _PREC_TOP)} }}"
    raise ValueError(f"cannot render non-core node {type(e).__name__}")


def _binop(op: str, l: Expr, r: Expr, level: int, prec: int) -> str:
    s = f"{_render(l, level)} {op} {_render(r, level + 1)}"
    return _wrap(s, prec > level)


def _wrap(s: str, needed: bool) -> str:
    return f"({s})" if needed else s


def _bag_display(e: Expr) -> str | None:
    """Render a left-nested union of singletons as ``{e1, ..., en}``."""
    items: list[Expr] = []
    node = e
    while isinstance(node, Union):
        if not isinstance(node.right, Singleton):
            return None
        items.append(node.right.arg)
        node = node.left
    if not isinstance(node, Singleton):
        return None
    items.append(node.arg)
    items.reverse()
    return f"{{{', '.join(_render(i, _PREC_TOP) for i in items)}}}"
