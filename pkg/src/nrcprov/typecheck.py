"""Type system for core expressions plus elaboration of empty-bag types.

``infer_type`` implements the standard typing rules; the empty-collection
literal has a nondeterministic element type, so inference runs with
unification variables and ``elaborate`` rewrites every ``Empty`` node with
the concrete element type forced by its context.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import TypecheckError
from .syntax import (
    Add,
    And,
    BagType,
    BoolLit,
    BoolType,
    Comp,
    Diff,
    Empty,
    Eq,
    Expr,
    Flatten,
    If,
    IntLit,
    IntType,
    Let,
    Not,
    Proj,
    RecordExpr,
    RecordType,
    Singleton,
    Sum,
    Type,
    Union,
    Var,
    is_core,
)

TypeCtx = dict[str, Type]

_INT = IntType()
_BOOL = BoolType()


@dataclass(frozen=True)
class _TVar(Type):
    """Unification variable; only exists during inference."""

    id: int


class _Unifier:
    def __init__(self):
        self.bindings: dict[int, Type] = {}
        self.fresh_ids = itertools.count()

    def fresh(self) -> _TVar:
        return _TVar(next(self.fresh_ids))

    def resolve(self, t: Type) -> Type:
        """Follow variable bindings one level deep."""
        while isinstance(t, _TVar) and t.id in self.bindings:
            t = self.bindings[t.id]
        return t

    def resolve_deep(self, t: Type) -> Type:
        t = self.resolve(t)
        match t:
            case RecordType(fields):
                return RecordType(tuple((n, self.resolve_deep(x)) for n, x in fields))
            case BagType(elem):
                return BagType(self.resolve_deep(elem))
            case _:
                return t

    def occurs(self, var: _TVar, t: Type) -> bool:
        t = self.resolve(t)
        if t == var:
            return True
        match t:
            case RecordType(fields):
                return any(self.occurs(var, x) for _, x in fields)
            case BagType(elem):
                return self.occurs(var, elem)
            case _:
                return False

    def unify(self, t1: Type, t2: Type, where: str) -> None:
        t1, t2 = self.resolve(t1), self.resolve(t2)
        if t1 == t2:
            return
        if isinstance(t1, _TVar) or isinstance(t2, _TVar):
            var, other = (t1, t2) if isinstance(t1, _TVar) else (t2, t1)
            if self.occurs(var, other):
                raise TypecheckError(f"{where}: infinite type")
            self.bindings[var.id] = other
            return
        match (t1, t2):
            case (RecordType(f1), RecordType(f2)) if [n for n, _ in f1] == [n for n, _ in f2]:
                for (_, x1), (_, x2) in zip(f1, f2):
                    self.unify(x1, x2, where)
            case (BagType(e1), BagType(e2)):
                self.unify(e1, e2, where)
            case _:
                raise TypecheckError(
                    f"{where}: type mismatch between {_show(self.resolve_deep(t1))}"
                    f" and {_show(self.resolve_deep(t2))}"
                )


def _show(t: Type) -> str:
    return "?" if isinstance(t, _TVar) else str(t)


def _infer(ctx: TypeCtx, e: Expr, u: _Unifier) -> Type:
    match e:
        case Var(name):
            if name not in ctx:
                raise TypecheckError(f"unbound variable {name!r}")
            return ctx[name]
        case Let(name, bound, body):
            t1 = _infer(ctx, bound, u)
            return _infer({**ctx, name: t1}, body, u)
        case IntLit():
            return _INT
        case BoolLit():
            return _BOOL
        case Add(l, r):
            u.unify(_infer(ctx, l, u), _INT, "left operand of +")
            u.unify(_infer(ctx, r, u), _INT, "right operand of +")
            return _INT
        case Sum(a):
            u.unify(_infer(ctx, a, u), BagType(_INT), "argument of sum")
            return _INT
        case Not(a):
            u.unify(_infer(ctx, a, u), _BOOL, "argument of not")
            return _BOOL
        case And(l, r):
            u.unify(_infer(ctx, l, u), _BOOL, "left operand of and")
            u.unify(_infer(ctx, r, u), _BOOL, "right operand of and")
            return _BOOL
        case Eq(l, r):
            u.unify(_infer(ctx, l, u), _infer(ctx, r, u), "operands of ==")
            return _BOOL
        case If(c, t, o):
            u.unify(_infer(ctx, c, u), _BOOL, "condition of if")
            tt = _infer(ctx, t, u)
            u.unify(tt, _infer(ctx, o, u), "branches of if")
            return tt
        case RecordExpr(fields):
            return RecordType(tuple((n, _infer(ctx, v, u)) for n, v in fields))
        case Proj(a, f):
            t = u.resolve(_infer(ctx, a, u))
            if isinstance(t, _TVar):
                raise TypecheckError(
                    f"cannot project field {f!r} from a value of unresolved type"
                    " (ascribe the empty collection it comes from)"
                )
            if not isinstance(t, RecordType):
                raise TypecheckError(f"projection .{f} applied to non-record type {_show(t)}")
            for n, ft in t.fields:
                if n == f:
                    return ft
            raise TypecheckError(f"field {f!r} not found in record type {_show(t)}")
        case Empty(elem):
            return BagType(u.fresh() if elem is None else elem)
        case Singleton(a):
            return BagType(_infer(ctx, a, u))
        case Union(l, r) | Diff(l, r):
            tl = _infer(ctx, l, u)
            which = "union" if isinstance(e, Union) else "diff"
            u.unify(tl, BagType(u.fresh()), f"left operand of {which}")
            u.unify(tl, _infer(ctx, r, u), f"operands of {which}")
            return tl
        case Comp(body, var, source):
            elem = u.fresh()
            u.unify(_infer(ctx, source, u), BagType(elem), "comprehension source")
            return BagType(_infer({**ctx, var: elem}, body, u))
        case Flatten(a):
            elem = u.fresh()
            u.unify(_infer(ctx, a, u), BagType(BagType(elem)), "argument of flatten")
            return BagType(elem)
    raise TypecheckError(f"cannot type sugar node {type(e).__name__}; desugar first")


def _fill_empties(e: Expr, u: _Unifier) -> Expr:
    """Rewrite every Empty node with its resolved element type."""
    match e:
        case Empty(elem):
            assert elem is not None  # _infer assigned a variable
            resolved = u.resolve_deep(elem)
            if _has_var(resolved):
                raise TypecheckError("ambiguous empty-collection type; add an ascription")
            return Empty(resolved)
        case Var() | IntLit() | BoolLit():
            return e
        case Let(name, bound, body):
            return Let(name, _fill_empties(bound, u), _fill_empties(body, u))
        case Add(l, r):
            return Add(_fill_empties(l, u), _fill_empties(r, u))
        case Sum(a):
            return Sum(_fill_empties(a, u))
        case Not(a):
            return Not(_fill_empties(a, u))
        case And(l, r):
            return And(_fill_empties(l, u), _fill_empties(r, u))
        case Eq(l, r):
            return Eq(_fill_empties(l, u), _fill_empties(r, u))
        case If(c, t, o):
            return If(_fill_empties(c, u), _fill_empties(t, u), _fill_empties(o, u))
        case RecordExpr(fields):
            return RecordExpr(tuple((n, _fill_empties(v, u)) for n, v in fields))
        case Proj(a, f):
            return Proj(_fill_empties(a, u), f)
        case Singleton(a):
            return Singleton(_fill_empties(a, u))
        case Union(l, r):
            return Union(_fill_empties(l, u), _fill_empties(r, u))
        case Diff(l, r):
            return Diff(_fill_empties(l, u), _fill_empties(r, u))
        case Comp(body, var, source):
            return Comp(_fill_empties(body, u), var, _fill_empties(source, u))
        case Flatten(a):
            return Flatten(_fill_empties(a, u))
    raise AssertionError(f"unexpected node {e!r}")


def _has_var(t: Type) -> bool:
    match t:
        case _TVar():
            return True
        case RecordType(fields):
            return any(_has_var(x) for _, x in fields)
        case BagType(elem):
            return _has_var(elem)
        case _:
            return False


def _seed_empties(e: Expr, u: _Unifier) -> Expr:
    """Give every unascribed Empty its own unification variable."""
    match e:
        case Empty(None):
            return Empty(u.fresh())
        case Empty(_) | Var() | IntLit() | BoolLit():
            return e
        case Let(name, bound, body):
            return Let(name, _seed_empties(bound, u), _seed_empties(body, u))
        case Add(l, r):
            return Add(_seed_empties(l, u), _seed_empties(r, u))
        case Sum(a):
            return Sum(_seed_empties(a, u))
        case Not(a):
            return Not(_seed_empties(a, u))
        case And(l, r):
            return And(_seed_empties(l, u), _seed_empties(r, u))
        case Eq(l, r):
            return Eq(_seed_empties(l, u), _seed_empties(r, u))
        case If(c, t, o):
            return If(_seed_empties(c, u), _seed_empties(t, u), _seed_empties(o, u))
        case RecordExpr(fields):
            return RecordExpr(tuple((n, _seed_empties(v, u)) for n, v in fields))
        case Proj(a, f):
            return Proj(_seed_empties(a, u), f)
        case Singleton(a):
            return Singleton(_seed_empties(a, u))
        case Union(l, r):
            return Union(_seed_empties(l, u), _seed_empties(r, u))
        case Diff(l, r):
            return Diff(_seed_empties(l, u), _seed_empties(r, u))
        case Comp(body, var, source):
            return Comp(_seed_empties(body, u), var, _seed_empties(source, u))
        case Flatten(a):
            return Flatten(_seed_empties(a, u))
    raise TypecheckError(f"cannot type sugar node {type(e).__name__}; desugar first")


def infer_and_elaborate(ctx: TypeCtx, e: Expr) -> tuple[Type, Expr]:
    """Infer the type of ``e`` and fill in every empty-collection type."""
    if not is_core(e):
        raise TypecheckError("expression contains sugar nodes; desugar first")
    u = _Unifier()
    seeded = _seed_empties(e, u)
    t = _infer(ctx, seeded, u)
    elaborated = _fill_empties(seeded, u)
    resolved = u.resolve_deep(t)
    if _has_var(resolved):
        raise TypecheckError("ambiguous empty-collection type; add an ascription")
    return resolved, elaborated


def infer_type(ctx: TypeCtx, e: Expr) -> Type:
    return infer_and_elaborate(ctx, e)[0]


def elaborate(ctx: TypeCtx, e: Expr) -> Expr:
    return infer_and_elaborate(ctx, e)[1]
