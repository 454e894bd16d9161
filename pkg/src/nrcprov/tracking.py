"""Annotation-propagating semantics built from lifted operations.

Literals and constructors produce empty top-level annotations; built-in
operations union the annotations of their arguments onto the result.
Difference and equality are global: they pull in every color of both
operands.  The lifted operations are grouped in ``LiftedOps`` so a test
harness can substitute deliberately broken variants.
"""

from __future__ import annotations

from typing import Callable

from .avalues import (
    ABag,
    ABool,
    AInt,
    ARecord,
    AValue,
    add_annotation,
    colors_of,
    erase,
)
from .syntax import (
    Add,
    And,
    BoolLit,
    Comp,
    Diff,
    Empty,
    Eq,
    Expr,
    Flatten,
    If,
    IntLit,
    Let,
    Not,
    Proj,
    RecordExpr,
    Singleton,
    Sum,
    Union,
    Var,
)

AEnv = dict[str, AValue]


def lift_add(v1: AValue, v2: AValue) -> AValue:
    assert isinstance(v1, AInt) and isinstance(v2, AInt)
    return AInt(v1.value + v2.value, v1.ann | v2.ann)


def lift_and(v1: AValue, v2: AValue) -> AValue:
    assert isinstance(v1, ABool) and isinstance(v2, ABool)
    return ABool(v1.value and v2.value, v1.ann | v2.ann)


def lift_not(v: AValue) -> AValue:
    assert isinstance(v, ABool)
    return ABool(not v.value, v.ann)


def lift_sum(v: AValue) -> AValue:
    """Fold lifted addition over the elements, then add the bag's annotation."""
    assert isinstance(v, ABag)
    total, ann = 0, frozenset()
    for x in v.elements:
        assert isinstance(x, AInt)
        total += x.value
        ann |= x.ann
    return AInt(total, ann | v.ann)


def lift_proj(v: AValue, field: str) -> AValue:
    """Return the field's value with the record's annotation added on top."""
    assert isinstance(v, ARecord)
    return add_annotation(v.field(field), v.ann)


def lift_cond(cond: AValue, then: AValue, orelse: AValue) -> AValue:
    assert isinstance(cond, ABool)
    return add_annotation(then if cond.value else orelse, cond.ann)


def lift_union(v1: AValue, v2: AValue) -> AValue:
    assert isinstance(v1, ABag) and isinstance(v2, ABag)
    return ABag(v1.elements + v2.elements, v1.ann | v2.ann)


def lift_flatten(v: AValue) -> AValue:
    assert isinstance(v, ABag)
    elements: tuple[AValue, ...] = ()
    ann = frozenset()
    for x in v.elements:
        assert isinstance(x, ABag)
        elements += x.elements
        ann |= x.ann
    return ABag(elements, ann | v.ann)


def lift_comprehend(source: AValue, body: Callable[[AValue], AValue]) -> AValue:
    """Map the body over the elements, keeping the source's top annotation."""
    assert isinstance(source, ABag)
    return ABag(tuple(body(x) for x in source.elements), source.ann)


def lift_diff(v1: AValue, v2: AValue) -> AValue:
    """Keep elements of the left bag whose erasure does not occur on the right.

    Every color of either operand lands in the top-level annotation: a change
    anywhere in either bag can change which elements survive.
    """
    assert isinstance(v1, ABag) and isinstance(v2, ABag)
    right = {erase(x) for x in v2.elements}
    survivors = tuple(x for x in v1.elements if erase(x) not in right)
    return ABag(survivors, colors_of(v1) | colors_of(v2))


def lift_eq(v1: AValue, v2: AValue) -> AValue:
    return ABool(erase(v1) == erase(v2), colors_of(v1) | colors_of(v2))


class LiftedOps:
    """The annotation-propagating operation suite used by ``track``.

    Subclass and override individual operations to build deliberately broken
    trackers for mutation testing.
    """

    add = staticmethod(lift_add)
    and_ = staticmethod(lift_and)
    not_ = staticmethod(lift_not)
    sum_ = staticmethod(lift_sum)
    proj = staticmethod(lift_proj)
    cond = staticmethod(lift_cond)
    union = staticmethod(lift_union)
    flatten = staticmethod(lift_flatten)
    comprehend = staticmethod(lift_comprehend)
    diff = staticmethod(lift_diff)
    eq = staticmethod(lift_eq)


_DEFAULT_OPS = LiftedOps()


def track(env: AEnv, e: Expr, ops: LiftedOps = _DEFAULT_OPS) -> AValue:
    match e:
        case Var(name):
            return env[name]
        case Let(name, bound, body):
            return track({**env, name: track(env, bound, ops)}, body, ops)
        case IntLit(v):
            return AInt(v)
        case BoolLit(v):
            return ABool(v)
        case Add(l, r):
            return ops.add(track(env, l, ops), track(env, r, ops))
        case Sum(a):
            return ops.sum_(track(env, a, ops))
        case Not(a):
            return ops.not_(track(env, a, ops))
        case And(l, r):
            return ops.and_(track(env, l, ops), track(env, r, ops))
        case Eq(l, r):
            return ops.eq(track(env, l, ops), track(env, r, ops))
        case If(c, t, o):
            return ops.cond(track(env, c, ops), track(env, t, ops), track(env, o, ops))
        case RecordExpr(fields):
            return ARecord(tuple((n, track(env, v, ops)) for n, v in fields))
        case Proj(a, f):
            return ops.proj(track(env, a, ops), f)
        case Empty():
            return ABag(())
        case Singleton(a):
            return ABag((track(env, a, ops),))
        case Union(l, r):
            return ops.union(track(env, l, ops), track(env, r, ops))
        case Diff(l, r):
            return ops.diff(track(env, l, ops), track(env, r, ops))
        case Comp(body, var, source):
            return ops.comprehend(
                track(env, source, ops), lambda v: track({**env, var: v}, body, ops)
            )
        case Flatten(a):
            return ops.flatten(track(env, a, ops))
    raise AssertionError(f"cannot track node {type(e).__name__}")
