"""Plain denotational semantics over finite multisets.

Difference removes every left element whose value occurs in the right bag
at all; survivors keep their multiplicity.  ``sum`` of the empty bag is 0.
"""

from __future__ import annotations

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
from .values import Value, VBag, VBool, VInt, VRecord, value_eq

Env = dict[str, Value]


def evaluate(env: Env, e: Expr) -> Value:
    match e:
        case Var(name):
            return env[name]
        case Let(name, bound, body):
            return evaluate({**env, name: evaluate(env, bound)}, body)
        case IntLit(v):
            return VInt(v)
        case BoolLit(v):
            return VBool(v)
        case Add(l, r):
            return VInt(_int(evaluate(env, l)) + _int(evaluate(env, r)))
        case Sum(a):
            return VInt(sum(_int(x) for x in _bag(evaluate(env, a))))
        case Not(a):
            return VBool(not _bool(evaluate(env, a)))
        case And(l, r):
            return VBool(_bool(evaluate(env, l)) and _bool(evaluate(env, r)))
        case Eq(l, r):
            return VBool(value_eq(evaluate(env, l), evaluate(env, r)))
        case If(c, t, o):
            return evaluate(env, t) if _bool(evaluate(env, c)) else evaluate(env, o)
        case RecordExpr(fields):
            return VRecord(tuple((n, evaluate(env, v)) for n, v in fields))
        case Proj(a, f):
            v = evaluate(env, a)
            assert isinstance(v, VRecord), f"projection from non-record {v!r}"
            return v.field(f)
        case Empty():
            return VBag(())
        case Singleton(a):
            return VBag((evaluate(env, a),))
        case Union(l, r):
            return VBag(_bag(evaluate(env, l)) + _bag(evaluate(env, r)))
        case Diff(l, r):
            right = set(_bag(evaluate(env, r)))
            return VBag(tuple(x for x in _bag(evaluate(env, l)) if x not in right))
        case Comp(body, var, source):
            return VBag(
                tuple(evaluate({**env, var: x}, body) for x in _bag(evaluate(env, source)))
            )
        case Flatten(a):
            out: list[Value] = []
            for inner in _bag(evaluate(env, a)):
                out.extend(_bag(inner))
            return VBag(tuple(out))
    raise AssertionError(f"cannot evaluate node {type(e).__name__}")


def _int(v: Value) -> int:
    assert isinstance(v, VInt), f"expected int value, got {v!r}"
    return v.value


def _bool(v: Value) -> bool:
    assert isinstance(v, VBool), f"expected bool value, got {v!r}"
    return v.value


def _bag(v: Value) -> tuple[Value, ...]:
    assert isinstance(v, VBag), f"expected bag value, got {v!r}"
    return v.elements
