"""Annotated types and the type-based static provenance analysis.

The analysis is a syntax-directed enrichment of the plain typing rules:
it computes, per type node, an upper bound on the colors the corresponding
value nodes can carry under the tracking semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .avalues import ABag, ABool, AInt, Annotation, ARecord, AValue
from .errors import DataError, IncompatibleTypesError, TypecheckError
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
)

EMPTY: Annotation = frozenset()


@dataclass(frozen=True)
class AType:
    pass


@dataclass(frozen=True)
class ATInt(AType):
    ann: Annotation = EMPTY


@dataclass(frozen=True)
class ATBool(AType):
    ann: Annotation = EMPTY


@dataclass(frozen=True)
class ATRecord(AType):
    fields: tuple[tuple[str, AType], ...]
    ann: Annotation = EMPTY

    def __post_init__(self):
        names = [n for n, _ in self.fields]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate record field in {names}")

    def field(self, name: str) -> AType:
        for n, t in self.fields:
            if n == name:
                return t
        raise KeyError(name)


@dataclass(frozen=True)
class ATBag(AType):
    elem: AType
    ann: Annotation = EMPTY


ACtx = dict[str, AType]


def erase_type(t: AType) -> Type:
    match t:
        case ATInt():
            return IntType()
        case ATBool():
            return BoolType()
        case ATRecord(fields, _):
            return RecordType(tuple((n, erase_type(x)) for n, x in fields))
        case ATBag(elem, _):
            return BagType(erase_type(elem))
    raise AssertionError(f"unknown annotated type {t!r}")


def colors_of_type(t: AType) -> Annotation:
    out = set(t.ann)
    match t:
        case ATRecord(fields, _):
            for _, x in fields:
                out |= colors_of_type(x)
        case ATBag(elem, _):
            out |= colors_of_type(elem)
    return frozenset(out)


def add_type_annotation(t: AType, extra: Annotation) -> AType:
    if not extra:
        return t
    match t:
        case ATInt(ann):
            return ATInt(ann | extra)
        case ATBool(ann):
            return ATBool(ann | extra)
        case ATRecord(fields, ann):
            return ATRecord(fields, ann | extra)
        case ATBag(elem, ann):
            return ATBag(elem, ann | extra)
    raise AssertionError(f"unknown annotated type {t!r}")


def compatible(t1: AType, t2: AType) -> bool:
    return erase_type(t1) == erase_type(t2)


def merge_types(t1: AType, t2: AType) -> AType:
    """Node-wise union of annotations on compatible types."""
    match (t1, t2):
        case (ATInt(a1), ATInt(a2)):
            return ATInt(a1 | a2)
        case (ATBool(a1), ATBool(a2)):
            return ATBool(a1 | a2)
        case (ATRecord(f1, a1), ATRecord(f2, a2)) if [n for n, _ in f1] == [n for n, _ in f2]:
            merged = tuple((n, merge_types(x1, x2)) for (n, x1), (_, x2) in zip(f1, f2))
            return ATRecord(merged, a1 | a2)
        case (ATBag(e1, a1), ATBag(e2, a2)):
            return ATBag(merge_types(e1, e2), a1 | a2)
    raise IncompatibleTypesError(
        f"cannot merge {render_atype(t1)} with {render_atype(t2)}: erasures differ"
    )


def subtype(t1: AType, t2: AType) -> bool:
    """True iff the types are compatible and annotations are node-wise contained."""
    try:
        return merge_types(t1, t2) == t2
    except IncompatibleTypesError:
        return False


def atype_from_type(t: Type) -> AType:
    """Lift a plain type to the least annotated type (all empty)."""
    match t:
        case IntType():
            return ATInt(EMPTY)
        case BoolType():
            return ATBool(EMPTY)
        case RecordType(fields):
            return ATRecord(tuple((n, atype_from_type(x)) for n, x in fields), EMPTY)
        case BagType(elem):
            return ATBag(atype_from_type(elem), EMPTY)
    raise AssertionError(f"unknown type {t!r}")


def atype_with_paths(t: Type, root: str) -> AType:
    """Annotate every type node with the singleton of its path under ``root``.

    Bag element types take an ``.elem`` step, e.g. ``R``, ``R.elem``,
    ``R.elem.A``.
    """
    ann = frozenset({root})
    match t:
        case IntType():
            return ATInt(ann)
        case BoolType():
            return ATBool(ann)
        case RecordType(fields):
            return ATRecord(
                tuple((n, atype_with_paths(x, f"{root}.{n}")) for n, x in fields), ann
            )
        case BagType(elem):
            return ATBag(atype_with_paths(elem, f"{root}.elem"), ann)
    raise AssertionError(f"unknown type {t!r}")


# ---------------------------------------------------------------------------
# The analysis


def analyze(ctx: ACtx, e: Expr) -> AType:
    match e:
        case Var(name):
            if name not in ctx:
                raise TypecheckError(f"unbound variable {name!r}")
            return ctx[name]
        case Let(name, bound, body):
            return analyze({**ctx, name: analyze(ctx, bound)}, body)
        case IntLit():
            return ATInt(EMPTY)
        case BoolLit():
            return ATBool(EMPTY)
        case Add(l, r):
            t1 = _expect(analyze(ctx, l), ATInt, "left operand of +")
            t2 = _expect(analyze(ctx, r), ATInt, "right operand of +")
            return ATInt(t1.ann | t2.ann)
        case Sum(a):
            t = _expect(analyze(ctx, a), ATBag, "argument of sum")
            elem = _expect(t.elem, ATInt, "elements of sum's argument")
            return ATInt(elem.ann | t.ann)
        case Not(a):
            t = _expect(analyze(ctx, a), ATBool, "argument of not")
            return ATBool(t.ann)
        case And(l, r):
            t1 = _expect(analyze(ctx, l), ATBool, "left operand of and")
            t2 = _expect(analyze(ctx, r), ATBool, "right operand of and")
            return ATBool(t1.ann | t2.ann)
        case Eq(l, r):
            t1, t2 = analyze(ctx, l), analyze(ctx, r)
            if not compatible(t1, t2):
                raise TypecheckError("operands of == have different types")
            return ATBool(colors_of_type(t1) | colors_of_type(t2))
        case If(c, t, o):
            t0 = _expect(analyze(ctx, c), ATBool, "condition of if")
            t1, t2 = analyze(ctx, t), analyze(ctx, o)
            if not compatible(t1, t2):
                raise TypecheckError("branches of if have different types")
            return add_type_annotation(merge_types(t1, t2), t0.ann)
        case RecordExpr(fields):
            return ATRecord(tuple((n, analyze(ctx, v)) for n, v in fields), EMPTY)
        case Proj(a, f):
            t = _expect(analyze(ctx, a), ATRecord, f"projection .{f}")
            try:
                field = t.field(f)
            except KeyError:
                raise TypecheckError(f"field {f!r} not found") from None
            return add_type_annotation(field, t.ann)
        case Empty(elem):
            if elem is None:
                raise TypecheckError("empty collection without element type; elaborate first")
            return ATBag(atype_from_type(elem), EMPTY)
        case Singleton(a):
            return ATBag(analyze(ctx, a), EMPTY)
        case Union(l, r):
            t1 = _expect(analyze(ctx, l), ATBag, "left operand of union")
            t2 = _expect(analyze(ctx, r), ATBag, "right operand of union")
            if not compatible(t1.elem, t2.elem):
                raise TypecheckError("operands of union have different element types")
            return ATBag(merge_types(t1.elem, t2.elem), t1.ann | t2.ann)
        case Diff(l, r):
            t1 = _expect(analyze(ctx, l), ATBag, "left operand of diff")
            t2 = _expect(analyze(ctx, r), ATBag, "right operand of diff")
            if not compatible(t1.elem, t2.elem):
                raise TypecheckError("operands of diff have different element types")
            return ATBag(t1.elem, colors_of_type(t1) | colors_of_type(t2))
        case Comp(body, var, source):
            t = _expect(analyze(ctx, source), ATBag, "comprehension source")
            body_t = analyze({**ctx, var: t.elem}, body)
            return ATBag(body_t, t.ann)
        case Flatten(a):
            t = _expect(analyze(ctx, a), ATBag, "argument of flatten")
            inner = _expect(t.elem, ATBag, "elements of flatten's argument")
            return ATBag(inner.elem, t.ann | inner.ann)
    raise TypecheckError(f"cannot analyze sugar node {type(e).__name__}; desugar first")


def _expect(t: AType, kind: type, where: str):
    if not isinstance(t, kind):
        raise TypecheckError(f"{where}: unexpected type {render_atype(t)}")
    return t


# ---------------------------------------------------------------------------
# Semantics of annotated types: membership


def member(v: AValue, t: AType) -> bool:
    """True iff shapes agree and every value annotation is bounded by the type's."""
    if not v.ann <= t.ann:
        return False
    match (v, t):
        case (AInt(), ATInt()) | (ABool(), ATBool()):
            return True
        case (ARecord(fields, _), ATRecord(tfields, _)):
            return len(fields) == len(tfields) and all(
                n == tn and member(x, tt) for (n, x), (tn, tt) in zip(fields, tfields)
            )
        case (ABag(elements, _), ATBag(elem, _)):
            return all(member(x, elem) for x in elements)
        case _:
            return False


def member_env(env: dict[str, AValue], ctx: ACtx) -> bool:
    return env.keys() == ctx.keys() and all(member(env[n], ctx[n]) for n in env)


# ---------------------------------------------------------------------------
# Rendering and JSON


def render_atype(t: AType) -> str:
    suffix = "^{" + ",".join(sorted(t.ann)) + "}" if t.ann else ""
    match t:
        case ATInt():
            return f"int{suffix}"
        case ATBool():
            return f"bool{suffix}"
        case ATRecord(fields, _):
            inner = ", ".join(f"{n}: {render_atype(x)}" for n, x in fields)
            return f"({inner}){suffix}"
        case ATBag(elem, _):
            return f"{{{render_atype(elem)}}}{suffix}"
    raise AssertionError(f"unknown annotated type {t!r}")


def atype_to_json(t: AType) -> dict[str, Any]:
    raw: Any
    match t:
        case ATInt():
            raw = "int"
        case ATBool():
            raw = "bool"
        case ATRecord(fields, _):
            raw = {"rec": {n: atype_to_json(x) for n, x in fields}}
        case ATBag(elem, _):
            raw = {"bag": atype_to_json(elem)}
        case _:
            raise AssertionError(f"unknown annotated type {t!r}")
    return {"t": raw, "ann": sorted(t.ann)}


def atype_from_json(data: Any) -> AType:
    if not isinstance(data, dict) or "t" not in data:
        raise DataError(f'annotated type node must be an object with "t": {data!r}')
    ann = frozenset(data.get("ann", []))
    raw = data["t"]
    if raw == "int":
        return ATInt(ann)
    if raw == "bool":
        return ATBool(ann)
    if isinstance(raw, dict) and set(raw.keys()) == {"rec"}:
        return ATRecord(tuple((n, atype_from_json(x)) for n, x in raw["rec"].items()), ann)
    if isinstance(raw, dict) and set(raw.keys()) == {"bag"}:
        return ATBag(atype_from_json(raw["bag"]), ann)
    raise DataError(f"cannot interpret {raw!r} as a raw type")
