"""Annotated values: erasure, color extraction, substitution, distinct coloring.

Every node carries a finite set of colors.  Bags of annotated values are
multisets kept in a canonical order whose primary key is the erased value,
tie-breaking on annotations, so erasing a canonical annotated bag yields a
canonical plain bag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator

from .errors import DataError
from .syntax import BagType, BoolType, IntType, RecordType, Type
from .values import Value, VBag, VBool, VInt, VRecord, sort_key

Annotation = frozenset[str]
EMPTY: Annotation = frozenset()

# Total map Color -> set of colors; unmapped colors default to identity.
ColorSubst = dict[str, Annotation]


@dataclass(frozen=True)
class AValue:
    pass


@dataclass(frozen=True)
class AInt(AValue):
    value: int
    ann: Annotation = EMPTY


@dataclass(frozen=True)
class ABool(AValue):
    value: bool
    ann: Annotation = EMPTY


@dataclass(frozen=True)
class ARecord(AValue):
    fields: tuple[tuple[str, AValue], ...]
    ann: Annotation = EMPTY

    def field(self, name: str) -> AValue:
        for n, v in self.fields:
            if n == name:
                return v
        raise KeyError(name)


@dataclass(frozen=True)
class ABag(AValue):
    elements: tuple[AValue, ...]
    ann: Annotation = EMPTY

    def __post_init__(self):
        ordered = tuple(sorted(self.elements, key=avalue_sort_key))
        object.__setattr__(self, "elements", ordered)


def erase(v: AValue) -> Value:
    match v:
        case AInt(i, _):
            return VInt(i)
        case ABool(b, _):
            return VBool(b)
        case ARecord(fields, _):
            return VRecord(tuple((n, erase(x)) for n, x in fields))
        case ABag(elements, _):
            return VBag(tuple(erase(x) for x in elements))
    raise AssertionError(f"unknown annotated value {v!r}")


def colors_of(v: AValue) -> Annotation:
    """Union of the annotations at every node."""
    out = set(v.ann)
    match v:
        case ARecord(fields, _):
            for _, x in fields:
                out |= colors_of(x)
        case ABag(elements, _):
            for x in elements:
                out |= colors_of(x)
    return frozenset(out)


def _color_key(c: str) -> tuple[int, str]:
    # Length-first so path colors like R[2] sort before R[10].
    return (len(c), c)


def _ann_key(v: AValue) -> tuple:
    top = tuple(_color_key(c) for c in sorted(v.ann, key=_color_key))
    match v:
        case ARecord(fields, _):
            return (top, tuple(_ann_key(x) for _, x in fields))
        case ABag(elements, _):
            return (top, tuple(_ann_key(x) for x in elements))
        case _:
            return (top,)


def avalue_sort_key(v: AValue) -> tuple:
    """Erased value is the primary key; annotations break ties."""
    return (sort_key(erase(v)), _ann_key(v))


def add_annotation(v: AValue, extra: Annotation) -> AValue:
    """Union ``extra`` into the top-level annotation; erasure is unchanged."""
    if not extra:
        return v
    match v:
        case AInt(i, ann):
            return AInt(i, ann | extra)
        case ABool(b, ann):
            return ABool(b, ann | extra)
        case ARecord(fields, ann):
            return ARecord(fields, ann | extra)
        case ABag(elements, ann):
            return ABag(elements, ann | extra)
    raise AssertionError(f"unknown annotated value {v!r}")


def subst_color(subst: ColorSubst, c: str) -> Annotation:
    return subst.get(c, frozenset({c}))


def subst_set(subst: ColorSubst, ann: Annotation) -> Annotation:
    out: set[str] = set()
    for c in ann:
        out |= subst_color(subst, c)
    return frozenset(out)


def apply_subst(subst: ColorSubst, v: AValue) -> AValue:
    match v:
        case AInt(i, ann):
            return AInt(i, subst_set(subst, ann))
        case ABool(b, ann):
            return ABool(b, subst_set(subst, ann))
        case ARecord(fields, ann):
            return ARecord(
                tuple((n, apply_subst(subst, x)) for n, x in fields), subst_set(subst, ann)
            )
        case ABag(elements, ann):
            return ABag(tuple(apply_subst(subst, x) for x in elements), subst_set(subst, ann))
    raise AssertionError(f"unknown annotated value {v!r}")


def apply_subst_env(subst: ColorSubst, env: dict[str, AValue]) -> dict[str, AValue]:
    return {name: apply_subst(subst, v) for name, v in env.items()}


# ---------------------------------------------------------------------------
# Distinct coloring with deterministic path names


def distinctly_color(v: Value, root: str) -> AValue:
    """Annotate every node with the singleton of its path under ``root``.

    Bag elements are numbered in the canonical order of the plain bag, e.g.
    ``R``, ``R[0]``, ``R[0].A``.
    """
    match v:
        case VInt(i):
            return AInt(i, frozenset({root}))
        case VBool(b):
            return ABool(b, frozenset({root}))
        case VRecord(fields):
            return ARecord(
                tuple((n, distinctly_color(x, f"{root}.{n}")) for n, x in fields),
                frozenset({root}),
            )
        case VBag(elements):
            return ABag(
                tuple(distinctly_color(x, f"{root}[{i}]") for i, x in enumerate(elements)),
                frozenset({root}),
            )
    raise AssertionError(f"unknown value {v!r}")


def distinctly_color_env(env: dict[str, Value]) -> dict[str, AValue]:
    return {name: distinctly_color(v, name) for name, v in env.items()}


def plain_annotate(v: Value) -> AValue:
    """Lift a plain value to an annotated value with empty annotations."""
    match v:
        case VInt(i):
            return AInt(i, EMPTY)
        case VBool(b):
            return ABool(b, EMPTY)
        case VRecord(fields):
            return ARecord(tuple((n, plain_annotate(x)) for n, x in fields), EMPTY)
        case VBag(elements):
            return ABag(tuple(plain_annotate(x) for x in elements), EMPTY)
    raise AssertionError(f"unknown value {v!r}")


def is_distinctly_colored(v: AValue) -> bool:
    seen: set[str] = set()

    def walk(node: AValue) -> bool:
        if len(node.ann) != 1:
            return False
        (c,) = node.ann
        if c in seen:
            return False
        seen.add(c)
        match node:
            case ARecord(fields, _):
                return all(walk(x) for _, x in fields)
            case ABag(elements, _):
                return all(walk(x) for x in elements)
            case _:
                return True

    return walk(v)


def nodes_of(v: AValue) -> Iterator[AValue]:
    """All nodes of ``v`` in preorder."""
    yield v
    match v:
        case ARecord(fields, _):
            for _, x in fields:
                yield from nodes_of(x)
        case ABag(elements, _):
            for x in elements:
                yield from nodes_of(x)


# ---------------------------------------------------------------------------
# Equal except at a color


def equal_except_at(v1: AValue, v2: AValue, c: str) -> bool:
    """Same structure except possibly below nodes carrying ``c`` on both sides."""
    if c in v1.ann and c in v2.ann:
        return True
    if v1.ann != v2.ann:
        return False
    match (v1, v2):
        case (AInt(a, _), AInt(b, _)):
            return a == b
        case (ABool(a, _), ABool(b, _)):
            return a == b
        case (ARecord(f1, _), ARecord(f2, _)):
            if [n for n, _ in f1] != [n for n, _ in f2]:
                return False
            return all(equal_except_at(x1, x2, c) for (_, x1), (_, x2) in zip(f1, f2))
        case (ABag(e1, _), ABag(e2, _)):
            return _bag_match(e1, e2, c)
        case _:
            return False


def _bag_match(xs: tuple[AValue, ...], ys: tuple[AValue, ...], c: str) -> bool:
    """Search for a bijection pairing elements under equal_except_at."""
    if len(xs) != len(ys):
        return False
    used = [False] * len(ys)

    def go(i: int) -> bool:
        if i == len(xs):
            return True
        for j, y in enumerate(ys):
            if not used[j] and equal_except_at(xs[i], y, c):
                used[j] = True
                if go(i + 1):
                    return True
                used[j] = False
        return False

    return go(0)


def env_equal_except_at(e1: dict[str, AValue], e2: dict[str, AValue], c: str) -> bool:
    if e1.keys() != e2.keys():
        return False
    return all(equal_except_at(e1[n], e2[n], c) for n in e1)


# ---------------------------------------------------------------------------
# Shape membership


def check_shape(v: AValue, t: Type) -> bool:
    """True iff the erasure of ``v`` inhabits ``t``."""
    match (v, t):
        case (AInt(), IntType()) | (ABool(), BoolType()):
            return True
        case (ARecord(fields, _), RecordType(tfields)):
            return len(fields) == len(tfields) and all(
                n == tn and check_shape(x, tt) for (n, x), (tn, tt) in zip(fields, tfields)
            )
        case (ABag(elements, _), BagType(elem)):
            return all(check_shape(x, elem) for x in elements)
        case _:
            return False


# ---------------------------------------------------------------------------
# Rendering and JSON


def render_annotation(ann: Annotation) -> str:
    return "^{" + ",".join(sorted(ann)) + "}" if ann else ""


def render_avalue(v: AValue) -> str:
    suffix = render_annotation(v.ann)
    match v:
        case AInt(i, _):
            return f"{i}{suffix}"
        case ABool(b, _):
            return ("true" if b else "false") + suffix
        case ARecord(fields, _):
            inner = ", ".join(f"{n}: {render_avalue(x)}" for n, x in fields)
            return f"({inner}){suffix}"
        case ABag(elements, _):
            inner = ", ".join(render_avalue(x) for x in elements)
            return f"{{{inner}}}{suffix}"
    raise AssertionError(f"unknown annotated value {v!r}")


def avalue_to_json(v: AValue) -> dict[str, Any]:
    raw: Any
    match v:
        case AInt(i, _):
            raw = i
        case ABool(b, _):
            raw = b
        case ARecord(fields, _):
            raw = {"rec": {n: avalue_to_json(x) for n, x in fields}}
        case ABag(elements, _):
            raw = {"bag": [avalue_to_json(x) for x in elements]}
        case _:
            raise AssertionError(f"unknown annotated value {v!r}")
    return {"w": raw, "ann": sorted(v.ann)}


def avalue_from_json(data: Any) -> AValue:
    if not isinstance(data, dict) or "w" not in data:
        raise DataError(f'annotated value node must be an object with "w": {data!r}')
    ann = frozenset(data.get("ann", []))
    if not all(isinstance(c, str) and c for c in ann):
        raise DataError(f"annotations must be non-empty strings: {sorted(ann)!r}")
    raw = data["w"]
    if isinstance(raw, bool):
        return ABool(raw, ann)
    if isinstance(raw, int):
        return AInt(raw, ann)
    if isinstance(raw, float) and raw.is_integer():
        return AInt(int(raw), ann)
    if isinstance(raw, dict) and set(raw.keys()) == {"rec"}:
        return ARecord(tuple((n, avalue_from_json(x)) for n, x in raw["rec"].items()), ann)
    if isinstance(raw, dict) and set(raw.keys()) == {"bag"}:
        return ABag(tuple(avalue_from_json(x) for x in raw["bag"]), ann)
    raise DataError(f"cannot interpret {raw!r} as a raw value")


def aenv_to_json(env: dict[str, AValue]) -> dict[str, Any]:
    return {name: avalue_to_json(v) for name, v in env.items()}


def aenv_from_json(data: Any) -> dict[str, AValue]:
    if not isinstance(data, dict):
        raise DataError("an annotated environment file must hold a JSON object")
    return {name: avalue_from_json(v) for name, v in data.items()}
