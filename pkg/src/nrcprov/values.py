"""Plain values over finite multisets, canonical forms, and their JSON format.

Bags are kept in a canonical sorted order (a fixed total order on values)
so that structural equality coincides with multiset equality.  JSON format:
int -> number, bool -> boolean, record -> object, bag -> {"bag": [...]}
with duplicates listed explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from .errors import DataError
from .syntax import BagType, BoolType, IntType, RecordType, Type


@dataclass(frozen=True)
class Value:
    pass


@dataclass(frozen=True)
class VInt(Value):
    value: int


@dataclass(frozen=True)
class VBool(Value):
    value: bool


@dataclass(frozen=True)
class VRecord(Value):
    fields: tuple[tuple[str, Value], ...]

    def field(self, name: str) -> Value:
        for n, v in self.fields:
            if n == name:
                return v
        raise KeyError(name)


@dataclass(frozen=True)
class VBag(Value):
    elements: tuple[Value, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.elements, key=sort_key))
        object.__setattr__(self, "elements", ordered)


def sort_key(v: Value) -> tuple:
    """Total order on values: kind tag, then structural recursion."""
    match v:
        case VBool(b):
            return (0, b)
        case VInt(i):
            return (1, i)
        case VRecord(fields):
            return (2, tuple((n, sort_key(x)) for n, x in fields))
        case VBag(elements):
            return (3, tuple(sort_key(x) for x in elements))
    raise AssertionError(f"unknown value {v!r}")


def value_eq(v1: Value, v2: Value) -> bool:
    """Multiset-aware structural equality (canonical forms compare directly)."""
    return v1 == v2


def bag(items: Iterable[Value]) -> VBag:
    return VBag(tuple(items))


def record(**fields: Value) -> VRecord:
    return VRecord(tuple(fields.items()))


def type_of_value(v: Value) -> Type:
    """Infer the type a value inhabits; empty bags are ambiguous."""
    match v:
        case VInt():
            return IntType()
        case VBool():
            return BoolType()
        case VRecord(fields):
            return RecordType(tuple((n, type_of_value(x)) for n, x in fields))
        case VBag(elements):
            if not elements:
                raise DataError("cannot infer the element type of an empty bag")
            types = {type_of_value(x) for x in elements}
            if len(types) != 1:
                raise DataError(f"bag elements have mixed types: {sorted(map(str, types))}")
            return BagType(types.pop())
    raise AssertionError(f"unknown value {v!r}")


def inhabits(v: Value, t: Type) -> bool:
    match (v, t):
        case (VInt(), IntType()) | (VBool(), BoolType()):
            return True
        case (VRecord(fields), RecordType(tfields)):
            return len(fields) == len(tfields) and all(
                n == tn and inhabits(x, tt) for (n, x), (tn, tt) in zip(fields, tfields)
            )
        case (VBag(elements), BagType(elem)):
            return all(inhabits(x, elem) for x in elements)
        case _:
            return False


def render_value(v: Value) -> str:
    match v:
        case VInt(i):
            return str(i)
        case VBool(b):
            return "true" if b else "false"
        case VRecord(fields):
            return "(" + ", ".join(f"{n}: {render_value(x)}" for n, x in fields) + ")"
        case VBag(elements):
            return "{" + ", ".join(render_value(x) for x in elements) + "}"
    raise AssertionError(f"unknown value {v!r}")


# ---------------------------------------------------------------------------
# JSON


def value_to_json(v: Value) -> Any:
    match v:
        case VInt(i):
            return i
        case VBool(b):
            return b
        case VRecord(fields):
            return {n: value_to_json(x) for n, x in fields}
        case VBag(elements):
            return {"bag": [value_to_json(x) for x in elements]}
    raise AssertionError(f"unknown value {v!r}")


def value_from_json(data: Any) -> Value:
    if isinstance(data, bool):
        return VBool(data)
    if isinstance(data, int):
        return VInt(data)
    if isinstance(data, float):
        if data.is_integer():
            return VInt(int(data))
        raise DataError(f"non-integer number {data!r} is not a valid value")
    if isinstance(data, dict):
        if set(data.keys()) == {"bag"} and isinstance(data["bag"], list):
            return VBag(tuple(value_from_json(x) for x in data["bag"]))
        return VRecord(tuple((n, value_from_json(x)) for n, x in data.items()))
    raise DataError(f"cannot interpret {data!r} as a value")


def env_to_json(env: dict[str, Value]) -> dict[str, Any]:
    return {name: value_to_json(v) for name, v in env.items()}


def env_from_json(data: Any) -> dict[str, Value]:
    if not isinstance(data, dict):
        raise DataError("an environment file must hold a JSON object of variables")
    return {name: value_from_json(v) for name, v in data.items()}
