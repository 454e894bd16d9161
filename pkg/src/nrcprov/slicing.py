"""Forward and backward data slices over annotated values and types.

Value paths address nodes as ``R[0].A`` (variable root, bag index in
canonical order, record field); the query output is rooted at ``result``.
Type paths use ``.elem`` to step into a bag's element type, e.g.
``R.elem.A`` (a record field literally named ``elem`` is therefore not
addressable in type paths).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .analysis import ACtx, ATBag, ATRecord, AType
from .avalues import ABag, ARecord, AValue, colors_of
from .errors import PathError

OUTPUT_ROOT = "result"


@dataclass(frozen=True)
class Field:
    name: str


@dataclass(frozen=True)
class Index:
    index: int


@dataclass(frozen=True)
class Elem:
    pass


@dataclass(frozen=True)
class ValuePath:
    root: str
    steps: tuple[Field | Index, ...] = ()

    def __str__(self) -> str:
        return self.root + "".join(
            f"[{s.index}]" if isinstance(s, Index) else f".{s.name}" for s in self.steps
        )


@dataclass(frozen=True)
class TypePath:
    root: str
    steps: tuple[Field | Elem, ...] = ()

    def __str__(self) -> str:
        return self.root + "".join(
            ".elem" if isinstance(s, Elem) else f".{s.name}" for s in self.steps
        )


_PATH_TOKEN = re.compile(r"\[(\d+)\]|\.([A-Za-z_][A-Za-z0-9_]*)")
_PATH_ROOT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def parse_value_path(text: str) -> ValuePath:
    m = _PATH_ROOT.match(text)
    if not m:
        raise PathError(f"malformed path {text!r}")
    steps: list[Field | Index] = []
    pos = m.end()
    while pos < len(text):
        t = _PATH_TOKEN.match(text, pos)
        if not t:
            raise PathError(f"malformed path {text!r} at offset {pos}")
        steps.append(Index(int(t.group(1))) if t.group(1) is not None else Field(t.group(2)))
        pos = t.end()
    return ValuePath(m.group(0), tuple(steps))


def parse_type_path(text: str) -> TypePath:
    vp = parse_value_path(text)
    steps: list[Field | Elem] = []
    for s in vp.steps:
        if isinstance(s, Index):
            raise PathError(f"type path {text!r} cannot contain an index")
        steps.append(Elem() if s.name == "elem" else s)
    return TypePath(vp.root, tuple(steps))


# ---------------------------------------------------------------------------
# Resolution and enumeration


def resolve_value(v: AValue, path: ValuePath) -> AValue:
    node = v
    for step in path.steps:
        match (node, step):
            case (ARecord(), Field(name)):
                try:
                    node = node.field(name)
                except KeyError:
                    raise PathError(f"{path}: no field {name!r}") from None
            case (ABag(elements, _), Index(i)):
                if not 0 <= i < len(elements):
                    raise PathError(f"{path}: index {i} out of range")
                node = elements[i]
            case _:
                raise PathError(f"{path}: step does not match the value's shape")
    return node


def resolve_in_env(env: dict[str, AValue], path: ValuePath) -> AValue:
    if path.root not in env:
        raise PathError(f"unknown variable {path.root!r} in path {path}")
    return resolve_value(env[path.root], path)


def value_paths(v: AValue, root: str) -> Iterator[tuple[ValuePath, AValue]]:
    def walk(node: AValue, steps: tuple) -> Iterator[tuple[ValuePath, AValue]]:
        yield ValuePath(root, steps), node
        match node:
            case ARecord(fields, _):
                for n, x in fields:
                    yield from walk(x, steps + (Field(n),))
            case ABag(elements, _):
                for i, x in enumerate(elements):
                    yield from walk(x, steps + (Index(i),))

    yield from walk(v, ())


def env_paths(env: dict[str, AValue]) -> Iterator[tuple[ValuePath, AValue]]:
    for name, v in env.items():
        yield from value_paths(v, name)


def resolve_type(t: AType, path: TypePath) -> AType:
    node = t
    for step in path.steps:
        match (node, step):
            case (ATRecord(), Field(name)):
                try:
                    node = node.field(name)
                except KeyError:
                    raise PathError(f"{path}: no field {name!r}") from None
            case (ATBag(elem, _), Elem()):
                node = elem
            case _:
                raise PathError(f"{path}: step does not match the type's shape")
    return node


def type_paths(t: AType, root: str) -> Iterator[tuple[TypePath, AType]]:
    def walk(node: AType, steps: tuple) -> Iterator[tuple[TypePath, AType]]:
        yield TypePath(root, steps), node
        match node:
            case ATRecord(fields, _):
                for n, x in fields:
                    yield from walk(x, steps + (Field(n),))
            case ATBag(elem, _):
                yield from walk(elem, steps + (Elem(),))

    yield from walk(t, ())


# ---------------------------------------------------------------------------
# Slices


def backward_slice(
    env: dict[str, AValue],
    output: AValue,
    at: ValuePath,
    deep: bool = False,
) -> frozenset[ValuePath]:
    """Input paths whose own annotation intersects the selected output node's.

    With ``deep``, the selected node's whole subtree contributes its colors.
    """
    if at.root != OUTPUT_ROOT:
        raise PathError(f"output paths are rooted at {OUTPUT_ROOT!r}, got {at.root!r}")
    node = resolve_value(output, at)
    wanted = colors_of(node) if deep else node.ann
    return frozenset(path for path, n in env_paths(env) if n.ann & wanted)


def forward_slice(output: AValue, color: str) -> frozenset[ValuePath]:
    """Output paths whose node annotation contains ``color``."""
    return frozenset(
        path for path, n in value_paths(output, OUTPUT_ROOT) if color in n.ann
    )


def static_slice(ctx: ACtx, result: AType, at: TypePath) -> frozenset[TypePath]:
    """Context-type paths whose annotations intersect the selected node's."""
    if at.root != OUTPUT_ROOT:
        raise PathError(f"output type paths are rooted at {OUTPUT_ROOT!r}, got {at.root!r}")
    node = resolve_type(result, at)
    wanted = node.ann
    out: set[TypePath] = set()
    for name, t in ctx.items():
        for path, n in type_paths(t, name):
            if n.ann & wanted:
                out.add(path)
    return frozenset(out)


def color_path_map(env: dict[str, AValue]) -> dict[str, ValuePath | None]:
    """Map each color in the environment to its node, or None if not unique."""
    out: dict[str, ValuePath | None] = {}
    for path, n in env_paths(env):
        for c in n.ann:
            out[c] = None if c in out else path
    return out
