"""Slice bundles: self-contained JSON consumed by the slice-explorer UI."""

from __future__ import annotations

from typing import Any

from .analysis import ACtx, AType, atype_to_json, render_atype
from .avalues import AValue, aenv_from_json, aenv_to_json, avalue_from_json, avalue_to_json, colors_of, erase
from .errors import DataError
from .interp import evaluate
from .slicing import color_path_map
from .syntax import Expr, Type, render, render_type
from .tracking import AEnv

SCHEMA = "nrcprov/1"
TOOL_VERSION = "0.1.0"


def build_bundle(
    source: str,
    core: Expr,
    plain_type: Type,
    aenv: AEnv,
    output: AValue,
    atype: AType | None = None,
    actx: ACtx | None = None,
) -> dict[str, Any]:
    paths = color_path_map(aenv)
    colors: dict[str, Any] = {}
    mentioned = set(colors_of(output))
    for v in aenv.values():
        mentioned |= colors_of(v)
    for c in sorted(mentioned):
        path = paths.get(c)
        colors[c] = None if path is None else str(path)
    return {
        "schema": SCHEMA,
        "query": source,
        "core": render(core),
        "type": render_type(plain_type),
        "atype": None if atype is None else render_atype(atype),
        # JSON twins of the analysis results so the viewer's static mode can
        # compute type-level slices without a text parser.
        "atype_json": None if atype is None else atype_to_json(atype),
        "actx": None if actx is None else {n: atype_to_json(t) for n, t in actx.items()},
        "env": aenv_to_json(aenv),
        "output": avalue_to_json(output),
        "colors": colors,
        "meta": {"tool": "nrcprov", "version": TOOL_VERSION},
    }


def validate_bundle(data: Any) -> dict[str, Any]:
    """Check the schema tag and the stored input/output self-consistency."""
    if not isinstance(data, dict):
        raise DataError("bundle must be a JSON object")
    if data.get("schema") != SCHEMA:
        raise DataError(f"unsupported bundle schema {data.get('schema')!r}; expected {SCHEMA!r}")
    for key in ("query", "core", "type", "env", "output", "colors"):
        if key not in data:
            raise DataError(f"bundle is missing the {key!r} field")
    aenv = aenv_from_json(data["env"])
    output = avalue_from_json(data["output"])
    # Recompute the plain run from the stored pieces; evaluation does not
    # need elaborated empty-collection types.
    from .parser import parse
    from .syntax import desugar

    core = desugar(parse(data["core"]))
    env = {x: erase(v) for x, v in aenv.items()}
    try:
        replayed = evaluate(env, core)
    except Exception as exc:
        raise DataError(f"bundle query does not evaluate against its input: {exc}") from exc
    if replayed != erase(output):
        raise DataError("bundle is inconsistent: stored output does not match evaluation")
    mentioned = colors_of(output)
    missing = mentioned - set(data["colors"].keys())
    if missing:
        raise DataError(f"bundle color map is missing output colors: {sorted(missing)}")
    return data
