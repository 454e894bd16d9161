"""Command-line entry point.

Subcommands: check, run, track, analyze, slice backward|forward, verify,
bundle.  Exit codes: 0 success, 1 query syntax/type error, 2 data or IO
error, 3 verification failure, 4 path or color resolution error.
Human-readable output goes to stdout by default; ``--json`` switches to
machine-readable JSON.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any

from . import bundle as bundle_mod
from .analysis import (
    ACtx,
    analyze,
    atype_from_json,
    atype_to_json,
    atype_with_paths,
    erase_type,
    render_atype,
)
from .avalues import (
    aenv_from_json,
    apply_subst_env,
    avalue_to_json,
    colors_of,
    distinctly_color_env,
    erase,
    render_avalue,
)
from .errors import (
    DataError,
    IncompatibleTypesError,
    NrcError,
    ParseError,
    PathError,
    PreconditionError,
    TypecheckError,
)
from .interp import evaluate
from .parser import parse, parse_atype
from .slicing import backward_slice, forward_slice, parse_value_path
from .syntax import desugar, render, render_type
from .tracking import AEnv, track
from .typecheck import TypeCtx, infer_and_elaborate
from .values import render_value, value_from_json, value_to_json, type_of_value
from .verification import (
    check_color_invariance,
    check_dependency_correctness,
    check_erasure,
    check_static_soundness,
    minimality_report,
)

EXIT_OK = 0
EXIT_QUERY = 1
EXIT_DATA = 2
EXIT_VERIFY = 3
EXIT_PATH = 4


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="nrcprov", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, data: bool = True) -> None:
        p.add_argument("query", nargs="?", help="query file (.nrc)")
        p.add_argument("-e", "--expr", help="inline query text instead of a file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--ctx", help="context file (variable -> type or a-type)")
        if data:
            p.add_argument("--data", help="plain environment JSON")
            p.add_argument("--adata", help="pre-annotated environment JSON")
            p.add_argument(
                "--alias",
                help="path->color alias file; unlisted auto-colors are dropped",
            )

    common(sub.add_parser("check", help="typecheck and print the query type"), data=True)
    common(sub.add_parser("run", help="plain evaluation"))
    common(sub.add_parser("track", help="dynamic provenance tracking"))
    common(sub.add_parser("analyze", help="static provenance analysis"))

    sl = sub.add_parser("slice", help="forward/backward data slices")
    slsub = sl.add_subparsers(dest="direction", required=True)
    back = slsub.add_parser("backward", help="input cells a selected output node depends on")
    common(back)
    back.add_argument("--path", required=True, help="output path, e.g. result[0].A")
    back.add_argument("--deep", action="store_true", help="union the selected subtree's colors")
    fwd = slsub.add_parser("forward", help="output nodes carrying a selected input color")
    common(fwd)
    fwd.add_argument("--color", required=True, help="input color name")

    ve = sub.add_parser("verify", help="run the correctness checks")
    common(ve)
    ve.add_argument("--trials", type=int, default=200)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--minimality", action="store_true", help="run the exhaustive oracle")
    ve.add_argument("--min-domain", default="0,1", help="scalar domain, e.g. 0,1")
    ve.add_argument("--min-size", type=int, default=2, help="bag size bound")

    bu = sub.add_parser("bundle", help="emit a slice bundle for the viewer")
    common(bu)
    bu.add_argument("-o", "--out", help="output file (default stdout)")
    return top


# ---------------------------------------------------------------------------
# Input loading


def _read_query(args) -> str:
    if args.expr is not None:
        return args.expr
    if args.query is None:
        raise DataError("no query given: pass a file or -e EXPR")
    try:
        with open(args.query, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DataError(f"cannot read query file: {exc}") from exc


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path} is not valid JSON: {exc}") from exc


def _load_ctx(path: str) -> ACtx:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise DataError("context file must hold an object of variables")
    out: ACtx = {}
    for name, entry in data.items():
        if isinstance(entry, str):
            try:
                out[name] = parse_atype(entry)
            except ParseError as exc:
                raise DataError(f"context entry {name!r}: {exc}") from exc
        else:
            out[name] = atype_from_json(entry)
    return out


def _load_aenv(args) -> AEnv:
    """Annotated input: --adata as-is, or --data auto-colored (plus --alias)."""
    if getattr(args, "adata", None):
        return aenv_from_json(_read_json(args.adata))
    if getattr(args, "data", None):
        env = {n: value_from_json(v) for n, v in _read_json(args.data).items()}
        aenv = distinctly_color_env(env)
        alias = getattr(args, "alias", None)
        if alias:
            table = _read_json(alias)
            if not isinstance(table, dict) or not all(
                isinstance(v, str) for v in table.values()
            ):
                raise DataError("alias file must map path strings to color names")
            all_colors = set()
            for v in aenv.values():
                all_colors |= colors_of(v)
            subst = {
                c: frozenset({table[c]}) if c in table else frozenset() for c in all_colors
            }
            aenv = apply_subst_env(subst, aenv)
        return aenv
    raise DataError("no input data: pass --data or --adata")


def _plain_env(aenv: AEnv) -> dict:
    return {n: erase(v) for n, v in aenv.items()}


def _typing_ctx(args, aenv: AEnv | None) -> TypeCtx:
    ctx_path = getattr(args, "ctx", None)
    if ctx_path:
        return {n: erase_type(t) for n, t in _load_ctx(ctx_path).items()}
    if aenv is None:
        return {}  # closed queries typecheck in the empty context
    try:
        return {n: type_of_value(erase(v)) for n, v in aenv.items()}
    except DataError as exc:
        raise DataError(f"{exc}; pass --ctx to fix the types") from exc


def _prepare(args, need_data: bool = True):
    """Parse, desugar, load inputs, and elaborate the query."""
    source = _read_query(args)
    core = desugar(parse(source))
    aenv = None
    if getattr(args, "adata", None) or getattr(args, "data", None):
        aenv = _load_aenv(args)
    elif need_data:
        raise DataError("no input data: pass --data or --adata")
    ctx = _typing_ctx(args, aenv)
    t, elaborated = infer_and_elaborate(ctx, core)
    return source, elaborated, t, ctx, aenv


def _emit(args, human: str, payload: Any) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(human)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_check(args) -> int:
    _, elaborated, t, _, _ = _prepare(args, need_data=False)
    _emit(args, render_type(t), {"type": render_type(t), "core": render(elaborated)})
    return EXIT_OK


def _cmd_run(args) -> int:
    _, elaborated, _, _, aenv = _prepare(args)
    value = evaluate(_plain_env(aenv), elaborated)
    _emit(args, render_value(value), {"value": value_to_json(value)})
    return EXIT_OK


def _cmd_track(args) -> int:
    _, elaborated, _, _, aenv = _prepare(args)
    out = track(aenv, elaborated)
    _emit(args, render_avalue(out), {"output": avalue_to_json(out)})
    return EXIT_OK


def _analysis_ctx(args, ctx: TypeCtx) -> ACtx:
    if getattr(args, "ctx", None):
        return _load_ctx(args.ctx)
    return {n: atype_with_paths(t, n) for n, t in ctx.items()}


def _cmd_analyze(args) -> int:
    _, elaborated, _, ctx, _ = _prepare(args, need_data=False)
    actx = _analysis_ctx(args, ctx)
    at = analyze(actx, elaborated)
    _emit(args, render_atype(at), {"atype": render_atype(at), "json": atype_to_json(at)})
    return EXIT_OK


def _cmd_slice(args) -> int:
    _, elaborated, _, _, aenv = _prepare(args)
    out = track(aenv, elaborated)
    if args.direction == "backward":
        at = parse_value_path(args.path)
        paths = backward_slice(aenv, out, at, deep=args.deep)
    else:
        paths = forward_slice(out, args.color)
    rendered = sorted(str(p) for p in paths)
    _emit(args, "\n".join(rendered) if rendered else "(empty slice)", {"paths": rendered})
    return EXIT_OK


_INDEX_STEP = re.compile(r"\[\d+\]")


def _deindex_subst(aenv: AEnv) -> dict[str, frozenset[str]]:
    """Collapse value path colors into their type-path colors (drop indices)."""
    colors = set()
    for v in aenv.values():
        colors |= colors_of(v)
    return {c: frozenset({_INDEX_STEP.sub(".elem", c)}) for c in colors}


def _cmd_verify(args) -> int:
    _, elaborated, _, ctx, aenv = _prepare(args)
    env = _plain_env(aenv)
    reports = [
        check_erasure(elaborated, aenv),
        check_color_invariance(elaborated, aenv, trials=args.trials, seed=args.seed),
        check_dependency_correctness(
            elaborated, env, trials=args.trials, seed=args.seed, ctx=ctx
        ),
    ]
    if getattr(args, "ctx", None):
        actx = _load_ctx(args.ctx)
        reports.append(check_static_soundness(elaborated, actx, aenv))
    else:
        actx = {n: atype_with_paths(t, n) for n, t in ctx.items()}
        auto = distinctly_color_env(env)
        collapsed = apply_subst_env(_deindex_subst(auto), auto)
        reports.append(check_static_soundness(elaborated, actx, collapsed))
    payload = [r.to_json() for r in reports]
    if args.minimality:
        domain = tuple(int(x) for x in args.min_domain.split(","))
        mreport = minimality_report(
            elaborated, env, scalar_domain=domain, size_bound=args.min_size, ctx=ctx
        )
        payload.append(mreport.to_json())
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for item in payload:
            if item["check"] == "minimality":
                print(f"minimality: {len(item['spurious'])} spurious color(s) found")
                for s in item["spurious"]:
                    print(f"  spurious {s['color']} at {s['path']}")
            else:
                status = "ok" if item["passed"] else f"FAILED ({len(item['failures'])})"
                print(f"{item['check']}: {status}")
    failed = any(not item.get("passed", True) for item in payload)
    return EXIT_VERIFY if failed else EXIT_OK


def _cmd_bundle(args) -> int:
    source, elaborated, t, ctx, aenv = _prepare(args)
    out = track(aenv, elaborated)
    actx = _analysis_ctx(args, ctx)
    at = analyze(actx, elaborated)
    data = bundle_mod.build_bundle(source, elaborated, t, aenv, out, at, actx)
    bundle_mod.validate_bundle(data)
    text = json.dumps(data, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        if not args.json:
            print(f"wrote {args.out}")
    else:
        print(text)
    return EXIT_OK


_HANDLERS = {
    "check": _cmd_check,
    "run": _cmd_run,
    "track": _cmd_track,
    "analyze": _cmd_analyze,
    "slice": _cmd_slice,
    "verify": _cmd_verify,
    "bundle": _cmd_bundle,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ParseError, TypecheckError, IncompatibleTypesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUERY
    except PathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PATH
    except (DataError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NrcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
