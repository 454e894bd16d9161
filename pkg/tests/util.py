"""Shared fixture loading and corpus construction for the test suite."""

from __future__ import annotations

import json
import random
from pathlib import Path

from nrcprov.analysis import ACtx
from nrcprov.avalues import AValue, aenv_from_json
from nrcprov.parser import parse, parse_atype
from nrcprov.syntax import Expr, desugar
from nrcprov.tracking import AEnv
from nrcprov.typecheck import TypeCtx, infer_and_elaborate
from nrcprov.values import Value, env_from_json
from nrcprov.verification import random_env, random_query

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# The nine queries of the worked-example figure, in figure order.
FIGURE_QUERIES = (
    "piA",
    "sigmaAB",
    "product",
    "piBE-sigmaAD",
    "union-rename",
    "diff-rename",
    "sum-piA",
    "count",
    "count-sigma",
)


def read_json(name: str):
    with open(FIXTURES / name, encoding="utf-8") as fh:
        return json.load(fh)


def query_source(name: str) -> str:
    with open(FIXTURES / "queries" / f"{name}.nrc", encoding="utf-8") as fh:
        return fh.read()


def fig_env() -> dict[str, Value]:
    return env_from_json(read_json("fig.json"))


def fig_aenv() -> AEnv:
    return aenv_from_json(read_json("fig.ajson"))


def fig_actx() -> ACtx:
    return {name: parse_atype(text) for name, text in read_json("fig-ctx.json").items()}


def fig_ctx() -> TypeCtx:
    from nrcprov.analysis import erase_type

    return {name: erase_type(t) for name, t in fig_actx().items()}


def prepare(source: str, ctx: TypeCtx) -> Expr:
    """Parse, desugar, and elaborate a query against a context."""
    return infer_and_elaborate(ctx, desugar(parse(source)))[1]


def load_query(name: str, ctx: TypeCtx | None = None) -> Expr:
    return prepare(query_source(name), fig_ctx() if ctx is None else ctx)


CorpusEntry = tuple[str, Expr, TypeCtx, dict[str, Value]]


def corpus(random_count: int = 20, seed: str = "corpus") -> list[CorpusEntry]:
    """Named figure queries + grouping + x-x + random well-typed queries.

    Each entry carries the typing context and a plain environment the query
    is meant to run in.
    """
    ctx = fig_ctx()
    env = fig_env()
    out: list[CorpusEntry] = []
    for name in FIGURE_QUERIES + ("grouping-x", "grouping"):
        out.append((name, load_query(name), dict(ctx), dict(env)))
    from nrcprov.syntax import BagType, IntType

    xctx: TypeCtx = {"x": BagType(IntType())}
    xenv = env_from_json({"x": {"bag": [1]}})
    out.append(("xminusx", prepare(query_source("xminusx"), xctx), xctx, xenv))
    for i in range(random_count):
        rng = random.Random(f"{seed}:q{i}")
        q = random_query(ctx, rng, depth=4)
        elaborated = infer_and_elaborate(ctx, q)[1]
        qenv = random_env(ctx, random.Random(f"{seed}:e{i}"))
        out.append((f"random{i}", elaborated, dict(ctx), qenv))
    return out
