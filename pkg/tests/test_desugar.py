from __future__ import annotations

import random

from nrcprov.interp import evaluate
from nrcprov.parser import parse
from nrcprov.syntax import (
    And,
    Comp,
    Empty,
    Flatten,
    If,
    IntLit,
    Not,
    Singleton,
    Sum,
    Var,
    desugar,
    is_core,
)
from nrcprov.typecheck import infer_and_elaborate
from nrcprov.values import VBag, VInt

from .util import fig_ctx, fig_env


def test_multi_generator_expansion():
    # {e | x <- e1, y <- e2}  becomes  flatten({ {e | y <- e2} | x <- e1 })
    got = desugar(parse("{ x.A + y.C | x <- R, y <- S }"))
    body = desugar(parse("x.A + y.C"))
    assert got == Flatten(Comp(Comp(body, "y", Var("S")), "x", Var("R")))


def test_filter_expansion():
    # {e | x <- e0, C}  becomes  flatten({ if C then {e} else empty | x <- e0 })
    got = desugar(parse("{ x | x <- R, x.A == x.B }"))
    cond = desugar(parse("x.A == x.B"))
    assert got == Flatten(Comp(If(cond, Singleton(Var("x")), Empty(None)), "x", Var("R")))


def test_count_expansion():
    got = desugar(parse("count(R)"))
    assert got == Sum(Comp(IntLit(1), "_x0", Var("R")))


def test_count_fresh_binder_avoids_free_variables():
    # _x0 occurs free in the argument, so the synthesized binder moves on.
    got = desugar(parse("count({ _x0.A | y <- R })"))
    assert isinstance(got, Sum)
    assert got.arg.var == "_x1"


def test_disjunction_expansion():
    got = desugar(parse("a or b"))
    assert got == Not(And(Not(Var("a")), Not(Var("b"))))


def test_bag_literal_left_nested_unions():
    got = desugar(parse("{1, 2, 3}"))
    assert got == desugar(parse("{1} union {2} union {3}"))
    assert desugar(parse("{7}")) == Singleton(IntLit(7))


def test_desugared_trees_are_core():
    for src in ("{ x | x <- R, x.A == x.B, x.B == x.A }", "count(R) + count(S)", "true or false"):
        assert is_core(desugar(parse(src)))


def test_desugaring_preserves_semantics():
    """Sugared and hand-expanded forms evaluate identically."""
    ctx, env = fig_ctx(), fig_env()
    pairs = [
        ("{ x.A + y.C | x <- R, y <- S }", "flatten({ { x.A + y.C | y <- S } | x <- R })"),
        (
            "{ x | x <- R, x.A == x.B }",
            "flatten({ if x.A == x.B then {x} else empty | x <- R })",
        ),
        ("count(R)", "sum({ 1 | x <- R })"),
    ]
    for sugared, expanded in pairs:
        e1 = infer_and_elaborate(ctx, desugar(parse(sugared)))[1]
        e2 = infer_and_elaborate(ctx, desugar(parse(expanded)))[1]
        assert evaluate(env, e1) == evaluate(env, e2), sugared


def test_or_matches_boolean_truth_table():
    for a in (False, True):
        for b in (False, True):
            src = f"{str(a).lower()} or {str(b).lower()}"
            e = infer_and_elaborate({}, desugar(parse(src)))[1]
            assert evaluate({}, e).value == (a or b)


def test_count_counts_multiplicity():
    ctx, env = fig_ctx(), fig_env()
    e = infer_and_elaborate(ctx, desugar(parse("count(R union R)")))[1]
    assert evaluate(env, e) == VInt(6)
