"""Acceptance suite: one test per criterion, exact tolerances, timed budgets.

Each criterion prints a single PASS/FAIL line (run pytest with ``-s`` to see
the lines for passing criteria).
"""

from __future__ import annotations

import contextlib
import random
import re
import sys
import time

from nrcprov.analysis import analyze, atype_with_paths, member, render_atype
from nrcprov.avalues import (
    apply_subst_env,
    colors_of,
    distinctly_color_env,
    erase,
    render_avalue,
)
from nrcprov.interp import evaluate
from nrcprov.parser import parse_type
from nrcprov.syntax import render
from nrcprov.tracking import track
from nrcprov.values import VInt, bag
from nrcprov.verification import (
    DroppedDiffExtractionOps,
    DroppedEqExtractionOps,
    check_color_invariance,
    check_dependency_correctness,
    check_erasure,
    check_static_soundness,
    minimality_report,
    random_aenv,
)

from .util import (
    FIGURE_QUERIES,
    corpus,
    fig_actx,
    fig_aenv,
    fig_ctx,
    fig_env,
    load_query,
    prepare,
    query_source,
    read_json,
)


@contextlib.contextmanager
def criterion(name: str, budget_seconds: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL: {name}", file=sys.stderr)
        raise
    elapsed = time.perf_counter() - start
    assert elapsed < budget_seconds, f"{name}: {elapsed:.2f}s exceeded {budget_seconds}s budget"
    print(f"ACCEPTANCE PASS: {name} ({elapsed:.2f}s)")


def aliased_fig_aenv():
    """Auto-colored figure data renamed to the figure's colors via the alias file."""
    table = read_json("fig-alias.json")
    aenv = distinctly_color_env(fig_env())
    colors = set()
    for v in aenv.values():
        colors |= colors_of(v)
    subst = {c: frozenset({table[c]}) if c in table else frozenset() for c in colors}
    return apply_subst_env(subst, aenv)


TRACKING_GOLDENS = {
    "piA": "{(A: 1^{a1}), (A: 1^{a2}), (A: 2^{a3})}",
    "sigmaAB": "{(A: 1^{a1}, B: 1^{b1})}^{a1,a2,a3,b1,b2,b3}",
    "product": (
        "{(A: 1^{a1}, B: 1^{b1}, C: 1^{c2}, D: 1^{d2}, E: 4^{e2}), "
        "(A: 1^{a1}, B: 1^{b1}, C: 1^{c1}, D: 2^{d1}, E: 3^{e1}), "
        "(A: 1^{a2}, B: 2^{b2}, C: 1^{c2}, D: 1^{d2}, E: 4^{e2}), "
        "(A: 1^{a2}, B: 2^{b2}, C: 1^{c1}, D: 2^{d1}, E: 3^{e1}), "
        "(A: 2^{a3}, B: 3^{b3}, C: 1^{c2}, D: 1^{d2}, E: 4^{e2}), "
        "(A: 2^{a3}, B: 3^{b3}, C: 1^{c1}, D: 2^{d1}, E: 3^{e1})}"
    ),
    "piBE-sigmaAD": (
        "{(B: 1^{b1}, E: 4^{e2}), (B: 2^{b2}, E: 4^{e2}), "
        "(B: 3^{b3}, E: 3^{e1})}^{a1,a2,a3,d1,d2}"
    ),
    "union-rename": (
        "{(A: 1^{a1}, B: 1^{b1}), (A: 1^{c2}, B: 1^{d2}), (A: 1^{a2}, B: 2^{b2}), "
        "(A: 1^{c1}, B: 2^{d1}), (A: 2^{a3}, B: 3^{b3})}"
    ),
    "diff-rename": (
        "{(A: 1^{a1}, B: 1^{b1}), (A: 1^{a2}, B: 2^{b2})}"
        "^{a1,a2,a3,b1,b2,b3,d1,d2,e1,e2}"
    ),
    "sum-piA": "4^{a1,a2,a3}",
    "count": "3",
    "count-sigma": "1^{a1,a2,a3,b1,b2,b3}",
}


def test_golden_dynamic_tracking():
    """All nine tracking-figure rows, exact, via the alias-file environment."""
    with criterion("golden dynamic tracking (9 rows, exact)", 1.0):
        aenv = aliased_fig_aenv()
        assert aenv == fig_aenv(), "alias mechanism must reproduce the figure environment"
        for name in FIGURE_QUERIES:
            got = track(aenv, load_query(name))
            assert render_avalue(got) == TRACKING_GOLDENS[name], name


GROUPING_X_GOLDEN = (
    "{(A: 1^{a1}, B: {1^{b1}, 2^{b2}}^{a1,a2,a3}), "
    "(A: 1^{a2}, B: {1^{b1}, 2^{b2}}^{a1,a2,a3}), "
    "(A: 2^{a3}, B: {3^{b3}}^{a1,a2,a3})}"
)
GROUPING_Y_GOLDEN = (
    "{(A: 1^{a1}, B: 3^{a1,a2,a3,b1,b2}), "
    "(A: 1^{a2}, B: 3^{a1,a2,a3,b1,b2}), "
    "(A: 2^{a3}, B: 3^{a1,a2,a3,b3})}"
)


def test_golden_grouping():
    """Grouping/aggregation: intermediate X and final Y, exact."""
    with criterion("golden grouping (X and Y, exact)", 1.0):
        aenv = fig_aenv()
        x = track(aenv, load_query("grouping-x"))
        assert render_avalue(x) == GROUPING_X_GOLDEN
        y = track(aenv, load_query("grouping"))
        assert render_avalue(y) == GROUPING_Y_GOLDEN


ANALYSIS_GOLDENS = {
    "piA": "{(A: int^{a})}",
    "sigmaAB": "{(A: int^{a}, B: int^{b})}^{a,b}",
    "product": "{(A: int^{a}, B: int^{b}, C: int^{c}, D: int^{d}, E: int^{e})}",
    "piBE-sigmaAD": "{(B: int^{b}, E: int^{e})}^{a,d}",
    "union-rename": "{(A: int^{a,c}, B: int^{b,d})}",
    "diff-rename": "{(A: int^{a}, B: int^{b})}^{a,b,d,e}",
    "sum-piA": "int^{a}",
    "count": "int",
    "count-sigma": "int^{a,b}",
}


def test_golden_static_analysis():
    """All nine analysis-figure rows plus the worked grouping derivation."""
    with criterion("golden static analysis (9 rows + grouping Q(R), exact)", 1.0):
        actx = fig_actx()
        for name, want in ANALYSIS_GOLDENS.items():
            got = analyze(actx, load_query(name))
            assert render_atype(got) == want, name
        q = analyze(actx, load_query("grouping"))
        assert render_atype(q) == "{(A: int^{a}, B: int^{a,b})}"


def test_erasure_commutation():
    """erase(track) == eval(erase) over >=500 (query, environment) trials."""
    with criterion("erasure commutation (>=500 trials, 100%)", 30.0):
        entries = corpus(random_count=20)
        trials = 0
        for name, e, ctx, env in entries:
            for i in range(17):
                rng = random.Random(f"accept-erasure:{name}:{i}")
                aenv = random_aenv(ctx, rng)
                report = check_erasure(e, aenv)
                assert report.passed, (name, i, report.failures)
                trials += 1
        assert trials >= 500, trials


def test_dependency_correctness():
    """>=1000 perturbation trials per corpus query; mutation sensitivity."""
    with criterion("dependency-correctness (>=1000 trials/query + mutations)", 60.0):
        for name, e, ctx, env in corpus(random_count=20):
            report = check_dependency_correctness(
                e, env, trials=1000, seed=101, ctx=ctx
            )
            assert report.passed, (name, report.failures[:1])
        # Harness sensitivity: both broken trackers must be caught.
        broken_diff = check_dependency_correctness(
            load_query("diff-rename"),
            fig_env(),
            trials=400,
            seed=13,
            ctx=fig_ctx(),
            ops=DroppedDiffExtractionOps(),
        )
        assert len(broken_diff.failures) >= 1, "dropped diff extraction went undetected"
        broken_eq = check_dependency_correctness(
            load_query("sigmaAB"),
            fig_env(),
            trials=400,
            seed=13,
            ctx=fig_ctx(),
            ops=DroppedEqExtractionOps(),
        )
        assert len(broken_eq.failures) >= 1, "dropped eq extraction went undetected"


def test_color_invariance():
    """>=500 random-substitution trials per corpus query, zero failures."""
    with criterion("color-invariance (>=500 trials/query)", 30.0):
        for name, e, ctx, env in corpus(random_count=20):
            aenv = distinctly_color_env(env)
            report = check_color_invariance(e, aenv, trials=500, seed=202)
            assert report.passed, (name, report.failures[:1])


_INDEX = re.compile(r"\[\d+\]")


def test_static_soundness():
    """member(tracked, analyzed) for every corpus query after color collapse."""
    with criterion("static soundness (corpus, collapsed colors)", 10.0):
        # Figure queries against the hand-annotated context fixture.
        actx = fig_actx()
        aenv = fig_aenv()
        colors = set()
        for v in aenv.values():
            colors |= colors_of(v)
        collapsed = apply_subst_env({c: frozenset({c[0]}) for c in colors}, aenv)
        for name in FIGURE_QUERIES + ("grouping-x", "grouping"):
            report = check_static_soundness(load_query(name), actx, collapsed)
            assert report.passed, name
        # Whole corpus against the path-prefix context.
        for name, e, ctx, env in corpus(random_count=20):
            auto_actx = {n: atype_with_paths(t, n) for n, t in ctx.items()}
            auto = distinctly_color_env(env)
            all_colors = set()
            for v in auto.values():
                all_colors |= colors_of(v)
            subst = {c: frozenset({_INDEX.sub(".elem", c)}) for c in all_colors}
            report = check_static_soundness(e, auto_actx, apply_subst_env(subst, auto))
            assert report.passed, name


def test_known_imprecision_witness():
    """x - x tracks to an annotated empty bag whose colors are both spurious."""
    with criterion("known imprecision witness (x - x, exact)", 10.0):
        env = {"x": bag([VInt(1)])}
        e = prepare(query_source("xminusx"), {"x": parse_type("{int}")})
        aenv = distinctly_color_env(env)
        out = track(aenv, e)
        assert render_avalue(out) == "{}^{x,x[0]}"
        report = minimality_report(e, env, scalar_domain=(0, 1), size_bound=2)
        got = {(str(p), c) for p, c in report.spurious}
        assert got == {("result", "x"), ("result", "x[0]")}
