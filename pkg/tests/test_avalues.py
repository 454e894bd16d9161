from __future__ import annotations

import random

import pytest

from nrcprov.avalues import (
    ABag,
    ABool,
    AInt,
    ARecord,
    add_annotation,
    apply_subst,
    avalue_from_json,
    avalue_to_json,
    check_shape,
    colors_of,
    distinctly_color,
    distinctly_color_env,
    equal_except_at,
    erase,
    is_distinctly_colored,
    nodes_of,
    plain_annotate,
    render_avalue,
    subst_set,
)
from nrcprov.parser import parse_type
from nrcprov.values import VBag, VInt, VRecord, bag, record
from nrcprov.verification import random_aenv, random_color_subst

from .util import fig_aenv, fig_ctx


def a(*colors: str) -> frozenset[str]:
    return frozenset(colors)


def test_erase_examples():
    assert erase(AInt(1, a("a"))) == VInt(1)
    assert erase(ABag((ARecord((("A", AInt(1, a("a1"))),), a()),), a("c"))) == bag(
        [record(A=VInt(1))]
    )
    # The figure environment erases to the plain three-row table.
    plain = erase(fig_aenv()["R"])
    assert plain == bag(
        [record(A=VInt(1), B=VInt(1)), record(A=VInt(1), B=VInt(2)), record(A=VInt(2), B=VInt(3))]
    )


def test_colors_of_examples():
    assert colors_of(AInt(1, a("a"))) == a("a")
    assert colors_of(ABag((AInt(1, a("d")),), a("c"))) == a("c", "d")
    assert colors_of(ARecord((("A", AInt(1, a("a"))), ("B", AInt(2, a("b")))), a())) == a("a", "b")


def test_distinct_coloring_scheme():
    v = bag([record(A=VInt(1), B=VInt(2))])
    got = distinctly_color(v, "R")
    assert got == ABag(
        (
            ARecord(
                (("A", AInt(1, a("R[0].A"))), ("B", AInt(2, a("R[0].B")))),
                a("R[0]"),
            ),
        ),
        a("R"),
    )
    assert is_distinctly_colored(got)


def test_distinct_coloring_scalar_root():
    assert distinctly_color(VInt(7), "x") == AInt(7, a("x"))


def test_distinct_coloring_equal_elements_get_distinct_indices():
    v = bag([VInt(5), VInt(5)])
    got = distinctly_color(v, "R")
    assert [x.ann for x in got.elements] == [a("R[0]"), a("R[1]")]
    assert is_distinctly_colored(got)


def test_distinct_coloring_many_equal_elements_keep_positions():
    # Regression guard: index colors must sort numerically past one digit.
    v = bag([VInt(5)] * 12)
    got = distinctly_color(v, "R")
    assert [x.ann for x in got.elements] == [a(f"R[{i}]") for i in range(12)]


def test_apply_subst_paper_example():
    subst = {"a": a("b", "c")}
    v = ABag((AInt(1, a("a")), AInt(2, a("a", "d"))), a("c"))
    got = apply_subst(subst, v)
    assert got == ABag((AInt(1, a("b", "c")), AInt(2, a("b", "c", "d"))), a("c"))


def test_apply_subst_identity_and_drop():
    v = ABag((AInt(1, a("a")),), a("c"))
    assert apply_subst({}, v) == v
    assert apply_subst({"a": frozenset()}, AInt(1, a("a"))) == AInt(1, a())


def test_add_annotation():
    assert add_annotation(AInt(1, a("a")), a("b")) == AInt(1, a("a", "b"))
    v = ABag((AInt(1, a("d")),), a("c"))
    assert add_annotation(v, a()) == v
    got = add_annotation(v, a("e"))
    assert erase(got) == erase(v)
    assert colors_of(got) == a("c", "d", "e")


def test_equal_except_at_paper_example():
    # (1,3,5) with per-field colors against (2,3,5): equal except at c1.
    def row(first: int) -> ARecord:
        return ARecord(
            (("x", AInt(first, a("c1"))), ("y", AInt(3, a("c2"))), ("z", AInt(5, a("c3")))),
            a("b1"),
        )

    v1 = ABag((row(1),), a("top"))
    v2 = ABag((row(2),), a("top"))
    assert equal_except_at(v1, v2, "c1")
    assert equal_except_at(v1, v2, "b1")
    assert equal_except_at(v1, v2, "top")
    assert not equal_except_at(v1, v2, "c2")


def test_equal_except_at_no_rule_applies():
    assert not equal_except_at(AInt(1, a()), AInt(2, a()), "c")


def test_equal_except_at_ignores_raw_shape_under_shared_color():
    v1 = AInt(1, a("c"))
    v2 = ABag((ABool(True, a()),), a("c"))
    assert equal_except_at(v1, v2, "c")


def test_equal_except_at_bags_need_bijection():
    v1 = ABag((AInt(1, a("p")), AInt(2, a("q"))), a())
    v2 = ABag((AInt(2, a("q")), AInt(1, a("p"))), a())
    assert equal_except_at(v1, v2, "zzz")
    v3 = ABag((AInt(1, a("p")), AInt(3, a("q"))), a())
    assert not equal_except_at(v1, v3, "zzz")
    assert equal_except_at(v1, v3, "q")


def test_equal_except_at_cardinality_mismatch():
    v1 = ABag((AInt(1, a()),), a())
    v2 = ABag((), a())
    assert not equal_except_at(v1, v2, "c")
    assert equal_except_at(ABag((AInt(1, a()),), a("c")), ABag((), a("c")), "c")


def test_check_shape():
    assert check_shape(AInt(1, a("a")), parse_type("int"))
    assert not check_shape(ABag((AInt(1, a("a")),), a("b")), parse_type("{bool}"))
    assert check_shape(ARecord((("A", AInt(1, a("a"))),), a()), parse_type("(A: int)"))


# --- algebraic laws --------------------------------------------------------


def test_subst_commutes_with_erase_and_colors():
    """|alpha(v)| = |v| and ||alpha(v)|| = alpha[||v||] on random values."""
    ctx = fig_ctx()
    for i in range(60):
        rng = random.Random(f"subst:{i}")
        aenv = random_aenv(ctx, rng)
        v = aenv["R"]
        subst = random_color_subst(sorted(colors_of(v)), rng)
        got = apply_subst(subst, v)
        assert erase(got) == erase(v)
        assert colors_of(got) == subst_set(subst, colors_of(v))


def test_every_avalue_factors_through_distinct_coloring():
    """v = alpha_v(dc(|v|)) with alpha_v read off the node annotations."""
    ctx = fig_ctx()
    for i in range(40):
        rng = random.Random(f"factor:{i}")
        v = random_aenv(ctx, rng)["R"]
        dc = distinctly_color(erase(v), "R")
        subst = {}
        for node, dnode in zip(nodes_of(v), nodes_of(dc)):
            (path_color,) = dnode.ann
            subst[path_color] = node.ann
        assert apply_subst(subst, dc) == v


def test_equal_except_reflexive_symmetric():
    v = fig_aenv()["R"]
    assert equal_except_at(v, v, "anything")
    w = add_annotation(v, a("zz"))
    assert equal_except_at(v, w, "zz") == equal_except_at(w, v, "zz")


def test_equal_except_unmentioned_color_means_equality():
    v1 = AInt(1, a("a"))
    v2 = AInt(1, a("a"))
    assert equal_except_at(v1, v2, "nope") and v1 == v2
    v3 = AInt(2, a("a"))
    assert not equal_except_at(v1, v3, "nope")


def test_equal_except_preserved_by_add_annotation():
    v1 = AInt(1, a("c"))
    v2 = AInt(2, a("c"))
    assert equal_except_at(v1, v2, "c")
    assert equal_except_at(add_annotation(v1, a("x")), add_annotation(v2, a("x")), "c")


def test_json_roundtrip():
    env = fig_aenv()
    for v in env.values():
        assert avalue_from_json(avalue_to_json(v)) == v
    v = distinctly_color(bag([record(A=VInt(1), B=bag([VInt(2)]))]), "T")
    assert avalue_from_json(avalue_to_json(v)) == v


def test_plain_annotate_has_no_colors():
    v = plain_annotate(bag([VInt(1), VInt(2)]))
    assert colors_of(v) == frozenset()


def test_render_avalue():
    assert render_avalue(AInt(3, a("a2", "a1"))) == "3^{a1,a2}"
    assert render_avalue(ABag((), a())) == "{}"
