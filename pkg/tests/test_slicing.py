from __future__ import annotations

import random

import pytest

from nrcprov.analysis import analyze, atype_with_paths
from nrcprov.avalues import (
    apply_subst_env,
    colors_of,
    distinctly_color_env,
    erase,
)
from nrcprov.errors import PathError
from nrcprov.parser import parse_type
from nrcprov.slicing import (
    OUTPUT_ROOT,
    backward_slice,
    color_path_map,
    forward_slice,
    parse_type_path,
    parse_value_path,
    resolve_in_env,
    resolve_value,
    static_slice,
)
from nrcprov.tracking import track
from nrcprov.values import VInt, bag
from nrcprov.verification import perturb_env

from .util import fig_actx, fig_aenv, fig_ctx, fig_env, load_query, prepare, query_source


def paths(strings):
    return frozenset(parse_value_path(s) for s in strings)


def aliased_fig_aenv():
    """The figure environment via auto-coloring plus the alias fixture."""
    from .util import read_json

    table = read_json("fig-alias.json")
    aenv = distinctly_color_env(fig_env())
    colors = set()
    for v in aenv.values():
        colors |= colors_of(v)
    subst = {c: frozenset({table[c]}) if c in table else frozenset() for c in colors}
    return apply_subst_env(subst, aenv)


def test_path_parse_render_roundtrip():
    for text in ("R", "R[0]", "R[0].A", "R[2].B", "result[10].C"):
        assert str(parse_value_path(text)) == text
    for text in ("R.elem.A", "result", "S.elem"):
        assert str(parse_type_path(text)) == text


def test_malformed_paths():
    with pytest.raises(PathError):
        parse_value_path("[0]")
    with pytest.raises(PathError):
        parse_value_path("R[0")
    with pytest.raises(PathError):
        parse_type_path("R[0].A")


def test_resolution_errors():
    aenv = fig_aenv()
    with pytest.raises(PathError):
        resolve_in_env(aenv, parse_value_path("Q[0]"))
    with pytest.raises(PathError):
        resolve_in_env(aenv, parse_value_path("R[9]"))
    with pytest.raises(PathError):
        resolve_in_env(aenv, parse_value_path("R[0].Z"))
    with pytest.raises(PathError):
        resolve_in_env(aenv, parse_value_path("R.A"))


def test_backward_slice_selection_bag():
    aenv = aliased_fig_aenv()
    out = track(aenv, load_query("sigmaAB"))
    got = backward_slice(aenv, out, parse_value_path("result"))
    assert got == paths(
        ["R[0].A", "R[0].B", "R[1].A", "R[1].B", "R[2].A", "R[2].B"]
    )


def test_backward_slice_single_cell():
    aenv = aliased_fig_aenv()
    out = track(aenv, load_query("sigmaAB"))
    got = backward_slice(aenv, out, parse_value_path("result[0].A"))
    assert got == paths(["R[0].A"])


def test_backward_slice_empty_annotation():
    aenv = aliased_fig_aenv()
    out = track(aenv, load_query("count"))
    assert backward_slice(aenv, out, parse_value_path("result")) == frozenset()


def test_backward_slice_deep():
    aenv = aliased_fig_aenv()
    out = track(aenv, load_query("piA"))
    shallow = backward_slice(aenv, out, parse_value_path("result"))
    deep = backward_slice(aenv, out, parse_value_path("result"), deep=True)
    assert shallow == frozenset()
    assert deep == paths(["R[0].A", "R[1].A", "R[2].A"])


def test_backward_slice_requires_result_root():
    aenv = aliased_fig_aenv()
    out = track(aenv, load_query("count"))
    with pytest.raises(PathError):
        backward_slice(aenv, out, parse_value_path("R[0]"))


def test_forward_slice_projection():
    aenv = aliased_fig_aenv()
    out = track(aenv, load_query("piA"))
    assert forward_slice(out, "a1") == paths(["result[0].A"])
    assert forward_slice(out, "zzz") == frozenset()


def test_forward_slice_x_minus_x():
    env = {"x": bag([VInt(1)])}
    aenv = distinctly_color_env(env)
    e = prepare(query_source("xminusx"), {"x": parse_type("{int}")})
    out = track(aenv, e)
    assert forward_slice(out, "x[0]") == paths(["result"])
    assert forward_slice(out, "x") == paths(["result"])


def test_static_slice_diff_row():
    actx = fig_actx()
    at = analyze(actx, load_query("diff-rename"))
    got = static_slice(actx, at, parse_type_path("result"))
    want = frozenset(
        parse_type_path(p) for p in ("R.elem.A", "R.elem.B", "S.elem.D", "S.elem.E")
    )
    assert got == want


def test_static_slice_count_empty():
    actx = fig_actx()
    at = analyze(actx, load_query("count"))
    assert static_slice(actx, at, parse_type_path("result")) == frozenset()


def test_static_slice_sum():
    actx = fig_actx()
    at = analyze(actx, load_query("sum-piA"))
    got = static_slice(actx, at, parse_type_path("result"))
    assert got == frozenset({parse_type_path("R.elem.A")})


def test_forward_slice_is_the_c_labeled_node_set():
    """Forward slices list exactly the nodes rule 5 of equal-except-at sees."""
    aenv = distinctly_color_env(fig_env())
    out = track(aenv, load_query("grouping"))
    for color in ("R[0].A", "R[0].B", "R"):
        got = forward_slice(out, color)
        from nrcprov.slicing import value_paths

        want = frozenset(p for p, n in value_paths(out, OUTPUT_ROOT) if color in n.ann)
        assert got == want


def test_complement_of_deep_backward_slice_is_irrelevant():
    """Perturbing inputs outside the deep slice never changes the selected node."""
    ctx = fig_ctx()
    env = fig_env()
    aenv = distinctly_color_env(env)
    for name in ("sigmaAB", "sum-piA", "grouping"):
        e = load_query(name)
        out = track(aenv, e)
        at = parse_value_path("result")
        slice_paths = backward_slice(aenv, out, at, deep=True)
        from nrcprov.slicing import env_paths

        outside = [
            (p, n) for p, n in env_paths(aenv) if p not in slice_paths
        ]
        for i, (path, node) in enumerate(outside):
            (color,) = node.ann
            for trial in range(4):
                rng = random.Random(f"safety:{name}:{i}:{trial}")
                perturbed = perturb_env(aenv, ctx, path, color, rng, (-1, 0, 1, 2), 3)
                out2 = track(perturbed, e)
                assert erase(resolve_value(out2, at)) == erase(resolve_value(out, at)), (
                    name,
                    str(path),
                )


def test_color_path_map():
    aenv = distinctly_color_env(fig_env())
    table = color_path_map(aenv)
    assert str(table["R[0].A"]) == "R[0].A"
    # Duplicated colors resolve to None.
    doubled = {"R": aenv["R"], "Q": aenv["R"]}
    assert color_path_map(doubled)["R[0].A"] is None
