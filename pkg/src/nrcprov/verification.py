"""Executable checks of the engine's correctness properties.

Four checks (erasure commutation, color-invariance, dependency-correctness,
static soundness) plus a brute-force minimality oracle over tiny domains.
All randomized checks are deterministic given (seed, trials): each trial
draws from its own generator seeded with ``f"{seed}:{index}"``.

Deliberately broken operation suites are provided for mutation testing the
harness's sensitivity.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

from .analysis import ACtx, analyze, member, member_env
from .avalues import (
    ABag,
    ABool,
    AInt,
    ARecord,
    AValue,
    ColorSubst,
    apply_subst,
    apply_subst_env,
    colors_of,
    distinctly_color_env,
    equal_except_at,
    erase,
    plain_annotate,
    render_avalue,
)
from .errors import BudgetExceededError, PathError, PreconditionError
from .interp import evaluate
from .slicing import (
    OUTPUT_ROOT,
    Field,
    Index,
    ValuePath,
    env_paths,
    resolve_value,
    value_paths,
)
from .syntax import (
    Add,
    And,
    BagType,
    BoolLit,
    BoolType,
    Comp,
    Diff,
    Empty,
    Eq,
    Expr,
    Flatten,
    If,
    IntLit,
    IntType,
    Let,
    Not,
    Proj,
    RecordExpr,
    RecordType,
    Singleton,
    Sum,
    Type,
    Union,
    Var,
)
from .tracking import AEnv, LiftedOps, track
from .typecheck import TypeCtx
from .values import Value, VBag, VBool, VInt, VRecord, render_value, type_of_value

DEFAULT_SCALAR_DOMAIN: tuple[int, ...] = (-1, 0, 1, 2)


@dataclass
class CheckReport:
    check: str
    trials: int
    failures: list[dict[str, Any]] = field(default_factory=list)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "failures": self.failures,
        }


# ---------------------------------------------------------------------------
# Broken operation suites for mutation testing


class DroppedDiffExtractionOps(LiftedOps):
    """Difference forgets the colors inside its operands (keeps only tops)."""

    @staticmethod
    def diff(v1: AValue, v2: AValue) -> AValue:
        assert isinstance(v1, ABag) and isinstance(v2, ABag)
        right = {erase(x) for x in v2.elements}
        survivors = tuple(x for x in v1.elements if erase(x) not in right)
        return ABag(survivors, v1.ann | v2.ann)


class DroppedEqExtractionOps(LiftedOps):
    """Equality forgets the colors of the compared values entirely."""

    @staticmethod
    def eq(v1: AValue, v2: AValue) -> AValue:
        return ABool(erase(v1) == erase(v2), frozenset())


class UnerasedDiffMembershipOps(LiftedOps):
    """Difference compares annotated values instead of erased ones."""

    @staticmethod
    def diff(v1: AValue, v2: AValue) -> AValue:
        assert isinstance(v1, ABag) and isinstance(v2, ABag)
        right = set(v2.elements)
        survivors = tuple(x for x in v1.elements if x not in right)
        return ABag(survivors, colors_of(v1) | colors_of(v2))


_DEFAULT_OPS = LiftedOps()


# ---------------------------------------------------------------------------
# Erasure commutation


def check_erasure(e: Expr, aenv: AEnv, ops: LiftedOps = _DEFAULT_OPS) -> CheckReport:
    """Erasing the tracked output must equal plain evaluation of the erasure."""
    report = CheckReport(check="erasure", trials=1)
    got = erase(track(aenv, e, ops))
    want = evaluate({x: erase(v) for x, v in aenv.items()}, e)
    if got != want:
        report.failures.append(
            {"got": render_value(got), "want": render_value(want)}
        )
    return report


# ---------------------------------------------------------------------------
# Color-invariance


def random_color_subst(colors: Sequence[str], rng: random.Random) -> ColorSubst:
    """Random substitution over the given colors plus a few fresh ones."""
    pool = list(colors) + [f"_fresh{i}" for i in range(3)]
    subst: ColorSubst = {}
    for c in colors:
        roll = rng.random()
        if roll < 0.2:
            subst[c] = frozenset()
        elif roll < 0.5:
            continue  # identity
        else:
            k = rng.randint(1, 2)
            subst[c] = frozenset(rng.choice(pool) for _ in range(k))
    return subst


def check_color_invariance(
    e: Expr, aenv: AEnv, trials: int, seed: int, ops: LiftedOps = _DEFAULT_OPS
) -> CheckReport:
    """Substituting colors commutes with tracking."""
    report = CheckReport(check="color-invariance", trials=trials, seed=seed)
    base = track(aenv, e, ops)
    colors = sorted(frozenset().union(*(colors_of(v) for v in aenv.values()), frozenset()))
    for i in range(trials):
        rng = random.Random(f"{seed}:{i}")
        subst = random_color_subst(colors, rng)
        lhs = apply_subst(subst, base)
        rhs = track(apply_subst_env(subst, aenv), e, ops)
        if lhs != rhs:
            report.failures.append(
                {
                    "trial": i,
                    "subst": {c: sorted(s) for c, s in subst.items()},
                    "substituted_output": render_avalue(lhs),
                    "tracked_output": render_avalue(rhs),
                }
            )
    return report


# ---------------------------------------------------------------------------
# Dependency-correctness


def _type_at(ctx: TypeCtx, path: ValuePath) -> Type:
    t = ctx[path.root]
    for step in path.steps:
        match (t, step):
            case (RecordType(), Field(name)):
                t = t.field(name)
            case (BagType(elem), Index()):
                t = elem
            case _:
                raise PathError(f"path {path} does not match the context type")
    return t


def random_value(
    t: Type, rng: random.Random, domain: Sequence[int], size_bound: int
) -> Value:
    match t:
        case IntType():
            return VInt(rng.choice(list(domain)))
        case BoolType():
            return VBool(rng.random() < 0.5)
        case RecordType(fields):
            return VRecord(
                tuple((n, random_value(x, rng, domain, size_bound)) for n, x in fields)
            )
        case BagType(elem):
            n = rng.randint(0, size_bound)
            return VBag(tuple(random_value(elem, rng, domain, size_bound) for _ in range(n)))
    raise AssertionError(f"unknown type {t!r}")


def _replace_at(v: AValue, steps: tuple, new: AValue) -> AValue:
    if not steps:
        return new
    step, rest = steps[0], steps[1:]
    match (v, step):
        case (ARecord(fields, ann), Field(name)):
            out = tuple(
                (n, _replace_at(x, rest, new) if n == name else x) for n, x in fields
            )
            return ARecord(out, ann)
        case (ABag(elements, ann), Index(i)):
            out = tuple(
                _replace_at(x, rest, new) if j == i else x for j, x in enumerate(elements)
            )
            return ABag(out, ann)
        case _:
            raise PathError("replacement path does not match the value's shape")


def perturb_env(
    aenv: AEnv,
    ctx: TypeCtx,
    path: ValuePath,
    color: str,
    rng: random.Random,
    scalar_domain: Sequence[int],
    size_bound: int,
) -> AEnv:
    """Replace the node at ``path`` with a random same-type value labeled ``color``.

    The replacement carries ``{color}`` on top and empty annotations inside,
    so the perturbed environment is equal-except-at ``color`` by construction.
    """
    t = _type_at(ctx, path)
    original = resolve_value(aenv[path.root], path)
    domain = list(scalar_domain)
    if isinstance(original, AInt):
        domain.append(original.value)
    plain = random_value(t, rng, domain, size_bound)
    replacement = plain_annotate(plain)
    replacement = _with_top(replacement, frozenset({color}))
    return {**aenv, path.root: _replace_at(aenv[path.root], path.steps, replacement)}


def _with_top(v: AValue, ann: frozenset[str]) -> AValue:
    match v:
        case AInt(i, _):
            return AInt(i, ann)
        case ABool(b, _):
            return ABool(b, ann)
        case ARecord(fields, _):
            return ARecord(fields, ann)
        case ABag(elements, _):
            return ABag(elements, ann)
    raise AssertionError(f"unknown annotated value {v!r}")


def check_dependency_correctness(
    e: Expr,
    env: dict[str, Value],
    trials: int,
    seed: int,
    size_bound: int = 3,
    scalar_domain: Sequence[int] = DEFAULT_SCALAR_DOMAIN,
    ctx: TypeCtx | None = None,
    ops: LiftedOps = _DEFAULT_OPS,
) -> CheckReport:
    """Perturbing the input at one color may change the output only at that color."""
    report = CheckReport(check="dependency-correctness", trials=trials, seed=seed)
    if ctx is None:
        ctx = {x: type_of_value(v) for x, v in env.items()}
    aenv = distinctly_color_env(env)
    tracked = track(aenv, e, ops)
    sites = [(path, node) for path, node in env_paths(aenv)]
    for i in range(trials):
        rng = random.Random(f"{seed}:{i}")
        path, node = sites[rng.randrange(len(sites))]
        (color,) = node.ann
        perturbed = perturb_env(aenv, ctx, path, color, rng, scalar_domain, size_bound)
        tracked2 = track(perturbed, e, ops)
        if not equal_except_at(tracked, tracked2, color):
            report.failures.append(
                {
                    "trial": i,
                    "color": color,
                    "perturbed_input": render_avalue(perturbed[path.root]),
                    "output": render_avalue(tracked),
                    "perturbed_output": render_avalue(tracked2),
                }
            )
    return report


# ---------------------------------------------------------------------------
# Static soundness


def check_static_soundness(
    e: Expr, actx: ACtx, aenv: AEnv, ops: LiftedOps = _DEFAULT_OPS
) -> CheckReport:
    """The tracked output must inhabit the statically analyzed type."""
    if not member_env(aenv, actx):
        raise PreconditionError(
            "annotated environment does not inhabit the annotated context"
        )
    report = CheckReport(check="static-soundness", trials=1)
    at = analyze(actx, e)
    v = track(aenv, e, ops)
    if not member(v, at):
        from .analysis import render_atype

        report.failures.append(
            {"output": render_avalue(v), "analyzed_type": render_atype(at)}
        )
    return report


# ---------------------------------------------------------------------------
# Minimality oracle (exhaustive, tiny domains only)


def enumerate_values(
    t: Type, scalar_domain: Sequence[int], size_bound: int
) -> Iterator[Value]:
    match t:
        case IntType():
            for i in scalar_domain:
                yield VInt(i)
        case BoolType():
            yield VBool(False)
            yield VBool(True)
        case RecordType(fields):
            pools = [list(enumerate_values(x, scalar_domain, size_bound)) for _, x in fields]
            names = [n for n, _ in fields]
            for combo in itertools.product(*pools):
                yield VRecord(tuple(zip(names, combo)))
        case BagType(elem):
            pool = list(enumerate_values(elem, scalar_domain, size_bound))
            for k in range(size_bound + 1):
                for combo in itertools.combinations_with_replacement(pool, k):
                    yield VBag(combo)
        case _:
            raise AssertionError(f"unknown type {t!r}")


@dataclass
class MinimalityReport:
    scalar_domain: tuple[int, ...]
    size_bound: int
    spurious: list[tuple[ValuePath, str]] = field(default_factory=list)
    candidates: int = 0

    @property
    def passed(self) -> bool:
        # A "pass" here only means the oracle ran; spurious pairs are findings.
        return True

    def to_json(self) -> dict[str, Any]:
        return {
            "check": "minimality",
            "scalar_domain": list(self.scalar_domain),
            "size_bound": self.size_bound,
            "candidates": self.candidates,
            "spurious": [{"path": str(p), "color": c} for p, c in self.spurious],
        }


def minimality_report(
    e: Expr,
    env: dict[str, Value],
    scalar_domain: Sequence[int] = (0, 1),
    size_bound: int = 2,
    budget: int = 200_000,
    ctx: TypeCtx | None = None,
) -> MinimalityReport:
    """Exhaustively search for output annotations that can never matter.

    A color ``c`` on an output node is spurious if replacing the input
    subtree addressed by ``c`` with every candidate value over the finite
    domain never changes the erased value at that output node.
    """
    if ctx is None:
        ctx = {x: type_of_value(v) for x, v in env.items()}
    aenv = distinctly_color_env(env)
    tracked = track(aenv, e)
    color_site = {next(iter(node.ann)): path for path, node in env_paths(aenv)}
    report = MinimalityReport(tuple(scalar_domain), size_bound)
    for out_path, out_node in value_paths(tracked, OUTPUT_ROOT):
        for color in sorted(out_node.ann):
            site = color_site.get(color)
            if site is None:
                continue  # color not addressable in the input
            t = _type_at(ctx, site)
            differs = False
            for candidate in enumerate_values(t, scalar_domain, size_bound):
                report.candidates += 1
                if report.candidates > budget:
                    raise BudgetExceededError(
                        f"minimality enumeration exceeded {budget} candidates"
                    )
                replacement = _with_top(plain_annotate(candidate), frozenset({color}))
                perturbed = {
                    **aenv,
                    site.root: _replace_at(aenv[site.root], site.steps, replacement),
                }
                out2 = track(perturbed, e)
                try:
                    node2 = resolve_value(out2, out_path)
                except PathError:
                    differs = True
                    break
                if erase(node2) != erase(out_node):
                    differs = True
                    break
            if not differs:
                report.spurious.append((out_path, color))
    return report


# ---------------------------------------------------------------------------
# Random generators: environments, annotations, queries


def random_env(
    ctx: TypeCtx, rng: random.Random, scalar_domain: Sequence[int] = DEFAULT_SCALAR_DOMAIN,
    size_bound: int = 3,
) -> dict[str, Value]:
    return {x: random_value(t, rng, scalar_domain, size_bound) for x, t in ctx.items()}


def random_annotate(v: Value, rng: random.Random, pool: Sequence[str]) -> AValue:
    """Lift a plain value, giving each node a random (possibly empty) annotation."""

    def ann() -> frozenset[str]:
        k = rng.choice((0, 0, 1, 1, 2))
        return frozenset(rng.choice(pool) for _ in range(k))

    match v:
        case VInt(i):
            return AInt(i, ann())
        case VBool(b):
            return ABool(b, ann())
        case VRecord(fields):
            return ARecord(tuple((n, random_annotate(x, rng, pool)) for n, x in fields), ann())
        case VBag(elements):
            return ABag(tuple(random_annotate(x, rng, pool) for x in elements), ann())
    raise AssertionError(f"unknown value {v!r}")


def random_aenv(
    ctx: TypeCtx,
    rng: random.Random,
    pool: Sequence[str] = ("p", "q", "r", "s", "t"),
    scalar_domain: Sequence[int] = DEFAULT_SCALAR_DOMAIN,
    size_bound: int = 3,
) -> AEnv:
    env = random_env(ctx, rng, scalar_domain, size_bound)
    return {x: random_annotate(v, rng, pool) for x, v in env.items()}


def random_query(ctx: TypeCtx, rng: random.Random, depth: int = 4) -> Expr:
    """A random well-typed core query over the given context."""
    target = rng.choice(_target_types(ctx))
    return _gen(ctx, target, rng, depth)


def _target_types(ctx: TypeCtx) -> list[Type]:
    out: list[Type] = [IntType(), BoolType()]
    out.extend(ctx.values())
    for t in ctx.values():
        if isinstance(t, BagType):
            out.append(t.elem)
            out.append(BagType(IntType()))
    return out


def _vars_of_type(ctx: TypeCtx, t: Type) -> list[Expr]:
    return [Var(x) for x, xt in ctx.items() if xt == t]


def _gen(ctx: TypeCtx, t: Type, rng: random.Random, depth: int) -> Expr:
    leaves = _vars_of_type(ctx, t)
    if depth <= 0:
        return _gen_leaf(ctx, t, rng)
    roll = rng.random()
    if leaves and roll < 0.25:
        return rng.choice(leaves)
    match t:
        case IntType():
            choice = rng.choice(("lit", "add", "sum", "if", "proj"))
            if choice == "lit":
                return IntLit(rng.randint(-2, 3))
            if choice == "add":
                return Add(_gen(ctx, t, rng, depth - 1), _gen(ctx, t, rng, depth - 1))
            if choice == "sum":
                return Sum(_gen(ctx, BagType(IntType()), rng, depth - 1))
            if choice == "proj":
                e = _gen_proj(ctx, t, rng, depth)
                if e is not None:
                    return e
            return If(
                _gen(ctx, BoolType(), rng, depth - 1),
                _gen(ctx, t, rng, depth - 1),
                _gen(ctx, t, rng, depth - 1),
            )
        case BoolType():
            choice = rng.choice(("lit", "not", "and", "eq", "eq"))
            if choice == "lit":
                return BoolLit(rng.random() < 0.5)
            if choice == "not":
                return Not(_gen(ctx, t, rng, depth - 1))
            if choice == "and":
                return And(_gen(ctx, t, rng, depth - 1), _gen(ctx, t, rng, depth - 1))
            operand = rng.choice([IntType(), IntType(), *ctx.values()])
            return Eq(_gen(ctx, operand, rng, depth - 1), _gen(ctx, operand, rng, depth - 1))
        case RecordType(fields):
            e = _gen_proj(ctx, t, rng, depth)
            if e is not None and rng.random() < 0.5:
                return e
            return RecordExpr(tuple((n, _gen(ctx, x, rng, depth - 1)) for n, x in fields))
        case BagType(elem):
            choice = rng.choice(
                ("empty", "single", "union", "diff", "comp", "comp", "flatten", "let", "if")
            )
            if choice == "empty":
                return Empty(elem)
            if choice == "single":
                return Singleton(_gen(ctx, elem, rng, depth - 1))
            if choice == "union":
                return Union(_gen(ctx, t, rng, depth - 1), _gen(ctx, t, rng, depth - 1))
            if choice == "diff":
                return Diff(_gen(ctx, t, rng, depth - 1), _gen(ctx, t, rng, depth - 1))
            if choice == "comp":
                source_t = rng.choice([x for x in ctx.values() if isinstance(x, BagType)] or [t])
                var = f"v{depth}"
                body = _gen({**ctx, var: source_t.elem}, elem, rng, depth - 1)
                return Comp(body, var, _gen(ctx, source_t, rng, depth - 1))
            if choice == "flatten":
                return Flatten(_gen(ctx, BagType(t), rng, depth - 1))
            if choice == "let":
                var = f"w{depth}"
                bound_t = rng.choice(list(ctx.values()) or [IntType()])
                return Let(
                    var,
                    _gen(ctx, bound_t, rng, depth - 1),
                    _gen({**ctx, var: bound_t}, t, rng, depth - 1),
                )
            return If(
                _gen(ctx, BoolType(), rng, depth - 1),
                _gen(ctx, t, rng, depth - 1),
                _gen(ctx, t, rng, depth - 1),
            )
    raise AssertionError(f"unknown type {t!r}")


def _gen_leaf(ctx: TypeCtx, t: Type, rng: random.Random) -> Expr:
    leaves = _vars_of_type(ctx, t)
    if leaves and rng.random() < 0.5:
        return rng.choice(leaves)
    match t:
        case IntType():
            return IntLit(rng.randint(-2, 3))
        case BoolType():
            return BoolLit(rng.random() < 0.5)
        case RecordType(fields):
            return RecordExpr(tuple((n, _gen_leaf(ctx, x, rng)) for n, x in fields))
        case BagType(elem):
            if rng.random() < 0.5:
                return Empty(elem)
            return Singleton(_gen_leaf(ctx, elem, rng))
    raise AssertionError(f"unknown type {t!r}")


def _gen_proj(ctx: TypeCtx, t: Type, rng: random.Random, depth: int) -> Expr | None:
    """Project a field of type ``t`` out of a comprehension-bound record, via let."""
    candidates = []
    for x, xt in ctx.items():
        if isinstance(xt, RecordType):
            for n, ft in xt.fields:
                if ft == t:
                    candidates.append(Proj(Var(x), n))
    if candidates:
        return rng.choice(candidates)
    return None
