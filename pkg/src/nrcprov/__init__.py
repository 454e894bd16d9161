"""Nested relational calculus engine with dependency provenance.

Three interpreters over one core language: plain evaluation, dynamic
annotation tracking, and static type-based analysis, plus forward and
backward data slicing and an empirical verification harness.
"""

from .analysis import (
    ACtx,
    ATBag,
    ATBool,
    ATInt,
    ATRecord,
    AType,
    analyze,
    colors_of_type,
    erase_type,
    member,
    merge_types,
    render_atype,
    subtype,
)
from .avalues import (
    ABag,
    ABool,
    AInt,
    ARecord,
    AValue,
    add_annotation,
    apply_subst,
    check_shape,
    colors_of,
    distinctly_color,
    distinctly_color_env,
    equal_except_at,
    erase,
    render_avalue,
)
from .errors import (
    BudgetExceededError,
    DataError,
    IncompatibleTypesError,
    NrcError,
    ParseError,
    PathError,
    PreconditionError,
    TypecheckError,
)
from .interp import Env, evaluate
from .parser import parse, parse_atype, parse_type
from .slicing import (
    OUTPUT_ROOT,
    TypePath,
    ValuePath,
    backward_slice,
    forward_slice,
    parse_type_path,
    parse_value_path,
    static_slice,
)
from .syntax import (
    BagType,
    BoolType,
    Expr,
    IntType,
    RecordType,
    Type,
    desugar,
    is_core,
    render,
    render_type,
)
from .tracking import AEnv, LiftedOps, track
from .typecheck import TypeCtx, elaborate, infer_and_elaborate, infer_type
from .values import Value, VBag, VBool, VInt, VRecord, render_value, value_eq
from .verification import (
    CheckReport,
    check_color_invariance,
    check_dependency_correctness,
    check_erasure,
    check_static_soundness,
    minimality_report,
)

__version__ = "0.1.0"
