"""Contact Lax pairs, their compatibility systems, and checks on them.

Thin layer over the C++ core: report-producing calls return dicts.
"""

import json
from importlib import resources

from . import _core
from ._core import (
    CompileError,
    CoverageError,
    DerivationError,
    Error,
    IncompatibleGaugeError,
    LaxPair,
    NumericalAbort,
    ParameterError,
    PDESystem,
    StructuralError,
    TheoremVerificationError,
    TransformDegenerateError,
    check_ab,
    ck_inverse,
    ck_transform,
    derive,
    make_custom,
    make_family,
    normal_form,
    paths_agree,
    rat11_ck_system,
    reduce_2plus1,
    reduction_commutes,
    to_latex,
)

__all__ = [
    "CompileError", "CoverageError", "DerivationError", "Error", "IncompatibleGaugeError", "LaxPair",
    "NumericalAbort", "ParameterError", "PDESystem", "StructuralError", "TheoremVerificationError",
    "TransformDegenerateError", "check_ab", "ck_inverse", "ck_transform", "compatibility_condition", "convergence",
    "derive", "golden_path", "make_custom", "make_family", "match_printed_rls", "normal_form", "paths_agree", "rat11_ck_system",
    "reduce_2plus1", "reduction_commutes", "simulate", "to_latex", "verify_theorem1",
]


def golden_path() -> str:
    """Transcribed reference system shipped with the package."""
    return str(resources.files(__package__) / "data" / "rls_system.json")


def compatibility_condition(lax, path="lifted"):
    return json.loads(_core.compatibility_condition(lax, path))


def verify_theorem1(m, n):
    return json.loads(_core.verify_theorem1(m, n))


def match_printed_rls(m, n, golden=None, points=20):
    return json.loads(_core.match_printed_rls(m, n, golden or golden_path(), points))


def simulate(system, init, grid=16, steps=100, dt=0.01, spatial="spectral", guard=0.1):
    """Returns (monitor rows as dicts, final fields by name)."""
    if not isinstance(init, str):
        init = json.dumps(init)
    csv, fields = _core.simulate(system, init, grid, steps, dt, spatial, guard)
    lines = csv.strip().splitlines()
    head = lines[0].split(",")
    rows = [dict(zip(head, map(float, line.split(",")))) for line in lines[1:]]
    return rows, fields


def convergence(system, exact, kind, ns, steps, T_end, spatial="spectral"):
    if not isinstance(exact, str):
        exact = json.dumps(exact)
    return json.loads(_core.convergence(system, exact, kind, list(ns), list(steps), T_end, spatial))
