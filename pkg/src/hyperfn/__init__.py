"""Hyperfunction toolkit: boundary-value evaluation, analytic switches, and
the preference, production, inflation and risk models built on them."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    IS_SINGULAR,
    DEFAULT_CONFIG,
    EvalConfig,
    HyperTerm,
    Hyperfunction,
    Kind,
    constant,
    delta,
    differintegrate,
    equivalent,
    eval_closed,
    eval_numeric,
    interval,
    path_sum_invariance_check,
    rational,
    step,
)
from .errors import HyperfnError  # noqa: E402

__all__ = [
    "IS_SINGULAR", "DEFAULT_CONFIG", "EvalConfig", "HyperTerm", "Hyperfunction", "Kind",
    "constant", "delta", "differintegrate", "equivalent", "eval_closed", "eval_numeric",
    "interval", "path_sum_invariance_check", "rational", "step", "HyperfnError",
]
