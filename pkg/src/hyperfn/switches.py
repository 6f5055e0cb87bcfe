"""Analytic switches: sign, steps, Kronecker deltas, interval switches.

Production code evaluates switches by direct comparison; the matching
hyperfunction forms (``*_hyperfunction``) are kept for conformance checks
and for differintegration.

Boundary conventions live in :data:`BOUNDARY` and in the two edge predicates
below.  Everything else (including interval data in :mod:`hyperfn.risk`)
goes through them.
"""

from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence, Union

import numpy as np

from . import core
from .core import DEFAULT_CONFIG, EvalConfig, Hyperfunction
from .errors import DimensionMismatch, InvalidTerm

# Value of each switch exactly on its boundary.  A switch that is 1 on the
# boundary uses the right limit of sgn there (sgn(0) = +1).
BOUNDARY = {
    "sgn": "+1 at x == 0",
    "step_weak_one": "1 at X == R   (1 iff X >= R)",
    "step_weak_zero": "0 at X == R  (1 iff X < R)",
    "step_strict": "0 at X == R    (1 iff X > R)",
    "kron_one": "1 iff X == R componentwise",
    "kron_zero": "1 iff X != R in some component",
    "interval": "1 iff R <= X and Y < P (lower edge in, upper edge out)",
}

lower_edge_in = operator.ge  # x >= lower
upper_edge_in = operator.lt  # x < upper


def as_vector(v) -> tuple[float, ...]:
    if isinstance(v, (int, float, np.number)):
        v = (v,)
    out = tuple(float(c) for c in v)
    if not out:
        raise DimensionMismatch("vectors need dimension >= 1")
    if not all(math.isfinite(c) for c in out):
        raise ValueError(f"vector components must be finite: {v!r}")
    return out


def _same_dim(*vs):
    dims = {len(v) for v in vs}
    if len(dims) != 1:
        raise DimensionMismatch(f"operand dimensions differ: {sorted(dims)}")


def sgn_eval(x: float) -> int:
    return 1 if x >= 0 else -1


def step_weak_one(X, R) -> int:
    X, R = as_vector(X), as_vector(R)
    _same_dim(X, R)
    return int(all(x >= r for x, r in zip(X, R)))


def step_weak_zero(X, R) -> int:
    return 1 - step_weak_one(X, R)


def step_strict(X, R) -> int:
    X, R = as_vector(X), as_vector(R)
    _same_dim(X, R)
    return int(all(x > r for x, r in zip(X, R)))


def kron_one(X, R) -> int:
    X, R = as_vector(X), as_vector(R)
    _same_dim(X, R)
    return int(all(x == r for x, r in zip(X, R)))


def kron_zero(X, R) -> int:
    return 1 - kron_one(X, R)


def kron_one_composed(X, R) -> int:
    """Kronecker delta assembled from steps: per component, weak step minus
    strict step, multiplied across components."""
    X, R = as_vector(X), as_vector(R)
    _same_dim(X, R)
    out = 1
    for x, r in zip(X, R):
        out *= step_weak_one(x, r) - step_strict(x, r)
    return out


def interval_switch(X, R, Y, P) -> int:
    X, R, Y, P = (as_vector(v) for v in (X, R, Y, P))
    _same_dim(X, R, Y, P)
    lower = all(lower_edge_in(x, r) for x, r in zip(X, R))
    upper = all(upper_edge_in(y, p) for y, p in zip(Y, P))
    return int(lower and upper)


def count_measure(labels: Sequence[Hashable]) -> int:
    """Number of distinguishable labels, by the double sum of self-pairing
    deltas: each label contributes 1/(number of labels equal to it)."""
    labels = list(labels)
    total = Fraction(0)
    for p in labels:
        total += Fraction(1, sum(1 for r in labels if r == p))
    assert total.denominator == 1
    return int(total)


# -- expression trees ------------------------------------------------------


class Node(str, enum.Enum):
    SGN = "SGN"
    STEP_WEAK_ONE = "STEP_WEAK_ONE"
    STEP_WEAK_ZERO = "STEP_WEAK_ZERO"
    STEP_STRICT = "STEP_STRICT"
    KRON_ONE = "KRON_ONE"
    KRON_ZERO = "KRON_ZERO"
    INTERVAL = "INTERVAL"
    PRODUCT = "PRODUCT"


_ARITY = {
    Node.SGN: 1,
    Node.STEP_WEAK_ONE: 2,
    Node.STEP_WEAK_ZERO: 2,
    Node.STEP_STRICT: 2,
    Node.KRON_ONE: 2,
    Node.KRON_ZERO: 2,
    Node.INTERVAL: 4,
}

# An operand is an input name or a literal vector/scalar.
Operand = Union[str, float, Sequence[float]]


@dataclass(frozen=True)
class SwitchExpr:
    node: Node
    args: tuple = ()

    def __post_init__(self):
        node = Node(self.node)
        object.__setattr__(self, "node", node)
        args = tuple(self.args)
        if node is Node.PRODUCT:
            if not all(isinstance(a, SwitchExpr) for a in args):
                raise InvalidTerm("PRODUCT children must be switch expressions")
            if any(a.node is Node.SGN for a in args):
                raise InvalidTerm("PRODUCT children must be switch-valued; SGN ranges over -1/+1")
        else:
            if len(args) != _ARITY[node]:
                raise InvalidTerm(f"{node.value} takes {_ARITY[node]} operands")
            args = tuple(a if isinstance(a, str) else as_vector(a) for a in args)
        object.__setattr__(self, "args", args)

    def operand_names(self) -> set[str]:
        if self.node is Node.PRODUCT:
            return set().union(*(c.operand_names() for c in self.args)) if self.args else set()
        return {a for a in self.args if isinstance(a, str)}

    def to_dict(self) -> dict:
        if self.node is Node.PRODUCT:
            return {"node": "PRODUCT", "children": [c.to_dict() for c in self.args]}
        return {"node": self.node.value, "args": [a if isinstance(a, str) else list(a) for a in self.args]}

    @classmethod
    def from_dict(cls, d: dict) -> "SwitchExpr":
        try:
            node = Node(d["node"])
            if node is Node.PRODUCT:
                return cls(node, tuple(cls.from_dict(c) for c in d.get("children", [])))
            return cls(node, tuple(d["args"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidTerm):
                raise
            raise InvalidTerm(f"malformed switch expression: {exc}") from exc


def product(*children: SwitchExpr) -> SwitchExpr:
    return SwitchExpr(Node.PRODUCT, children)


def resolve(arg, inputs: Mapping[str, object]) -> tuple[float, ...]:
    if isinstance(arg, str):
        if arg not in inputs:
            raise KeyError(arg)
        return as_vector(inputs[arg])
    return arg


_DIRECT = {
    Node.STEP_WEAK_ONE: step_weak_one,
    Node.STEP_WEAK_ZERO: step_weak_zero,
    Node.STEP_STRICT: step_strict,
    Node.KRON_ONE: kron_one,
    Node.KRON_ZERO: kron_zero,
    Node.INTERVAL: interval_switch,
}


def evaluate(expr: SwitchExpr, inputs: Mapping[str, object] | None = None) -> int:
    inputs = inputs or {}
    if expr.node is Node.PRODUCT:
        out = 1
        for child in expr.args:
            out *= evaluate(child, inputs)
        return out
    vals = [resolve(a, inputs) for a in expr.args]
    if expr.node is Node.SGN:
        (v,) = vals
        if len(v) != 1:
            raise DimensionMismatch("SGN takes a scalar")
        return sgn_eval(v[0])
    return _DIRECT[expr.node](*vals)


def conjunction(a: SwitchExpr, b: SwitchExpr, inputs: Mapping[str, object] | None = None) -> int:
    return evaluate(a, inputs) * evaluate(b, inputs)


# -- hyperfunction forms ---------------------------------------------------


def sgn_hyperfunction() -> Hyperfunction:
    """sgn as hyp(-log(-z)/j) - hyp(log(z)/j).

    ``log(z)/j`` agrees with ``-(-log(-z)/j)`` plus the constant pair
    ``(1/2, -1/2)`` on each half plane, which keeps the form inside the term
    catalog: sgn = 2*step(0) - constant pair (1/2, -1/2).
    """
    return Hyperfunction.of(
        core.step(0.0, coeff=2.0),
        core.constant(pair=(-0.5, 0.5)),
    )


def step_hyperfunction(r: float) -> Hyperfunction:
    return Hyperfunction.of(core.step(r))


def step_zero_hyperfunction(r: float) -> Hyperfunction:
    return Hyperfunction.of(core.constant(1.0), core.step(r, coeff=-1.0))


def interval_hyperfunction(r: float, p: float) -> Hyperfunction:
    return Hyperfunction.of(core.interval(r, p))


def evaluate_via_hyperfunctions(expr: SwitchExpr, inputs: Mapping[str, object] | None = None,
                                cfg: EvalConfig = DEFAULT_CONFIG) -> int:
    """Evaluate through numeric boundary values of the hyperfunction forms.

    Componentwise values are rounded to the nearest integer after checking
    they are within 1e-6 of it.  Inputs inside the jump guard raise.
    """
    inputs = inputs or {}

    def scalar(hf, x):
        v = core.eval_numeric(hf, x, cfg)
        k = round(v.real)
        if abs(v - k) > 1e-6:
            raise ArithmeticError(f"switch form did not settle to an integer: {v}")
        return k

    node = expr.node
    if node is Node.PRODUCT:
        out = 1
        for child in expr.args:
            out *= evaluate_via_hyperfunctions(child, inputs, cfg)
        return out
    vals = [resolve(a, inputs) for a in expr.args]
    if node is Node.SGN:
        return scalar(sgn_hyperfunction(), vals[0][0])
    _same_dim(*vals)
    if node in (Node.STEP_WEAK_ONE, Node.STEP_STRICT):
        X, R = vals
        out = 1
        for x, r in zip(X, R):
            out *= scalar(step_hyperfunction(r), x)
        return out
    if node is Node.STEP_WEAK_ZERO:
        X, R = vals
        out = 1
        for x, r in zip(X, R):
            out *= scalar(step_hyperfunction(r), x)
        return 1 - out
    if node in (Node.KRON_ONE, Node.KRON_ZERO):
        X, R = vals
        out = 1
        for x, r in zip(X, R):
            # weak minus strict step; both coincide off the jump
            out *= scalar(step_hyperfunction(r), x) - scalar(step_hyperfunction(r), x)
        return out if node is Node.KRON_ONE else 1 - out
    X, R, Y, P = vals
    out = 1
    for x, r, y, p in zip(X, R, Y, P):
        if x == y and r < p:
            out *= scalar(interval_hyperfunction(r, p), x)
        else:
            out *= scalar(step_hyperfunction(r), x) * scalar(step_zero_hyperfunction(p), y)
    return out
