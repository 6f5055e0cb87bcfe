"""Revenue projection over mixed point, interval and event data.

Gates are switch expressions evaluated over boxes of interval inputs and
return a three-valued result: certainly 0, certainly 1, or indeterminate.
Monotone gates are resolved exactly from two extreme corners.  Other gates
use per-atom interval reasoning, refined by corner enumeration and bisection.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Mapping, Union

from . import switches
from .switches import Node, SwitchExpr
from .errors import InvalidConfig, MissingEvent, MissingInput, NegativeRate

MAX_CORNER_INPUTS = 16
SUBDIVISION_DEPTH = 8


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise InvalidConfig(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v: float) -> "Interval":
        return cls(v, v)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, v) -> bool:
        return self.lo <= v <= self.hi

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo - other.hi, self.hi - other.lo)
        return Interval(self.lo - other, self.hi - other)

    def __mul__(self, other):
        if isinstance(other, Interval):
            c = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
            return Interval(min(c), max(c))
        a, b = self.lo * other, self.hi * other
        return Interval(min(a, b), max(a, b))

    __rmul__ = __mul__

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


ZERO = Interval(0.0, 0.0)
ONE = Interval(1.0, 1.0)
UNIT = Interval(0.0, 1.0)


@dataclass(frozen=True)
class Indeterminate:
    bounds: Interval = UNIT


INDETERMINATE = Indeterminate()


# -- mixed data -------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    value: float


@dataclass(frozen=True)
class Range:
    interval: Interval


@dataclass(frozen=True)
class Event:
    name: str
    fired: bool


MixedDatum = Union[Point, Range, Event]


def datum_interval(d: MixedDatum) -> Interval:
    if isinstance(d, Point):
        return Interval.point(float(d.value))
    if isinstance(d, Range):
        return d.interval
    raise InvalidConfig(f"event {d.name!r} cannot feed a numeric gate")


def datum_from_dict(d) -> MixedDatum:
    if isinstance(d, (int, float)):
        return Point(float(d))
    if isinstance(d, list) and len(d) == 2:
        return Range(Interval(float(d[0]), float(d[1])))
    kind = d.get("kind", "").upper()
    if kind == "POINT":
        return Point(float(d["value"]))
    if kind == "RANGE":
        return Range(Interval(float(d["lo"]), float(d["hi"])))
    if kind == "EVENT":
        return Event(str(d["name"]), bool(d["fired"]))
    raise InvalidConfig(f"unknown datum {d!r}")


def load_data(doc: Mapping) -> dict[str, MixedDatum]:
    return {k: datum_from_dict(v) for k, v in doc.items()}


# -- three-valued gates -----------------------------------------------------

Box = Mapping[str, Interval]


def _operand(arg, box: Box) -> list[Interval]:
    if isinstance(arg, str):
        if arg not in box:
            raise MissingInput(f"gate input {arg!r} has no datum")
        return [box[arg]]
    return [Interval.point(v) for v in arg]


def _tri(must: bool, can: bool) -> Interval:
    if must:
        return ONE
    if not can:
        return ZERO
    return UNIT


def _and(parts) -> Interval:
    parts = list(parts)
    if any(p == ZERO for p in parts):
        return ZERO
    if all(p == ONE for p in parts):
        return ONE
    return UNIT


def _not(v: Interval) -> Interval:
    return Interval(1.0 - v.hi, 1.0 - v.lo)


def atom_range(expr: SwitchExpr, box: Box) -> Interval:
    """Sound three-valued value of ``expr`` over a box (per-atom reasoning)."""
    node = expr.node
    if node is Node.PRODUCT:
        return _and(atom_range(c, box) for c in expr.args)
    ops = [_operand(a, box) for a in expr.args]
    if len({len(o) for o in ops}) != 1:
        raise switches.DimensionMismatch("gate operand dimensions differ")
    if node is Node.SGN:
        raise InvalidConfig("SGN is not switch-valued and cannot gate revenue")
    if node in (Node.STEP_WEAK_ONE, Node.STEP_WEAK_ZERO):
        X, R = ops
        v = _and(_tri(x.lo >= r.hi, x.hi >= r.lo) for x, r in zip(X, R))
        return v if node is Node.STEP_WEAK_ONE else _not(v)
    if node is Node.STEP_STRICT:
        X, R = ops
        return _and(_tri(x.lo > r.hi, x.hi > r.lo) for x, r in zip(X, R))
    if node in (Node.KRON_ONE, Node.KRON_ZERO):
        X, R = ops
        v = _and(
            _tri(x.degenerate and r.degenerate and x.lo == r.lo, x.lo <= r.hi and r.lo <= x.hi)
            for x, r in zip(X, R)
        )
        return v if node is Node.KRON_ONE else _not(v)
    X, R, Y, P = ops
    parts = []
    for x, r, y, p in zip(X, R, Y, P):
        parts.append(_tri(switches.lower_edge_in(x.lo, r.hi), switches.lower_edge_in(x.hi, r.lo)))
        parts.append(_tri(switches.upper_edge_in(y.hi, p.lo), switches.upper_edge_in(y.lo, p.hi)))
    return _and(parts)


_POLARITY = {
    Node.STEP_WEAK_ONE: (1, -1),
    Node.STEP_STRICT: (1, -1),
    Node.STEP_WEAK_ZERO: (-1, 1),
    Node.INTERVAL: (1, -1, -1, 1),
}


def polarity(expr: SwitchExpr) -> dict[str, set[int]] | None:
    """Direction in which each named input pushes the gate, or None when
    the gate contains a non-monotone atom."""
    if expr.node is Node.PRODUCT:
        out: dict[str, set[int]] = {}
        for c in expr.args:
            sub = polarity(c)
            if sub is None:
                return None
            for k, v in sub.items():
                out.setdefault(k, set()).update(v)
        return out
    if expr.node not in _POLARITY:
        return None
    out = {}
    for arg, sign in zip(expr.args, _POLARITY[expr.node]):
        if isinstance(arg, str):
            out.setdefault(arg, set()).add(sign)
    return out


def is_monotone(expr: SwitchExpr) -> bool:
    pol = polarity(expr)
    return pol is not None and all(len(s) == 1 for s in pol.values())


def _point_value(expr: SwitchExpr, point: Mapping[str, float]) -> int:
    return switches.evaluate(expr, point)


def corner_values(expr: SwitchExpr, box: Box) -> set[int]:
    names = sorted(n for n in expr.operand_names())
    choices = [(box[n].lo, box[n].hi) if not box[n].degenerate else (box[n].lo,) for n in names]
    out = set()
    for combo in itertools.product(*choices):
        out.add(_point_value(expr, dict(zip(names, combo))))
        if len(out) == 2:
            break
    return out


def gate_range(expr: SwitchExpr, box: Box, depth: int = SUBDIVISION_DEPTH) -> Interval:
    """Range of a switch-valued gate over a box of inputs: ZERO, ONE or UNIT."""
    names = sorted(expr.operand_names())
    missing = [n for n in names if n not in box]
    if missing:
        raise MissingInput(f"gate inputs without data: {missing}")
    coarse = atom_range(expr, box)
    if coarse != UNIT:
        return coarse
    pol = polarity(expr)
    if pol is not None and all(len(s) == 1 for s in pol.values()):
        lo_pt = {n: (box[n].lo if pol[n] == {1} else box[n].hi) for n in names}
        hi_pt = {n: (box[n].hi if pol[n] == {1} else box[n].lo) for n in names}
        return Interval(float(_point_value(expr, lo_pt)), float(_point_value(expr, hi_pt)))
    if len(names) <= MAX_CORNER_INPUTS:
        seen = corner_values(expr, box)
        if len(seen) == 2:
            return UNIT
    return _subdivide(expr, dict(box), names, depth)


def _subdivide(expr: SwitchExpr, box: dict, names: list[str], depth: int) -> Interval:
    """Bisect the widest input until every piece is determinate; UNIT if two
    pieces disagree or the depth runs out."""
    pending = [(box, depth)]
    seen: set[float] = set()
    while pending:
        b, d = pending.pop()
        v = atom_range(expr, b)
        if v != UNIT:
            seen.add(v.lo)
            if len(seen) == 2:
                return UNIT
            continue
        if d == 0:
            return UNIT
        widest = max(names, key=lambda n: b[n].width)
        iv = b[widest]
        if iv.degenerate:
            return UNIT
        mid = 0.5 * (iv.lo + iv.hi)
        for half in (Interval(iv.lo, mid), Interval(mid, iv.hi)):
            nb = dict(b)
            nb[widest] = half
            pending.append((nb, d - 1))
    (only,) = seen
    return Interval(only, only)


def interval_gate(x: Interval, r: Interval, y: Interval, p: Interval):
    """Interval switch R <= X, Y < P over interval inputs: 1, 0 or INDETERMINATE."""
    expr = SwitchExpr(Node.INTERVAL, ("x", "r", "y", "p"))
    v = gate_range(expr, {"x": x, "r": r, "y": y, "p": p})
    if v == ONE:
        return 1
    if v == ZERO:
        return 0
    return INDETERMINATE


# -- revenue model -----------------------------------------------------------


@dataclass(frozen=True)
class RevenueTerm:
    gate: SwitchExpr
    amount: float
    time: float


@dataclass(frozen=True)
class RevenueModel:
    base_terms: tuple[RevenueTerm, ...] = ()
    rate: float = 0.0
    event_deltas: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base_terms", tuple(self.base_terms))
        object.__setattr__(self, "event_deltas", tuple(self.event_deltas))
        if not 0 <= self.rate < 1:
            raise InvalidConfig(f"penalty rate must lie in [0, 1), got {self.rate!r}")
        for t in self.base_terms:
            if not math.isfinite(t.amount):
                raise InvalidConfig("term amounts must be finite")

    @classmethod
    def from_dict(cls, d: dict) -> "RevenueModel":
        try:
            terms = tuple(
                RevenueTerm(SwitchExpr.from_dict(t["gate"]), float(t["amount"]), float(t.get("time", 0.0)))
                for t in d.get("base_terms", [])
            )
            return cls(terms, float(d.get("rate", 0.0)), tuple(d.get("event_deltas", [])))
        except (KeyError, TypeError) as exc:
            raise InvalidConfig(f"malformed revenue model: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "RevenueModel":
        return cls.from_dict(json.loads(text))


def event_not_fired(fired: bool) -> int:
    """The delta factor for a guarded event: 1 while the event has not
    happened, 0 once it has.  The penalty therefore prices unresolved risk."""
    return 0 if fired else 1


def discount_gate(model: RevenueModel, events: Mapping[str, bool]) -> float:
    prod = 1
    for name in model.event_deltas:
        if name not in events:
            raise MissingEvent(f"no observation for event {name!r}")
        prod *= event_not_fired(events[name])
    return 1.0 - model.rate * prod


def _events(data: Mapping[str, MixedDatum]) -> dict[str, bool]:
    return {d.name: d.fired for d in data.values() if isinstance(d, Event)}


def _box(data: Mapping[str, MixedDatum]) -> dict[str, Interval]:
    return {k: datum_interval(d) for k, d in data.items() if not isinstance(d, Event)}


def project_revenue(model: RevenueModel, data: Mapping[str, MixedDatum],
                    market_rate: float, now: float = 0.0) -> Interval:
    """Interval enclosure of discounted, gated revenue."""
    if not market_rate > 0:
        raise NegativeRate(f"market rate must be > 0, got {market_rate!r}")
    mult = discount_gate(model, _events(data))
    box = _box(data)
    total = ZERO
    for term in model.base_terms:
        g = gate_range(term.gate, box)
        scale = term.amount * math.exp(-market_rate * (term.time - now)) * mult
        total = total + g * scale
    return total


def point_revenue(model: RevenueModel, values: Mapping[str, float],
                  events: Mapping[str, bool], market_rate: float, now: float = 0.0) -> float:
    """Revenue for one point selection of every input."""
    if not market_rate > 0:
        raise NegativeRate(f"market rate must be > 0, got {market_rate!r}")
    mult = discount_gate(model, events)
    total = 0.0
    for term in model.base_terms:
        g = switches.evaluate(term.gate, values)
        scale = term.amount * math.exp(-market_rate * (term.time - now)) * mult
        total = total + g * scale
    return total


def _bumped(d: MixedDatum, bump: float) -> MixedDatum:
    if isinstance(d, Point):
        return Point(d.value + bump)
    if isinstance(d, Range):
        return Range(Interval(d.interval.lo + bump, d.interval.hi + bump))
    raise InvalidConfig(f"cannot bump event {d.name!r}")


def marginal_contribution(model: RevenueModel, data: Mapping[str, MixedDatum], input_name: str,
                          bump: float, market_rate: float = 0.05, now: float = 0.0) -> Interval:
    """Enclosure of the revenue change when one input moves up by ``bump``.

    Terms whose gate does not read the input contribute exactly zero; for
    the rest the gate change is enclosed by differencing the two ranges."""
    if input_name not in data:
        raise MissingInput(f"no datum named {input_name!r}")
    if not bump >= 0:
        raise InvalidConfig("bump must be >= 0")
    if not market_rate > 0:
        raise NegativeRate(f"market rate must be > 0, got {market_rate!r}")
    after = dict(data)
    after[input_name] = _bumped(data[input_name], bump)
    mult = discount_gate(model, _events(data))
    box0, box1 = _box(data), _box(after)
    total = ZERO
    for term in model.base_terms:
        if input_name not in term.gate.operand_names() or bump == 0:
            continue
        g0, g1 = gate_range(term.gate, box0), gate_range(term.gate, box1)
        diff = g1 - g0
        scale = term.amount * math.exp(-market_rate * (term.time - now)) * mult
        total = total + diff * scale
    return total
