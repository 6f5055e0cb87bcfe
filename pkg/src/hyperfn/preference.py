"""Value hierarchies generated by impulse series over labeled marginal quantities.

A consumer's hierarchy is a sum of interval impulses: every label inside
impulse ``mu`` carries the ranking index ``weight_mu``; labels outside all
impulses carry 0.  Weights order alternatives.  They are not utility
magnitudes and are never compared across consumers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import core
from .core import IS_SINGULAR, Hyperfunction
from .errors import (
    InvalidConfig,
    NotMonotone,
    NotOrderPreserving,
    OverlappingImpulses,
    Tie,
)


@dataclass(frozen=True)
class MarginalQuantity:
    label: float
    description: str = ""


@dataclass(frozen=True)
class Impulse:
    r_lo: float
    r_hi: float
    weight: float


@dataclass(frozen=True)
class PreferenceSpec:
    impulses: tuple[Impulse, ...] = ()
    rho: float = 0.05

    def __post_init__(self):
        imps = tuple(i if isinstance(i, Impulse) else Impulse(*i) for i in self.impulses)
        object.__setattr__(self, "impulses", imps)
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise InvalidConfig(f"rho must be positive, got {self.rho!r}")

    def to_dict(self) -> dict:
        return {
            "impulses": [{"r_lo": i.r_lo, "r_hi": i.r_hi, "weight": i.weight} for i in self.impulses],
            "rho": self.rho,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PreferenceSpec":
        try:
            imps = tuple(Impulse(float(i["r_lo"]), float(i["r_hi"]), float(i["weight"]))
                         for i in d.get("impulses", []))
            return cls(imps, float(d.get("rho", 0.05)))
        except (KeyError, TypeError) as exc:
            raise InvalidConfig(f"malformed preference spec: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "PreferenceSpec":
        return cls.from_dict(json.loads(text))


def validate(spec: PreferenceSpec) -> None:
    for imp in spec.impulses:
        if not (math.isfinite(imp.r_lo) and math.isfinite(imp.r_hi)) or not imp.r_lo < imp.r_hi:
            raise OverlappingImpulses(f"impulse needs r_lo < r_hi: {imp}")
        if not math.isfinite(imp.weight):
            raise NotOrderPreserving(f"weight must be finite: {imp}")
        if imp.weight == 0:
            # indistinguishable from labels outside every impulse
            raise NotOrderPreserving(f"zero weight does not rank anything: {imp}")
    ordered = sorted(spec.impulses, key=lambda i: i.r_lo)
    for a, b in zip(ordered, ordered[1:]):
        if b.r_lo < a.r_hi:
            raise OverlappingImpulses(f"impulses overlap: {a} and {b}")
    weights = [i.weight for i in spec.impulses]
    if len(set(weights)) != len(weights):
        raise NotOrderPreserving("two impulses share a weight; the ranking is not strict")


def build_preference(spec: PreferenceSpec) -> Hyperfunction:
    validate(spec)
    return Hyperfunction(tuple(core.interval(i.r_lo, i.r_hi, coeff=i.weight) for i in spec.impulses))


def value_at(pref: Hyperfunction, xi: float) -> float:
    v = core.eval_closed(pref, xi)
    if v is IS_SINGULAR:
        raise Tie(f"label {xi!r} sits on a singular point of the hierarchy")
    return v.real


def choose(pref: Hyperfunction, a: float, b: float) -> float:
    """Return whichever of ``a``/``b`` ranks strictly higher; raise Tie otherwise."""
    if a == b:
        raise ValueError("choice needs two different labels")
    va, vb = value_at(pref, a), value_at(pref, b)
    if va > vb:
        return a
    if vb > va:
        return b
    raise Tie(f"labels {a!r} and {b!r} are not distinguishable (value {va!r})")


# -- relabeling ------------------------------------------------------------


@dataclass(frozen=True)
class MonotoneMap:
    """Piecewise-linear map through sorted breakpoints, extended linearly
    past both ends."""

    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def __post_init__(self):
        xs = tuple(float(v) for v in self.xs)
        ys = tuple(float(v) for v in self.ys)
        if len(xs) != len(ys) or len(xs) < 2:
            raise NotMonotone("need at least two (x, y) breakpoints of equal count")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise NotMonotone("breakpoint xs must be strictly increasing")
        if any(b <= a for a, b in zip(ys, ys[1:])):
            raise NotMonotone("map has a non-increasing segment")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __call__(self, x: float) -> float:
        xs, ys = self.xs, self.ys
        k = int(np.searchsorted(xs, x, side="right")) - 1
        k = min(max(k, 0), len(xs) - 2)
        slope = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])
        return ys[k] + (x - xs[k]) * slope


def relabel_monotone(spec: PreferenceSpec, phi: MonotoneMap | Sequence[Sequence[float]]) -> PreferenceSpec:
    if not isinstance(phi, MonotoneMap):
        xs, ys = zip(*phi)
        phi = MonotoneMap(xs, ys)
    imps = []
    for i in spec.impulses:
        lo, hi = phi(i.r_lo), phi(i.r_hi)
        if not lo < hi:
            raise NotMonotone(f"map collapses impulse {i}")
        imps.append(Impulse(lo, hi, i.weight))
    return PreferenceSpec(tuple(imps), spec.rho)


# -- reflexes --------------------------------------------------------------


@dataclass(frozen=True)
class Trigger:
    point: float
    magnitude: float


@dataclass(frozen=True)
class ReflexSpec:
    triggers: tuple[Trigger, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "triggers",
            tuple(t if isinstance(t, Trigger) else Trigger(*t) for t in self.triggers),
        )


@dataclass(frozen=True)
class ReflexFired:
    magnitude: float


PASS = None


def reflex_filter(reflex: ReflexSpec, xi: float) -> ReflexFired | None:
    """ReflexFired when ``xi`` hits a trigger point exactly, else ``PASS`` (None)."""
    for t in reflex.triggers:
        if xi == t.point:
            return ReflexFired(t.magnitude)
    return PASS


def reflex_hyperfunction(reflex: ReflexSpec) -> Hyperfunction:
    return Hyperfunction(tuple(core.delta(t.point, coeff=t.magnitude) for t in reflex.triggers))


def choice_battery(pref: Hyperfunction, pairs: Iterable[tuple[float, float]],
                   reflex: ReflexSpec | None = None) -> list[tuple]:
    """Run a sequence of pairwise choices and return the log.

    Pairs touching a reflex trigger never reach :func:`choose`; they are
    logged as ``("reflex", a, b, magnitude)``.  Ties are logged as
    ``("tie", a, b)``.
    """
    log = []
    reflex = reflex or ReflexSpec()
    for a, b in pairs:
        fired = reflex_filter(reflex, a) or reflex_filter(reflex, b)
        if fired is not None:
            log.append(("reflex", a, b, fired.magnitude))
            continue
        try:
            log.append(("choice", a, b, choose(pref, a, b)))
        except Tie:
            log.append(("tie", a, b))
    return log


# -- non-unique representations -------------------------------------------


def representation_variants(pref: Hyperfunction, count: int, seed: int = 0,
                            max_degree: int = 4) -> list[Hyperfunction]:
    """``count`` structurally distinct hyperfunctions with the same boundary
    values as ``pref``: each adds one random polynomial to both branches."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    out, seen = [], set()
    while len(out) < count:
        deg = int(rng.integers(0, max_degree + 1))
        poly = tuple(float(c) for c in rng.normal(size=deg + 1))
        if poly in seen:
            continue
        seen.add(poly)
        offset = core.rational(poly, (1.0,), pair=(1.0, 1.0))
        out.append(pref + offset)
    return out
