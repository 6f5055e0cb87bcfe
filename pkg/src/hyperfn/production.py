"""Structure of production: tasks ordered by distance from consumption.

Order 1 is a consumption good; a task of order ``O`` sits ``O - 1`` stages
upstream and its distance is ``log O``.  Each task carries coefficient
entries ``(k, p, r, psi)``: over time bucket ``k`` it is active with
frequency ``psi`` on the label interval ``(p, r)``.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import core
from .core import Hyperfunction
from .errors import (
    BadBins,
    EmptyPath,
    EmptySet,
    InvalidGraph,
    NegativeInterval,
    NonpositiveFlow,
    NonpositiveRate,
)


@dataclass(frozen=True)
class Coefficient:
    k: int
    p: float
    r: float
    psi: float

    def __post_init__(self):
        if not self.p < self.r:
            raise InvalidGraph(f"coefficient needs p < r, got {self.p}, {self.r}")
        if not (math.isfinite(self.psi) and self.psi >= 0):
            raise InvalidGraph(f"psi must be finite and >= 0, got {self.psi}")

    @property
    def mass(self) -> float:
        return self.psi * (self.r - self.p)

    @property
    def exact_mass(self) -> Fraction:
        return Fraction(self.psi) * (Fraction(self.r) - Fraction(self.p))


@dataclass(frozen=True)
class Task:
    label: float
    order: float = 1.0
    coefficients: tuple[Coefficient, ...] = ()
    specificity: int = 1
    cross_section: float = 1.0
    executor: str | None = None

    def __post_init__(self):
        coefs = tuple(c if isinstance(c, Coefficient) else Coefficient(*c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coefs)
        if not (math.isfinite(self.order) and self.order >= 1):
            raise InvalidGraph(f"task {self.label}: order must be >= 1")
        if int(self.specificity) != self.specificity or self.specificity < 1:
            raise InvalidGraph(f"task {self.label}: specificity must be a positive integer")
        if not (math.isfinite(self.cross_section) and self.cross_section > 0):
            raise InvalidGraph(f"task {self.label}: cross_section must be > 0")

    @property
    def distance(self) -> float:
        return math.log(self.order)

    @property
    def psi_mass(self) -> float:
        return math.fsum(c.mass for c in self.coefficients)

    @property
    def delay(self) -> float:
        return self.order - 1.0


@dataclass(frozen=True)
class ProcessGraph:
    tasks: tuple[Task, ...] = ()
    edges: tuple[tuple[float, float], ...] = ()
    interval: tuple[float, float] = (0.0, 1.0)
    path: tuple[float, ...] = ()

    def __post_init__(self):
        tasks = tuple(self.tasks)
        edges = tuple((float(a), float(b)) for a, b in self.edges)
        path = tuple(float(x) for x in self.path)
        object.__setattr__(self, "tasks", tasks)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "path", path)
        object.__setattr__(self, "interval", (float(self.interval[0]), float(self.interval[1])))

        by_label = {}
        for t in tasks:
            if t.label in by_label:
                raise InvalidGraph(f"duplicate task label {t.label}")
            by_label[t.label] = t
        for a, b in edges:
            if a not in by_label or b not in by_label:
                raise InvalidGraph(f"edge ({a}, {b}) references an unknown task")
            # order must strictly decrease toward consumption; this also rules out cycles
            if not by_label[a].order > by_label[b].order:
                raise InvalidGraph(f"edge ({a}, {b}) does not decrease in order")
        H, K = self.interval
        if not H < K:
            raise InvalidGraph(f"interval needs H < K, got {self.interval}")
        edge_set = set(edges)
        for x in path:
            if x not in by_label:
                raise InvalidGraph(f"path visits unknown task {x}")
        for a, b in zip(path, path[1:]):
            if (a, b) not in edge_set:
                raise InvalidGraph(f"path step ({a}, {b}) is not an edge")

    def task(self, label: float) -> Task:
        for t in self.tasks:
            if t.label == label:
                return t
        raise KeyError(label)

    @property
    def max_order(self) -> float:
        return max((t.order for t in self.tasks), default=0.0)

    def components(self) -> list[list[Task]]:
        """Weakly connected components, in order of first task appearance."""
        parent = {t.label: t.label for t in self.tasks}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        groups: dict[float, list[Task]] = {}
        for t in self.tasks:
            groups.setdefault(find(t.label), []).append(t)
        return list(groups.values())

    def restrict(self, max_order: float) -> "ProcessGraph":
        keep = {t.label for t in self.tasks if t.order <= max_order}
        path = []
        for x in self.path:
            if x not in keep:
                break
            path.append(x)
        return ProcessGraph(
            tuple(t for t in self.tasks if t.label in keep),
            tuple(e for e in self.edges if e[0] in keep and e[1] in keep),
            self.interval,
            tuple(path),
        )

    def union(self, other: "ProcessGraph") -> "ProcessGraph":
        return ProcessGraph(
            self.tasks + other.tasks,
            self.edges + other.edges,
            (min(self.interval[0], other.interval[0]), max(self.interval[1], other.interval[1])),
            self.path,
        )

    def to_dict(self) -> dict:
        return {
            "tasks": [
                {
                    "label": t.label,
                    "order": t.order,
                    "coefficients": [{"k": c.k, "p": c.p, "r": c.r, "psi": c.psi} for c in t.coefficients],
                    "specificity": t.specificity,
                    "cross_section": t.cross_section,
                    **({"executor": t.executor} if t.executor is not None else {}),
                }
                for t in self.tasks
            ],
            "edges": [list(e) for e in self.edges],
            "interval": list(self.interval),
            "path": list(self.path),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProcessGraph":
        try:
            tasks = tuple(
                Task(
                    float(t["label"]),
                    float(t.get("order", 1.0)),
                    tuple(Coefficient(int(c.get("k", 0)), float(c["p"]), float(c["r"]), float(c["psi"]))
                          for c in t.get("coefficients", [])),
                    int(t.get("specificity", 1)),
                    float(t.get("cross_section", 1.0)),
                    t.get("executor"),
                )
                for t in d.get("tasks", [])
            )
            return cls(tasks, tuple(tuple(e) for e in d.get("edges", [])),
                       tuple(d.get("interval", (0.0, 1.0))), tuple(d.get("path", [])))
        except (KeyError, TypeError) as exc:
            raise InvalidGraph(f"malformed process graph: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "ProcessGraph":
        return cls.from_dict(json.loads(text))


def folded_groups(g: ProcessGraph) -> dict[str, list[float]]:
    """Tasks performed by one executor, keyed by executor name."""
    out: dict[str, list[float]] = defaultdict(list)
    for t in g.tasks:
        if t.executor is not None:
            out[t.executor].append(t.label)
    return dict(out)


# -- rates and discounting -------------------------------------------------


@dataclass(frozen=True)
class TimePreference:
    consumed_flow: float
    invested_flow: float


def momentary_rate(tp: TimePreference) -> float:
    if not (tp.consumed_flow > 0 and tp.invested_flow > 0):
        raise NonpositiveFlow(f"both flows must be > 0, got {tp}")
    return tp.consumed_flow / tp.invested_flow


def period_rate(instant: float) -> float:
    """Rate over one period equivalent to an instantaneous rate: e**J - 1."""
    if not instant > 0:
        raise NonpositiveRate(f"instantaneous rate must be > 0, got {instant!r}")
    return math.expm1(instant)


def instant_rate(period: float) -> float:
    return math.log1p(period)


def discount_factor(rate: float, start: float, end: float) -> float:
    if not rate > 0:
        raise NonpositiveRate(f"rate must be > 0, got {rate!r}")
    if end < start:
        raise NegativeInterval(f"end {end!r} precedes start {start!r}")
    return math.exp(-rate * (end - start))


# -- structure distribution -------------------------------------------------


def build_structure_distribution(g: ProcessGraph) -> dict[float, Hyperfunction]:
    by_order: dict[float, list] = defaultdict(list)
    for t in g.tasks:
        for c in t.coefficients:
            by_order[t.order].append(core.interval(c.p, c.r, coeff=c.psi))
    return {o: Hyperfunction(tuple(terms)) for o, terms in sorted(by_order.items())}


def distribution_mass(hf: Hyperfunction) -> float:
    """Integral of a structure distribution over the whole label axis, taken
    from its antiderivative evaluated outside all breakpoints."""
    pts = hf.singular_points()
    if not pts:
        return 0.0
    lo, hi = pts[0] - 1.0, pts[-1] + 1.0
    anti = core.differintegrate(hf, -1)
    return (core.eval_closed(anti, hi) - core.eval_closed(anti, lo)).real


@dataclass(frozen=True)
class BinFrequency:
    lo: float
    hi: float
    exact: Fraction

    @property
    def total_frequency(self) -> float:
        return float(self.exact)


def bb_triangle(g: ProcessGraph, order_bins: Sequence[float]) -> list[BinFrequency]:
    """Total frequency per order bin ``[c_i, c_{i+1})`` (last bin closed).

    Masses are integrated exactly in rational arithmetic; the sum over bins
    equals the total psi mass of the graph with no rounding."""
    cuts = [float(c) for c in order_bins]
    if len(cuts) < 2 or any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise BadBins("bin cutpoints must be at least two strictly increasing values")
    totals = [Fraction(0)] * (len(cuts) - 1)
    for t in g.tasks:
        if not cuts[0] <= t.order <= cuts[-1]:
            raise BadBins(f"task {t.label} of order {t.order} falls outside the bins")
        idx = len(cuts) - 2
        for i in range(len(cuts) - 1):
            if cuts[i] <= t.order < cuts[i + 1]:
                idx = i
                break
        totals[idx] += sum((c.exact_mass for c in t.coefficients), Fraction(0))
    return [BinFrequency(cuts[i], cuts[i + 1], totals[i]) for i in range(len(totals))]


def total_mass(g: ProcessGraph) -> Fraction:
    return sum((c.exact_mass for t in g.tasks for c in t.coefficients), Fraction(0))


# -- abandonment, bottlenecks, knowledge ------------------------------------


def discounted_yield(task: Task, rate: float) -> float:
    return task.psi_mass * math.exp(-rate * task.delay)


def is_abandoned(task: Task, rate: float) -> bool:
    return discounted_yield(task, rate) < task.cross_section


def abandonment_order(tasks: Iterable[Task], rate_path: Sequence[float]) -> list[float]:
    """Labels of tasks abandoned along a rising rate path, earliest first.

    A task is abandoned at the first rate where its discounted psi mass
    (delay ``order - 1``) falls below its cross-section.  Tasks abandoned at
    the same step go higher specificity first, then by label.
    """
    tasks = list(tasks)
    if not tasks:
        raise EmptySet("abandonment needs at least one task")
    rates = [float(r) for r in rate_path]
    if any(b <= a for a, b in zip(rates, rates[1:])):
        raise NonpositiveRate("rate path must be strictly increasing")
    hits = []
    for t in tasks:
        for step, rate in enumerate(rates):
            if is_abandoned(t, rate):
                hits.append((step, -t.specificity, t.label))
                break
    return [label for _, _, label in sorted(hits)]


def find_bottleneck(g: ProcessGraph) -> float:
    if not g.path:
        raise EmptyPath("graph has no chosen path")
    best = g.path[0]
    best_cs = g.task(best).cross_section
    for x in g.path[1:]:
        cs = g.task(x).cross_section
        if cs < best_cs:
            best, best_cs = x, cs
    return best


@dataclass(frozen=True)
class ProductionRevenue:
    """Discounted psi mass delivered at order 1, per connected subprocess,
    capped by that subprocess's narrowest cross-section."""

    rate: float

    def __call__(self, g: ProcessGraph) -> float:
        total = 0.0
        for comp in g.components():
            if not any(t.order == 1 for t in comp):
                continue
            delivered = math.fsum(discounted_yield(t, self.rate) for t in comp)
            capacity = min(t.cross_section for t in comp)
            total += min(delivered, capacity)
        return total


def knowledge_marginal_product(g_before: ProcessGraph, g_after: ProcessGraph,
                               revenue_model: Callable[[ProcessGraph], float]) -> float:
    return revenue_model(g_after) - revenue_model(g_before)


# -- planning helpers used by the inflation experiment ---------------------


def order_levels(g: ProcessGraph) -> dict[float, tuple[float, float]]:
    """Per order: (total psi mass, total cross-section cost)."""
    out: dict[float, list[float]] = defaultdict(lambda: [0.0, 0.0])
    for t in g.tasks:
        out[t.order][0] += t.psi_mass
        out[t.order][1] += t.cross_section
    return {o: (m, c) for o, (m, c) in sorted(out.items())}


def profitable_depth(g: ProcessGraph, rate: float, horizon: float = math.inf) -> int:
    """Largest integer depth m such that every order level up to m yields more
    than it costs once discounted over its delay at ``rate``.  Levels are
    checked bottom-up; the chain stops at the first unprofitable level or at
    ``horizon + 1``."""
    if not rate > 0:
        raise NonpositiveRate(f"rate must be > 0, got {rate!r}")
    levels = order_levels(g)
    depth = 0
    for m in range(1, int(math.floor(g.max_order)) + 1):
        if m - 1 > horizon:
            break
        here = [(mass, cost) for o, (mass, cost) in levels.items() if m - 1 < o <= m]
        if not here:
            break
        mass = sum(x for x, _ in here)
        cost = sum(y for _, y in here)
        if mass * math.exp(-rate * (m - 1)) > cost:
            depth = m
        else:
            break
    return depth
