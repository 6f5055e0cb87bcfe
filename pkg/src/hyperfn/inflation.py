"""Plan-then-realize market under a distorted interest rate.

One cycle:

1. The true market rate is the mean of the consumers' personal rates.
   Producers only see ``observed = true - epsilon``.
2. Each producer keeps every order level its graph can profitably sustain
   at the observed rate (:func:`producer_plan`).
3. Real savings are unchanged by the distortion: the pool of resources is
   the total cost of the plans producers would have made at the true rate.
   Longer chains start earlier and draw on the pool first; lines that find
   it exhausted are never completed.
4. Each completed line delivers one first-order good carrying its task
   label, ``order - 1`` periods later.  Consumers judge goods with their own
   preferences and their true rate; welfare is the size of a maximum
   goods-to-buyers matching.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import EpsilonTooLarge, InvalidConfig, Tie
from .preference import PreferenceSpec, build_preference, choose, value_at
from .production import ProcessGraph, discount_factor, profitable_depth


@dataclass(frozen=True)
class Consumer:
    pref: PreferenceSpec
    true_rho: float
    # label of the outside option (money held); None ranks it at 0
    outside: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.true_rho) and self.true_rho > 0):
            raise InvalidConfig(f"true_rho must be > 0, got {self.true_rho!r}")


@dataclass(frozen=True)
class Producer:
    graph: ProcessGraph
    planning_horizon: float = math.inf


@dataclass(frozen=True)
class MarketConfig:
    consumers: tuple[Consumer, ...]
    producers: tuple[Producer, ...]
    inflation_epsilon: float = 0.0
    seed: int = 0
    rounds: int = 1
    # multiplicative log-normal jitter of each consumer's rate per round
    rho_noise: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "consumers", tuple(self.consumers))
        object.__setattr__(self, "producers", tuple(self.producers))
        if not self.consumers or not self.producers:
            raise InvalidConfig("need at least one consumer and one producer")
        if self.rounds < 1:
            raise InvalidConfig("rounds must be >= 1")
        if self.inflation_epsilon < 0:
            raise InvalidConfig("inflation_epsilon must be >= 0")
        if self.rho_noise < 0:
            raise InvalidConfig("rho_noise must be >= 0")

    @classmethod
    def from_dict(cls, d: dict) -> "MarketConfig":
        try:
            consumers = tuple(
                Consumer(PreferenceSpec.from_dict(c["pref"]), float(c["true_rho"]),
                         None if c.get("outside") is None else float(c["outside"]))
                for c in d["consumers"]
            )
            producers = tuple(
                Producer(ProcessGraph.from_dict(p["graph"]),
                         float(p.get("planning_horizon", math.inf)))
                for p in d["producers"]
            )
            return cls(consumers, producers, float(d.get("inflation_epsilon", 0.0)),
                       int(d.get("seed", 0)), int(d.get("rounds", 1)), float(d.get("rho_noise", 0.0)))
        except (KeyError, TypeError) as exc:
            raise InvalidConfig(f"malformed market config: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "MarketConfig":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Good:
    id: str
    label: float
    delay: float
    cost: float = 0.0


@dataclass(frozen=True)
class WelfareReport:
    exchange_count: int = 0
    glut_labels: frozenset = frozenset()
    shortage_labels: frozenset = frozenset()
    disconnected_components: int = 0
    goods_count: int = 0
    buyer_count: int = 0
    matching: tuple[tuple[str, str], ...] = ()

    def to_dict(self) -> dict:
        return {
            "exchange_count": self.exchange_count,
            "glut_labels": sorted(self.glut_labels),
            "shortage_labels": sorted(self.shortage_labels),
            "disconnected_components": self.disconnected_components,
            "goods_count": self.goods_count,
            "buyer_count": self.buyer_count,
            "matching": [list(m) for m in self.matching],
        }


def observed_rate(true_rate: float, epsilon: float) -> float:
    if not true_rate > 0:
        raise InvalidConfig(f"true rate must be > 0, got {true_rate!r}")
    if epsilon < 0:
        raise InvalidConfig(f"epsilon must be >= 0, got {epsilon!r}")
    if epsilon >= true_rate:
        raise EpsilonTooLarge(f"epsilon {epsilon!r} would push the rate {true_rate!r} to <= 0")
    return true_rate - epsilon


def producer_plan(graph: ProcessGraph, observed: float, horizon: float = math.inf) -> ProcessGraph:
    return graph.restrict(profitable_depth(graph, observed, horizon))


# -- matching --------------------------------------------------------------


def max_matching(goods: Sequence[str], buyers: Sequence[str],
                 edges: set[tuple[str, str]]) -> list[tuple[str, str]]:
    """Maximum bipartite matching by augmenting paths.

    Goods are processed in sorted order and each good tries buyers in sorted
    order, so ties resolve lexicographically and the result is reproducible.
    """
    adj = {g: sorted(b for gg, b in edges if gg == g) for g in goods}
    owner: dict[str, str] = {}

    def augment(g, seen):
        for b in adj[g]:
            if b in seen:
                continue
            seen.add(b)
            if b not in owner or augment(owner[b], seen):
                owner[b] = g
                return True
        return False

    for g in sorted(goods):
        augment(g, set())
    return sorted((g, b) for b, g in owner.items())


@lru_cache(maxsize=1024)
def _hierarchy(spec: PreferenceSpec):
    return build_preference(spec)


def willing(consumer: Consumer, good: Good, rho: float | None = None) -> bool:
    """Does the consumer take the good over the outside option?

    The good must outrank the outside option, and still exceed it once its
    ranking index is discounted at the consumer's own rate over the delay."""
    rho = consumer.true_rho if rho is None else rho
    pref = _hierarchy(consumer.pref)
    if consumer.outside is None:
        v_out = 0.0
    else:
        if good.label == consumer.outside:
            return False
        try:
            if choose(pref, good.label, consumer.outside) != good.label:
                return False
        except Tie:
            return False
        v_out = value_at(pref, consumer.outside)
    v = value_at(pref, good.label)
    discounted = v * discount_factor(rho, 0.0, good.delay) if good.delay > 0 else v
    return discounted > v_out


def realize_demand(consumers: Sequence[Consumer], goods: Sequence[Good],
                   true_rhos: Sequence[float] | None = None) -> WelfareReport:
    if true_rhos is None:
        true_rhos = [c.true_rho for c in consumers]
    buyers = [f"c{i:03d}" for i in range(len(consumers))]
    good_ids = [g.id for g in goods]
    if len(set(good_ids)) != len(good_ids):
        raise InvalidConfig("good ids must be unique")
    edges = set()
    for g in goods:
        for bid, c, rho in zip(buyers, consumers, true_rhos):
            if willing(c, g, rho):
                edges.add((g.id, bid))
    matching = max_matching(good_ids, buyers, edges)
    matched_goods = {g for g, _ in matching}
    matched_buyers = {b for _, b in matching}

    # isolated clusters: identical goods form one cluster, each buyer its own
    label_of = {g.id: g.label for g in goods}
    linked_labels = {label_of[g] for g, _ in edges}
    linked_buyers = {b for _, b in edges}
    isolated = len({g.label for g in goods} - linked_labels) + len(set(buyers) - linked_buyers)

    return WelfareReport(
        exchange_count=len(matching),
        glut_labels=frozenset(set(good_ids) - matched_goods),
        shortage_labels=frozenset(set(buyers) - matched_buyers),
        disconnected_components=isolated,
        goods_count=len(goods),
        buyer_count=len(buyers),
        matching=tuple(matching),
    )


# -- one market cycle ------------------------------------------------------


def _round_rhos(config: MarketConfig, rng: np.random.Generator) -> list[float]:
    base = np.array([c.true_rho for c in config.consumers])
    if config.rho_noise == 0:
        return [float(r) for r in base]
    noise = rng.normal(size=len(base))
    return [float(r) for r in base * np.exp(config.rho_noise * noise)]


def plan_market(config: MarketConfig, rhos: Sequence[float], epsilon: float) -> list[Good]:
    """Goods delivered when producers plan at ``mean(rhos) - epsilon``."""
    true_rate = float(np.mean(rhos))
    observed = observed_rate(true_rate, epsilon)
    baseline = [producer_plan(p.graph, true_rate, p.planning_horizon) for p in config.producers]
    pool = math.fsum(t.cross_section for plan in baseline for t in plan.tasks)

    lines = []
    for i, p in enumerate(config.producers):
        plan = baseline[i] if epsilon == 0 else producer_plan(p.graph, observed, p.planning_horizon)
        for t in plan.tasks:
            lines.append((-t.delay, i, t.label, t))
    lines.sort(key=lambda item: item[:3])

    goods, left = [], pool
    for _, i, label, t in lines:
        # tolerate round-off so the undistorted plan is always fully funded
        if t.cross_section <= left + 1e-9 * pool:
            left -= t.cross_section
            goods.append(Good(f"p{i:02d}:{label!r}", label, t.delay, t.cross_section))
    return goods


@dataclass(frozen=True)
class MarketOutcome:
    epsilon: float
    welfare: int
    reports: tuple[WelfareReport, ...]


def run_market(config: MarketConfig, epsilon: float | None = None) -> MarketOutcome:
    """Play ``config.rounds`` cycles.  Round ``k`` draws from the ``k``-th
    child of the master seed, so every epsilon sees the same draws."""
    eps = config.inflation_epsilon if epsilon is None else float(epsilon)
    children = np.random.SeedSequence(config.seed).spawn(config.rounds)
    reports = []
    for child in children:
        rng = np.random.default_rng(child)
        rhos = _round_rhos(config, rng)
        goods = plan_market(config, rhos, eps)
        reports.append(realize_demand(config.consumers, goods, rhos))
    return MarketOutcome(eps, sum(r.exchange_count for r in reports), tuple(reports))


# -- sensitivity sweep -----------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    epsilon: float
    welfare: int
    drop_ratio: float
    nonproportional: bool
    outcome: MarketOutcome


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]

    @property
    def nonproportional(self) -> bool:
        return any(p.nonproportional for p in self.points)

    @property
    def welfare(self) -> list[int]:
        return [p.welfare for p in self.points]


EPS_MIN = 1e-12


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("HYPERFN_THREADS", "1")))
    except ValueError:
        return 1


def sensitivity_sweep(config: MarketConfig, epsilons: Sequence[float],
                      threads: int | None = None) -> SweepResult:
    """Welfare across inflation impulses.

    ``drop_ratio = (W(0) - W(eps)) / W(0) / max(eps, EPS_MIN)``: relative
    welfare lost per unit of rate distortion.  A point is flagged
    nonproportional when a larger epsilon later in the sweep has a strictly
    smaller ratio, i.e. harm grows less than in proportion.
    """
    eps = [float(e) for e in epsilons]
    if not eps or eps[0] != 0.0:
        raise InvalidConfig("epsilons must start at 0")
    if any(b < a for a, b in zip(eps, eps[1:])):
        raise InvalidConfig("epsilons must be sorted ascending")
    workers = threads or _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda e: run_market(config, e), eps))
    else:
        outcomes = [run_market(config, e) for e in eps]

    w0 = outcomes[0].welfare
    ratios = []
    for e, o in zip(eps, outcomes):
        if w0 == 0 or e == 0:
            ratios.append(0.0)
        else:
            ratios.append((w0 - o.welfare) / w0 / max(e, EPS_MIN))
    points = []
    for i, (e, o, r) in enumerate(zip(eps, outcomes, ratios)):
        flag = r > 0 and any(
            eps[j] > e and ratios[j] < r * (1 - 1e-12) for j in range(i + 1, len(eps))
        )
        points.append(SweepPoint(e, o.welfare, r, flag, o))
    return SweepResult(tuple(points))


def demo_config_path() -> str:
    return os.path.join(os.path.dirname(__file__), "data", "demo_market.json")


def load_demo_config() -> MarketConfig:
    with open(demo_config_path()) as fh:
        return MarketConfig.from_json(fh.read())
