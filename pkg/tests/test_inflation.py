import json
import math

import numpy as np
import pytest

from hyperfn import inflation as inf
from hyperfn.errors import EpsilonTooLarge, InvalidConfig
from hyperfn.preference import Impulse, PreferenceSpec
from hyperfn.production import ProcessGraph, Task

from oracles import max_matching_bruteforce


def test_observed_rate():
    assert inf.observed_rate(0.05, 0) == 0.05
    assert inf.observed_rate(0.05, 0.01) == pytest.approx(0.04)
    with pytest.raises(EpsilonTooLarge):
        inf.observed_rate(0.05, 0.05)
    with pytest.raises(InvalidConfig):
        inf.observed_rate(0.05, -0.01)


def _ladder():
    # one task per order; deeper orders pay off only at low rates
    tasks = [Task(1.0, 1.0, ((0, 0.0, 1.0, 2.0),))]
    for o, psi in ((2, 1.06), (3, 1.09), (4, 1.11)):
        tasks.append(Task(float(o), float(o), ((0, 0.0, 1.0, psi),)))
    edges = [(4.0, 3.0), (3.0, 2.0), (2.0, 1.0)]
    return ProcessGraph(tuple(tasks), tuple(edges), (0.0, 1.0), (4.0, 3.0, 2.0, 1.0))


def test_producer_plan():
    g = _ladder()
    base = inf.producer_plan(g, 0.05)
    assert inf.producer_plan(g, 0.05) == base
    lower = inf.producer_plan(g, 0.02)
    assert lower.max_order >= base.max_order
    deepest = inf.producer_plan(g, 1e-6)
    assert deepest.max_order == g.max_order
    depths = [inf.producer_plan(g, r).max_order for r in (0.08, 0.05, 0.03, 0.02, 0.01, 0.001)]
    assert depths == sorted(depths)


def test_matching_example():
    edges = {("g1", "b1"), ("g1", "b2"), ("g2", "b2"), ("g2", "b3")}
    m = inf.max_matching(["g1", "g2", "g3"], ["b1", "b2", "b3"], edges)
    assert len(m) == 2
    assert {g for g, _ in m} == {"g1", "g2"}


def test_matching_vs_bruteforce():
    rng = np.random.default_rng(21)
    for _ in range(300):
        n, m = int(rng.integers(0, 7)), int(rng.integers(0, 7))
        goods = [f"g{i}" for i in range(n)]
        buyers = [f"b{i}" for i in range(m)]
        edges = {(g, b) for g in goods for b in buyers if rng.random() < 0.35}
        got = inf.max_matching(goods, buyers, edges)
        assert len(got) == max_matching_bruteforce(goods, buyers, edges)
        assert all(e in edges for e in got)
        assert len({g for g, _ in got}) == len({b for _, b in got}) == len(got)


def test_realize_demand_incompatible_good():
    spec = PreferenceSpec((Impulse(1, 2, 5.0), Impulse(3, 4, 4.0)))
    consumers = [inf.Consumer(spec, 0.05) for _ in range(3)]
    goods = [inf.Good("a", 1.5, 0), inf.Good("b", 3.5, 0), inf.Good("c", 9.0, 0)]
    rep = inf.realize_demand(consumers, goods)
    assert rep.exchange_count == 2
    assert rep.glut_labels == {"c"}
    assert len(rep.shortage_labels) == 1
    # conservation on both sides
    assert rep.exchange_count + len(rep.glut_labels) == rep.goods_count
    assert rep.exchange_count + len(rep.shortage_labels) == rep.buyer_count
    assert rep.exchange_count <= min(rep.goods_count, rep.buyer_count)


def test_empty_market():
    spec = PreferenceSpec((Impulse(1, 2, 5.0),))
    rep = inf.realize_demand([inf.Consumer(spec, 0.05)], [])
    assert rep.exchange_count == 0 and rep.glut_labels == frozenset()


def test_true_rate_judges_delayed_goods():
    spec = PreferenceSpec((Impulse(1, 2, 10.0),))
    c = inf.Consumer(spec, 0.05, outside=5.0)
    near = inf.Good("near", 1.5, 1.0)
    far = inf.Good("far", 1.5, 20.0)
    assert inf.willing(c, near)
    # the outside label sits outside every impulse, so any positive discounted value wins
    assert inf.willing(c, far)
    picky = inf.Consumer(PreferenceSpec((Impulse(1, 2, 10.0), Impulse(5, 6, 9.0))), 0.05, outside=5.5)
    assert inf.willing(picky, near)
    assert not inf.willing(picky, inf.Good("late", 1.5, 3.0))


def test_compatible_plan_clears():
    cfg = inf.load_demo_config()
    out = inf.run_market(cfg, 0.0)
    (rep,) = out.reports
    assert rep.glut_labels == frozenset() and rep.shortage_labels == frozenset()


def test_zero_inflation_fixed_point_and_determinism():
    cfg = inf.load_demo_config()
    a, b = inf.run_market(cfg, 0.0), inf.run_market(cfg, 0.0)
    assert a == b
    assert repr(a.reports) == repr(b.reports)


def test_noisy_rounds_are_reproducible():
    cfg = inf.load_demo_config()
    noisy = inf.MarketConfig(cfg.consumers, cfg.producers, 0.0, seed=7, rounds=5, rho_noise=0.05)
    r1 = inf.sensitivity_sweep(noisy, [0, 0.005, 0.01])
    r2 = inf.sensitivity_sweep(noisy, [0, 0.005, 0.01], threads=3)
    assert [(p.epsilon, p.welfare, p.drop_ratio) for p in r1.points] == \
           [(p.epsilon, p.welfare, p.drop_ratio) for p in r2.points]


def test_demo_sweep_harm_and_nonproportionality():
    cfg = inf.load_demo_config()
    eps = [0, 0.001, 0.005, 0.01, 0.02, 0.03, 0.04]
    res = inf.sensitivity_sweep(cfg, eps)
    w0 = res.points[0].welfare
    assert res.points[0].drop_ratio == 0
    assert all(p.welfare < w0 for p in res.points[1:])
    assert res.nonproportional
    assert res.points[1].nonproportional


def test_monotone_harm_has_nondecreasing_drops():
    # one order-1 producer: nothing can be lengthened, so harm stays flat
    spec = PreferenceSpec((Impulse(1, 2, 10.0),))
    g = ProcessGraph((Task(1.0, 1.0, ((0, 0.0, 1.0, 2.0),)),))
    cfg = inf.MarketConfig((inf.Consumer(spec, 0.05),), (inf.Producer(g),))
    res = inf.sensitivity_sweep(cfg, [0, 0.01, 0.02])
    drops = [(res.points[0].welfare - p.welfare) for p in res.points]
    assert drops == sorted(drops)


def test_sweep_preconditions():
    cfg = inf.load_demo_config()
    with pytest.raises(InvalidConfig):
        inf.sensitivity_sweep(cfg, [0.01, 0.02])
    with pytest.raises(InvalidConfig):
        inf.sensitivity_sweep(cfg, [0, 0.02, 0.01])
    with pytest.raises(EpsilonTooLarge):
        inf.sensitivity_sweep(cfg, [0, 0.06])


def test_config_json():
    with open(inf.demo_config_path()) as fh:
        doc = json.load(fh)
    cfg = inf.MarketConfig.from_dict(doc)
    assert cfg.seed == doc["seed"]
    with pytest.raises(InvalidConfig):
        inf.MarketConfig.from_dict({"consumers": []})
    with pytest.raises(InvalidConfig):
        inf.MarketConfig(cfg.consumers, cfg.producers, rounds=0)
    assert cfg.producers[0].planning_horizon == doc["producers"][0].get("planning_horizon", math.inf)
