from __future__ import annotations

import json
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramseymult import search
from ramseymult.blowup import BlowupObjective, cost
from ramseymult.graphs import Graph, is_isomorphic
from ramseymult.groups import FiniteGroup, cyclic_group, direct_product_group
from ramseymult.named import ramsey13

G45 = BlowupObjective(4, 5, lam=Fraction(10**6))


def scratch(space, obj, state):
    return cost(space.decode(state), obj)


def test_graph_space_layout():
    sp = search.GraphSpace(4)
    assert sp.N == 6
    assert sp.decode((1 << 6) - 1) == Graph.complete(4)
    g = Graph.cycle(4)
    assert sp.decode(sp.encode(g)) == g


def test_cayley_space_bits():
    sp = search.CayleySpace(cyclic_group(13))
    assert sp.N == 6
    sp2 = search.CayleySpace(direct_product_group([2, 2]))
    assert sp2.N == 3
    for state in range(1 << sp.N):
        g = sp.decode(state)
        assert not g.loops


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2 ** 21 - 1), st.integers(2, 4), st.integers(2, 4), st.data())
def test_graph_delta_matches_scratch(n, raw, s, t, data):
    sp = search.GraphSpace(n)
    state = raw & ((1 << sp.N) - 1)
    obj = BlowupObjective(s, t, lam=Fraction(data.draw(st.integers(1, 5))))
    cache = sp.evaluator(obj, state)
    for _ in range(5):
        i = data.draw(st.integers(0, sp.N - 1))
        d = search.delta_cost(sp, state, i, obj, cache)
        assert d == scratch(sp, obj, state ^ (1 << i)) - scratch(sp, obj, state)
        cache.apply(i)
        state ^= 1 << i
        assert cache.cost == scratch(sp, obj, state)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([5, 7, 8, 9, 12, 13]), st.integers(0, 63), st.data())
def test_cayley_delta_matches_scratch(order, raw, data):
    sp = search.CayleySpace(cyclic_group(order))
    state = raw & ((1 << sp.N) - 1)
    obj = BlowupObjective(3, 4)
    cache = sp.evaluator(obj, state)
    for _ in range(4):
        i = data.draw(st.integers(0, sp.N - 1))
        d = search.delta_cost(sp, state, i, obj, cache)
        assert d == scratch(sp, obj, state ^ (1 << i)) - scratch(sp, obj, state)
        cache.apply(i)
        state ^= 1 << i


def test_delta_examples():
    obj = BlowupObjective(3, 3)
    sp = search.GraphSpace(4)
    cache = sp.evaluator(obj, 0)
    assert search.delta_cost(sp, 0, 0, obj, cache) == scratch(sp, obj, 1) - scratch(sp, obj, 0)
    full = (1 << 6) - 1
    cache = sp.evaluator(obj, full)
    assert search.delta_cost(sp, full, 2, obj, cache) == scratch(sp, obj, full ^ 4) - scratch(sp, obj, full)


def test_stale_cache_detected():
    obj = BlowupObjective(3, 3)
    sp = search.GraphSpace(4)
    cache = sp.evaluator(obj, 0)
    with pytest.raises(search.StaleCacheError):
        search.delta_cost(sp, 5, 0, obj, cache)


def test_exhaustive_z13_is_ramsey13():
    sp = search.CayleySpace(cyclic_group(13))
    res = search.exhaustive_search(sp, G45)
    assert res.cost == Fraction(29, 2197)
    assert is_isomorphic(sp.decode(res.state), ramsey13())


def test_exhaustive_matches_brute_minimum():
    sp = search.GraphSpace(4)
    obj = BlowupObjective(3, 3)
    res = search.exhaustive_search(sp, obj)
    assert res.cost == min(scratch(sp, obj, s) for s in range(1 << sp.N)) == Fraction(1, 4)


def test_exhaustive_cap():
    with pytest.raises(ValueError):
        search.exhaustive_search(search.GraphSpace(8), G45)


def test_tabu_from_every_start_z13():
    sp = search.CayleySpace(cyclic_group(13))
    for init in range(64):
        res = search.tabu_search(sp, G45, search.Schedule(iterations=500, tabu_len=3, initial=init))
        assert res.cost == Fraction(29, 2197)


def test_tabu_is_deterministic_and_prefers_low_bits():
    sp = search.GraphSpace(5)
    obj = BlowupObjective(3, 3)
    sched = search.Schedule(iterations=50, initial=0)
    a = search.tabu_search(sp, obj, sched)
    b = search.tabu_search(sp, obj, sched)
    assert a.trace == b.trace
    # from the empty graph every first move is an equally good edge insertion
    assert a.trace[0][1] == 0


def test_tabu_releases_when_everything_is_tabu():
    sp = search.CayleySpace(cyclic_group(5))
    res = search.tabu_search(sp, BlowupObjective(3, 3), search.Schedule(iterations=10, tabu_len=5, initial=0))
    assert len(res.trace) == 10


def test_sa_deterministic_and_best_visited():
    sp = search.GraphSpace(5)
    obj = BlowupObjective(3, 3)
    sched = search.Schedule(iterations=300, seed=7)
    a = search.simulated_annealing(sp, obj, sched)
    b = search.simulated_annealing(sp, obj, sched)
    assert (a.state, a.cost, a.trace) == (b.state, b.cost, b.trace)
    assert a.cost == min([scratch(sp, obj, a.initial)] + [c for *_, c in a.trace])
    assert a.cost == scratch(sp, obj, a.state)


def test_sa_infinite_temperature_is_uniform_walk():
    sp = search.GraphSpace(3)  # N = 3
    obj = BlowupObjective(3, 3)
    counts: Counter = Counter()
    for seed in range(2000):
        res = search.simulated_annealing(sp, obj, search.Schedule(iterations=5, temperatures=(1e300,) * 5, seed=seed))
        assert all(acc for _, _, acc, _ in res.trace)
        counts.update(b for _, b, _, _ in res.trace)
    total = sum(counts.values())
    for b in range(3):
        assert abs(counts[b] / total - 1 / 3) < 0.02


def test_sa_cold_accepts_only_improvements():
    sp = search.GraphSpace(5)
    obj = BlowupObjective(3, 3)
    res = search.simulated_annealing(sp, obj, search.Schedule(iterations=200, temperatures=(1e-12,) * 200, seed=3))
    prev = scratch(sp, obj, res.initial)
    for _, _, acc, c in res.trace:
        assert c <= prev
        prev = c


def test_rejection_free_runs():
    sp = search.CayleySpace(cyclic_group(13))
    res = search.simulated_annealing(sp, G45, search.Schedule(iterations=200, rejection_free=True, seed=1))
    assert res.cost == scratch(sp, G45, res.state)


def test_schedule_validation():
    assert search.Schedule(iterations=4, t0=1.0).temps() == [1.0, 0.75, 0.5, 0.25]
    with pytest.raises(ValueError):
        search.Schedule(iterations=2, temperatures=(1.0, 2.0)).temps()


def test_parallel_restarts_independent_of_threads():
    sp = search.CayleySpace(cyclic_group(13))
    sched = search.Schedule(iterations=100, seed=11)
    a, ra = search.parallel_restarts(sp, G45, sched, 6, "sa", threads=1)
    b, rb = search.parallel_restarts(sp, G45, sched, 6, "sa", threads=4)
    assert (a.state, a.cost) == (b.state, b.cost)
    assert [r.state for r in ra] == [r.state for r in rb]


def test_run_log_and_checkpoint(tmp_path):
    sp = search.CayleySpace(cyclic_group(13))
    log = search.RunLog(tmp_path / "run.jsonl")
    res = search.tabu_search(sp, G45, search.Schedule(iterations=50, seed=2), log)
    lines = [json.loads(x) for x in (tmp_path / "run.jsonl").read_text().splitlines()]
    costs = [Fraction(x["cost"]) for x in lines]
    assert costs == sorted(costs, reverse=True) and costs[-1] == res.cost
    search.write_checkpoint(tmp_path / "ck.json", sp, res)
    assert search.read_checkpoint(tmp_path / "ck.json") == res.state


def test_thread_cap_env(monkeypatch):
    monkeypatch.setenv(search.THREADS_ENV, "3")
    assert search.thread_cap() == 3
    assert search.thread_cap(5) == 5


def test_nonabelian_cayley_space():
    import itertools
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(a[b[x]] for x in range(3))] for b in perms] for a in perms]
    sp = search.CayleySpace(FiniteGroup(table))
    assert sp.N == 4
    obj = BlowupObjective(3, 3)
    cache = sp.evaluator(obj, 0)
    for i in range(sp.N):
        assert search.delta_cost(sp, 0, i, obj, cache) == scratch(sp, obj, 1 << i) - scratch(sp, obj, 0)
