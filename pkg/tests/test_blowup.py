from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from oracles import hom_count, weighted_hom
from ramseymult import blowup
from ramseymult.graphs import Graph, complement, count_cliques, is_isomorphic, looped_complement
from ramseymult.named import goodman_gadget, ramsey13, schlaefli


def test_stirling_and_falling():
    assert [blowup.stirling2(4, j) for j in range(5)] == [0, 1, 7, 6, 1]
    assert blowup.stirling2(0, 0) == 1
    assert blowup.falling(5, 2) == 20
    with pytest.raises(ValueError):
        blowup.stirling2(17, 3)


def test_headline_values():
    assert blowup.blowup_density_pair(Graph.complete(2), 3, 3) == (Fraction(1, 4), 0)
    assert blowup.blowup_density_pair(schlaefli(), 3, 4) == (Fraction(41, 729), Fraction(320, 6561))
    assert blowup.cost(complement(schlaefli()), blowup.BlowupObjective(5, 3)) == Fraction(24011, 531441)
    assert blowup.blowup_density_pair(ramsey13(), 4, 5)[0] == Fraction(29, 2197)
    assert blowup.blowup_density_pair(ramsey13(), 5, 5)[0] == Fraction(61, 28561)
    assert blowup.blowup_density_pair(looped_complement(Graph.cycle(5)), 3, 4) == (0, Fraction(3, 25))
    assert blowup.blowup_density_pair(Graph.complete(3), 3, 4) == (Fraction(1, 9), 0)


def test_weights_validation():
    with pytest.raises(blowup.WeightError):
        blowup.check_weights([Fraction(1, 2)], 1)
    with pytest.raises(blowup.WeightError):
        blowup.check_weights([Fraction(3, 2), Fraction(-1, 2)], 2)
    with pytest.raises(blowup.WeightError):
        blowup.check_weights([Fraction(1)], 2)


def test_objective_validation():
    with pytest.raises(ValueError):
        blowup.BlowupObjective(1, 3)
    obj = blowup.BlowupObjective(3, 3, Fraction(2), Fraction(1), Fraction(5))
    assert obj.combine(Fraction(1), Fraction(1)) == 7


def test_goodman_gadget_line():
    for k in range(11):
        b = Fraction(k, 20)
        a = Fraction(1, 2) - b
        x, y = blowup.blowup_density_pair(goodman_gadget(), 3, 3, (a, a, b, b))
        assert x + y == Fraction(1, 4)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=4, loops=True), st.integers(1, 4), st.integers(1, 3))
def test_materialized_blowup_is_multiplicative(g, t, m):
    big = blowup.materialize_blowup(g, m, keep_loops=True)
    assert hom_count(big, t) == m ** t * hom_count(g, t)
    assert blowup.hom_clique_weight(t, g) * g.n ** t == hom_count(g, t)


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=4, loops=True), st.integers(1, 4), st.data())
def test_weighted_formula_matches_enumeration(g, t, data):
    raw = data.draw(st.lists(st.integers(1, 6), min_size=g.n, max_size=g.n))
    w = [Fraction(r, sum(raw)) for r in raw]
    assert blowup.hom_clique_weight(t, g, w) == weighted_hom(g, t, w)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=5), st.integers(1, 5))
def test_stirling_identity_on_looped_complement(g, t):
    lhs = blowup.hom_clique_weight(t, looped_complement(g)) * g.n ** t
    rhs = sum(math.factorial(j) * blowup.stirling2(t, j) * count_cliques(complement(g), j) for j in range(1, t + 1))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=5, loops=True), st.integers(2, 4), st.data())
def test_density_invariant_under_relabelling(g, t, data):
    perm = data.draw(st.permutations(list(range(g.n))))
    assert blowup.hom_clique_weight(t, g) == blowup.hom_clique_weight(t, g.relabel(perm))


def test_zero_weight_vertex_is_deleted():
    g = Graph.from_edges(3, [(0, 1), (1, 2)], [2])
    w = (Fraction(1, 2), Fraction(1, 2), Fraction(0))
    h = g.induced([0, 1])
    assert blowup.hom_clique_weight(3, g, w) == blowup.hom_clique_weight(3, h, w[:2])


def test_optimize_weights_on_k2_is_uniform():
    res = blowup.optimize_weights(Graph.complete(2), blowup.BlowupObjective(3, 3))
    assert res.value == Fraction(1, 4)
    assert res.value <= res.uniform_value


def test_optimize_weights_improves_path():
    g = Graph.path(3)
    obj = blowup.BlowupObjective(3, 3)
    res = blowup.optimize_weights(g, obj, restarts=1)
    assert res.value <= res.uniform_value
    assert sum(res.weights) == 1


def test_materialize_shape():
    g = blowup.materialize_blowup(Graph.complete(2), 3, keep_loops=False)
    assert g.n == 6 and is_isomorphic(g, Graph.from_edges(6, [(i, j) for i in range(3) for j in range(3, 6)]))
