from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from ramseymult import xorprod
from ramseymult.blowup import blowup_density_pair
from ramseymult.graphs import Graph, is_isomorphic, looped_complement


def brute_pattern(g: Graph, t: int) -> list[int]:
    pairs = xorprod.pair_order(t)
    out = [0] * (1 << len(pairs))
    for f in itertools.product(range(g.n), repeat=t):
        p = 0
        for e, (i, j) in enumerate(pairs):
            a, b = f[i], f[j]
            if (a == b and g.has_loop(a)) or (a != b and g.has_edge(a, b)):
                p |= 1 << e
        out[p] += 1
    return out


@settings(max_examples=50, deadline=None)
@given(graphs(min_n=1, max_n=4, loops=True), st.integers(1, 4))
def test_pattern_vector_matches_enumeration(g, t):
    assert list(xorprod.pattern_vector(g, t).entries) == brute_pattern(g, t)


@settings(max_examples=50, deadline=None)
@given(graphs(min_n=1, max_n=4, loops=True), graphs(min_n=1, max_n=4, loops=True), st.integers(1, 4))
def test_compose_equals_product_vector(a, b, t):
    direct = xorprod.pattern_vector(xorprod.xor_product(a, b), t)
    assert xorprod.compose(xorprod.pattern_vector(a, t), xorprod.pattern_vector(b, t)) == direct


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=3, loops=True), graphs(min_n=1, max_n=3, loops=True),
       graphs(min_n=1, max_n=3, loops=True), st.integers(2, 3))
def test_compose_commutative_associative(a, b, c, t):
    va, vb, vc = (xorprod.pattern_vector(x, t) for x in (a, b, c))
    assert xorprod.compose(va, vb) == xorprod.compose(vb, va)
    assert xorprod.compose(xorprod.compose(va, vb), vc) == xorprod.compose(va, xorprod.compose(vb, vc))
    assert xorprod.compose_all([va, vb, vc]) == xorprod.compose(va, xorprod.compose(vb, vc))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=16, max_size=16))
def test_walsh_hadamard_round_trip(v):
    assert xorprod.ifwht(xorprod.fwht(v)) == v


def test_ifwht_rejects_non_integral():
    with pytest.raises(ArithmeticError):
        xorprod.ifwht([1, 0])


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=4, loops=True), st.integers(1, 4))
def test_looped_complement_reverses_patterns(g, t):
    v = xorprod.pattern_vector(g, t)
    w = xorprod.pattern_vector(looped_complement(g), t)
    assert all(w.entries[p] == v.entries[v.full ^ p] for p in range(len(v.entries)))


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=1, max_n=3, loops=True), graphs(min_n=1, max_n=3, loops=True))
def test_mono_density_matches_blowup_of_product(a, b):
    assert xorprod.mono_density_parts([a, b], 3, 3) == blowup_density_pair(xorprod.xor_product(a, b), 3, 3)


def test_k2_squared_is_c4():
    assert is_isomorphic(xorprod.xor_product(Graph.complete(2), Graph.complete(2)), Graph.cycle(4))


def test_c5_construction_value():
    M = Graph.perfect_matching(4)
    value = xorprod.mono_density_of_product([Graph.complete(3), M, M, M], 5, 5)
    assert value == Fraction(36499, 21233664)
    assert value < Fraction(1730, 10**6)


def test_pattern_cap():
    with pytest.raises(ValueError):
        xorprod.pattern_vector(Graph.complete(2), 6)
