from __future__ import annotations

import itertools
import math
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from oracles import induced_density
from ramseymult import flags
from ramseymult.graphs import Graph, enumerate_graphs

DATA = Path(__file__).parent / "data"


def test_flag_counts():
    one = flags.flag_type(Graph.empty(1))
    assert len(flags.enumerate_flags(one, 2)) == 2
    assert len(flags.enumerate_flags(one, 3)) == 6
    assert len(flags.enumerate_flags(flags.flag_type(Graph.empty(0)), 3)) == 4
    edge = flags.flag_type(Graph.complete(2))
    assert len(flags.enumerate_flags(edge, 3)) == 4


def test_flags_respect_forbidden():
    one = flags.flag_type(Graph.empty(1))
    assert len(flags.enumerate_flags(one, 3, [Graph.complete(3)])) == 5


def test_toy_certificate_bound_and_sharp():
    rep = flags.verify_certificate(flags.FlagCertificate.load(DATA / "toy_c3.json"))
    assert rep.bound == Fraction(1, 4)
    assert len(rep.sharp()) == 4 == len(rep.rows)
    assert all(r.slack >= 0 for r in rep.rows)


def test_zero_q_certificate_gives_trivial_bound():
    cert = flags.FlagCertificate.load(DATA / "zero_q_c3.json")
    rep = flags.verify_certificate(cert)
    values = {H: cert.objective.value(H) for H in enumerate_graphs(3)}
    assert rep.bound == min(values.values()) == 0
    assert set(rep.sharp()) == {H for H, v in values.items() if v == 0}


def test_not_psd_reports_witness():
    cert = flags.FlagCertificate.load(DATA / "not_psd.json")
    with pytest.raises(flags.VerificationFailure) as exc:
        flags.verify_certificate(cert)
    w = exc.value.witness
    Q = cert.Q[0]
    assert sum(w[i] * Q[i][j] * w[j] for i in range(2) for j in range(2)) < 0


def test_toy_invariant_under_flag_order():
    cert = flags.toy_certificate()
    cert.flags[0].reverse()
    q = cert.Q[0]
    cert.Q[0] = [[q[1][1], q[1][0]], [q[0][1], q[0][0]]]
    assert flags.verify_certificate(cert).bound == Fraction(1, 4)


def test_trivial_bounds_goodman():
    empty = flags.FlagCertificate(0, [], flags.CliqueObjective(3, 3), [], [], [])
    got = []
    for m in range(3, 7):
        empty.m = m
        got.append(flags.verify_certificate(empty).bound)
    assert got == [0, 0, 0, Fraction(1, 10)]


def test_structure_errors():
    cert = flags.toy_certificate()
    cert.Q[0] = [[Fraction(1)]]
    with pytest.raises(flags.CertificateError):
        flags.verify_certificate(cert)
    with pytest.raises(flags.CertificateError):
        flags.FlagCertificate.from_json({"m": 3})
    bad = flags.toy_certificate()
    bad.m = 8
    with pytest.raises(flags.CertificateError):
        flags.verify_certificate(bad)


def test_psd_and_rank():
    assert flags.psd_check([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(2)]]).psd
    res = flags.psd_check([[0, 1], [1, 0]])
    assert not res.psd and [abs(x) for x in res.witness] == [1, 1]
    assert flags.corank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 0
    assert flags.corank([[Fraction(3, 4), Fraction(-3, 4)], [Fraction(-3, 4), Fraction(3, 4)]]) == 1
    assert flags.rank([[1, 2], [2, 4]]) == 1
    with pytest.raises(ValueError):
        flags.psd_check([[1, 2], [3, 4]])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_gram_matrices_are_psd(rows):
    Q = [[sum(a * b for a, b in zip(r, s)) for s in rows] for r in rows]
    assert flags.psd_check(Q).psd
    assert flags.rank(Q) + flags.corank(Q) == 3


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_psd_witness_is_negative_direction(v):
    Q = [[Fraction(v[0]), Fraction(v[1]), Fraction(v[2])],
         [Fraction(v[1]), Fraction(v[3]), Fraction(v[4])],
         [Fraction(v[2]), Fraction(v[4]), Fraction(v[5])]]
    res = flags.psd_check(Q)
    if not res.psd:
        w = res.witness
        assert sum(w[i] * Q[i][j] * w[j] for i in range(3) for j in range(3)) < 0
    else:
        # PSD means no integer direction in a small box is negative
        for x in itertools.product(range(-2, 3), repeat=3):
            assert sum(x[i] * Q[i][j] * x[j] for i in range(3) for j in range(3)) >= 0


def test_zero_eigenvector_k2():
    cert = flags.toy_certificate()
    w = (Fraction(1, 2), Fraction(1, 2))
    assert flags.zero_eigenvector(cert, 0, Graph.complete(2), w, [0]) == [Fraction(1, 2), Fraction(1, 2)]
    assert flags.zero_eigenvector_check(cert, 0, Graph.complete(2), w, [0])
    with pytest.raises(flags.CertificateError):
        flags.zero_eigenvector(cert, 0, Graph.complete(2), w, [0, 1])


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=3, max_n=6))
def test_subgraph_density_matches_oracle(G):
    for H in enumerate_graphs(3):
        assert flags.subgraph_density(H, G) == induced_density(H, G)


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=3, max_n=6))
def test_lambda_averaging(G):
    obj = flags.CliqueObjective(3, 3)
    for m in range(3, G.n + 1):
        assert obj.value(G) == sum(flags.subgraph_density(H, G) * obj.value(H) for H in enumerate_graphs(m))


def test_flag_densities_sum_to_one():
    one = flags.flag_type(Graph.empty(1))
    fl = flags.enumerate_flags(one, 3)
    G = Graph.cycle(6)
    assert sum(flags.flag_density(F, G, [0]) for F in fl) == 1
    keys = [F.key() for F in fl]
    D = flags.pair_density_table(G, one, 3, keys)
    assert sum(map(sum, D)) == 1


def test_pair_density_product_approximation():
    # on a vertex-transitive graph the pair density is close to the product of flag densities
    one = flags.flag_type(Graph.empty(1))
    edge = flags.Flag(Graph.complete(2), 1)
    G = Graph.cycle(9)
    d = flags.flag_density(edge, G, [0])
    assert abs(flags.pair_density(edge, edge, G) - d * d) <= Fraction(1, G.n)
