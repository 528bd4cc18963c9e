"""Brute-force reference computations used to check the fast paths."""

from __future__ import annotations

import itertools
import math
import string
from fractions import Fraction

import numpy as np

from ramseymult.graphs import Graph


def looped_matrix(g: Graph) -> np.ndarray:
    A = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v in g.edges():
        A[u, v] = A[v, u] = 1
    for v in g.loop_set:
        A[v, v] = 1
    return A


def hom_count(g: Graph, t: int) -> int:
    """Maps [t] -> V(g) sending every pair to an edge, or to a loop when equal."""
    if g.n == 0:
        return 0
    A = looped_matrix(g)
    letters = string.ascii_lowercase[:t]
    if t == 1:
        return g.n
    terms = [f"{letters[i]}{letters[j]}" for i, j in itertools.combinations(range(t), 2)]
    return int(np.einsum(",".join(terms) + "->", *([A] * len(terms)), optimize=True))


def weighted_hom(g: Graph, t: int, w) -> Fraction:
    """Same count with each map weighted by the product of its image weights."""
    total = Fraction(0)
    for f in itertools.product(range(g.n), repeat=t):
        ok = all((f[i] == f[j] and g.has_loop(f[i])) or (f[i] != f[j] and g.has_edge(f[i], f[j]))
                 for i, j in itertools.combinations(range(t), 2))
        if ok:
            total += math.prod((w[x] for x in f), start=Fraction(1))
    return total


def induced_density(H: Graph, G: Graph) -> Fraction:
    hits = 0
    for sub in itertools.combinations(range(G.n), H.n):
        S = G.induced(sub)
        if any(S.relabel(p) == H for p in itertools.permutations(range(H.n))):
            hits += 1
    return Fraction(hits, math.comb(G.n, H.n))
