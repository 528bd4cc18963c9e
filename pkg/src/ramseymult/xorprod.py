"""XOR graph products and pattern-count vectors.

For a map f: [t] -> V(G) the pattern of f is the set of pairs {i, j} whose
images are "adjacent", where a repeated image counts as adjacent exactly when
it is looped.  Patterns of a map into G1 (x) G2 are the XOR of the patterns of
its two coordinates, so pattern-count vectors of products are XOR
convolutions; the Walsh-Hadamard transform turns those into pointwise products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .graphs import Graph, UnsupportedGraphError, _bits

PATTERN_MAP_CAP = 5 * 10**7


@dataclass(frozen=True)
class PatternVector:
    """``entries[P]`` counts maps [t] -> V(G) with pattern P; bit e of P is the
    e-th pair of [t] in lexicographic order."""

    t: int
    entries: tuple[int, ...]

    @property
    def full(self) -> int:
        return len(self.entries) - 1

    def total(self) -> int:
        return sum(self.entries)


def pair_order(t: int) -> list[tuple[int, int]]:
    return list(combinations(range(t), 2))


def compat_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.int64)
    for v in range(g.n):
        for u in _bits(g.adj[v]):
            a[v, u] = 1
        if g.has_loop(v):
            a[v, v] = 1
    return a


def xor_product(g1: Graph, g2: Graph) -> Graph:
    """Vertex (a, b) is a*|V(g2)| + b; compatibility (adjacency, with loops on
    the diagonal) is the XOR of the factor compatibilities."""
    n = g1.n * g2.n
    if n > 1024:
        raise UnsupportedGraphError("product exceeds the 1024-vertex cap")
    a1, a2 = compat_matrix(g1), compat_matrix(g2)
    prod = np.bitwise_xor(a1[:, None, :, None], a2[None, :, None, :]).reshape(n, n)
    rows = []
    loops = 0
    for v in range(n):
        if prod[v, v]:
            loops |= 1 << v
        row = 0
        for u in np.flatnonzero(prod[v]):
            if u != v:
                row |= 1 << int(u)
        rows.append(row)
    return Graph(n, tuple(rows), loops)


def pattern_vector(g: Graph, t: int) -> PatternVector:
    if not 1 <= t <= 5:
        raise ValueError("pattern vectors support 1 <= t <= 5")
    if g.n ** t > PATTERN_MAP_CAP:
        raise UnsupportedGraphError(f"{g.n}^{t} maps exceed the cap of {PATTERN_MAP_CAP}")
    pairs = pair_order(t)
    dim = 1 << len(pairs)
    n = g.n
    if n == 0:
        return PatternVector(t, tuple([0] * dim))
    a = compat_matrix(g)
    counts = np.zeros(dim, dtype=np.int64)
    # fix f(0) and vectorize over the remaining t-1 coordinates
    shape = (n,) * (t - 1)
    grids = np.indices(shape).reshape(t - 1, -1) if t > 1 else np.zeros((0, 1), dtype=np.int64)
    for first in range(n):
        idx = np.zeros(grids.shape[1], dtype=np.int64)
        for e, (i, j) in enumerate(pairs):
            fi = np.full(grids.shape[1], first) if i == 0 else grids[i - 1]
            fj = grids[j - 1]
            idx |= a[fi, fj] << e
        counts += np.bincount(idx, minlength=dim)
    return PatternVector(t, tuple(int(x) for x in counts))


def fwht(v: Sequence[int]) -> list[int]:
    """Unnormalized Walsh-Hadamard transform on exact integers."""
    out = list(v)
    h = 1
    while h < len(out):
        for i in range(0, len(out), 2 * h):
            for j in range(i, i + h):
                x, y = out[j], out[j + h]
                out[j], out[j + h] = x + y, x - y
        h *= 2
    return out


def ifwht(v: Sequence[int]) -> list[int]:
    out = fwht(v)
    dim = len(out)
    res = []
    for x in out:
        q, r = divmod(x, dim)
        if r:
            raise ArithmeticError("inverse Walsh-Hadamard transform is not integral")
        res.append(q)
    return res


def compose(v1: PatternVector, v2: PatternVector) -> PatternVector:
    """Pattern vector of the XOR product from the factors' vectors."""
    if v1.t != v2.t:
        raise ValueError("pattern vectors must have the same order t")
    h1, h2 = fwht(v1.entries), fwht(v2.entries)
    return PatternVector(v1.t, tuple(ifwht([a * b for a, b in zip(h1, h2)])))


def compose_all(vectors: Sequence[PatternVector]) -> PatternVector:
    if not vectors:
        raise ValueError("need at least one factor")
    t = vectors[0].t
    if any(v.t != t for v in vectors):
        raise ValueError("pattern vectors must have the same order t")
    acc = fwht(vectors[0].entries)
    for v in vectors[1:]:
        acc = [a * b for a, b in zip(acc, fwht(v.entries))]
    return PatternVector(t, tuple(ifwht(acc)))


def mono_density_parts(factors: Sequence[Graph], s: int, t: int) -> tuple[Fraction, Fraction]:
    """(independent-s density, t-clique density) of the product's blow-up sequence."""
    order = 1
    for f in factors:
        order *= f.n
    vs = compose_all([pattern_vector(f, s) for f in factors])
    vt = compose_all([pattern_vector(f, t) for f in factors])
    return Fraction(vs.entries[0], order ** s), Fraction(vt.entries[vt.full], order ** t)


def mono_density_of_product(factors: Sequence[Graph], s: int, t: int) -> Fraction:
    x, y = mono_density_parts(factors, s, t)
    return x + y
