"""Exact limit densities of cliques and independent sets in blow-up sequences.

A blow-up replaces every vertex of ``C`` by ``m`` copies, forming a clique if
the vertex is looped and an independent set otherwise.  Everything here is the
``m -> infinity`` limit, as an exact ``Fraction``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .graphs import Graph, _bits, automorphism_group, looped_complement, UnsupportedGraphError

STIRLING_CAP = 16

Weights = tuple[Fraction, ...]


class WeightError(ValueError):
    pass


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind via the standard recurrence."""
    if n > STIRLING_CAP:
        raise ValueError(f"Stirling numbers are capped at n <= {STIRLING_CAP}")
    if n == k:
        return 1
    if n == 0 or k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def falling(n: int, k: int) -> int:
    return math.perm(n, k) if 0 <= k <= n else 0


def uniform_weights(n: int) -> Weights:
    return tuple(Fraction(1, n) for _ in range(n))


def check_weights(w: Sequence, n: int) -> Weights:
    w = tuple(Fraction(x) for x in w)
    if len(w) != n:
        raise WeightError(f"expected {n} weights, got {len(w)}")
    if any(x < 0 for x in w):
        raise WeightError("weights must be nonnegative")
    if sum(w) != 1:
        raise WeightError(f"weights sum to {sum(w)}, not 1")
    return w


@dataclass(frozen=True)
class BlowupObjective:
    """Cost ``ws * x + lam * wt * y`` with x the independent-``s`` density and
    y the ``t``-clique density."""

    s: int
    t: int
    ws: Fraction = Fraction(1)
    wt: Fraction = Fraction(1)
    lam: Fraction = Fraction(1)

    def __post_init__(self):
        if self.s < 2 or self.t < 2:
            raise ValueError("s and t must be at least 2")
        for name in ("ws", "wt", "lam"):
            value = Fraction(getattr(self, name))
            if value < 0:
                raise ValueError(f"{name} must be nonnegative")
            object.__setattr__(self, name, value)

    def combine(self, x: Fraction, y: Fraction) -> Fraction:
        return self.ws * x + self.lam * self.wt * y


def clique_split_counts(g: Graph, t: int) -> dict[tuple[int, int], int]:
    """Count cliques S with |S| <= t by (unlooped, looped) vertex counts,
    keeping only splits with ``u + l <= t`` (the others cannot be covered)."""
    counts: dict[tuple[int, int], int] = {}
    adj, loops = g.adj, g.loops

    def grow(cand: int, u: int, l: int):
        counts[(u, l)] = counts.get((u, l), 0) + 1
        if u + l == t:
            return
        if u + l == t - 1 and not cand & loops:
            nu = cand.bit_count()
            if nu:
                counts[(u + 1, l)] = counts.get((u + 1, l), 0) + nu
            return
        while cand:
            low = cand & -cand
            cand ^= low
            v = low.bit_length() - 1
            if loops & low:
                grow(cand & adj[v], u, l + 1)
            else:
                grow(cand & adj[v], u + 1, l)

    grow((1 << g.n) - 1, 0, 0)
    return counts


def _hom_uniform(t: int, g: Graph) -> Fraction:
    if g.n == 0:
        return Fraction(0)
    if not g.loops:
        from .graphs import count_cliques
        return Fraction(math.factorial(t) * count_cliques(g, t), g.n ** t)
    total = 0
    for (u, l), c in clique_split_counts(g, t).items():
        total += c * falling(t, u) * math.factorial(l) * stirling2(t - u, l)
    return Fraction(total, g.n ** t)


def _cliques_with_split(g: Graph, t: int):
    """Yield (unlooped list, looped list) for every clique that can be covered by t maps."""
    adj, loops = g.adj, g.loops

    def grow(cand: int, un: list[int], lp: list[int]):
        yield un, lp
        if len(un) + len(lp) == t:
            return
        while cand:
            low = cand & -cand
            cand ^= low
            v = low.bit_length() - 1
            if loops & low:
                yield from grow(cand & adj[v], un, lp + [v])
            else:
                yield from grow(cand & adj[v], un + [v], lp)

    yield from grow((1 << g.n) - 1, [], [])


def _surjection_sum(k: int, lw: Sequence[int]) -> int:
    """sum over R subset of L of (-1)^{|L|-|R|} (sum_R w)^k, on integer numerators."""
    total = 0
    ell = len(lw)
    for mask in range(1 << ell):
        s = 0
        for i in _bits(mask):
            s += lw[i]
        sign = -1 if (ell - mask.bit_count()) & 1 else 1
        total += sign * s ** k
    return total


def hom_clique_weight(t: int, g: Graph, w: Sequence | None = None) -> Fraction:
    """Weighted density of maps [t] -> V(g) whose distinct images are pairwise
    adjacent and whose repeated images are looped.

    This is the limit density of labelled t-cliques in the w-weighted blow-up.
    """
    if t < 1:
        raise ValueError("t must be positive")
    if t > STIRLING_CAP:
        raise ValueError(f"t is capped at {STIRLING_CAP}")
    if w is None:
        return _hom_uniform(t, g)
    w = check_weights(w, g.n)
    if len(set(w)) == 1:
        return _hom_uniform(t, g)
    denom = math.lcm(*(x.denominator for x in w))
    num = [int(x * denom) for x in w]
    total = 0
    for un, lp in _cliques_with_split(g, t):
        u = len(un)
        if u + len(lp) > t:
            continue
        prod = 1
        for v in un:
            prod *= num[v]
        if not prod:
            continue
        surj = _surjection_sum(t - u, [num[v] for v in lp])
        if surj:
            total += falling(t, u) * prod * surj
    return Fraction(total, denom ** t)


def blowup_density_pair(C: Graph, s: int, t: int, w: Sequence | None = None) -> tuple[Fraction, Fraction]:
    """(independent-s density, t-clique density) of the blow-up sequence of C."""
    return hom_clique_weight(s, looped_complement(C), w), hom_clique_weight(t, C, w)


def cost(C: Graph, obj: BlowupObjective, w: Sequence | None = None) -> Fraction:
    x, y = blowup_density_pair(C, obj.s, obj.t, w)
    return obj.combine(x, y)


def materialize_blowup(C: Graph, m: int, keep_loops: bool = True) -> Graph:
    """Explicit C[m]; vertex (v, i) becomes v*m + i.

    With ``keep_loops`` the copies of a looped vertex stay looped, which makes
    homomorphism counts exactly multiplicative: hom(K_t, C[m]) = m^t hom(K_t, C).
    """
    n = C.n * m
    if n > 1024:
        raise UnsupportedGraphError("blow-up exceeds the vertex cap")
    rows = []
    loops = 0
    for v in range(C.n):
        part_mask = 0
        for u in _bits(C.adj[v]):
            part_mask |= ((1 << m) - 1) << (u * m)
        own = ((1 << m) - 1) << (v * m) if C.has_loop(v) else 0
        for i in range(m):
            me = 1 << (v * m + i)
            rows.append(part_mask | (own & ~me))
            if keep_loops and C.has_loop(v):
                loops |= me
    return Graph(n, tuple(rows), loops)


# -- weight optimization -------------------------------------------------------

@dataclass(frozen=True)
class WeightResult:
    weights: Weights
    value: Fraction
    uniform_value: Fraction
    converged: bool


class _FloatCost:
    """Float evaluator of the cost polynomial with the clique structure cached."""

    def __init__(self, C: Graph, obj: BlowupObjective):
        self.obj = obj
        self.parts = []
        for order, coef, g in ((obj.s, obj.ws, looped_complement(C)), (obj.t, obj.lam * obj.wt, C)):
            cliques = [(tuple(u), tuple(l)) for u, l in _cliques_with_split(g, order)]
            self.parts.append((order, float(coef), cliques))

    def __call__(self, w: Sequence[float]) -> float:
        total = 0.0
        for t, coef, cliques in self.parts:
            if coef == 0:
                continue
            acc = 0.0
            for un, lp in cliques:
                u = len(un)
                if u + len(lp) > t:
                    continue
                prod = 1.0
                for v in un:
                    prod *= w[v]
                if prod == 0.0:
                    continue
                ell = len(lp)
                surj = 0.0
                for mask in range(1 << ell):
                    s = 0.0
                    for i in _bits(mask):
                        s += w[lp[i]]
                    surj += (-1.0 if (ell - mask.bit_count()) & 1 else 1.0) * s ** (t - u)
                acc += falling(t, u) * prod * surj
            total += coef * acc
        return total


def _descend(f: _FloatCost, w: list[float], tol: float, max_iter: int) -> tuple[list[float], bool]:
    n = len(w)
    h = 1e-7
    for _ in range(max_iter):
        base = f(w)
        grad = []
        for i in range(n):
            w[i] += h
            grad.append((f(w) - base) / h)
            w[i] -= h
        donors = [i for i in range(n) if w[i] > 0]
        i = max(donors, key=lambda k: grad[k])
        j = min(range(n), key=lambda k: grad[k])
        if grad[i] - grad[j] <= tol:
            return w, True
        lo, hi = 0.0, w[i]

        def moved(d):
            trial = list(w)
            trial[i] -= d
            trial[j] += d
            return f(trial)

        for _ in range(40):
            a = lo + (hi - lo) / 3
            b = hi - (hi - lo) / 3
            if moved(a) <= moved(b):
                hi = b
            else:
                lo = a
        d = (lo + hi) / 2
        if moved(d) >= base:
            return w, True
        w[i] -= d
        w[j] += d
    return w, False


def _round_weights(w: Sequence[float], max_den: int) -> Weights:
    fr = [Fraction(max(x, 0.0)).limit_denominator(max_den) for x in w]
    k = max(range(len(fr)), key=lambda i: fr[i])
    fr[k] = 1 - (sum(fr) - fr[k])
    if fr[k] < 0:
        raise WeightError("rounding produced a negative weight")
    return tuple(fr)


def optimize_weights(C: Graph, obj: BlowupObjective, tol: Fraction | float = Fraction(1, 10**9),
                     restarts: int = 3, max_iter: int = 200, seed: int = 0) -> WeightResult:
    """Heuristic local minimization of the cost over the weight simplex.

    Pairwise coordinate descent in floating point starting from uniform weights,
    plus restarts that are constant on vertex orbits.  The best candidate is
    rounded to rationals and evaluated exactly; uniform weights are returned
    when nothing beats them.
    """
    if C.n > 64:
        raise UnsupportedGraphError("weight optimization supports at most 64 vertices")
    uniform = uniform_weights(C.n)
    uniform_value = cost(C, obj)
    f = _FloatCost(C, obj)
    tol = float(tol)
    starts = [[1.0 / C.n] * C.n]
    if restarts and C.n <= 30:
        orbits = automorphism_group(C).orbits()
        rng = random.Random(seed)
        for _ in range(restarts):
            raw = [0.0] * C.n
            for orb in orbits:
                r = rng.uniform(0.5, 1.5)
                for v in orb:
                    raw[v] = r
            tot = sum(raw)
            starts.append([x / tot for x in raw])
    best: tuple[Fraction, Weights] = (uniform_value, uniform)
    all_converged = True
    for start in starts:
        w, ok = _descend(f, start, tol, max_iter)
        all_converged &= ok
        try:
            cand = _round_weights(w, 10**6)
        except WeightError:
            continue
        value = cost(C, obj, cand)
        if value < best[0]:
            best = (value, cand)
    return WeightResult(best[1], best[0], uniform_value, all_converged)
