"""Monochromatic k-term arithmetic progressions in 2-colorings of Z_n, and
checks for partial colorings whose blow-ups bound the limiting fraction.

Progressions are ordered pairs (a, d) in Z_n x Z_n, d = 0 included, so every
total coloring has fraction at least 1/n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .search import FunctionSpace, Schedule, SearchResult, exhaustive_search, tabu_search

STAR_CAP = 20


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class ZnColoring:
    """``colors[i]`` is 0, 1 or None (uncolored)."""

    colors: tuple[int | None, ...]

    def __post_init__(self):
        if any(c not in (0, 1, None) for c in self.colors):
            raise ColoringError("colors must be 0, 1 or uncolored")

    @property
    def n(self) -> int:
        return len(self.colors)

    @property
    def stars(self) -> list[int]:
        return [i for i, c in enumerate(self.colors) if c is None]

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> ZnColoring:
        """Digits 0/1 with '*' or '⋆' for uncolored positions; whitespace ignored."""
        out = []
        for ch in text:
            if ch.isspace():
                continue
            if ch in "01":
                out.append(int(ch))
            elif ch in "*⋆★":
                out.append(None)
            else:
                raise ColoringError(f"unexpected character {ch!r}")
        if n is not None and len(out) != n:
            raise ColoringError(f"expected {n} positions, got {len(out)}")
        return cls(tuple(out))

    def __str__(self) -> str:
        return "".join("*" if c is None else str(c) for c in self.colors)

    def complete(self, star_colors: Sequence[int]) -> ZnColoring:
        it = iter(star_colors)
        return ZnColoring(tuple(next(it) if c is None else c for c in self.colors))


def _progressions(n: int, k: int) -> np.ndarray:
    """Array of shape (n*n, k): row a*n + d lists a, a+d, ..., a+(k-1)d mod n."""
    a = np.arange(n)[:, None, None]
    d = np.arange(n)[None, :, None]
    j = np.arange(k)[None, None, :]
    return ((a + d * j) % n).reshape(n * n, k)


def mono_count(colors: Sequence[int], k: int) -> int:
    c = np.asarray(colors, dtype=np.int8)
    vals = c[_progressions(len(c), k)]
    return int(np.count_nonzero((vals == vals[:, :1]).all(axis=1)))


def mono_ap_fraction(c: ZnColoring | Sequence[int], k: int) -> Fraction:
    if k < 3:
        raise ValueError("k must be at least 3")
    colors = c.colors if isinstance(c, ZnColoring) else tuple(c)
    if any(x is None for x in colors):
        raise ColoringError("coloring has uncolored positions")
    n = len(colors)
    return Fraction(mono_count(colors, k), n * n)


def check_star_layout(c: ZnColoring) -> int:
    """Return l after checking the stars form an AP of l elements with step n/l."""
    stars = c.stars
    l = len(stars)
    n = c.n
    if l == 0:
        raise ColoringError("no uncolored positions")
    if n % l:
        raise ColoringError(f"{l} uncolored positions do not divide n = {n}")
    step = n // l
    if set(stars) != {(stars[0] + j * step) % n for j in range(l)}:
        raise ColoringError("uncolored positions are not an arithmetic progression with step n/l")
    return l


def cross_violations(c: ZnColoring, k: int) -> int:
    """Mixed progressions (both colored and uncolored terms) whose colored terms agree.

    Each of these becomes monochromatic for a suitable completion, so the
    cross condition holds exactly when this is zero.
    """
    n = c.n
    star = np.array([x is None for x in c.colors])
    col = np.array([0 if x is None else x for x in c.colors], dtype=np.int8)
    P = _progressions(n, k)
    s = star[P]
    mixed = s.any(axis=1) & ~s.all(axis=1)
    vals = col[P]
    big = np.where(s, 2, vals)
    has0 = (big == 0).any(axis=1)
    has1 = (big == 1).any(axis=1)
    return int(np.count_nonzero(mixed & ~(has0 & has1)))


@dataclass(frozen=True)
class PartialReport:
    """Result of checking a partial coloring.

    ``max_fraction`` and ``min_fraction`` range over all completions.
    ``outside`` is the fraction of monochromatic progressions that are not
    contained in the uncolored subgroup; under the cross condition it does not
    depend on the completion.  ``m_k`` is the value the blow-up recursion uses:
    ``outside`` plus the best possible contribution of the uncolored subgroup,
    which is the minimum over completions.
    """

    cross_ok: bool
    max_fraction: Fraction
    min_fraction: Fraction
    outside: Fraction | None
    l: int
    violations: int
    completions: int
    n: int = 0
    limit: Fraction | None = None

    @property
    def m_k(self) -> Fraction:
        return self.min_fraction

    def bound(self) -> Fraction | None:
        """Limit bound outside / (1 - (l/n)^2) from iterating the blow-up."""
        return self.limit


def verify_partial(c: ZnColoring, k: int) -> PartialReport:
    """Check the cross condition over every completion and collect the
    monochromatic fractions of all completions."""
    if k < 3:
        raise ValueError("k must be at least 3")
    l = check_star_layout(c)
    if l > STAR_CAP:
        raise ColoringError(f"{l} uncolored positions exceed the enumeration cap {STAR_CAP}")
    n = c.n
    P = _progressions(n, k)
    star = np.array([x is None for x in c.colors])
    s = star[P]
    mixed = s.any(axis=1) & ~s.all(axis=1)
    inside = s.all(axis=1)
    counts = []
    outside_counts = set()
    violations = 0
    for bits in itertools.product((0, 1), repeat=l):
        full = np.array(c.complete(bits).colors, dtype=np.int8)
        vals = full[P]
        mono = (vals == vals[:, :1]).all(axis=1)
        violations = max(violations, int(np.count_nonzero(mono & mixed)))
        counts.append(int(np.count_nonzero(mono)))
        outside_counts.add(int(np.count_nonzero(mono & ~inside)))
    n2 = n * n
    cross_ok = violations == 0
    outside = Fraction(outside_counts.pop(), n2) if cross_ok and len(outside_counts) == 1 else None
    bound = None
    if outside is not None:
        bound = outside / (1 - Fraction(l * l, n2))
    return PartialReport(cross_ok, Fraction(max(counts), n2), Fraction(min(counts), n2), outside, l, violations,
                         1 << l, n, bound)


def limit_bound(n_effective: int, l: int) -> Fraction:
    return Fraction(1, n_effective + l)


def certified_bound(c: ZnColoring, k: int) -> Fraction | None:
    """Limit bound certified by the partial coloring, or None if the cross
    condition fails.  Equals 1/(n + l) when m_k = 1/n."""
    return verify_partial(c, k).bound()


def canonical_stars(n: int, l: int) -> list[int]:
    if l < 1 or n % l:
        raise ColoringError(f"l = {l} must divide n = {n}")
    return [j * (n // l) for j in range(l)]


class PartialColoringSpace(FunctionSpace):
    """Bits are the colors of the non-star positions in increasing order."""

    def __init__(self, n: int, l: int, k: int, penalty: int = 1):
        self.n, self.l, self.k, self.penalty = n, l, k, penalty
        self.stars = canonical_stars(n, l)
        self.free = [i for i in range(n) if i not in set(self.stars)]
        super().__init__(len(self.free), self._cost, n * n)

    def coloring(self, state: int) -> ZnColoring:
        colors: list[int | None] = [None] * self.n
        for b, i in enumerate(self.free):
            colors[i] = state >> b & 1
        return ZnColoring(tuple(colors))

    def encode(self, c: ZnColoring) -> int:
        if c.stars != self.stars:
            raise ColoringError("coloring does not use the canonical star positions")
        return sum(c.colors[i] << b for b, i in enumerate(self.free))

    def _cost(self, state: int) -> Fraction:
        c = self.coloring(state)
        rep = verify_partial(c, self.k)
        return self.penalty * cross_violations(c, self.k) + rep.m_k


def search_partial(n: int, l: int, k: int, sched: Schedule, penalty: int = 1,
                   exhaustive: bool = False) -> tuple[ZnColoring, SearchResult]:
    """Tabu (or exhaustive) search for a partial coloring with canonical stars."""
    space = PartialColoringSpace(n, l, k, penalty)
    res = exhaustive_search(space, None) if exhaustive else tabu_search(space, None, sched)
    return space.coloring(res.state), res


def min_total_fraction(n: int, k: int) -> tuple[Fraction, tuple[int, ...]]:
    """Exact minimum fraction over all 2^n total colorings (n <= 20)."""
    if n > 20:
        raise ValueError("exhaustive total search supports n <= 20")
    P = _progressions(n, k)
    codes = np.arange(1 << n, dtype=np.int64)
    best, best_code = None, 0
    chunk = 1 << 12
    for start in range(0, 1 << n, chunk):
        block = codes[start:start + chunk]
        bits = (block[:, None] >> np.arange(n)[None, :]) & 1
        vals = bits[:, P]
        mono = (vals == vals[:, :, :1]).all(axis=2).sum(axis=1)
        i = int(np.argmin(mono))
        if best is None or mono[i] < best:
            best, best_code = int(mono[i]), int(block[i])
    return Fraction(best, n * n), tuple(best_code >> i & 1 for i in range(n))


Z44_COLORING = "*1101111011*1000101110*0010000100*0111010001"
Z226_COLORING = (
    "*01111001000001011110111001111101101110100011101001010011"
    "00110101101000111010001001000001100010000101111101100001"
    "*10000110111110100001000110000010010001011100010110101100"
    "11001010010111000101110110111110011101111010000010011110"
)
