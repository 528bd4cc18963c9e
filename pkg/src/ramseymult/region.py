"""Bounding curves of the region of achievable (independent-s, clique-t)
density pairs, construction points, and bound propagation in t."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .blowup import blowup_density_pair
from .graphs import Graph
from .named import goodman_gadget

Number = Fraction | float


@dataclass(frozen=True)
class RegionPoint:
    x: Number
    y: Number
    source: str

    def __post_init__(self):
        for v in (self.x, self.y):
            if not 0 <= v <= 1:
                raise ValueError(f"densities must lie in [0, 1], got {v}")


def _root(t: int, x: float, tol: float = 1e-12) -> float:
    """z in [0, 1] with z^t + t z^(t-1) (1 - z) = x; the left side increases from 0 to 1."""
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid ** t + t * mid ** (t - 1) * (1 - mid) < x:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def upper_branches(s: int, t: int, x: float) -> tuple[float, float]:
    if s < 2 or t < 2:
        raise ValueError("s and t must be at least 2")
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    r = x ** (1 / t)
    first = (1 - r) ** s + s * r * (1 - r) ** (s - 1)
    z = _root(t, x)
    return first, (1 - z) ** s


def upper_curve(s: int, t: int, x: float) -> float:
    """Largest independent-s density compatible with clique-t density x."""
    return max(upper_branches(s, t, x))


def branch_crossing(s: int, t: int, grid: int = 2000) -> tuple[float, float]:
    """First interior point where the two branches of the upper curve swap order."""
    def gap(x):
        a, b = upper_branches(s, t, x)
        return a - b

    xs = [i / grid for i in range(1, grid)]
    prev = gap(xs[0])
    for a, b in zip(xs, xs[1:]):
        cur = gap(b)
        if prev == 0 or prev * cur < 0:
            lo, hi = a, b
            for _ in range(100):
                mid = (lo + hi) / 2
                if gap(lo) * gap(mid) <= 0:
                    hi = mid
                else:
                    lo = mid
            x = (lo + hi) / 2
            return x, upper_curve(s, t, x)
        prev = cur
    raise ValueError("branches do not cross in the open interval")


def construction_point(C: Graph, s: int, t: int, w: Sequence | None = None, source: str = "") -> RegionPoint:
    x, y = blowup_density_pair(C, s, t, w)
    return RegionPoint(x, y, source or f"blow-up of {C.n}-vertex graph")


def goodman_gadget_point(b: Fraction) -> RegionPoint:
    """Weights (a, a, b, b) with a = 1/2 - b on the four-vertex gadget; s = t = 3."""
    b = Fraction(b)
    if not 0 <= b <= Fraction(1, 2):
        raise ValueError("b must lie in [0, 1/2]")
    a = Fraction(1, 2) - b
    x, y = blowup_density_pair(goodman_gadget(), 3, 3, (a, a, b, b))
    return RegionPoint(x, y, f"goodman gadget b={b}")


def goodman_sweep(samples: int = 21) -> list[RegionPoint]:
    return [goodman_gadget_point(Fraction(k, 2 * (samples - 1))) for k in range(samples)]


def _exact_root(value: Fraction, k: int) -> Fraction | None:
    """The k-th root of a positive rational when it is rational."""
    def iroot(n: int) -> int | None:
        r = round(n ** (1 / k))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** k == n:
                return c
        lo, hi = 0, 1 << (n.bit_length() // k + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** k < n:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo ** k == n else None

    p, q = iroot(value.numerator), iroot(value.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def erdos_step(s: int, g: Number) -> Number:
    """One step t -> t + 1 of the propagated bound g <- (g^(1/(1-s)) + 1)^(1-s)."""
    return erdos_propagate(s, 0, g, 1)


def erdos_propagate(s: int, t0: int, g: Number, t: int) -> Number:
    """Bound (t - t0 + g^(1/(1-s)))^(1-s); exact when (1/g)^(1/(s-1)) is rational."""
    if s < 2:
        raise ValueError("s must be at least 2")
    if t < t0:
        raise ValueError("t must be at least t0")
    if not 0 < g <= 1:
        raise ValueError("g must lie in (0, 1]")
    if t == t0:
        return g
    if isinstance(g, Fraction) or isinstance(g, int):
        r = _exact_root(1 / Fraction(g), s - 1)
        if r is not None:
            return 1 / (r + (t - t0)) ** (s - 1)
    return (t - t0 + float(g) ** (1 / (1 - s))) ** (1 - s)


def format_number(v: Number) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return f"{v:.12g}"


# constructions whose graphs are too large to ship; values are taken as given
LITERAL_POINTS_C34 = [
    (Fraction(3, 200), Fraction(6347, 64000), "40 vertices (literal)"),
    (Fraction(563, 8192), Fraction(2469, 65536), "128 vertices (literal)"),
    (Fraction(437, 6272), Fraction(33, 896), "112 vertices (literal)"),
]


def region_rows(s: int, t: int, points: Iterable[RegionPoint], grid: int,
                lower_bound: Fraction | None = None) -> list[tuple[str, str, str]]:
    """Rows (x, y, source): curve samples, construction points, then the line y = c - x."""
    if grid < 2:
        raise ValueError("grid needs at least two points")
    rows = []
    for i in range(grid):
        x = i / (grid - 1)
        rows.append((format_number(x), format_number(upper_curve(s, t, x)), "upper-curve"))
    for p in points:
        rows.append((format_number(p.x), format_number(p.y), p.source))
    if lower_bound is not None:
        c = Fraction(lower_bound)
        rows.append(("0/1", format_number(c), "lower-line"))
        rows.append((format_number(c), "0/1", "lower-line"))
    return rows


def export_region_csv(s: int, t: int, points: Iterable[RegionPoint], grid: int, path: str | Path | None = None,
                      lower_bound: Fraction | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "source"])
    writer.writerows(region_rows(s, t, points, grid, lower_bound))
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def c34_points() -> list[RegionPoint]:
    """Construction points of the (3, 4) region: computed where the graph is
    available, literal values otherwise."""
    from .graphs import looped_complement, parse_graph6
    from .named import C34_24_VERTEX, schlaefli

    pts = [
        construction_point(looped_complement(Graph.cycle(5)), 3, 4, source="looped complement of C5"),
        construction_point(looped_complement(parse_graph6(C34_24_VERTEX)), 3, 4,
                           source="24 vertices (looped complement of printed graph)"),
        construction_point(schlaefli(), 3, 4, source="Schlaefli graph"),
        construction_point(Graph.complete(3), 3, 4, source="K3"),
    ]
    pts.extend(RegionPoint(x, y, src) for x, y, src in LITERAL_POINTS_C34)
    return sorted(pts, key=lambda p: p.x)
