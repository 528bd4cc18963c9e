from __future__ import annotations

import itertools

from hypothesis import strategies as st

from ramseymult.graphs import Graph


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 8, loops: bool = False) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.integers(0, (1 << len(pairs)) - 1)) if pairs else 0
    edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
    lp = [v for v in range(n) if draw(st.booleans())] if loops else []
    return Graph.from_edges(n, edges, lp)


@st.composite
def permutations(draw, n: int) -> list[int]:
    return draw(st.permutations(list(range(n))))


def naive_cliques(g: Graph, t: int) -> int:
    return sum(1 for sub in itertools.combinations(range(g.n), t)
               if all(g.has_edge(u, v) for u, v in itertools.combinations(sub, 2)))
