"""graph6 strings and small constructions used throughout the library."""

from __future__ import annotations

from .graphs import Graph, parse_graph6

RAMSEY_13 = "LJ]lmZRnn]]\\v["
SCHLAEFLI = "ZBXzz|z^Z|tFixjTtp|mFk\\uqm|gz}]FbHvHqjh]WzFy[RmtSUztaLvyF`vw"
SCHLAEFLI_COMPLEMENT = "Z??G`@?@wrDSLGQoigbKO]CA?^{VDsjIqehgmK[EM[OzIqCyegO|FO_^{?_?"
C34_24_VERTEX = "W@TBOkkJBBAoSCW?Qv{V}jRrhfC{UEfaRPtAw\\_ckqGt`oL"


def ramsey13() -> Graph:
    """The 8-regular Cayley graph on Z_13 with no K_5 and no independent 3-set."""
    return parse_graph6(RAMSEY_13)


def schlaefli() -> Graph:
    return parse_graph6(SCHLAEFLI)


def two_triangles_edge() -> Graph:
    """Two disjoint triangles plus one edge between them."""
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def two_triangles_vertex() -> Graph:
    """Two triangles sharing one vertex (the bowtie)."""
    return Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


def goodman_gadget() -> Graph:
    """Looped non-adjacent pair {0, 1} matched to an unlooped edge {2, 3}."""
    return Graph.from_edges(4, [(2, 3), (0, 2), (1, 3)], loops=[0, 1])


BY_NAME = {
    "ramsey13": ramsey13,
    "schlaefli": schlaefli,
    "schlaefli-complement": lambda: parse_graph6(SCHLAEFLI_COMPLEMENT),
    "c34-24": lambda: parse_graph6(C34_24_VERTEX),
    "k2": lambda: Graph.complete(2),
    "k3": lambda: Graph.complete(3),
    "c5": lambda: Graph.cycle(5),
    "goodman": goodman_gadget,
}
