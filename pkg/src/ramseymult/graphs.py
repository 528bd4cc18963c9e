"""Loop-aware graphs on bitset adjacency rows.

Vertices are ``0..n-1``.  ``adj[v]`` is an int whose bit ``u`` is set when
``u`` and ``v`` are adjacent; loops live in a separate bitmask so that clique
counting and graph6 never see them.  Only the blow-up code reads loops.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 1024
CANONICAL_CAP = 12
AUTOMORPHISM_CAP = 30


class Graph6Error(ValueError):
    """Malformed graph6 input; ``offset`` is the byte index of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnsupportedGraphError(ValueError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]
    loops: int = 0

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count {self.n} outside [0, {MAX_VERTICES}]")
        if len(self.adj) != self.n:
            raise ValueError("adjacency must have one row per vertex")
        full = (1 << self.n) - 1
        if self.loops & ~full:
            raise ValueError("loop mask mentions vertices outside the graph")
        for v, row in enumerate(self.adj):
            if row & ~full or row >> v & 1:
                raise ValueError(f"bad adjacency row for vertex {v}")
            for u in _bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at {{{u}, {v}}}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]] = (), loops: Iterable[int] = ()) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-adjacency {u}; use loops instead")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        mask = 0
        for v in loops:
            mask |= 1 << v
        return cls(n, tuple(rows), mask)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def perfect_matching(cls, n: int) -> Graph:
        if n % 2:
            raise ValueError("perfect matching needs an even order")
        return cls.from_edges(n, [(i, i + 1) for i in range(0, n, 2)])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def has_loop(self, v: int) -> bool:
        return bool(self.loops >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    @property
    def loop_set(self) -> list[int]:
        return list(_bits(self.loops))

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph in which old vertex ``v`` becomes ``perm[v]``."""
        rows = [0] * self.n
        loops = 0
        for v in range(self.n):
            pv = perm[v]
            row = 0
            for u in _bits(self.adj[v]):
                row |= 1 << perm[u]
            rows[pv] = row
            if self.loops >> v & 1:
                loops |= 1 << pv
        return Graph(self.n, tuple(rows), loops)

    def induced(self, vertices: Sequence[int]) -> Graph:
        """Subgraph on ``vertices``; position ``i`` in the list becomes vertex ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        loops = 0
        for i, v in enumerate(vertices):
            row = 0
            for u in _bits(self.adj[v]):
                j = index.get(u)
                if j is not None:
                    row |= 1 << j
            rows.append(row)
            if self.loops >> v & 1:
                loops |= 1 << i
        return Graph(len(vertices), tuple(rows), loops)

    def without_loops(self) -> Graph:
        return Graph(self.n, self.adj, 0)

    def with_all_loops(self) -> Graph:
        return Graph(self.n, self.adj, (1 << self.n) - 1)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()], "loops": self.loop_set}

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        return cls.from_edges(int(data["n"]), data.get("edges", []), data.get("loops", []))

    def __repr__(self) -> str:
        loops = f", loops={self.loop_set}" if self.loops else ""
        return f"Graph(n={self.n}, m={self.num_edges}{loops})"


Permutation = tuple[int, ...]


# -- graph6 ------------------------------------------------------------------

def _decode_n(data: bytes) -> tuple[int, int]:
    def sextets(start: int, count: int) -> int:
        value = 0
        for k in range(start, start + count):
            if k >= len(data):
                raise Graph6Error("truncated vertex count", k)
            c = data[k]
            if not 63 <= c <= 126:
                raise Graph6Error(f"invalid character {chr(c)!r}", k)
            value = value << 6 | (c - 63)
        return value

    if not data:
        raise Graph6Error("empty input", 0)
    if data[0] != 126:
        return sextets(0, 1), 1
    if len(data) > 1 and data[1] == 126:
        return sextets(2, 6), 8
    return sextets(1, 3), 4


def parse_graph6(text: str | bytes) -> Graph:
    if isinstance(text, str):
        try:
            data = text.strip().encode("ascii")
        except UnicodeEncodeError as exc:
            raise Graph6Error("non-ASCII character", exc.start) from None
    else:
        data = text.strip()
    header = b">>graph6<<"
    base = 0
    if data.startswith(header):
        data = data[len(header):]
        base = len(header)
    try:
        n, pos = _decode_n(data)
    except Graph6Error as exc:
        raise Graph6Error(str(exc).rsplit(" (byte", 1)[0], exc.offset + base) from None
    if n > MAX_VERTICES:
        raise Graph6Error(f"{n} vertices exceeds cap {MAX_VERTICES}", base)
    nbits = n * (n - 1) // 2
    expected = (nbits + 5) // 6
    if len(data) - pos != expected:
        off = pos + min(expected, len(data) - pos)
        raise Graph6Error(f"expected {expected} data bytes for n={n}, got {len(data) - pos}", off + base)
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte_index = pos + k // 6
            c = data[byte_index]
            if not 63 <= c <= 126:
                raise Graph6Error(f"invalid character {chr(c)!r}", byte_index + base)
            if (c - 63) >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    for byte_index in range(pos + k // 6, len(data)):
        c = data[byte_index]
        if not 63 <= c <= 126:
            raise Graph6Error(f"invalid character {chr(c)!r}", byte_index + base)
    return Graph(n, tuple(rows))


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr((n >> s & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr((n >> s & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def emit_graph6(g: Graph) -> str:
    if g.loops:
        raise UnsupportedGraphError("graph6 cannot represent loops; use the JSON graph format")
    out = [_encode_n(g.n)]
    acc = 0
    k = 0
    for j in range(1, g.n):
        for i in range(j):
            acc = acc << 1 | (g.adj[i] >> j & 1)
            k += 1
            if k == 6:
                out.append(chr(acc + 63))
                acc = k = 0
    if k:
        out.append(chr((acc << (6 - k)) + 63))
    return "".join(out)


# -- complements and cliques -------------------------------------------------

def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full ^ row ^ (1 << v) for v, row in enumerate(g.adj)), g.loops)


def looped_complement(g: Graph) -> Graph:
    """Complement on distinct pairs with every loop flipped.

    The blow-up of the result is the complement of the blow-up of ``g``.
    """
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full ^ row ^ (1 << v) for v, row in enumerate(g.adj)), full ^ g.loops)


def _count_in(adj: Sequence[int], cand: int, k: int) -> int:
    if k == 0:
        return 1
    if k == 1:
        return cand.bit_count()
    total = 0
    while cand:
        low = cand & -cand
        cand ^= low
        nxt = cand & adj[low.bit_length() - 1]
        if nxt.bit_count() >= k - 1:
            total += _count_in(adj, nxt, k - 1)
    return total


def count_cliques_in(adj: Sequence[int], mask: int, k: int) -> int:
    """Number of ``k``-cliques inside the vertex set ``mask``."""
    if k < 0:
        return 0
    return _count_in(adj, mask, k)


def count_cliques(g: Graph, t: int) -> int:
    if t < 1:
        raise ValueError("clique order must be positive")
    return _count_in(g.adj, (1 << g.n) - 1, t)


def clique_number(g: Graph) -> int:
    best = 0

    def grow(cand: int, size: int):
        nonlocal best
        if size > best:
            best = size
        while cand:
            if size + cand.bit_count() <= best:
                return
            low = cand & -cand
            cand ^= low
            grow(cand & g.adj[low.bit_length() - 1], size + 1)

    grow((1 << g.n) - 1, 0)
    return best


def independence_number(g: Graph) -> int:
    return clique_number(complement(g))


def contains_subgraph(host: Graph, pattern: Graph) -> bool:
    """Non-induced containment: an injective map keeping every pattern edge."""
    if pattern.n > host.n or pattern.num_edges > host.num_edges:
        return False
    if pattern.num_edges == pattern.n * (pattern.n - 1) // 2:
        return pattern.n == 0 or count_cliques(host, pattern.n) > 0
    order = _bfs_order(pattern)
    image = [-1] * pattern.n

    def place(k: int, used: int) -> bool:
        if k == len(order):
            return True
        x = order[k]
        cand = ((1 << host.n) - 1) & ~used
        for y in _bits(pattern.adj[x]):
            if image[y] >= 0:
                cand &= host.adj[image[y]]
        need = pattern.degree(x)
        for c in _bits(cand):
            if host.degree(c) < need:
                continue
            image[x] = c
            if place(k + 1, used | 1 << c):
                return True
        image[x] = -1
        return False

    return place(0, 0)


# -- partition refinement ----------------------------------------------------

def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement; the cell order depends only on invariants."""
    adj = g.adj
    while True:
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        out: list[list[int]] = []
        split = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in c:
                row = adj[v]
                groups.setdefault(tuple((row & m).bit_count() for m in masks), []).append(v)
            if len(groups) == 1:
                out.append(c)
            else:
                split = True
                out.extend(groups[key] for key in sorted(groups))
        cells = out
        if not split:
            return cells


def _quotient(g: Graph, cells: list[list[int]]) -> tuple:
    masks = []
    for c in cells:
        m = 0
        for v in c:
            m |= 1 << v
        masks.append(m)
    return tuple(
        (len(c), (g.loops >> c[0]) & 1, tuple((g.adj[c[0]] & m).bit_count() for m in masks)) for c in cells
    )


def _individualize(cells: list[list[int]], idx: int, v: int) -> list[list[int]]:
    rest = [u for u in cells[idx] if u != v]
    return cells[:idx] + [[v], rest] + cells[idx + 1:]


def _target_cell(cells: list[list[int]]) -> int:
    best = -1
    for i, c in enumerate(cells):
        if len(c) > 1 and (best < 0 or len(c) < len(cells[best])):
            best = i
    return best


def _initial_cells(g: Graph, fixed: Sequence[int] = ()) -> list[list[int]]:
    fixed_set = set(fixed)
    cells = [[v] for v in fixed]
    plain = [v for v in range(g.n) if v not in fixed_set and not g.loops >> v & 1]
    looped = [v for v in range(g.n) if v not in fixed_set and g.loops >> v & 1]
    cells.extend(c for c in (plain, looped) if c)
    return cells


def _leaf_key(g: Graph, order: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    rows = []
    loops = 0
    for i, v in enumerate(order):
        row = 0
        for u in _bits(g.adj[v]):
            row |= 1 << pos[u]
        rows.append(row)
        if g.loops >> v & 1:
            loops |= 1 << i
    return loops, tuple(rows)


def _orbit_classes(gens: list[tuple[int, ...]], n: int) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in gens:
        for v in range(n):
            a, b = find(v), find(p[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


def _canonical_order(g: Graph, fixed: Sequence[int] = ()) -> tuple[tuple, list[int]]:
    best_key = None
    best_order: list[int] = []
    autos: list[tuple[int, ...]] = []

    def search(cells: list[list[int]], prefix: list[int]):
        nonlocal best_key, best_order
        cells = _refine(g, cells)
        idx = _target_cell(cells)
        if idx < 0:
            order = [c[0] for c in cells]
            key = _leaf_key(g, order)
            if best_key is None or key < best_key:
                best_key, best_order = key, order
            elif key == best_key:
                perm = [0] * g.n
                for a, b in zip(best_order, order):
                    perm[a] = b
                autos.append(tuple(perm))
            return
        tried: list[int] = []
        for v in sorted(cells[idx]):
            if tried:
                gens = [p for p in autos if all(p[u] == u for u in prefix)]
                if gens:
                    cls = _orbit_classes(gens, g.n)
                    if any(cls[v] == cls[u] for u in tried):
                        continue
            search(_individualize(cells, idx, v), prefix + [v])
            tried.append(v)

    search(_initial_cells(g, fixed), list(fixed))
    return best_key, best_order


def canonical_key(g: Graph, fixed: Sequence[int] = ()) -> tuple:
    """Hashable isomorphism invariant; ``fixed`` vertices are kept pointwise (in order)."""
    if g.n > CANONICAL_CAP + len(fixed):
        raise UnsupportedGraphError(f"canonical labeling supports n <= {CANONICAL_CAP}, got {g.n}")
    key, _ = _canonical_order(g, fixed)
    return (g.n, len(fixed)) + key


def canonical_form(g: Graph) -> Graph:
    if g.n > CANONICAL_CAP:
        raise UnsupportedGraphError(f"canonical labeling supports n <= {CANONICAL_CAP}, got {g.n}")
    _, order = _canonical_order(g)
    perm = [0] * g.n
    for i, v in enumerate(order):
        perm[v] = i
    return g.relabel(perm)


def is_isomorphic(a: Graph, b: Graph) -> bool:
    if a.n <= CANONICAL_CAP:
        if a.n != b.n or a.num_edges != b.num_edges or a.loops.bit_count() != b.loops.bit_count():
            return False
        return canonical_key(a) == canonical_key(b)
    return find_isomorphism(a, b) is not None


# -- enumeration ---------------------------------------------------------------

def _free_of(g: Graph, forbidden: Sequence[Graph]) -> bool:
    return not any(contains_subgraph(g, f) for f in forbidden)


@lru_cache(maxsize=64)
def _enumerate_cached(n: int, forbidden: tuple[Graph, ...]) -> tuple[Graph, ...]:
    if n == 0:
        return (Graph.empty(0),)
    found: dict[tuple, Graph] = {}
    for base in _enumerate_cached(n - 1, forbidden):
        for nbhd in range(1 << (n - 1)):
            rows = [row | ((nbhd >> v & 1) << (n - 1)) for v, row in enumerate(base.adj)]
            rows.append(nbhd)
            g = Graph(n, tuple(rows))
            key = canonical_key(g)
            if key in found or not _free_of(g, forbidden):
                continue
            found[key] = canonical_form(g)
    return tuple(found[k] for k in sorted(found, key=lambda k: (found[k].num_edges, k)))


def enumerate_graphs(n: int, forbidden: Sequence[Graph] = ()) -> list[Graph]:
    """One canonical representative per isomorphism class of forbidden-free graphs.

    Forbidden graphs are excluded as (not necessarily induced) subgraphs.  The
    output is ordered by edge count, then canonical key.
    """
    if n > 8:
        raise UnsupportedGraphError("graph enumeration supports n <= 8")
    canon = tuple(sorted({canonical_form(f) for f in forbidden}, key=canonical_key))
    return list(_enumerate_cached(n, canon))


# -- homomorphisms and automorphisms ------------------------------------------

def _bfs_order(g: Graph) -> list[int]:
    seen = 0
    order: list[int] = []
    for root in sorted(range(g.n), key=lambda v: -g.degree(v)):
        if seen >> root & 1:
            continue
        seen |= 1 << root
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(_bits(g.adj[v] & ~seen), key=lambda u: -g.degree(u)):
                seen |= 1 << u
                queue.append(u)
    return order


def strong_homomorphisms(T: Graph, C: Graph, limit: int | None = None) -> list[tuple[int, ...]]:
    """All maps V(T) -> V(C) preserving adjacency and non-adjacency of distinct vertices.

    Non-adjacent vertices of ``T`` may share an image.  Maps are tuples indexed by
    the vertices of ``T``.
    """
    if T.loops or C.loops:
        raise UnsupportedGraphError("strong homomorphisms are defined for loop-free graphs")
    full = (1 << C.n) - 1
    non = [full ^ row for row in C.adj]
    order = _bfs_order(T)
    earlier = [[(y, T.has_edge(x, y)) for y in order[:k]] for k, x in enumerate(order)]
    image = [0] * T.n
    out: list[tuple[int, ...]] = []

    def place(k: int) -> bool:
        if k == len(order):
            out.append(tuple(image))
            return limit is not None and len(out) >= limit
        cand = full
        for y, adjacent in earlier[k]:
            cand &= C.adj[image[y]] if adjacent else non[image[y]]
            if not cand:
                return False
        x = order[k]
        for c in _bits(cand):
            image[x] = c
            if place(k + 1):
                return True
        return False

    if T.n == 0:
        return [()]
    place(0)
    return out


def _extend_map(g: Graph, h: Graph, src: list[list[int]], dst: list[list[int]]) -> tuple[int, ...] | None:
    """Search for an isomorphism g -> h compatible with the aligned partitions."""
    src = _refine(g, src)
    dst = _refine(h, dst)
    if _quotient(g, src) != _quotient(h, dst):
        return None
    idx = _target_cell(src)
    if idx < 0:
        perm = [0] * g.n
        for a, b in zip(src, dst):
            perm[a[0]] = b[0]
        for v in range(g.n):
            row = 0
            for u in _bits(g.adj[v]):
                row |= 1 << perm[u]
            if row != h.adj[perm[v]] or (g.loops >> v & 1) != (h.loops >> perm[v] & 1):
                return None
        return tuple(perm)
    x = src[idx][0]
    for y in dst[idx]:
        found = _extend_map(g, h, _individualize(src, idx, x), _individualize(dst, idx, y))
        if found is not None:
            return found
    return None


def _extend_automorphism(g: Graph, src: list[list[int]], dst: list[list[int]]) -> tuple[int, ...] | None:
    return _extend_map(g, g, src, dst)


def find_isomorphism(a: Graph, b: Graph) -> tuple[int, ...] | None:
    """A vertex map a -> b preserving edges, non-edges and loops, or None."""
    if a.n != b.n or a.num_edges != b.num_edges or a.loops.bit_count() != b.loops.bit_count():
        return None
    return _extend_map(a, b, _initial_cells(a), _initial_cells(b))


def _compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """p after q."""
    return tuple(p[q[v]] for v in range(len(q)))


@dataclass(frozen=True)
class AutomorphismGroup:
    """Stabilizer chain: ``transversals[k]`` maps each orbit point of ``base[k]``
    (under the pointwise stabilizer of ``base[:k]``) to an element sending
    ``base[k]`` there."""

    n: int
    base: tuple[int, ...]
    transversals: tuple[dict[int, tuple[int, ...]], ...]
    generators: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        total = 1
        for t in self.transversals:
            total *= len(t)
        return total

    def elements(self) -> Iterator[tuple[int, ...]]:
        identity = tuple(range(self.n))
        for reps in itertools.product(*(list(t.values()) for t in self.transversals)):
            p = identity
            for r in reps:
                p = _compose(p, r)
            yield p

    def orbits(self) -> list[list[int]]:
        cls = _orbit_classes(list(self.generators), self.n)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(cls[v], []).append(v)
        return sorted(groups.values())


@lru_cache(maxsize=128)
def automorphism_group(g: Graph) -> AutomorphismGroup:
    identity = tuple(range(g.n))
    base: list[int] = []
    cells = _refine(g, _initial_cells(g))
    chain_cells = []
    while True:
        idx = _target_cell(cells)
        if idx < 0:
            break
        b = cells[idx][0]
        chain_cells.append((cells, idx))
        base.append(b)
        cells = _refine(g, _individualize(cells, idx, b))

    gens: list[tuple[int, ...]] = []
    transversals: list[dict[int, tuple[int, ...]]] = [dict() for _ in base]
    for k in range(len(base) - 1, -1, -1):
        cells_k, idx = chain_cells[k]
        b = base[k]
        prefix = base[:k]
        level_gens = [p for p in gens if all(p[u] == u for u in prefix)]
        trans = {b: identity}

        def close():
            frontier = list(trans)
            while frontier:
                pt = frontier.pop()
                for p in level_gens:
                    img = p[pt]
                    if img not in trans:
                        trans[img] = _compose(p, trans[pt])
                        frontier.append(img)

        close()
        for c in cells_k[idx]:
            if c in trans:
                continue
            found = _extend_automorphism(g, _individualize(cells_k, idx, b), _individualize(cells_k, idx, c))
            if found is not None:
                gens.append(found)
                level_gens.append(found)
                trans[c] = found
                close()
        transversals[k] = trans
    return AutomorphismGroup(g.n, tuple(base), tuple(transversals), tuple(gens))


def automorphisms(g: Graph) -> list[Permutation]:
    if g.n > AUTOMORPHISM_CAP:
        raise UnsupportedGraphError(f"explicit automorphism lists support n <= {AUTOMORPHISM_CAP}")
    return sorted(automorphism_group(g).elements())


def is_vertex_transitive(g: Graph) -> bool:
    return len(automorphism_group(g).orbits()) <= 1
