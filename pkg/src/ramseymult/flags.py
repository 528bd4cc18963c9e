"""Flag densities and exact checking of sum-of-squares lower-bound certificates.

Flags are stored normalized: the labelled vertices are ``0..v-1`` in label
order.  Everything is exact; there is no floating point in this module.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .graphs import Graph, canonical_key, complement, count_cliques, emit_graph6, enumerate_graphs, parse_graph6

log = logging.getLogger(__name__)

Matrix = list[list[Fraction]]


class CertificateError(ValueError):
    """Structural problem with a certificate or flag."""


class VerificationFailure(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# -- types and flags ----------------------------------------------------------------

@dataclass(frozen=True)
class Flag:
    """Graph whose vertices 0..v-1 carry labels 0..v-1."""

    graph: Graph
    v: int

    def __post_init__(self):
        if not 0 <= self.v <= self.graph.n:
            raise CertificateError("label count exceeds flag order")

    @classmethod
    def from_embedding(cls, graph: Graph, embedding: Sequence[int]) -> Flag:
        """``embedding[i]`` is the vertex of ``graph`` carrying label i."""
        if len(set(embedding)) != len(embedding) or any(not 0 <= x < graph.n for x in embedding):
            raise CertificateError(f"embedding {list(embedding)} is not injective into {graph.n} vertices")
        rest = [u for u in range(graph.n) if u not in set(embedding)]
        order = list(embedding) + rest
        perm = [0] * graph.n
        for i, u in enumerate(order):
            perm[u] = i
        return cls(graph.relabel(perm), len(embedding))

    @property
    def order(self) -> int:
        return self.graph.n

    def key(self) -> tuple:
        return canonical_key(self.graph, range(self.v))

    def type_graph(self) -> Graph:
        return self.graph.induced(range(self.v))

    def to_json(self) -> dict:
        return {"graph6": emit_graph6(self.graph), "embedding": list(range(self.v))}


def flag_type(graph: Graph, labels: Sequence[int] | None = None) -> Flag:
    """A type is a fully labelled flag."""
    labels = list(range(graph.n)) if labels is None else list(labels)
    if sorted(labels) != list(range(graph.n)):
        raise CertificateError("type labels must be a bijection onto the type's vertices")
    return Flag.from_embedding(graph, labels)


def enumerate_flags(tau: Flag, l: int, forbidden: Sequence[Graph] = ()) -> list[Flag]:
    """One flag per isomorphism class (fixing labels) of order l over type tau."""
    if tau.v != tau.order:
        raise CertificateError("type must be fully labelled")
    if l > 6:
        raise ValueError("flag enumeration supports l <= 6")
    if l < tau.v:
        return []
    level = {tau.key(): tau}
    for n in range(tau.v + 1, l + 1):
        nxt: dict[tuple, Flag] = {}
        for f in level.values():
            for nbhd in range(1 << (n - 1)):
                rows = [row | ((nbhd >> u & 1) << (n - 1)) for u, row in enumerate(f.graph.adj)]
                rows.append(nbhd)
                cand = Flag(Graph(n, tuple(rows)), tau.v)
                k = cand.key()
                if k not in nxt:
                    nxt[k] = cand
        level = nxt
    from .graphs import contains_subgraph
    out = [f for f in level.values() if not any(contains_subgraph(f.graph, x) for x in forbidden)]
    return sorted(out, key=Flag.key)


# -- densities --------------------------------------------------------------------

def subgraph_density(H: Graph, G: Graph) -> Fraction:
    """Probability that |V(H)| random vertices of G induce a copy of H."""
    k = H.n
    if k > G.n:
        raise ValueError("H is larger than G")
    target = canonical_key(H)
    hits = sum(1 for sub in itertools.combinations(range(G.n), k) if canonical_key(G.induced(sub)) == target)
    return Fraction(hits, math.comb(G.n, k))


def _subset_classes(H: Graph, theta: Sequence[int], size: int) -> list[tuple[int, tuple]]:
    """(mask, flag key) for each size-subset of the unlabelled vertices."""
    rest = [u for u in range(H.n) if u not in set(theta)]
    out = []
    for sub in itertools.combinations(rest, size):
        mask = 0
        for u in sub:
            mask |= 1 << u
        f = Flag(H.induced(list(theta) + list(sub)), len(theta))
        out.append((mask, f.key()))
    return out


def pair_density_table(H: Graph, tau: Flag, l: int, keys: Sequence[tuple]) -> Matrix:
    """D[a][b] = d_{F_a, F_b}(H) for the flags with the given keys."""
    v = tau.v
    m = H.n
    size = l - v
    if m < 2 * l - v:
        raise ValueError(f"host order {m} is below 2l - v = {2 * l - v}")
    index = {k: i for i, k in enumerate(keys)}
    r = len(keys)
    counts = [[0] * r for _ in range(r)]
    tkey = tau.key()
    thetas = 0
    for theta in itertools.permutations(range(m), v):
        thetas += 1
        if Flag(H.induced(theta), v).key() != tkey:
            continue
        classes = [(mask, index.get(k)) for mask, k in _subset_classes(H, theta, size)]
        classes = [(mask, i) for mask, i in classes if i is not None]
        for m1, a in classes:
            row = counts[a]
            for m2, b in classes:
                if not m1 & m2:
                    row[b] += 1
    denom = thetas * math.comb(m - v, size) * math.comb(m - l, size)
    return [[Fraction(c, denom) for c in row] for row in counts]


def pair_density(F: Flag, F2: Flag, H: Graph) -> Fraction:
    if F.v != F2.v or F.order != F2.order:
        raise ValueError("flags must share type and order")
    if F.type_graph() != F2.type_graph():
        raise ValueError("flags must have the same type")
    tau = Flag(F.type_graph(), F.v)
    keys = [F.key(), F2.key()]
    if keys[0] == keys[1]:
        return pair_density_table(H, tau, F.order, keys[:1])[0][0]
    return pair_density_table(H, tau, F.order, keys)[0][1]


def flag_density(F: Flag, G: Graph, theta: Sequence[int]) -> Fraction:
    """Probability that l - v random unlabelled vertices of G complete theta to F."""
    size = F.order - F.v
    key = F.key()
    classes = _subset_classes(G, theta, size)
    return Fraction(sum(1 for _, k in classes if k == key), len(classes))


# -- objective ----------------------------------------------------------------------

@dataclass(frozen=True)
class CliqueObjective:
    """lambda(H) = ws d(independent s-set, H) + wt d(K_t, H)."""

    s: int
    t: int
    ws: Fraction = Fraction(1)
    wt: Fraction = Fraction(1)

    def value(self, H: Graph) -> Fraction:
        x = Fraction(count_cliques(complement(H), self.s), math.comb(H.n, self.s)) if H.n >= self.s else Fraction(0)
        y = Fraction(count_cliques(H, self.t), math.comb(H.n, self.t)) if H.n >= self.t else Fraction(0)
        return self.ws * x + self.wt * y


# -- exact linear algebra -------------------------------------------------------------

@dataclass
class PsdResult:
    psd: bool
    pivots: list[Fraction]
    witness: list[Fraction] | None = None
    minor: list[int] | None = None

    def __bool__(self) -> bool:
        return self.psd


def _as_matrix(Q) -> Matrix:
    M = [[Fraction(x) for x in row] for row in Q]
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(i + 1, n):
            if M[i][j] != M[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i}, {j})")
    return M


def _solve(A: Matrix, b: list[Fraction]) -> list[Fraction]:
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def psd_check(Q) -> PsdResult:
    """Exact LDL^T with largest-diagonal symmetric pivoting.

    On failure the witness x has x^T Q x < 0 and ``minor`` lists indices of a
    principal submatrix that is not positive semidefinite.
    """
    M = _as_matrix(Q)
    n = len(M)
    A = [row[:] for row in M]
    remaining = list(range(n))
    done: list[int] = []
    pivots: list[Fraction] = []

    def lift(local: dict[int, Fraction]) -> list[Fraction]:
        # minimize over the eliminated coordinates: y_K = -Q_KK^{-1} Q_KR x_R
        x = [Fraction(0)] * n
        for i, val in local.items():
            x[i] = val
        if done:
            QKK = [[M[a][b] for b in done] for a in done]
            rhs = [-sum(M[a][i] * val for i, val in local.items()) for a in done]
            for a, val in zip(done, _solve(QKK, rhs)):
                x[a] = val
        return x

    while remaining:
        neg = next((i for i in remaining if A[i][i] < 0), None)
        if neg is not None:
            x = lift({neg: Fraction(1)})
            return PsdResult(False, pivots, x, done + [neg])
        p = max(remaining, key=lambda i: (A[i][i], -i))
        if A[p][p] == 0:
            off = next(((i, j) for i in remaining for j in remaining if i < j and A[i][j] != 0), None)
            if off is None:
                pivots.extend(Fraction(0) for _ in remaining)
                break
            i, j = off
            sign = 1 if A[i][j] > 0 else -1
            x = lift({i: Fraction(1), j: Fraction(-sign)})
            return PsdResult(False, pivots, x, done + [i, j])
        piv = A[p][p]
        pivots.append(piv)
        remaining.remove(p)
        done.append(p)
        for i in remaining:
            if A[i][p] == 0:
                continue
            f = A[i][p] / piv
            for j in remaining:
                A[i][j] -= f * A[p][j]
    return PsdResult(True, pivots)


def rank(Q) -> int:
    A = [[Fraction(x) for x in row] for row in Q]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, rows):
            if A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
    return r


def corank(Q) -> int:
    return len(Q) - rank(Q)


def quad_inner(Q: Matrix, D: Matrix) -> Fraction:
    return sum((q * d for qrow, drow in zip(Q, D) for q, d in zip(qrow, drow)), Fraction(0))


# -- certificates ---------------------------------------------------------------------

def _frac(x) -> Fraction:
    return Fraction(x) if not isinstance(x, str) else Fraction(x.strip())


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class FlagCertificate:
    m: int
    forbidden: list[Graph]
    objective: CliqueObjective
    types: list[Flag]
    flags: list[list[Flag]]
    Q: list[Matrix]

    @classmethod
    def from_json(cls, data: dict) -> FlagCertificate:
        try:
            obj = data["objective"]
            objective = CliqueObjective(int(obj["s"]), int(obj["t"]), _frac(obj.get("ws", "1")), _frac(obj.get("wt", "1")))
            types = [flag_type(parse_graph6(t["graph6"]), t.get("labels")) for t in data.get("types", [])]
            flags = [[Flag.from_embedding(parse_graph6(f["graph6"]), f["embedding"]) for f in fl]
                     for fl in data.get("flags", [])]
            Q = [[[_frac(x) for x in row] for row in q] for q in data.get("Q", [])]
            return cls(int(data["m"]), [parse_graph6(g) for g in data.get("forbidden", [])], objective, types, flags, Q)
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateError(f"malformed certificate: {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> FlagCertificate:
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        o = self.objective
        return {
            "m": self.m,
            "forbidden": [emit_graph6(g) for g in self.forbidden],
            "objective": {"s": o.s, "t": o.t, "ws": _frac_str(o.ws), "wt": _frac_str(o.wt)},
            "types": [{"graph6": emit_graph6(t.graph), "labels": list(range(t.v))} for t in self.types],
            "flags": [[f.to_json() for f in fl] for fl in self.flags],
            "Q": [[[_frac_str(x) for x in row] for row in q] for q in self.Q],
        }

    def flag_order(self, i: int) -> int:
        return (self.m + self.types[i].v) // 2


def check_structure(cert: FlagCertificate, max_m: int = 6) -> None:
    if cert.m > max_m:
        raise CertificateError(f"m = {cert.m} exceeds the supported maximum {max_m}")
    if cert.m > 6:
        log.warning("m = %d: enumeration and density tables will be slow", cert.m)
    if not (len(cert.types) == len(cert.flags) == len(cert.Q)):
        raise CertificateError("types, flags and Q must have the same length")
    for i, (tau, fl, q) in enumerate(zip(cert.types, cert.flags, cert.Q)):
        v = tau.v
        if (cert.m - v) % 2:
            raise CertificateError(f"type {i}: order {v} has the wrong parity for m = {cert.m}")
        if v > cert.m - 2:
            raise CertificateError(f"type {i}: order {v} exceeds m - 2")
        l = (cert.m + v) // 2
        keys = set()
        for j, f in enumerate(fl):
            if f.order != l or f.v != v:
                raise CertificateError(f"type {i}, flag {j}: expected order {l} with {v} labels")
            if f.type_graph() != tau.graph:
                raise CertificateError(f"type {i}, flag {j}: labelled vertices do not induce the type")
            k = f.key()
            if k in keys:
                raise CertificateError(f"type {i}, flag {j}: duplicate flag")
            keys.add(k)
        if len(q) != len(fl) or any(len(row) != len(fl) for row in q):
            raise CertificateError(f"Q[{i}] must be {len(fl)}x{len(fl)}")


@dataclass
class GraphRow:
    graph: Graph
    value: Fraction
    slack: Fraction = Fraction(0)


@dataclass
class VerificationReport:
    bound: Fraction
    rows: list[GraphRow]
    psd: list[PsdResult] = field(default_factory=list)

    def sharp(self) -> list[Graph]:
        return [r.graph for r in self.rows if r.value == self.bound]

    def to_json(self) -> dict:
        return {
            "bound": _frac_str(self.bound),
            "graphs": [{"graph6": emit_graph6(r.graph), "value": _frac_str(r.value), "slack": _frac_str(r.slack)}
                       for r in self.rows],
            "pivots": [[_frac_str(p) for p in r.pivots] for r in self.psd],
        }


def graph_value(cert: FlagCertificate, H: Graph) -> Fraction:
    """lambda(H) minus the sum of <Q_i, D_i(H)>."""
    total = cert.objective.value(H)
    for i, (tau, fl) in enumerate(zip(cert.types, cert.flags)):
        if not fl:
            continue
        D = pair_density_table(H, tau, cert.flag_order(i), [f.key() for f in fl])
        total -= quad_inner(cert.Q[i], D)
    return total


def verify_certificate(cert: FlagCertificate, max_m: int = 6, threads: int = 1) -> VerificationReport:
    """Check structure and positive semidefiniteness, then return the bound
    min over m-vertex forbidden-free H of lambda(H) - sum_i <Q_i, D_i(H)>."""
    check_structure(cert, max_m)
    results = []
    for i, q in enumerate(cert.Q):
        try:
            res = psd_check(q)
        except ValueError as exc:
            raise CertificateError(f"Q[{i}]: {exc}") from None
        if not res:
            raise VerificationFailure(
                f"Q[{i}] is not positive semidefinite: principal minor on indices {res.minor} fails, "
                f"witness {[_frac_str(x) for x in res.witness]}", res.witness)
        results.append(res)
    graphs = enumerate_graphs(cert.m, cert.forbidden)
    if not graphs:
        raise CertificateError("no forbidden-free graphs of order m")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(lambda H: graph_value(cert, H), graphs))
    else:
        values = [graph_value(cert, H) for H in graphs]
    bound = min(values)
    rows = [GraphRow(H, val, val - bound) for H, val in zip(graphs, values)]
    return VerificationReport(bound, rows, results)


def sharp_graphs(cert: FlagCertificate, bound: Fraction) -> list[Graph]:
    return [H for H in enumerate_graphs(cert.m, cert.forbidden) if graph_value(cert, H) == bound]


def zero_eigenvector(cert: FlagCertificate, i: int, C: Graph, w: Sequence, psi: Sequence[int]) -> list[Fraction]:
    """Densities of the type-i flags rooted at psi in the w-weighted blow-up of C.

    The unlabelled vertices are drawn independently by w; two vertices drawn
    from the same part, or from a labelled vertex's part, are adjacent exactly
    when that part is looped.
    """
    tau = cert.types[i]
    v = tau.v
    if len(psi) != v or len(set(psi)) != v:
        raise CertificateError("psi must be an injective labelling of the type")
    if C.induced(list(psi)).without_loops() != tau.graph:
        raise CertificateError("psi does not induce the type in C")
    w = [Fraction(x) for x in w]
    size = cert.flag_order(i) - v
    index = {f.key(): j for j, f in enumerate(cert.flags[i])}
    x = [Fraction(0)] * len(cert.flags[i])
    for parts in itertools.product(range(C.n), repeat=size):
        weight = Fraction(1)
        for p in parts:
            weight *= w[p]
        if not weight:
            continue
        verts = list(psi) + list(parts)
        n = len(verts)
        rows = [0] * n
        for a in range(n):
            for b in range(a + 1, n):
                pa, pb = verts[a], verts[b]
                if (C.has_loop(pa) if pa == pb else C.has_edge(pa, pb)):
                    rows[a] |= 1 << b
                    rows[b] |= 1 << a
        j = index.get(Flag(Graph(n, tuple(rows)), v).key())
        if j is not None:
            x[j] += weight
    return x


def zero_eigenvector_check(cert: FlagCertificate, i: int, C: Graph, w: Sequence, psi: Sequence[int]) -> bool:
    x = zero_eigenvector(cert, i, C, w, psi)
    return all(sum((q * xi for q, xi in zip(row, x)), Fraction(0)) == 0 for row in cert.Q[i])


def toy_certificate() -> FlagCertificate:
    """m = 3, one labelled vertex, lambda = independent 3-sets plus triangles; bound 1/4."""
    tau = flag_type(Graph.empty(1))
    edge = Flag(Graph.complete(2), 1)
    nonedge = Flag(Graph.empty(2), 1)
    q = Fraction(3, 4)
    return FlagCertificate(3, [], CliqueObjective(3, 3), [tau], [[edge, nonedge]], [[[q, -q], [-q, q]]])
