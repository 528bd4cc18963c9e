"""Checkable preconditions for stability and uniqueness-of-weighting arguments:
unique embeddings, unique neighborhoods, reconstructor conditions and the
structural conditions for symmetric optimal weights.

These report whether preconditions hold.  They do not prove stability.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .flags import FlagCertificate, corank
from .graphs import Graph, automorphism_group, canonical_key, is_isomorphic, strong_homomorphisms, CANONICAL_CAP


@dataclass(frozen=True)
class EmbeddingReport:
    count: int
    unique_up_to_automorphism: bool
    orbit_size: int
    witness: tuple[int, ...] | None

    def __bool__(self) -> bool:
        return self.unique_up_to_automorphism

    def to_json(self) -> dict:
        return {"count": self.count, "unique": self.unique_up_to_automorphism, "orbit_size": self.orbit_size,
                "witness": list(self.witness) if self.witness is not None else None}


@lru_cache(maxsize=4096)
def _embeds(T: Graph, C: Graph) -> EmbeddingReport:
    homs = strong_homomorphisms(T, C)
    if not homs:
        return EmbeddingReport(0, False, 0, None)
    left = automorphism_group(C).generators
    right = automorphism_group(T).generators
    start = homs[0]
    orbit = {start}
    frontier = [start]
    while frontier:
        psi = frontier.pop()
        for g in left:
            img = tuple(g[x] for x in psi)
            if img not in orbit:
                orbit.add(img)
                frontier.append(img)
        for h in right:
            img = tuple(psi[h[x]] for x in range(T.n))
            if img not in orbit:
                orbit.add(img)
                frontier.append(img)
    return EmbeddingReport(len(homs), len(orbit) == len(homs), len(orbit), start)


def _canonical_copy(T: Graph) -> Graph:
    if T.n > CANONICAL_CAP:
        return T
    from .graphs import canonical_form
    return canonical_form(T)


def uniquely_embeds(T: Graph, C: Graph) -> EmbeddingReport:
    """Whether all strong homomorphisms T -> C lie in one Aut(C) x Aut(T) orbit.

    The witness is given for the canonical relabelling of T when T is small.
    """
    if T.n > 7:
        raise ValueError("embedding checks support |V(T)| <= 7")
    if C.n > 30:
        raise ValueError("embedding checks support |V(C)| <= 30")
    return _embeds(_canonical_copy(T), C)


def _nbhd_key(C: Graph, X: int, v: int) -> int:
    return C.adj[v] & X


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def neighborhood_classes(X: Sequence[int], C: Graph) -> list[list[int]]:
    """Classes of vertices of C with the same neighbors inside X."""
    xm = _mask(X)
    groups: dict[int, list[int]] = {}
    for v in range(C.n):
        groups.setdefault(_nbhd_key(C, xm, v), []).append(v)
    return sorted(groups.values())


def vertex_class(X: Sequence[int], C: Graph, v: int) -> list[int]:
    xm = _mask(X)
    key = _nbhd_key(C, xm, v)
    return [u for u in range(C.n) if _nbhd_key(C, xm, u) == key]


def singleton_vertices(X: Sequence[int], C: Graph) -> set[int]:
    return {c[0] for c in neighborhood_classes(X, C) if len(c) == 1}


def defines_unique_neighborhoods(X: Sequence[int], C: Graph) -> tuple[bool, list[int] | None]:
    """(True, None) if every vertex has its own neighborhood inside X, else
    (False, first class with two or more vertices)."""
    for cls in neighborhood_classes(X, C):
        if len(cls) > 1:
            return False, cls
    return True, None


@dataclass
class ConditionReport:
    ok: bool
    conditions: dict[str, bool | None] = field(default_factory=dict)
    reasons: list[str] = field(default_factory=list)
    witnesses: dict[str, object] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "conditions": self.conditions, "reasons": self.reasons,
                "witnesses": {k: v for k, v in self.witnesses.items()}}


def check_reconstructor_simple(X: Sequence[int], C: Graph, ell: int) -> ConditionReport:
    """(i) |X| <= ell - 2, (ii) C[X] uniquely embeds into C, (iii) X defines unique neighborhoods."""
    X = sorted(set(X))
    size_ok = len(X) <= ell - 2
    embeds = bool(uniquely_embeds(C.induced(X), C)) if len(X) <= 7 else False
    unique, cls = defines_unique_neighborhoods(X, C)
    rep = ConditionReport(size_ok and embeds and unique, {"i": size_ok, "ii": embeds, "iii": unique})
    if not size_ok:
        rep.reasons.append(f"(i) |X| = {len(X)} exceeds ell - 2 = {ell - 2}")
    if not embeds:
        rep.reasons.append("(ii) C[X] does not embed uniquely")
    if not unique:
        rep.reasons.append(f"(iii) vertices {cls} share a neighborhood in X")
        rep.witnesses["iii"] = cls
    return rep


def _pair_witness(C: Graph, X: Sequence[int], v1: int, v2: int, ell: int) -> list[int] | None:
    for size in range(0, min(len(X), ell - 2) + 1):
        for sub in itertools.combinations(X, size):
            sub = list(sub)
            if v1 == v2:
                if vertex_class(sub, C, v1) == [v1] and uniquely_embeds(C.induced(sub + [v1]), C):
                    return sub
                continue
            c1 = vertex_class(sub, C, v1)
            if v2 in c1:
                continue
            c2 = vertex_class(sub, C, v2)
            edges = sum(1 for a in c1 for b in c2 if C.has_edge(a, b))
            if edges not in (0, len(c1) * len(c2)):
                continue
            if uniquely_embeds(C.induced(sub + [v1]), C) or uniquely_embeds(C.induced(sub + [v2]), C):
                return sub
    return None


def check_reconstructor_strong(X: Sequence[int], Xp: Sequence[int], C: Graph, ell: int) -> ConditionReport:
    """Conditions (1a)/(1b), (2) and (3a)/(3b) for C[X] to be an ell-reconstructor.

    For (3) every pair v1, v2 outside X (v1 = v2 allowed) gets the first
    witness X'' found by increasing size.
    """
    X = sorted(set(X))
    Xp = sorted(set(Xp))
    rep = ConditionReport(False)
    if not set(Xp) <= set(X):
        rep.reasons.append("X' must be a subset of X")
        return rep
    c1a = len(X) == len(Xp) <= ell - 1 and len(X) <= 7 and bool(uniquely_embeds(C.induced(X), C))
    c1b = (len(X) == ell and len(Xp) <= ell - 2 and len(Xp) + 1 <= 7
           and all(uniquely_embeds(C.induced(Xp + [x]), C) for x in X))
    c2, cls = defines_unique_neighborhoods(Xp, C)
    rep.conditions.update({"1a": c1a, "1b": c1b, "2": c2})
    if not (c1a or c1b):
        rep.reasons.append("(1) neither size/embedding alternative holds")
    if not c2:
        rep.reasons.append(f"(2) vertices {cls} share a neighborhood in X'")
    outside = [v for v in range(C.n) if v not in set(X)]
    pairs: dict[str, list[int]] = {}
    c3 = True
    for v1, v2 in itertools.combinations_with_replacement(outside, 2):
        wit = _pair_witness(C, X, v1, v2, ell)
        if wit is None:
            c3 = False
            tag = "3a" if v1 == v2 else "3b"
            rep.reasons.append(f"({tag}) no valid X'' for vertices ({v1}, {v2})")
            break
        pairs[f"{v1},{v2}"] = wit
    rep.conditions["3"] = c3
    rep.witnesses["3"] = pairs
    rep.ok = (c1a or c1b) and c2 and c3
    return rep


def check_symmetry_conditions(cert: FlagCertificate | None, C: Graph, w: Sequence | None,
                              Xs: Sequence[Sequence[int]], js: Sequence[int] | None = None,
                              gap_attestation: str | None = None) -> ConditionReport:
    """Conditions (a)-(e) for the weighting w of C to be the unique optimum.

    The strict gap in (a) needs a second certificate and is only recorded as
    an attestation.  Without a certificate, (d) and (e) are reported as None.
    """
    rep = ConditionReport(False)
    Xs = [sorted(set(X)) for X in Xs]
    if not Xs:
        rep.reasons.append("need at least one set X_1")
        return rep
    if w is not None:
        positive = all(x != 0 for x in w) and len(w) == C.n
        rep.conditions["weights_positive"] = positive
        if not positive:
            rep.reasons.append("weights must be nonzero on every vertex")
    a = bool(uniquely_embeds(C.induced(Xs[0]), C))
    rep.conditions["a_embeds"] = a
    rep.conditions["a_gap"] = None if gap_attestation is None else True
    if gap_attestation is not None:
        rep.witnesses["a_gap"] = gap_attestation
    if not a:
        rep.reasons.append("(a) C[X_1] does not embed uniquely")
    covered: set[int] = set()
    b = True
    singles = []
    for i, X in enumerate(Xs):
        allowed = set(Xs[0]) | covered
        if not set(X) <= allowed:
            b = False
            rep.reasons.append(f"(b) X_{i + 1} has vertices {sorted(set(X) - allowed)} outside the allowed set")
        s = singleton_vertices(X, C)
        singles.append(sorted(s))
        covered |= s
    rep.conditions["b"] = b
    c = covered == set(range(C.n))
    rep.conditions["c"] = c
    rep.witnesses["singletons"] = singles
    if not c:
        rep.reasons.append(f"(c) vertices {sorted(set(range(C.n)) - covered)} are never singled out")
    if cert is None or js is None:
        rep.conditions["d"] = None
        rep.conditions["e"] = None
    else:
        if len(js) != len(Xs):
            raise ValueError("need one type index per set")
        d = True
        e = True
        for X, j in zip(Xs, js):
            if not 0 <= j < len(cert.types):
                raise IndexError(f"type index {j} out of range")
            if not is_isomorphic(cert.types[j].graph, C.induced(X)):
                d = False
                rep.reasons.append(f"(d) type {j} is not a labelled copy of C[{X}]")
            k = corank(cert.Q[j])
            if k != 1:
                e = False
                rep.reasons.append(f"(e) Q[{j}] has co-rank {k}, not 1")
        rep.conditions["d"] = d
        rep.conditions["e"] = e
    rep.ok = all(v is not False for v in rep.conditions.values())
    return rep


def schlaefli_sets(one_based: bool = True) -> list[list[int]]:
    """The three vertex sets used for the Schlaefli symmetry argument, as
    0-based indices into the graph6 vertex order."""
    raw = [[1, 2, 4, 6, 7], [1, 2, 12, 13, 14], [1, 2, 4, 6, 12]]
    shift = 1 if one_based else 0
    return [[v - shift for v in X] for X in raw]
