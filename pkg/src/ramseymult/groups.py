"""Finite groups given by multiplication tables, and their Cayley graphs."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .graphs import Graph

GROUP_CAP = 1024


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    """Elements are 0..order-1; ``table[a][b]`` is the product a*b."""

    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()
    identity: int = field(init=False)
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = len(self.table)
        if n == 0 or n > GROUP_CAP:
            raise GroupError(f"group order must be in [1, {GROUP_CAP}]")
        for a, row in enumerate(self.table):
            if len(row) != n:
                raise GroupError(f"closure: row {a} has {len(row)} entries, expected {n}")
            if any(not 0 <= x < n for x in row):
                raise GroupError(f"closure: row {a} has an entry outside the group")
        ident = next((e for e in range(n) if all(self.table[e][a] == a == self.table[a][e] for a in range(n))), None)
        if ident is None:
            raise GroupError("identity: no two-sided identity element")
        inv = []
        for a in range(n):
            b = next((b for b in range(n) if self.table[a][b] == ident), None)
            if b is None or self.table[b][a] != ident:
                raise GroupError(f"inverse: element {a} has no two-sided inverse")
            inv.append(b)
        rng = random.Random(0x5EED)
        triples = itertools.product(range(n), repeat=3) if n <= 12 else (
            (rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(2000))
        t = self.table
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError(f"associativity: ({a}*{b})*{c} != {a}*({b}*{c})")
        object.__setattr__(self, "identity", ident)
        object.__setattr__(self, "inverse", tuple(inv))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(a) for a in range(n)))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(a + 1, n))

    def inverse_classes(self) -> list[tuple[int, ...]]:
        """Classes {g, g^-1} of non-identity elements, ordered by smallest member."""
        seen = set()
        out = []
        for g in range(self.order):
            if g == self.identity or g in seen:
                continue
            cls = tuple(sorted({g, self.inverse[g]}))
            seen.update(cls)
            out.append(cls)
        return out


def cyclic_group(n: int) -> FiniteGroup:
    return direct_product_group([n])


def direct_product_group(factors: Sequence[int]) -> FiniteGroup:
    """Componentwise addition on Z_f1 x ... x Z_fk; elements in lexicographic order."""
    order = 1
    for f in factors:
        if f < 1:
            raise GroupError("cyclic factors must have positive order")
        order *= f
    if order > GROUP_CAP:
        raise GroupError(f"group order {order} exceeds cap {GROUP_CAP}")
    elems = list(itertools.product(*(range(f) for f in factors)))
    index = {e: i for i, e in enumerate(elems)}
    table = tuple(
        tuple(index[tuple((x + y) % f for x, y, f in zip(a, b, factors))] for b in elems) for a in elems
    )
    labels = tuple(",".join(map(str, e)) if len(factors) > 1 else str(e[0]) for e in elems)
    return FiniteGroup(table, labels)


def parse_group_table(text: str) -> FiniteGroup:
    tokens = text.split()
    if not tokens:
        raise GroupError("empty group table")
    try:
        values = [int(x) for x in tokens]
    except ValueError as exc:
        raise GroupError(f"non-integer entry: {exc}") from None
    n = values[0]
    body = values[1:]
    if len(body) != n * n:
        raise GroupError(f"expected {n}x{n} table entries, got {len(body)}")
    base = min(body) if body else 0
    if base not in (0, 1):
        raise GroupError("labels must be consecutive integers starting at 0 or 1")
    rows = tuple(tuple(x - base for x in body[i * n:(i + 1) * n]) for i in range(n))
    return FiniteGroup(rows, tuple(str(i + base) for i in range(n)))


def load_group_table(path: str | Path) -> FiniteGroup:
    return parse_group_table(Path(path).read_text())


def cayley_graph(G: FiniteGroup, genset_bits: int | Sequence[int]) -> Graph:
    """Cayley graph with edges {g, g*s} for s in the selected inverse classes.

    ``genset_bits`` is an int whose bit i selects ``G.inverse_classes()[i]``,
    or an explicit 0/1 sequence.
    """
    classes = G.inverse_classes()
    if not isinstance(genset_bits, int):
        genset_bits = sum(1 << i for i, b in enumerate(genset_bits) if b)
    if genset_bits >> len(classes):
        raise ValueError("generator bits beyond the number of inverse classes")
    gens = [s for i, cls in enumerate(classes) if genset_bits >> i & 1 for s in cls]
    rows = []
    for g in range(G.order):
        row = 0
        for s in gens:
            row |= 1 << G.table[g][s]
        rows.append(row)
    return Graph(G.order, tuple(rows))
