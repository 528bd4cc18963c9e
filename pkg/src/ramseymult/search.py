"""Bit-vector search spaces, incremental cost evaluation, Simulated Annealing,
Tabu search, exhaustive enumeration and parallel restarts.

States are Python ints; bit ``i`` is entry ``i`` of the state vector.
"""

from __future__ import annotations

import json
import logging
import math
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .blowup import BlowupObjective, falling, stirling2
from .graphs import Graph, count_cliques_in
from .groups import FiniteGroup, cayley_graph

log = logging.getLogger(__name__)

EXHAUSTIVE_CAP = 24
THREADS_ENV = "RAMSEYMULT_THREADS"


class StaleCacheError(RuntimeError):
    """The cache was primed for a different state, objective or space."""


# -- spaces ----------------------------------------------------------------------

class SearchSpace:
    kind = "abstract"
    N: int

    def decode(self, state: int) -> Graph:
        raise NotImplementedError

    def random_state(self, rng: random.Random) -> int:
        return rng.getrandbits(self.N) if self.N else 0

    def evaluator(self, obj: BlowupObjective, state: int) -> "CostCache":
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind, "N": self.N}


class GraphSpace(SearchSpace):
    """Bit i is the i-th pair (u, v), u < v, in lexicographic order."""

    kind = "graph"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("graph space needs at least one vertex")
        self.n = n
        self.pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        self.N = len(self.pairs)

    def decode(self, state: int) -> Graph:
        rows = [0] * self.n
        for i, (u, v) in enumerate(self.pairs):
            if state >> i & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))

    def encode(self, g: Graph) -> int:
        return sum(1 << i for i, (u, v) in enumerate(self.pairs) if g.has_edge(u, v))

    def evaluator(self, obj: BlowupObjective, state: int) -> "CostCache":
        return GraphCostCache(self, obj, state)

    def describe(self) -> dict:
        return {"kind": self.kind, "N": self.N, "n": self.n}


class CayleySpace(SearchSpace):
    """Bit i selects the i-th inverse class {g, g^-1} of the group."""

    kind = "cayley"

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.classes = group.inverse_classes()
        self.N = len(self.classes)

    def decode(self, state: int) -> Graph:
        return cayley_graph(self.group, state)

    def genset(self, state: int) -> list[int]:
        return sorted(s for i, cls in enumerate(self.classes) if state >> i & 1 for s in cls)

    def evaluator(self, obj: BlowupObjective, state: int, memo_limit: int = 1 << 16) -> "CostCache":
        return CayleyCostCache(self, obj, state, memo_limit)

    def describe(self) -> dict:
        return {"kind": self.kind, "N": self.N, "order": self.group.order}


class FunctionSpace(SearchSpace):
    """Space whose cost is an arbitrary exact function of the state.

    ``denominator`` must clear every cost value so that costs can be compared
    as integers; flips are evaluated by recomputation (memoized).
    """

    kind = "function"

    def __init__(self, N: int, fn: Callable[[int], Fraction], denominator: int, memo_limit: int = 1 << 16):
        self.N = N
        self.fn = fn
        self.denominator = denominator
        self.memo_limit = memo_limit
        self._memo: dict[int, int] = {}
        self._lock = threading.Lock()

    def scaled(self, state: int) -> int:
        with self._lock:
            hit = self._memo.get(state)
        if hit is not None:
            return hit
        value = Fraction(self.fn(state)) * self.denominator
        if value.denominator != 1:
            raise ArithmeticError("cost is not a multiple of 1/denominator")
        with self._lock:
            if len(self._memo) < self.memo_limit:
                self._memo[state] = int(value)
        return int(value)

    def decode(self, state: int):
        return state

    def evaluator(self, obj, state: int) -> "FunctionCostCache":
        return FunctionCostCache(self, obj, state)


# -- exact scaled cost -------------------------------------------------------------

class _Scale:
    """cost = scaled / K with K chosen so that scaled is always an integer.

    With x n^s = sum_j j! S(s, j) k_j(complement) and y n^t = t! k_t, both
    terms are integers over n^s and n^t.
    """

    def __init__(self, obj: BlowupObjective, n: int):
        self.obj = obj
        a = obj.ws
        b = obj.lam * obj.wt
        d = math.lcm(a.denominator, b.denominator)
        top = max(obj.s, obj.t)
        self.K = d * n ** top
        self.ca = int(a * d) * n ** (top - obj.s)
        self.cb = int(b * d) * n ** (top - obj.t)
        self.stir = [0] + [math.factorial(j) * stirling2(obj.s, j) for j in range(1, obj.s + 1)]
        self.tfact = math.factorial(obj.t)

    def scaled(self, comp_counts: Sequence[int], kt: int) -> int:
        x = sum(self.stir[j] * comp_counts[j] for j in range(1, self.obj.s + 1))
        return self.ca * x + self.cb * self.tfact * kt

    def fraction(self, scaled: int) -> Fraction:
        return Fraction(scaled, self.K)


class _FixedScale:
    def __init__(self, K: int):
        self.K = K

    def fraction(self, scaled: int) -> Fraction:
        return Fraction(scaled, self.K)


class CostCache:
    """Cost of one state plus the data to evaluate single-bit flips quickly."""

    space: SearchSpace
    obj: BlowupObjective
    state: int
    scaled: int

    def __init__(self, space: SearchSpace, obj: BlowupObjective, n: int):
        self.space = space
        self.obj = obj
        self.scale = _Scale(obj, n)

    @property
    def cost(self) -> Fraction:
        return self.scale.fraction(self.scaled)

    def delta_scaled(self, i: int) -> int:
        raise NotImplementedError

    def delta(self, i: int) -> Fraction:
        return self.scale.fraction(self.delta_scaled(i))

    def apply(self, i: int) -> None:
        raise NotImplementedError

    def check(self, space: SearchSpace, state: int, obj: BlowupObjective) -> None:
        if space is not self.space or state != self.state or obj != self.obj:
            raise StaleCacheError("cache is not primed for this (space, state, objective)")


class FunctionCostCache(CostCache):
    def __init__(self, space: FunctionSpace, obj, state: int):
        self.space = space
        self.obj = obj
        self.scale = _FixedScale(space.denominator)
        self.state = state
        self.scaled = space.scaled(state)

    def delta_scaled(self, i: int) -> int:
        return self.space.scaled(self.state ^ (1 << i)) - self.scaled

    def apply(self, i: int) -> None:
        self.state ^= 1 << i
        self.scaled = self.space.scaled(self.state)


class GraphCostCache(CostCache):
    """Keeps clique counts of C (order t) and its complement (orders 1..s).

    Toggling the pair uv changes k_r by the number of (r-2)-cliques in the
    common neighborhood of u and v.
    """

    def __init__(self, space: GraphSpace, obj: BlowupObjective, state: int):
        super().__init__(space, obj, space.n)
        self.prime(state)

    def prime(self, state: int) -> None:
        space: GraphSpace = self.space
        n = space.n
        g = space.decode(state)
        full = (1 << n) - 1
        self.adj = list(g.adj)
        self.cadj = [full ^ row ^ (1 << v) for v, row in enumerate(g.adj)]
        self.comp = [0] + [count_cliques_in(self.cadj, full, j) for j in range(1, self.obj.s + 1)]
        self.kt = count_cliques_in(self.adj, full, self.obj.t)
        self.state = state
        self.scaled = self.scale.scaled(self.comp, self.kt)

    def _changes(self, i: int) -> tuple[list[int], int]:
        u, v = self.space.pairs[i]
        s, t = self.obj.s, self.obj.t
        present = self.state >> i & 1
        common = self.adj[u] & self.adj[v]
        ccommon = self.cadj[u] & self.cadj[v]
        dkt = count_cliques_in(self.adj, common, t - 2)
        dcomp = [0, 0] + [count_cliques_in(self.cadj, ccommon, j - 2) for j in range(2, s + 1)]
        if present:
            return dcomp, -dkt
        return [-d for d in dcomp], dkt

    def delta_scaled(self, i: int) -> int:
        dcomp, dkt = self._changes(i)
        return self.scale.scaled(dcomp, dkt)

    def apply(self, i: int) -> None:
        dcomp, dkt = self._changes(i)
        u, v = self.space.pairs[i]
        self.adj[u] ^= 1 << v
        self.adj[v] ^= 1 << u
        self.cadj[u] ^= 1 << v
        self.cadj[v] ^= 1 << u
        self.comp = [a + b for a, b in zip(self.comp, dcomp)]
        self.kt += dkt
        self.state ^= 1 << i
        self.scaled += self.scale.scaled(dcomp, dkt)


class CayleyCostCache(CostCache):
    """Cayley graphs are vertex-transitive, so k_r = |G| k_{r-1}(N(e)) / r
    where N(e) is the neighborhood of the identity.  A flip therefore only
    needs clique counts inside the new identity neighborhood (and its
    complement), computed from rows updated by the flipped class."""

    def __init__(self, space: CayleySpace, obj: BlowupObjective, state: int, memo_limit: int = 1 << 16):
        super().__init__(space, obj, space.group.order)
        self.memo: dict[int, int] = {}
        self.memo_limit = memo_limit
        self.prime(state)

    def prime(self, state: int) -> None:
        g = self.space.decode(state)
        self.rows = list(g.adj)
        self.state = state
        self.scaled = self._scaled_for(state, self.rows)

    def _scaled_for(self, state: int, rows: Sequence[int] | Callable[[int], int]) -> int:
        hit = self.memo.get(state)
        if hit is not None:
            return hit
        G = self.space.group
        n = G.order
        e = G.identity
        row = rows if callable(rows) else rows.__getitem__
        full = (1 << n) - 1
        S = row(e)
        Sbar = full ^ S ^ (1 << e)
        local = {}
        clocal = {}
        for v in range(n):
            if S >> v & 1:
                local[v] = row(v) & S
            elif Sbar >> v & 1:
                clocal[v] = (full ^ row(v) ^ (1 << v)) & Sbar
        t, s = self.obj.t, self.obj.s
        kt_num = n * count_cliques_in(_Rows(local), S, t - 1)
        assert kt_num % t == 0
        comp = [0]
        for j in range(1, s + 1):
            num = n * count_cliques_in(_Rows(clocal), Sbar, j - 1)
            assert num % j == 0
            comp.append(num // j)
        value = self.scale.scaled(comp, kt_num // t)
        if len(self.memo) < self.memo_limit:
            self.memo[state] = value
        return value

    def _flipped_row(self, i: int) -> Callable[[int], int]:
        G = self.space.group
        cls = self.space.classes[i]
        rows = self.rows
        table = G.table

        def row(v: int) -> int:
            r = rows[v]
            for a in cls:
                r ^= 1 << table[v][a]
            return r

        return row

    def delta_scaled(self, i: int) -> int:
        new_state = self.state ^ (1 << i)
        return self._scaled_for(new_state, self._flipped_row(i)) - self.scaled

    def apply(self, i: int) -> None:
        new_state = self.state ^ (1 << i)
        row = self._flipped_row(i)
        self.scaled = self._scaled_for(new_state, row)
        self.rows = [row(v) for v in range(self.space.group.order)]
        self.state = new_state


class _Rows:
    """Sparse row lookup for clique counting inside a vertex subset."""

    __slots__ = ("rows",)

    def __init__(self, rows: dict[int, int]):
        self.rows = rows

    def __getitem__(self, v: int) -> int:
        return self.rows[v]


def delta_cost(space: SearchSpace, state: int, i: int, obj: BlowupObjective, cache: CostCache) -> Fraction:
    """cost(state with bit i flipped) - cost(state), using a primed cache."""
    cache.check(space, state, obj)
    if not 0 <= i < space.N:
        raise IndexError(f"bit {i} outside [0, {space.N})")
    return cache.delta(i)


def state_cost(space: SearchSpace, obj: BlowupObjective, state: int) -> Fraction:
    return space.evaluator(obj, state).cost


# -- schedules and results ---------------------------------------------------------

@dataclass(frozen=True)
class Schedule:
    iterations: int = 1000
    t0: float = 0.05
    temperatures: tuple[float, ...] | None = None
    tabu_len: int = 3
    seed: int = 0
    initial: int | None = None
    rejection_free: bool = False

    def temps(self) -> list[float]:
        if self.temperatures is not None:
            temps = list(self.temperatures)
            if len(temps) != self.iterations:
                raise ValueError("need one temperature per iteration")
            if any(x <= 0 for x in temps) or any(a < b for a, b in zip(temps, temps[1:])):
                raise ValueError("temperatures must be positive and nonincreasing")
            return temps
        I = self.iterations
        return [self.t0 * (I - i + 1) / I for i in range(1, I + 1)]


@dataclass
class SearchResult:
    state: int
    cost: Fraction
    trace: list[tuple[int, int, bool, Fraction]] = field(default_factory=list)
    initial: int = 0
    seed: int = 0

    def to_json(self) -> dict:
        return {"state": format(self.state, "x"), "cost": frac_str(self.cost), "initial": format(self.initial, "x"),
                "seed": self.seed}


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class RunLog:
    """Append-only JSONL log of improvement events."""

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self.start = time.monotonic()
        self.lock = threading.Lock()

    def event(self, iteration: int, cost: Fraction, state: int, **extra) -> None:
        if self.path is None:
            return
        rec = {"iteration": iteration, "cost": frac_str(cost), "state": format(state, "x"),
               "wall_time": round(time.monotonic() - self.start, 6), **extra}
        with self.lock, self.path.open("a") as fh:
            fh.write(json.dumps(rec) + "\n")


def write_checkpoint(path: str | Path, space: SearchSpace, result: SearchResult) -> None:
    Path(path).write_text(json.dumps({"space": space.describe(), **result.to_json()}, indent=1))


def read_checkpoint(path: str | Path) -> int:
    return int(json.loads(Path(path).read_text())["state"], 16)


def _initial_state(space: SearchSpace, sched: Schedule, rng: random.Random) -> int:
    if sched.initial is not None:
        if sched.initial >> space.N:
            raise ValueError("initial state has bits beyond N")
        return sched.initial
    return space.random_state(rng)


# -- algorithms --------------------------------------------------------------------

def simulated_annealing(space: SearchSpace, obj: BlowupObjective, sched: Schedule,
                        log_events: RunLog | None = None, keep_trace: bool = True) -> SearchResult:
    """Metropolis annealing over single-bit flips; returns the best visited state."""
    rng = random.Random(sched.seed)
    state = _initial_state(space, sched, rng)
    cache = space.evaluator(obj, state)
    K = cache.scale.K
    best_state, best_scaled = state, cache.scaled
    trace: list[tuple[int, int, bool, Fraction]] = []
    if space.N == 0:
        return SearchResult(state, cache.cost, trace, state, sched.seed)
    for it, temp in enumerate(sched.temps(), start=1):
        if sched.rejection_free:
            deltas = [cache.delta_scaled(b) / K for b in range(space.N)]
            weights = [1.0 if d <= 0 else math.exp(-d / temp) for d in deltas]
            bit = rng.choices(range(space.N), weights=weights)[0]
            accepted = True
            cache.apply(bit)
        else:
            bit = rng.randrange(space.N)
            d = cache.delta_scaled(bit)
            u = rng.random()
            accepted = d <= 0 or math.exp(-(d / K) / temp) >= u
            if accepted:
                cache.apply(bit)
        if cache.scaled < best_scaled:
            best_state, best_scaled = cache.state, cache.scaled
            if log_events:
                log_events.event(it, cache.cost, cache.state, seed=sched.seed)
        if keep_trace:
            trace.append((it, bit, accepted, cache.cost))
    return SearchResult(best_state, Fraction(best_scaled, K), trace, state, sched.seed)


def tabu_search(space: SearchSpace, obj: BlowupObjective, sched: Schedule,
                log_events: RunLog | None = None, keep_trace: bool = True) -> SearchResult:
    """Steepest single-flip moves with a FIFO list of recently flipped bits.

    The seed only picks the initial state; ties go to the lowest bit index.
    """
    from collections import deque

    rng = random.Random(sched.seed)
    state = _initial_state(space, sched, rng)
    cache = space.evaluator(obj, state)
    K = cache.scale.K
    best_state, best_scaled = state, cache.scaled
    tabu: deque[int] = deque()
    trace: list[tuple[int, int, bool, Fraction]] = []
    if space.N == 0:
        return SearchResult(state, cache.cost, trace, state, sched.seed)
    for it in range(1, sched.iterations + 1):
        blocked = set(tabu)
        while len(blocked) >= space.N:
            old = tabu.popleft()
            log.info("all moves tabu at iteration %d; releasing bit %d", it, old)
            blocked = set(tabu)
        choice, choice_d = -1, None
        for b in range(space.N):
            if b in blocked:
                continue
            d = cache.delta_scaled(b)
            if choice_d is None or d < choice_d:
                choice, choice_d = b, d
        cache.apply(choice)
        if sched.tabu_len > 0:
            tabu.append(choice)
            while len(tabu) > sched.tabu_len:
                tabu.popleft()
        if cache.scaled < best_scaled:
            best_state, best_scaled = cache.state, cache.scaled
            if log_events:
                log_events.event(it, cache.cost, cache.state, seed=sched.seed)
        if keep_trace:
            trace.append((it, choice, True, cache.cost))
    return SearchResult(best_state, Fraction(best_scaled, K), trace, state, sched.seed)


def exhaustive_search(space: SearchSpace, obj: BlowupObjective) -> SearchResult:
    """Global optimum over all 2^N states by Gray-code enumeration (first optimum in Gray order)."""
    if space.N > EXHAUSTIVE_CAP:
        raise ValueError(f"exhaustive search needs N <= {EXHAUSTIVE_CAP}; this space has N = {space.N}")
    cache = space.evaluator(obj, 0)
    best_state, best_scaled = 0, cache.scaled
    for k in range(1, 1 << space.N):
        bit = (k & -k).bit_length() - 1
        cache.apply(bit)
        if cache.scaled < best_scaled:
            best_state, best_scaled = cache.state, cache.scaled
    return SearchResult(best_state, Fraction(best_scaled, cache.scale.K))


ALGORITHMS = {"sa": simulated_annealing, "tabu": tabu_search}


def thread_cap(requested: int | None = None) -> int:
    if requested:
        return max(1, requested)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", THREADS_ENV, env)
    return min(8, os.cpu_count() or 1)


def derive_seeds(seed: int, count: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(count)]


class BestRecord:
    """Monotone best-so-far shared between concurrent runs."""

    def __init__(self):
        self._lock = threading.Lock()
        self._best: tuple[Fraction, int, SearchResult] | None = None

    def offer(self, run: int, result: SearchResult) -> bool:
        key = (result.cost, run)
        with self._lock:
            if self._best is None or key < self._best[:2]:
                self._best = (result.cost, run, result)
                return True
            return False

    def get(self) -> SearchResult | None:
        with self._lock:
            return None if self._best is None else self._best[2]


def parallel_restarts(space: SearchSpace, obj: BlowupObjective, sched: Schedule, restarts: int,
                      algorithm: str = "tabu", threads: int | None = None,
                      log_events: RunLog | None = None) -> tuple[SearchResult, list[SearchResult]]:
    """Independent seeded runs; the winner is the lowest cost, ties to the lowest run index."""
    fn = ALGORITHMS[algorithm]
    seeds = derive_seeds(sched.seed, restarts)
    record = BestRecord()
    results: list[SearchResult | None] = [None] * restarts

    def run(k: int) -> None:
        sub = Schedule(sched.iterations, sched.t0, sched.temperatures, sched.tabu_len, seeds[k],
                       sched.initial if k == 0 else None, sched.rejection_free)
        res = fn(space, obj, sub, log_events, keep_trace=False)
        results[k] = res
        record.offer(k, res)

    with ThreadPoolExecutor(max_workers=thread_cap(threads)) as pool:
        list(pool.map(run, range(restarts)))
    return record.get(), results
