"""Command-line entry point: ``ramseymult <subcommand> [options]``.

Exit codes: 0 success, 1 verification failure or value mismatch, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import difflib
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import ap, blowup, flags, graphs, region, search, stability, xorprod
from .groups import GroupError, cyclic_group, direct_product_group, load_group_table
from .named import BY_NAME

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Mismatch(Exception):
    pass


def fstr(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# -- shared argument groups -------------------------------------------------------

def add_graph_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("graph input")
    g.add_argument("--graph6", help="graph in graph6 format")
    g.add_argument("--graph-json", help='JSON file {"n":..,"edges":[[i,j],..],"loops":[..]}')
    g.add_argument("--named", choices=sorted(BY_NAME), help="built-in graph")
    g.add_argument("--complement", action="store_true", help="use the complement (loops unchanged)")
    g.add_argument("--looped-complement", action="store_true", help="use the looped complement")
    p.set_defaults(_graph_required=required)


def read_graph(args) -> graphs.Graph | None:
    sources = [x for x in (args.graph6, args.graph_json, args.named) if x]
    if len(sources) > 1:
        raise UsageError("give only one of --graph6, --graph-json, --named")
    if not sources:
        if args._graph_required:
            raise UsageError("a graph is required (--graph6, --graph-json or --named)")
        return None
    if args.graph6:
        g = graphs.parse_graph6(args.graph6)
    elif args.graph_json:
        g = graphs.Graph.from_json(json.loads(Path(args.graph_json).read_text()))
    else:
        g = BY_NAME[args.named]()
    if args.complement:
        g = graphs.complement(g)
    if args.looped_complement:
        g = graphs.looped_complement(g)
    return g


def add_objective_args(p: argparse.ArgumentParser, s: int | None = None, t: int | None = None) -> None:
    p.add_argument("--s", type=int, default=s, required=s is None, help="independent set order")
    p.add_argument("--t", type=int, default=t, required=t is None, help="clique order")
    p.add_argument("--ws", type=parse_frac, default=Fraction(1), help="weight of the independent set term")
    p.add_argument("--wt", type=parse_frac, default=Fraction(1), help="weight of the clique term")
    p.add_argument("--lam", type=parse_frac, default=Fraction(1), help="penalty multiplier on the clique term")


def objective(args) -> blowup.BlowupObjective:
    return blowup.BlowupObjective(args.s, args.t, args.ws, args.wt, args.lam)


def parse_weights(text: str | None, n: int):
    if not text:
        return None
    return blowup.check_weights([Fraction(x) for x in text.split(",")], n)


def write_out(args, payload: dict) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(json.dumps(payload, indent=1) + "\n")


# -- subcommands ------------------------------------------------------------------

def cmd_count(args) -> int:
    g = read_graph(args)
    res = {}
    for t in args.t:
        res[t] = graphs.count_cliques(g, t)
        print(f"k{t}={res[t]}")
    write_out(args, {"n": g.n, "cliques": {str(k): v for k, v in res.items()}})
    return EXIT_OK


def cmd_density(args) -> int:
    g = read_graph(args)
    w = parse_weights(args.weights, g.n)
    x, y = blowup.blowup_density_pair(g, args.s, args.t, w)
    print(f"x={fstr(x)} y={fstr(y)} sum={fstr(x + y)}")
    write_out(args, {"x": fstr(x), "y": fstr(y), "sum": fstr(x + y)})
    return EXIT_OK


def cmd_cost(args) -> int:
    g = read_graph(args)
    obj = objective(args)
    if args.optimize:
        res = blowup.optimize_weights(g, obj)
        print(f"cost={fstr(res.value)} uniform={fstr(res.uniform_value)} converged={res.converged}")
        print("weights=" + ",".join(fstr(w) for w in res.weights))
        write_out(args, {"cost": fstr(res.value), "uniform": fstr(res.uniform_value), "converged": res.converged,
                         "weights": [fstr(w) for w in res.weights]})
        return EXIT_OK
    w = parse_weights(args.weights, g.n)
    value = blowup.cost(g, obj, w)
    print(f"cost={fstr(value)}")
    write_out(args, {"cost": fstr(value)})
    return EXIT_OK


def make_space(args) -> search.SearchSpace:
    if args.group_table:
        return search.CayleySpace(load_group_table(args.group_table))
    kind, _, spec = (args.space or "").partition(":")
    try:
        if kind == "graph":
            return search.GraphSpace(int(spec))
        if kind == "cayley":
            factors = [int(x) for x in spec.lower().split("x")]
            return search.CayleySpace(cyclic_group(factors[0]) if len(factors) == 1 else direct_product_group(factors))
    except ValueError as exc:
        raise UsageError(f"bad --space {args.space!r}: {exc}") from None
    raise UsageError("--space must be graph:N or cayley:N1xN2x... (or use --group-table)")


def cmd_search(args) -> int:
    space = make_space(args)
    obj = objective(args)
    initial = None
    if args.resume:
        saved = json.loads(Path(args.resume).read_text()).get("space")
        if saved != space.describe():
            raise UsageError(f"checkpoint was written for space {saved}, not {space.describe()}")
        initial = search.read_checkpoint(args.resume)
    elif args.initial:
        initial = int(args.initial, 16)
    temps = None
    if args.temperatures:
        try:
            temps = tuple(float(x) for x in args.temperatures.split(","))
        except ValueError:
            raise UsageError("--temperatures must be comma-separated numbers") from None
    sched = search.Schedule(args.iterations, args.t0, temps, args.tabu_len, args.seed, initial, args.rejection_free)
    sched.temps()  # validate before any search work
    runlog = search.RunLog(args.log) if args.log else None
    if args.algorithm == "exhaustive":
        best = search.exhaustive_search(space, obj)
    elif args.restarts > 1:
        best, _ = search.parallel_restarts(space, obj, sched, args.restarts, args.algorithm, args.threads, runlog)
    else:
        best = search.ALGORITHMS[args.algorithm](space, obj, sched, runlog)
        if args.trace_plot and best.trace:
            from .plotting import plot_trace
            plot_trace(best.trace, args.trace_plot, f"{args.algorithm} on {space.kind} space")
    g = space.decode(best.state)
    print(f"cost={fstr(best.cost)} state={best.state:x} graph6={graphs.emit_graph6(g)}")
    if isinstance(space, search.CayleySpace):
        print("generators=" + ",".join(space.group.labels[s] for s in space.genset(best.state)))
    if args.checkpoint:
        search.write_checkpoint(args.checkpoint, space, best)
    write_out(args, {"space": space.describe(), "graph6": graphs.emit_graph6(g), **best.to_json()})
    return EXIT_OK


def load_cert(path: str) -> flags.FlagCertificate:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"certificate not found: {path}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"certificate is not valid JSON: {exc}") from None
    return flags.FlagCertificate.from_json(data)


def cmd_verify_cert(args) -> int:
    cert = load_cert(args.certificate)
    rep = flags.verify_certificate(cert, max_m=args.max_m, threads=search.thread_cap(args.threads))
    print(f"bound={fstr(rep.bound)}")
    if args.table:
        for r in rep.rows:
            print(f"{graphs.emit_graph6(r.graph)}\t{fstr(r.value)}\t{fstr(r.slack)}")
    print(f"sharp={len(rep.sharp())}/{len(rep.rows)}")
    write_out(args, rep.to_json())
    if args.expect is not None and rep.bound != args.expect:
        raise Mismatch(f"expected bound {fstr(args.expect)}, computed {fstr(rep.bound)}")
    return EXIT_OK


def cmd_sharp(args) -> int:
    cert = load_cert(args.certificate)
    rep = flags.verify_certificate(cert, max_m=args.max_m)
    sharp = rep.sharp()
    for g in sharp:
        print(graphs.emit_graph6(g))
    write_out(args, {"bound": fstr(rep.bound), "sharp": [graphs.emit_graph6(g) for g in sharp]})
    return EXIT_OK


def parse_set(text: str, one_based: bool) -> list[int]:
    vals = [int(x) for x in text.replace(" ", "").split(",") if x]
    return [v - 1 for v in vals] if one_based else vals


def cmd_stability(args) -> int:
    C = read_graph(args)
    out: dict = {}
    ok = True
    if args.pattern:
        T = graphs.parse_graph6(args.pattern)
        rep = stability.uniquely_embeds(T, C)
        print(f"embeddings={rep.count} orbit={rep.orbit_size} unique={rep.unique_up_to_automorphism}")
        out["embedding"] = rep.to_json()
        ok &= rep.unique_up_to_automorphism
    sets = [parse_set(x, args.one_based) for x in args.set or []]
    for X in sets:
        uniq, cls = stability.defines_unique_neighborhoods(X, C)
        print(f"set={X} unique_neighborhoods={uniq}" + ("" if uniq else f" clash={cls}"))
    if sets and args.ell:
        rep = stability.check_reconstructor_simple(sets[0], C, args.ell)
        print(f"reconstructor_simple={rep.ok} {rep.conditions}")
        out["reconstructor_simple"] = rep.to_json()
        ok &= rep.ok
    if sets and args.symmetry:
        rep = stability.check_symmetry_conditions(None, C, None, sets)
        print(f"symmetry_structural={rep.ok} {rep.conditions}")
        out["symmetry"] = rep.to_json()
        ok &= rep.ok
    write_out(args, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_region(args) -> int:
    points = region.c34_points() if (args.s, args.t) == (3, 4) and args.constructions else []
    text = region.export_region_csv(args.s, args.t, points, args.grid, lower_bound=args.bound)
    sys.stdout.write(text)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"region_{args.s}{args.t}.csv").write_text(text)
        from .plotting import plot_region, plot_zoom
        plot_region(args.s, args.t, points, out / f"region_{args.s}{args.t}.png", args.bound)
        if points:
            plot_zoom(points, out / f"region_{args.s}{args.t}_zoom.png", args.s, args.t, args.bound)
    return EXIT_OK


def cmd_xor(args) -> int:
    factors = []
    for spec in args.factor:
        if spec in BY_NAME:
            factors.append(BY_NAME[spec]())
        elif spec.startswith("matching:"):
            factors.append(graphs.Graph.perfect_matching(int(spec.split(":")[1])))
        elif spec.startswith("empty:"):
            factors.append(graphs.Graph.empty(int(spec.split(":")[1])))
        else:
            factors.append(graphs.parse_graph6(spec))
    x, y = xorprod.mono_density_parts(factors, args.s, args.t)
    print(f"x={fstr(x)} y={fstr(y)} sum={fstr(x + y)} approx={float(x + y):.9f}")
    write_out(args, {"x": fstr(x), "y": fstr(y), "sum": fstr(x + y)})
    return EXIT_OK


def cmd_ap(args) -> int:
    if args.exhaustive_total:
        frac, col = ap.min_total_fraction(args.n, args.k)
        print(f"min_fraction={fstr(frac)} coloring={''.join(map(str, col))}")
        return EXIT_OK
    if args.search:
        sched = search.Schedule(args.iterations, tabu_len=args.tabu_len, seed=args.seed)
        col, res = ap.search_partial(args.n, args.l, args.k, sched, exhaustive=args.exhaustive)
        bound = ap.certified_bound(col, args.k)
        print(f"coloring={col} cost={fstr(res.cost)} bound={fstr(bound) if bound is not None else 'none'}")
        write_out(args, {"coloring": str(col), "cost": fstr(res.cost), "bound": fstr(bound) if bound else None})
        return EXIT_OK
    text = args.coloring
    if args.preset:
        text = {"z44": ap.Z44_COLORING, "z226": ap.Z226_COLORING}[args.preset]
    if not text:
        raise UsageError("give --coloring, --preset, --search or --exhaustive-total")
    c = ap.ZnColoring.parse(text)
    if not c.stars:
        print(f"fraction={fstr(ap.mono_ap_fraction(c, args.k))}")
        return EXIT_OK
    rep = ap.verify_partial(c, args.k)
    bound = rep.bound()
    print(f"n={c.n} l={rep.l} cross_ok={rep.cross_ok} m_k={fstr(rep.m_k)} max_completion={fstr(rep.max_fraction)} "
          f"bound={fstr(bound) if bound is not None else 'none'}")
    write_out(args, {"n": c.n, "l": rep.l, "cross_ok": rep.cross_ok, "m_k": fstr(rep.m_k),
                     "max_completion": fstr(rep.max_fraction), "bound": fstr(bound) if bound else None})
    return EXIT_OK if rep.cross_ok else EXIT_FAIL


# -- reproduction recipes ---------------------------------------------------------

def _expect(label: str, computed, expected) -> str:
    if computed != expected:
        raise Mismatch(f"{label}: expected {fstr(expected)}, computed {fstr(computed)}")
    return f"{label}={fstr(computed)}"


def _r_goodman(args) -> list[str]:
    x, y = blowup.blowup_density_pair(graphs.Graph.complete(2), 3, 3)
    return [_expect("c3", x + y, Fraction(1, 4))]


def _r_c34(args) -> list[str]:
    x, y = blowup.blowup_density_pair(BY_NAME["schlaefli"](), 3, 4)
    return [_expect("x", x, Fraction(41, 729)), _expect("y", y, Fraction(320, 6561)),
            _expect("c34", x + y, Fraction(689, 6561))]


def _r_c35(args) -> list[str]:
    value = blowup.cost(BY_NAME["schlaefli-complement"](), blowup.BlowupObjective(5, 3))
    return [_expect("c35", value, Fraction(24011, 531441))]


def _r_g45(args) -> list[str]:
    x, _ = blowup.blowup_density_pair(BY_NAME["ramsey13"](), 4, 5)
    return [_expect("g45", x, Fraction(29, 2197))]


def _r_g55(args) -> list[str]:
    x, _ = blowup.blowup_density_pair(BY_NAME["ramsey13"](), 5, 5)
    return [_expect("g55", x, Fraction(61, 28561))]


def _r_z13(args) -> list[str]:
    space = search.CayleySpace(cyclic_group(13))
    obj = blowup.BlowupObjective(4, 5, lam=Fraction(10**6))
    best = search.exhaustive_search(space, obj)
    if not graphs.is_isomorphic(space.decode(best.state), BY_NAME["ramsey13"]()):
        raise Mismatch("exhaustive optimum is not isomorphic to the 13-vertex Ramsey graph")
    return [_expect("g45", best.cost, Fraction(29, 2197)),
            "generators=" + ",".join(map(str, space.genset(best.state)))]


def _r_flag_toy(args) -> list[str]:
    rep = flags.verify_certificate(flags.toy_certificate())
    if len(rep.sharp()) != 4:
        raise Mismatch(f"expected 4 sharp graphs, found {len(rep.sharp())}")
    return [_expect("bound", rep.bound, Fraction(1, 4)), "sharp=4/4"]


def _r_thomason(args) -> list[str]:
    M = graphs.Graph.perfect_matching(4)
    value = xorprod.mono_density_of_product([graphs.Graph.complete(3), M, M, M], 5, 5)
    if not float(value) < 0.001730:
        raise Mismatch(f"c5 product value {float(value)} is not below 0.001730")
    return [f"c5_upper={fstr(value)} approx={float(value):.7f}"]


def _r_ap(preset: str, k: int, expected: Fraction) -> Callable:
    def run(args) -> list[str]:
        text = ap.Z44_COLORING if preset == "z44" else ap.Z226_COLORING
        rep = ap.verify_partial(ap.ZnColoring.parse(text), k)
        if not rep.cross_ok:
            raise Mismatch("cross condition fails")
        return [_expect("bound", rep.bound(), expected), f"m_k={fstr(rep.m_k)}"]
    return run


def _r_ap11(args) -> list[str]:
    col, _ = ap.search_partial(11, 1, 4, search.Schedule(), exhaustive=True)
    return [_expect("bound", ap.certified_bound(col, 4), Fraction(1, 12)), f"coloring={col}"]


def _r_region_c33(args) -> list[str]:
    x, _ = region.branch_crossing(3, 3)
    if abs(x - 0.278) > 1e-3:
        raise Mismatch(f"branch crossing at {x:.6f}, expected 0.278 +- 1e-3")
    sums = {p.x + p.y for p in region.goodman_sweep(21)}
    if sums != {Fraction(1, 4)}:
        raise Mismatch(f"goodman sweep sums {sorted(sums)}")
    return [f"crossing={x:.6f}", "goodman_sweep=1/4 at 21 samples"]


def _r_region_c34(args) -> list[str]:
    pts = region.c34_points()
    expected = {(Fraction(0), Fraction(3, 25)), (Fraction(1, 36), Fraction(577, 6912)),
                (Fraction(41, 729), Fraction(320, 6561)), (Fraction(1, 9), Fraction(0))}
    got = {(p.x, p.y) for p in pts if "literal" not in p.source}
    if got != expected:
        raise Mismatch(f"computed construction points {sorted(got)} differ from {sorted(expected)}")
    lines = [f"{fstr(p.x)},{fstr(p.y)},{p.source}" for p in pts]
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        region.export_region_csv(3, 4, pts, 201, out / "region_34.csv", lower_bound=Fraction(689, 6561))
        from .plotting import plot_region, plot_zoom
        plot_region(3, 4, pts, out / "region_34.png", Fraction(689, 6561))
        plot_zoom(pts, out / "region_34_zoom.png", 3, 4, Fraction(689, 6561))
        lines.append(f"figures written to {out}")
    return lines


def _r_stability(args) -> list[str]:
    S, R = BY_NAME["schlaefli"](), BY_NAME["ramsey13"]()
    from .named import two_triangles_edge, two_triangles_vertex
    a = stability.uniquely_embeds(two_triangles_edge(), S)
    b = stability.uniquely_embeds(two_triangles_vertex(), R)
    sym = stability.check_symmetry_conditions(None, S, None, stability.schlaefli_sets())
    if not (a and b and sym.conditions["b"] and sym.conditions["c"] and sym.conditions["a_embeds"]):
        raise Mismatch("stability preconditions failed")
    return [f"schlaefli_embeddings={a.count}", f"ramsey13_embeddings={b.count}", "schlaefli_sets=ok"]


RECIPES: dict[str, Callable] = {
    "goodman": _r_goodman,
    "c34-schlafli": _r_c34,
    "c35-schlafli-complement": _r_c35,
    "g45-ramsey13": _r_g45,
    "g55-ramsey13": _r_g55,
    "z13-exhaustive": _r_z13,
    "flag-toy-c3": _r_flag_toy,
    "thomason-c5": _r_thomason,
    "ap-z44": _r_ap("z44", 5, Fraction(1, 48)),
    "ap-z226": _r_ap("z226", 6, Fraction(1, 228)),
    "ap-z11": _r_ap11,
    "region-c33": _r_region_c33,
    "region-c34": _r_region_c34,
    "stability": _r_stability,
}


def cmd_reproduce(args) -> int:
    names = sorted(RECIPES) if args.recipe == "all" else [args.recipe]
    if args.recipe == "list":
        print("\n".join(sorted(RECIPES)))
        return EXIT_OK
    failed = False
    for name in names:
        if name not in RECIPES:
            close = difflib.get_close_matches(name, RECIPES, n=1)
            hint = f"; did you mean {close[0]!r}?" if close else ""
            raise UsageError(f"unknown recipe {name!r}{hint}")
        try:
            lines = RECIPES[name](args)
        except Mismatch as exc:
            print(f"{name}: MISMATCH {exc}")
            failed = True
            continue
        print(f"{name}: " + " ".join(lines))
    return EXIT_FAIL if failed else EXIT_OK


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ramseymult", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None, help=f"thread cap (default: ${search.THREADS_ENV} or CPUs)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help, allow_abbrev=False)
        sp.set_defaults(func=fn)
        sp.add_argument("--out", help="write machine-readable JSON here")
        return sp

    sp = add("count", cmd_count, "count cliques")
    add_graph_args(sp)
    sp.add_argument("--t", type=int, nargs="+", required=True)

    sp = add("density", cmd_density, "limit densities (x, y) of the blow-up sequence")
    add_graph_args(sp)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--weights", help="comma-separated rational weights summing to 1")

    sp = add("cost", cmd_cost, "blow-up cost ws*x + lam*wt*y")
    add_graph_args(sp)
    add_objective_args(sp)
    sp.add_argument("--weights")
    sp.add_argument("--optimize", action="store_true", help="locally optimize the blow-up weights")

    sp = add("search", cmd_search, "search graph or Cayley spaces")
    sp.add_argument("--space", help="graph:N or cayley:N1xN2x...")
    sp.add_argument("--group-table", help="group multiplication table file")
    add_objective_args(sp)
    sp.add_argument("--algorithm", choices=["sa", "tabu", "exhaustive"], default="tabu")
    sp.add_argument("--iterations", type=int, default=1000)
    sp.add_argument("--t0", type=float, default=0.05, help="initial SA temperature (linear decay)")
    sp.add_argument("--temperatures", help="explicit SA temperatures, one per iteration (comma-separated)")
    sp.add_argument("--tabu-len", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=1)
    sp.add_argument("--rejection-free", action="store_true")
    sp.add_argument("--initial", help="initial state as hex")
    sp.add_argument("--log", help="JSONL improvement log")
    sp.add_argument("--checkpoint", help="write best state here")
    sp.add_argument("--resume", help="start from a checkpoint file")
    sp.add_argument("--trace-plot", help="PNG of the cost trace (single run)")

    for name, fn, help in (("verify-cert", cmd_verify_cert, "verify a flag certificate"),
                           ("sharp", cmd_sharp, "list sharp graphs of a certificate")):
        sp = add(name, fn, help)
        sp.add_argument("certificate")
        sp.add_argument("--max-m", type=int, default=6)
        if name == "verify-cert":
            sp.add_argument("--table", action="store_true", help="print per-graph values and slack")
            sp.add_argument("--expect", type=parse_frac, help="fail unless the bound equals this")

    sp = add("stability", cmd_stability, "embedding and neighborhood preconditions")
    add_graph_args(sp)
    sp.add_argument("--pattern", help="graph6 of T for the unique-embedding check")
    sp.add_argument("--set", action="append", help="comma-separated vertex set (repeatable)")
    sp.add_argument("--one-based", action="store_true", help="vertex labels in --set start at 1")
    sp.add_argument("--ell", type=int, help="check the simple reconstructor conditions for the first set")
    sp.add_argument("--symmetry", action="store_true", help="check structural symmetry conditions for the sets")

    sp = add("region", cmd_region, "upper curve and construction points as CSV (+ figures)")
    sp.add_argument("--s", type=int, default=3)
    sp.add_argument("--t", type=int, default=4)
    sp.add_argument("--grid", type=int, default=101)
    sp.add_argument("--bound", type=parse_frac, help="verified lower bound c for the line y = c - x")
    sp.add_argument("--constructions", action="store_true", help="include the (3,4) construction points")
    sp.add_argument("--out-dir", help="write CSV and PNG figures here")

    sp = add("xor", cmd_xor, "monochromatic densities of XOR products")
    sp.add_argument("--factor", action="append", required=True,
                    help="graph6, a built-in name, matching:N or empty:N (repeatable)")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)

    sp = add("ap", cmd_ap, "monochromatic arithmetic progressions in Z_n")
    sp.add_argument("--coloring", help="0/1 string with * for uncolored positions")
    sp.add_argument("--preset", choices=["z44", "z226"])
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--search", action="store_true", help="search partial colorings of Z_n")
    sp.add_argument("--exhaustive", action="store_true", help="with --search: enumerate all colorings")
    sp.add_argument("--exhaustive-total", action="store_true", help="minimum over all total colorings of Z_n")
    sp.add_argument("--n", type=int)
    sp.add_argument("--l", type=int, default=1)
    sp.add_argument("--iterations", type=int, default=200)
    sp.add_argument("--tabu-len", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("reproduce", cmd_reproduce, "run a named reproduction recipe ('list' or 'all')")
    sp.add_argument("recipe")
    sp.add_argument("--out-dir", help="directory for figures produced by the recipe")
    return p


def _option_strings(parser: argparse.ArgumentParser, command: str | None) -> list[str]:
    opts = [o for a in parser._actions for o in a.option_strings]
    for a in parser._actions:
        if isinstance(a, argparse._SubParsersAction) and command in a.choices:
            opts += [o for b in a.choices[command]._actions for o in b.option_strings]
    return opts


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # report unknown flags before argparse complains about anything else
    commands = next(a.choices for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in argv if a in commands), None)
    opts = _option_strings(parser, command)
    unknown = [a for a in argv if a.startswith("--") and a.split("=")[0] not in opts]
    if not unknown:
        try:
            args, unknown = parser.parse_known_args(argv)
        except SystemExit as exc:
            return EXIT_USAGE if exc.code else EXIT_OK
    if unknown:
        bad = unknown[0]
        close = difflib.get_close_matches(bad.split("=")[0], opts, n=1)
        hint = f" (did you mean {close[0]}?)" if close else ""
        print(f"ramseymult: error: unrecognized argument {bad}{hint}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.threads:
        os.environ[search.THREADS_ENV] = str(args.threads)
    try:
        return args.func(args)
    except (UsageError, FileNotFoundError, graphs.Graph6Error, GroupError, argparse.ArgumentTypeError,
            ap.ColoringError, blowup.WeightError) as exc:
        print(f"ramseymult: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (flags.VerificationFailure, flags.CertificateError, Mismatch) as exc:
        print(f"ramseymult: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (graphs.UnsupportedGraphError, ValueError) as exc:
        print(f"ramseymult: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
