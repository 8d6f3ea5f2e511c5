"""Command line front end.

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad input,
3 a budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import k4_example
from .config import BUDGET_ENV, default_budget
from .counting import (
    brute_force,
    counts_integral,
    counts_mod_lattice,
    nu_G,
    trace_distribution,
)
from .errors import BudgetExceeded, InputError, NumericalError, ParseError
from .graph import Graph, cycle_graph, is_bipartite, k4, load_graph, random_graph, theta_graph
from .homology import (
    Character,
    complexity,
    form_of,
    homology_data,
    orthogonality_check,
    quotient_group,
    character_kernel,
    torus_volume,
)
from .twist import canonical_character, radius_sweep, spectral_radius, torus_grid, verify_antisymmetry
from .zeta import lfunc_edge, lfunc_ihara, verify_transforms

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
MAX_L = 64
MAX_GRID = 512
SUITES = ("antisymmetry", "determinant", "orthogonality", "transforms", "oracle")


# argument handling ---------------------------------------------------------------

def _common(p: argparse.ArgumentParser, graph: bool = True) -> None:
    if graph:
        src = p.add_mutually_exclusive_group()
        src.add_argument("--graph", metavar="PATH", help="graph JSON file")
        src.add_argument(
            "--gen", nargs="+", metavar="SPEC", help="built-in graph: k4 | theta l0 l1 l2 | cycle n"
        )
    p.add_argument("--omega", metavar="c1,...,cg", help="character coordinates")
    p.add_argument("--L", type=int, default=None, dest="L", help="truncation / length")
    p.add_argument("--lattice", metavar="JSON", help="sublattice generators or kernel spec")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH", help="output file (stdout when omitted)")
    p.add_argument("--budget", type=int, default=None, help=f"work budget (default ${BUDGET_ENV} or 10^7)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="scalar invariants of a graph as JSON")
    _common(p)

    p = sub.add_parser("sweep", help="spectral radii or traces over a grid of characters (CSV)")
    p.add_argument("what", choices=("radius", "trace"))
    p.add_argument("--grid", type=int, default=32, help="points per coordinate axis")
    p.add_argument("--figure", metavar="PNG", help="figure path (default: next to --out)")
    p.add_argument("--no-figure", action="store_true", help="skip the figure")
    _common(p)

    p = sub.add_parser("verify", help="run a verification suite (JSON report)")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--count", type=int, default=None, help="random graphs / characters to try")
    _common(p)

    p = sub.add_parser("example-k4", help="reproduce the K4 example (JSON, CSV alongside)")
    _common(p, graph=False)
    return parser


def resolve_graph(args) -> Graph | None:
    if getattr(args, "graph", None):
        try:
            return load_graph(Path(args.graph).read_bytes())
        except OSError as exc:
            raise ParseError(f"cannot read {args.graph}: {exc}") from exc
    spec = getattr(args, "gen", None)
    if not spec:
        return None
    name, rest = spec[0], spec[1:]
    try:
        nums = [int(x) for x in rest]
    except ValueError as exc:
        raise ParseError(f"generator arguments must be integers: {rest}") from exc
    if name == "k4" and not nums:
        return k4()
    if name == "theta" and len(nums) == 3 and min(nums) >= 1:
        return theta_graph(*nums)
    if name == "cycle" and len(nums) == 1 and nums[0] >= 1:
        return cycle_graph(nums[0])
    raise ParseError(f"unknown generator spec {' '.join(spec)!r}")


def require_graph(args) -> Graph:
    G = resolve_graph(args)
    if G is None:
        raise ParseError("one of --graph or --gen is required")
    return G


def parse_omega(text: str | None, g: int) -> Character | None:
    if text is None:
        return None
    try:
        coords = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise ParseError(f"bad --omega {text!r}") from exc
    if len(coords) != g:
        raise ParseError(f"--omega needs {g} coordinates, got {len(coords)}")
    return Character(coords)


def parse_lattice(text: str | None, H):
    """``[[...], ...]`` lists generator vectors; ``{"kernel": [c..], "order": k}``
    gives the kernel of the character with coordinates c of order k."""
    if text is None:
        return None
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"--lattice is not valid JSON: {exc}") from exc
    if isinstance(spec, dict):
        try:
            chi = Character(tuple(float(x) for x in spec["kernel"]))
            order = int(spec["order"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError("kernel spec needs 'kernel' and 'order'") from exc
        if chi.g != H.g or order < 1:
            raise ParseError("kernel spec does not match the genus")
        try:
            cols = character_kernel(chi, order)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        return quotient_group(H, cols)
    if not isinstance(spec, list) or any(not isinstance(v, list) for v in spec):
        raise ParseError("--lattice must be a list of generator vectors")
    if any(not all(isinstance(x, int) for x in v) for v in spec):
        raise ParseError("lattice generators must be integer vectors")
    if len(spec) != H.g or any(len(v) != H.g for v in spec):
        raise ParseError(f"--lattice needs {H.g} generators of length {H.g}")
    cols = [list(r) for r in zip(*spec)]  # generators become columns
    return quotient_group(H, cols)


def check_config(args) -> None:
    if args.budget is not None and args.budget < 1:
        raise ParseError("--budget must be positive")
    if args.L is not None and not 1 <= args.L <= MAX_L:
        raise ParseError(f"--L must lie in 1..{MAX_L}")
    grid = getattr(args, "grid", None)
    if grid is not None and not 2 <= grid <= MAX_GRID:
        raise ParseError(f"--grid must lie in 2..{MAX_GRID}")


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialize {type(x)}")


# commands ------------------------------------------------------------------------

def cmd_info(args) -> int:
    G = require_graph(args)
    H = homology_data(G)
    doc = {
        "n": G.n,
        "m": G.m,
        "g": G.genus,
        "bipartite": is_bipartite(G),
        "w": complexity(G),
        "vol": torus_volume(G),
        "theta_coords": list(canonical_character(G, H).coords),
        "nu": nu_G(G) if G.genus >= 1 else None,
        "rho": spectral_radius(G) if G.genus >= 1 else 0.0,
    }
    emit(dump(doc), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    G = require_graph(args)
    H = homology_data(G)
    budget = args.budget or default_budget()
    if H.g < 1:
        raise InputError("a tree has a single character; nothing to sweep")
    if args.what == "radius":
        table = radius_sweep(G, args.grid, budget=budget, H=H)
        csv = table.to_csv()
        coords, values, label = table.coords, table.rho_W, "rho(W)"
    else:
        l = args.L or 3
        if args.grid**H.g > budget:
            raise BudgetExceeded(f"{args.grid}^{H.g} grid points exceed the budget of {budget}")
        coords = torus_grid(H.g, args.grid)
        values = np.array([trace_distribution(G, form_of(H, Character(tuple(c))), l)[l - 1] for c in coords])
        head = ",".join([f"coord_{i + 1}" for i in range(H.g)] + [f"K_{l}"])
        rows = [",".join([f"{x:.12g}" for x in c] + [f"{v:.12g}"]) for c, v in zip(coords, values)]
        csv = "\n".join([head] + rows) + "\n"
        label = f"K(w,{l})"
    emit(csv, args.out)
    figure = args.figure or (str(Path(args.out).with_suffix(".png")) if args.out else None)
    if figure and not args.no_figure and H.g <= 2:
        from .plotting import plot_sweep

        plot_sweep(coords, values, figure, f"{args.what} sweep, grid {args.grid}", label)
    return EXIT_OK


def cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    budget = args.budget or default_budget()
    suite = args.suite
    G = resolve_graph(args)
    if suite == "antisymmetry":
        doc = _suite_antisymmetry(G or k4(), args, rng)
    elif suite == "determinant":
        doc = _suite_determinant(G, args, rng)
    elif suite == "orthogonality":
        doc = _suite_orthogonality(G or k4(), args, rng)
    elif suite == "transforms":
        doc = _suite_transforms(G or k4(), args, budget)
    else:
        doc = _suite_oracle(G or k4(), args, budget)
    doc["suite"] = suite
    doc["seed"] = args.seed
    emit(dump(doc), args.out)
    return EXIT_OK if doc["passed"] else EXIT_FAIL


def _random_chars(H, rng, count):
    return [Character(tuple(rng.random(H.g))) for _ in range(count)]


def _suite_antisymmetry(G, args, rng) -> dict:
    H = homology_data(G)
    chars = [Character((0.0,) * H.g), canonical_character(G, H)]
    given = parse_omega(args.omega, H.g)
    if given is not None:
        chars.append(given)
    chars += _random_chars(H, rng, args.count or 10)
    rows = []
    for chi in chars:
        rep = verify_antisymmetry(G, form_of(H, chi), H=H)
        rows.append({"omega": list(chi.coords), **rep.to_dict()})
    return {"passed": all(r["passed"] for r in rows), "checks": rows}


def _suite_determinant(G, args, rng) -> dict:
    if G is not None:
        cases = [G] * (args.count or 10)
    else:
        cases = [random_graph(rng, 6, 9, min_genus=0) for _ in range(args.count or 20)]
    rows = []
    for i, graph in enumerate(cases):
        H = homology_data(graph)
        given = parse_omega(args.omega, H.g) if G is not None and i == 0 else None
        chi = given or Character(tuple(rng.random(H.g)))
        omega = form_of(H, chi)
        edge, ihara = lfunc_edge(graph, omega, H), lfunc_ihara(graph, omega, H)
        dev = edge.deviation(ihara)
        tol = 1e-8 * edge.scale
        rows.append(
            {"graph": json.loads(graph.to_json()), "omega": list(chi.coords), "deviation": dev, "tol": tol,
             "passed": dev <= tol}
        )
    return {"passed": all(r["passed"] for r in rows), "checks": rows}


def _default_quotient(H, args):
    Q = parse_lattice(args.lattice, H)
    if Q is None:
        Q = quotient_group(H, [[2 if i == j else 0 for j in range(H.g)] for i in range(H.g)])
    return Q


def _suite_orthogonality(G, args, rng) -> dict:
    H = homology_data(G)
    Q = _default_quotient(H, args)
    ok, pair = orthogonality_check(Q)
    return {"passed": ok, "invariants": list(Q.invariants), "offending_pair": pair}


def _suite_transforms(G, args, budget) -> dict:
    H = homology_data(G)
    Q = _default_quotient(H, args)
    rep = verify_transforms(G, Q, args.L or 15, H, budget=budget)
    return {"invariants": list(Q.invariants), **rep.to_dict()}


def _suite_oracle(G, args, budget) -> dict:
    H = homology_data(G)
    L = args.L or 8
    oracle, census = brute_force(G, H, L, budget)
    dft = counts_integral(G, H, L, budget=budget)
    Q = _default_quotient(H, args) if H.g else None
    checks = {"integral": dft.agrees_with(oracle, ("N", "pi", "pi_c"))}
    if Q is not None:
        quot = counts_mod_lattice(G, Q, L, H, budget)
        checks["mod_lattice"] = oracle.project(Q).agrees_with(quot, ("N", "pi", "pi_c"))
    return {
        "passed": all(checks.values()),
        "L": L,
        "checks": checks,
        "circuits": census.circuits,
        "N": oracle.total("N"),
    }


def cmd_example_k4(args) -> int:
    doc, csv = k4_example.report()
    if args.out:
        Path(args.out).write_text(dump(doc))
        Path(args.out).with_suffix(".csv").write_text(csv)
    else:
        sys.stdout.write(dump(doc))
    return EXIT_OK if doc["passed"] else EXIT_FAIL


COMMANDS = {"info": cmd_info, "sweep": cmd_sweep, "verify": cmd_verify, "example-k4": cmd_example_k4}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on bad usage
        return int(exc.code or 0)
    try:
        check_config(args)
        return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
