"""Command-line surface.

Subcommands: eval, design tree, design mesh, brute tree, brute mesh,
bound, gap-table, sweep, gen. Single results are printed as "key: value"
lines, reports as CSV; both go to stdout unless --out is given. Exit code
0 on success, 1 with a categorized message on stderr otherwise (2 for
usage errors, from argparse).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import lyapunov
from .costs import build_cost, h2_squared_closed_form, topology_cost
from .errors import GridTopoError, ValidationError
from .graphs import build_laplacian
from .mesh import brute_force_mesh, greedy_mesh
from .netfile import gen_case, load_network, save_network
from .network import Topology
from .trees import ENUMERATION_CAP, best_rooted_tree, brute_force_tree, gap_bound
from .experiments import run_gap_table, run_cardinality_sweep


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except GridTopoError as exc:
        print(f"error [{exc.category}]: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridtopo",
        description="Design and evaluate power-grid topologies that minimize "
        "the squared H2 norm of the swing dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one topology of a network file")
    _add_network(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--edges", help="comma-separated candidate edge indices")
    group.add_argument("--edges-file", help="file of whitespace/comma separated edge indices")
    p.add_argument("--verify", action="store_true", help="cross-check against the Lyapunov route")
    p.add_argument("--simulate", action="store_true", help="estimate E[y'y] by simulation")
    p.add_argument("--horizon", type=float, default=1e4, help="simulation horizon (time units)")
    p.add_argument("--dt", type=float, default=1e-3, help="simulation time step")
    p.add_argument("--seed", type=int, default=0, help="simulation seed")
    _add_out(p)
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("design", help="run a design algorithm")
    dsub = p.add_subparsers(dest="design_kind", required=True)
    pt = dsub.add_parser("tree", help="best rooted shortest-path tree")
    _add_network(pt)
    _add_out(pt)
    pt.set_defaults(handler=_cmd_design_tree)
    pm = dsub.add_parser("mesh", help="tree design plus greedy edge additions")
    _add_network(pm)
    pm.add_argument("-k", type=int, required=True, help="total edge budget")
    _add_out(pm)
    pm.set_defaults(handler=_cmd_design_mesh)

    p = sub.add_parser("brute", help="enumeration oracles")
    bsub = p.add_subparsers(dest="brute_kind", required=True)
    bt = bsub.add_parser("tree", help="optimal spanning tree by enumeration")
    _add_network(bt)
    _add_cap(bt)
    _add_out(bt)
    bt.set_defaults(handler=_cmd_brute_tree)
    bm = bsub.add_parser("mesh", help="optimal k-edge selection by enumeration")
    _add_network(bm)
    bm.add_argument("-k", type=int, required=True, help="total edge budget")
    bm.add_argument(
        "--seed-tree",
        help="augment this seed instead of searching globally: 'alg1' or a file of edge indices",
    )
    _add_cap(bm)
    _add_out(bm)
    bm.set_defaults(handler=_cmd_brute_mesh)

    p = sub.add_parser("bound", help="a-priori approximation-gap certificate")
    _add_network(p)
    _add_out(p)
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("gap-table", help="designed-vs-optimal gap table over edge budgets")
    _add_network(p)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    _add_cap(p)
    _add_out(p)
    p.set_defaults(handler=_cmd_gap_table)

    p = sub.add_parser("sweep", help="cost-versus-budget curves per objective")
    _add_network(p)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument(
        "--costs",
        default="consensus",
        help="comma-separated objectives (consensus, ranked, loss, file)",
    )
    _add_cap(p)
    _add_out(p)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("gen", help="add seeded random candidate edges to a base file")
    p.add_argument("--base", required=True, help="base network file")
    p.add_argument("--extra", type=int, required=True, help="number of random edges to add")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output network file")
    p.set_defaults(handler=_cmd_gen)

    return parser


def _add_network(p: argparse.ArgumentParser) -> None:
    p.add_argument("--network", required=True, help="network file (JSON)")


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write output here instead of stdout")


def _add_cap(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cap", type=int, default=ENUMERATION_CAP, help="enumeration size cap")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _edge_indices_from_args(args) -> list[int]:
    if args.edges is not None:
        raw = args.edges
    else:
        try:
            raw = Path(args.edges_file).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read {args.edges_file}: {exc}") from exc
    tokens = raw.replace(",", " ").split()
    if not tokens:
        raise ValidationError("no edge indices given")
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise ValidationError(f"edge indices must be integers: {exc}") from exc


def _topology_lines(prefix: str, topology: Topology) -> list[str]:
    return [f"{prefix}: {','.join(str(i) for i in topology.edge_indices)}"]


def _cmd_eval(args) -> int:
    network, spec = load_network(args.network)
    cost = build_cost(spec, network)
    topology = Topology.of(network, _edge_indices_from_args(args))
    lap = build_laplacian(network, topology)
    c = topology_cost(cost, lap)
    h2 = h2_squared_closed_form(cost, network, lap)
    lines = [
        f"network: {args.network}",
        f"cost_kind: {spec.kind}",
        *_topology_lines("edges", topology),
        f"k: {topology.k}",
        f"cost: {c:.12g}",
        f"h2_squared: {h2:.12g}",
    ]
    ss = None
    if args.verify:
        ss = lyapunov.assemble_state_space(network, topology, cost)
        gram = lyapunov.solve_observability_lyapunov(ss)
        h2_gram = lyapunov.h2_squared_via_gramian(ss, gram)
        rel = abs(h2_gram - h2) / max(abs(h2_gram), 1e-300)
        ok = rel <= 1e-6
        lines += [
            f"h2_squared_gramian: {h2_gram:.12g}",
            f"verify_relative_error: {rel:.3e}",
            f"verify: {'pass' if ok else 'FAIL'}",
        ]
        if not ok:
            _emit("\n".join(lines) + "\n", args.out)
            raise GridTopoError(f"Gramian cross-check failed: relative error {rel:.3e}")
    if args.simulate:
        if ss is None:
            ss = lyapunov.assemble_state_space(network, topology, cost)
        est = lyapunov.simulate_ambient(ss, horizon=args.horizon, dt=args.dt, seed=args.seed)
        sigmas = abs(est.value - h2) / est.stderr if est.stderr > 0 else float("inf")
        lines += [
            f"simulated: {est.value:.12g}",
            f"simulated_stderr: {est.stderr:.6g}",
            f"simulated_sigmas_from_closed_form: {sigmas:.2f}",
        ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_design_tree(args) -> int:
    network, spec = load_network(args.network)
    cost = build_cost(spec, network)
    result = best_rooted_tree(network, cost)
    lap = build_laplacian(network, result.topology)
    lines = [
        f"network: {args.network}",
        f"cost_kind: {spec.kind}",
        f"root: {result.root}",
        *_topology_lines("edges", result.topology),
        f"cost: {result.cost:.12g}",
        f"h2_squared: {h2_squared_closed_form(cost, network, lap):.12g}",
    ]
    if result.gap_bound is not None:
        lines.append(f"gap_bound: {result.gap_bound:.12g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_design_mesh(args) -> int:
    network, spec = load_network(args.network)
    cost = build_cost(spec, network)
    result = greedy_mesh(network, cost, args.k)
    lines = [
        f"network: {args.network}",
        f"cost_kind: {spec.kind}",
        f"k: {args.k}",
        *_topology_lines("seed_edges", result.seed),
        f"seed_cost: {result.seed_cost:.12g}",
    ]
    for ei, c in result.trace:
        lines.append(f"step: add_edge={ei} cost={c:.12g}")
    lines += [
        *_topology_lines("edges", result.topology),
        f"cost: {result.cost:.12g}",
        f"h2_squared: {result.h2_squared:.12g}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_brute_tree(args) -> int:
    network, spec = load_network(args.network)
    cost = build_cost(spec, network)
    result = brute_force_tree(network, cost, cap=args.cap)
    lap = build_laplacian(network, result.topology)
    lines = [
        f"network: {args.network}",
        f"cost_kind: {spec.kind}",
        *_topology_lines("edges", result.topology),
        f"cost: {result.cost:.12g}",
        f"h2_squared: {h2_squared_closed_form(cost, network, lap):.12g}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_brute_mesh(args) -> int:
    network, spec = load_network(args.network)
    cost = build_cost(spec, network)
    seed = None
    if args.seed_tree == "alg1":
        seed = best_rooted_tree(network, cost).topology
    elif args.seed_tree is not None:
        try:
            tokens = Path(args.seed_tree).read_text().replace(",", " ").split()
            indices = [int(t) for t in tokens]
        except OSError as exc:
            raise ValidationError(f"cannot read seed tree {args.seed_tree}: {exc}") from exc
        except ValueError as exc:
            raise ValidationError(f"seed tree indices must be integers: {exc}") from exc
        seed = Topology.of(network, indices)
    result = brute_force_mesh(network, cost, args.k, seed=seed, cap=args.cap)
    lines = [
        f"network: {args.network}",
        f"cost_kind: {spec.kind}",
        f"k: {args.k}",
        f"mode: {'augment' if seed is not None else 'global'}",
        *_topology_lines("edges", result.topology),
        f"cost: {result.cost:.12g}",
        f"h2_squared: {result.h2_squared:.12g}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_bound(args) -> int:
    network, spec = load_network(args.network)
    cost = build_cost(spec, network)
    bound = gap_bound(network, cost)
    lines = [
        f"network: {args.network}",
        f"cost_kind: {spec.kind}",
        f"gap_bound: {bound:.12g}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_gap_table(args) -> int:
    network, spec = load_network(args.network)
    cost = build_cost(spec, network)
    report = run_gap_table(network, cost, range(args.k_min, args.k_max + 1), cap=args.cap)
    _emit(report.as_csv(), args.out)
    return 0


def _cmd_sweep(args) -> int:
    network, spec = load_network(args.network)
    specs = []
    for token in args.costs.split(","):
        token = token.strip()
        if not token:
            continue
        if token == "file":
            specs.append(spec)
        elif token == "consensus":
            specs.append(type(spec)(kind="consensus"))
        elif token in ("ranked", "ranked_consensus"):
            if spec.kind == "ranked_consensus":
                specs.append(spec)
            else:
                raise ValidationError(
                    "ranked objective requested but the network file does not carry ranks"
                )
        elif token == "loss":
            specs.append(type(spec)(kind="loss"))
        else:
            raise ValidationError(f"unknown cost token {token!r} in --costs")
    if not specs:
        raise ValidationError("--costs selected no objectives")
    report = run_cardinality_sweep(network, specs, range(args.k_min, args.k_max + 1), cap=args.cap)
    _emit(report.as_csv(), args.out)
    return 0


def _cmd_gen(args) -> int:
    network, spec = load_network(args.base)
    generated, spec = gen_case(network, spec, args.extra, args.seed)
    save_network(generated, spec, args.out)
    print(
        f"wrote {args.out}: {generated.n} nodes, {len(generated.edges)} candidate edges "
        f"({len(network.edges)} base + {args.extra} random, seed {args.seed})"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
