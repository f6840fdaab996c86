"""
Common-Neighbor Graph Sparsification Toolkit

Samples the edges of a graph with probability proportional to 2 / (T_ij + 2),
where T_ij counts the common neighbors of the endpoints. The result is a
weighted subgraph whose Laplacian approximates the original one. The toolkit
also certifies that approximation and computes the statistics behind it:
clustering, the alpha statistic, Ollivier-Ricci curvature, and the hypergraph
variant built on the clique expansion.

Usage:
  python cn_sparsify.py stats    --input INPUT [--json]
  python cn_sparsify.py sparsify --input INPUT [--epsilon EPS] [--seed SEED] [--samples M]
                                 [--verify] [--baseline {common-neighbor,percolation}] [--output PATH]
  python cn_sparsify.py ricci    --input INPUT [--dot PATH] [--kappa0 K]
  python cn_sparsify.py hyper    {expand,stats,sparsify} --input FILE.hyp [--epsilon EPS] [--seed SEED]
  python cn_sparsify.py bench    --input INPUT [--scheme {both,common-neighbor,percolation}]
                                 [--budget-grid 0.25,0.5,1] [--seeds N] [--checkpoint PATH | --resume]
  python cn_sparsify.py gen      KIND [--n N] [--d D] [--p P] [--k K] [--leaves L] [--output PATH]

Arguments:
  --input    Edge-list path ("i j" or "i j w" per line, '#' comments) or builtin:NAME
             with NAME in {karate, dolphins}. hyper takes a hyperedge file instead.
  --output   Where the data product (sparsifier, expansion, generated graph, bench
             table) is written.
  --seed     Unsigned 64-bit seed (default: DEFAULT_SEED).
  --epsilon  Approximation parameter in (0, 1) (default: DEFAULT_EPSILON).
  --json     Print the run report as JSON instead of 'key: value' lines.
  --quiet    Suppress progress lines on stderr.

Exit codes:
  0  success
  1  spectral verification failed (pass=false)
  2  input, parameter or configuration error

Examples:
  python cn_sparsify.py stats --input builtin:karate --json
  python cn_sparsify.py sparsify --input builtin:karate --epsilon 0.5 --seed 1 --verify --output karate.sparse.edges
  python cn_sparsify.py ricci --input builtin:karate --dot karate_curvature.dot
  python cn_sparsify.py gen tightness --k 3 --output design3.hyp
  python cn_sparsify.py hyper sparsify --input design3.hyp --epsilon 0.5 --json
  python cn_sparsify.py bench --input builtin:karate --budget-grid 0.1,0.25,0.5,1 --seeds 20

Requirements:
  - numpy, scipy, polars, python-dotenv (see requirements.txt)

Environment Variables (from sparsify.env):
  - PARALLEL_WORKERS: worker threads for per-edge work and bench cells (default: 4)
  - DEFAULT_SEED: seed used when --seed is omitted (default: 1)
  - DEFAULT_EPSILON: epsilon used when --epsilon is omitted (default: 0.5)
  - DATA_DIR: directory of the builtin datasets (default: ./data)
  - BENCH_SEEDS: seeds per bench cell when --seeds is omitted (default: 20)
  - BENCH_CHECKPOINT: checkpoint file used by bench --resume (default: bench_checkpoint.json)
  - KERNEL_TOL: relative eigenvalue cutoff for Laplacian kernels (default: 1e-12)
"""

import argparse
import sys
import time
from pathlib import Path

from lib.bench import SCHEMES, expected_distinct_edges, parse_budget_grid, run_bench, summarize
from lib.config import load_settings
from lib.curvature import (
    alpha_upper_bound_check,
    kappa_summary,
    ricci_all,
    to_dot,
    transport_lower_bound_check,
)
from lib.errors import ParameterError, PreconditionError, SparsifyError
from lib.graph_core import (
    format_edge_list,
    format_hyperedges,
    gen_complete,
    gen_erdos_renyi,
    gen_path,
    gen_random_regular,
    gen_remark_union,
    gen_star,
    is_connected,
    laplacian,
    load_input,
    read_hyperedges,
)
from lib.hypergraph import (
    check_c_bound,
    clique_expand,
    gen_random_hypergraph,
    gen_tightness_design,
    hyper_sample_count,
    hyper_sparsify,
)
from lib.local_stats import common_neighbor_counts, compute_local_stats, lower_bound_report
from lib.reporting import RunReport, format_summary, write_report
from lib.sampler import (
    SampleConfig,
    edge_probabilities,
    percolate,
    percolation_keep_prob,
    resolve_sample_count,
    sparsify,
)
from lib.spectral import verify_spectral

GRAPH_KINDS = ("complete", "path", "star", "regular", "er", "remark-union")
HYPER_KINDS = ("tightness", "random-hyper")


def log(args, message):
    """Progress line on stderr unless --quiet."""
    if not args.quiet:
        print(message, file=sys.stderr)


def _labels_output(loaded):
    # only worth reporting when the input labels were remapped
    if all(label == str(i) for i, label in enumerate(loaded.labels)):
        return {}
    return {"labels": list(loaded.labels)}


def load_graph(args, settings, require_connected=False):
    loaded = load_input(args.input, settings.data_dir)
    g = loaded.graph
    if loaded.weighted:
        print("Warning: edge weights are ignored; using the unweighted support", file=sys.stderr)
        g = g.support()
    log(args, f"Loaded {args.input}: n={g.n}, edges={g.num_edges}")
    if require_connected and not is_connected(g):
        raise PreconditionError(f"{args.input} is not connected")
    return loaded, g


def _epsilon(args, settings):
    return args.epsilon if args.epsilon is not None else settings.default_epsilon


def _seed(args, settings):
    return args.seed if args.seed is not None else settings.default_seed


def _write_output(args, text, what):
    if args.output:
        Path(args.output).write_text(text)
        log(args, f"Wrote {what} to {args.output}")


def cmd_stats(args, settings):
    loaded, g = load_graph(args, settings)
    connected = is_connected(g)
    if not connected:
        print(f"Warning: {args.input} is not connected; alpha is still computed", file=sys.stderr)
    stats = compute_local_stats(g, settings.parallel_workers, verbose=not args.quiet)
    outputs = stats.to_json()
    outputs["connected"] = connected
    outputs["triangles"] = sum(stats.t.values()) // 3
    if stats.alpha_lower_bound is not None:
        bound = lower_bound_report(g, stats.t)
        outputs["alpha_lower_bound_holds"] = bound["holds"]
        outputs["per_node_bound_holds"] = bound["per_node_holds"]
    outputs.update(_labels_output(loaded))
    return RunReport("stats", args.input), outputs, 0


def cmd_sparsify(args, settings):
    loaded, g = load_graph(args, settings, require_connected=True)
    cfg = SampleConfig(epsilon=_epsilon(args, settings), m_override=args.samples, seed=_seed(args, settings))
    counts = common_neighbor_counts(g, settings.parallel_workers)
    dist = edge_probabilities(g, counts)
    m = resolve_sample_count(g, cfg, counts)
    outputs = {"scheme": args.baseline}

    if args.baseline == "percolation":
        keep_prob = args.keep_prob
        if keep_prob is None:
            keep_prob = percolation_keep_prob(g, expected_distinct_edges(dist, m))
        h = percolate(g, keep_prob, cfg.seed)
        outputs["keep_prob"] = keep_prob
    else:
        h = sparsify(g, cfg, counts)
    log(args, f"Sampled {h.num_edges} distinct edges out of {g.num_edges} (m={m})")

    outputs["retained_edges"] = h.num_edges
    outputs["total_weight"] = h.total_weight()
    _write_output(args, format_edge_list(h), "sparsifier")

    code = 0
    if args.verify:
        spectral = verify_spectral(laplacian(g), laplacian(h), cfg.epsilon, settings.kernel_tol)
        outputs["spectral"] = spectral.to_json()
        outputs["pass"] = spectral.passed
        code = 0 if spectral.passed else 1
    outputs.update(_labels_output(loaded))
    report = RunReport("sparsify", args.input, {"epsilon": cfg.epsilon, "seed": cfg.seed, "m": m})
    return report, outputs, code


def cmd_ricci(args, settings):
    loaded, g = load_graph(args, settings, require_connected=True)
    report = ricci_all(g, settings.parallel_workers, verbose=not args.quiet)
    upper = alpha_upper_bound_check(g, report)
    lower = transport_lower_bound_check(g, report)

    outputs = report.to_json()
    outputs.update(kappa_summary(report, args.kappa0))
    outputs["alpha"] = upper.alpha
    outputs["alpha_upper_bound_applicable"] = upper.applicable
    outputs["alpha_upper_bound_holds"] = upper.holds
    outputs["transport_lower_bound_holds"] = lower["holds"]
    outputs.update(_labels_output(loaded))

    if args.dot:
        labels = loaded.labels if _labels_output(loaded) else None
        Path(args.dot).write_text(to_dot(g, report, labels))
        log(args, f"Wrote curvature DOT to {args.dot}")
    return RunReport("ricci", args.input, {"kappa0": args.kappa0}), outputs, 0


def cmd_hyper(args, settings):
    h, labels = read_hyperedges(args.input)
    log(args, f"Loaded {args.input}: n={h.n}, hyperedges={h.num_hyperedges}")
    ce = clique_expand(h)
    outputs = {"n": h.n, "num_hyperedges": h.num_hyperedges}
    params = {}
    code = 0

    if args.action == "expand":
        outputs["edges"] = ce.graph.num_edges
        outputs["total_weight"] = ce.graph.total_weight()
        _write_output(args, format_edge_list(ce.graph), "clique expansion")
    else:
        bound = check_c_bound(h, ce)
        outputs.update({
            "d": bound.d,
            "sum_inv_c": bound.sum_inv_c,
            "sum_inv_c_exact": str(bound.sum_inv_c),
            "bound": bound.bound,
            "holds": bound.holds,
        })
        if args.action == "sparsify":
            epsilon, seed = _epsilon(args, settings), _seed(args, settings)
            m = args.samples if args.samples is not None else hyper_sample_count(h, epsilon)
            sparse = hyper_sparsify(h, epsilon, seed, m, ce)
            spectral = verify_spectral(laplacian(ce.graph), laplacian(sparse), epsilon, settings.kernel_tol)
            outputs.update({
                "m": m,
                "retained_edges": sparse.num_edges,
                "spectral": spectral.to_json(),
                "pass": spectral.passed,
            })
            params = {"epsilon": epsilon, "seed": seed, "m": m}
            code = 0 if spectral.passed else 1
            _write_output(args, format_edge_list(sparse), "hypergraph sparsifier")

    if any(label != str(i) for i, label in enumerate(labels)):
        outputs["labels"] = list(labels)
    return RunReport(f"hyper {args.action}", args.input, params), outputs, code


def cmd_bench(args, settings):
    loaded, g = load_graph(args, settings, require_connected=True)
    epsilon, seed = _epsilon(args, settings), _seed(args, settings)
    budgets = parse_budget_grid(args.budget_grid)
    num_seeds = args.seeds if args.seeds is not None else settings.bench_seeds
    if num_seeds < 1:
        raise ParameterError(f"--seeds must be a positive integer, got {num_seeds}")
    seeds = list(range(seed, seed + num_seeds))
    schemes = SCHEMES if args.scheme == "both" else (args.scheme,)
    checkpoint = args.checkpoint or (settings.bench_checkpoint if args.resume else None)

    rows, m_star = run_bench(
        g, epsilon, budgets, seeds, schemes,
        parallel_workers=settings.parallel_workers,
        checkpoint_file=checkpoint,
        checkpoint_key=args.input,
        verbose=not args.quiet,
    )
    summary = summarize(rows)
    if args.output:
        rows.write_csv(args.output)
        log(args, f"Wrote {rows.height} bench rows to {args.output}")

    outputs = {
        "m_star": m_star,
        "budgets": budgets,
        "schemes": list(schemes),
        "summary": summary.to_dicts(),
        "rows": rows.to_dicts(),
    }
    params = {"epsilon": epsilon, "seed": seed, "m": m_star, "seeds": num_seeds}
    return RunReport("bench", args.input, params), outputs, 0


def cmd_gen(args, settings):
    seed = _seed(args, settings)
    kind = args.kind
    params = {"kind": kind, "seed": seed}

    def need(name):
        value = getattr(args, name)
        if value is None:
            raise PreconditionError(f"gen {kind} needs --{name.replace('_', '-')}")
        return value

    if kind in HYPER_KINDS:
        if kind == "tightness":
            h = gen_tightness_design(need("k"), args.construction)
        else:
            h = gen_random_hypergraph(need("n"), need("num_hyperedges"), need("max_size"), seed)
        text = format_hyperedges(h)
        outputs = {"n": h.n, "num_hyperedges": h.num_hyperedges, "d": h.max_membership()}
    else:
        if kind == "complete":
            g = gen_complete(need("n"))
        elif kind == "path":
            g = gen_path(need("n"))
        elif kind == "star":
            g = gen_star(need("leaves"))
        elif kind == "regular":
            g = gen_random_regular(need("n"), need("d"), seed)
        elif kind == "er":
            g = gen_erdos_renyi(need("n"), need("p"), seed)
        else:
            g = gen_remark_union(need("n"), need("d"), seed)
        text = format_edge_list(g)
        outputs = {"n": g.n, "edges": g.num_edges, "connected": is_connected(g)}

    if not args.output:
        sys.stdout.write(text)
        return None, outputs, 0
    _write_output(args, text, kind)
    return RunReport("gen", f"gen:{kind}", params), outputs, 0


COMMANDS = {
    "stats": cmd_stats,
    "sparsify": cmd_sparsify,
    "ricci": cmd_ricci,
    "hyper": cmd_hyper,
    "bench": cmd_bench,
    "gen": cmd_gen,
}


def _seed_type(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", type=str, help="Write the data product (edge list, table) to this path.")
    common.add_argument("--seed", type=_seed_type, help="Unsigned 64-bit seed (default: DEFAULT_SEED).")
    common.add_argument("--epsilon", type=float, help="Approximation parameter in (0, 1) (default: DEFAULT_EPSILON).")
    common.add_argument("--json", action="store_true", help="Print the run report as JSON.")
    common.add_argument("--quiet", action="store_true", help="Suppress progress lines on stderr.")

    with_input = argparse.ArgumentParser(add_help=False, parents=[common])
    with_input.add_argument("--input", required=True, type=str, help="Edge-list path or builtin:NAME.")

    parser = argparse.ArgumentParser(
        description="Common-neighbor graph sparsification toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s stats --input builtin:karate --json
  %(prog)s sparsify --input builtin:karate --epsilon 0.5 --verify
  %(prog)s ricci --input builtin:karate --dot karate.dot
  %(prog)s gen tightness --k 3 --output design3.hyp
  %(prog)s hyper stats --input design3.hyp
  %(prog)s bench --input builtin:karate --seeds 20
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("stats", parents=[with_input], help="Clustering, alpha and its lower bound.")

    p = sub.add_parser("sparsify", parents=[with_input], help="Sample a sparsifier.")
    p.add_argument("--samples", type=int, help="Number of draws m (default: the epsilon budget).")
    p.add_argument("--verify", action="store_true", help="Check the spectral approximation; exit 1 on failure.")
    p.add_argument("--baseline", choices=SCHEMES, default="common-neighbor", help="Sampling scheme.")
    p.add_argument("--keep-prob", type=float, help="Percolation keep probability (default: matched to m).")

    p = sub.add_parser("ricci", parents=[with_input], help="Ollivier-Ricci curvature of every edge.")
    p.add_argument("--dot", type=str, help="Write a DOT drawing colored by curvature sign.")
    p.add_argument("--kappa0", type=float, default=0.0, help="Report the number of edges with curvature below this value.")

    p = sub.add_parser("hyper", parents=[with_input], help="Hypergraph clique expansion and sparsification.")
    p.add_argument("action", choices=("expand", "stats", "sparsify"))
    p.add_argument("--samples", type=int, help="Number of draws m (default: the epsilon budget).")

    p = sub.add_parser("bench", parents=[with_input], help="Common-neighbor sampling against bond percolation.")
    p.add_argument("--scheme", choices=("both",) + SCHEMES, default="both")
    p.add_argument("--budget-grid", type=str, default="0.25,0.5,1", help="Budgets as fractions of the epsilon budget.")
    p.add_argument("--seeds", type=int, help="Seeds per cell (default: BENCH_SEEDS).")
    p.add_argument("--checkpoint", type=str, help="Resume from / save completed cells to this JSON file.")
    p.add_argument("--resume", action="store_true", help="Use the BENCH_CHECKPOINT file as checkpoint.")

    p = sub.add_parser("gen", parents=[common], help="Generate a graph or hypergraph.")
    p.add_argument("kind", choices=GRAPH_KINDS + HYPER_KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--leaves", type=int)
    p.add_argument("--num-hyperedges", type=int)
    p.add_argument("--max-size", type=int)
    p.add_argument("--construction", choices=("auto", "shift", "cyclic"), default="auto")

    return parser


def main(argv=None):
    """Parse arguments, run one command and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    start_time = time.time()

    try:
        settings = load_settings()
        report, outputs, code = COMMANDS[args.command](args, settings)
    except (SparsifyError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2

    if report is None:
        return code
    report.outputs = outputs
    report.wall_time_s = time.time() - start_time
    if args.json:
        write_report(report)
    else:
        sys.stdout.write(format_summary(report))
    log(args, f"Total execution time: {report.wall_time_s:.2f} seconds")
    return code


if __name__ == "__main__":
    sys.exit(main())
