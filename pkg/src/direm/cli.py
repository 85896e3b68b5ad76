"""Command-line interface: ``direm generate | embed | wcut | verify``.

Exit codes: 0 success, 1 usage or input error, 2 disconnected graph,
3 degenerate degrees, 4 verification failure.
"""

import argparse
import contextlib
import json
import os
import sys

import numpy as np

from . import __version__
from .asymptotics import DEFAULT_EPS, TARGETS, TEST_FUNCTIONS, verify_limit
from .embedding import directed_embed, divergence_estimate
from .errors import DegenerateDegree, Disconnected, DiremError, EdgeListParseError
from .io import fmt, load_dense, load_edge_list, read_weights, save_edge_list, write_table
from .kernels import KernelConfig, generative_affinity
from .operators import wcut_eigs, wcut_laplacian
from .synthetic import GENERATORS

EXIT_OK, EXIT_USAGE, EXIT_DISCONNECTED, EXIT_DEGENERATE, EXIT_VERIFY = 0, 1, 2, 3, 4

SHAPE_DEFAULTS = {
    "circle": {"field": "tangential:1.0", "density": "uniform", "min_n": 16},
    "dumbbell": {"field": "mixed:0.5,0.5", "density": "uniform", "min_n": 50},
    "octant": {"field": "tangential:1.0", "density": "exp:1.0", "min_n": 100},
    "sphere": {"field": "latitudinal:1.0", "density": "vmf", "min_n": 500},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _write_config(prefix, command, params, extra=None):
    cfg = {"tool": "direm", "version": __version__, "command": command, "params": params}
    if extra:
        cfg.update(extra)
    with open(f"{prefix}.config.json", "w") as fh:
        json.dump(cfg, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_generate(args):
    defaults = SHAPE_DEFAULTS[args.shape]
    field = args.field or defaults["field"]
    density = args.density or defaults["density"]
    if args.n < defaults["min_n"]:
        raise UsageError(f"{args.shape} needs --n >= {defaults['min_n']}")
    if args.eps <= 0:
        raise UsageError("--eps must be positive")
    kwargs = {"density": density, "field": field, "seed": args.seed}
    if args.shape == "octant":
        kwargs["eps"] = args.eps
    try:
        ds = GENERATORS[args.shape](args.n, **kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    A, clamp = generative_affinity(ds.points, ds.w_true, KernelConfig(args.eps, ds.intrinsic_dim))

    ids = [str(i) for i in range(ds.n)]
    m = ds.points.shape[1]
    write_table(f"{args.out}.points.csv", ["node_id", *[f"x{k}" for k in range(m)]], ids, ds.points)
    write_table(
        f"{args.out}.field.csv",
        ["node_id", *[f"w{k}" for k in range(m)], *[f"wt{k}" for k in range(m)], "boundary"],
        ids,
        np.column_stack([ds.w_true, ds.w_tangential, ds.boundary_mask.astype(float)]),
    )
    save_edge_list(f"{args.out}.edges.csv", A, ids, min_weight=args.min_weight_ratio * A.max())
    params = {
        "shape": args.shape, "n": args.n, "eps": args.eps, "field": field,
        "density": density, "seed": args.seed, "min_weight_ratio": args.min_weight_ratio,
    }
    _write_config(args.out, "generate", params,
                  {"dataset": ds.params, "clamp": clamp.as_dict(), "intrinsic_dim": ds.intrinsic_dim})
    return EXIT_OK


def _load(args):
    loader = load_dense if args.format == "dense" else load_edge_list
    A, ids = loader(args.input, zero_diagonal=args.zero_diagonal)
    args.node_ids = ids
    return A, ids


def cmd_embed(args):
    A, ids = _load(args)
    if not 1 <= args.d <= len(ids) - 1:
        raise UsageError(f"--d must be between 1 and {len(ids) - 1}")
    emb = directed_embed(A, args.d, with_total_flow=args.total_flow)
    coords = [f"phi{k + 1}" for k in range(args.d)]
    write_table(f"{args.out}.coords.csv", ["node_id", *coords], ids, emb.Phi)
    with open(f"{args.out}.eigenvalues.csv", "w") as fh:
        fh.write("index,eigenvalue\n")
        for k, lam in enumerate(emb.Lambda, start=2):
            fh.write(f"{k},{fmt(lam)}\n")
    write_table(f"{args.out}.density.csv", ["node_id", "pi", "degree_density"], ids,
                np.column_stack([emb.pi, emb.degree_density]))
    write_table(f"{args.out}.fieldR.csv", ["node_id", *[f"r{k + 1}" for k in range(args.d)]], ids, emb.R)
    if args.total_flow:
        write_table(f"{args.out}.flow.csv", ["node_id", *[f"f{k + 1}" for k in range(args.d)]],
                    ids, emb.total_flow)
    if args.divergence:
        write_table(f"{args.out}.div.csv", ["node_id", "divergence"], ids, divergence_estimate(A))
    params = {
        "input": os.path.basename(args.input), "format": args.format, "d": args.d,
        "zero_diagonal": args.zero_diagonal, "total_flow": args.total_flow,
        "divergence": args.divergence,
    }
    _write_config(args.out, "embed", params, {"n": len(ids), "diagnostics": emb.diagnostics})
    return EXIT_OK


def cmd_wcut(args):
    A, ids = _load(args)
    if not 1 <= args.k <= len(ids):
        raise UsageError(f"--k must be between 1 and {len(ids)}")
    T = None if args.weights == "outdegree" else read_weights(args.weights, ids)
    W = wcut_laplacian(A, T)
    pairs = wcut_eigs(W, args.k)
    write_table(f"{args.out}.wcut_vectors.csv", ["node_id", *[f"v{k + 1}" for k in range(args.k)]],
                ids, pairs.vectors)
    with open(f"{args.out}.wcut_values.csv", "w") as fh:
        fh.write("index,eigenvalue\n")
        for k, lam in enumerate(pairs.values, start=1):
            fh.write(f"{k},{fmt(lam)}\n")
    params = {"input": os.path.basename(args.input), "format": args.format, "k": args.k,
              "weights": args.weights if args.weights == "outdegree" else os.path.basename(args.weights),
              "zero_diagonal": args.zero_diagonal}
    _write_config(args.out, "wcut", params, {"n": len(ids)})
    return EXIT_OK


def cmd_verify(args):
    if len(args.band) != 2 or args.band[0] > args.band[1]:
        raise UsageError("--band takes two increasing numbers")
    try:
        report = verify_limit(
            target=args.target, phi_id=args.phi, field=args.field, eps_list=args.eps,
            density=args.density, alpha=args.alpha, n_fixed=args.n_fixed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = report.passes(tuple(args.band))
    summary = {**report.summary(), "band": list(args.band), "passed": ok}
    with open(f"{args.out}.report.jsonl", "w") as fh:
        for rec in report.records():
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        fh.write(json.dumps({"summary": summary}, sort_keys=True) + "\n")
    params = {"target": args.target, "phi": args.phi, "field": args.field, "eps": args.eps,
              "density": args.density, "alpha": args.alpha, "n_fixed": args.n_fixed,
              "band": args.band}
    _write_config(args.out, "verify", params)
    print(f"{args.target}: slope {report.fitted_slope:.3f}, max residual "
          f"{max(report.residuals):.3e}, {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser():
    parser = _Parser(prog="direm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"direm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="sample a synthetic manifold and its directed affinities")
    g.add_argument("--shape", required=True, choices=sorted(GENERATORS))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--eps", type=float, required=True)
    g.add_argument("--field", help="field spec, e.g. tangential:1.0 (shape-dependent default)")
    g.add_argument("--density", help="density spec, e.g. uniform, exp:1.0, vmf")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--min-weight-ratio", type=float, default=1e-12,
                   help="drop off-diagonal edges below this fraction of the largest weight")
    g.add_argument("--out", required=True, help="output prefix")
    g.set_defaults(func=cmd_generate)

    def graph_input(p):
        p.add_argument("--input", required=True)
        p.add_argument("--format", choices=["edges", "dense"], default="edges")
        p.add_argument("--zero-diagonal", action="store_true", help="set A_ii = 0 after loading")
        p.add_argument("--out", required=True, help="output prefix")

    e = sub.add_parser("embed", help="directed embedding of a weighted graph")
    graph_input(e)
    e.add_argument("--d", type=int, required=True, help="embedding dimension")
    e.add_argument("--total-flow", action="store_true", help="also write the total advective flow")
    e.add_argument("--divergence", action="store_true", help="also write the experimental divergence estimate")
    e.set_defaults(func=cmd_embed)

    w = sub.add_parser("wcut", help="eigenvectors of the weighted-cut Laplacian")
    graph_input(w)
    w.add_argument("--k", type=int, required=True, help="number of smallest eigenpairs")
    w.add_argument("--weights", default="outdegree", help="'outdegree' or a node_id,weight CSV file")
    w.set_defaults(func=cmd_wcut)

    v = sub.add_parser("verify", help="check a small-bandwidth operator limit on the circle")
    v.add_argument("--target", choices=TARGETS, default="ss_laplacian")
    v.add_argument("--eps", type=_float_list, default=list(DEFAULT_EPS))
    v.add_argument("--field", type=float, default=0.5, help="tangential field magnitude")
    v.add_argument("--phi", choices=sorted(TEST_FUNCTIONS), default="cos")
    v.add_argument("--density", default="uniform")
    v.add_argument("--alpha", type=float, default=None)
    v.add_argument("--n-fixed", type=int, default=None, help="use this grid size at every epsilon")
    v.add_argument("--band", type=_float_list, default=[0.7, 1.3])
    v.add_argument("--out", required=True, help="output prefix")
    v.set_defaults(func=cmd_verify)
    return parser


def _thread_limit():
    value = os.environ.get("DIREM_THREADS")
    if not value:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=int(value))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with _thread_limit():
            return args.func(args)
    except Disconnected as exc:
        print(f"error: {exc}; component sizes: {exc.component_sizes}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except DegenerateDegree as exc:
        ids = getattr(args, "node_ids", None)
        nodes = [ids[i] for i in exc.indices] if ids else exc.indices
        print(f"error: degenerate degrees at nodes {nodes}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (UsageError, EdgeListParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DiremError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
