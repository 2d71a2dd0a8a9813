"""``ccur`` command-line interface.

Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 numeric error.
Every run writes ``manifest.json`` next to its outputs; ``ccur rerun``
replays a manifest into a new directory.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import __version__
from .baselines import CpcaConfig, NonPositiveContrastWarning, cpca_rank_features
from .contrastive import ccur
from .cur import cur_decompose, cur_sample
from .exceptions import CcurError, InputError
from .io import RunManifest, file_digest, load_matrix, write_json, write_matrix, write_table
from .linalg import DataMatrix, pca_project
from .scoring import DEFAULT_EPSILON, DEFAULT_K, column_leverage
from .sim import METHODS, SimConfig, run_benchmark

SEED_ENV = "CCUR_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _nonneg_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}") from None
    if not (np.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _nonneg_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text!r}") from None
    if not (np.isfinite(value) and value >= 0):
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text!r}")
    return value


def _method_list(text):
    methods = [m.strip() for m in text.split(",") if m.strip()]
    for m in methods:
        if m.upper() == "CFS":
            raise argparse.ArgumentTypeError("CFS is not implemented by this package")
        if m not in METHODS:
            raise argparse.ArgumentTypeError(f"unknown method {m!r}; choose from {','.join(METHODS)}")
    if not methods:
        raise argparse.ArgumentTypeError("at least one method is required")
    return methods


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return _nonneg_int(raw)
    except argparse.ArgumentTypeError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not a nonnegative integer") from None


def _add_input_options(p):
    g = p.add_argument_group("input format")
    g.add_argument("--delimiter", choices=["auto", "comma", "tab"], default="auto",
                   help="field separator (auto: tab for .tsv/.tab, else comma)")
    g.add_argument("--no-header", action="store_true", help="first line is data, not column labels")
    g.add_argument("--row-labels", action="store_true", help="first field of each row is a label")
    g.add_argument("--transpose", action="store_true", help="transpose after reading (features as rows)")


def _add_output(p):
    p.add_argument("-o", "--out-dir", required=True, help="directory for results (created if missing)")


def build_parser():
    parser = _Parser(prog="ccur", description="Contrastive CUR feature and sample selection.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("ccur", help="contrastive column and row selection",
                       description="Select foreground-specific columns and rows.")
    p.add_argument("foreground", help="foreground (case) matrix file")
    p.add_argument("background", help="background (control) matrix file")
    p.add_argument("--k", type=_positive_int, default=DEFAULT_K, help="singular vectors (default 7)")
    p.add_argument("--c", type=_positive_int, default=10, help="columns to select (default 10)")
    p.add_argument("--r", type=_positive_int, default=None, help="rows to select (default: same as --c)")
    p.add_argument("--epsilon", type=_positive_float, default=DEFAULT_EPSILON,
                   help="denominator stabilizer (default 1e-6)")
    p.add_argument("--center", action="store_true", help="mean-center columns of each group first")
    _add_input_options(p)
    _add_output(p)

    p = sub.add_parser("cur", help="leverage-score CUR decomposition",
                       description="Deterministic or sampled CUR of a single matrix.")
    p.add_argument("matrix", help="input matrix file")
    p.add_argument("--k", type=_positive_int, default=DEFAULT_K, help="singular vectors (default 7)")
    p.add_argument("--c", type=_positive_int, default=10, help="columns to select (default 10)")
    p.add_argument("--r", type=_positive_int, default=None, help="rows to select (default: same as --c)")
    p.add_argument("--sampled", action="store_true", help="sample by leverage instead of taking the top scores")
    p.add_argument("--seed", type=_nonneg_int, default=None,
                   help=f"random seed for --sampled (default ${SEED_ENV} or 0)")
    p.add_argument("--center", action="store_true", help="mean-center columns first")
    _add_input_options(p)
    _add_output(p)

    p = sub.add_parser("cpca", help="contrastive PCA feature ranking",
                       description="Rank features by first-component loading of Cov_fg - alpha*Cov_bg.")
    p.add_argument("foreground")
    p.add_argument("background")
    p.add_argument("--alpha", type=_nonneg_float, default=1.0, help="contrast strength (default 1)")
    p.add_argument("--top", type=_positive_int, default=10, help="features to report (default 10)")
    _add_input_options(p)
    _add_output(p)

    p = sub.add_parser("simulate", help="synthetic recovery benchmark",
                       description="Generate replicates and write mean/stderr recovery curves.")
    p.add_argument("--n", type=_positive_int, default=500, help="foreground rows")
    p.add_argument("--m", type=_positive_int, default=500, help="background rows")
    p.add_argument("--p", type=_positive_int, default=100, help="features")
    p.add_argument("--latent-dim", type=_positive_int, default=5)
    p.add_argument("--threshold", type=_nonneg_float, default=1.8, help="sparsity cutoff")
    p.add_argument("--replicates", type=_positive_int, default=100)
    p.add_argument("--method-k", type=_positive_int, default=10, help="singular vectors for every method")
    p.add_argument("--ccur-c", type=_positive_int, default=10, help="columns kept before CCUR row stage")
    p.add_argument("--epsilon", type=_positive_float, default=DEFAULT_EPSILON)
    p.add_argument("--alpha", type=_nonneg_float, default=1.0, help="CPCA contrast strength")
    p.add_argument("--methods", type=_method_list, default=list(METHODS),
                   help=f"comma-separated subset of {','.join(METHODS)}")
    p.add_argument("--seed", type=_nonneg_int, default=None, help=f"base seed (default ${SEED_ENV} or 0)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads (output is unaffected)")
    _add_output(p)

    p = sub.add_parser("project", help="2-component PCA coordinates for scatter plots",
                       description="Project rows on the first two principal components.")
    p.add_argument("matrix")
    p.add_argument("--selected-rows-file", default=None,
                   help="JSON with 'row_indices' (e.g. ccur selection.json) or one index per line")
    p.add_argument("--columns-file", default=None,
                   help="JSON with 'col_indices'; restrict to those columns before PCA")
    _add_input_options(p)
    _add_output(p)

    p = sub.add_parser("rerun", help="replay a manifest.json into a new directory")
    p.add_argument("manifest")
    _add_output(p)
    return parser


def _load(path, args):
    delim = {"auto": None, "comma": ",", "tab": "\t"}[args.delimiter]
    return load_matrix(path, delimiter=delim, has_header=not args.no_header,
                       has_row_labels=args.row_labels, transpose=args.transpose)


def _labels_at(labels, indices):
    return None if labels is None else [labels[i] for i in indices]


def _label(labels, i):
    return str(i) if labels is None else labels[i]


def _center_if(dm: DataMatrix, flag):
    return dm.centered() if flag else dm


def run_ccur(args, out):
    X = _center_if(_load(args.foreground, args), args.center)
    Y = _center_if(_load(args.background, args), args.center)
    sel = ccur(X, Y, k=args.k, c=args.c, r=args.r, epsilon=args.epsilon)
    fg_lev = column_leverage(X, args.k).scores
    bg_lev = column_leverage(Y, args.k).scores
    result = {
        "col_indices": sel.col_indices,
        "col_labels": _labels_at(X.col_labels, sel.col_indices),
        "row_indices": sel.row_indices,
        "row_labels": _labels_at(X.row_labels, sel.row_indices),
        "col_scores": sel.col_scores.scores,
        "row_scores": sel.row_scores.scores,
        "config": {"k": args.k, "c": sel.c, "r": sel.r, "epsilon": args.epsilon,
                   "center": args.center, "row_k": sel.row_k},
    }
    write_json(os.path.join(out, "selection.json"), result)
    col_rank = np.empty(len(fg_lev), dtype=int)
    col_rank[sel.col_scores.ranking()] = np.arange(1, len(fg_lev) + 1)
    write_table(os.path.join(out, "col_scores.csv"),
                ["index", "label", "fg_leverage", "bg_leverage", "contrastive_score", "rank"],
                [[d, _label(X.col_labels, d), repr(float(fg_lev[d])), repr(float(bg_lev[d])),
                  repr(float(sel.col_scores.scores[d])), int(col_rank[d])] for d in range(len(fg_lev))])
    n = X.shape[0]
    row_rank = np.empty(n, dtype=int)
    row_rank[sel.row_scores.ranking()] = np.arange(1, n + 1)
    write_table(os.path.join(out, "row_scores.csv"), ["index", "label", "leverage", "rank"],
                [[i, _label(X.row_labels, i), repr(float(sel.row_scores.scores[i])), int(row_rank[i])]
                 for i in range(n)])
    return ["selection.json", "col_scores.csv", "row_scores.csv"], result["config"]


def run_cur(args, out):
    X = _center_if(_load(args.matrix, args), args.center)
    r = args.c if args.r is None else args.r
    if args.sampled:
        f = cur_sample(X, args.k, args.c, r, seed=args.seed)
    else:
        f = cur_decompose(X, args.k, args.c, r)
    write_json(os.path.join(out, "cur.json"), {
        "col_indices": f.col_indices,
        "col_labels": _labels_at(X.col_labels, f.col_indices),
        "row_indices": f.row_indices,
        "row_labels": _labels_at(X.row_labels, f.row_indices),
        "recon_error": f.recon_error,
        "config": {"k": args.k, "c": args.c, "r": r, "sampled": args.sampled,
                   "seed": args.seed if args.sampled else None, "center": args.center},
    })
    sel_cols = _labels_at(X.col_labels, f.col_indices)
    sel_rows = _labels_at(X.row_labels, f.row_indices)
    write_matrix(os.path.join(out, "C.csv"), f.C, row_labels=X.row_labels, col_labels=sel_cols)
    write_matrix(os.path.join(out, "U_mid.csv"), f.U_mid)
    write_matrix(os.path.join(out, "R.csv"), f.R, row_labels=sel_rows, col_labels=X.col_labels)
    config = {"k": args.k, "c": args.c, "r": r, "sampled": args.sampled, "center": args.center}
    return ["cur.json", "C.csv", "U_mid.csv", "R.csv"], config


def run_cpca(args, out):
    X = _load(args.foreground, args)
    Y = _load(args.background, args)
    top = min(args.top, X.shape[1])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonPositiveContrastWarning)
        res = cpca_rank_features(X, Y, CpcaConfig(alpha=args.alpha, num_features=top))
    for w in caught:
        print(f"ccur cpca: warning: {w.message}", file=sys.stderr)
    write_json(os.path.join(out, "cpca.json"), {
        "indices": res.indices,
        "labels": _labels_at(X.col_labels, res.indices),
        "eigenvalue": res.eigenvalue,
        "eigenvalue_positive": res.eigenvalue_positive,
        "config": {"alpha": args.alpha, "top": top},
    })
    order = np.argsort(-np.abs(res.loadings), kind="stable")
    rank = np.empty(order.size, dtype=int)
    rank[order] = np.arange(1, order.size + 1)
    write_table(os.path.join(out, "loadings.csv"), ["index", "label", "loading", "rank"],
                [[d, _label(X.col_labels, d), repr(float(res.loadings[d])), int(rank[d])]
                 for d in range(order.size)])
    return ["cpca.json", "loadings.csv"], {"alpha": args.alpha, "top": top}


def run_simulate(args, out):
    config = SimConfig(n=args.n, m=args.m, p=args.p, latent_dim=args.latent_dim,
                       threshold=args.threshold, seed=args.seed, replicates=args.replicates,
                       method_k=args.method_k, ccur_c=args.ccur_c, epsilon=args.epsilon,
                       cpca_alpha=args.alpha)
    result = run_benchmark(config, args.methods, n_jobs=args.jobs)
    with open(os.path.join(out, "benchmark.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(result.to_csv())
    resolved = {name: getattr(config, name) for name in config.__dataclass_fields__}
    resolved["methods"] = args.methods
    return ["benchmark.csv"], resolved


def _read_index_file(path, key):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, dict):
        if key not in data:
            raise InputError(f"{path}: JSON has no {key!r} field")
        data = data[key]
    if data is None:
        try:
            data = [int(line) for line in text.split() if line.strip()]
        except ValueError:
            raise InputError(f"{path}: expected JSON or one integer index per line") from None
    if not isinstance(data, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in data):
        raise InputError(f"{path}: {key} must be a list of integers")
    return data


def run_project(args, out):
    X = _load(args.matrix, args)
    n, p = X.shape
    if args.columns_file:
        cols = _read_index_file(args.columns_file, "col_indices")
        if not cols or min(cols) < 0 or max(cols) >= p:
            raise InputError(f"{args.columns_file}: column indices out of range [0, {p - 1}]")
        X = X.take_columns(cols)
    selected = np.zeros(n, dtype=bool)
    if args.selected_rows_file:
        rows = _read_index_file(args.selected_rows_file, "row_indices")
        if rows and (min(rows) < 0 or max(rows) >= n):
            raise InputError(f"{args.selected_rows_file}: row indices out of range [0, {n - 1}]")
        selected[rows] = True
    coords = pca_project(X, 2)
    write_table(os.path.join(out, "projection.csv"), ["index", "label", "pc1", "pc2", "selected"],
                [[i, _label(X.row_labels, i), repr(float(coords[i, 0])), repr(float(coords[i, 1])),
                  int(selected[i])] for i in range(n)])
    return ["projection.csv"], {"columns_file": args.columns_file,
                                "selected_rows_file": args.selected_rows_file}


RUNNERS = {
    "ccur": (run_ccur, ("foreground", "background")),
    "cur": (run_cur, ("matrix",)),
    "cpca": (run_cpca, ("foreground", "background")),
    "simulate": (run_simulate, ()),
    "project": (run_project, ("matrix", "selected_rows_file", "columns_file")),
}


def _strip_out_dir(argv):
    kept, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("-o", "--out-dir"):
            skip = True
            continue
        if tok.startswith("--out-dir=") or (tok.startswith("-o") and len(tok) > 2):
            continue
        kept.append(tok)
    return kept


def _rerun(args):
    manifest = RunManifest.read(args.manifest)
    for path, digest in manifest.inputs.items():
        if not os.path.exists(path):
            raise InputError(f"manifest input {path} is missing")
        if file_digest(path) != digest:
            raise InputError(f"manifest input {path} changed since the recorded run")
    return main(list(manifest.argv) + ["--out-dir", args.out_dir])


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "rerun":
            return _rerun(args)
        runner, input_attrs = RUNNERS[args.command]
        replay = _strip_out_dir(argv)
        if hasattr(args, "seed"):
            if args.seed is None:
                args.seed = _default_seed()
                replay += ["--seed", str(args.seed)]
        if args.command in ("ccur", "cur") and args.r is None:
            args.r = args.c
        os.makedirs(args.out_dir, exist_ok=True)
        outputs, config = runner(args, args.out_dir)
        inputs = {}
        for attr in input_attrs:
            path = getattr(args, attr)
            if path:
                inputs[path] = file_digest(path)
        RunManifest(
            subcommand=args.command,
            config=config,
            inputs=inputs,
            outputs=outputs,
            argv=replay,
            seed=getattr(args, "seed", None),
            version=__version__,
        ).write(args.out_dir)
    except UsageError as exc:
        print(f"ccur {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except CcurError as exc:
        print(f"ccur {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"ccur {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ccur {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
