"""Synthetic foreground/background generator and recovery-curve benchmark.

Foreground rows are ``x_i = V z_i + W t_i + e_i`` and background rows
``y_j = V s_j + e_j`` with all latents, loadings and noise standard normal.
``V``, ``W`` and the foreground latents ``Z_shared``/``Z_unique`` are
hard-thresholded (``|x| < threshold`` set to 0); background latents and noise
are not. Ground-truth masks mark which columns load on ``W``/``V`` and
which foreground rows carry nonzero unique/shared latents.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baselines import CpcaConfig, cpca_rank_features
from .contrastive import select_columns, select_rows
from .exceptions import DimensionError
from .scoring import DEFAULT_EPSILON, column_leverage, row_leverage

METHODS = ("CCUR", "CUR-fg", "CUR-union", "CPCA")
METRICS = ("W_columns", "V_columns", "Z_unique_rows", "Z_shared_rows")
ROW_METRICS = ("Z_unique_rows", "Z_shared_rows")


@dataclass(frozen=True)
class SimConfig:
    n: int = 500
    m: int = 500
    p: int = 100
    latent_dim: int = 5
    threshold: float = 1.8
    seed: int = 0
    replicates: int = 100
    method_k: int = 10
    ccur_c: int = 10
    epsilon: float = DEFAULT_EPSILON
    cpca_alpha: float = 1.0

    def __post_init__(self):
        for name in ("n", "m", "p", "latent_dim", "replicates", "method_k", "ccur_c"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise DimensionError(f"{name} must be a positive integer, got {value!r}")
        if not self.threshold >= 0:
            raise DimensionError(f"threshold must be >= 0, got {self.threshold!r}")
        if self.seed < 0:
            raise DimensionError("seed must be a nonnegative integer")
        if self.ccur_c > self.p:
            raise DimensionError(f"ccur_c={self.ccur_c} exceeds p={self.p}")
        if self.method_k > min(self.n, self.m, self.p):
            raise DimensionError(f"method_k={self.method_k} exceeds min(n, m, p)")


@dataclass(frozen=True)
class SimInstance:
    X_fg: np.ndarray = field(repr=False)
    Y_bg: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    W: np.ndarray = field(repr=False)
    Z_shared: np.ndarray = field(repr=False)
    Z_unique: np.ndarray = field(repr=False)
    w_mask: np.ndarray
    v_mask: np.ndarray
    zu_mask: np.ndarray
    zs_mask: np.ndarray


def _threshold(A, cutoff):
    return np.where(np.abs(A) < cutoff, 0.0, A)


def _nonzero_rows(A):
    return np.any(A != 0, axis=1)


def generate(config: SimConfig, replicate_index: int = 0) -> SimInstance:
    """Draw one replicate; the stream is seeded by ``(config.seed, replicate_index)``."""
    rng = np.random.default_rng([config.seed, replicate_index])
    n, m, p, q = config.n, config.m, config.p, config.latent_dim
    V = _threshold(rng.standard_normal((p, q)), config.threshold)
    W = _threshold(rng.standard_normal((p, q)), config.threshold)
    Z_shared = _threshold(rng.standard_normal((n, q)), config.threshold)
    Z_unique = _threshold(rng.standard_normal((n, q)), config.threshold)
    noise_fg = rng.standard_normal((n, p))
    S = rng.standard_normal((m, q))
    noise_bg = rng.standard_normal((m, p))
    return SimInstance(
        X_fg=Z_shared @ V.T + Z_unique @ W.T + noise_fg,
        Y_bg=S @ V.T + noise_bg,
        V=V,
        W=W,
        Z_shared=Z_shared,
        Z_unique=Z_unique,
        w_mask=_nonzero_rows(W),
        v_mask=_nonzero_rows(V),
        zu_mask=_nonzero_rows(Z_unique),
        zs_mask=_nonzero_rows(Z_shared),
    )


def recovery_counts(ranking, mask):
    """``counts[j-1]`` = number of the top-``j`` ranked indices whose mask bit is set."""
    order = np.asarray(ranking)
    mask = np.asarray(mask, dtype=bool)
    if order.ndim != 1 or order.size != mask.size or not np.issubdtype(order.dtype, np.integer):
        raise DimensionError("ranking must be a permutation of range(len(mask))")
    if not np.array_equal(np.sort(order), np.arange(mask.size)):
        raise DimensionError("ranking must be a permutation of range(len(mask))")
    return np.cumsum(mask[order]).astype(np.int64)


@dataclass(frozen=True)
class RecoveryCurve:
    """Cumulative recovery counts, one row per replicate, with summary statistics."""

    method: str
    metric: str
    counts: np.ndarray = field(repr=False)

    @property
    def replicates(self):
        return self.counts.shape[0]

    @property
    def mean(self):
        return self.counts.mean(axis=0)

    @property
    def stderr(self):
        if self.replicates < 2:
            return np.zeros(self.counts.shape[1])
        return self.counts.std(axis=0, ddof=1) / np.sqrt(self.replicates)

    def band(self, width=2.0):
        """``(lower, upper)`` of mean +/- ``width`` standard errors."""
        return self.mean - width * self.stderr, self.mean + width * self.stderr


def column_recovery(ranking, mask, method="", metric="columns") -> RecoveryCurve:
    return RecoveryCurve(method, metric, recovery_counts(ranking, mask)[None, :])


def row_recovery(ranking, mask, method="", metric="rows") -> RecoveryCurve:
    return RecoveryCurve(method, metric, recovery_counts(ranking, mask)[None, :])


def _full_ranking(scores):
    return np.argsort(-np.asarray(getattr(scores, "scores", scores)), kind="stable")


def method_rankings(method, inst: SimInstance, config: SimConfig):
    """Full column ranking and (where defined) full foreground row ranking."""
    k = config.method_k
    X, Y = inst.X_fg, inst.Y_bg
    n = X.shape[0]
    if method == "CCUR":
        _, col_scores = select_columns(X, Y, k, config.p, config.epsilon)
        cols = _full_ranking(col_scores)
        top = cols[: config.ccur_c]
        rows, _ = select_rows(X, top, min(k, top.size, n), n)
        return cols, rows
    if method == "CUR-fg":
        return _full_ranking(column_leverage(X, k)), _full_ranking(row_leverage(X, k))
    if method == "CUR-union":
        union = np.vstack([X, Y])
        return _full_ranking(column_leverage(union, k)), _full_ranking(row_leverage(X, k))
    if method == "CPCA":
        res = cpca_rank_features(X, Y, CpcaConfig(config.cpca_alpha, config.p))
        return res.indices, None
    if method.upper() == "CFS":
        raise ValueError("CFS is not implemented by this package")
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def _run_replicate(config, methods, index):
    inst = generate(config, index)
    out = {}
    for method in methods:
        cols, rows = method_rankings(method, inst, config)
        out[(method, "W_columns")] = recovery_counts(cols, inst.w_mask)
        out[(method, "V_columns")] = recovery_counts(cols, inst.v_mask)
        if rows is not None:
            out[(method, "Z_unique_rows")] = recovery_counts(rows, inst.zu_mask)
            out[(method, "Z_shared_rows")] = recovery_counts(rows, inst.zs_mask)
    return out


@dataclass(frozen=True)
class BenchmarkResult:
    config: SimConfig
    curves: dict

    def curve(self, method, metric) -> RecoveryCurve:
        return self.curves[(method, metric)]

    def to_csv(self) -> str:
        """Tidy CSV text: ``method,metric,rank_j,mean,stderr`` with 1-based ``rank_j``."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["method", "metric", "rank_j", "mean", "stderr"])
        for (method, metric), curve in self.curves.items():
            for j, (mu, se) in enumerate(zip(curve.mean, curve.stderr), start=1):
                writer.writerow([method, metric, j, repr(float(mu)), repr(float(se))])
        return buf.getvalue()


def run_benchmark(config: SimConfig, methods=("CCUR", "CUR-fg"), n_jobs: int = 1) -> BenchmarkResult:
    """Generate ``config.replicates`` instances and score every method on each.

    Replicates run on ``n_jobs`` threads; results are collected by replicate
    index so output is identical to a serial run.
    """
    methods = list(dict.fromkeys(methods))
    if not methods:
        raise ValueError("at least one method is required")
    for method in methods:
        if method not in METHODS:
            if method.upper() == "CFS":
                raise ValueError("CFS is not implemented by this package")
            raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    indices = range(config.replicates)
    if n_jobs == 1:
        per_rep = [_run_replicate(config, methods, i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs if n_jobs > 0 else None) as pool:
            per_rep = list(pool.map(lambda i: _run_replicate(config, methods, i), indices))
    curves = {}
    for method in methods:
        for metric in METRICS:
            key = (method, metric)
            if key in per_rep[0]:
                curves[key] = RecoveryCurve(method, metric, np.vstack([r[key] for r in per_rep]))
    return BenchmarkResult(config, curves)
