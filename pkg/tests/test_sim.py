import csv
import io

import numpy as np
import pytest

from ccur import DimensionError
from ccur.sim import (
    METHODS,
    METRICS,
    RecoveryCurve,
    SimConfig,
    column_recovery,
    generate,
    recovery_counts,
    row_recovery,
    run_benchmark,
)

SMALL = SimConfig(n=60, m=50, p=20, latent_dim=3, replicates=4, method_k=4, ccur_c=5, seed=11)


def test_no_threshold_means_all_masks_true():
    inst = generate(SimConfig(n=30, m=20, p=15, threshold=0.0), 0)
    for mask in (inst.w_mask, inst.v_mask, inst.zu_mask, inst.zs_mask):
        assert mask.all()


def test_generator_deterministic_and_replicates_differ():
    a, b = generate(SMALL, 2), generate(SMALL, 2)
    assert np.array_equal(a.X_fg, b.X_fg) and np.array_equal(a.Y_bg, b.Y_bg)
    c = generate(SMALL, 3)
    assert not np.array_equal(a.X_fg, c.X_fg)


def test_generator_structure():
    cfg = SimConfig(n=50, m=40, p=30, latent_dim=4, seed=2)
    inst = generate(cfg, 0)
    assert inst.X_fg.shape == (50, 30) and inst.Y_bg.shape == (40, 30)
    for M in (inst.V, inst.W, inst.Z_shared, inst.Z_unique):
        nz = M[M != 0]
        assert np.all(np.abs(nz) >= 1.8)
    np.testing.assert_array_equal(inst.w_mask, (inst.W != 0).any(axis=1))
    np.testing.assert_array_equal(inst.zu_mask, (inst.Z_unique != 0).any(axis=1))
    # what remains after removing the latent signal is standard-normal noise
    noise = inst.X_fg - inst.Z_shared @ inst.V.T - inst.Z_unique @ inst.W.T
    assert abs(noise.std() - 1.0) < 0.05 and abs(noise.mean()) < 0.05


def test_recovery_examples():
    assert recovery_counts([0, 1, 2], [True, True, True]).tolist() == [1, 2, 3]
    assert recovery_counts([2, 1, 0], [False] * 3).tolist() == [0, 0, 0]
    assert recovery_counts([2, 0, 1], [True, False, True]).tolist() == [1, 2, 2]
    curve = column_recovery([2, 0, 1], [True, False, True], "X", "W_columns")
    assert curve.replicates == 1 and curve.stderr.tolist() == [0, 0, 0]
    assert row_recovery([1, 0], [False, True]).mean.tolist() == [1.0, 1.0]


@pytest.mark.parametrize("ranking", [[0, 0, 1], [0, 1], [0, 1, 3], [0.0, 1.0, 2.0]])
def test_recovery_rejects_non_permutations(ranking):
    with pytest.raises(DimensionError):
        recovery_counts(ranking, [True, False, True])


def test_curve_statistics():
    counts = np.array([[1, 1, 2], [0, 1, 2], [1, 2, 3]])
    curve = RecoveryCurve("m", "x", counts)
    np.testing.assert_array_equal(curve.mean, counts.sum(axis=0) / 3)
    se = np.array([np.std(counts[:, j], ddof=1) / np.sqrt(3) for j in range(3)])
    np.testing.assert_allclose(curve.stderr, se)
    lo, hi = curve.band()
    np.testing.assert_allclose(hi - lo, 4 * se)


def test_benchmark_curves_are_valid():
    res = run_benchmark(SMALL, METHODS)
    for (method, metric), curve in res.curves.items():
        d = np.diff(curve.counts, axis=1)
        assert np.all((d == 0) | (d == 1))
        J = curve.counts.shape[1]
        assert np.all(curve.counts <= np.arange(1, J + 1))
        assert curve.counts.shape[0] == SMALL.replicates
    assert ("CPCA", "Z_unique_rows") not in res.curves
    assert ("CPCA", "W_columns") in res.curves
    assert set(m for _, m in res.curves) == set(METRICS)


def test_count_bounded_by_population():
    inst = generate(SMALL, 0)
    res = run_benchmark(SimConfig(**{**SMALL.__dict__, "replicates": 1}), ["CCUR"])
    assert res.curve("CCUR", "W_columns").counts[0, -1] == inst.w_mask.sum()


def test_single_replicate_has_zero_stderr():
    cfg = SimConfig(**{**SMALL.__dict__, "replicates": 1})
    res = run_benchmark(cfg, ["CUR-fg"])
    assert all(not c.stderr.any() for c in res.curves.values())


def test_parallel_matches_serial():
    a = run_benchmark(SMALL, METHODS, n_jobs=1)
    b = run_benchmark(SMALL, METHODS, n_jobs=3)
    assert a.to_csv() == b.to_csv()


def test_csv_format():
    res = run_benchmark(SMALL, ["CCUR"])
    rows = list(csv.reader(io.StringIO(res.to_csv())))
    assert rows[0] == ["method", "metric", "rank_j", "mean", "stderr"]
    assert rows[1][:3] == ["CCUR", "W_columns", "1"]
    assert len(rows) == 1 + 2 * SMALL.p + 2 * SMALL.n


def test_method_errors():
    with pytest.raises(ValueError, match="CFS"):
        run_benchmark(SMALL, ["CFS"])
    with pytest.raises(ValueError, match="unknown"):
        run_benchmark(SMALL, ["PCA"])
    with pytest.raises(ValueError):
        run_benchmark(SMALL, [])


def test_config_validation():
    with pytest.raises(DimensionError):
        SimConfig(n=0)
    with pytest.raises(DimensionError):
        SimConfig(threshold=-1.0)
    with pytest.raises(DimensionError):
        SimConfig(p=5, ccur_c=10)
