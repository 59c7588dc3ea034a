import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from reclab import condmom, hazard, simrec
from reclab.condmom import Window
from reclab.errors import BudgetExceededError, UsageError
from reclab.simrec import SimConfig


def splitmix64_reference(state, count):
    """Textbook splitmix64 generator; its k-th output is mix64(state, k)."""
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) % 2**64
        z = state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 % 2**64
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB % 2**64
        out.append(z ^ (z >> 31))
    return out


def test_mix64_known_vector():
    assert simrec.mix64(0, 0) == 0xE220A8397B1DCDAF


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), start=st.integers(0, 1000))
def test_mix64_matches_splitmix64(seed, start):
    ref = splitmix64_reference(seed, start + 3)[start:]
    ints = [simrec.mix64(seed, start + k) for k in range(3)]
    arr = simrec.mix64(np.uint64(seed), np.arange(start, start + 3, dtype=np.uint64))
    assert ints == ref == [int(x) for x in arr]


def test_to_unit_open_interval():
    z = np.array([0, 2**64 - 1], dtype=np.uint64)
    u = simrec.to_unit(z)
    assert 0 < u[0] < 1e-15 and 1 - 1e-15 < u[1] < 1


def test_arrival_determinism_and_shape(whalf):
    a = simrec.sample_records(whalf, 6, 42)
    b = simrec.sample_records(whalf, 6, 42)
    assert a == b and len(a.values) == 6
    block = simrec.sample_record_paths(whalf, 6, 5, 42)
    assert block.shape == (5, 6)
    assert tuple(block[0]) == a.values
    assert simrec.sample_records(whalf, 6, 43) != a


def test_arrival_limits(expo):
    with pytest.raises(UsageError):
        simrec.sample_records(expo, 31, 0)
    with pytest.raises(UsageError):
        simrec.sample_records_naive(expo, 9, SimConfig())


def test_naive_path_structure(expo):
    path = simrec.sample_records_naive(expo, 5, SimConfig(seed=3, max_iid_draws=10**9))
    assert path.record_times[0] == 1
    assert len(path.values) == len(path.record_times) == 5
    assert path == simrec.sample_records_naive(expo, 5, SimConfig(seed=3, max_iid_draws=10**9))


def test_naive_budget_error(expo):
    with pytest.raises(BudgetExceededError) as err:
        simrec.sample_records_naive_paths(expo, 8, 50, SimConfig(max_iid_draws=20))
    assert err.value.records_found < 8
    assert err.value.draws == 20


def test_naive_shares_uniforms_across_models(expo, whalf):
    cfg = SimConfig(seed=9, max_iid_draws=10**9)
    x, tx = simrec.sample_records_naive_paths(expo, 4, 200, cfg)
    y, ty = simrec.sample_records_naive_paths(whalf, 4, 200, cfg)
    assert np.array_equal(tx, ty)
    assert np.allclose(hazard.cumulative_hazard(expo, x), hazard.cumulative_hazard(whalf, y), rtol=1e-12)


@pytest.mark.parametrize("model", [hazard.exponential(1.0), hazard.weibull(0.5, 1.0)], ids=str)
@pytest.mark.parametrize("n", [3, 5])
def test_samplers_agree_in_distribution(model, n):
    paths = 20_000
    arrival = simrec.sample_record_paths(model, n, paths, seed=1)[:, n - 1]
    naive, _ = simrec.sample_records_naive_paths(model, n, paths, SimConfig(seed=1, max_iid_draws=10**11))
    assert stats.ks_2samp(arrival, naive[:, n - 1]).pvalue > 1e-3


def test_arrival_marginal_is_gamma_in_hazard(whalf):
    x = simrec.sample_record_paths(whalf, 4, 20_000, seed=5)[:, 3]
    H = hazard.cumulative_hazard(whalf, x)
    assert stats.kstest(H, stats.gamma(4).cdf).pvalue > 1e-3


@pytest.mark.parametrize("i, j", [(1, 1), (2, 5), (4, 3)])
def test_bridge_fraction_is_beta(whalf, i, j):
    w = Window(i, j, 1.0, 9.0)
    x = simrec.sample_conditional_batch(whalf, w, 11, 20_000)
    assert np.all((x > w.u) & (x < w.v))
    frac = (np.sqrt(x) - 1.0) / 2.0
    assert stats.kstest(frac, stats.beta(i, j).cdf).pvalue > 1e-3


def test_batch_matches_single_draws(whalf):
    w = Window(2, 3, 1.0, 4.0)
    batch = simrec.sample_conditional_batch(whalf, w, 77, 6, start=10)
    seeds = simrec.draw_seeds(77, 6, start=10)
    singles = [simrec.sample_conditional(whalf, w, int(s)) for s in seeds]
    assert list(batch) == singles


def test_mc_examples(expo, whalf):
    cfg = SimConfig(seed=0, samples=1_000_000)
    for model, w, target in [(expo, Window(1, 1, 1.0, 3.0), 2.0), (expo, Window(2, 1, 0.0, 3.0), 2.0),
                             (whalf, Window(2, 2, 1.0, 16.0), 6.7)]:
        est = simrec.mc_conditional_expectation(model, w, cfg=cfg)
        assert abs(est.mean - target) <= 4 * est.stderr


def test_mc_constant_integrand(expo):
    est = simrec.mc_conditional_expectation(expo, Window(1, 1, 1.0, 3.0), lambda x: 1.0, SimConfig(samples=1000))
    assert (est.mean, est.stderr) == (1.0, 0.0)


def test_mc_spacing_pooled(whalf):
    (iN, jN), (iM, jM) = condmom.spacing_windows(2, 3, 1, 2)
    upper = simrec.mc_conditional_expectation(whalf, Window(iN, jN, 1.0, 4.0), cfg=SimConfig(1, 10**6))
    lower = simrec.mc_conditional_expectation(whalf, Window(iM, jM, 1.0, 4.0), cfg=SimConfig(2, 10**6))
    est = simrec.pooled([upper, lower], [1.0, -1.0])
    assert abs(est.mean - 0.7) <= 4 * est.stderr


def test_mc_determinism_across_blocks(whalf):
    w = Window(3, 2, 1.0, 9.0)
    cfg = SimConfig(seed=4, samples=10_000)
    a = simrec.mc_conditional_expectation(whalf, w, cfg=cfg, block=1 << 18)
    b = simrec.mc_conditional_expectation(whalf, w, cfg=cfg, block=999)
    assert a.mean == pytest.approx(b.mean, rel=1e-14)
    assert a == simrec.mc_conditional_expectation(whalf, w, cfg=cfg)


def test_mc_needs_samples(expo):
    with pytest.raises(UsageError):
        simrec.mc_conditional_expectation(expo, Window(1, 1, 1.0, 3.0), cfg=SimConfig(samples=10))


def test_bridge_matches_binned_paths(whalf):
    # Paths whose R_1 and R_3 land near (1, 4): their R_2 and a bridge draw at
    # the path's own covariates have the same conditional law.
    paths = simrec.sample_record_paths(whalf, 3, 400_000, seed=21)
    keep = (np.abs(paths[:, 0] - 1.0) < 0.4) & (np.abs(paths[:, 2] - 4.0) < 1.0)
    kept = paths[keep]
    assert kept.shape[0] > 2000
    keys = simrec.draw_seeds(22, kept.shape[0]) ^ np.uint64(simrec.BRIDGE_TAG)
    bridge = np.array([
        simrec._bridge_values(whalf, Window(1, 1, lo, hi), keys[q:q + 1])[0]
        for q, (lo, hi) in enumerate(zip(kept[:, 0], kept[:, 2]))
    ])
    diff = kept[:, 1] - bridge
    stderr = diff.std(ddof=1) / math.sqrt(diff.size)
    assert abs(diff.mean()) <= 4 * stderr


def test_csv_round_trip(whalf):
    values = simrec.sample_record_paths(whalf, 4, 3, seed=8)
    back = simrec.paths_from_csv(simrec.paths_to_csv(values))
    assert [p.values for p in back] == [tuple(row) for row in values]
    vals, times = simrec.sample_records_naive_paths(whalf, 3, 4, SimConfig(seed=8, max_iid_draws=10**9))
    text = simrec.paths_to_csv(vals, times)
    assert text.splitlines()[0] == "path_id,record_index,value,record_time"
    assert [p.record_times for p in simrec.paths_from_csv(text)] == [tuple(int(t) for t in row) for row in times]


def test_record_path_validation():
    with pytest.raises(ValueError):
        simrec.RecordPath((1.0, 1.0))
    with pytest.raises(ValueError):
        simrec.RecordPath((1.0, 2.0), (2, 3))
