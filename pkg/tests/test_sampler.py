import numpy as np
import pytest
from scipy import stats as sps

from brownian_snake import sampler as smp
from brownian_snake import transforms as T
from brownian_snake._rng import RngState
from brownian_snake.errors import ArgumentError, SamplingError


def test_two_step_excursion_is_unique():
    assert smp.sample_lifetime_excursion(2, RngState(0)).tolist() == [0, 1, 0]


@pytest.mark.parametrize("steps", [0, 3, 7, 2.5])
def test_excursion_length_validation(steps):
    with pytest.raises(ArgumentError):
        smp.sample_lifetime_excursion(steps, RngState(0))


@pytest.mark.parametrize("steps", [4, 10, 200])
def test_excursion_shape(steps):
    stream = RngState(5).spawn()
    for _ in range(20):
        k = smp.sample_lifetime_excursion(steps, stream)
        assert k.size == steps + 1 and k[0] == 0 and k[-1] == 0
        assert np.all(k[1:-1] > 0) and np.all(np.abs(np.diff(k)) == 1)


def test_excursion_uniform_over_dyck_paths():
    # 5 Dyck paths of semilength 3 -> 5 excursions of length 8
    stream = RngState(9).spawn()
    counts = {}
    for _ in range(5000):
        key = tuple(smp.sample_lifetime_excursion(8, stream))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 5
    assert sps.chisquare(list(counts.values())).pvalue > 0.001


def test_excursion_max_scales_like_sqrt_length():
    stream = RngState(3).spawn()
    reps = 4000
    small = [smp.sample_lifetime_excursion(2 * 1000, stream).max() for _ in range(reps)]
    large = [smp.sample_lifetime_excursion(2 * 4000, stream).max() for _ in range(reps)]
    assert np.median(small) / np.median(large) == pytest.approx(0.5, rel=0.05)


def test_apex_position_symmetric():
    stream = RngState(4).spawn()
    n = 400
    first, last = [], []
    for _ in range(3000):
        k = smp.sample_lifetime_excursion(n, stream)
        top = np.flatnonzero(k == k.max())
        first.append(top[0])
        last.append(n - top[-1])
    # mirroring maps the first apex onto the last one
    assert sps.ks_2samp(first, last).pvalue > 0.01


@pytest.fixture
def ito_target():
    return smp.SamplingTarget("ITO_SIGMA_GT", (0.01,), 1e-4, 10**12)


def test_duration_inverse_cdf(ito_target):
    u = np.random.default_rng(0).random(100_000)
    s = np.array([smp.sample_duration_value(ito_target, None, x) for x in u])
    assert np.all(s > 0.01)
    assert np.mean(s > 0.04) == pytest.approx(0.5, rel=0.02)


def test_duration_monotone_in_threshold():
    low = smp.SamplingTarget("ITO_SIGMA_GT", (0.01,), 1e-4, 10**8)
    high = smp.SamplingTarget("ITO_SIGMA_GT", (0.05,), 1e-4, 10**8)
    for u in np.linspace(0, 0.999, 50):
        assert smp.sample_duration_value(high, None, u) >= smp.sample_duration_value(low, None, u)


def test_duration_empty_window():
    t = smp.SamplingTarget("ITO_SIGMA_GT", (1.0,), 0.01, 100)
    with pytest.raises(ArgumentError):
        smp.sample_duration_value(t, RngState(0))


def test_duration_needs_mixture_target():
    t = smp.SamplingTarget("N0_MIN_BELOW", (0.5,))
    with pytest.raises(ArgumentError):
        smp.sample_duration(t, RngState(0))


def test_labels_on_single_edge():
    tlp = smp.attach_labels([0, 1, 0], 0.7, RngState(1), 0.01)
    assert tlp.f[0] == 0.7 and tlp.f[2] == 0.7 and tlp.f[1] != 0.7


def test_label_covariance_matches_tree():
    ds = 0.01
    k = smp.sample_lifetime_excursion(400, RngState(2))
    h = k * np.sqrt(ds)
    stream = RngState(8).spawn()
    f = np.array([smp.attach_labels(k, 0.0, stream, ds).f for _ in range(10_000)])
    gen = np.random.default_rng(1)
    pairs = []
    while len(pairs) < 5:
        s, t = sorted(gen.integers(1, k.size - 1, 2))
        if h[s:t + 1].min() >= 0.2:
            pairs.append((s, t))
    for s, t in pairs:
        cov = np.mean(f[:, s] * f[:, t])
        assert cov == pytest.approx(h[s:t + 1].min(), rel=0.05)
        assert np.var(f[:, s]) == pytest.approx(h[s], rel=0.05)


@pytest.mark.parametrize("kind, params", [
    ("NOPE", (1.0,)),
    ("N0_MIN_BELOW", (1.0, 2.0)),
    ("N0_MIN_BELOW", (-1.0,)),
    ("NEPS_TRUNC_MAX_GT", (0.5, 0.1)),
])
def test_target_validation(kind, params):
    with pytest.raises((ArgumentError, ValueError)):
        smp.SamplingTarget(kind, params)


def coarse(kind, params, n_max=400_000):
    return smp.SamplingTarget(kind, params, 1e-2, n_max)


def test_min_below_predicate():
    s = smp.Sampler(coarse("N0_MIN_BELOW", (0.4,)), RngState(1))
    for w in s.sample_many(30):
        assert w.w_star <= -0.4 and w.f[0] == 0.0


def test_nstar_postconditions():
    s = smp.Sampler(coarse("NSTAR_MAX_GT", (0.5,)), RngState(2))
    for w in s.sample_many(30):
        assert w.f.max() > 0.5
        assert w.f.min() >= 0.0
        zeros = np.flatnonzero(w.f == 0.0)
        leaves = (np.diff(w.k[:-1]) > 0)[zeros[1:-1] - 1] if zeros.size > 2 else []
        assert np.all(leaves)


def test_sampling_is_deterministic():
    t = coarse("N0_MIN_BELOW", (0.3,))
    a = smp.Sampler(t, RngState(42, 3)).sample_many(5)
    b = smp.Sampler(t, RngState(42, 3)).sample_many(5)
    c = smp.Sampler(t, RngState(42, 4)).sample_many(5)
    assert a == b and a != c


def test_acceptance_floor_raises():
    s = smp.Sampler(coarse("N0_MIN_BELOW", (5.0,)), RngState(0), acceptance_floor=0.5,
                    max_attempts=200_000)
    with pytest.raises(SamplingError):
        s.sample_many(200)


def test_window_cap_warning():
    s = smp.Sampler(coarse("N0_MIN_BELOW", (0.3,), n_max=40), RngState(0), window_warn=0.0)
    with pytest.warns(RuntimeWarning):
        s.sample_many(1000)


def test_sigma_biased_outputs():
    s = smp.Sampler(coarse("NSTAR_SIGMA_BIASED", (0.3, 0.2, 1.0)), RngState(4),
                    eps_exit=0.05)
    for w in s.sample_many(5):
        assert w.f[0] == 0.0 and w.sigma > 0


@pytest.mark.slow
def test_acceptance_rate_linear_in_eps():
    delta = 0.5
    rates = []
    ratios = (1 / 40, 1 / 20, 1 / 10)
    for r in ratios:
        s = smp.Sampler(smp.SamplingTarget("NSTAR_MAX_GT", (delta,), 1e-4), RngState(6),
                        eps_ratio=r)
        s.sample_many(2000)
        rates.append(s.stats.acceptance_rate)
    fit = sps.linregress(np.array(ratios) * delta, rates)
    assert fit.slope > 0 and fit.rvalue**2 > 0.9


@pytest.mark.slow
def test_scaling_matches_finer_grid():
    # theta_lambda maps N_x to lambda N_{x sqrt(lambda)}; with start 0 both sides
    # are N0-laws conditioned on W* <= -beta after rescaling beta.
    lam = 2.0
    beta = 0.4
    fine = smp.SamplingTarget("N0_MIN_BELOW", (beta,), 0.0025, 400_000)
    coarse_t = smp.SamplingTarget("N0_MIN_BELOW", (beta * np.sqrt(lam),), 0.01, 400_000)
    a = [T.scale(w, lam) for w in smp.Sampler(fine, RngState(1)).sample_many(800)]
    b = smp.Sampler(coarse_t, RngState(2)).sample_many(800)
    assert sps.ks_2samp([w.sigma for w in a], [w.sigma for w in b]).pvalue > 0.01
    assert sps.ks_2samp([w.M for w in a], [w.M for w in b]).pvalue > 0.01
