import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brownian_snake import transforms as T
from brownian_snake.errors import ArgumentError
from brownian_snake.exit_measures import estimate_boundary_size
from brownian_snake.tree_core import TreeLikePath, build_discrete_tree, pseudo_distance

from conftest import treelike_paths


@pytest.fixture
def dipping():
    """Root, a branch up to 1.0, and a second branch whose first vertex dips to -0.3."""
    k = [0, 1, 2, 1, 2, 3, 2, 1, 0]
    f = [0.0, 0.5, 1.0, 0.5, -0.3, 0.2, -0.3, 0.5, 0.0]
    return TreeLikePath(k, f, 0.25)


def brute_reroot(tlp, s):
    k, f = tlp.k, tlp.f
    sig = tlp.n - 1
    out_k, out_f = [], []
    for r in range(tlp.n):
        j = s + r if s + r <= sig else s + r - sig
        lo, hi = min(s, j), max(s, j)
        out_k.append(k[j] + k[s] - 2 * k[lo:hi + 1].min())
        out_f.append(f[j] - f[s])
    return np.array(out_k), np.array(out_f)


@pytest.mark.parametrize("a", [0.0, 1.5, -2.25])
def test_translate(dipping, a):
    moved = T.translate(dipping, a)
    back = T.translate(moved, -a)
    assert np.array_equal(back.k, dipping.k) and np.allclose(back.f, dipping.f, atol=1e-15)
    assert moved.f.max() == pytest.approx(dipping.f.max() + a)


@pytest.mark.parametrize("s", range(9))
def test_reroot_matches_brute_force(dipping, s):
    k, f = brute_reroot(dipping, s)
    out = T.reroot(dipping, s)
    assert np.array_equal(out.k, k)
    assert np.allclose(out.f, f, atol=1e-15)


def test_reroot_out_of_range(dipping):
    with pytest.raises(ArgumentError):
        T.reroot(dipping, 9)


def test_truncate_removes_descendants_past_crossing(dipping):
    out = T.truncate(dipping, 0.0)
    assert out.k.tolist() == [0, 1, 2, 1, 2, 1, 0]
    assert out.f.tolist() == [0.0, 0.5, 1.0, 0.5, 0.0, 0.5, 0.0]


def test_truncate_below_minimum_is_identity(dipping):
    assert T.truncate(dipping, -1.0) == dipping


@pytest.mark.parametrize("lam", [1.0, 4.0, 0.25])
def test_scale(dipping, lam):
    out = T.scale(dipping, lam)
    assert out.ds == pytest.approx(dipping.ds * lam**2)
    assert out.M == pytest.approx(np.sqrt(lam) * dipping.M)
    assert out.sigma == pytest.approx(lam**2 * dipping.sigma)
    assert np.allclose(out.h, lam * dipping.h)


def test_scale_grid_mismatch(dipping):
    with pytest.raises(ArgumentError):
        T.scale(dipping, 2.0, target_ds=0.5)


@pytest.mark.parametrize("text, value", [("2", 4.0), ("3/2", 2.25), ("1/2", 0.25)])
def test_parse_squared_ratio(text, value):
    assert T.parse_squared_ratio(text) == value


@pytest.mark.parametrize("text", ["a/2", "0/1", "-1/2"])
def test_parse_squared_ratio_invalid(text):
    with pytest.raises(ArgumentError):
        T.parse_squared_ratio(text)


def test_boundary_estimate_scales_exactly():
    k = [0, 1, 2, 1, 2, 1, 0]
    f = [0.0, 0.03, 0.2, 0.03, 0.08, 0.03, 0.0]
    exc = TreeLikePath(k, f, 0.01)
    lam = 4.0
    assert estimate_boundary_size(T.scale(exc, lam), np.sqrt(lam) * 0.1) == pytest.approx(
        lam * estimate_boundary_size(exc, 0.1))


def test_reflect_monotone_branches():
    k = [0, 1, 2, 1, 0]
    down = T.reflect_min(TreeLikePath(k, [0.0, -0.2, -0.5, -0.2, 0.0], 0.25))
    assert np.all(down.w_bullet.f == 0)
    assert np.allclose(down.l_bullet, [0.0, 0.2, 0.5, 0.2, 0.0])
    up = T.reflect_min(TreeLikePath(k, [0.0, 0.2, 0.5, 0.2, 0.0], 0.25))
    assert np.allclose(up.w_bullet.f, [0.0, 0.2, 0.5, 0.2, 0.0])
    assert np.all(up.l_bullet == 0)


def test_reflect_requires_zero_root():
    with pytest.raises(ArgumentError):
        T.reflect_min(TreeLikePath([0, 1, 0], [1.0, 1.2, 1.0], 0.25))


def test_assign_signs_count_mismatch(dipping):
    pair = T.reflect_min(dipping)
    _, ncomp = T.positive_components(pair)
    with pytest.raises(ArgumentError):
        T.assign_signs(pair, np.ones(ncomp + 1))


@settings(max_examples=60, deadline=None)
@given(treelike_paths(), st.floats(-2, 2, allow_nan=False))
def test_truncation_idempotent_and_shorter(tlp, y):
    once = T.truncate(tlp, y)
    assert T.truncate(once, y) == once
    assert once.n <= tlp.n


@settings(max_examples=60, deadline=None)
@given(treelike_paths(), st.data())
def test_reroot_isometry(tlp, data):
    s = data.draw(st.integers(0, tlp.n - 1))
    out = T.reroot(tlp, s)
    assert out.n == tlp.n and out.f[0] == 0.0
    lab_in = np.sort(build_discrete_tree(tlp).label - tlp.f[s])
    lab_out = np.sort(build_discrete_tree(out).label)
    assert np.allclose(lab_in, lab_out, atol=1e-12)
    sig = tlp.n - 1
    if sig:
        a, b = data.draw(st.integers(0, sig)), data.draw(st.integers(0, sig))
        assert pseudo_distance(tlp.k, a, b) == pseudo_distance(out.k, (a - s) % sig,
                                                               (b - s) % sig)


@settings(max_examples=60, deadline=None)
@given(treelike_paths())
def test_reroot_at_zero_is_shift(tlp):
    assert T.reroot(tlp, 0) == T.translate(tlp, -tlp.f[0])


@settings(max_examples=40, deadline=None)
@given(treelike_paths(), st.sampled_from([0.25, 1.0, 4.0]), st.sampled_from([0.25, 9.0]))
def test_scale_composition(tlp, lam, mu):
    a = T.scale(T.scale(tlp, lam), mu)
    b = T.scale(tlp, lam * mu)
    assert a.ds == pytest.approx(b.ds) and np.allclose(a.f, b.f)


@settings(max_examples=60, deadline=None)
@given(treelike_paths(), st.data())
def test_reflect_and_sign_reconstruction(tlp, data):
    pair = T.reflect_min(tlp)
    assert np.all(pair.w_bullet.f >= 0)
    assert np.allclose(tlp.f, pair.w_bullet.f - pair.l_bullet, atol=1e-12)
    _, ncomp = T.positive_components(pair)
    signs = np.array(data.draw(st.lists(st.sampled_from([-1.0, 1.0]),
                                        min_size=ncomp, max_size=ncomp)))
    out = T.assign_signs(pair, signs)
    assert np.allclose(np.abs(out.f), pair.w_bullet.f)
    assert T.assign_signs(pair, np.ones(ncomp)) == pair.w_bullet
    assert np.allclose(T.assign_signs(pair, -np.ones(ncomp)).f, -pair.w_bullet.f)
