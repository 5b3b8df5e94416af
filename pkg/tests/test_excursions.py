import numpy as np
import pytest
from hypothesis import given, settings

from brownian_snake import transforms as T
from brownian_snake.errors import ArgumentError
from brownian_snake.excursions import (component_table, extract_excursion, find_debuts,
                                       first_excursion)
from brownian_snake.exit_measures import estimate_boundary_size
from brownian_snake.tree_core import TreeLikePath, build_discrete_tree

from conftest import treelike_paths


def branch(labels, ds=0.25):
    """A single path of the given vertex labels, up and back down."""
    depth = len(labels) - 1
    k = list(range(depth + 1)) + list(range(depth - 1, -1, -1))
    f = list(labels) + list(labels[-2::-1])
    return TreeLikePath(k, f, ds)


@pytest.fixture
def single_dip():
    return branch([0.0, -0.2, -0.5, -0.3, 0.1, 0.4, 0.2])


def test_decreasing_branch_has_no_debut():
    tree = build_discrete_tree(branch([0.0, -0.1, -0.4, -0.9]))
    assert find_debuts(tree, 0.0) == []


def test_single_dip(single_dip):
    tree = build_discrete_tree(single_dip)
    recs = find_debuts(tree, 0.0)
    assert len(recs) == 1
    rec = recs[0]
    assert rec.debut_vertex == 2 and rec.level == -0.5
    assert rec.height == pytest.approx(0.9)
    traj = extract_excursion(tree, rec)
    assert traj.f[0] == 0.0 and traj.f.min() >= 0.0
    assert traj.k.tolist() == [0, 1, 2, 3, 4, 3, 2, 1, 0]
    assert traj.sigma == pytest.approx(8 * 0.25)
    assert rec.duration == traj.sigma


def test_extracted_excursion_has_no_root_debut(single_dip):
    tree = build_discrete_tree(single_dip)
    traj = extract_excursion(tree, find_debuts(tree, 0.0)[0])
    assert all(r.level != 0.0 for r in find_debuts(build_discrete_tree(traj), 0.0))


def test_nested_debuts_ordered_by_level():
    tree = build_discrete_tree(branch([0.0, -0.5, -0.2, -0.6, -0.1]))
    recs = find_debuts(tree, 0.0)
    assert [r.level for r in recs] == [-0.5, -0.6]
    assert [r.height for r in recs] == pytest.approx([0.3, 0.5])
    assert find_debuts(tree, 0.4)[0].level == -0.6


@pytest.fixture
def two_branches():
    k = [0, 1, 2, 1, 0, 1, 2, 1, 0]
    f = [0.0, -1.0, -0.5, -1.0, 0.0, -2.0, -1.2, -2.0, 0.0]
    return build_discrete_tree(TreeLikePath(k, f, 0.25))


def test_first_excursion_picks_highest_level(two_branches):
    rec = first_excursion(two_branches, 0.3, 0.5)
    assert rec.level == -1.0 and rec.trajectory is not None


def test_first_excursion_none_below_beta(two_branches):
    assert first_excursion(two_branches, 0.3, 2.5) is None


def test_extract_rejects_foreign_record(two_branches, single_dip):
    rec = find_debuts(build_discrete_tree(single_dip), 0.0)[0]
    with pytest.raises(ArgumentError):
        extract_excursion(two_branches, rec)


def test_find_debuts_needs_zero_root():
    tree = build_discrete_tree(branch([1.0, 0.5, 0.8]))
    with pytest.raises(ArgumentError):
        find_debuts(tree, 0.0)


@settings(max_examples=80, deadline=None)
@given(treelike_paths())
def test_components_partition_positive_set(tlp):
    tree = build_discrete_tree(tlp)
    pair = T.reflect_min(tlp)
    recs = find_debuts(tree, 0.0, include_root=True)
    total = sum(int(np.count_nonzero(extract_excursion(tree, r).f > 0)) for r in recs)
    assert total == int(np.count_nonzero(pair.w_bullet.f > 0))
    for r in recs:
        assert tree.parent[r.child_vertex] == r.debut_vertex
        assert r.trajectory.f.min() >= 0 and r.trajectory.f[0] == 0.0
        assert r.trajectory.M == pytest.approx(r.height)


@settings(max_examples=60, deadline=None)
@given(treelike_paths())
def test_debut_count_nonincreasing_in_height(tlp):
    tree = build_discrete_tree(tlp)
    counts = [len(find_debuts(tree, d)) for d in (0.0, 0.25, 0.5, 1.0, 2.0)]
    assert counts == sorted(counts, reverse=True)


@settings(max_examples=60, deadline=None)
@given(treelike_paths())
def test_excursion_zeros_only_at_leaves(tlp):
    tree = build_discrete_tree(tlp)
    for rec in find_debuts(tree, 0.0):
        traj = extract_excursion(tree, rec)
        inner = np.flatnonzero((traj.f == 0.0) & (traj.k > 0))
        # a zero at positive height is a leaf: the walk turns down right after it
        assert np.all(traj.k[inner + 1] < traj.k[inner])


def test_table_boundary_sizes_match_extraction(small_snakes):
    eps = 0.2
    for w in small_snakes:
        tree = build_discrete_tree(w)
        table = component_table(tree, eps)
        sizes = dict(zip(table.child.tolist(), table.boundary_size(w.ds).tolist()))
        for rec in find_debuts(tree, 0.0, table=table):
            extract_excursion(tree, rec, eps)
            assert rec.boundary_size == pytest.approx(sizes[rec.child_vertex], abs=1e-12)
            assert rec.boundary_size == estimate_boundary_size(rec.trajectory, eps)
