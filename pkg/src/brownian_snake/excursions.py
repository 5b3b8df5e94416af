"""Excursions above the running minimum along the tree.

A vertex v is inside an excursion when its label exceeds the minimum label
on its ancestral line.  The connected components of that set hang off
debut vertices sitting exactly at their ancestral minimum.  On the lattice a
debut vertex may carry several such components (one per child that rises),
so one record is produced per (debut, child) pair.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import ArgumentError
from .exit_measures import estimate_boundary_size
from .tree_core import TreeLikePath
from .transforms import truncate


@dataclass
class ExcursionRecord:
    debut_vertex: int
    child_vertex: int
    level: float
    height: float
    s_interval: tuple
    size: int = 0
    trajectory: TreeLikePath | None = None
    boundary_size: float | None = None

    @property
    def duration(self):
        return None if self.trajectory is None else self.trajectory.sigma


@dataclass
class ComponentTable:
    """Arrays describing every component of {V > ancestral min} on a tree."""

    debut: np.ndarray
    child: np.ndarray
    level: np.ndarray
    height: np.ndarray
    size: np.ndarray
    boundary_count: np.ndarray
    v_bullet: np.ndarray
    vertex_component: np.ndarray
    eps_boundary: float

    def boundary_size(self, ds):
        return self.boundary_count * ds / self.eps_boundary**2


def component_table(tree, eps_boundary=np.inf):
    debut, child, height, size, bcount, vb, comp = K.tree_components(
        tree.parent, tree.label, tree.contour, float(eps_boundary))
    return ComponentTable(debut, child, tree.label[debut], height, size, bcount, vb, comp,
                          float(eps_boundary))


def _records(tree, table, idx):
    first = tree.visit_span[:, 0]
    last = tree.visit_span[:, 1]
    out = []
    for i in idx:
        c = int(table.child[i])
        out.append(ExcursionRecord(
            debut_vertex=int(table.debut[i]), child_vertex=c, level=float(table.level[i]),
            height=float(table.height[i]), s_interval=(int(first[c] - 1), int(last[c] + 1)),
            size=int(table.size[i])))
    return out


def find_debuts(tree, min_height, include_root=False, table=None):
    """Records with height > min_height, by decreasing level.

    The root is excluded unless include_root is set: the continuum root is a
    leaf of the tree and never an excursion debut.
    """
    if min_height < 0:
        raise ArgumentError("min_height must be nonnegative")
    if tree.label[0] != 0:
        raise ArgumentError("debut detection expects a root label of 0")
    if table is None:
        table = component_table(tree)
    keep = table.height > min_height
    if not include_root:
        keep &= table.debut != 0
    idx = np.flatnonzero(keep)
    idx = idx[np.lexsort((-table.height[idx], -table.level[idx]))]
    return _records(tree, table, idx)


def extract_excursion(tree, record, eps_boundary=None):
    """Slice the contour between the two visits of the debut around its child,
    shift to height/label 0 at the debut, truncate at 0."""
    a, b = record.s_interval
    u, c = record.debut_vertex, record.child_vertex
    n = tree.contour.size
    if not (0 <= a < b < n) or tree.contour[a] != u or tree.contour[b] != u \
            or tree.parent[c] != u or tree.label[u] != record.level:
        raise ArgumentError("record does not belong to this tree")
    verts = tree.contour[a:b + 1]
    k = tree.height[verts] - tree.height[u]
    f = tree.label[verts] - tree.label[u]
    traj = truncate(TreeLikePath.trusted(k, f, tree.ds), 0.0)
    record.trajectory = traj
    if eps_boundary is not None:
        record.boundary_size = estimate_boundary_size(traj, eps_boundary)
    return traj


def first_excursion(tree, delta, beta, table=None, eps_boundary=None):
    """Highest-level record with height > delta and level < -beta, or None."""
    if not (delta > 0 and beta > 0):
        raise ArgumentError("delta and beta must be positive")
    for rec in find_debuts(tree, delta, table=table):
        if rec.level < -beta:
            extract_excursion(tree, rec, eps_boundary)
            return rec
    return None
