"""Contour-coded trees, finite paths and tree-like paths.

A snake trajectory is stored as a tree-like path: integer heights ``k`` on
the s-grid (the lifetime is ``h = k * dt``) together with the tip labels
``f``.  Heights move by exactly one grid unit per s-step and ``dt = sqrt(ds)``.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import ArgumentError, MalformedInputError

_CHECK_MESSAGES = {
    K.BAD_START: "lifetime must start at 0",
    K.BAD_END: "lifetime must end at 0",
    K.BAD_STEP: "lifetime steps must be +-dt",
    K.NEGATIVE: "lifetime must be nonnegative",
    K.SNAKE: "labels differ between two visits of the same vertex",
    K.NONFINITE: "labels must be finite",
}


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FinitePath:
    """Labels of a path sampled at heights 0, dt, ..., zeta."""

    labels: np.ndarray
    dt: float

    def __post_init__(self):
        lab = _frozen(np.atleast_1d(self.labels), np.float64)
        if lab.ndim != 1 or lab.size == 0:
            raise ArgumentError("a finite path needs at least one label")
        if not self.dt > 0:
            raise ArgumentError("dt must be positive")
        object.__setattr__(self, "labels", lab)

    @property
    def zeta(self):
        return (self.labels.size - 1) * self.dt

    @property
    def endpoint(self):
        return float(self.labels[-1])

    @property
    def running_min(self):
        return float(self.labels.min())

    def hit_index(self, y, include_start=True):
        """First grid index at which the path meets y (None if never).

        A hit is a label equal to y or a change of side relative to the
        start; with include_start=False index 0 is ignored (tau*).
        """
        d = self.labels - y
        if include_start and d[0] == 0:
            return 0
        ref = np.sign(d[0])
        for i in range(1, d.size):
            if d[i] == 0 or (ref != 0 and np.sign(d[i]) != ref):
                return i
            if ref == 0:
                ref = np.sign(d[i])
        return None

    def tau(self, y):
        i = self.hit_index(y, include_start=True)
        return np.inf if i is None else i * self.dt

    def tau_star(self, y):
        i = self.hit_index(y, include_start=False)
        return np.inf if i is None else i * self.dt


@dataclass(frozen=True)
class TreeLikePath:
    """Discrete snake trajectory (h, f) with h = k * dt and dt = sqrt(ds)."""

    k: np.ndarray
    f: np.ndarray
    ds: float
    _checked: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not (np.isfinite(self.ds) and self.ds > 0):
            raise ArgumentError("ds must be positive and finite")
        kk = _frozen(np.atleast_1d(self.k), np.int64)
        ff = _frozen(np.atleast_1d(self.f), np.float64)
        if kk.ndim != 1 or ff.shape != kk.shape:
            raise MalformedInputError("h and f must be 1-d arrays of equal length")
        object.__setattr__(self, "k", kk)
        object.__setattr__(self, "f", ff)
        object.__setattr__(self, "ds", float(self.ds))
        if not self._checked:
            code, idx = K.check_walk(kk, ff)
            if code != K.OK:
                raise MalformedInputError(f"{_CHECK_MESSAGES[code]} (index {idx})")

    @classmethod
    def trusted(cls, k, f, ds):
        """Wrap arrays produced by package kernels without revalidation."""
        return cls(k, f, ds, _checked=True)

    @classmethod
    def from_lifetime(cls, h, f, ds):
        """Build from a real-valued lifetime array on the dt = sqrt(ds) lattice."""
        dt = np.sqrt(ds)
        h = np.asarray(h, dtype=np.float64)
        k = np.rint(h / dt)
        if not np.allclose(k * dt, h, rtol=0, atol=1e-9 * max(dt, 1.0)):
            raise MalformedInputError("lifetime values are not multiples of dt")
        return cls(k.astype(np.int64), f, ds)

    @property
    def dt(self):
        return float(np.sqrt(self.ds))

    @property
    def h(self):
        return self.k * self.dt

    @property
    def n(self):
        return int(self.k.size)

    @property
    def sigma(self):
        nz = np.flatnonzero(self.k)
        return 0.0 if nz.size == 0 else (nz[-1] + 1) * self.ds

    @property
    def M(self):
        return float(self.f.max() - self.f[0])

    @property
    def w_star(self):
        return float(self.f.min())

    @property
    def envelope(self):
        return float(np.abs(self.f).max() - self.f[0])

    def __eq__(self, other):
        if not isinstance(other, TreeLikePath):
            return NotImplemented
        return (self.ds == other.ds and np.array_equal(self.k, other.k)
                and np.array_equal(self.f, other.f))

    __hash__ = None


@dataclass(frozen=True)
class DiscreteTree:
    """Explicit vertex arrays for the tree coded by a tree-like path.

    Vertices are numbered in order of discovery, so parents precede
    children; the root is vertex 0 with parent -1.
    """

    parent: np.ndarray
    height: np.ndarray
    label: np.ndarray
    contour: np.ndarray
    visit_span: np.ndarray
    ds: float

    @property
    def dt(self):
        return float(np.sqrt(self.ds))

    @property
    def n_vertices(self):
        return int(self.parent.size)

    def children_count(self):
        return np.bincount(self.parent[1:], minlength=self.n_vertices)

    def branching_points(self):
        return np.flatnonzero(self.children_count() >= 2)

    def is_ancestor(self, u, v):
        """True when u lies on the ancestral line of v (u == v included)."""
        while v >= 0:
            if v == u:
                return True
            if self.height[v] < self.height[u]:
                return False
            v = self.parent[v]
        return False

    def contour_heights(self):
        return self.height[self.contour]

    def contour_labels(self):
        return self.label[self.contour]

    def to_treelike(self):
        return TreeLikePath.trusted(self.contour_heights(), self.contour_labels(), self.ds)


def _check_index(h, *idx):
    n = len(h)
    for i in idx:
        if not (0 <= int(i) < n):
            raise ArgumentError(f"grid index {i} outside [0, {n})")


def pseudo_distance(h, s, t):
    """h[s] + h[t] - 2 min(h between s and t)."""
    _check_index(h, s, t)
    a, b = (s, t) if s <= t else (t, s)
    seg = np.asarray(h[a:b + 1])
    return h[s] + h[t] - 2 * seg.min()


def lca_time(h, s, t):
    """Smallest index in [s, t] achieving the minimum of h on that range."""
    _check_index(h, s, t)
    if s > t:
        raise ArgumentError("lca_time expects s <= t")
    return int(s + np.argmin(np.asarray(h[s:t + 1])))


def build_discrete_tree(tlp):
    parent, height, label, contour, first, last = K.build_tree(tlp.k, tlp.f)
    return DiscreteTree(parent, height, label, contour,
                        np.stack([first, last], axis=1), tlp.ds)


def treelike_to_snake_path(tlp, s):
    """The path W_s: ancestor labels at heights 0..h[s]."""
    _check_index(tlp.k, s)
    return FinitePath(K.ancestral_labels(tlp.k, tlp.f, int(s)), tlp.dt)


def snake_paths_to_treelike(paths, ds):
    """Inverse of the lazy reconstruction: rebuild (h, f) from the W_s."""
    dt = np.sqrt(ds)
    k = np.array([round(p.zeta / dt) for p in paths], dtype=np.int64)
    f = np.array([p.endpoint for p in paths])
    return TreeLikePath(k, f, ds)
