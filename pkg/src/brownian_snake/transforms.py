"""Deterministic operators on snake trajectories."""
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import ArgumentError
from .tree_core import TreeLikePath


@dataclass(frozen=True)
class ReflectedPair:
    """Labels measured from the ancestral minimum, plus minus that minimum."""

    w_bullet: TreeLikePath
    l_bullet: np.ndarray


def translate(tlp, a):
    return TreeLikePath.trusted(tlp.k, tlp.f + a, tlp.ds)


def reroot(tlp, s):
    """Re-root at contour index s; labels are shifted to vanish at the new root."""
    s = int(s)
    if not 0 <= s < tlp.n:
        raise ArgumentError(f"re-rooting index {s} outside [0, {tlp.n})")
    k, f = K.reroot(tlp.k, tlp.f, s)
    return TreeLikePath.trusted(k, f, tlp.ds)


def truncation_mask(tlp, y):
    """Boolean masks (kept, clamped) of the truncation at level y."""
    return K.truncate_mask(tlp.k, tlp.f, float(y))


def truncate(tlp, y):
    """Stop every path at its first return to y at positive height.

    Paths that meet y are kept up to that point: the hitting vertex stays as
    a leaf whose label is set to y, and everything beyond it is dropped.
    """
    keep, clamp = K.truncate_mask(tlp.k, tlp.f, float(y))
    f = tlp.f.copy()
    f[clamp] = y
    return TreeLikePath.trusted(tlp.k[keep], f[keep], tlp.ds)


def scale(tlp, lam, target_ds=None):
    """Brownian rescaling: durations by lam**2, heights by lam, labels by sqrt(lam).

    The integer height lattice is unchanged; only the grid metadata moves.
    If target_ds is given it must equal lam**2 * ds.
    """
    lam = float(lam)
    if not (np.isfinite(lam) and lam > 0):
        raise ArgumentError("scaling factor must be positive and finite")
    ds = tlp.ds * lam * lam
    if target_ds is not None and not np.isclose(ds, target_ds, rtol=1e-12, atol=0):
        raise ArgumentError(
            f"scaling by {lam} maps ds={tlp.ds} to {ds}, not the requested grid {target_ds}")
    return TreeLikePath.trusted(tlp.k, tlp.f * np.sqrt(lam), ds)


def parse_squared_ratio(text):
    """'p/q' -> (p/q)**2, the CLI form of a grid-compatible scale factor."""
    p, _, q = str(text).partition("/")
    try:
        p = int(p)
        q = int(q) if q else 1
    except ValueError as exc:
        raise ArgumentError(f"not an integer ratio: {text!r}") from exc
    if p <= 0 or q <= 0:
        raise ArgumentError("ratio terms must be positive")
    return (p / q) ** 2


def reflect_min(tlp):
    if tlp.f[0] != 0:
        raise ArgumentError("reflection above the minimum needs f[0] = 0")
    m = K.ancestral_min(tlp.k, tlp.f)
    fb = tlp.f - m
    l_bullet = -m
    l_bullet.flags.writeable = False
    return ReflectedPair(TreeLikePath.trusted(tlp.k, fb, tlp.ds), l_bullet)


def positive_components(pair):
    """Component id per index of {f_bullet > 0}, numbered in contour order."""
    return K.index_components(pair.w_bullet.k, pair.w_bullet.f)


def assign_signs(pair, signs):
    comp, ncomp = positive_components(pair)
    signs = np.asarray(signs, dtype=np.float64)
    if signs.shape != (ncomp,):
        raise ArgumentError(f"expected {ncomp} signs, got {signs.size}")
    if not np.all(np.abs(signs) == 1):
        raise ArgumentError("signs must be +1 or -1")
    fb = pair.w_bullet.f
    per_index = np.ones_like(fb) if ncomp == 0 else signs[np.maximum(comp, 0)]
    out = np.where(comp >= 0, fb * per_index, 0.0)
    return TreeLikePath.trusted(pair.w_bullet.k, out, pair.w_bullet.ds)
