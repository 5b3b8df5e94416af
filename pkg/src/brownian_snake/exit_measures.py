"""Occupation-density estimators for exit measures and boundary sizes.

For a level a > 0 the exit mass from (-a, inf) is estimated by

    Z_a ~ eps**-2 * ds * #{i : path i stays above -a, -a < f[i] < -a + eps}

and set to 0 when no label reaches -a.  A path stays above -a exactly when
its ancestral minimum (tip included) exceeds -a, so one ancestral-minimum
sweep serves every level at once.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import ArgumentError


@dataclass
class ExitProfile:
    levels: np.ndarray
    z_hat: np.ndarray
    eps: float
    jumps: list
    y_aux: np.ndarray
    threshold: float
    matches: list = field(default_factory=list)

    @property
    def increments(self):
        return np.diff(self.z_hat)


def ancestral_min(tlp):
    return K.ancestral_min(tlp.k, tlp.f)


def _as_levels(levels):
    lv = np.atleast_1d(np.asarray(levels, dtype=np.float64))
    if lv.ndim != 1 or lv.size == 0:
        raise ArgumentError("need a nonempty 1-d level grid")
    if lv.size > 1 and not np.all(np.diff(lv) > 0):
        raise ArgumentError("levels must be strictly increasing")
    return lv


def _interval_counts(levels, lo_vals, lo_side, hi_vals, hi_side):
    """Per level, how many intervals (lo, hi) bounded by the given sides contain it."""
    lo = np.searchsorted(levels, lo_vals, lo_side)
    hi = np.searchsorted(levels, hi_vals, hi_side)
    ok = lo < hi
    diff = np.zeros(levels.size + 1, np.int64)
    np.add.at(diff, lo[ok], 1)
    np.add.at(diff, hi[ok], -1)
    return np.cumsum(diff)[:-1]


def _check_levels(tlp, levels, eps):
    lv = _as_levels(levels)
    if not eps > 0:
        raise ArgumentError("eps must be positive")
    if np.any(lv <= eps):
        raise ArgumentError("every level must exceed eps")
    if tlp.f[0] != 0:
        raise ArgumentError("exit levels are measured from a root label of 0")
    return lv


def exit_masses(tlp, levels, eps, m=None):
    """Exit-mass estimates at -a for every a in levels (0 when no label reaches -a)."""
    lv = _check_levels(tlp, levels, eps)
    if m is None:
        m = K.ancestral_min(tlp.k, tlp.f)
    f = tlp.f
    cand = (f - m) < eps
    z = _interval_counts(lv, -m[cand], "right", eps - f[cand], "left") * (tlp.ds / eps**2)
    z[lv > -tlp.w_star] = 0.0
    return z


def level_functionals(tlp, levels, eps, m=None):
    """Exit-mass estimates and truncation statistics on a grid of levels a > 0.

    Returns a dict of arrays aligned with `levels`:
      z       exit-mass estimate at -a (0 when no label reaches -a)
      y       ds * #{i : path i never reaches -a}
      sigma   duration of the truncation at -a
      top     largest label kept by the truncation at -a
    """
    lv = _check_levels(tlp, levels, eps)
    if m is None:
        m = K.ancestral_min(tlp.k, tlp.f)
    f = tlp.f
    ds = tlp.ds
    z = exit_masses(tlp, lv, eps, m)

    order = np.argsort(-m, kind="stable")
    m_sorted = -m[order]  # ascending in -m
    alive = np.searchsorted(m_sorted, lv, "left")  # #{-m < a}
    top_run = np.maximum.accumulate(f[order])
    top = np.where(alive > 0, top_run[np.maximum(alive - 1, 0)], np.nan)

    up = np.flatnonzero(np.diff(tlp.k) > 0) + 1
    hits = _interval_counts(lv, -m[up - 1], "right", -f[up], "right")
    kept = alive + hits
    sigma = np.maximum(kept - 1, 0) * ds
    return {"levels": lv, "z": z, "y": alive * ds, "sigma": sigma, "top": top}


def estimate_exit_mass(tlp, a, eps):
    if not eps < a:
        raise ArgumentError("the estimator needs eps < a")
    return float(exit_masses(tlp, [a], eps)[0])


def estimate_boundary_size(excursion, eps, with_half=False):
    """eps**-2 * ds * #{non-root indices with 0 < f < eps}."""
    if not eps > 0:
        raise ArgumentError("eps must be positive")
    f = excursion.f
    if f.min() < 0:
        raise ArgumentError("boundary sizes are defined for nonnegative labels")
    inner = excursion.k > 0
    val = np.count_nonzero(inner & (f > 0) & (f < eps)) * excursion.ds / eps**2
    if not with_half:
        return float(val)
    e2 = eps / 2
    half = np.count_nonzero(inner & (f > 0) & (f < e2)) * excursion.ds / e2**2
    return float(val), float(half)


def calibrate_jump_threshold(increments, factor=4.0):
    """factor * IQR of level-to-level increments from jump-free profiles."""
    inc = np.asarray(increments, dtype=np.float64)
    inc = inc[np.isfinite(inc)]
    if inc.size < 4:
        raise ArgumentError("need at least four increments to calibrate")
    q1, q3 = np.percentile(inc, [25, 75])
    return float(factor * (q3 - q1))


def exit_profile(tlp, levels, eps, threshold=None, debut_levels=None, m=None):
    """Exit-mass profile with jump flags.

    Without an explicit threshold the profile calibrates on its own
    increments.  `debut_levels` (positive depths |V_u|) are paired with the
    increment of the grid cell that contains them; a pairing counts as
    matched when a flagged jump lies within one grid cell of it.
    """
    fun = level_functionals(tlp, levels, eps, m)
    lv, z = fun["levels"], fun["z"]
    inc = np.diff(z)
    if threshold is None:
        threshold = calibrate_jump_threshold(inc) if inc.size >= 4 else np.inf
    flagged = np.flatnonzero((inc > threshold) & (inc > 0))
    jumps = [(float(lv[i + 1]), float(inc[i])) for i in flagged]
    matches = []
    if debut_levels is not None:
        flag_set = set(int(i) for i in flagged)
        for ell in np.atleast_1d(debut_levels):
            j = int(np.searchsorted(lv, ell, "left"))
            if j == 0 or j >= lv.size:
                matches.append({"debut_level": float(ell), "jump_level": None, "size": np.nan})
                continue
            cell = j - 1
            near = [c for c in (cell, cell - 1, cell + 1) if c in flag_set]
            matches.append({"debut_level": float(ell),
                            "jump_level": float(lv[near[0] + 1]) if near else None,
                            "size": float(inc[cell])})
    return ExitProfile(lv, z, float(eps), jumps, fun["y"], float(threshold), matches)
