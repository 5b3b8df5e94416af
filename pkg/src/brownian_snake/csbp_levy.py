"""The 3/2-stable branching process, its Levy process and the Lamperti maps.

Increments of the centred spectrally positive Levy process U satisfy
E[exp(-lam U_t)] = exp(t psi(lam)) with psi(lam) = sqrt(8/3) lam**1.5.
A standard totally skewed stable variate X (Chambers-Mallows-Stuck,
alpha = 3/2, beta = 1, unit scale) has E[exp(-lam X)] = exp(sqrt(2) lam**1.5),
so U over a step dtau is (4/3)**(1/3) * dtau**(2/3) * X.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from ._rng import as_stream
from .errors import ArgumentError
from .stats import csbp_u, psi

ALPHA = 1.5
SCALE = (4.0 / 3.0) ** (1.0 / 3.0)


def csbp_transition_laplace(lam, t):
    if not (lam > 0 and t > 0):
        raise ArgumentError("need lam > 0 and t > 0")
    return float(csbp_u(lam, t))


def stable_variates(gen, size):
    """Unit-scale totally skewed 3/2-stable variates (mean zero)."""
    a = ALPHA
    tn = math.tan(math.pi * a / 2)
    B = math.atan(tn) / a
    S = (1 + tn * tn) ** (1 / (2 * a))
    V = gen.uniform(-math.pi / 2, math.pi / 2, size)
    W = gen.exponential(1.0, size)
    return S * np.sin(a * (V + B)) / np.cos(V) ** (1 / a) * (
        np.cos(V - a * (V + B)) / W) ** ((1 - a) / a)


def default_floor(dtau):
    return 10.0 * SCALE * dtau ** (2.0 / 3.0)


def _jumps(times, values, floor):
    inc = np.diff(values)
    idx = np.flatnonzero(inc > floor)
    return [(float(times[i + 1]), float(inc[i])) for i in idx]


@dataclass
class LevyPath:
    times: np.ndarray
    values: np.ndarray
    floor: float
    jumps: list = field(default_factory=list)

    @property
    def dtau(self):
        return float(self.times[1] - self.times[0]) if self.times.size > 1 else 0.0


@dataclass
class CSBPPath:
    times: np.ndarray
    values: np.ndarray
    absorbed_at: float | None
    floor: float
    jumps: list = field(default_factory=list)

    def __post_init__(self):
        if np.any(self.values < 0):
            raise ArgumentError("branching-process values must be nonnegative")
        if self.absorbed_at is not None:
            after = self.times >= self.absorbed_at
            if np.any(self.values[after] != 0):
                raise ArgumentError("values must stay at 0 after absorption")

    def at(self, t):
        """Right-continuous step evaluation (0 after absorption)."""
        t = np.asarray(t, float)
        idx = np.searchsorted(self.times, t, "right") - 1
        out = self.values[np.clip(idx, 0, None)]
        if self.absorbed_at is not None:
            out = np.where(t >= self.absorbed_at, 0.0, out)
        return out


def sample_levy(T, dtau, rng, start=0.0, floor=None):
    if not (T > 0 and dtau > 0):
        raise ArgumentError("need T > 0 and dtau > 0")
    n = int(round(T / dtau))
    if n < 1:
        raise ArgumentError("T must cover at least one step")
    gen = as_stream(rng).gen
    inc = SCALE * dtau ** (2.0 / 3.0) * stable_variates(gen, n)
    values = np.empty(n + 1)
    values[0] = start
    np.cumsum(inc, out=values[1:])
    values[1:] += start
    times = np.arange(n + 1) * dtau
    floor = default_floor(dtau) if floor is None else float(floor)
    return LevyPath(times, values, floor, _jumps(times, values, floor))


def stable_endpoints(n_paths, T, dtau, rng):
    """U_T for many independent paths without storing them (compiled loop)."""
    steps = int(round(T / dtau))
    return K.stable_sums(as_stream(rng).kstate, int(n_paths), steps,
                         SCALE * dtau ** (2.0 / 3.0))


def lamperti_csbp_from_levy(X):
    """Time change by the running integral of 1/X (left-endpoint rule).

    The output is absorbed at 0 from the first grid time where X <= 0.
    """
    x = np.asarray(X.values, float)
    if not x[0] > 0:
        raise ArgumentError("the Levy path must start at a positive mass")
    dt = np.diff(X.times)
    hit = np.flatnonzero(x <= 0)
    if hit.size:
        j0 = int(hit[0])
        times = np.concatenate([[0.0], np.cumsum(dt[:j0] / x[:j0])])
        values = np.concatenate([x[:j0], [0.0]])
        absorbed = float(times[-1])
    else:
        times = np.concatenate([[0.0], np.cumsum(dt / x[:-1])])
        values = x.copy()
        absorbed = None
    return CSBPPath(times, values, absorbed, X.floor, _jumps(times, values, X.floor))


def lamperti_levy_from_csbp(Z):
    """Time change by the running integral of Z.

    An absorbed path maps to a Levy path defined up to the total integral of Z.
    """
    z = np.asarray(Z.values, float)
    times = np.concatenate([[0.0], np.cumsum(z[:-1] * np.diff(Z.times))])
    return LevyPath(times, z.copy(), Z.floor, _jumps(times, z, Z.floor))


def jump_counts(total_time, dtau, thresholds, rng):
    """Count increments above each threshold over total_time of Levy time."""
    n = int(round(total_time / dtau))
    thr = np.ascontiguousarray(np.atleast_1d(thresholds), dtype=np.float64)
    return K.stable_exceedances(as_stream(rng).kstate, n, SCALE * dtau ** (2.0 / 3.0), thr)


def levy_laplace_check(lambdas, n_paths, rng, dtau=0.05):
    u1 = stable_endpoints(n_paths, 1.0, dtau, rng)
    lam = np.atleast_1d(lambdas)
    emp = np.array([np.exp(-l * u1).mean() for l in lam])
    exact = np.exp(psi(lam))
    return emp, exact, u1


def snake_vs_csbp_check(profiles, beta, times, lambdas=(1.0,), n_bins=4, min_count=50):
    """Compare Laplace transforms of Z_{beta+t} given binned Z_beta with the
    branching-process prediction exp(-z u_t(lam)).

    Every profile must contain the levels beta and beta + t (to 1e-9).
    """
    z0 = []
    zt = {t: [] for t in times}
    for p in profiles:
        lv = p.levels

        def at(a):
            i = int(np.argmin(np.abs(lv - a)))
            if abs(lv[i] - a) > 1e-9:
                raise ArgumentError(f"profile lacks level {a}")
            return p.z_hat[i]

        z0.append(at(beta))
        for t in times:
            zt[t].append(at(beta + t))
    z0 = np.asarray(z0)
    pos = z0 > 0
    edges = np.quantile(z0[pos], np.linspace(0, 1, n_bins + 1)) if pos.any() else np.array([])
    rows = []
    for b in range(max(len(edges) - 1, 0)):
        sel = pos & (z0 >= edges[b]) & ((z0 < edges[b + 1]) if b < n_bins - 1 else True)
        count = int(sel.sum())
        for t in times:
            arr = np.asarray(zt[t])[sel]
            for lam in lambdas:
                row = {"bin": b, "z_lo": float(edges[b]), "z_hi": float(edges[b + 1]),
                       "count": count, "t": float(t), "lambda": float(lam)}
                if count < min_count:
                    row["status"] = "insufficient"
                else:
                    emp = float(np.exp(-lam * arr).mean())
                    pred = float(np.exp(-z0[sel] * csbp_u(lam, t)).mean())
                    emp_abs = float((arr == 0).mean())
                    pred_abs = float(np.exp(-z0[sel] * 1.5 / t**2).mean())
                    row.update(status="ok", empirical=emp, predicted=pred,
                               rel_err=abs(emp - pred) / pred,
                               absorbed_empirical=emp_abs, absorbed_predicted=pred_abs)
                rows.append(row)
    return {"beta": float(beta), "rows": rows}
