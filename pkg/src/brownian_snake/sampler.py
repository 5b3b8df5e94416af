"""Random discrete snakes under the conditioned excursion measures.

Every draw of the discrete excursion measure is a critical geometric
Galton-Watson tree explored depth first: the first step goes up, later
steps go up with probability 1/2, and each new vertex receives an
independent N(0, dt) label increment.  Its contour is a simple random walk
excursion with steps +-dt, so one draw carries mass 1/(2 dt) and the
normalisation n(max h > e) = 1/(2e) holds on the lattice.  Conditioned laws
are obtained by rejection on the event; pruning at a kill level realises
truncation during generation.
"""
import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from . import _kernels as K
from ._rng import as_stream
from .errors import ArgumentError, SamplingError
from .tree_core import TreeLikePath
from .transforms import reroot, translate, truncate


class TargetKind(str, Enum):
    ITO_SIGMA_GT = "ITO_SIGMA_GT"
    N0_MIN_BELOW = "N0_MIN_BELOW"
    NEPS_TRUNC_MAX_GT = "NEPS_TRUNC_MAX_GT"
    NSTAR_MAX_GT = "NSTAR_MAX_GT"
    NSTAR_SIGMA_BIASED = "NSTAR_SIGMA_BIASED"


PARAM_NAMES = {
    TargetKind.ITO_SIGMA_GT: ("s0",),
    TargetKind.N0_MIN_BELOW: ("beta",),
    TargetKind.NEPS_TRUNC_MAX_GT: ("eps", "delta"),
    TargetKind.NSTAR_MAX_GT: ("delta",),
    TargetKind.NSTAR_SIGMA_BIASED: ("beta", "delta", "mu"),
}


@dataclass(frozen=True)
class SamplingTarget:
    kind: TargetKind
    params: tuple
    ds: float = 1e-4
    n_max: int = 16_000_000

    def __post_init__(self):
        kind = TargetKind(self.kind)
        object.__setattr__(self, "kind", kind)
        params = tuple(float(p) for p in np.atleast_1d(self.params))
        object.__setattr__(self, "params", params)
        names = PARAM_NAMES[kind]
        if len(params) != len(names):
            raise ArgumentError(f"{kind.value} takes parameters {names}, got {params}")
        if not all(math.isfinite(p) and p > 0 for p in params):
            raise ArgumentError("target parameters must be positive and finite")
        if not (math.isfinite(self.ds) and self.ds > 0):
            raise ArgumentError("ds must be positive")
        if int(self.n_max) < 3:
            raise ArgumentError("n_max must allow at least one excursion step")
        if kind is TargetKind.NEPS_TRUNC_MAX_GT and not params[0] < params[1]:
            raise ArgumentError("NEPS_TRUNC_MAX_GT needs eps < delta")

    def param(self, name):
        return self.params[PARAM_NAMES[self.kind].index(name)]

    @property
    def s_cap(self):
        return self.n_max * self.ds


@dataclass
class SamplerOptions:
    eps_ratio: float = 1 / 20          # eps = eps_ratio * delta for NSTAR_MAX_GT
    max_attempts: int = 50_000_000     # draws allowed per returned sample
    acceptance_floor: float = 1e-7
    window_warn: float = 0.005         # tolerated share of size-capped draws
    eps_boundary: float = 0.05
    min_boundary: float | None = None  # extra acceptance on the boundary size
    eps_exit: float = 0.1              # profile width for NSTAR_SIGMA_BIASED
    level_step: float = 0.01
    weight_cap: float = 4.0


@dataclass
class SamplerStats:
    draws: int = 0
    accepted: int = 0
    capped: int = 0
    weight_total: float = 0.0
    weight_excess: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def acceptance_rate(self):
        return self.accepted / self.draws if self.draws else float("nan")

    @property
    def window_bias(self):
        tot = self.accepted + self.capped
        return self.capped / tot if tot else 0.0

    def as_dict(self):
        return {"draws": self.draws, "accepted": self.accepted, "capped": self.capped,
                "acceptance_rate": self.acceptance_rate, "window_bias": self.window_bias,
                "weight_cap_bias": (self.weight_excess / self.weight_total
                                    if self.weight_total else 0.0), **self.extra}


def sample_lifetime_excursion(duration_steps, rng):
    """Uniform +-1 excursion of the given even length, positive inside.

    A shuffled sequence of n-1 up and n down steps is rotated to start just
    after its first minimum (cycle lemma); dropping the final down step
    leaves a uniform Dyck path, which is lifted by one unit and closed.
    """
    n2 = int(duration_steps)
    if n2 != duration_steps or n2 < 2 or n2 % 2:
        raise ArgumentError("duration_steps must be an even integer >= 2")
    n = n2 // 2
    if n == 1:
        return np.array([0, 1, 0], dtype=np.int64)
    gen = as_stream(rng).gen
    steps = np.concatenate([np.ones(n - 1, np.int64), -np.ones(n, np.int64)])
    gen.shuffle(steps)
    j = int(np.argmin(np.cumsum(steps)))
    dyck = np.roll(steps, -(j + 1))[:-1]
    out = np.empty(n2 + 1, np.int64)
    out[0] = 0
    out[1] = 1
    out[2:-1] = 1 + np.cumsum(dyck)
    out[-1] = 0
    return out


def sample_duration(target, rng):
    """Even number of s-steps with duration density proportional to s**-1.5 on (s0, s_cap)."""
    return duration_steps(sample_duration_value(target, rng), target.ds)


def sample_duration_value(target, rng, u=None):
    if target.kind is not TargetKind.ITO_SIGMA_GT:
        raise ArgumentError(f"{target.kind.value} does not use a duration mixture")
    s0 = target.param("s0")
    s_cap = target.s_cap
    if not s_cap > s0:
        raise ArgumentError("duration window is empty (s_cap <= s0)")
    if u is None:
        u = as_stream(rng).gen.random()
    a = s0 ** -0.5
    c = s_cap ** -0.5
    return (a - u * (a - c)) ** -2


def duration_steps(s, ds):
    return max(2, 2 * int(round(s / (2 * ds))))


def attach_labels(h, start, rng, ds):
    """Gaussian labels along the tree coded by integer heights h (grid units)."""
    h = np.asarray(h, dtype=np.int64)
    n_up = int(np.count_nonzero(np.diff(h) > 0))
    sd = ds ** 0.25
    inc = as_stream(rng).gen.standard_normal(n_up) * sd
    return TreeLikePath(h, K.attach_labels(h, inc, float(start)), ds)


class Sampler:
    """Stateful sampler that reuses its work buffers across draws."""

    def __init__(self, target, rng, options=None, **overrides):
        self.target = target
        self.stream = as_stream(rng)
        try:
            self.options = replace(options or SamplerOptions(), **overrides)
        except TypeError as exc:
            raise ArgumentError(str(exc)) from exc
        self.stats = SamplerStats()
        n = int(target.n_max)
        self._k = np.empty(n, np.int64)
        self._f = np.empty(n)
        self._lab = np.empty(n)
        opt = self.options
        if target.kind is TargetKind.NSTAR_MAX_GT:
            delta = target.param("delta")
            self.eps = opt.eps_ratio * delta
            if not self.eps < delta:
                raise ArgumentError("eps must be smaller than delta")
        elif target.kind is TargetKind.NEPS_TRUNC_MAX_GT:
            self.eps = target.param("eps")
        if target.kind is TargetKind.NSTAR_SIGMA_BIASED:
            if not opt.eps_exit < target.param("beta"):
                raise ArgumentError("eps_exit must be below beta")
            self._inner = Sampler(
                SamplingTarget(TargetKind.N0_MIN_BELOW, (target.param("beta"),),
                               target.ds, target.n_max), self.stream, self.options)

    # -- generic pruned draw -------------------------------------------------
    def _draw(self, x0, kill, use_kill, max_gt, min_le, bcount_gt, blo=0.0, bhi=0.0):
        t = self.target
        sd = t.ds ** 0.25
        n, draws, capped = K.draw_until(
            self.stream.kstate, self._k, self._f, self._lab, float(x0), sd, float(kill),
            use_kill, float(blo), float(bhi), float(max_gt), float(min_le),
            int(bcount_gt), int(self.options.max_attempts))
        st = self.stats
        st.draws += draws
        st.capped += capped
        if n < 0:
            raise SamplingError(
                f"{t.kind.value}: no acceptance within {draws} draws",
                self.diagnostics())
        st.accepted += 1
        self._check_health()
        return TreeLikePath.trusted(self._k[:n].copy(), self._f[:n].copy(), t.ds)

    def _check_health(self):
        st = self.stats
        if st.draws >= 10_000 and st.acceptance_rate < self.options.acceptance_floor:
            raise SamplingError("acceptance rate collapsed below the configured floor",
                                self.diagnostics())
        if st.accepted % 1000 == 0 and st.window_bias > self.options.window_warn:
            warnings.warn(f"size cap discarded {st.window_bias:.2%} of the accepted mass "
                          f"(n_max={self.target.n_max})", RuntimeWarning, stacklevel=3)

    def diagnostics(self):
        d = self.stats.as_dict()
        d["target"] = self.target.kind.value
        d["params"] = list(self.target.params)
        return d

    # -- targets -------------------------------------------------------------
    def sample(self):
        kind = self.target.kind
        if kind is TargetKind.ITO_SIGMA_GT:
            return self._ito()
        if kind is TargetKind.N0_MIN_BELOW:
            return self._draw(0.0, 0.0, False, -np.inf, -self.target.param("beta"), -1)
        if kind in (TargetKind.NSTAR_MAX_GT, TargetKind.NEPS_TRUNC_MAX_GT):
            return self._nstar()
        return self._sigma_biased()

    def sample_many(self, count):
        return [self.sample() for _ in range(int(count))]

    def _ito(self):
        steps = sample_duration(self.target, self.stream)
        h = sample_lifetime_excursion(steps, self.stream)
        self.stats.draws += 1
        self.stats.accepted += 1
        return attach_labels(h, 0.0, self.stream, self.target.ds)

    def _nstar(self):
        opt = self.options
        delta = self.target.param("delta")
        if opt.min_boundary is None:
            return self._draw(self.eps, 0.0, True, delta, np.inf, -1)
        eb = opt.eps_boundary
        thr = opt.min_boundary * eb * eb / self.target.ds
        # count strictly above the threshold: bcount > floor(thr)
        return self._draw(self.eps, 0.0, True, delta, np.inf, int(math.floor(thr)), 0.0, eb)

    def _sigma_biased(self):
        from .exit_measures import level_functionals

        t = self.target
        beta, delta, mu = t.param("beta"), t.param("delta"), t.param("mu")
        opt = self.options
        gen = self.stream.gen
        st = self.stats
        for _ in range(int(opt.max_attempts)):
            w = self._inner.sample()
            st.draws = self._inner.stats.draws
            st.capped = self._inner.stats.capped
            depth = -w.w_star
            ncell = int(math.floor((depth - beta) / opt.level_step))
            if ncell < 1:
                continue
            mids = beta + (np.arange(ncell) + 0.5) * opt.level_step
            z = level_functionals(w, mids, opt.eps_exit)["z"]
            mass = z.sum() * opt.level_step
            if mass <= 0:
                continue
            j = gen.choice(ncell, p=z / z.sum())
            b = beta + (j + gen.random()) * opt.level_step
            tr = truncate(w, -b)
            height = tr.f.max() + b
            g = math.exp(-mu * tr.sigma) if height > delta else 0.0
            weight = mass * g
            st.weight_total += weight
            st.weight_excess += max(0.0, weight - opt.weight_cap)
            if gen.random() < min(1.0, weight / opt.weight_cap):
                st.accepted += 1
                out = translate(tr, b)
                roots = np.flatnonzero((out.k > 0) & (out.f == 0.0))
                return reroot(out, int(gen.choice(roots)))
        raise SamplingError("NSTAR_SIGMA_BIASED: attempt cap reached", self.diagnostics())


def sample(target, rng, **options):
    """One trajectory from the requested law (fresh buffers on each call)."""
    return Sampler(target, rng, **options).sample()
