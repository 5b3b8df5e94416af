"""Closed-form laws and the small statistics toolbox used by the checks."""
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate, special
from scipy import stats as sps

from .errors import ArgumentError

SQRT23 = math.sqrt(2.0 / 3.0)


def _c0(gamma):
    return 3.0 * math.pi ** -1.5 * gamma(1.0 / 3.0) ** 3 * gamma(7.0 / 6.0) ** 3


C0 = _c0(math.gamma)
_C0_ALT = float(_c0(lambda x: mpmath.gamma(mpmath.mpf(x))))
if abs(C0 - _C0_ALT) > 1e-6 * C0:  # pragma: no cover - guards a broken libm
    raise RuntimeError(f"Gamma implementations disagree on c0: {C0} vs {_C0_ALT}")


def law_min(x, y):
    """Mass of {min label <= y} under the excursion measure started at x > y."""
    return 1.5 / (np.asarray(x, float) - y) ** 2


def laplace_exit(lam, gap):
    """N_x(1 - exp(-lam Z_y)) with gap = x - y."""
    return (np.asarray(lam, float) ** -0.5 + SQRT23 * np.asarray(gap, float)) ** -2


def csbp_u(lam, t):
    """Laplace exponent of the branching process after time t."""
    return laplace_exit(lam, t)


def psi(lam):
    return math.sqrt(8.0 / 3.0) * np.asarray(lam, float) ** 1.5


def _u_parts(lam, mu, b):
    r = math.sqrt(mu / 2.0)
    x = math.sqrt(2.0 / 3.0 + math.sqrt(2.0 / mu) * lam / 3.0)
    arg = (2.0 * mu) ** 0.25 * np.asarray(b, float)
    return r, x, arg


def u_lambda_mu(lam, mu, b):
    """N_0(1 - exp(-lam Z_b - mu Y_b)): tanh branch for lam below sqrt(mu/2),
    coth branch above, constant on the boundary."""
    if not (lam >= 0 and mu > 0):
        raise ArgumentError("need lam >= 0 and mu > 0")
    r, x, arg = _u_parts(lam, mu, b)
    if x == 1.0:
        return np.full_like(arg, r)
    if x < 1.0:
        t = np.tanh(arg + math.atanh(x))
    else:
        t = 1.0 / np.tanh(arg + math.atanh(1.0 / x))
    return r * (3.0 * t * t - 2.0)


def du_dlambda(lam, mu, b):
    """Derivative of u_lambda_mu in lam (same expression on both branches)."""
    r, x, arg = _u_parts(lam, mu, b)
    dx = math.sqrt(2.0 / mu) / (6.0 * x)
    if x == 1.0:
        # (1 - t**2) / (1 - x**2) -> exp(-2 arg) as x -> 1 on either branch
        return r * 6.0 * np.exp(-2.0 * arg) * dx
    if x < 1.0:
        t = np.tanh(arg + math.atanh(x))
    else:
        t = 1.0 / np.tanh(arg + math.atanh(1.0 / x))
    return r * 6.0 * t * (1.0 - t * t) * dx / (1.0 - x * x)


def f_joint(z, s):
    z = np.asarray(z, float)
    s = np.asarray(s, float)
    return math.sqrt(3.0) / (2 * math.pi) * np.sqrt(z) * s ** -2.5 * np.exp(-z * z / (2 * s))


def g_z(z):
    return math.sqrt(3.0 / (2 * math.pi)) * np.asarray(z, float) ** -2.5


def h_sigma(s):
    return (math.sqrt(3.0) / (2 * math.pi) * 2 ** -0.25 * math.gamma(0.75)
            * np.asarray(s, float) ** -1.75)


def nstar_max_gt(delta):
    return C0 * np.asarray(delta, float) ** -3.0


def jump_tail_rate(z):
    """Mass of jumps larger than z per unit time."""
    return math.sqrt(3.0 / (2 * math.pi)) * (2.0 / 3.0) * np.asarray(z, float) ** -1.5


def f_to_g_quadrature(z):
    val, _ = integrate.quad(lambda s: float(f_joint(z, s)), 0, np.inf, epsabs=0, epsrel=1e-12,
                            limit=200)
    return val


def f_to_h_quadrature(s):
    val, _ = integrate.quad(lambda z: float(f_joint(z, s)), 0, np.inf, epsabs=0, epsrel=1e-12,
                            limit=200)
    return val


def u_derivative_integral(lam, mu):
    val, _ = integrate.quad(lambda b: float(du_dlambda(lam, mu, b)), 0, np.inf,
                            epsabs=0, epsrel=1e-10, limit=200)
    return val


def u_derivative_integral_closed(lam, mu):
    return 0.5 * math.sqrt(1.5) * (lam + math.sqrt(2 * mu)) ** -0.5


def chi2_3_from_joint(u):
    """CDF of Z**2 / sigma by direct integration of the joint density.

    With s = z**2 / v the mass of {v <= u, z in dz} is
    int_0^u f(z, z**2/v) z**2 / v**2 dv; dividing by g(z) removes z.
    """
    u = float(u)
    if u <= 0:
        return 0.0
    z = 1.0
    num, _ = integrate.quad(lambda v: float(f_joint(z, z * z / v)) * z * z / v**2, 0, u,
                            epsabs=0, epsrel=1e-11, limit=200)
    return num / float(g_z(z))


# -- empirical tools ----------------------------------------------------------

def ks_distance(sample, cdf):
    x = np.asarray(sample, dtype=np.float64).ravel()
    if x.size == 0:
        raise ArgumentError("empty sample")
    res = sps.kstest(x, cdf)
    return float(res.statistic), float(res.pvalue)


def ks_two_sample(a, b):
    res = sps.ks_2samp(np.asarray(a, float), np.asarray(b, float))
    return float(res.statistic), float(res.pvalue)


@dataclass
class LaplaceEstimate:
    lambdas: np.ndarray
    mean: np.ndarray
    lo: np.ndarray
    hi: np.ndarray


def empirical_laplace(sample, lambdas, n_boot=200, rng=None, level=0.95):
    x = np.asarray(sample, dtype=np.float64).ravel()
    lam = np.atleast_1d(np.asarray(lambdas, dtype=np.float64))
    if x.size == 0:
        raise ArgumentError("empty sample")
    vals = np.exp(-np.outer(lam, x))
    mean = vals.mean(axis=1)
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    boots = np.empty((n_boot, lam.size))
    for b in range(n_boot):
        idx = gen.integers(0, x.size, x.size)
        boots[b] = vals[:, idx].mean(axis=1)
    a = (1 - level) / 2
    lo, hi = np.quantile(boots, [a, 1 - a], axis=0)
    return LaplaceEstimate(lam, mean, lo, hi)


def tail_exponent_fit(sample, threshold, min_exceedances=100):
    """Hill estimate of the survival exponent above threshold, with stderr."""
    x = np.asarray(sample, dtype=np.float64).ravel()
    if not threshold > 0:
        raise ArgumentError("threshold must be positive")
    ex = x[x > threshold]
    if ex.size < min_exceedances:
        raise ArgumentError(f"only {ex.size} exceedances above {threshold}")
    alpha = ex.size / np.log(ex / threshold).sum()
    return float(alpha), float(alpha / math.sqrt(ex.size))


def spearman(a, b):
    return float(sps.spearmanr(a, b).statistic)


def chi2_3_cdf(u):
    return special.gammainc(1.5, np.asarray(u, float) / 2)
