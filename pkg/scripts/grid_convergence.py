#!/usr/bin/env python3
"""Lattice bias of the discrete snake as the grid is refined.

For each ds this measures, with the package samplers:
  * the mass of {min label <= -beta} per unit of excursion measure
    (acceptance rate x 1/(2 dt)), against the continuum value 3/(2 beta^2);
  * P(min <= -y | min <= -beta) at y = 1, against (beta / y)^2;
  * P(M > 2 delta | M > delta) under the N*0 approximation, against 1/8.
Each quantity is converted into the barrier shift c that would explain it
in the continuum (mass 3/(2 (beta + c)^2), ratio ((beta + c)/(y + c))^2,
ratio ((delta + c)/(2 delta + c))^3).  A straight-line fit of c against
ds**(1/4) should extrapolate to c = 0 if the bias is a pure lattice effect.

Example:
    python3 scripts/grid_convergence.py --grids 1e-2 1e-3 1e-4 --replicas 4000
"""
import argparse
import json
import time
import warnings

import numpy as np

from brownian_snake._rng import RngState
from brownian_snake.sampler import Sampler, SamplingTarget, TargetKind


def measure(ds, replicas, seed, beta, delta, s_cap):
    n_max = int(round(s_cap / ds))
    t0 = time.perf_counter()
    n0 = Sampler(SamplingTarget(TargetKind.N0_MIN_BELOW, (beta,), ds, n_max),
                 RngState(seed, 1))
    w_star = np.array([w.w_star for w in n0.sample_many(replicas)])
    mass = n0.stats.acceptance_rate / (2 * np.sqrt(ds))
    window = n0.stats.window_bias
    del n0  # the work buffers hold n_max entries each
    nstar = Sampler(SamplingTarget(TargetKind.NSTAR_MAX_GT, (delta,), ds, n_max),
                    RngState(seed, 2))
    heights = np.array([w.f.max() for w in nstar.sample_many(replicas)])
    return {
        "ds": ds,
        "min_mass": float(mass),
        "min_mass_exact": 1.5 / beta**2,
        "min_ratio_y1": float(np.mean(w_star <= -1.0)),
        "min_ratio_exact": beta**2,
        "height_ratio": float(np.mean(heights > 2 * delta) / np.mean(heights > delta)),
        "height_ratio_exact": 0.125,
        "window_bias": float(window),
        "seconds": round(time.perf_counter() - t0, 2),
    }


def shifts(row, beta, delta):
    root = np.sqrt(row["min_ratio_y1"])
    q = row["height_ratio"] ** (1 / 3)
    return {
        "min_mass": float(np.sqrt(1.5 / row["min_mass"]) - beta),
        "min_ratio_y1": float((root - beta) / (1 - root)),
        "height_ratio": float(delta * (2 * q - 1) / (1 - q)),
    }


def extrapolate(rows, key):
    x = np.array([r["ds"] for r in rows]) ** 0.25
    y = np.array([r["shift"][key] for r in rows])
    slope, intercept = np.polyfit(x, y, 1)
    return float(intercept), float(slope)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--grids", type=float, nargs="+", default=[1e-2, 1e-3, 1e-4])
    p.add_argument("--replicas", type=int, default=4000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--s-cap", type=float, default=1600.0)
    p.add_argument("--json", help="write the table to this file")
    args = p.parse_args(argv)

    keys = ("min_mass", "min_ratio_y1", "height_ratio")
    rows = []
    print(f"{'ds':>9} " + " ".join(f"{k:>13} {'shift':>7}" for k in keys))
    for ds in sorted(args.grids, reverse=True):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            row = measure(ds, args.replicas, args.seed, args.beta, args.delta, args.s_cap)
        row["shift"] = shifts(row, args.beta, args.delta)
        rows.append(row)
        print(f"{ds:>9.3g} " + " ".join(f"{row[k]:>13.5g} {row['shift'][k]:>7.3f}"
                                       for k in keys), flush=True)
    print(f"{'exact':>9} {rows[0]['min_mass_exact']:>13.5g} {0:>7} "
          f"{rows[0]['min_ratio_exact']:>13.5g} {0:>7} {0.125:>13.5g} {0:>7}")
    fits = {}
    if len(rows) >= 2:
        for key in keys:
            fits[key] = dict(zip(("shift_at_zero", "slope"), extrapolate(rows, key)))
            print(f"{key}: shift = {fits[key]['slope']:.3f} * ds^(1/4) "
                  f"{fits[key]['shift_at_zero']:+.3f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"rows": rows, "fits": fits, "replicas": args.replicas,
                       "seed": args.seed}, fh, indent=2)


if __name__ == "__main__":
    main()
