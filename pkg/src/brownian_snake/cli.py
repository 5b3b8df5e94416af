"""Command line front end: ``bsnake <command> [options]``.

Commands: sample, excursions, exitprofile, csbp, verify, reroot-check.
Every command accepts --config, --seed, --replicas, --grid-ds and
--output-dir; explicit flags override the config file, which overrides the
built-in defaults.  The default output directory may also be set with the
BSNAKE_OUTPUT_DIR environment variable.
"""
import argparse
import logging
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import csbp_levy as CL
from . import io
from . import transforms as T
from . import verify as V
from ._rng import RngState
from .config import parse_config
from .errors import ArgumentError, MalformedInputError, SamplingError
from .excursions import component_table, extract_excursion, find_debuts, first_excursion
from .exit_measures import estimate_boundary_size, exit_profile
from .sampler import PARAM_NAMES, Sampler, SamplingTarget, TargetKind
from .tree_core import build_discrete_tree, pseudo_distance

log = logging.getLogger("bsnake")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3


class StageClock:
    def __init__(self):
        self.stages = {}

    def run(self, name, fn, *a, **kw):
        t0 = time.perf_counter()
        try:
            return fn(*a, **kw)
        finally:
            self.stages[name] = round(time.perf_counter() - t0, 4)


def _out_dir(cfg, args):
    out = Path(getattr(args, "out", None) or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(cfg, command, extra):
    return {"command": command, "config": cfg.as_dict() | {"output_dir": None},
            "config_hash": cfg.digest(), "git_revision": io.git_revision(Path(__file__).parent),
            **extra}


def _write_run_files(out, cfg, command, extra, clock):
    io.write_json(out / "manifest.json", _manifest(cfg, command, extra))
    io.write_json(out / "timings.json", {"stages": clock.stages})


# -- commands ---------------------------------------------------------------------

def cmd_sample(cfg, args, clock):
    kind = TargetKind(args.target)
    params = args.params if args.params else _default_params(kind, cfg)
    target = SamplingTarget(kind, params, cfg.ds, cfg.n_max)
    out = _out_dir(cfg, args)
    opts = {}
    if args.eps_ratio is not None:
        opts["eps_ratio"] = args.eps_ratio
    sampler = Sampler(target, RngState(cfg.seed, 0), eps_boundary=cfg.eps_boundary,
                      eps_exit=cfg.eps_exit, **opts)

    def draw():
        for i in range(cfg.replicas):
            io.write_trajectory(out / io.trajectory_name(i), sampler.sample())

    clock.run("sample", draw)
    _write_run_files(out, cfg, "sample", {
        "target": kind.value, "params": dict(zip(PARAM_NAMES[kind], target.params)),
        "replicas": cfg.replicas, "seed": cfg.seed, "stream": 0,
        "sampler": sampler.stats.as_dict()}, clock)
    print(f"wrote {cfg.replicas} trajectories to {out}")
    return EXIT_OK


def _default_params(kind, cfg):
    return {TargetKind.ITO_SIGMA_GT: (cfg.s_min,),
            TargetKind.N0_MIN_BELOW: (cfg.beta,),
            TargetKind.NEPS_TRUNC_MAX_GT: (cfg.delta / 20, cfg.delta),
            TargetKind.NSTAR_MAX_GT: (cfg.delta,),
            TargetKind.NSTAR_SIGMA_BIASED: (cfg.beta, cfg.delta, 1.0)}[kind]


def _load_all(directory):
    return [(p.stem, io.read_trajectory(p)) for p in io.list_trajectories(directory)]


def cmd_excursions(cfg, args, clock):
    trajs = clock.run("read", _load_all, args.inp)
    out = _out_dir(cfg, args)
    rows = []

    def analyse():
        for name, w in trajs:
            tree = build_discrete_tree(w)
            table = component_table(tree)
            if args.first_only:
                rec = first_excursion(tree, cfg.delta, cfg.beta, table=table)
                recs = [] if rec is None else [rec]
            else:
                recs = [r for r in find_debuts(tree, cfg.delta, table=table)
                        if r.level < -cfg.beta]
            for rec in recs:
                traj = rec.trajectory if rec.trajectory is not None else extract_excursion(tree, rec)
                rows.append((name, rec.level, rec.height, traj.sigma,
                             estimate_boundary_size(traj, cfg.eps_boundary)))

    clock.run("excursions", analyse)
    target = out / (args.table or "records.csv")
    io.write_table(target, ["replica", "level", "height", "sigma", "boundary_size"], rows,
                   cfg.digest())
    _write_run_files(out, cfg, "excursions", {"input": str(args.inp), "records": len(rows)},
                     clock)
    print(f"wrote {len(rows)} excursion records to {target}")
    return EXIT_OK


def _parse_levels(text):
    try:
        a1, a2, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise ArgumentError(f"--levels expects a1:a2:step, got {text!r}") from exc
    if not (0 < a1 < a2 and step > 0):
        raise ArgumentError("--levels needs 0 < a1 < a2 and step > 0")
    return np.round(a1 + step * np.arange(int(np.floor((a2 - a1) / step + 1e-9)) + 1), 12)


def cmd_exitprofile(cfg, args, clock):
    levels = _parse_levels(args.levels)
    eps = args.eps if args.eps is not None else cfg.eps_exit
    trajs = clock.run("read", _load_all, args.inp)
    out = _out_dir(cfg, args)
    rows = []

    def analyse():
        for name, w in trajs:
            prof = exit_profile(w, levels, eps)
            flagged = {lv for lv, _ in prof.jumps}
            for a, z, y in zip(prof.levels, prof.z_hat, prof.y_aux):
                rows.append((name, a, z, y, int(a in flagged)))

    clock.run("exitprofile", analyse)
    target = out / (args.table or "profile.csv")
    io.write_table(target, ["replica", "level", "z_hat", "y_aux", "jump"], rows, cfg.digest())
    _write_run_files(out, cfg, "exitprofile", {"input": str(args.inp), "eps": eps,
                                               "levels": args.levels}, clock)
    print(f"wrote {len(rows)} profile rows to {target}")
    return EXIT_OK


def cmd_csbp(cfg, args, clock):
    out = _out_dir(cfg, args)
    rng = RngState(cfg.seed, 0)
    mode = args.mode
    report = {"mode": mode}
    status = EXIT_OK
    if mode in ("levy", "csbp"):
        from ._rng import as_stream
        stream = as_stream(rng)
        for i in range(cfg.replicas):
            X = CL.sample_levy(args.horizon, args.dtau, stream, start=args.z0)
            path = X if mode == "levy" else CL.lamperti_csbp_from_levy(X)
            io.write_table(out / f"{mode}_{i:05d}.csv", ["time", "value"],
                           zip(path.times, path.values), cfg.digest())
        report["replicas"] = cfg.replicas
    elif mode == "roundtrip":
        err = clock.run("roundtrip", V.roundtrip_error, args.dtau)
        report.update(roundtrip_steps=err, passed=err < 2)
        status = EXIT_OK if err < 2 else EXIT_FAIL
    else:
        ver = V.Verifier(seed=cfg.seed, budget=V.Budget.smoke(cfg.replicas))
        res = clock.run("check", ver.a7)
        report.update(res.as_dict())
        print(res.line())
        status = EXIT_OK if res.passed else EXIT_FAIL
    io.write_json(out / "csbp_report.json", report)
    _write_run_files(out, cfg, "csbp", {"mode": mode}, clock)
    return status


def cmd_verify(cfg, args, clock):
    budget = V.Budget() if args.full else V.Budget.smoke(cfg.replicas)
    ver = V.Verifier(seed=cfg.seed, ds=cfg.ds, s_cap=cfg.s_cap, beta=cfg.beta,
                     delta=cfg.delta, eps_exit=cfg.eps_exit, eps_boundary=cfg.eps_boundary,
                     budget=budget)
    results = clock.run(f"verify:{args.suite}", V.run_suite, ver, args.suite,
                        lambda r: print(r.line(), flush=True))
    ok = all(r.passed for r in results)
    report = {"suite": args.suite, "passed": ok, "budget": budget.__dict__,
              "criteria": [r.as_dict() | {"seconds": None} for r in results]}
    target = Path(args.report) if args.report else _out_dir(cfg, args) / "report.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    io.write_json(target, report)
    io.write_json(target.with_name(target.stem + ".timings.json"),
                  {"stages": clock.stages, "criteria": {r.name: r.seconds for r in results},
                   "shared": ver.timings})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reroot_check(cfg, args, clock):
    trajs = clock.run("read", _load_all, args.inp)
    out = _out_dir(cfg, args)
    gen = np.random.default_rng(cfg.seed)
    results = {}
    for name, w in trajs:
        shifted = w if w.f[0] == 0 else T.translate(w, -w.f[0])
        ok = T.reroot(shifted, 0) == shifted
        s = int(gen.integers(0, w.n))
        r = T.reroot(w, s)
        ok &= bool(np.isclose(r.sigma, w.sigma))
        period = w.n - 1
        for _ in range(args.pairs):
            a, b = sorted(int(x) for x in gen.integers(0, max(period, 1), 2))
            d0 = pseudo_distance(w.h, a, b)
            d1 = pseudo_distance(r.h, (a - s) % max(period, 1), (b - s) % max(period, 1))
            ok &= bool(np.isclose(d0, d1))
        results[name] = bool(ok)
    passed = all(results.values())
    io.write_json(out / "reroot_report.json", {"passed": passed, "trajectories": results})
    print(f"re-rooting checks: {sum(results.values())}/{len(results)} trajectories pass")
    return EXIT_OK if passed else EXIT_FAIL


COMMANDS = {"sample": cmd_sample, "excursions": cmd_excursions,
            "exitprofile": cmd_exitprofile, "csbp": cmd_csbp, "verify": cmd_verify,
            "reroot-check": cmd_reroot_check}


# -- parsing ----------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--seed", type=int)
    common.add_argument("--replicas", type=int)
    common.add_argument("--grid-ds", dest="ds", type=float)
    common.add_argument("--output-dir", dest="output_dir")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="bsnake", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", parents=[common], help="sample trajectories")
    s.add_argument("--target", required=True, choices=[k.value for k in TargetKind])
    s.add_argument("--params", type=float, nargs="+")
    s.add_argument("--eps-ratio", type=float)
    s.add_argument("--out")

    e = sub.add_parser("excursions", parents=[common], help="excursions above the minimum")
    e.add_argument("--in", dest="inp", required=True)
    e.add_argument("--delta", type=float)
    e.add_argument("--beta", type=float)
    e.add_argument("--first-only", action="store_true")
    e.add_argument("--out")
    e.add_argument("--table", help="output file name inside --out (default records.csv)")

    x = sub.add_parser("exitprofile", parents=[common], help="exit-measure profiles")
    x.add_argument("--in", dest="inp", required=True)
    x.add_argument("--levels", required=True, help="a1:a2:step")
    x.add_argument("--eps", type=float)
    x.add_argument("--out")
    x.add_argument("--table", help="output file name inside --out (default profile.csv)")

    c = sub.add_parser("csbp", parents=[common], help="stable process and branching process")
    c.add_argument("--mode", required=True, choices=["levy", "csbp", "roundtrip", "check"])
    c.add_argument("--horizon", type=float, default=1.0)
    c.add_argument("--dtau", type=float, default=0.01)
    c.add_argument("--z0", type=float, default=1.0)
    c.add_argument("--out")

    v = sub.add_parser("verify", parents=[common], help="run an acceptance suite")
    v.add_argument("--suite", required=True, choices=sorted(V.SUITES))
    v.add_argument("--report")
    v.add_argument("--full", action="store_true", help="use the full acceptance sample sizes")
    v.add_argument("--out")

    r = sub.add_parser("reroot-check", parents=[common], help="re-rooting identities on files")
    r.add_argument("--in", dest="inp", required=True)
    r.add_argument("--pairs", type=int, default=50)
    r.add_argument("--out")
    return p


def run_pipeline(cfg, command, args):
    clock = StageClock()
    try:
        return COMMANDS[command](cfg, args, clock)
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArgumentError, SamplingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ArgumentError) else EXIT_FAIL


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if not args.verbose:
        warnings.simplefilter("ignore", RuntimeWarning)
    overrides = {k: getattr(args, k, None) for k in
                 ("seed", "replicas", "ds", "output_dir", "delta", "beta")}
    try:
        cfg = parse_config(args.config, overrides)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run_pipeline(cfg, args.command, args)


if __name__ == "__main__":
    sys.exit(main())
