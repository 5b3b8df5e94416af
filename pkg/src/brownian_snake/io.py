"""Trajectory files, CSV tables and run manifests.

A trajectory file is plain text::

    ds,dt,n
    0.0001,0.01,5
    h,f
    0,0
    0.01,-0.031...
    ...

The third line is the column header; every following row holds one grid
index. Values are written with 17 significant digits so reading a file back
reproduces the arrays bit for bit.
"""
import csv
import json
import subprocess
from pathlib import Path

import numpy as np

from .errors import MalformedInputError
from .tree_core import TreeLikePath

TRAJECTORY_GLOB = "replica_*.csv"


def trajectory_name(index):
    return f"replica_{index:05d}.csv"


def write_trajectory(path, tlp):
    path = Path(path)
    with path.open("w", newline="\n") as fh:
        fh.write("ds,dt,n\n")
        fh.write(f"{tlp.ds!r},{tlp.dt!r},{tlp.n}\n")
        fh.write("h,f\n")
        np.savetxt(fh, np.column_stack([tlp.h, tlp.f]), fmt="%.17g", delimiter=",")


def read_trajectory(path):
    path = Path(path)
    try:
        with path.open() as fh:
            if fh.readline().strip() != "ds,dt,n":
                raise MalformedInputError(f"{path}: missing 'ds,dt,n' header")
            ds_s, dt_s, n_s = fh.readline().strip().split(",")
            ds, dt, n = float(ds_s), float(dt_s), int(n_s)
            if fh.readline().strip() != "h,f":
                raise MalformedInputError(f"{path}: missing 'h,f' column header")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise MalformedInputError(f"{path}: {exc}") from exc
    if data.shape != (n, 2):
        raise MalformedInputError(f"{path}: expected {n} rows of (h, f), got {data.shape}")
    if not np.isclose(dt, np.sqrt(ds), rtol=1e-12, atol=0):
        raise MalformedInputError(f"{path}: dt must equal sqrt(ds)")
    return TreeLikePath.from_lifetime(data[:, 0], data[:, 1], ds)


def list_trajectories(directory):
    directory = Path(directory)
    if not directory.is_dir():
        raise MalformedInputError(f"input directory not found: {directory}")
    files = sorted(directory.glob(TRAJECTORY_GLOB))
    if not files:
        raise MalformedInputError(f"no trajectory files in {directory}")
    return files


def write_table(path, header, rows, config_hash):
    """CSV with a '# config_hash=...' comment line and a header row."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(f"# config_hash={config_hash}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def read_table(path):
    with Path(path).open() as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else str(x)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(path, obj):
    Path(path).write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def git_revision(cwd=None):
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"], cwd=cwd, capture_output=True,
                             text=True, timeout=5, check=True)
        return out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        return "unknown"
