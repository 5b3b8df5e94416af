"""Run configuration: defaults, a flat key=value file format, and validation.

File format (parsed with configparser)::

    # comments start with '#' or ';'
    seed = 7
    ds = 1e-4

    [excursions]
    delta = 0.5
    beta = 0.5

Section headers only group keys for readability; every key lives in one
flat namespace and may appear at most once.
"""
import configparser
import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import ArgumentError

OUTPUT_ENV = "BSNAKE_OUTPUT_DIR"
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    ds: float = 1e-4
    s_min: float = 0.01
    s_cap: float = 1600.0
    replicas: int = 64
    eps_exit: float = 0.1
    eps_boundary: float = 0.05
    delta: float = 0.5
    beta: float = 0.5
    output_dir: str = ""
    format: str = "csv"

    def __post_init__(self):
        if not self.output_dir:
            object.__setattr__(self, "output_dir", os.environ.get(OUTPUT_ENV, "bsnake_out"))
        if not (0 <= int(self.seed) < 2**64):
            raise ArgumentError("seed: must be a 64-bit unsigned integer")
        for name in ("ds", "s_min", "s_cap", "eps_exit", "eps_boundary", "delta", "beta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ArgumentError(f"{name}: must be a positive finite number, got {v!r}")
        if int(self.replicas) < 1:
            raise ArgumentError("replicas: must be at least 1")
        if not self.s_min < self.s_cap:
            raise ArgumentError("s_min: must be smaller than s_cap")
        if not self.eps_boundary < self.delta:
            raise ArgumentError("eps_boundary: must be smaller than delta")
        if self.format not in FORMATS:
            raise ArgumentError(f"format: must be one of {FORMATS}")

    @property
    def n_max(self):
        return int(round(self.s_cap / self.ds))

    def as_dict(self):
        return asdict(self)

    def digest(self):
        """Stable hash of every field except the output location."""
        d = self.as_dict()
        d.pop("output_dir")
        blob = json.dumps(d, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


_TYPES = {f.name: f.type for f in fields(SimConfig)}


def _coerce(key, raw):
    kind = _TYPES[key]
    try:
        if kind is int and isinstance(raw, str):
            return int(raw, 0)
        return kind(raw)
    except (TypeError, ValueError) as exc:
        raise ArgumentError(f"{key}: cannot parse {raw!r} as {kind.__name__}") from exc


def read_config_file(path):
    path = Path(path)
    if not path.is_file():
        raise ArgumentError(f"config file not found: {path}")
    parser = configparser.ConfigParser(
        strict=True, interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string("[__top__]\n" + path.read_text(), source=str(path))
    except configparser.Error as exc:
        raise ArgumentError(f"malformed config file {path}: {exc}") from exc
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            if key not in _TYPES:
                raise ArgumentError(f"unknown config key: {key}")
            if key in values:
                raise ArgumentError(f"duplicate config key: {key}")
            values[key] = raw
    return values


def parse_config(path=None, overrides=None):
    """Defaults, then the file (if any), then non-None overrides."""
    values = read_config_file(path) if path else {}
    for key, val in (overrides or {}).items():
        if key not in _TYPES:
            raise ArgumentError(f"unknown config key: {key}")
        if val is not None:
            values[key] = val
    return SimConfig(**{k: _coerce(k, v) for k, v in values.items()})


def with_overrides(cfg, **kw):
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
