"""
INI experiment configs.

Sections and keys (unknown sections or keys are errors)::

    [signal]   kind = sinc | exponential | tabulated
               P, P_list, W, alpha, table
    [noise]    kind = awgn | sinc | exponential | tabulated
               n0, P, W, alpha, table
    [window]   T, T_list
    [compute]  n, n_list, K, mode = analytic | nystrom, nystrom_n,
               units = nats | bits, tol, max_terms
    [expect]   monotone, exceed, verified       (booleans)

``*_list`` values are comma separated. ``table`` names a two-column CSV
file of ``tau, R(tau)`` pairs, relative to the config file.
"""

from __future__ import annotations

import configparser
import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, FiniteMIError
from .kernels import AWGN, ExponentialKernel, SincKernel, TabulatedKernel

__all__ = ["ExperimentConfig", "load_config", "parse_config", "preset_path", "PRESETS"]

PRESETS = ("fig1", "fig2", "fig3", "theorem")

_SCHEMA = {
    "signal": {"kind", "p", "p_list", "w", "alpha", "table"},
    "noise": {"kind", "n0", "p", "w", "alpha", "table"},
    "window": {"t", "t_list"},
    "compute": {"n", "n_list", "k", "mode", "nystrom_n", "units", "tol", "max_terms"},
    "expect": {"monotone", "exceed", "verified"},
}


@dataclass
class ExperimentConfig:
    signal: object = None
    signal_powers: list = field(default_factory=list)
    noise: object = None
    T_values: list = field(default_factory=list)
    n_values: list = field(default_factory=list)
    K: int | None = None
    mode: str = "analytic"
    nystrom_n: int = 800
    units: str = "nats"
    tol: float = 1e-8
    max_terms: int = 2**20
    expect: dict = field(default_factory=dict)
    source: str = "<string>"


def preset_path(name):
    return resources.files("finitemi") / "presets" / f"{name}.ini"


def _number(section, key, raw, *, positive=True, allow_zero=False, integer=False):
    where = f"{section}.{key}"
    try:
        value = int(raw) if integer else float(raw)
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite, got {raw!r}")
    if positive and (value < 0 or (value == 0 and not allow_zero)):
        bound = ">= 0" if allow_zero else "> 0"
        raise ConfigError(f"{where}: must be {bound}, got {raw!r}")
    return value


def _list(section, key, raw, **kw):
    items = [s.strip() for s in raw.split(",") if s.strip()]
    if not items:
        raise ConfigError(f"{section}.{key}: empty list")
    return [_number(section, key, s, **kw) for s in items]


def _bool(section, key, raw):
    v = raw.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{section}.{key}: expected a boolean, got {raw!r}")


def _read_table(section, path, base):
    path = Path(path)
    if not path.is_absolute() and base is not None:
        path = base / path
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise ConfigError(f"{section}.table: cannot read {path}: {exc}") from None
    try:
        data = np.array([[float(a), float(b)] for a, b in rows if a.strip() != "tau"])
    except ValueError:
        raise ConfigError(f"{section}.table: rows must be 'tau,R' number pairs") from None
    return data[:, 0], data[:, 1]


def _kernel(section, sec, base, *, P=None):
    kind = sec.get("kind")
    if kind is None:
        raise ConfigError(f"{section}.kind: missing")
    kind = kind.strip().lower()

    def need(key, **kw):
        if key not in sec:
            raise ConfigError(f"{section}.{key}: required for kind={kind}")
        return _number(section, key, sec[key], **kw)

    try:
        if kind == "awgn":
            if section != "noise":
                raise ConfigError(f"{section}.kind: awgn is only valid for noise")
            return AWGN(need("n0"))
        if kind == "sinc":
            power = P if P is not None else need("p", allow_zero=True)
            return SincKernel(power, need("w"))
        if kind == "exponential":
            power = P if P is not None else need("p", allow_zero=True)
            return ExponentialKernel(power, need("alpha"))
        if kind == "tabulated":
            if "table" not in sec:
                raise ConfigError(f"{section}.table: required for kind=tabulated")
            return TabulatedKernel(*_read_table(section, sec["table"], base))
    except FiniteMIError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{section}: {exc}") from None
    raise ConfigError(f"{section}.kind: unknown kernel kind {kind!r}")


def parse_config(text, source="<string>", base=None):
    """Parse INI text into an :class:`ExperimentConfig`."""
    cp = configparser.ConfigParser(strict=True, interpolation=None)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None

    for name in cp.sections():
        if name not in _SCHEMA:
            raise ConfigError(f"{source}: unknown section [{name}]")
        extra = set(cp[name]) - _SCHEMA[name]
        if extra:
            raise ConfigError(f"{source}: unknown key {name}.{sorted(extra)[0]}")

    cfg = ExperimentConfig(source=source)
    if cp.has_section("signal"):
        sec = cp["signal"]
        if "p_list" in sec:
            cfg.signal_powers = _list("signal", "P_list", sec["p_list"], allow_zero=True)
            cfg.signal = _kernel("signal", sec, base, P=cfg.signal_powers[0])
        else:
            cfg.signal = _kernel("signal", sec, base)
            cfg.signal_powers = [cfg.signal.power]
    if cp.has_section("noise"):
        cfg.noise = _kernel("noise", cp["noise"], base)

    if cp.has_section("window"):
        sec = cp["window"]
        if "t" in sec and "t_list" in sec:
            raise ConfigError("window: give either T or T_list, not both")
        if "t" in sec:
            cfg.T_values = [_number("window", "T", sec["t"])]
        elif "t_list" in sec:
            cfg.T_values = _list("window", "T_list", sec["t_list"])

    if cp.has_section("compute"):
        sec = cp["compute"]
        if "n" in sec and "n_list" in sec:
            raise ConfigError("compute: give either n or n_list, not both")
        if "n" in sec:
            cfg.n_values = [_number("compute", "n", sec["n"], integer=True)]
        elif "n_list" in sec:
            cfg.n_values = _list("compute", "n_list", sec["n_list"], integer=True)
        if "k" in sec:
            cfg.K = _number("compute", "K", sec["k"], integer=True)
        if "mode" in sec:
            cfg.mode = sec["mode"].strip().lower()
            if cfg.mode not in ("analytic", "nystrom"):
                raise ConfigError(f"compute.mode: expected analytic or nystrom, got {cfg.mode!r}")
        if "nystrom_n" in sec:
            cfg.nystrom_n = _number("compute", "nystrom_n", sec["nystrom_n"], integer=True)
        if "units" in sec:
            cfg.units = sec["units"].strip().lower()
            if cfg.units not in ("nats", "bits"):
                raise ConfigError(f"compute.units: expected nats or bits, got {cfg.units!r}")
        if "tol" in sec:
            cfg.tol = _number("compute", "tol", sec["tol"])
        if "max_terms" in sec:
            cfg.max_terms = _number("compute", "max_terms", sec["max_terms"], integer=True)

    if cp.has_section("expect"):
        cfg.expect = {k: _bool("expect", k, v) for k, v in cp["expect"].items()}
    return cfg


def load_config(path_or_preset):
    """Load a config file, or a bundled preset by name (``fig1``, ``fig2``, ...)."""
    if str(path_or_preset) in PRESETS:
        res = preset_path(path_or_preset)
        return parse_config(res.read_text(), source=f"preset:{path_or_preset}")
    path = Path(path_or_preset)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, source=str(path), base=path.parent)
