"""Scenario configuration files.

The format is flat ``key = value`` text with dotted keys, ``#`` comments and
comma-separated lists::

    name = lz
    system.n = 2
    system.couplings = 0.2
    profile.kind = linear
    profile.alpha = 0.05
    grid.t0 = -400
    grid.t1 = 400
    grid.steps = 400000
    outputs = trajectory, adiabatic

A scan file lists scenario names under ``scenarios`` and prefixes every
scenario key with its name (``lz_slow.profile.alpha = 0.02``). Keys under
``defaults.`` are shared by all scenarios.

Everything is validated when the Scenario is built, before any run starts.
"""
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analytic import SineMode
from .dynamics import DRIFT_FLOOR, DRIFT_LIMIT, Method
from .errors import InputError
from .model import LevelSystem
from .numerics import TimeGrid
from .sweep import Linear, Sinusoidal, Tabulated

OUTPUTS = ("trajectory", "adiabatic", "figure1a", "figure1b", "triangular", "ms")

SECTION_KEYS = {
    "system": {"n", "offsets", "signs", "couplings", "hermiticity", "scaling"},
    "profile": {"kind", "alpha", "amplitude", "omega", "t0", "t1", "samples"},
    "grid": {"t0", "t1", "steps"},
    "integrator": {"method", "drift_tol"},
    "initial": {"level", "basis"},
    "figure1a": {"eps", "alpha_min", "alpha_max", "points"},
    "figure1b": {"eps", "amplitude", "omegas", "mode"},
    "ms": {"coupling_file", "detunings"},
}
TOP_KEYS = {"name", "outputs"}


def parse_text(text):
    """Flat dotted-key dictionary from config text."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise InputError(f"line {lineno}: empty key")
        if key in out:
            raise InputError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def read_config(path):
    try:
        return parse_text(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None


def _float(raw, key):
    try:
        v = float(raw)
    except ValueError:
        raise InputError(f"{key}: expected a number, got {raw!r}") from None
    if not math.isfinite(v):
        raise InputError(f"{key}: value must be finite")
    return v


def _int(raw, key):
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{key}: expected an integer, got {raw!r}") from None


def _floats(raw, key):
    items = [s.strip() for s in raw.split(",") if s.strip()]
    return [_float(s, key) for s in items]


def _words(raw):
    return [s.strip() for s in raw.split(",") if s.strip()]


@dataclass
class Scenario:
    name: str
    system: LevelSystem
    profile: object
    grid: TimeGrid
    method: Method = Method.RK4
    drift_tol: float = DRIFT_LIMIT
    initial_level: int = 0
    initial_basis: str = "diabatic"
    outputs: list = field(default_factory=lambda: ["trajectory"])
    figure1a: dict = field(default_factory=dict)
    figure1b: dict = field(default_factory=dict)
    ms: dict = field(default_factory=dict)
    echo: dict = field(default_factory=dict)


def _check_keys(cfg):
    for key in cfg:
        if key in TOP_KEYS:
            continue
        section, _, leaf = key.partition(".")
        if section not in SECTION_KEYS or leaf not in SECTION_KEYS[section]:
            raise InputError(f"unknown config key {key!r}")


def _profile(cfg):
    kind = cfg.get("profile.kind", "").lower()
    if kind == "linear":
        return Linear(_float(cfg.get("profile.alpha", "nan"), "profile.alpha"))
    if kind == "sinusoidal":
        return Sinusoidal(_float(cfg.get("profile.amplitude", "1"), "profile.amplitude"),
                          _float(cfg.get("profile.omega", "1"), "profile.omega"))
    if kind == "tabulated":
        samples = _floats(cfg.get("profile.samples", ""), "profile.samples")
        if len(samples) < 2:
            raise InputError("profile.samples: need at least two samples")
        grid = TimeGrid(_float(cfg.get("profile.t0", "nan"), "profile.t0"),
                        _float(cfg.get("profile.t1", "nan"), "profile.t1"), len(samples) - 1)
        return Tabulated(grid, np.array(samples))
    raise InputError(f"profile.kind must be linear, sinusoidal or tabulated, got {kind!r}")


def _system(cfg):
    couplings = _floats(cfg.get("system.couplings", ""), "system.couplings")
    if "system.n" in cfg:
        n = _int(cfg["system.n"], "system.n")
    else:
        n = len(couplings) + 1
    if n < 1:
        raise InputError(f"system.n must be >= 1, got {n}")
    if len(couplings) == 1 and n > 2:
        couplings = couplings * (n - 1)
    if n == 1 and not couplings:
        couplings = []
    kw = {}
    if "system.signs" in cfg:
        kw["signs"] = _floats(cfg["system.signs"], "system.signs")
    if "system.offsets" in cfg:
        kw["offsets"] = _floats(cfg["system.offsets"], "system.offsets")
    kw["hermiticity"] = cfg.get("system.hermiticity", "hermitian").lower()
    kw["scaling"] = cfg.get("system.scaling", "calibrated").lower()
    if len(couplings) != n - 1:
        raise InputError(f"system.couplings: expected {n - 1} values (or one shared), got {len(couplings)}")
    return LevelSystem.chain(n, np.array(couplings, dtype=float), **kw)


def build_scenario(cfg, name=None):
    """Validate a flat config dictionary into a Scenario."""
    _check_keys(cfg)
    name = name or cfg.get("name", "scenario")
    if not name or any(c in name for c in "/\\"):
        raise InputError(f"invalid scenario name {name!r}")
    system = _system(cfg)
    profile = _profile(cfg)
    for key in ("grid.t0", "grid.t1", "grid.steps"):
        if key not in cfg:
            raise InputError(f"missing required key {key!r}")
    grid = TimeGrid(_float(cfg["grid.t0"], "grid.t0"), _float(cfg["grid.t1"], "grid.t1"),
                    _int(cfg["grid.steps"], "grid.steps"))
    if isinstance(profile, Tabulated) and (grid.t0 < profile.grid.t0 or grid.t1 > profile.grid.t1):
        raise InputError("grid extends beyond the tabulated profile range")

    try:
        method = Method(cfg.get("integrator.method", "rk4").lower())
    except ValueError:
        raise InputError(f"integrator.method must be rk4 or midpoint, got {cfg['integrator.method']!r}") from None
    drift = _float(cfg.get("integrator.drift_tol", repr(DRIFT_LIMIT)), "integrator.drift_tol")
    if drift < DRIFT_FLOOR:
        raise InputError(f"integrator.drift_tol must be >= {DRIFT_FLOOR}, got {drift}")
    if method is Method.MIDPOINT and not system.is_hermitian:
        raise InputError("midpoint integrator requires system.hermiticity = hermitian")

    level = _int(cfg.get("initial.level", "1"), "initial.level")
    if not 1 <= level <= system.n:
        raise InputError(f"initial.level must be in 1..{system.n}, got {level}")
    basis = cfg.get("initial.basis", "diabatic").lower()
    if basis not in ("diabatic", "adiabatic"):
        raise InputError(f"initial.basis must be diabatic or adiabatic, got {basis!r}")

    outputs = _words(cfg.get("outputs", "trajectory"))
    for o in outputs:
        if o not in OUTPUTS:
            raise InputError(f"unknown output {o!r}; choose from {', '.join(OUTPUTS)}")
    if ("adiabatic" in outputs or basis == "adiabatic") and not system.is_hermitian:
        raise InputError("adiabatic output and initial basis need a Hermitian system")

    eps0 = float(system.couplings[0]) if system.n > 1 else 0.0
    fig1a = {
        "eps": _float(cfg.get("figure1a.eps", repr(eps0)), "figure1a.eps"),
        "alpha_min": _float(cfg.get("figure1a.alpha_min", "0.001"), "figure1a.alpha_min"),
        "alpha_max": _float(cfg.get("figure1a.alpha_max", "10"), "figure1a.alpha_max"),
        "points": _int(cfg.get("figure1a.points", "50"), "figure1a.points"),
    }
    if "figure1a" in outputs and not (0 < fig1a["alpha_min"] < fig1a["alpha_max"] and fig1a["points"] >= 2):
        raise InputError("figure1a: need 0 < alpha_min < alpha_max and points >= 2")
    amp = profile.amplitude if isinstance(profile, Sinusoidal) else 1.0
    fig1b = {
        "eps": _float(cfg.get("figure1b.eps", repr(eps0)), "figure1b.eps"),
        "amplitude": _float(cfg.get("figure1b.amplitude", repr(amp)), "figure1b.amplitude"),
        "omegas": _floats(cfg.get("figure1b.omegas", "1, 2"), "figure1b.omegas"),
        "mode": parse_sine_mode(cfg.get("figure1b.mode", "abs")),
    }
    if "figure1b" in outputs and (not fig1b["omegas"] or min(fig1b["omegas"]) <= 0 or fig1b["amplitude"] <= 0):
        raise InputError("figure1b: need positive amplitude and at least one positive omega")
    ms = {}
    if "ms" in outputs:
        from .fileio import read_matrix
        if "ms.coupling_file" not in cfg:
            raise InputError("ms output needs ms.coupling_file")
        ms["coupling"] = read_matrix(cfg["ms.coupling_file"])
        det = cfg.get("ms.detunings")
        ms["detunings"] = _floats(det, "ms.detunings") if det else None
        if ms["detunings"] is not None and len(ms["detunings"]) != ms["coupling"].shape[1]:
            raise InputError("ms.detunings length must equal the coupling column count")

    return Scenario(name, system, profile, grid, method, drift, level - 1, basis,
                    outputs, fig1a, fig1b, ms, echo=dict(cfg))


def parse_sine_mode(raw):
    raw = raw.strip().lower()
    aliases = {"abs": SineMode.ABS_RATE, "abs_rate": SineMode.ABS_RATE,
               "literal": SineMode.LITERAL_COS, "literal_cos": SineMode.LITERAL_COS}
    if raw not in aliases:
        raise InputError(f"mode must be abs or literal, got {raw!r}")
    return aliases[raw]


def split_scan(cfg):
    """Per-scenario flat dictionaries of a scan config, in listed order."""
    names = _words(cfg.get("scenarios", ""))
    if not names:
        raise InputError("scan config lists no scenarios")
    if len(set(names)) != len(names):
        raise InputError("duplicate scenario names")
    known = set(names) | {"defaults", "scenarios"}
    for key in cfg:
        head = key.split(".", 1)[0]
        if head not in known:
            raise InputError(f"key {key!r} does not belong to a listed scenario")
    shared = {k[len("defaults."):]: v for k, v in cfg.items() if k.startswith("defaults.")}
    out = []
    for name in names:
        own = {k[len(name) + 1:]: v for k, v in cfg.items() if k.startswith(name + ".")}
        merged = {**shared, **own}
        merged["name"] = name
        out.append((name, merged))
    return out
