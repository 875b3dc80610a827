"""Run configuration documents.

A run is described by one JSON object::

    {
      "command": "angle-scan",
      "mirror1": {"type": "perfect_polarizer", "sign": 1},
      "mirror2": {"type": "perfect_polarizer"},
      "gamma": 0.7853981633974483,
      "L": 1.0,
      "grid": {"start": -3.14159, "stop": 3.14159, "count": 97, "spacing": "linear"},
      "quadrature": {"rel_tol": 1e-10, "abs_tol": 1e-14, "max_subdivisions": 200},
      "units": "natural",
      "omega_p_ref_si": null,
      "output": "fig2.csv"
    }

Unknown keys are rejected at every level.  Mirror objects are tagged by
``type``:

============================  =============================================
``perfect_polarizer``         ``sign`` (+1 or -1, default +1)
``lossy``                     ``r``
``constant``                  ``r_x``, ``r_y``
``lorentz``                   ``x``, ``y``: resonances
``slab``                      ``x``, ``y``: resonances; ``thickness``
``tabulated``                 ``path`` (relative to the config) or ``samples``
============================  =============================================

A resonance is ``{"omega0": ..., "omega_p": ..., "inv_tau": 0.0}``, all in
units of the reference frequency.  ``mirror2`` defaults to a copy of
``mirror1``.
"""
from dataclasses import dataclass
import json
import math
import os

import numpy as np

from .errors import CasimirTorqueError, ConfigError
from .material import (
    ConstantPair,
    LorentzResonance,
    LorentzSlab,
    LossyPolarizer,
    PerfectPolarizer,
    SemiInfiniteLorentz,
    Tabulated,
    load_tabulated,
)
from .torque import CavityConfig, QuadratureSettings

COMMANDS = ("angle-scan", "distance-scan", "integrand-dump", "validate", "material-show")

DEFAULT_GRIDS = {
    "angle-scan": {"start": -math.pi, "stop": math.pi, "count": 97, "spacing": "linear"},
    "distance-scan": {"start": 0.01, "stop": 100.0, "count": 60, "spacing": "log"},
    "integrand-dump": {"start": 1e-3, "stop": 1e2, "count": 101, "spacing": "log"},
    "material-show": {"start": 1e-3, "stop": 1e2, "count": 101, "spacing": "log"},
    "validate": {"start": 1e-2, "stop": 10.0, "count": 20, "spacing": "log"},
}

_TOP_KEYS = {
    "command", "mirror1", "mirror2", "gamma", "L", "grid", "quadrature",
    "units", "omega_p_ref_si", "output",
}
_MIRROR_KEYS = {
    "perfect_polarizer": ({"sign"}, set()),
    "lossy": ({"r"}, {"r"}),
    "constant": ({"r_x", "r_y"}, {"r_x", "r_y"}),
    "lorentz": ({"x", "y"}, {"x", "y"}),
    "slab": ({"x", "y", "thickness"}, {"x", "y", "thickness"}),
    "tabulated": ({"path", "samples"}, set()),
}


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError("grid.count must be >= 1")
        if self.spacing not in ("linear", "log"):
            raise ConfigError("grid.spacing must be 'linear' or 'log'")
        if self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            raise ConfigError("grid: log spacing requires positive start and stop")

    def values(self):
        if self.count == 1:
            return np.array([float(self.start)])
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class RunConfig:
    """Validated run description.

    ``cavity`` is None only for the ``validate`` command run on its built-in
    suite.  ``resolved`` is the fully defaulted document without ``output``,
    echoed into output headers.
    """

    command: str
    cavity: CavityConfig
    grid: GridSpec
    quadrature: QuadratureSettings
    units: str
    omega_p_ref_si: float
    output: str
    resolved: dict


def _check_keys(obj, allowed, where, required=()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(map(repr, unknown))}")
    missing = sorted(set(required) - set(obj))
    if missing:
        raise ConfigError(f"{where}: missing key(s) {', '.join(map(repr, missing))}")


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite")
    return float(value)


def _resonance(obj, where):
    _check_keys(obj, {"omega0", "omega_p", "inv_tau"}, where, {"omega0", "omega_p"})
    return LorentzResonance(
        _number(obj["omega0"], f"{where}.omega0"),
        _number(obj["omega_p"], f"{where}.omega_p"),
        _number(obj.get("inv_tau", 0.0), f"{where}.inv_tau"),
    )


def _mirror(obj, where, base_dir):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    kind = obj.get("type")
    if kind not in _MIRROR_KEYS:
        raise ConfigError(
            f"{where}.type: expected one of {sorted(_MIRROR_KEYS)}, got {kind!r}"
        )
    allowed, required = _MIRROR_KEYS[kind]
    _check_keys(obj, allowed | {"type"}, where, required)
    if kind == "tabulated":
        return _tabulated(obj, where, base_dir)
    try:
        if kind == "perfect_polarizer":
            sign = obj.get("sign", 1)
            if sign not in (1, -1) or isinstance(sign, bool):
                raise ConfigError(f"{where}.sign: must be +1 or -1")
            return PerfectPolarizer(int(sign))
        if kind == "lossy":
            return LossyPolarizer(_number(obj["r"], f"{where}.r"))
        if kind == "constant":
            return ConstantPair(
                _number(obj["r_x"], f"{where}.r_x"), _number(obj["r_y"], f"{where}.r_y")
            )
        res_x = _resonance(obj["x"], f"{where}.x")
        res_y = _resonance(obj["y"], f"{where}.y")
        if kind == "lorentz":
            return SemiInfiniteLorentz(res_x, res_y)
        return LorentzSlab(res_x, res_y, _number(obj["thickness"], f"{where}.thickness"))
    except ConfigError:
        raise
    except CasimirTorqueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _tabulated(obj, where, base_dir):
    if ("path" in obj) == ("samples" in obj):
        raise ConfigError(f"{where}: give exactly one of 'path' or 'samples'")
    try:
        if "path" in obj:
            path = obj["path"]
            if not isinstance(path, str):
                raise ConfigError(f"{where}.path: expected a string")
            if base_dir and not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            return load_tabulated(path)
        rows = np.array(obj["samples"], dtype=float)
        if rows.ndim != 2 or rows.shape[1] != 3:
            raise ConfigError(f"{where}.samples: expected a list of [kappa, r_x, r_y]")
        return Tabulated(rows[:, 0], rows[:, 1], rows[:, 2])
    except (CasimirTorqueError, OSError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{where}: {exc}") from exc


def parse_config(document, base_dir=None, source="<config>"):
    """Parse and validate a JSON run document.

    Parameters
    ----------
    document : str or dict
        JSON text, or an already decoded object.
    base_dir : str, optional
        Directory against which relative table paths are resolved.
    source : str
        Name used in error messages.

    Raises
    ------
    ConfigError
        On malformed JSON (with line and column) or on any invalid field.
    """
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    else:
        doc = document
    _check_keys(doc, _TOP_KEYS, "config", {"command"})

    command = doc["command"]
    if command not in COMMANDS:
        raise ConfigError(f"config.command: expected one of {list(COMMANDS)}, got {command!r}")

    resolved = {"command": command}
    cavity = None
    if "mirror1" in doc:
        m1 = _mirror(doc["mirror1"], "config.mirror1", base_dir)
        m2_doc = doc.get("mirror2", doc["mirror1"])
        m2 = _mirror(m2_doc, "config.mirror2", base_dir)
        resolved["mirror1"] = doc["mirror1"]
        resolved["mirror2"] = m2_doc
    elif "mirror2" in doc:
        raise ConfigError("config.mirror2: given without mirror1")
    elif command != "validate":
        raise ConfigError(f"config: missing key 'mirror1' (required by {command})")

    gamma = _number(doc.get("gamma", math.pi / 4), "config.gamma")
    L = _number(doc.get("L", 1.0), "config.L")
    if not L > 0:
        raise ConfigError("config.L: must be > 0")
    resolved["gamma"] = gamma
    resolved["L"] = L
    if "mirror1" in doc:
        cavity = CavityConfig(L, gamma, m1, m2)

    grid_doc = dict(DEFAULT_GRIDS[command])
    if "grid" in doc:
        _check_keys(doc["grid"], {"start", "stop", "count", "spacing"}, "config.grid")
        grid_doc.update(doc["grid"])
    count = grid_doc["count"]
    if isinstance(count, bool) or not isinstance(count, int):
        raise ConfigError(f"config.grid.count: expected an integer, got {count!r}")
    grid = GridSpec(
        _number(grid_doc["start"], "config.grid.start"),
        _number(grid_doc["stop"], "config.grid.stop"),
        count,
        grid_doc["spacing"],
    )
    if command == "distance-scan" and not (grid.start > 0 and grid.stop > 0):
        raise ConfigError("config.grid: separations must be positive")
    resolved["grid"] = {
        "start": grid.start, "stop": grid.stop, "count": grid.count, "spacing": grid.spacing
    }

    quad_doc = {"rel_tol": 1e-10, "abs_tol": 1e-14, "max_subdivisions": 200}
    if "quadrature" in doc:
        _check_keys(doc["quadrature"], set(quad_doc), "config.quadrature")
        quad_doc.update(doc["quadrature"])
    max_sub = quad_doc["max_subdivisions"]
    if isinstance(max_sub, bool) or not isinstance(max_sub, int):
        raise ConfigError("config.quadrature.max_subdivisions: expected an integer")
    try:
        quad = QuadratureSettings(
            _number(quad_doc["rel_tol"], "config.quadrature.rel_tol"),
            _number(quad_doc["abs_tol"], "config.quadrature.abs_tol"),
            max_sub,
        )
    except CasimirTorqueError as exc:
        raise ConfigError(f"config.quadrature: {exc}") from exc
    resolved["quadrature"] = quad_doc

    units = doc.get("units", "natural")
    if units not in ("natural", "si"):
        raise ConfigError(f"config.units: expected 'natural' or 'si', got {units!r}")
    omega = doc.get("omega_p_ref_si")
    if omega is not None:
        omega = _number(omega, "config.omega_p_ref_si")
    if units == "si" and not (omega is not None and omega > 0):
        raise ConfigError("config.omega_p_ref_si: required and > 0 when units = 'si'")
    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("config.output: expected a string path")
    resolved.update(units=units, omega_p_ref_si=omega)

    return RunConfig(command, cavity, grid, quad, units, omega, output, resolved)
