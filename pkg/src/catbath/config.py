"""Device configuration: YAML ingestion, validation, unit conversion.

Files carry linear frequencies in MHz and times in ns; everything is
converted to angular rad/s and seconds on load.  Validation errors
name the offending field by its path (e.g. ``scenario.dt_ns``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import yaml

from .floquet import FloquetParams

__all__ = [
    "ConfigError",
    "QubitConfig",
    "WignerGridConfig",
    "ScenarioConfig",
    "DeviceConfig",
    "load_config",
    "MHZ",
    "NS",
]

MHZ = 2.0 * math.pi * 1e6  # linear MHz -> angular rad/s
NS = 1e-9


class ConfigError(ValueError):
    """Invalid configuration; message names the field path."""


@dataclass(frozen=True)
class QubitConfig:
    name: str
    xi_MHz: float
    eps_MHz: float
    nu_MHz: float
    delta_MHz: float = 0.0
    K_MHz: float = 0.0

    def floquet_params(self, omega_s_MHz: float = 0.0) -> FloquetParams:
        return FloquetParams(
            xi=self.xi_MHz * MHZ,
            eps=self.eps_MHz * MHZ,
            nu=self.nu_MHz * MHZ,
            delta=self.delta_MHz * MHZ,
            K=self.K_MHz * MHZ,
            omega_s=omega_s_MHz * MHZ,
            name=self.name,
        )


@dataclass(frozen=True)
class WignerGridConfig:
    re_min: float = -1.5
    re_max: float = 4.5
    re_points: int = 121
    im_min: float = -2.5
    im_max: float = 2.5
    im_points: int = 101

    def grids(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.re_min, self.re_max, self.re_points),
            np.linspace(self.im_min, self.im_max, self.im_points),
        )


@dataclass(frozen=True)
class ScenarioConfig:
    alpha: float = 3.3
    n_qubits: int = 1
    t_max_ns: float = 80.0
    dt_ns: float = 0.2
    wigner_grid: WignerGridConfig = field(default_factory=WignerGridConfig)


@dataclass(frozen=True)
class DeviceConfig:
    omega_s_MHz: float
    cutoff: int
    qubits: tuple[QubitConfig, ...]
    scenario: ScenarioConfig
    ancilla_xi_MHz: float = 19.8


def _need(mapping, key, path, kind):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ConfigError(f"{path}.{key}: missing required field")
    value = mapping[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"{path}.{key}: expected an integer, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{path}.{key}: expected a string, got {value!r}")
        return value
    raise AssertionError(kind)


def _opt(mapping, key, path, kind, default):
    if not isinstance(mapping, dict) or key not in mapping:
        return default
    return _need(mapping, key, path, kind)


def parse_config(data: dict) -> DeviceConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root: expected a mapping")
    res = data.get("resonator")
    if not isinstance(res, dict):
        raise ConfigError("resonator: missing required section")
    omega_s = _need(res, "omega_s_MHz", "resonator", float)
    cutoff = _need(res, "cutoff", "resonator", int)
    if cutoff < 2:
        raise ConfigError("resonator.cutoff: must be at least 2")

    raw_qubits = data.get("qubits")
    if not isinstance(raw_qubits, list) or not raw_qubits:
        raise ConfigError("qubits: expected a nonempty list")
    qubits = []
    for i, q in enumerate(raw_qubits):
        path = f"qubits[{i}]"
        if not isinstance(q, dict):
            raise ConfigError(f"{path}: expected a mapping")
        qc = QubitConfig(
            name=_need(q, "name", path, str),
            xi_MHz=_need(q, "xi_MHz", path, float),
            eps_MHz=_need(q, "eps_MHz", path, float),
            nu_MHz=_need(q, "nu_MHz", path, float),
            delta_MHz=_opt(q, "delta_MHz", path, float, 0.0),
            K_MHz=_opt(q, "K_MHz", path, float, 0.0),
        )
        if qc.nu_MHz <= 0:
            raise ConfigError(f"{path}.nu_MHz: must be positive")
        qubits.append(qc)

    sc = data.get("scenario", {})
    if not isinstance(sc, dict):
        raise ConfigError("scenario: expected a mapping")
    wg_raw = sc.get("wigner_grid", {})
    if not isinstance(wg_raw, dict):
        raise ConfigError("scenario.wigner_grid: expected a mapping")
    wpath = "scenario.wigner_grid"
    wg = WignerGridConfig(
        re_min=_opt(wg_raw, "re_min", wpath, float, -1.5),
        re_max=_opt(wg_raw, "re_max", wpath, float, 4.5),
        re_points=_opt(wg_raw, "re_points", wpath, int, 121),
        im_min=_opt(wg_raw, "im_min", wpath, float, -2.5),
        im_max=_opt(wg_raw, "im_max", wpath, float, 2.5),
        im_points=_opt(wg_raw, "im_points", wpath, int, 101),
    )
    if wg.re_points < 1 or wg.im_points < 1:
        raise ConfigError("scenario.wigner_grid: point counts must be positive")
    scenario = ScenarioConfig(
        alpha=_opt(sc, "alpha", "scenario", float, 3.3),
        n_qubits=_opt(sc, "n_qubits", "scenario", int, 1),
        t_max_ns=_opt(sc, "t_max_ns", "scenario", float, 80.0),
        dt_ns=_opt(sc, "dt_ns", "scenario", float, 0.2),
        wigner_grid=wg,
    )
    if scenario.dt_ns <= 0:
        raise ConfigError("scenario.dt_ns: must be positive")
    if scenario.t_max_ns <= 0:
        raise ConfigError("scenario.t_max_ns: must be positive")
    if not 1 <= scenario.n_qubits <= len(qubits):
        raise ConfigError(
            f"scenario.n_qubits: must be between 1 and the {len(qubits)} configured qubits"
        )

    ancilla_xi = 19.8
    anc = data.get("ancilla")
    if anc is not None:
        if not isinstance(anc, dict):
            raise ConfigError("ancilla: expected a mapping")
        ancilla_xi = _opt(anc, "xi_MHz", "ancilla", float, 19.8)
    if ancilla_xi <= 0:
        raise ConfigError("ancilla.xi_MHz: must be positive")

    return DeviceConfig(
        omega_s_MHz=omega_s,
        cutoff=cutoff,
        qubits=tuple(qubits),
        scenario=scenario,
        ancilla_xi_MHz=ancilla_xi,
    )


def load_config(path: str) -> DeviceConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config root: not valid YAML ({exc})") from exc
    return parse_config(data)
