"""JSON scenario files: parsing, defaults and error paths as JSON pointers."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigParseError, ConfigValidationError, ScenarioError
from .model import (
    DEFAULT_LAMBDA_B,
    OperatorParams,
    PathlossModel,
    Scenario,
    SharedParams,
    scenario_to_dict,
    validate_scenario,
)


@dataclass(frozen=True)
class SolverSettings:
    br_tol: float = 1e-6
    ne_tol: float = 1e-5
    max_iter: int = 100


@dataclass(frozen=True)
class MCSettings:
    trials: int = 10000
    window_m: float = 2000.0
    seed: int = 0


@dataclass(frozen=True)
class Config:
    scenario: Scenario
    solver: SolverSettings = field(default_factory=SolverSettings)
    mc: MCSettings = field(default_factory=MCSettings)


_OPERATOR_DEFAULTS = {
    "lambda_b": DEFAULT_LAMBDA_B,
    "lambda_c": DEFAULT_LAMBDA_B,
    "lambda_d": DEFAULT_LAMBDA_B,
    "tau": 0.3,
    "mu_d": 0.3,
    "eps_d_dbm": -75.0,
    "nu": 1.0,
}
_SHARED_DEFAULTS = {
    "lambda": 4 * DEFAULT_LAMBDA_B,
    "eps_dbm": -72.0,
    "d": 30.0,
    "pt_d_dbm": 20.0,
    "pt_c_dbm": 23.0,
    "noise_dbm": -104.0,
}
_PATHLOSS_DEFAULTS = {
    "pl_cellular": {"slope": 37.6, "intercept": 15.3},
    "pl_d2d": {"slope": 40.0, "intercept": 28.0},
}
_SOLVER_KEYS = {"br_tol": float, "ne_tol": float, "max_iter": int}
_MC_KEYS = {"trials": int, "window_m": float, "seed": int}
_TOP_KEYS = {"operators", "shared", "solver", "mc"}

# scenario field names -> JSON keys
_FIELD_TO_KEY = {"lam": "lambda", "slope_db_per_decade": "slope", "intercept_db": "intercept"}


def _object(value, pointer: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigValidationError(pointer or "/", "expected an object")
    return value


def _no_unknown(obj: dict, allowed, pointer: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigValidationError(f"{pointer}/{key}", "unknown key")


def _number(value, pointer: str, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigValidationError(pointer, f"expected a number, got {value!r}")
    if kind is int:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigValidationError(pointer, f"expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _merged(obj: dict, defaults: dict, pointer: str) -> dict:
    _no_unknown(obj, defaults, pointer)
    return {k: _number(obj.get(k, v), f"{pointer}/{k}") for k, v in defaults.items()}


def _pathloss(obj, name: str) -> PathlossModel:
    pointer = f"/shared/{name}"
    vals = _merged(_object(obj, pointer), _PATHLOSS_DEFAULTS[name], pointer)
    return PathlossModel(vals["slope"], vals["intercept"])


def _pointer_for(scenario_field: str) -> str:
    """'operators[0].tau' -> '/operators/0/tau'."""
    parts = []
    for token in scenario_field.split("."):
        m = re.fullmatch(r"(\w+)\[(\d+)\]", token)
        if m:
            parts += [m.group(1), m.group(2)]
        else:
            parts.append(_FIELD_TO_KEY.get(token, token))
    return "/" + "/".join(parts)


def config_from_dict(data) -> Config:
    data = _object(data, "")
    _no_unknown(data, _TOP_KEYS, "")

    ops_raw = data.get("operators", [{}, {}])
    if not isinstance(ops_raw, list) or len(ops_raw) != 2:
        raise ConfigValidationError("/operators", "expected an array of exactly two operators")
    operators = []
    for k, raw in enumerate(ops_raw):
        pointer = f"/operators/{k}"
        vals = _merged(_object(raw, pointer), _OPERATOR_DEFAULTS, pointer)
        operators.append(OperatorParams(id=k + 1, **vals))

    shared_raw = _object(data.get("shared", {}), "/shared")
    _no_unknown(shared_raw, {**_SHARED_DEFAULTS, **_PATHLOSS_DEFAULTS}, "/shared")
    scalars = {k: v for k, v in shared_raw.items() if k in _SHARED_DEFAULTS}
    sv = _merged(scalars, _SHARED_DEFAULTS, "/shared")
    shared = SharedParams(
        lam=sv["lambda"],
        eps_dbm=sv["eps_dbm"],
        d=sv["d"],
        pt_d_dbm=sv["pt_d_dbm"],
        pt_c_dbm=sv["pt_c_dbm"],
        noise_dbm=sv["noise_dbm"],
        pl_cellular=_pathloss(shared_raw.get("pl_cellular", {}), "pl_cellular"),
        pl_d2d=_pathloss(shared_raw.get("pl_d2d", {}), "pl_d2d"),
    )
    try:
        scenario = validate_scenario(operators, shared)
    except ScenarioError as exc:
        raise ConfigValidationError(_pointer_for(exc.field), str(exc)) from exc

    solver = _settings(data.get("solver", {}), _SOLVER_KEYS, SolverSettings, "/solver")
    mc = _settings(data.get("mc", {}), _MC_KEYS, MCSettings, "/mc")
    return Config(scenario, solver, mc)


def _settings(raw, keys: dict, cls, pointer: str):
    raw = _object(raw, pointer)
    _no_unknown(raw, keys, pointer)
    vals = {k: _number(v, f"{pointer}/{k}", keys[k]) for k, v in raw.items()}
    for k, v in vals.items():
        if v <= 0 and k != "seed":
            raise ConfigValidationError(f"{pointer}/{k}", f"must be positive, got {v}")
        if k == "seed" and v < 0:
            raise ConfigValidationError(f"{pointer}/{k}", f"must be non-negative, got {v}")
    return cls(**vals)


def load_config(path) -> Config:
    """Read, default-fill and validate a scenario file.

    Raises ConfigParseError for unreadable or non-JSON input and
    ConfigValidationError (with a JSON pointer) for anything else.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParseError(f"{path}: {exc}") from exc
    if not text.strip():
        raise ConfigParseError(f"{path}: empty file")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path}: {exc}") from exc
    return config_from_dict(data)


def config_to_dict(config: Config) -> dict:
    out = scenario_to_dict(config.scenario)
    out["solver"] = {"br_tol": config.solver.br_tol, "ne_tol": config.solver.ne_tol, "max_iter": config.solver.max_iter}
    out["mc"] = {"trials": config.mc.trials, "window_m": config.mc.window_m, "seed": config.mc.seed}
    return out


def bundled_scenario(name: str) -> Path:
    """Path of a scenario file shipped with the package, e.g. 'symmetric'."""
    return Path(str(resources.files("d2dshare") / "scenarios" / f"{name}.json"))
