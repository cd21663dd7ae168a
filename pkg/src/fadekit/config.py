"""Scenario configuration: parsing, validation, and chain construction.

Configs are TOML; every SNR-like quantity is given in dB and converted to
linear scale exactly once here (use ``gamma_th_db = -inf`` for a zero linear
threshold).  A previously written ``.meta.json`` file is also accepted: its
embedded ``config`` table is re-read, which makes runs reproducible from
their own metadata.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .channel import AlphaKappaMu, AlphaKappaMuExtreme
from .errors import ConfigError
from .metrics import Modulation, modulation
from .system import HopChain

__all__ = ["Scenario", "load_config", "db_to_linear"]

_METRICS = ("af", "op", "ber", "capacity")
_SCHEMES = ("ora", "opra", "cifr", "tifr", "all")
_MODELS = ("akm", "extreme")

_DEFAULTS = {
    "model": "akm",
    "gamma_th_db": 0.0,
    "metric": "op",
    "modulation": None,
    "m_ary": None,
    "capacity_scheme": None,
    "bandwidth": 1.0,
    "hops": [],
    "sweep": {"start_db": 0.0, "stop_db": 30.0, "points": 16, "ebn0_mode": False},
    "mc": {"enabled": False, "trials": 1_000_000, "seed": 0, "streams": 1},
    "asymptotic": {"enabled": False, "order": 10},
    "output": {"path": "out"},
}


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        where = f"{path}.{key}" if path else key
        if key not in out:
            raise ConfigError(f"unknown config field '{where}'")
        if isinstance(out[key], dict):
            if not isinstance(val, dict):
                raise ConfigError(f"field '{where}' must be a table")
            out[key] = _merge(out[key], val, where)
        else:
            out[key] = val
    return out


def _coerce_literal(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    """Apply key=value items with dotted paths (e.g. sweep.points=5)."""
    out = copy.deepcopy(raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override '{item}' is not of the form key=value")
        key, _, text = item.partition("=")
        parts = key.strip().split(".")
        node = out
        try:
            for part in parts[:-1]:
                if part.isdigit() and isinstance(node, list):
                    node = node[int(part)]
                else:
                    node = node.setdefault(part, {})
                if not isinstance(node, (dict, list)):
                    raise ConfigError(f"override path '{key}' crosses a scalar field")
            leaf = parts[-1]
            value = _coerce_literal(text.strip())
            if leaf.isdigit() and isinstance(node, list):
                node[int(leaf)] = value
            else:
                node[leaf] = value
        except (KeyError, IndexError, TypeError, AttributeError) as exc:
            raise ConfigError(f"override '{item}' does not match the config structure") from exc
    return out


def _require_number(cfg: dict, field: str, where: str) -> float:
    val = cfg.get(field)
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError(f"field '{where}.{field}' must be a number")
    return float(val)


@dataclass(frozen=True)
class Scenario:
    """Validated scenario; `resolved` is the full config dictionary."""

    resolved: dict

    @property
    def metric(self) -> str:
        return self.resolved["metric"]

    @property
    def capacity_scheme(self) -> str | None:
        return self.resolved["capacity_scheme"]

    @property
    def bandwidth(self) -> float:
        return float(self.resolved["bandwidth"])

    @property
    def gamma_th(self) -> float:
        return db_to_linear(float(self.resolved["gamma_th_db"]))

    @property
    def sweep_grid(self) -> list[float]:
        sw = self.resolved["sweep"]
        points = sw["points"]
        if points == 1:
            return [float(sw["start_db"])]
        start, stop = float(sw["start_db"]), float(sw["stop_db"])
        step = (stop - start) / (points - 1)
        return [start + i * step for i in range(points)]

    @property
    def mc(self) -> dict:
        return self.resolved["mc"]

    @property
    def asymptotic(self) -> dict:
        return self.resolved["asymptotic"]

    @property
    def output_path(self) -> str:
        return self.resolved["output"]["path"]

    def get_modulation(self) -> Modulation | None:
        name = self.resolved["modulation"]
        if name is None:
            return None
        return modulation(name, self.resolved["m_ary"])

    def chain_at(self, snr_db: float) -> HopChain:
        """Chain with every hop's SNR scale set from the sweep point."""
        level = db_to_linear(snr_db)
        ebn0_mode = bool(self.resolved["sweep"]["ebn0_mode"])
        hops = []
        for hop in self.resolved["hops"]:
            model = hop.get("model") or self.resolved["model"]
            if model == "akm":
                if ebn0_mode:
                    law = AlphaKappaMu.from_ebn0(hop["alpha"], hop["kappa"], hop["mu"], level)
                else:
                    law = AlphaKappaMu(hop["alpha"], hop["kappa"], hop["mu"], level)
            else:
                if ebn0_mode:
                    law = AlphaKappaMuExtreme.from_ebn0(hop["alpha"], hop["m"], level)
                else:
                    law = AlphaKappaMuExtreme(hop["alpha"], hop["m"], level)
            hops.append(law)
        return HopChain(tuple(hops), self.gamma_th)


def _validate(cfg: dict) -> None:
    if cfg["metric"] not in _METRICS:
        raise ConfigError(f"field 'metric' must be one of {_METRICS}, got '{cfg['metric']}'")
    if cfg["model"] not in _MODELS:
        raise ConfigError(f"field 'model' must be one of {_MODELS}, got '{cfg['model']}'")

    hops = cfg["hops"]
    if not isinstance(hops, list) or not hops:
        raise ConfigError("field 'hops' must be a non-empty array of tables")
    for i, hop in enumerate(hops):
        where = f"hops.{i}"
        if not isinstance(hop, dict):
            raise ConfigError(f"field '{where}' must be a table")
        model = hop.get("model", cfg["model"])
        if model not in _MODELS:
            raise ConfigError(f"field '{where}.model' must be one of {_MODELS}")
        needed = {"alpha", "kappa", "mu"} if model == "akm" else {"alpha", "m"}
        given = set(hop) - {"model"}
        if given != needed:
            raise ConfigError(
                f"hop '{where}' with model '{model}' needs exactly {sorted(needed)}, got {sorted(given)}"
            )
        for key in needed:
            if _require_number(hop, key, where) <= 0.0:
                raise ConfigError(f"field '{where}.{key}' must be positive")

    sw = cfg["sweep"]
    points = sw.get("points")
    if not isinstance(points, int) or points < 1:
        raise ConfigError("field 'sweep.points' must be an integer >= 1")
    start = _require_number(sw, "start_db", "sweep")
    stop = _require_number(sw, "stop_db", "sweep")
    if stop < start:
        raise ConfigError("field 'sweep.stop_db' must be >= 'sweep.start_db'")
    if not isinstance(sw.get("ebn0_mode"), bool):
        raise ConfigError("field 'sweep.ebn0_mode' must be a boolean")

    if cfg["metric"] == "ber":
        if not cfg["modulation"]:
            raise ConfigError("metric 'ber' requires field 'modulation'")
        try:
            modulation(cfg["modulation"], cfg["m_ary"])
        except Exception as exc:
            raise ConfigError(f"field 'modulation': {exc}") from exc
    if cfg["metric"] == "capacity":
        if cfg["capacity_scheme"] not in _SCHEMES:
            raise ConfigError(f"metric 'capacity' requires 'capacity_scheme' in {_SCHEMES}")

    mc = cfg["mc"]
    if not isinstance(mc.get("enabled"), bool):
        raise ConfigError("field 'mc.enabled' must be a boolean")
    if mc["enabled"]:
        if not isinstance(mc.get("trials"), int) or mc["trials"] < 1:
            raise ConfigError("field 'mc.trials' must be an integer >= 1")
        if not isinstance(mc.get("streams"), int) or mc["streams"] < 1:
            raise ConfigError("field 'mc.streams' must be an integer >= 1")
        if not isinstance(mc.get("seed"), int) or mc["seed"] < 0:
            raise ConfigError("field 'mc.seed' must be a non-negative integer")
        if cfg["metric"] == "capacity" and cfg["capacity_scheme"] != "ora":
            raise ConfigError("Monte Carlo corroboration of capacity supports scheme 'ora' only")

    asym = cfg["asymptotic"]
    if not isinstance(asym.get("enabled"), bool):
        raise ConfigError("field 'asymptotic.enabled' must be a boolean")
    if asym["enabled"]:
        if cfg["metric"] != "ber":
            raise ConfigError("asymptotic series applies to metric 'ber' only")
        if not isinstance(asym.get("order"), int) or asym["order"] < 1:
            raise ConfigError("field 'asymptotic.order' must be an integer >= 1")

    gamma_th_db = cfg["gamma_th_db"]
    if not isinstance(gamma_th_db, (int, float)) or isinstance(gamma_th_db, bool):
        raise ConfigError("field 'gamma_th_db' must be a number (-inf allowed)")
    if math.isnan(float(gamma_th_db)) or float(gamma_th_db) == math.inf:
        raise ConfigError("field 'gamma_th_db' must be finite or -inf")

    if _require_number(cfg, "bandwidth", "") <= 0.0:
        raise ConfigError("field 'bandwidth' must be positive")
    if not isinstance(cfg["output"].get("path"), str) or not cfg["output"]["path"]:
        raise ConfigError("field 'output.path' must be a non-empty string")


def load_config(path: str | Path, overrides: list[str] | None = None) -> Scenario:
    """Read, override, validate; raises ConfigError with field diagnostics."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        if path.suffix == ".json":
            raw = json.loads(path.read_text())
            if "config" in raw:  # a .meta.json written by a previous run
                raw = raw["config"]
        else:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if overrides:
        raw = apply_overrides(raw, overrides)
    try:
        resolved = _merge(_DEFAULTS, raw)
    except ConfigError:
        raise
    _validate(resolved)
    return Scenario(resolved)
