"""Scenario files: loading, validation, resolution and the reproducibility
echo.

A scenario is one YAML document describing the constellation, the RIS
deployment region, the signal paths, transmit power, the sweep to run and
Monte Carlo options. Randomized per-RIS exponents are drawn once at
resolution time from a recorded sub-seed; the resolved echo pins the drawn
values so a re-run reproduces the outputs bit for bit.

Kilometers and dBm appear only here; everything downstream runs on meters
and linear ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .channel import DirectPath, LinkConfig, RisLink
from .errors import ConfigError
from .fading import KappaMuParams
from .geometry import Constellation, CylinderGeometry
from .montecarlo import SimOptions

__all__ = [
    "ScenarioConfig",
    "SweepSpec",
    "OutputSpec",
    "load_scenario",
    "parse_scenario",
    "resolved_mapping",
    "SWEEP_VARIABLES",
]

SWEEP_VARIABLES = ("rho_th", "rho0", "N", "L", "R0", "H")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    grid: tuple[float, ...]


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    format: str = "csv"


@dataclass(frozen=True)
class ScenarioConfig:
    constellation: Constellation
    geometry: CylinderGeometry
    links: LinkConfig
    symbol_energy_w: float
    noise_dbm: float
    coverage_threshold_db: float
    sweep: SweepSpec
    mc_enabled: bool
    mc: SimOptions
    output: OutputSpec
    exponent_seed: int | None = None
    exponent_range: tuple[float, float] | None = None

    @property
    def rho0(self) -> float:
        return self.links.transmit_snr

    @property
    def rho0_db(self) -> float:
        return 10.0 * math.log10(self.rho0)


_SENTINEL = object()


def _get(mapping: dict, path: str, default=_SENTINEL):
    node: Any = mapping
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            if default is _SENTINEL:
                raise ConfigError(f"{path}: required field is missing")
            return default
        node = node[part]
    return node


def _number(mapping: dict, path: str, *, default=None, minimum=None,
            strict_min=None, maximum=None) -> float:
    val = _get(mapping, path) if default is None else _get(mapping, path, default)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {val!r}")
    v = float(val)
    if minimum is not None and v < minimum:
        raise ConfigError(f"{path}: must be >= {minimum}, got {v}")
    if strict_min is not None and v <= strict_min:
        raise ConfigError(f"{path}: must be > {strict_min}, got {v}")
    if maximum is not None and v > maximum:
        raise ConfigError(f"{path}: must be <= {maximum}, got {v}")
    return v


def _integer(mapping: dict, path: str, *, default=None, minimum=None) -> int:
    val = _get(mapping, path) if default is None else _get(mapping, path, default)
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"{path}: expected an integer, got {val!r}")
    if minimum is not None and val < minimum:
        raise ConfigError(f"{path}: must be >= {minimum}, got {val}")
    return val


def _boolean(mapping: dict, path: str, default: bool) -> bool:
    val = _get(mapping, path, default)
    if not isinstance(val, bool):
        raise ConfigError(f"{path}: expected true/false, got {val!r}")
    return val


def _per_ris_values(raw, count: int, path: str):
    """Expand a scalar template or validate an explicit per-RIS list."""
    if isinstance(raw, list):
        if len(raw) != count:
            raise ConfigError(f"{path}: list length {len(raw)} != ris.count {count}")
        return list(raw), False
    return [raw] * count, True


def _fading_params(node, path: str) -> KappaMuParams:
    if not isinstance(node, dict):
        raise ConfigError(f"{path}: expected a mapping with kappa and mu")
    kappa = _number(node, "kappa", minimum=0.0)
    mu = _number(node, "mu", strict_min=0.0)
    return KappaMuParams(kappa=kappa, mu=mu)


def _resolve_user_exponents(node, count: int, path: str):
    """Explicit value(s), or a {low, high, seed} range drawn once.

    Returns (values, seed_used_or_None, range_or_None).
    """
    if isinstance(node, dict):
        low = _number(node, "low", minimum=2.0)
        high = _number(node, "high", minimum=low)
        seed = _integer(node, "seed", minimum=0)
        rng = np.random.default_rng(seed)
        values = (low + (high - low) * rng.random(count)).tolist()
        return values, seed, (low, high)
    values, _ = _per_ris_values(node, count, path)
    out = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{path}[{i}]: expected a number, got {v!r}")
        if v < 2.0:
            raise ConfigError(f"{path}[{i}]: path-loss exponent must be >= 2, got {v}")
        out.append(float(v))
    return out, None, None


def parse_scenario(raw: dict) -> ScenarioConfig:
    """Validate a parsed YAML mapping and build the typed scenario."""
    if not isinstance(raw, dict):
        raise ConfigError("top level: expected a mapping of sections")

    con = Constellation(
        satellites=_integer(raw, "constellation.satellites", minimum=1),
        altitude=_number(raw, "constellation.altitude_km", strict_min=0.0) * 1000.0,
        earth_radius=_number(raw, "constellation.earth_radius_km",
                             default=6371.0, strict_min=0.0) * 1000.0,
    )
    try:
        geom = CylinderGeometry(
            base_radius=_number(raw, "geometry.base_radius_m", strict_min=0.0),
            height=_number(raw, "geometry.height_m", default=0.0, minimum=0.0),
            inner_radius=_number(raw, "geometry.inner_radius_m", default=0.0, minimum=0.0),
        )
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"geometry: {exc}") from exc

    count = _integer(raw, "ris.count", minimum=0)
    exponent_seed = None
    exponent_range = None
    ris_links: tuple[RisLink, ...] = ()
    if count > 0:
        elements_raw = _get(raw, "ris.elements")
        elements, _ = _per_ris_values(elements_raw, count, "ris.elements")
        for i, e in enumerate(elements):
            if isinstance(e, bool) or not isinstance(e, int) or e < 1:
                raise ConfigError(f"ris.elements[{i}]: expected an integer >= 1, got {e!r}")
        sat_fading_raw = _get(raw, "ris.sat_fading")
        sat_fadings, _ = _per_ris_values(sat_fading_raw, count, "ris.sat_fading")
        user_fading_raw = _get(raw, "ris.user_fading")
        user_fadings, _ = _per_ris_values(user_fading_raw, count, "ris.user_fading")
        sat_exp_raw = _get(raw, "ris.sat_exponent")
        sat_exps, _ = _per_ris_values(sat_exp_raw, count, "ris.sat_exponent")
        for i, v in enumerate(sat_exps):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or v < 2.0:
                raise ConfigError(f"ris.sat_exponent[{i}]: must be a number >= 2, got {v!r}")
        user_exps, exponent_seed, exponent_range = _resolve_user_exponents(
            _get(raw, "ris.user_exponent"), count, "ris.user_exponent")
        ris_links = tuple(
            RisLink(
                elements=int(elements[i]),
                sat_fading=_fading_params(sat_fadings[i], f"ris.sat_fading[{i}]"),
                user_fading=_fading_params(user_fadings[i], f"ris.user_fading[{i}]"),
                sat_exponent=float(sat_exps[i]),
                user_exponent=float(user_exps[i]),
            )
            for i in range(count)
        )

    direct = DirectPath(
        enabled=_boolean(raw, "direct_path.enabled", True),
        fading=KappaMuParams(
            kappa=_number(raw, "direct_path.kappa", default=0.0, minimum=0.0),
            mu=_number(raw, "direct_path.mu", default=1.0, strict_min=0.0),
        ),
        exponent=_number(raw, "direct_path.exponent", default=2.0, minimum=2.0),
    )

    symbol_energy = _number(raw, "power.symbol_energy_w", strict_min=0.0)
    noise_dbm = _number(raw, "power.noise_dbm")
    rho0 = symbol_energy / dbm_to_watts(noise_dbm)
    links = LinkConfig(ris=ris_links, direct=direct, transmit_snr=rho0)

    coverage_threshold_db = _number(raw, "metrics.coverage_threshold_db", default=20.0)

    sweep_node = _get(raw, "sweep")
    if not isinstance(sweep_node, dict):
        raise ConfigError("sweep: expected a mapping with variable and grid")
    variable = _get(raw, "sweep.variable")
    if variable not in SWEEP_VARIABLES:
        raise ConfigError(
            f"sweep.variable: must be one of {', '.join(SWEEP_VARIABLES)}, got {variable!r}")
    grid = parse_grid(_get(raw, "sweep.grid"), "sweep.grid")
    _validate_grid(variable, grid, "sweep.grid")

    mc_enabled = _boolean(raw, "monte_carlo.enabled", False)
    mc = SimOptions(
        trials=_integer(raw, "monte_carlo.trials", default=100_000, minimum=1),
        seed=_integer(raw, "monte_carlo.seed", default=0, minimum=0),
        workers=_integer(raw, "monte_carlo.workers", default=1, minimum=1),
        exact_per_ris_sat_distance=_boolean(raw, "monte_carlo.exact_per_ris_sat_distance", False),
        fixed_ris_positions=_boolean(raw, "monte_carlo.fixed_ris_positions", False),
    )

    fmt = _get(raw, "output.format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format: must be csv or json, got {fmt!r}")
    output = OutputSpec(directory=str(_get(raw, "output.directory", "out")), format=fmt)

    return ScenarioConfig(
        constellation=con,
        geometry=geom,
        links=links,
        symbol_energy_w=symbol_energy,
        noise_dbm=noise_dbm,
        coverage_threshold_db=coverage_threshold_db,
        sweep=SweepSpec(variable=variable, grid=grid),
        mc_enabled=mc_enabled,
        mc=mc,
        output=output,
        exponent_seed=exponent_seed,
        exponent_range=exponent_range,
    )


def parse_grid(node, path: str) -> tuple[float, ...]:
    """Grid spec: explicit list, or {start, stop, points} for a linspace,
    or the CLI string forms 'a,b,c' and 'start:stop:points'."""
    if isinstance(node, str):
        if ":" in node:
            bits = node.split(":")
            if len(bits) != 3:
                raise ConfigError(f"{path}: expected start:stop:points, got {node!r}")
            try:
                start, stop, points = float(bits[0]), float(bits[1]), int(bits[2])
            except ValueError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
            node = {"start": start, "stop": stop, "points": points}
        else:
            try:
                return tuple(float(v) for v in node.split(","))
            except ValueError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
    if isinstance(node, dict):
        start = _number(node, "start")
        stop = _number(node, "stop")
        points = _integer(node, "points", minimum=1)
        return tuple(np.linspace(start, stop, points).tolist())
    if isinstance(node, list):
        out = []
        for i, v in enumerate(node):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"{path}[{i}]: expected a number, got {v!r}")
            out.append(float(v))
        if not out:
            raise ConfigError(f"{path}: grid must not be empty")
        return tuple(out)
    raise ConfigError(f"{path}: expected a list, a start/stop/points mapping, "
                      f"or a grid string, got {node!r}")


def _validate_grid(variable: str, grid: tuple[float, ...], path: str) -> None:
    if not grid:
        raise ConfigError(f"{path}: grid must not be empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"{path}: grid must be sorted ascending")
    if variable in ("N", "L"):
        for v in grid:
            if v != int(v) or v < (0 if variable == "N" else 1):
                raise ConfigError(f"{path}: {variable} grid needs nonnegative integers, got {v}")
    if variable in ("R0", "H") and any(v < 0 or (variable == "R0" and v == 0) for v in grid):
        raise ConfigError(f"{path}: {variable} grid values must be positive")


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Load and validate a scenario YAML file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    return parse_scenario(raw)


def resolved_mapping(cfg: ScenarioConfig) -> dict:
    """Fully resolved scenario as a plain mapping: drawn exponents pinned
    as explicit lists, the draw seed recorded, units as in the input
    schema. Re-loading this mapping reproduces the run bit for bit."""
    ris: dict[str, Any] = {"count": len(cfg.links.ris)}
    if cfg.links.ris:
        ris.update({
            "elements": [link.elements for link in cfg.links.ris],
            "sat_fading": [{"kappa": link.sat_fading.kappa, "mu": link.sat_fading.mu}
                           for link in cfg.links.ris],
            "user_fading": [{"kappa": link.user_fading.kappa, "mu": link.user_fading.mu}
                            for link in cfg.links.ris],
            "sat_exponent": [link.sat_exponent for link in cfg.links.ris],
            "user_exponent": [link.user_exponent for link in cfg.links.ris],
        })
    mapping = {
        "constellation": {
            "satellites": cfg.constellation.satellites,
            "altitude_km": cfg.constellation.altitude / 1000.0,
            "earth_radius_km": cfg.constellation.earth_radius / 1000.0,
        },
        "geometry": {
            "base_radius_m": cfg.geometry.base_radius,
            "height_m": cfg.geometry.height,
            "inner_radius_m": cfg.geometry.inner_radius,
        },
        "ris": ris,
        "direct_path": {
            "enabled": cfg.links.direct.enabled,
            "kappa": cfg.links.direct.fading.kappa,
            "mu": cfg.links.direct.fading.mu,
            "exponent": cfg.links.direct.exponent,
        },
        "power": {
            "symbol_energy_w": cfg.symbol_energy_w,
            "noise_dbm": cfg.noise_dbm,
        },
        "metrics": {"coverage_threshold_db": cfg.coverage_threshold_db},
        "sweep": {"variable": cfg.sweep.variable, "grid": list(cfg.sweep.grid)},
        "monte_carlo": {
            "enabled": cfg.mc_enabled,
            "trials": cfg.mc.trials,
            "seed": cfg.mc.seed,
            "workers": cfg.mc.workers,
            "exact_per_ris_sat_distance": cfg.mc.exact_per_ris_sat_distance,
            "fixed_ris_positions": cfg.mc.fixed_ris_positions,
        },
        "output": {"directory": cfg.output.directory, "format": cfg.output.format},
        "resolved": {
            "transmit_snr_db": cfg.rho0_db,
            "user_exponent_seed": cfg.exponent_seed,
            "user_exponent_range": list(cfg.exponent_range) if cfg.exponent_range else None,
        },
    }
    return mapping
