"""Config and sweep files, and the results-table schema.

Files are flat `key = value` text: one key per line, `#` comments,
comma-separated lists where a key takes several values.  Every file
carries `schema_version = 1`.  The format is deliberately trivial so
configs diff cleanly and results load into any plotting tool.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from .comms import CommsConfig
from .coordination import CostParams, Strategy
from .engine import RunMetrics, SimConfig
from .errors import ConfigError
from .grid import GridKind

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

Scalar = Union[int, float, str]


def parse_kv_file(text: str) -> Dict[str, List[Scalar]]:
    """Parse flat key = value lines; every value is a list (singletons
    for scalar keys)."""
    out: Dict[str, List[Scalar]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = [_coerce(v.strip()) for v in value.split(",") if v.strip() != ""]
        if not out[key]:
            raise ConfigError(f"line {lineno}: no value for key {key!r}")
    return out


def _coerce(token: str) -> Scalar:
    for cast in (int, float):
        try:
            return cast(token)
        except ValueError:
            pass
    return token


def _scalar(kv: Dict[str, List[Scalar]], key: str, default=None) -> Scalar:
    if key not in kv:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    values = kv[key]
    if len(values) != 1:
        raise ConfigError(f"key {key!r} expects a single value, got {values}")
    return values[0]


def _check_version(kv: Dict[str, List[Scalar]]) -> None:
    version = _scalar(kv, "schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"schema_version {version} unsupported (expected {SCHEMA_VERSION})"
        )


RUN_KEYS = {
    "schema_version", "height", "width", "kind", "subarea_height",
    "subarea_width", "drones", "obstacle_fraction", "strategy", "alpha",
    "beta", "src_radius", "mtbf", "seed", "max_ticks",
}


def parse_run_config(text: str) -> SimConfig:
    kv = parse_kv_file(text)
    _check_version(kv)
    unknown = set(kv) - RUN_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    try:
        strategy = Strategy.from_label(str(_scalar(kv, "strategy")))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    kind = None
    if "kind" in kv:
        label = str(_scalar(kv, "kind"))
        try:
            kind = GridKind(label)
        except ValueError:
            raise ConfigError(f"kind must be 'quad' or 'hex', got {label!r}") from None
    cfg = SimConfig(
        height=int(_scalar(kv, "height")),
        width=int(_scalar(kv, "width")),
        subarea_height=int(_scalar(kv, "subarea_height")),
        subarea_width=int(_scalar(kv, "subarea_width")),
        n_drones=int(_scalar(kv, "drones")),
        obstacle_fraction=float(_scalar(kv, "obstacle_fraction")),
        strategy=strategy,
        params=CostParams(
            alpha=float(_scalar(kv, "alpha", 2.0)),
            beta=float(_scalar(kv, "beta", 4.0)),
        ),
        comms=CommsConfig(
            src_radius=float(_scalar(kv, "src_radius", 10.0)),
            mtbf=float(_scalar(kv, "mtbf", 0.0)),
        ),
        seed=int(_scalar(kv, "seed")),
        max_ticks=int(_scalar(kv, "max_ticks", 0)),
        kind=kind,
    )
    cfg.validate()
    return cfg


CONFIG_COLUMNS = [
    "strategy", "kind", "height", "width", "subarea_height", "subarea_width",
    "drones", "obstacle_fraction", "alpha", "beta", "src_radius", "mtbf",
    "seed", "max_ticks",
]
METRIC_COLUMNS = [
    "completed", "completion_ticks", "avg_reexplored", "visit_variance",
    "total_distance", "final_coverage",
]
RESULT_COLUMNS = CONFIG_COLUMNS + METRIC_COLUMNS + ["error"]


def config_echo(cfg: SimConfig) -> Dict[str, str]:
    return {
        "strategy": cfg.strategy.value,
        "kind": cfg.grid_kind().value,
        "height": str(cfg.height),
        "width": str(cfg.width),
        "subarea_height": str(cfg.subarea_height),
        "subarea_width": str(cfg.subarea_width),
        "drones": str(cfg.n_drones),
        "obstacle_fraction": repr(cfg.obstacle_fraction),
        "alpha": repr(cfg.params.alpha),
        "beta": repr(cfg.params.beta),
        "src_radius": repr(cfg.comms.src_radius),
        "mtbf": repr(cfg.comms.mtbf),
        "seed": str(cfg.seed),
        "max_ticks": str(cfg.max_ticks),
    }


def config_from_echo(row: Dict[str, str]) -> SimConfig:
    """Inverse of config_echo; round-trips to an equal SimConfig."""
    cfg = SimConfig(
        height=int(row["height"]),
        width=int(row["width"]),
        subarea_height=int(row["subarea_height"]),
        subarea_width=int(row["subarea_width"]),
        n_drones=int(row["drones"]),
        obstacle_fraction=float(row["obstacle_fraction"]),
        strategy=Strategy.from_label(row["strategy"]),
        params=CostParams(alpha=float(row["alpha"]), beta=float(row["beta"])),
        comms=CommsConfig(
            src_radius=float(row["src_radius"]), mtbf=float(row["mtbf"])
        ),
        seed=int(row["seed"]),
        max_ticks=int(row["max_ticks"]),
        kind=GridKind(row["kind"]),
    )
    cfg.validate()
    return cfg


def metrics_echo(m: Optional[RunMetrics], error: str = "") -> Dict[str, str]:
    if m is None:
        return {name: "" for name in METRIC_COLUMNS} | {"error": error}
    return {
        "completed": str(int(m.completed)),
        "completion_ticks": str(m.completion_ticks),
        "avg_reexplored": repr(m.avg_reexplored),
        "visit_variance": repr(m.visit_variance),
        "total_distance": str(m.total_distance),
        "final_coverage": repr(m.coverage_curve[-1]) if m.coverage_curve else "0.0",
        "error": error,
    }


SWEEP_KEYS = {
    "schema_version", "grid_sizes", "subarea_sizes", "drones", "strategies",
    "radii", "alphas", "betas", "obstacle_fraction", "mtbf",
    "seeds_per_cell", "base_seed", "max_ticks",
}


@dataclass
class SweepSpec:
    grid_sizes: List[Tuple[int, int]]
    subarea_sizes: List[Tuple[int, int]]
    drones: List[int]
    strategies: List[Strategy]
    radii: List[float]
    alphas: List[float]
    betas: List[float]
    obstacle_fraction: float
    mtbf: float
    seeds_per_cell: int
    base_seed: int
    max_ticks: int = 0


def _parse_dims(token: Scalar) -> Tuple[int, int]:
    parts = str(token).lower().split("x")
    if len(parts) != 2:
        raise ConfigError(f"expected HEIGHTxWIDTH, got {token!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError(f"expected HEIGHTxWIDTH, got {token!r}") from None


def parse_sweep_config(text: str) -> SweepSpec:
    kv = parse_kv_file(text)
    _check_version(kv)
    unknown = set(kv) - SWEEP_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    for key in ("grid_sizes", "subarea_sizes", "drones", "strategies"):
        if key not in kv:
            raise ConfigError(f"missing required key {key!r}")
    try:
        strategies = [Strategy.from_label(str(s)) for s in kv["strategies"]]
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return SweepSpec(
        grid_sizes=[_parse_dims(t) for t in kv["grid_sizes"]],
        subarea_sizes=[_parse_dims(t) for t in kv["subarea_sizes"]],
        drones=[int(n) for n in kv["drones"]],
        strategies=strategies,
        radii=[float(r) for r in kv.get("radii", [10.0])],
        alphas=[float(a) for a in kv.get("alphas", [2.0])],
        betas=[float(b) for b in kv.get("betas", [4.0])],
        obstacle_fraction=float(_scalar(kv, "obstacle_fraction", 0.2)),
        mtbf=float(_scalar(kv, "mtbf", 0.0)),
        seeds_per_cell=int(_scalar(kv, "seeds_per_cell", 20)),
        base_seed=int(_scalar(kv, "base_seed", 0)),
        max_ticks=int(_scalar(kv, "max_ticks", 0)),
    )


def expand_sweep(spec: SweepSpec) -> List[SimConfig]:
    """Cartesian expansion in file order, seeds innermost; invalid
    combinations are logged and skipped, not fatal."""
    configs: List[SimConfig] = []
    for (h, w), (sh, sw), n, strat, radius, alpha, beta in itertools.product(
        spec.grid_sizes, spec.subarea_sizes, spec.drones, spec.strategies,
        spec.radii, spec.alphas, spec.betas,
    ):
        for i in range(spec.seeds_per_cell):
            cfg = SimConfig(
                height=h, width=w, subarea_height=sh, subarea_width=sw,
                n_drones=n, obstacle_fraction=spec.obstacle_fraction,
                strategy=strat,
                params=CostParams(alpha=alpha, beta=beta),
                comms=CommsConfig(src_radius=radius, mtbf=spec.mtbf),
                seed=spec.base_seed + i,
                max_ticks=spec.max_ticks,
            )
            try:
                cfg.validate()
            except ConfigError as e:
                log.warning("skipping combination: %s", e)
                break  # every seed of this combination is equally invalid
            configs.append(cfg)
    return configs
