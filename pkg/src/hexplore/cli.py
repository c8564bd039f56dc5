"""Experiment runner CLI.

Subcommands:
  run           one simulation from a config file; metrics to run.csv,
                optional per-tick trace (trace.jsonl) and live rendering
  sweep         cartesian parameter sweep; results.csv + summary.csv
  render-trace  replay a trace file as text frames

Default output directory comes from HEXPLORE_OUTPUT_DIR (falling back to
the current directory).  Exit codes: 0 success, 1 validation error,
2 runtime error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional

from . import config as cfgmod
from .engine import RunMetrics, SimConfig, Simulation, aggregate, run
from .errors import ConfigError, SimulationError
from .render import render

log = logging.getLogger("hexplore")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def _default_outdir() -> str:
    return os.environ.get("HEXPLORE_OUTPUT_DIR", ".")


def _write_csv(path: Path, columns: List[str], rows: List[Dict[str, str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def cmd_run(args: argparse.Namespace) -> int:
    cfg = cfgmod.parse_run_config(Path(args.config).read_text())
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
        cfg.validate()
    outdir = Path(args.out)

    trace_lines: List[str] = []
    sim = Simulation(cfg)
    if args.trace:
        header = {
            "type": "header",
            "config": cfgmod.config_echo(cfg),
            "positions": [list(d.pos) for d in sim.drones],
        }
        trace_lines.append(json.dumps(header, sort_keys=True))

    def on_tick(s: Simulation) -> None:
        if args.trace:
            trace_lines.append(json.dumps({
                "type": "tick",
                "t": s.tick_count,
                "positions": [list(d.pos) for d in s.drones],
                "coverage": s.coverage_curve[-1],
            }, sort_keys=True))
        if args.render_every and s.tick_count % args.render_every == 0:
            print(f"--- tick {s.tick_count} ---")
            print(render(s.world, s.visits, (d.pos for d in s.drones)))

    sim.on_tick = on_tick
    metrics = sim.run_loop()

    row = cfgmod.config_echo(cfg) | cfgmod.metrics_echo(metrics)
    _write_csv(outdir / "run.csv", cfgmod.RESULT_COLUMNS, [row])
    if args.trace:
        (outdir / "trace.jsonl").write_text("\n".join(trace_lines) + "\n")
    print(
        f"completed={metrics.completed} ticks={metrics.completion_ticks} "
        f"avg_reexplored={metrics.avg_reexplored:.4f} "
        f"total_distance={metrics.total_distance}"
    )
    return EXIT_OK


def _sweep_worker(cfg: SimConfig) -> Dict[str, str]:
    echo = cfgmod.config_echo(cfg)
    try:
        metrics = run(cfg)
    except SimulationError as e:
        return echo | cfgmod.metrics_echo(None, error=str(e))
    return echo | cfgmod.metrics_echo(metrics)


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = cfgmod.parse_sweep_config(Path(args.config).read_text())
    configs = cfgmod.expand_sweep(spec)
    if not configs:
        raise ConfigError("sweep expands to zero valid combinations")
    outdir = Path(args.out)

    if args.parallelism > 1:
        with ProcessPoolExecutor(max_workers=args.parallelism) as pool:
            rows = list(pool.map(_sweep_worker, configs, chunksize=4))
    else:
        rows = [_sweep_worker(cfg) for cfg in configs]
    _write_csv(outdir / "results.csv", cfgmod.RESULT_COLUMNS, rows)

    summary_rows = _summarize(configs, rows)
    cell_cols = [c for c in cfgmod.CONFIG_COLUMNS if c != "seed"]
    stat_cols = [
        f"{m}_{s}"
        for m in RunMetrics.SCALAR_FIELDS
        for s in ("mean", "variance", "min", "q1", "median", "q3", "max")
    ]
    _write_csv(
        outdir / "summary.csv",
        cell_cols + ["n_runs", "n_completed", "n_failed"] + stat_cols,
        summary_rows,
    )
    print(f"{len(rows)} runs -> {outdir / 'results.csv'}")
    return EXIT_OK


def _summarize(configs: List[SimConfig], rows: List[Dict[str, str]]) -> List[Dict[str, str]]:
    """One summary row per config cell (all fields except seed)."""
    cell_cols = [c for c in cfgmod.CONFIG_COLUMNS if c != "seed"]
    cells: Dict[tuple, List[Dict[str, str]]] = {}
    order: List[tuple] = []
    for row in rows:
        key = tuple(row[c] for c in cell_cols)
        if key not in cells:
            cells[key] = []
            order.append(key)
        cells[key].append(row)
    out = []
    for key in order:
        group = cells[key]
        good = [r for r in group if not r["error"]]
        summary = dict(zip(cell_cols, key))
        summary["n_runs"] = str(len(group))
        summary["n_completed"] = str(sum(int(r["completed"] or 0) for r in good))
        summary["n_failed"] = str(len(group) - len(good))
        if good:
            metrics = [
                RunMetrics(
                    completed=bool(int(r["completed"])),
                    completion_ticks=int(r["completion_ticks"]),
                    avg_reexplored=float(r["avg_reexplored"]),
                    visit_variance=float(r["visit_variance"]),
                    total_distance=int(r["total_distance"]),
                    coverage_curve=[float(r["final_coverage"])],
                )
                for r in good
            ]
            for name, stats in aggregate(metrics).items():
                for stat, value in stats.items():
                    summary[f"{name}_{stat}"] = repr(value)
        out.append(summary)
    return out


def cmd_render_trace(args: argparse.Namespace) -> int:
    lines = Path(args.trace).read_text().splitlines()
    if not lines:
        raise ConfigError(f"empty trace file {args.trace}")
    header = json.loads(lines[0])
    if header.get("type") != "header":
        raise ConfigError("trace file does not start with a header record")
    cfg = cfgmod.config_from_echo(header["config"])
    sim = Simulation(cfg)  # regenerates the same world from the seed
    import numpy as np

    visits = np.zeros((sim.world.height, sim.world.width), dtype=np.int64)
    prev_positions = [tuple(p) for p in header["positions"]]
    for line in lines[1:]:
        record = json.loads(line)
        if record.get("type") != "tick":
            continue
        for p in prev_positions:
            visits[p] += 1
        positions = [tuple(p) for p in record["positions"]]
        if record["t"] % args.every == 0:
            print(f"--- tick {record['t']} (coverage {record['coverage']:.3f}) ---")
            print(render(sim.world, visits, positions))
        prev_positions = positions
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexplore",
        description="Deterministic multi-drone exploration simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one simulation")
    p_run.add_argument("--config", required=True, help="run config file")
    p_run.add_argument("--out", default=_default_outdir(), help="output directory")
    p_run.add_argument("--seed", type=int, default=None, help="override seed")
    p_run.add_argument("--trace", action="store_true", help="write trace.jsonl")
    p_run.add_argument(
        "--render-every", type=int, default=0, metavar="N",
        help="render the map every N ticks (0 = off)",
    )
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    p_sweep.add_argument("--config", required=True, help="sweep config file")
    p_sweep.add_argument("--out", default=_default_outdir(), help="output directory")
    p_sweep.add_argument("--parallelism", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)

    p_rt = sub.add_parser("render-trace", help="replay a trace as text frames")
    p_rt.add_argument("trace", help="trace.jsonl from `run --trace`")
    p_rt.add_argument("--every", type=int, default=1, metavar="N")
    p_rt.set_defaults(func=cmd_render_trace)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as e:
        log.error("%s", e)
        return EXIT_VALIDATION
    except SimulationError as e:
        log.error("%s", e)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
