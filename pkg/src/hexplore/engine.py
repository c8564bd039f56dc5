"""Tick-synchronous simulation loop, strategy dispatch, and metrics.

One tick: (1) sample radio states, (2) short-range map exchange and
long-range target publication, (3) each drone in ascending id order
senses, then decides one move of at most one cell, (4) moves are applied,
(5) this tick's target declarations are recorded for the next tick's
approach table.  Greedy endgame bidding replaces moving-state selection
when the number of globally unexplored cells drops to the number of
moving drones.

Determinism: environment generation, drone placement and radio failures
draw from three independent streams derived from the master seed, so a
run is reproducible bit for bit and toggling failures does not perturb
the map.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import agent, comms, coordination
from .agent import DroneState, Mode
from .comms import CommsConfig
from .coordination import ApproachTable, CostParams, Strategy
from .errors import ConfigError
from .grid import (
    Cell, GridKind, GridMap, Subarea, generate_environment, heuristic_field,
    subarea_of,
)
from .localmap import CellState
from .pathfind import path_from_field, plan_field


@dataclass
class SimConfig:
    height: int = 40
    width: int = 40
    subarea_height: int = 10
    subarea_width: int = 10
    n_drones: int = 25
    obstacle_fraction: float = 0.2
    strategy: Strategy = Strategy.QRNN_SRC
    params: CostParams = field(default_factory=CostParams)
    comms: CommsConfig = field(default_factory=CommsConfig)
    seed: int = 0
    max_ticks: int = 0  # 0 = auto: 10 x free-cell count
    kind: Optional[GridKind] = None  # derived from strategy when None

    def grid_kind(self) -> GridKind:
        return self.kind if self.kind is not None else self.strategy.grid_kind

    def validate(self) -> None:
        if self.height <= 0 or self.width <= 0:
            raise ConfigError(f"grid dims must be positive, got {self.height}x{self.width}")
        if self.height % self.subarea_height or self.width % self.subarea_width:
            raise ConfigError(
                f"subarea_height/subarea_width {self.subarea_height}x"
                f"{self.subarea_width} must divide grid {self.height}x{self.width}"
            )
        if self.n_drones < 1:
            raise ConfigError(f"n_drones must be >= 1, got {self.n_drones}")
        if not 0.0 <= self.obstacle_fraction <= 0.5:
            raise ConfigError(
                f"obstacle_fraction {self.obstacle_fraction} outside [0, 0.5]"
            )
        if self.kind is not None and self.kind is not self.strategy.grid_kind:
            raise ConfigError(
                f"strategy {self.strategy.value} requires "
                f"{self.strategy.grid_kind.value} grid, got {self.kind.value}"
            )
        if self.max_ticks < 0:
            raise ConfigError(f"max_ticks must be >= 0, got {self.max_ticks}")
        if self.comms.mtbf < 0:
            raise ConfigError(f"mtbf must be >= 0, got {self.comms.mtbf}")
        if self.comms.src_radius < 0:
            raise ConfigError(f"src_radius must be >= 0, got {self.comms.src_radius}")


@dataclass
class RunMetrics:
    completed: bool
    completion_ticks: int
    avg_reexplored: float
    visit_variance: float
    total_distance: int
    coverage_curve: List[float]

    SCALAR_FIELDS = (
        "completion_ticks", "avg_reexplored", "visit_variance", "total_distance",
    )


class Simulation:
    """One seeded run.  `world` and `drones` are injectable so scenario
    tests can script exact layouts; by default both come from the seed."""

    def __init__(
        self,
        cfg: SimConfig,
        world: Optional[GridMap] = None,
        drones: Optional[List[DroneState]] = None,
        on_tick: Optional[Callable[["Simulation"], None]] = None,
    ):
        cfg.validate()
        self.cfg = cfg
        self.strategy = cfg.strategy
        self.on_tick = on_tick
        if world is None:
            world = generate_environment(
                cfg.height, cfg.width, cfg.grid_kind(),
                (cfg.subarea_height, cfg.subarea_width),
                cfg.obstacle_fraction, cfg.seed,
            )
        self.world = world
        self._placement_rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([cfg.seed, 1]))
        )
        self._comms_rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([cfg.seed, 2]))
        )
        if drones is None:
            drones = self._place_drones(cfg.n_drones)
        self.drones = drones
        positions = {d.id: d.pos for d in self.drones}
        for d in self.drones:
            d.known_positions.update(positions)
            if d.approach is None:
                d.approach = ApproachTable()
        self.declarations: Dict[int, Subarea] = {}
        self.visits = np.zeros((world.height, world.width), dtype=np.int64)
        self.free_mask = ~world.blocked
        self.n_free = int(np.count_nonzero(self.free_mask))
        self.visited_count = 0
        self.coverage_curve: List[float] = []
        self.tick_count = 0
        self.max_ticks = cfg.max_ticks if cfg.max_ticks > 0 else 10 * self.n_free

    def _place_drones(self, n: int) -> List[DroneState]:
        free = np.argwhere(~self.world.blocked)
        if n > len(free):
            raise ConfigError(f"n_drones {n} exceeds free cells {len(free)}")
        idx = self._placement_rng.choice(len(free), size=n, replace=False)
        return [
            agent.new_drone(i, (int(free[j][0]), int(free[j][1])), self.world)
            for i, j in enumerate(idx)
        ]

    @property
    def completed(self) -> bool:
        return self.visited_count == self.n_free

    # ------------------------------------------------------------------
    # Tick phases
    # ------------------------------------------------------------------

    def tick(self) -> None:
        cfg = self.cfg
        mtbf = cfg.comms.mtbf
        for d in self.drones:
            d.radio_up = mtbf <= 0 or comms.sample_radio_state(self._comms_rng, mtbf)

        radius = cfg.comms.src_radius if self.strategy.uses_src else 0.0
        groups = comms.src_groups(self.drones, radius)
        comms.exchange(groups, self.drones, self.declarations)

        for d in self.drones:
            self._sense(d)

        moving: List[DroneState] = []
        intents: Dict[int, Cell] = {}
        declarations: Dict[int, Subarea] = {}
        for d in self.drones:
            here = subarea_of(d.pos, d.local)
            if d.mode is Mode.MOVING and d.local.subarea_has_frontier(here):
                d.mode = Mode.EXPLORATION
                d.target_subarea = None
                d.exploration_goal = None
                d.commitment_age = 0
            if d.mode is Mode.EXPLORATION:
                step = agent.exploration_action(d)
                if step is not None:
                    intents[d.id] = step
                    continue
                d.mode = Mode.MOVING
                d.target_subarea = None
                d.commitment_age = 0
            moving.append(d)

        unexplored = self.free_mask & (self.visits == 0)
        n_unexplored = int(np.count_nonzero(unexplored))
        if moving and 0 < n_unexplored <= len(moving):
            self._endgame(moving, unexplored, intents, declarations)
        else:
            for d in moving:
                self._moving_step(d, intents, declarations)

        for d in self.drones:
            target = intents.get(d.id)
            if target is not None and target != d.pos:
                d.pos = target
                d.distance_traveled += 1

        self.declarations = declarations
        self.tick_count += 1
        self.coverage_curve.append(self.visited_count / self.n_free)
        if self.on_tick is not None:
            self.on_tick(self)

    def _sense(self, d: DroneState) -> None:
        agent.sense_and_mark(d, self.world)
        if self.visits[d.pos] == 0:
            self.visited_count += 1
        self.visits[d.pos] += 1

    def _moving_step(
        self,
        d: DroneState,
        intents: Dict[int, Cell],
        declarations: Dict[int, Subarea],
    ) -> None:
        """Vectorized equivalent of select_target / pso_target plus one
        movement step along the shortest path to the chosen cell."""
        local = d.local
        g_field = plan_field(local, d.pos)
        candidate = (local.states <= CellState.FRONTIER) & (g_field >= 0)
        if not candidate.any():
            return  # nothing reachable left in this drone's world view
        h_field = heuristic_field(d.pos, local)
        if d.target_subarea is not None:
            d.commitment_age += 1

        if self.strategy is Strategy.PSO:
            cost = coordination.pso_cost_surface(
                d, g_field, h_field, d.known_positions, self.cfg.params
            )
        else:
            weights_blocks = None
            if self.strategy.weighted:
                weights_blocks = coordination.not_visited_block_counts(
                    local.states, local.subarea_height, local.subarea_width
                )
            cost = coordination.rnn_cost_surface(
                d, g_field, h_field, d.approach, weights_blocks, self.cfg.params
            )

        mask = candidate
        if (
            self.strategy is not Strategy.PSO
            and d.target_subarea is not None
            and d.commitment_age < coordination.COMMITMENT_WINDOW
        ):
            held = np.zeros_like(mask)
            r0 = d.target_subarea[0] * local.subarea_height
            c0 = d.target_subarea[1] * local.subarea_width
            held[r0:r0 + local.subarea_height, c0:c0 + local.subarea_width] = True
            held &= mask
            if held.any():
                mask = held

        cost = np.where(mask, cost, np.inf)
        idx = int(np.argmin(cost))
        goal = (idx // local.width, idx % local.width)
        sub = subarea_of(goal, local)
        if sub != d.target_subarea:
            d.target_subarea = sub
            d.commitment_age = 0
        declarations[d.id] = sub
        path = path_from_field(local, g_field, goal)
        if path.cost > 0:
            intents[d.id] = path.cells[1]

    def _endgame(
        self,
        moving: List[DroneState],
        unexplored: np.ndarray,
        intents: Dict[int, Cell],
        declarations: Dict[int, Subarea],
    ) -> None:
        cells = [(int(r), int(c)) for r, c in np.argwhere(unexplored)]
        fields = {d.id: plan_field(d.local, d.pos) for d in moving}
        path_costs = {}
        for d in moving:
            f = fields[d.id]
            for cell in cells:
                g = int(f[cell])
                if g >= 0:
                    path_costs[(d.id, cell)] = g
        assignment = coordination.endgame_bidding(
            [d.id for d in moving], cells, path_costs
        )
        by_id = {d.id: d for d in moving}
        for did, cell in assignment.items():
            d = by_id[did]
            sub = subarea_of(cell, d.local)
            if sub != d.target_subarea:
                d.target_subarea = sub
                d.commitment_age = 0
            else:
                d.commitment_age += 1
            declarations[did] = sub
            path = path_from_field(d.local, fields[did], cell)
            if path.cost > 0:
                intents[did] = path.cells[1]
        for d in moving:
            if d.id not in assignment:
                d.target_subarea = None
                d.commitment_age = 0

    # ------------------------------------------------------------------

    def run_loop(self) -> RunMetrics:
        while self.drones and not self.completed and self.tick_count < self.max_ticks:
            self.tick()
        return self.metrics()

    def metrics(self) -> RunMetrics:
        v = self.visits[self.free_mask]
        return RunMetrics(
            completed=self.completed,
            completion_ticks=self.tick_count,
            avg_reexplored=float(np.maximum(v - 1, 0).mean()) if v.size else 0.0,
            visit_variance=float(v.var()) if v.size else 0.0,
            total_distance=int(sum(d.distance_traveled for d in self.drones)),
            coverage_curve=list(self.coverage_curve),
        )


def run(cfg: SimConfig, on_tick: Optional[Callable] = None) -> RunMetrics:
    """Generate the environment, place drones, run to completion."""
    sim = Simulation(cfg, on_tick=on_tick)
    return sim.run_loop()


def aggregate(runs: Sequence[RunMetrics]) -> Dict[str, Dict[str, float]]:
    """Descriptive statistics (mean, variance, quartiles) per scalar metric."""
    if not runs:
        raise ValueError("aggregate requires at least one run")
    out: Dict[str, Dict[str, float]] = {}
    for name in RunMetrics.SCALAR_FIELDS:
        values = np.array([getattr(r, name) for r in runs], dtype=np.float64)
        q1, median, q3 = np.quantile(values, [0.25, 0.5, 0.75])
        out[name] = {
            "mean": float(values.mean()),
            "variance": float(values.var()),
            "min": float(values.min()),
            "q1": float(q1),
            "median": float(median),
            "q3": float(q3),
            "max": float(values.max()),
        }
    return out
