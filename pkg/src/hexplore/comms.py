"""Short-range map sharing, long-range target broadcasting, failures.

Short-range communication is multi-hop: drones within the radius of each
other chain into connected components and every member ends the exchange
with the union of the group's maps.  Long-range communication publishes
each drone's declared target subarea from the previous tick.

Failures follow R(t) = exp(-t / MTBF) reinterpreted as a memoryless
per-tick failure probability 1 - exp(-1 / MTBF): the literal reading
decays to zero and would disable comms permanently, while exponential
inter-failure times with mean MTBF keep the formula's intent for
temporary failures.  A drone whose radio is down neither sends nor
receives that tick, on both channels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from .agent import DroneState
from .coordination import ApproachTable
from .grid import Subarea


@dataclass
class CommsConfig:
    src_radius: float = 10.0  # Euclidean distance in cell units; 0 = no SRC
    mtbf: float = 0.0  # mean ticks between failures; 0 = failures disabled


def reliability(t: float, mtbf: float) -> float:
    """R(t) = exp(-t / MTBF), in (0, 1]."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if mtbf <= 0:
        raise ValueError(f"mtbf must be > 0, got {mtbf}")
    return math.exp(-t / mtbf)


def failure_probability(mtbf: float) -> float:
    """Per-tick probability the radio goes down."""
    if mtbf <= 0:
        raise ValueError(f"mtbf must be > 0, got {mtbf}")
    return 1.0 - math.exp(-1.0 / mtbf)


def sample_radio_state(rng: np.random.Generator, mtbf: float) -> bool:
    """True = radio up this tick.  mtbf = 0 ("failures off") is handled
    by the caller before sampling."""
    return rng.random() >= failure_probability(mtbf)


def src_groups(drones: Sequence[DroneState], src_radius: float) -> List[List[DroneState]]:
    """Connected components of the short-range communication graph.

    Two drones link when both radios are up and their Euclidean distance
    (on the index matrix) is within the radius.  Down drones are
    singletons.  A radius of 0 disables short-range comms entirely.
    """
    groups: List[List[DroneState]] = []
    if src_radius <= 0:
        return [[d] for d in drones]
    up = [d for d in drones if d.radio_up]
    for d in drones:
        if not d.radio_up:
            groups.append([d])
    if not up:
        groups.sort(key=lambda g: g[0].id)
        return groups
    pos = np.array([d.pos for d in up], dtype=np.float64)
    diff = pos[:, None, :] - pos[None, :, :]
    adjacent = (diff ** 2).sum(axis=2) <= src_radius ** 2
    seen = [False] * len(up)
    for i in range(len(up)):
        if seen[i]:
            continue
        stack = [i]
        seen[i] = True
        comp = []
        while stack:
            j = stack.pop()
            comp.append(up[j])
            for k in np.nonzero(adjacent[j])[0]:
                if not seen[k]:
                    seen[k] = True
                    stack.append(int(k))
        comp.sort(key=lambda d: d.id)
        groups.append(comp)
    groups.sort(key=lambda g: g[0].id)
    return groups


def exchange(
    groups: List[List[DroneState]],
    drones: Sequence[DroneState],
    prev_declarations: Dict[int, Subarea],
) -> ApproachTable:
    """Barrier step at tick start: merge maps within each SRC group and
    publish the previous tick's target declarations over long range.

    Down drones keep their stale ApproachTable and position snapshot; the
    algorithm keeps working on previous information.
    """
    for group in groups:
        if len(group) < 2:
            continue
        merged = group[0].local.states
        for member in group[1:]:
            merged = np.maximum(merged, member.local.states)
        for member in group:
            member.local.states = merged.copy()

    table = ApproachTable()
    for d in drones:
        if d.radio_up and d.id in prev_declarations:
            sub = prev_declarations[d.id]
            table.counts[sub] = table.counts.get(sub, 0) + 1
    up_positions = {d.id: d.pos for d in drones if d.radio_up}
    for d in drones:
        if d.radio_up:
            d.approach = table
            d.known_positions.update(up_positions)
    return table
