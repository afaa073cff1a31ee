"""Permutation-aware SWAP insertion.

Blocks of one Trotter step may execute in any order, so the router keeps a
sequence of qubit maps and, for each map, the set of blocks that are nearest
neighbours (NN) under it. A block is routed the moment some map makes it NN;
SWAPs are only inserted to bring the closest remaining block together.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ir import TwoQubitBlock
from .placement import QubitMap
from .topology import UNREACHABLE, DeviceTopology


class RoutingError(RuntimeError):
    pass


class DisconnectedError(RoutingError, ValueError):
    """A block's qubits sit in different components of the device."""


@dataclass
class Stage:
    """Blocks executed under one map, then the SWAP leading to the next map.

    ``swap`` is a physical pair (``None`` on the last stage). ``swap_block``
    names the circuit block merged into the SWAP once it has been dressed.
    """

    blocks: list[int] = field(default_factory=list)
    swap: tuple[int, int] | None = None
    dressable: bool = False
    swap_block: int | None = None

    def copy(self) -> "Stage":
        return Stage(list(self.blocks), self.swap, self.dressable, self.swap_block)


@dataclass
class RoutedProgram:
    blocks: list[TwoQubitBlock]
    maps: list[QubitMap]
    stages: list[Stage]
    topo: DeviceTopology
    swaps_inserted: int = 0
    swaps_dressed: int = 0
    trace: list[dict] = field(default_factory=list)

    @property
    def gate_sets(self) -> list[Stage]:
        return self.stages

    def validate(self) -> None:
        """Forward replay: every gate acts on a device edge at its map."""
        if len(self.maps) != len(self.stages):
            raise RoutingError("maps and gate sets differ in length")
        seen: dict[int, int] = {}
        for i, (qmap, stage) in enumerate(zip(self.maps, self.stages)):
            for b in stage.blocks:
                if b in seen:
                    raise RoutingError(f"block {b} appears in gate sets {seen[b]} and {i}")
                seen[b] = i
                if qmap.distance(self.blocks[b].pair, self.topo.dist) != 1:
                    raise RoutingError(f"block {b} on {self.blocks[b].pair} not NN in map {i}")
            last = i == len(self.stages) - 1
            if last:
                if stage.swap is not None:
                    raise RoutingError("last gate set carries a transition SWAP")
                continue
            if stage.swap is None:
                raise RoutingError(f"gate set {i} has no transition SWAP")
            a, b = stage.swap
            if not self.topo.is_edge(a, b):
                raise RoutingError(f"SWAP {stage.swap} is not a device edge")
            if stage.swap_block is not None:
                sb = stage.swap_block
                if sb in seen:
                    raise RoutingError(f"block {sb} dressed and also scheduled in gate set {seen[sb]}")
                seen[sb] = i
                pair = tuple(sorted((qmap.inverse[a], qmap.inverse[b])))
                if pair != self.blocks[sb].pair:
                    raise RoutingError(f"dressed block {sb} not on SWAP {stage.swap} in map {i}")
            if self.maps[i + 1] != qmap.swapped(a, b):
                raise RoutingError(f"map {i + 1} is not map {i} after SWAP {stage.swap}")
        missing = set(range(len(self.blocks))) - set(seen)
        if missing:
            raise RoutingError(f"blocks never routed: {sorted(missing)}")


def candidate_swaps(
    block: TwoQubitBlock, qmap: QubitMap, topo: DeviceTopology
) -> list[tuple[int, int]]:
    """All device edges touching either endpoint of ``block`` under ``qmap``."""
    out = set()
    for q in block.pair:
        p = qmap[q]
        for w in topo.neighbors(p):
            out.add((min(p, w), max(p, w)))
    return sorted(out)


@dataclass
class SelectionState:
    blocks: Sequence[TwoQubitBlock]
    unrouted: list[int]
    qmap: QubitMap
    dist: np.ndarray
    level: list[int]
    # logical pair -> block indices not yet merged into a SWAP
    dress_pool: dict[tuple[int, int], list[int]]
    rng: np.random.Generator

    def remaining_cost(self, swap: tuple[int, int]) -> int:
        a, b = swap
        phi = self.qmap.phi
        total = 0
        for i in self.unrouted:
            u, v = self.blocks[i].pair
            pu, pv = phi[u], phi[v]
            pu = b if pu == a else a if pu == b else pu
            pv = b if pv == a else a if pv == b else pv
            total += int(self.dist[pu, pv])
        return total

    def start_level(self, swap: tuple[int, int]) -> int:
        return max(self.level[swap[0]], self.level[swap[1]])

    def dress_partner(self, swap: tuple[int, int]) -> int | None:
        u, v = (self.qmap.inverse[p] for p in swap)
        if u < 0 or v < 0:
            return None
        pool = self.dress_pool.get((min(u, v), max(u, v)))
        return pool[0] if pool else None


def select_swap(candidates: Sequence[tuple[int, int]], state: SelectionState):
    """Pick a SWAP by the three criteria, in priority order.

    1. least remaining placement cost over unrouted blocks,
    2. earliest start level against the gates routed so far,
    3. mergeable with a circuit block on the same pair.

    Remaining ties are broken by a seeded random draw. Returns the chosen
    SWAP and the criterion vector of every candidate.
    """
    if not candidates:
        raise RoutingError("no SWAP candidates")
    scores = {
        c: (state.remaining_cost(c), state.start_level(c), 0 if state.dress_partner(c) is not None else 1)
        for c in candidates
    }
    best = min(scores.values())
    tied = [c for c in candidates if scores[c] == best]
    chosen = tied[0] if len(tied) == 1 else tied[int(state.rng.integers(len(tied)))]
    return chosen, scores


def _commit(level: list[int], a: int, b: int) -> None:
    t = max(level[a], level[b]) + 1
    level[a] = level[b] = t


def route(
    blocks: Sequence[TwoQubitBlock],
    phi0: QubitMap,
    topo: DeviceTopology,
    seed=0,
    trace: bool = False,
) -> RoutedProgram:
    """Route ``blocks`` starting from ``phi0``.

    Only SWAPs that shorten the selected block are considered, which makes
    every iteration either route a block or strictly shrink the smallest
    remaining distance.
    """
    blocks = list(blocks)
    dist = topo.dist
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for b in blocks:
        if max(b.pair) >= len(phi0):
            raise RoutingError(f"block {b.pair} outside the {len(phi0)}-qubit map")
        if phi0.distance(b.pair, dist) >= UNREACHABLE:
            raise DisconnectedError(f"qubits of block {b.pair} are in disconnected device regions")

    qmap = phi0
    level = [0] * topo.m
    first = Stage()
    unrouted = []
    for i, b in enumerate(blocks):
        if qmap.distance(b.pair, dist) == 1:
            first.blocks.append(i)
            _commit(level, qmap[b.pair[0]], qmap[b.pair[1]])
        else:
            unrouted.append(i)
    maps, stages = [qmap], [first]
    dress_pool: dict[tuple[int, int], list[int]] = {}
    for i, b in enumerate(blocks):
        dress_pool.setdefault(b.pair, []).append(i)
    steps = []

    limit = topo.m * max(topo.diameter, 1) * max(len(blocks), 1)
    it = 0
    while unrouted:
        it += 1
        if it > limit:
            raise RoutingError("routing did not converge")
        g = min(unrouted, key=lambda i: qmap.distance(blocks[i].pair, dist))
        gd = qmap.distance(blocks[g].pair, dist)
        u, v = blocks[g].pair
        cands = []
        for c in candidate_swaps(blocks[g], qmap, topo):
            nxt = qmap.swapped(*c)
            if nxt.distance((u, v), dist) < gd:
                cands.append(c)
        state = SelectionState(blocks, unrouted, qmap, dist, level, dress_pool, rng)
        chosen, scores = select_swap(cands, state)
        partner = state.dress_partner(chosen)
        stages[-1].swap = chosen
        if partner is not None:
            stages[-1].dressable = True
            dress_pool[blocks[partner].pair].remove(partner)
        _commit(level, *chosen)
        qmap = qmap.swapped(*chosen)
        stage = Stage()
        for i in list(unrouted):
            if qmap.distance(blocks[i].pair, dist) == 1:
                stage.blocks.append(i)
                unrouted.remove(i)
                _commit(level, qmap[blocks[i].pair[0]], qmap[blocks[i].pair[1]])
        maps.append(qmap)
        stages.append(stage)
        if trace:
            steps.append(
                {
                    "iteration": it,
                    "selected_block": g,
                    "pair": [u, v],
                    "distance": gd,
                    "candidates": [
                        {"swap": list(c), "remaining_cost": s[0], "start_level": s[1], "dressable": s[2] == 0}
                        for c, s in scores.items()
                    ],
                    "chosen": list(chosen),
                    "routed": stage.blocks,
                    "map": list(qmap.phi),
                }
            )

    n_swaps = len(stages) - 1
    return RoutedProgram(blocks, maps, stages, topo, n_swaps, 0, steps)
