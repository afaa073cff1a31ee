"""Cycle assignment for unified blocks, SWAPs and single-qubit ops.

Three schedulers share one output type:

* :func:`color_schedule` - no connectivity constraints; blocks sharing a qubit
  conflict and the conflict graph is coloured greedily, one colour per cycle.
* :func:`hybrid_alap` - routed programs. Blocks NN in the initial map are
  coloured; everything else is placed by a reverse-time sweep from the last
  map, then the sequence is reversed and compacted.
* :func:`generic_schedule` - order-respecting ASAP over the router's gate
  order, used as the comparison baseline.

All ops carry physical qubits; the logical meaning of a block or SWAP follows
from replaying the cycles forward from the initial map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .ir import SingleQubitOp, TwoQubitBlock
from .placement import QubitMap
from .router import RoutedProgram
from .topology import DeviceTopology


class ScheduleError(RuntimeError):
    pass


class UnsupportedSchedule(ScheduleError, ValueError):
    """The requested scheduler cannot handle this program."""


@dataclass(frozen=True)
class Op:
    """A scheduled gate.

    ``kind`` is ``"block"``, ``"swap"`` or ``"single"``. ``index`` is the block
    index (blocks and dressed SWAPs) or single-op index; ``None`` for a plain
    SWAP. ``qubits`` are physical.
    """

    kind: str
    index: int | None
    qubits: tuple[int, ...]

    @property
    def dressed(self) -> bool:
        return self.kind == "swap" and self.index is not None

    @property
    def is_swap(self) -> bool:
        return self.kind == "swap"


@dataclass
class ScheduledCircuit:
    n: int
    m: int
    blocks: list[TwoQubitBlock]
    singles: list[SingleQubitOp]
    cycles: list[list[Op]]
    singles_placement: list[list[Op]]
    initial_map: QubitMap
    topo: DeviceTopology | None = None
    final_map: QubitMap = field(default=None)

    def __post_init__(self):
        width = max(len(self.cycles), len(self.singles_placement))
        self.cycles = [list(c) for c in self.cycles] + [[] for _ in range(width - len(self.cycles))]
        self.singles_placement = [list(c) for c in self.singles_placement] + [
            [] for _ in range(width - len(self.singles_placement))
        ]
        maps = self.replay()
        self.final_map = maps[-1]

    @property
    def depth_blocks(self) -> int:
        return sum(1 for c in self.cycles if c)

    @property
    def total_cycles(self) -> int:
        return sum(1 for c, s in zip(self.cycles, self.singles_placement) if c or s)

    @property
    def swaps(self) -> int:
        return sum(1 for c in self.cycles for op in c if op.is_swap)

    @property
    def swaps_dressed(self) -> int:
        return sum(1 for c in self.cycles for op in c if op.dressed)

    @property
    def cycle_maps(self) -> list[QubitMap]:
        return self.replay()[:-1]

    def two_qubit_ops(self) -> list[Op]:
        return [op for c in self.cycles for op in c]

    def emitted_order(self) -> list[tuple[str, int]]:
        """Logical operators in execution order, as ``("block"|"single", index)``."""
        out = []
        for c, s in zip(self.cycles, self.singles_placement):
            for op in c:
                if op.index is not None:
                    out.append(("block", op.index))
            for op in s:
                out.append(("single", op.index))
        return out

    def replay(self) -> list[QubitMap]:
        """Step through the cycles from the initial map and check every gate.

        Returns the map at the start of each cycle plus the final map.
        """
        qmap = self.initial_map
        maps = [qmap]
        for t, (cyc, sgl) in enumerate(zip(self.cycles, self.singles_placement)):
            used: set[int] = set()
            for op in list(cyc) + list(sgl):
                if used & set(op.qubits):
                    raise ScheduleError(f"cycle {t}: overlapping qubits at {op}")
                used.update(op.qubits)
            for op in cyc:
                a, b = op.qubits
                if self.topo is not None and not self.topo.is_edge(a, b):
                    raise ScheduleError(f"cycle {t}: {op} is not on a device edge")
                if op.index is not None:
                    pair = tuple(sorted((qmap.inverse[a], qmap.inverse[b])))
                    if pair != self.blocks[op.index].pair:
                        raise ScheduleError(
                            f"cycle {t}: block {op.index} expects logical {self.blocks[op.index].pair}, "
                            f"physical {op.qubits} hold {pair}"
                        )
            for op in sgl:
                q = qmap.inverse[op.qubits[0]]
                if q != self.singles[op.index].qubit:
                    raise ScheduleError(f"cycle {t}: single op {op.index} on wrong qubit")
            for op in cyc:
                if op.is_swap:
                    qmap = qmap.swapped(*op.qubits)
            maps.append(qmap)
        return maps

    def check_complete(self, expected_swaps: int | None = None) -> None:
        got = sorted(i for i in (op.index for op in self.two_qubit_ops()) if i is not None)
        if got != list(range(len(self.blocks))):
            raise ScheduleError(f"blocks scheduled {got} != all {len(self.blocks)} blocks")
        singles = sorted(op.index for c in self.singles_placement for op in c)
        if singles != list(range(len(self.singles))):
            raise ScheduleError("single-qubit ops missing or duplicated")
        if expected_swaps is not None and self.swaps != expected_swaps:
            raise ScheduleError(f"expected {expected_swaps} SWAPs, scheduled {self.swaps}")


def _color_cycles(indices: Sequence[int], blocks: Sequence[TwoQubitBlock], qmap: QubitMap) -> list[list[Op]]:
    g = nx.Graph()
    g.add_nodes_from(indices)
    by_qubit: dict[int, list[int]] = {}
    for i in indices:
        for q in blocks[i].pair:
            by_qubit.setdefault(q, []).append(i)
    for members in by_qubit.values():
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                g.add_edge(members[x], members[y])
    colors = nx.greedy_color(g, strategy="largest_first")
    ncolors = max(colors.values()) + 1 if colors else 0
    cycles: list[list[Op]] = [[] for _ in range(ncolors)]
    for i in indices:
        u, v = blocks[i].pair
        cycles[colors[i]].append(Op("block", i, (qmap[u], qmap[v])))
    return cycles


def _place_singles(
    cycles: list[list[Op]], singles: Sequence[SingleQubitOp], initial_map: QubitMap, n: int
) -> list[list[Op]]:
    # each single goes after the last two-qubit gate on its qubit, one per cycle
    qmap = initial_map
    last = [-1] * n
    for t, cyc in enumerate(cycles):
        for op in cyc:
            for p in op.qubits:
                q = qmap.inverse[p]
                if q >= 0:
                    last[q] = t
        for op in cyc:
            if op.is_swap:
                qmap = qmap.swapped(*op.qubits)
    placement: list[list[Op]] = [[] for _ in cycles]
    nxt = [t + 1 for t in last]
    for i, s in enumerate(singles):
        t = nxt[s.qubit]
        nxt[s.qubit] += 1
        while len(placement) <= t:
            placement.append([])
        placement[t].append(Op("single", i, (qmap[s.qubit],)))
    return placement


def color_schedule(
    blocks: Sequence[TwoQubitBlock],
    singles: Sequence[SingleQubitOp] = (),
    qmap: QubitMap | None = None,
    topo: DeviceTopology | None = None,
) -> ScheduledCircuit:
    """Schedule blocks with no ordering constraints by greedy colouring."""
    blocks = list(blocks)
    n = max([max(b.pair) + 1 for b in blocks] + [s.qubit + 1 for s in singles] + [2])
    if qmap is None:
        qmap = QubitMap.identity(n)
    n = len(qmap)
    cycles = _color_cycles(range(len(blocks)), blocks, qmap)
    placement = _place_singles(cycles, singles, qmap, n)
    return ScheduledCircuit(n, qmap.m, blocks, list(singles), cycles, placement, qmap, topo)


def _first_nn_map(rp: RoutedProgram) -> dict[int, int]:
    first: dict[int, int] = {}
    dist = rp.topo.dist
    for i, stage in enumerate(rp.stages):
        if i == 0:
            continue
        for b in stage.blocks:
            pair = rp.blocks[b].pair
            first[b] = next(j for j, qm in enumerate(rp.maps) if qm.distance(pair, dist) == 1)
    return first


def _reverse_sweep(rp: RoutedProgram) -> list[list[Op]]:
    blocks = rp.blocks
    dist = rp.topo.dist
    first_nn = _first_nn_map(rp)
    # later gate sets first: in reverse time they are the earliest candidates
    pending = [b for stage in reversed(rp.stages[1:]) for b in stage.blocks]
    next_swap = len(rp.stages) - 2
    qmap = rp.maps[-1]
    rev: list[list[Op]] = []
    while pending or next_swap >= 0:
        busy: set[int] = set()
        cycle: list[Op] = []
        remaining = []
        for b in pending:
            u, v = blocks[b].pair
            pu, pv = qmap[u], qmap[v]
            if dist[pu, pv] == 1 and pu not in busy and pv not in busy:
                cycle.append(Op("block", b, (pu, pv)))
                busy.update((pu, pv))
            else:
                remaining.append(b)
        pending = remaining
        while next_swap >= 0:
            stage = rp.stages[next_swap]
            a, c = stage.swap
            if a in busy or c in busy:
                break
            if any(first_nn[b] > next_swap for b in pending):
                break
            cycle.append(Op("swap", stage.swap_block, (a, c)))
            busy.update((a, c))
            qmap = qmap.swapped(a, c)
            next_swap -= 1
        if not cycle:
            raise ScheduleError("internal error: hybrid scheduler deadlocked")
        rev.append(cycle)
    if qmap != rp.maps[0]:
        raise ScheduleError("internal error: reverse sweep did not rewind to the initial map")
    return rev[::-1]


def compact(cycles: Sequence[Sequence[Op]], m: int) -> list[list[Op]]:
    """Slide each gate to its earliest valid cycle, keeping gate order.

    SWAPs stay behind every earlier gate on their qubits. Blocks only stay
    behind earlier SWAPs on their qubits and may fill gaps before other
    blocks, which is legal because blocks of one step may be permuted.
    """
    last_any = [-1] * m
    last_swap = [-1] * m
    occupied: list[set[int]] = []
    out: list[list[Op]] = []

    def ensure(t: int) -> None:
        while len(out) <= t:
            out.append([])
            occupied.append(set())

    for cyc in cycles:
        for op in cyc:
            qs = op.qubits
            if op.is_swap:
                t = max(last_any[q] for q in qs) + 1
            else:
                t = max(last_swap[q] for q in qs) + 1
                ensure(t)
                while any(q in occupied[t] for q in qs):
                    t += 1
                    ensure(t)
            ensure(t)
            out[t].append(op)
            occupied[t].update(qs)
            for q in qs:
                last_any[q] = max(last_any[q], t)
                if op.is_swap:
                    last_swap[q] = t
    return [c for c in out if c]


def hybrid_alap(rp: RoutedProgram, singles: Sequence[SingleQubitOp] = ()) -> ScheduledCircuit:
    """Permutation-aware schedule of a (dressed) routed program."""
    prefix = _color_cycles(rp.stages[0].blocks, rp.blocks, rp.maps[0])
    if len(rp.stages) == 1:
        cycles = prefix
    else:
        m = rp.topo.m
        cycles = compact(prefix + _reverse_sweep(rp), m)
        # the ALAP sweep occasionally loses a cycle to forward orders; keep
        # the shallowest, ALAP first on ties
        first = set(rp.stages[0].blocks)
        rest = [[op] for op in routed_sequence(rp) if op.is_swap or op.index not in first]
        for alt in (compact(prefix + rest, m), _asap_cycles(rp)):
            if len(alt) < len(cycles):
                cycles = alt
    n = len(rp.maps[0])
    placement = _place_singles(cycles, singles, rp.maps[0], n)
    sc = ScheduledCircuit(n, rp.topo.m, rp.blocks, list(singles), cycles, placement, rp.maps[0], rp.topo)
    sc.check_complete(len(rp.stages) - 1)
    return sc


def routed_sequence(rp: RoutedProgram) -> list[Op]:
    """The router's gate order: each gate set's blocks, then its SWAP."""
    seq = []
    for qmap, stage in zip(rp.maps, rp.stages):
        for b in stage.blocks:
            u, v = rp.blocks[b].pair
            seq.append(Op("block", b, (qmap[u], qmap[v])))
        if stage.swap is not None:
            seq.append(Op("swap", stage.swap_block, stage.swap))
    return seq


def _asap_cycles(rp: RoutedProgram) -> list[list[Op]]:
    avail = [0] * rp.topo.m
    cycles: list[list[Op]] = []
    for op in routed_sequence(rp):
        t = max(avail[q] for q in op.qubits)
        while len(cycles) <= t:
            cycles.append([])
        cycles[t].append(op)
        for q in op.qubits:
            avail[q] = t + 1
    return cycles


def generic_schedule(rp: RoutedProgram, singles: Sequence[SingleQubitOp] = ()) -> ScheduledCircuit:
    """Order-respecting ASAP: gates sharing a physical qubit keep router order."""
    cycles = _asap_cycles(rp)
    n = len(rp.maps[0])
    placement = _place_singles(cycles, singles, rp.maps[0], n)
    sc = ScheduledCircuit(n, rp.topo.m, rp.blocks, list(singles), cycles, placement, rp.maps[0], rp.topo)
    sc.check_complete(len(rp.stages) - 1)
    return sc


def schedule(rp: RoutedProgram, singles: Sequence[SingleQubitOp] = (), method: str = "hybrid") -> ScheduledCircuit:
    if method == "hybrid":
        return hybrid_alap(rp, singles)
    if method == "generic":
        return generic_schedule(rp, singles)
    if method == "coloring":
        if len(rp.stages) > 1:
            raise UnsupportedSchedule("coloring scheduler needs a program without SWAPs")
        return hybrid_alap(rp, singles)
    raise UnsupportedSchedule(f"unknown scheduler {method!r}")
