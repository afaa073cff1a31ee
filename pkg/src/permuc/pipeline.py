"""End-to-end compile: unify, place, route, dress, schedule, synthesize."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .ir import Hamiltonian, unify_terms
from .placement import QubitMap, TabuParams, flow_matrix, tabu_place
from .router import RoutedProgram, route
from .scheduler import ScheduledCircuit, color_schedule, schedule
from .synth import GateSet, Metrics, count_hw
from .topology import DeviceTopology
from .unifier import dress_swaps

PASS_PLACEMENT = 1
PASS_ROUTING = 2
PASS_BENCH = 3


def sub_seed(seed: int, pass_id: int) -> int:
    """Independent 64-bit seed for one pass, derived from the global seed."""
    return int(np.random.SeedSequence([int(seed), pass_id]).generate_state(1, np.uint64)[0])


@dataclass
class CompileResult:
    sc: ScheduledCircuit
    routed: RoutedProgram | None
    metrics: Metrics
    placement_cost: int | None = None
    runtime_ms: dict = field(default_factory=dict)


def compile_hamiltonian(
    h: Hamiltonian,
    topo: DeviceTopology,
    gs: GateSet = GateSet(),
    seed: int = 0,
    method: str = "hybrid",
    tabu: TabuParams | None = None,
    initial_map: QubitMap | None = None,
    trace: bool = False,
) -> CompileResult:
    """Compile one Trotter step (or QAOA layer) of ``h`` onto ``topo``."""
    times = {}
    t0 = time.perf_counter()
    blocks, singles = unify_terms(h)
    times["unify"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    cost = None
    if initial_map is None:
        params = tabu if tabu is not None else TabuParams()
        params = TabuParams(params.max_iters, params.tenure, sub_seed(seed, PASS_PLACEMENT), params.restarts, params.time_budget_ms)
        initial_map, cost = tabu_place(flow_matrix(blocks, h.n), topo, params)
    times["placement"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    rng = np.random.default_rng([int(seed), PASS_ROUTING])
    rp = dress_swaps(route(blocks, initial_map, topo, seed=rng, trace=trace))
    rp.validate()
    times["routing"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    sc = schedule(rp, singles, method)
    times["scheduling"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    metrics = count_hw(sc, gs)
    times["synthesis"] = (time.perf_counter() - t0) * 1e3
    return CompileResult(sc, rp, metrics, cost, times)


def compile_nomap(h: Hamiltonian, gs: GateSet = GateSet()) -> CompileResult:
    """All-to-all reference: colour the unified blocks and synthesize."""
    blocks, singles = unify_terms(h)
    sc = color_schedule(blocks, singles, QubitMap.identity(h.n))
    return CompileResult(sc, None, count_hw(sc, gs))
