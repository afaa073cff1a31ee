import numpy as np
import pytest

from permuc.benchgen import BenchmarkSpec
from permuc.ir import PauliTerm, TwoQubitBlock, build_hamiltonian, unify_terms
from permuc.pipeline import compile_hamiltonian
from permuc.placement import QubitMap
from permuc.router import RoutedProgram, Stage
from permuc.scheduler import (
    Op, ScheduleError, ScheduledCircuit, UnsupportedSchedule, color_schedule, compact, generic_schedule,
    hybrid_alap, schedule,
)
from permuc.topology import preset


def alap_fixture():
    """Three ZZ blocks on a 5-qubit line, each needing the previous SWAP.

    Block 2 runs first; SWAP (0,1) brings logical 0 next to 2 for block 0;
    SWAP (3,4) brings logical 4 next to 2 for block 1. Block 1 does not
    depend on SWAP (0,1), which ALAP exploits.
    """
    topo = preset("line:5")
    blocks = [TwoQubitBlock(p, (PauliTerm("ZZ", p, 0.4),), 1.0) for p in [(0, 2), (2, 4), (0, 1)]]
    m0 = QubitMap.identity(5)
    m1 = m0.swapped(0, 1)
    m2 = m1.swapped(3, 4)
    stages = [Stage([2], (0, 1)), Stage([0], (3, 4)), Stage([1])]
    rp = RoutedProgram(blocks, [m0, m1, m2], stages, topo, 2, 0)
    rp.validate()
    return rp


def test_alap_fixture_cycles():
    rp = alap_fixture()
    assert hybrid_alap(rp).depth_blocks == 3
    assert generic_schedule(rp).depth_blocks == 4


def test_alap_fixture_maps():
    rp = alap_fixture()
    assert [m.phi for m in rp.maps] == [(0, 1, 2, 3, 4), (1, 0, 2, 3, 4), (1, 0, 2, 4, 3)]
    for sc in (hybrid_alap(rp), generic_schedule(rp)):
        assert sc.final_map.phi == (1, 0, 2, 4, 3)
        sc.check_complete(expected_swaps=2)


@pytest.mark.parametrize("family", ["nnn-ising", "nnn-heisenberg", "qaoa-reg3", "heisenberg-3d"])
@pytest.mark.parametrize("topo", ["grid:3x3", "montreal27", "line:8"])
def test_schedules_are_complete_and_valid(family, topo):
    for seed in range(3):
        h = BenchmarkSpec(family, 8, seed).hamiltonians()[0]
        t = preset(topo)
        res = compile_hamiltonian(h, t, seed=seed)
        rp, singles = res.routed, unify_terms(h)[1]
        for method in ("hybrid", "generic"):
            sc = schedule(rp, singles, method)
            sc.check_complete(rp.swaps_inserted)
            assert sc.final_map == rp.maps[-1]
            assert sc.swaps_dressed == rp.swaps_dressed
        assert schedule(rp, singles, "hybrid").depth_blocks <= schedule(rp, singles, "generic").depth_blocks


def test_coloring_uses_at_most_2_delta_minus_1_colors():
    h = BenchmarkSpec("heisenberg-2d", 12, 0).hamiltonians()[0]
    blocks, singles = unify_terms(h)
    sc = color_schedule(blocks, singles, QubitMap.identity(12))
    deg = np.bincount(np.array([b.pair for b in blocks]).ravel())
    assert sc.depth_blocks <= 2 * deg.max() - 1
    sc.check_complete(0)


def test_heisenberg_chain_colours_in_two_cycles():
    h = BenchmarkSpec("heisenberg-1d", 30, 0).hamiltonians()[0]
    blocks, singles = unify_terms(h)
    assert color_schedule(blocks, singles).depth_blocks == 2


def test_singles_follow_last_two_qubit_gate():
    h = build_hamiltonian(3, [
        PauliTerm("ZZ", (0, 1), 1.0), PauliTerm("ZZ", (1, 2), 1.0), PauliTerm("X", (1,), 0.5),
        PauliTerm("X", (0,), 0.5), PauliTerm("Z", (1,), 0.2),
    ])
    blocks, singles = unify_terms(h)
    sc = color_schedule(blocks, singles, QubitMap.identity(3))
    when = {op.index: t for t, s in enumerate(sc.singles_placement) for op in s}
    last1 = max(t for t, c in enumerate(sc.cycles) for op in c if 1 in op.qubits)
    assert when[0] == last1 + 1 and when[2] == last1 + 2  # consecutive, in input order
    order = sc.emitted_order()
    assert order.index(("single", 0)) < order.index(("single", 2))


def test_replay_rejects_overlap_and_wrong_pairs():
    blocks = [TwoQubitBlock(p, (PauliTerm("ZZ", p, 0.4),), 1.0) for p in [(0, 1), (1, 2)]]
    qm = QubitMap.identity(3)
    topo = preset("line:3")
    with pytest.raises(ScheduleError):
        ScheduledCircuit(3, 3, blocks, [], [[Op("block", 0, (0, 1)), Op("block", 1, (1, 2))]], [], qm, topo)
    with pytest.raises(ScheduleError):
        ScheduledCircuit(3, 3, blocks, [], [[Op("block", 0, (1, 2))]], [], qm, topo)
    with pytest.raises(ScheduleError):
        ScheduledCircuit(3, 3, blocks, [], [[Op("swap", None, (0, 2))]], [], qm, topo)


def test_compact_is_order_respecting():
    ops = [[Op("block", 0, (0, 1))], [Op("swap", None, (2, 3))], [Op("block", 1, (1, 2))]]
    out = compact(ops, 4)
    # the SWAP waits for nothing on 2,3 so it joins cycle 0; block 1 follows both
    assert len(out) == 2 and Op("swap", None, (2, 3)) in out[0]


def test_coloring_rejects_swaps():
    rp = alap_fixture()
    with pytest.raises(UnsupportedSchedule):
        schedule(rp, (), "coloring")
    with pytest.raises(ValueError):
        schedule(rp, (), "sideways")
