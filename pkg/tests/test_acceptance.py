"""End-to-end acceptance checks, one test per criterion."""

import time

import numpy as np

from conftest import record
from synth_oracles import dressed_canonical, min_cnots
from test_scheduler import alap_fixture
from permuc.benchgen import FAMILIES, BenchmarkSpec, baseline_route, expand_layers, gen_nnn
from permuc.ir import PauliTerm, SWAP_MATRIX, TwoQubitBlock, unify_terms
from permuc.pipeline import compile_hamiltonian, compile_nomap
from permuc.router import route
from permuc.scheduler import generic_schedule, hybrid_alap
from permuc.simcheck import verify_multilayer, verify_permutation_equivalence
from permuc.synth import GateSet, count_hw, phase_distance, synth_cnot, synth_unitary
from permuc.topology import preset

TOL = 1e-9


def test_criterion_1_operator_counts():
    worst, bad = 0.0, []
    for fam in FAMILIES:
        if not (fam.startswith("nnn-") or fam == "qaoa-reg3"):
            continue
        for n in (6, 10, 20, 30, 40, 50):
            t0 = time.perf_counter()
            blocks, _ = unify_terms(BenchmarkSpec(fam, n, 0).hamiltonians()[0])
            worst = max(worst, time.perf_counter() - t0)
            want = 3 * n // 2 if fam == "qaoa-reg3" else 2 * n - 3
            if len(blocks) != want:
                bad.append((fam, n, len(blocks), want))
    ok = not bad and worst < 1.0
    record(1, ok, f"mismatches={bad}, slowest instance {worst * 1e3:.1f} ms")
    assert ok


def test_criterion_2_chain30_all_to_all():
    t0 = time.perf_counter()
    h = BenchmarkSpec("heisenberg-1d", 30, 0).hamiltonians()[0]
    res = compile_nomap(h, GateSet("CNOT"))
    # the same instance through the full pipeline on an all-to-all device
    full = compile_hamiltonian(h, preset("all2all", 30), GateSet("CNOT"), seed=0)
    dt = time.perf_counter() - t0
    m = res.metrics
    conventions = {"two_qubit_depth": m.two_qubit_depth, "total_depth": m.total_depth}
    match = [k for k, v in conventions.items() if v == 13]
    ok = (m.two_qubit_count == 87 and m.depth_blocks == 2 and full.metrics.two_qubit_count == 87
          and full.metrics.swaps == 0 and match == ["total_depth"] and dt < 5)
    record(2, ok, f"CNOTs={m.two_qubit_count}, block depth={m.depth_blocks}, depths={conventions}, "
                  f"13 matches {match}, {dt:.2f} s")
    assert ok


def test_criterion_3_semantic_correctness():
    t0 = time.perf_counter()
    worst, count, failures, skipped = 0.0, 0, [], 0
    for fam in FAMILIES:
        for n in (4, 5, 6, 7):
            if fam == "qaoa-reg3" and n % 2:
                continue
            for topo_name in ("grid:2x3", f"line:{n}", "montreal27"):
                topo = preset(topo_name)
                if topo.m < n:
                    skipped += 10
                    continue
                for seed in range(10):
                    h = BenchmarkSpec(fam, n, seed).hamiltonians()[0]
                    res = compile_hamiltonian(h, topo, seed=seed)
                    rep = verify_permutation_equivalence(res.sc, h)
                    count += 1
                    worst = max(worst, rep.max_dev)
                    if not (rep.ok and rep.max_dev < TOL):
                        failures.append((fam, n, topo_name, seed, rep.max_dev))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 120
    record(3, ok, f"{count} instances verified, worst max_dev={worst:.2e}, failures={failures[:3]}, "
                  f"{skipped} skipped (n=7 exceeds grid:2x3), {dt:.1f} s")
    assert ok


def small_nnn_instance():
    return gen_nnn("nnn-heisenberg", 6, 0)


def test_criterion_4_small_nnn_on_grid():
    h = small_nnn_instance()
    topo = preset("grid:2x3")
    res = compile_hamiltonian(h, topo, seed=0)
    blocks, _ = unify_terms(h)
    base = baseline_route(blocks, res.sc.initial_map, topo)
    base_depth = generic_schedule(base).depth_blocks
    sc = res.sc
    ok = (len(blocks) == 9 and sc.swaps <= 2 and sc.swaps_dressed == sc.swaps and len(sc.blocks) <= 9
          and sc.depth_blocks <= 5 and base.swaps_inserted > sc.swaps and base_depth > sc.depth_blocks)
    record(4, ok, f"compiled: {sc.swaps} SWAPs ({sc.swaps_dressed} dressed), depth {sc.depth_blocks}; "
                  f"baseline: {base.swaps_inserted} SWAPs, depth {base_depth}")
    assert ok


def test_criterion_5_alap_fixture():
    rp = alap_fixture()
    hy, ge = hybrid_alap(rp).depth_blocks, generic_schedule(rp).depth_blocks
    ok = hy == 3 and ge == 4
    record(5, ok, f"hybrid_alap {hy} cycles, order-respecting {ge} cycles")
    assert ok


def test_criterion_6_synthesis():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    kinds = ["identity", "cnot", "zz", "planar", "generic", "swap"]
    worst, wrong = 0.0, 0
    for i in range(1000):
        u, _ = dressed_canonical(rng, kinds[i % len(kinds)])
        lc = synth_unitary(u)
        worst = max(worst, phase_distance(lc.matrix(), u))
        wrong += lc.two_qubit_count != min_cnots(u)
    zz_ok = True
    for theta in np.linspace(0.05, 3.0, 25):
        if abs(np.remainder(theta, np.pi / 4)) < 1e-6:
            continue
        blk = TwoQubitBlock((0, 1), (PauliTerm("ZZ", (0, 1), float(theta)),), 1.0)
        a, b = synth_cnot(blk), synth_cnot(blk.dress())
        zz_ok &= a.two_qubit_count == 2 and b.two_qubit_count == 3
        zz_ok &= phase_distance(b.matrix(), SWAP_MATRIX @ blk.matrix) < TOL
    dt = time.perf_counter() - t0
    ok = worst < TOL and wrong == 0 and zz_ok and dt < 30
    record(6, ok, f"1000 cases, worst residual {worst:.1e}, non-minimal counts {wrong}, "
                  f"ZZ->2 / SWAP.ZZ->3: {zz_ok}, {dt:.1f} s")
    assert ok


def test_criterion_7_dominance():
    t0 = time.perf_counter()
    total = swap_ok = depth_ok = skipped = 0
    for topo_name in ("grid", "montreal27", "aspen16"):
        for n in (8, 12, 16, 20):
            topo = preset(topo_name, n)
            if topo.m < n:
                skipped += 10 * len(FAMILIES)
                continue
            for fam in FAMILIES:
                for seed in range(10):
                    h = BenchmarkSpec(fam, n, seed).hamiltonians()[0]
                    res = compile_hamiltonian(h, topo, seed=seed)
                    base = baseline_route(res.routed.blocks, res.sc.initial_map, topo)
                    total += 1
                    swap_ok += res.sc.swaps <= base.swaps_inserted
                    depth_ok += res.sc.depth_blocks <= generic_schedule(res.routed).depth_blocks
    dt = time.perf_counter() - t0
    ok = swap_ok >= 0.95 * total and depth_ok == total and dt < 600
    record(7, ok, f"{total} instances: SWAPs <= baseline on {swap_ok / total:.1%}, "
                  f"hybrid <= generic depth on {depth_ok / total:.1%}, {skipped} skipped (n=20 > aspen16), {dt:.0f} s")
    assert ok


def test_criterion_8_multilayer():
    bad = []
    checked = 0
    for n in (4, 6, 8, 10):
        for seed in range(10):
            for topo_name in ("grid", "line", "montreal27"):
                topo = preset(topo_name, n)
                hams = BenchmarkSpec("qaoa-reg3", n, seed, layers=3).hamiltonians()
                res = compile_hamiltonian(hams[0], topo, seed=seed)
                two = expand_layers(res.sc, 2, hams[:2])
                three = expand_layers(res.sc, 3, hams)
                checked += 1
                if two[-1].final_map != res.sc.initial_map:
                    bad.append(("identity", n, seed, topo_name))
                if sum(s.swaps for s in three) != 3 * res.sc.swaps:
                    bad.append(("swaps", n, seed, topo_name))
                cheap = n <= 6 or (n <= 8 and topo.m == n)  # dense check stays under ~10 qubits
                if cheap and not verify_multilayer(three, hams=hams).ok:
                    bad.append(("verify", n, seed, topo_name))
    ok = not bad
    record(8, ok, f"{checked} QAOA instances: 2 layers return to the initial map, 3-layer SWAPs = 3x; failures={bad[:3]}")
    assert ok


def test_criterion_9_scaling():
    sizes = list(range(10, 51, 5))
    gates, times = [], []
    for n in sizes:
        h = gen_nnn("nnn-heisenberg", n, 0)
        topo = preset("grid", n)
        res = compile_hamiltonian(h, topo, seed=0)
        blocks, singles = unify_terms(h)
        samples = []
        for _ in range(5):
            t0 = time.perf_counter()
            rp = route(blocks, res.sc.initial_map, topo, seed=0)
            hybrid_alap(rp, singles)
            samples.append(time.perf_counter() - t0)
        gates.append(len(blocks))
        times.append(float(np.median(samples)))
    slope = float(np.polyfit(np.log(gates), np.log(times), 1)[0])
    t0 = time.perf_counter()
    big = compile_hamiltonian(gen_nnn("nnn-heisenberg", 50, 0), preset("grid", 50), seed=0)
    count_hw(big.sc)
    full = time.perf_counter() - t0
    ok = slope <= 2.3 and full < 120
    record(9, ok, f"routing+scheduling log-log slope {slope:.2f} over n={sizes[0]}..{sizes[-1]}, "
                  f"50-qubit compile {full:.1f} s")
    assert ok
