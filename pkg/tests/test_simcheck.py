import numpy as np
import pytest

from conftest import random_hamiltonian, term_unitary
from permuc.benchgen import BenchmarkSpec
from permuc.ir import Basis, Circuit, Rot, unify_terms
from permuc.pipeline import compile_hamiltonian
from permuc.simcheck import (
    CapExceeded, circuit_unitary, full_maps, permutation_matrix, verify_circuit, verify_permutation_equivalence,
)
from permuc.synth import GateSet, lower, phase_distance, rx
from permuc.topology import preset


def test_circuit_unitary_matches_kron():
    c = Circuit(3, [Rot("X", 0.4, 2), Basis("CX", (0, 1))])
    # little-endian: qubit 2 is the leftmost kron factor
    cx_q0_ctrl = np.kron(np.eye(2), np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]]))
    ref = cx_q0_ctrl @ np.kron(rx(0.4), np.eye(4))
    np.testing.assert_allclose(circuit_unitary(c), ref, atol=1e-14)


def test_permutation_matrix_moves_bits():
    p = permutation_matrix([2, 0, 1], 3)
    # basis state with only qubit 0 set goes to only qubit 2 set
    assert p[0b100, 0b001] == 1
    assert p[0b001, 0b010] == 1


def dense_reference(h, emitted, phys_of_logical_in, phys_of_logical_out, m):
    """Expected unitary from scipy expm, independent of the package's matrices."""
    n = h.n
    blocks, singles = unify_terms(h)
    u = np.eye(1 << n, dtype=complex)
    for kind, i in emitted:
        terms = blocks[i].terms if kind == "block" else (singles[i].term,)
        for t in terms:
            u = term_unitary(t, n, h.time) @ u
    # embed logical register into m physical qubits (extra qubits idle in |0..> sector ignored)
    def perm(dest):
        d = np.zeros((1 << m, 1 << m), dtype=complex)
        for x in range(1 << m):
            y = 0
            for q in range(m):
                y |= ((x >> q) & 1) << dest[q]
            d[y, x] = 1
        return d

    big = np.kron(np.eye(1 << (m - n)), u)
    return perm(phys_of_logical_out) @ big @ perm(phys_of_logical_in).conj().T


@pytest.mark.parametrize("seed", range(6))
def test_verifier_agrees_with_scipy_oracle(seed):
    rng = np.random.default_rng(seed)
    h = random_hamiltonian(5, rng)
    topo = preset("line:5")
    res = compile_hamiltonian(h, topo, seed=seed)
    circ, _ = lower(res.sc)
    start, end = full_maps(res.sc)
    expected = dense_reference(h, res.sc.emitted_order(), start, end, 5)
    assert phase_distance(circuit_unitary(circ), expected) < 1e-9
    assert verify_permutation_equivalence(res.sc, h).ok


@pytest.mark.parametrize("gs", ["cnot", "cz", "syc", "iswap"])
@pytest.mark.parametrize("topo", ["grid:2x3", "montreal27"])
def test_verify_compiled(gs, topo):
    for seed in range(3):
        h = random_hamiltonian(6, np.random.default_rng(seed))
        res = compile_hamiltonian(h, preset(topo), GateSet.load(gs), seed)
        rep = verify_permutation_equivalence(res.sc, h, GateSet.load(gs))
        assert rep.ok and rep.max_dev < 1e-9


def _compiled(seed=0):
    h = BenchmarkSpec("nnn-heisenberg", 6, seed).hamiltonians()[0]
    res = compile_hamiltonian(h, preset("grid:2x3"), seed=seed)
    blocks, singles = unify_terms(h)
    circ, _ = lower(res.sc)
    start, end = full_maps(res.sc)
    return res.sc, blocks, singles, circ, start, end


def test_negative_reordered_reference_fails():
    sc, blocks, singles, circ, start, end = _compiled()
    order = sc.emitted_order()
    assert verify_circuit(circ, order, blocks, singles, 6, start, end).ok
    bad = verify_circuit(circ, order[::-1], blocks, singles, 6, start, end)
    assert not bad.ok and bad.max_dev > 1e-3


def test_negative_deleted_gate_fails():
    sc, blocks, singles, circ, start, end = _compiled()
    k = next(i for i, g in enumerate(circ.gates) if isinstance(g, Basis))
    gates = circ.gates[:k] + circ.gates[k + 1:]
    bad = verify_circuit(Circuit(circ.n, gates), sc.emitted_order(), blocks, singles, 6, start, end)
    assert not bad.ok


def test_negative_wrong_final_map_fails():
    sc, blocks, singles, circ, start, end = _compiled()
    wrong = list(end)
    wrong[0], wrong[1] = wrong[1], wrong[0]
    assert not verify_circuit(circ, sc.emitted_order(), blocks, singles, 6, start, wrong).ok


def test_missing_and_duplicate_ops_reported():
    sc, blocks, singles, circ, start, end = _compiled()
    order = sc.emitted_order()
    rep = verify_circuit(circ, order[1:] + [order[2]], blocks, singles, 6, start, end)
    assert not rep.ok and rep.missing and rep.duplicated
    assert rep.missing[0]["kind"] == order[0][0]


def test_cap():
    sc, blocks, singles, circ, start, end = _compiled()
    with pytest.raises(CapExceeded):
        verify_circuit(circ, sc.emitted_order(), blocks, singles, 6, start, end, cap=4)
    with pytest.raises(CapExceeded):
        circuit_unitary(Circuit(14, []))
