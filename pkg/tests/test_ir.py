import json

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import pauli_string_matrix, term_unitary
from permuc.ir import (
    SWAP_MATRIX, Hamiltonian, HamiltonianError, PauliTerm, TwoQubitBlock, build_hamiltonian,
    is_unitary, pauli_exp, unify_terms,
)


@pytest.mark.parametrize("paulis", ["X", "Y", "Z", "XX", "YZ", "ZZ"])
def test_pauli_exp_matches_expm(paulis):
    op = pauli_string_matrix(paulis[::-1], range(len(paulis)), len(paulis))
    np.testing.assert_allclose(pauli_exp(paulis, 0.37), expm(0.37j * op), atol=1e-13)


def test_block_matrix_is_product_of_exponentials():
    terms = [PauliTerm("XX", (1, 0), 0.4), PauliTerm("ZY", (0, 1), 1.1)]
    blk = TwoQubitBlock((0, 1), tuple(terms), 0.5)
    # kron order: first qubit of the pair is the most significant factor
    ref = np.eye(4, dtype=complex)
    for t in terms:
        ref = term_unitary(t, 2, 0.5) @ ref
    # term_unitary is little-endian, so reorder the qubits to (q0 msb)
    ref = SWAP_MATRIX @ ref @ SWAP_MATRIX
    np.testing.assert_allclose(blk.matrix, ref, atol=1e-12)
    assert is_unitary(blk.matrix)


def test_reversed_qubit_term_is_normalised():
    a = TwoQubitBlock((0, 1), (PauliTerm("XZ", (1, 0), 0.3),), 1.0)
    b = TwoQubitBlock((0, 1), (PauliTerm("ZX", (0, 1), 0.3),), 1.0)
    np.testing.assert_allclose(a.matrix, b.matrix)


def test_dress_prepends_swap():
    blk = TwoQubitBlock((2, 5), (PauliTerm("ZZ", (2, 5), 0.2),), 1.0)
    d = blk.dress()
    assert d.dressed and d.pair == (2, 5)
    np.testing.assert_allclose(d.matrix, SWAP_MATRIX @ blk.matrix)
    with pytest.raises(ValueError):
        d.dress()


def test_unify_merges_same_pair_in_first_appearance_order():
    h = build_hamiltonian(4, [
        PauliTerm("XX", (2, 3), 1), PauliTerm("ZZ", (0, 1), 1), PauliTerm("X", (0,), 1),
        PauliTerm("YY", (3, 2), 1), PauliTerm("ZZ", (1, 0), 2),
    ])
    blocks, singles = unify_terms(h)
    assert [b.pair for b in blocks] == [(2, 3), (0, 1)]
    assert [len(b.terms) for b in blocks] == [2, 2]
    assert len(singles) == 1 and singles[0].qubit == 0


@pytest.mark.parametrize("bad", [
    dict(paulis="XXX", qubits=(0, 1, 2)),
    dict(paulis="XQ", qubits=(0, 1)),
    dict(paulis="XX", qubits=(1, 1)),
    dict(paulis="X", qubits=(-1,)),
    dict(paulis="XX", qubits=(0,)),
])
def test_term_validation(bad):
    with pytest.raises(HamiltonianError):
        PauliTerm(coeff=1.0, **bad)


def test_nonfinite_and_out_of_range():
    with pytest.raises(HamiltonianError):
        PauliTerm("X", (0,), float("nan"))
    with pytest.raises(HamiltonianError):
        build_hamiltonian(2, [PauliTerm("XX", (0, 2), 1.0)])
    with pytest.raises(HamiltonianError):
        build_hamiltonian(1, [])
    with pytest.raises(HamiltonianError):
        build_hamiltonian(3, [], steps=0)


def test_json_round_trip():
    h = build_hamiltonian(3, [PauliTerm("XY", (0, 2), 0.5), PauliTerm("Z", (1,), -0.25)], time=0.7, steps=3)
    h2 = Hamiltonian.from_json(h.to_json())
    assert h2 == h
    with pytest.raises(HamiltonianError):
        Hamiltonian.from_dict({**json.loads(h.to_json()), "bogus": 1})
    with pytest.raises(HamiltonianError):
        Hamiltonian.from_dict([1, 2])
