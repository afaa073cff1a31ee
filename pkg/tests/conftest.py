import itertools
from collections import deque

import numpy as np
import pytest
from scipy.linalg import expm

from permuc.ir import PAULI, PauliTerm, build_hamiltonian


def bfs_distances(m, edges):
    adj = [[] for _ in range(m)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    out = np.full((m, m), -1, dtype=np.int64)
    for s in range(m):
        out[s, s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v in adj[u]:
                if out[s, v] < 0:
                    out[s, v] = out[s, u] + 1
                    q.append(v)
    return out


def pauli_string_matrix(paulis, qubits, n):
    """Little-endian dense operator of a Pauli string."""
    ops = [PAULI["I"]] * n
    for p, q in zip(paulis, qubits):
        ops[n - 1 - q] = PAULI[p]
    out = ops[0]
    for o in ops[1:]:
        out = np.kron(out, o)
    return out


def term_unitary(term, n, t=1.0):
    return expm(1j * t * term.coeff * pauli_string_matrix(term.paulis, term.qubits, n))


def random_hamiltonian(n, rng, n_pairs=None, singles=True):
    pairs = list(itertools.combinations(range(n), 2))
    k = n_pairs or int(rng.integers(1, len(pairs) + 1))
    chosen = [pairs[i] for i in rng.choice(len(pairs), k, replace=False)]
    terms = []
    for p in chosen:
        for s in rng.choice(["XX", "YY", "ZZ", "XZ", "ZY"], int(rng.integers(1, 3)), replace=False):
            terms.append(PauliTerm(str(s), p, float(rng.uniform(0.1, 3.0))))
    if singles:
        for q in range(n):
            if rng.random() < 0.5:
                terms.append(PauliTerm(str(rng.choice(["X", "Y", "Z"])), (q,), float(rng.uniform(0.1, 3.0))))
    return build_hamiltonian(n, terms)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (bool(ok), detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
