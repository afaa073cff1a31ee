"""Dense-unitary oracle for compiled circuits.

Global matrices are little-endian: qubit 0 is the least significant bit of
the basis-state index. A compiled circuit is accepted when

    U_compiled == P(final) * embed(U_ref) * P(initial)^dag

up to global phase, where ``U_ref`` is the product of the Hamiltonian's
operators in the order the schedule emits them and ``P`` places logical
qubits onto physical ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ir import Basis, Block, Circuit, Hamiltonian, Rot, Single, Swap, SWAP_MATRIX, Unitary2Q, unify_terms
from .synth import CX01, CZ, GateSet, ROTATIONS, lower, phase_distance

DEFAULT_CAP = 12
TOL = 1e-9


class CapExceeded(ValueError):
    pass


# SYC = fSim(pi/2, pi/6); ISWAP as usual. Only used when such gates are applied directly.
_ISWAP = np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex)
_SYC = np.array(
    [[1, 0, 0, 0], [0, 0, -1j, 0], [0, -1j, 0, 0], [0, 0, 0, np.exp(-1j * np.pi / 6)]], dtype=complex
)
_BASIS = {"CX": CX01, "CZ": CZ, "ISWAP": _ISWAP, "SYC": _SYC}


def apply_gate(state: np.ndarray, op: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Apply ``op`` (kron order: first listed qubit most significant) to every column.

    ``state`` has shape ``(2,)*n + (cols,)`` with axis ``n-1-q`` holding qubit ``q``.
    """
    k = len(qubits)
    axes = [n - 1 - q for q in qubits]
    t = op.reshape((2,) * (2 * k))
    out = np.tensordot(t, state, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def _gate_matrix(g) -> tuple[np.ndarray, tuple[int, ...]]:
    if isinstance(g, Rot):
        return ROTATIONS[g.axis](g.angle), (g.qubit,)
    if isinstance(g, Basis):
        return _BASIS[g.name], g.qubits
    if isinstance(g, Unitary2Q):
        return g.matrix, g.qubits
    if isinstance(g, Block):
        return g.block.matrix, g.qubits
    if isinstance(g, Swap):
        return SWAP_MATRIX, g.qubits
    if isinstance(g, Single):
        return g.op.matrix, (g.qubit,)
    raise TypeError(f"unsupported gate {g!r}")


def circuit_unitary(c: Circuit, n: int | None = None, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Dense unitary of ``c`` on ``n`` qubits (default ``c.n``)."""
    n = c.n if n is None else n
    if n > cap:
        raise CapExceeded(f"{n} qubits exceeds the simulation cap of {cap}")
    dim = 1 << n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        m, qs = _gate_matrix(g)
        if any(q >= n for q in qs):
            raise ValueError(f"gate {g} outside {n} qubits")
        state = apply_gate(state, m, qs, n)
    return state.reshape(dim, dim)


def embed(op: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """``op`` on ``qubits`` of an ``n``-qubit register."""
    return reference_unitary([(op, tuple(qubits))], n, cap=n)


def full_maps(sc, start: Sequence[int] | None = None) -> tuple[list[int], list[int]]:
    """Positions of every physical qubit's content before and after ``sc``.

    Entries ``0..n-1`` follow the logical qubits; the rest track the contents
    of initially unused physical qubits, which SWAPs move around too.
    """
    if start is None:
        phi = list(sc.initial_map.phi)
        used = set(phi)
        start = phi + [p for p in range(sc.m) if p not in used]
    pos = list(start)
    owner = {p: i for i, p in enumerate(pos)}
    for cyc in sc.cycles:
        for op in cyc:
            if op.is_swap:
                a, b = op.qubits
                ia, ib = owner[a], owner[b]
                pos[ia], pos[ib] = b, a
                owner[a], owner[b] = ib, ia
    return list(start), pos


def permutation_matrix(dest: Sequence[int], n: int) -> np.ndarray:
    """Unitary sending the state of qubit ``q`` to qubit ``dest[q]``."""
    dim = 1 << n
    idx = np.arange(dim)
    out = np.zeros(dim, dtype=np.int64)
    for q, d in enumerate(dest):
        out |= ((idx >> q) & 1) << d
    p = np.zeros((dim, dim), dtype=complex)
    p[out, idx] = 1
    return p


@dataclass
class VerifyReport:
    ok: bool
    max_dev: float
    emitted_order: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    duplicated: list = field(default_factory=list)
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "max_dev": self.max_dev,
            "emitted_order": [list(x) for x in self.emitted_order],
            "missing": self.missing,
            "duplicated": self.duplicated,
            "message": self.message,
        }


def reference_unitary(ops: Sequence[tuple[np.ndarray, tuple[int, ...]]], n: int, cap: int = DEFAULT_CAP):
    """Product of logical operators ``(matrix, qubits)`` in the given order."""
    if n > cap:
        raise CapExceeded(f"{n} qubits exceeds the simulation cap of {cap}")
    dim = 1 << n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for m, qs in ops:
        state = apply_gate(state, m, qs, n)
    return state.reshape(dim, dim)


def check_order(emitted: Sequence[tuple[str, int]], n_blocks: int, n_singles: int) -> tuple[list, list]:
    seen: dict[tuple[str, int], int] = {}
    for key in emitted:
        seen[key] = seen.get(key, 0) + 1
    expected = [("block", i) for i in range(n_blocks)] + [("single", i) for i in range(n_singles)]
    missing = [k for k in expected if k not in seen]
    dup = [k for k, v in seen.items() if v > 1]
    return missing, dup


def verify_circuit(
    circ: Circuit,
    emitted: Sequence[tuple[str, int]],
    blocks,
    singles,
    n: int,
    initial: Sequence[int],
    final: Sequence[int],
    cap: int = DEFAULT_CAP,
) -> VerifyReport:
    """Compare a lowered circuit on physical qubits with the emitted-order reference.

    ``initial`` and ``final`` are full content positions as from :func:`full_maps`.
    """
    missing, dup = check_order(emitted, len(blocks), len(singles))

    def describe(keys):
        return [
            {"kind": k, "index": i, "qubits": list(blocks[i].pair if k == "block" else (singles[i].qubit,))}
            for k, i in keys
        ]

    if missing or dup:
        return VerifyReport(
            False, float("inf"), list(emitted), describe(missing), describe(dup), "operator multiset mismatch"
        )
    touched = set(initial[:n])
    for g in circ.gates:
        touched.update(g.qubits)
    # only contents that start on a touched qubit can move
    slots = list(range(n)) + [j for j in range(n, len(initial)) if initial[j] in touched]
    k = len(slots)
    if k > cap:
        raise CapExceeded(f"{k} touched qubits exceeds the simulation cap of {cap}")
    where = {p: i for i, p in enumerate(sorted(initial[j] for j in slots))}
    local = Circuit(k, [_relabel(g, where) for g in circ.gates])
    u_c = circuit_unitary(local, k, cap)

    ops = []
    for kind, i in emitted:
        if kind == "block":
            ops.append((blocks[i].matrix, blocks[i].pair))
        else:
            ops.append((singles[i].matrix, (singles[i].qubit,)))
    u_ref = reference_unitary(ops, k, cap)
    p_in = permutation_matrix([where[initial[j]] for j in slots], k)
    p_out = permutation_matrix([where[final[j]] for j in slots], k)
    expected = p_out @ u_ref @ p_in.conj().T
    dev = phase_distance(u_c, expected)
    return VerifyReport(bool(dev < TOL), dev, list(emitted))


def _relabel(g, where: dict):
    if isinstance(g, Rot):
        return Rot(g.axis, g.angle, where[g.qubit])
    if isinstance(g, Basis):
        return Basis(g.name, tuple(where[q] for q in g.qubits))
    if isinstance(g, Unitary2Q):
        return Unitary2Q(g.matrix, tuple(where[q] for q in g.qubits))
    raise TypeError(f"cannot relabel {g!r}")


def verify_permutation_equivalence(sc, h: Hamiltonian | None = None, gs: GateSet = GateSet(), cap: int = DEFAULT_CAP):
    """Check a scheduled circuit against the Hamiltonian it was compiled from.

    With ``h`` given, blocks and single-qubit ops are rebuilt from it so the
    reference does not rely on the compiled object's own matrices.
    """
    if h is not None:
        blocks, singles = unify_terms(h)
        n = h.n
    else:
        blocks, singles, n = sc.blocks, sc.singles, sc.n
    circ, _ = lower(sc, gs)
    initial, final = full_maps(sc)
    return verify_circuit(circ, sc.emitted_order(), blocks, singles, n, initial, final, cap)


def verify_multilayer(layers: Sequence, gs: GateSet = GateSet(), cap: int = DEFAULT_CAP, hams=None) -> VerifyReport:
    """Verify a stack of layers compiled for consecutive application.

    Each layer must start where the previous one ended, and the full product
    must equal the product of the per-layer references. ``hams`` optionally
    gives one Hamiltonian per layer (for QAOA, distinct parameters).
    """
    if not layers:
        return VerifyReport(True, 0.0)
    for i in range(1, len(layers)):
        if layers[i].initial_map != layers[i - 1].final_map:
            return VerifyReport(False, float("inf"), message=f"layer {i} does not start at layer {i - 1}'s final map")
    gates = []
    emitted = []
    all_blocks, all_singles = [], []
    initial, pos = full_maps(layers[0])
    for li, sc in enumerate(layers):
        if li:
            _, pos = full_maps(sc, pos)
        circ, _ = lower(sc, gs)
        gates.extend(circ.gates)
        if hams is not None:
            blocks, singles = unify_terms(hams[li])
        else:
            blocks, singles = sc.blocks, sc.singles
        b0, s0 = len(all_blocks), len(all_singles)
        all_blocks += list(blocks)
        all_singles += list(singles)
        for kind, i in sc.emitted_order():
            emitted.append((kind, i + (b0 if kind == "block" else s0)))
    first, last = layers[0], layers[-1]
    circ = Circuit(first.m, gates, tuple(first.initial_map.phi), tuple(last.final_map.phi))
    return verify_circuit(circ, emitted, all_blocks, all_singles, first.n, initial, pos, cap)
