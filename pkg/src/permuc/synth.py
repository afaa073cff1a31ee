"""Two-qubit synthesis and hardware-level metrics.

Blocks are decomposed through the magic-basis (KAK) form

    U = g * K1 * exp(i (c1 XX + c2 YY + c3 ZZ)) * K2

with ``K1``, ``K2`` local. The coordinates are reduced to a canonical Weyl
chamber, which fixes the minimal CNOT count (0-3). For the CNOT and CZ gate
sets a template with that many CNOTs is built, its own KAK form is matched
against the block's, and the leftover local factors are emitted as Z-Y-Z
rotations. SYC and iSWAP use a gate-count model instead of exact synthesis.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from typing import Iterable, Sequence

import numpy as np

from .ir import (
    PAULI,
    SWAP_MATRIX,
    Basis,
    Circuit,
    Rot,
    TwoQubitBlock,
    Unitary2Q,
)

# local matrices use kron(op_first, op_second); CX01 has the first qubit as control
CX01 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
CX10 = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

XX = np.kron(PAULI["X"], PAULI["X"])
YY = np.kron(PAULI["Y"], PAULI["Y"])
ZZ = np.kron(PAULI["Z"], PAULI["Z"])

_MAGIC = np.array(
    [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]], dtype=complex
) / math.sqrt(2)
_MAGIC_H = _MAGIC.conj().T
# diagonal of XX, YY, ZZ in the magic basis, one column per operator
_SIGNS = np.array([[1, -1, 1], [1, 1, -1], [-1, -1, -1], [-1, 1, 1]], dtype=float)
_SOLVE = np.linalg.inv(np.hstack([np.ones((4, 1)), _SIGNS]))

QUARTER = math.pi / 4
ZERO_TOL = 1e-12  # identity elision
CLASS_TOL = 1e-10  # chamber-boundary decisions
RESIDUAL_TOL = 1e-9


class SynthesisError(RuntimeError):
    pass


def rz(t: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


def ry(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rx(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


ROTATIONS = {"X": rx, "Y": ry, "Z": rz}


def canonical_gate(c: Sequence[float]) -> np.ndarray:
    """``exp(i (c1 XX + c2 YY + c3 ZZ))``."""
    d = np.exp(1j * (_SIGNS @ np.asarray(c, dtype=float)))
    return (_MAGIC * d) @ _MAGIC_H


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max entry deviation between ``a`` and ``b`` after global-phase alignment."""
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(a[k]) < 1e-15:
        return float(np.abs(a - b).max())
    ph = b[k] / a[k]
    ph /= abs(ph)
    return float(np.abs(a * ph - b).max())


@dataclass(frozen=True)
class KAK:
    phase: complex
    k1: np.ndarray
    coords: np.ndarray
    k2: np.ndarray

    def matrix(self) -> np.ndarray:
        return self.phase * self.k1 @ canonical_gate(self.coords) @ self.k2


def kak(u: np.ndarray) -> KAK:
    """Magic-basis decomposition ``u = phase * k1 @ N(c) @ k2`` (non-canonical ``c``)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise SynthesisError(f"expected a 4x4 matrix, got {u.shape}")
    if not np.allclose(u.conj().T @ u, np.eye(4), atol=1e-10, rtol=0):
        raise SynthesisError("matrix is not unitary")
    g = np.linalg.det(u) ** 0.25
    um = _MAGIC_H @ (u / g) @ _MAGIC
    m = um.T @ um
    # a generic real combination splits the shared eigenbasis of Re(m) and Im(m)
    _, p = np.linalg.eigh(m.real + 0.61803398875 * m.imag)
    if np.linalg.det(p) < 0:
        p[:, 0] *= -1
    d = np.sqrt(np.diagonal(p.T @ m @ p))
    o1 = um @ p / d
    if np.linalg.det(o1.real) < 0:
        d[0] *= -1
        o1 = um @ p / d
    sol = _SOLVE @ np.angle(d)
    k1 = _MAGIC @ o1.real @ _MAGIC_H
    k2 = _MAGIC @ p.T @ _MAGIC_H
    return KAK(g * np.exp(1j * sol[0]), k1, sol[1:].copy(), k2)


# Local operators that permute the XX/YY/ZZ axes under conjugation (V N(c) V^dag).
_S = np.diag([1, 1j])
_HALF_X = rx(-math.pi / 2)
_AXIS_SWAP = {
    (0, 1): np.kron(_S, _S),
    (1, 2): np.kron(_HALF_X, _HALF_X),
    (0, 2): np.kron(HADAMARD, HADAMARD),
}
# Local operators flipping the sign of two coordinates; key is the untouched axis.
_FLIP = {2: np.kron(PAULI["Z"], PAULI["I"]), 1: np.kron(PAULI["Y"], PAULI["I"]), 0: np.kron(PAULI["X"], PAULI["I"])}
_AXES = (XX, YY, ZZ)


def canonicalize(c: Sequence[float]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduce ``c`` to the Weyl chamber.

    Returns ``(cc, left, right)`` with ``N(c) == left @ N(cc) @ right`` up to
    global phase. The chamber is ``pi/4 >= c1 >= c2 >= |c3|`` with ``c3 >= 0``
    whenever ``c1 == pi/4``.
    """
    c = np.array(c, dtype=float)
    left = np.eye(4, dtype=complex)
    right = np.eye(4, dtype=complex)

    def shift(k: int, steps: int) -> None:
        # N(c) = N(c + steps*pi/2 e_k) * (i P_k)^(-steps)
        nonlocal right
        c[k] += steps * math.pi / 2
        fix = np.linalg.matrix_power(-1j * _AXES[k], steps % 4)
        right = fix @ right

    def flip(keep: int) -> None:
        nonlocal left, right
        v = _FLIP[keep]
        for k in range(3):
            if k != keep:
                c[k] = -c[k]
        left = left @ v
        right = v @ right

    def swap_axes(i: int, j: int) -> None:
        # N(c) = V^dag N(c') V with c' = c with entries i, j exchanged
        nonlocal left, right
        v = _AXIS_SWAP[(i, j)]
        c[i], c[j] = c[j], c[i]
        left = left @ v.conj().T
        right = v @ right

    for k in range(3):
        steps = -math.floor((c[k] + QUARTER) / (math.pi / 2))
        if c[k] + steps * math.pi / 2 <= -QUARTER + CLASS_TOL:
            steps += 1
        if steps:
            shift(k, steps)
    # sort by magnitude, descending (stable three-element bubble sort)
    for i, j in ((0, 1), (1, 2), (0, 1)):
        if abs(c[j]) > abs(c[i]) + CLASS_TOL:
            swap_axes(i, j)
    if c[0] < 0:
        flip(1)
    if c[1] < 0:
        flip(0)
    if abs(c[0] - QUARTER) < CLASS_TOL and c[2] < 0:
        shift(0, -1)
        flip(1)
    return c, left, right


@dataclass(frozen=True)
class WeylCoords:
    c1: float
    c2: float
    c3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3])

    @property
    def cnot_count(self) -> int:
        c1, c2, c3 = self.c1, self.c2, self.c3
        if max(abs(c1), abs(c2), abs(c3)) < ZERO_TOL:
            return 0
        if abs(c3) < CLASS_TOL and abs(c2) < CLASS_TOL and abs(c1 - QUARTER) < CLASS_TOL:
            return 1
        if abs(c3) < CLASS_TOL:
            return 2
        return 3

    @property
    def cls(self) -> str:
        """Coarse class used by count models: identity, zz or generic."""
        if self.cnot_count == 0:
            return "identity"
        if abs(self.c2) < CLASS_TOL and abs(self.c3) < CLASS_TOL:
            return "zz"
        return "generic"


def weyl_coordinates(u: np.ndarray) -> WeylCoords:
    c, _, _ = canonicalize(kak(u).coords)
    return WeylCoords(*(float(x) for x in c))


def _template(c: np.ndarray, count: int) -> list:
    """Gate list ``[(kind, payload, qubits)]`` with the given CNOT count and class ``c``."""
    a, b, cc = c
    if count == 0:
        return []
    if count == 1:
        return [("2q", "CX", (0, 1))]
    if count == 2:
        # CX (e^{ia X} x e^{ib Z}) CX = exp(i (a XX + b ZZ)), locally (a, b, 0)
        return [
            ("2q", "CX", (0, 1)),
            ("1q", rx(-2 * a), 0),
            ("1q", rz(-2 * b), 1),
            ("2q", "CX", (0, 1)),
        ]
    return [
        ("2q", "CX", (1, 0)),
        ("1q", ry(math.pi / 2 - 2 * b), 1),
        ("2q", "CX", (0, 1)),
        ("1q", rz(2 * cc - math.pi / 2), 0),
        ("1q", ry(math.pi / 2 - 2 * a), 1),
        ("2q", "CX", (1, 0)),
    ]


def _local_matrix(seq: list) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    for kind, payload, q in seq:
        if kind == "2q":
            g = CX01 if q == (0, 1) else CX10
        else:
            g = np.kron(payload, np.eye(2)) if q == 0 else np.kron(np.eye(2), payload)
        u = g @ u
    return u


def kron_factor(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a local 4x4 unitary into ``a, b`` with ``m ~ kron(a, b)``."""
    r = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    uu, s, vh = np.linalg.svd(r)
    if s[1] > 1e-6 * s[0]:
        raise SynthesisError(f"local factor is entangling (singular values {s})")
    a = uu[:, 0].reshape(2, 2) * math.sqrt(s[0])
    b = vh[0].reshape(2, 2) * math.sqrt(s[0])
    return a, b


def zyz(u: np.ndarray, atol: float = ZERO_TOL) -> list[tuple[str, float]]:
    """Z-Y-Z Euler angles of a 2x2 unitary in application order.

    ``u ~ RZ(phi) RY(theta) RZ(lam)`` up to phase; rotations equal to the
    identity (up to sign) are dropped.
    """
    u = np.asarray(u, dtype=complex)
    su = u / np.sqrt(np.linalg.det(u))
    c, d = su[1, 0], su[1, 1]
    theta = 2 * math.atan2(abs(c), abs(d))
    if abs(c) < 1e-14:
        angles = [("Z", 2 * np.angle(d))]
    elif abs(d) < 1e-14:
        angles = [("Z", -2 * np.angle(c)), ("Y", theta)]
    else:
        plus, minus = 2 * np.angle(d), 2 * np.angle(c)
        angles = [("Z", (plus - minus) / 2), ("Y", theta), ("Z", (plus + minus) / 2)]
    out = []
    for axis, t in angles:
        t = math.remainder(float(t), 4 * math.pi)
        if abs(math.remainder(t, 2 * math.pi)) > atol:
            out.append((axis, t))
    return out


def rot_matrix(rots: Iterable[tuple[str, float]]) -> np.ndarray:
    u = np.eye(2, dtype=complex)
    for axis, t in rots:
        u = ROTATIONS[axis](t) @ u
    return u


def _fuse(seq: list) -> list:
    """Merge runs of single-qubit matrices per qubit; 2q gates act as barriers."""
    out = []
    pending: dict[int, np.ndarray] = {}

    def flush(q: int) -> None:
        if q in pending:
            out.append(("1q", pending.pop(q), q))

    for kind, payload, q in seq:
        if kind == "1q":
            pending[q] = payload @ pending[q] if q in pending else payload
        else:
            for x in q:
                flush(x)
            out.append((kind, payload, q))
    for q in sorted(pending):
        flush(q)
    return out


@dataclass(frozen=True)
class LocalCircuit:
    """Synthesized two-qubit circuit on local qubits 0 (first) and 1 (second)."""

    gates: tuple  # ("CX"|"CZ", (i, j)) or ("R", axis, angle, i)
    residual: float

    @property
    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if g[0] != "R")

    def matrix(self) -> np.ndarray:
        u = np.eye(4, dtype=complex)
        for g in self.gates:
            if g[0] == "R":
                m1 = ROTATIONS[g[1]](g[2])
                op = np.kron(m1, np.eye(2)) if g[3] == 0 else np.kron(np.eye(2), m1)
            elif g[0] == "CX":
                op = CX01 if g[1] == (0, 1) else CX10
            else:
                op = CZ
            u = op @ u
        return u


def _emit(seq: list, two: str) -> tuple:
    if two == "CZ":
        conv = []
        for kind, payload, q in seq:
            if kind == "2q":
                t = q[1]
                conv += [("1q", HADAMARD, t), ("2q", "CZ", q), ("1q", HADAMARD, t)]
            else:
                conv.append((kind, payload, q))
        seq = conv
    gates = []
    for kind, payload, q in _fuse(seq):
        if kind == "2q":
            gates.append((payload, q))
        else:
            gates.extend(("R", axis, t, q) for axis, t in zyz(payload))
    return tuple(gates)


def _synth_seq(u: np.ndarray) -> list:
    if np.allclose(u, SWAP_MATRIX, atol=1e-14, rtol=0):
        return [("2q", "CX", (0, 1)), ("2q", "CX", (1, 0)), ("2q", "CX", (0, 1))]
    dec = kak(u)
    cc, l_u, r_u = canonicalize(dec.coords)
    count = WeylCoords(*cc).cnot_count
    tmpl = _template(cc, count)
    t = _local_matrix(tmpl)
    dt = kak(t)
    ct, l_t, r_t = canonicalize(dt.coords)
    if np.abs(ct - cc).max() > 1e-8:
        raise SynthesisError(f"template class {ct} does not match target {cc}")
    # u ~ K1 l_u N(cc) r_u K2 and t ~ L1 l_t N(cc) r_t L2
    inv = lambda x: x.conj().T  # noqa: E731
    left = dec.k1 @ l_u @ inv(l_t) @ inv(dt.k1)
    right = inv(dt.k2) @ inv(r_t) @ r_u @ dec.k2
    ra, rb = kron_factor(right)
    la, lb = kron_factor(left)
    return [("1q", ra, 0), ("1q", rb, 1)] + tmpl + [("1q", la, 0), ("1q", lb, 1)]


def synth_unitary(u: np.ndarray, two: str = "CX") -> LocalCircuit:
    """Exact synthesis of a 4x4 unitary into CX (or CZ) plus rotations."""
    seq = _synth_seq(np.asarray(u, dtype=complex))
    gates = _emit(seq, two)
    lc = LocalCircuit(gates, 0.0)
    res = phase_distance(lc.matrix(), u)
    if res > RESIDUAL_TOL:
        raise SynthesisError(f"synthesis residual {res:.3e} exceeds {RESIDUAL_TOL}")
    return LocalCircuit(gates, res)


def _pure_zz_angle(block: TwoQubitBlock) -> float | None:
    if block.dressed or len(block.terms) != 1 or block.terms[0].normalized_paulis() != "ZZ":
        return None
    return block.angle_scale * block.terms[0].coeff


def synth_cnot(block: TwoQubitBlock, two: str = "CX") -> LocalCircuit:
    """Synthesize a block (optionally dressed) on local qubits (first, second)."""
    theta = _pure_zz_angle(block)
    # generic angles only: multiples of pi/4 are cheaper through the general path
    if theta is not None and two == "CX" and abs(math.remainder(theta, math.pi / 4)) > CLASS_TOL:
        # exp(i theta ZZ) = CX . (I x RZ(-2 theta)) . CX
        gates = (("CX", (0, 1)), ("R", "Z", math.remainder(-2 * theta, 4 * math.pi), 1), ("CX", (0, 1)))
        lc = LocalCircuit(gates, 0.0)
        return LocalCircuit(gates, phase_distance(lc.matrix(), block.matrix))
    return synth_unitary(block.matrix, two)


# --------------------------------------------------------------------- gate sets


@dataclass(frozen=True)
class GateSet:
    name: str = "CNOT"
    generic_cost: int = 3
    model_costs: dict = field(default_factory=lambda: {"zz": 2, "identity": 0})

    def __post_init__(self):
        name = self.name.upper()
        if name == "CX":
            name = "CNOT"
        if name not in ("CNOT", "CZ", "SYC", "ISWAP"):
            raise ValueError(f"unknown gate set {self.name!r}")
        object.__setattr__(self, "name", name)
        costs = dict(self.model_costs)
        costs.setdefault("identity", 0)
        object.__setattr__(self, "model_costs", costs)
        if self.generic_cost < 0 or any(v < 0 for v in costs.values()):
            raise ValueError("gate costs must be non-negative")
        if self.generic_cost < max(costs.values()):
            raise ValueError("generic_cost must be at least every model cost")

    @property
    def exact(self) -> bool:
        return self.name in ("CNOT", "CZ")

    @property
    def basis(self) -> str:
        return {"CNOT": "CX", "CZ": "CZ", "SYC": "SYC", "ISWAP": "ISWAP"}[self.name]

    def cost(self, cls: str) -> int:
        if cls == "generic":
            return self.generic_cost
        return int(self.model_costs.get(cls, self.generic_cost))

    @classmethod
    def from_dict(cls, data: dict) -> "GateSet":
        data = dict(data)
        known = {"name", "generic_cost", "zz_cost"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown gate-set fields: {sorted(extra)}")
        costs = {"zz": int(data.get("zz_cost", 2))}
        return cls(str(data.get("name", "CNOT")), int(data.get("generic_cost", 3)), costs)

    @classmethod
    def load(cls, spec: str) -> "GateSet":
        """A gate-set name (``cnot``, ``cz``, ``syc``, ``iswap``) or a JSON file."""
        if spec.lower().endswith(".json"):
            with open(spec) as fh:
                return cls.from_dict(json.load(fh))
        return cls(spec)

    def to_dict(self) -> dict:
        return {"name": self.name, "generic_cost": self.generic_cost, "zz_cost": self.cost("zz")}


# ------------------------------------------------------------------- lowering


@dataclass
class Metrics:
    two_qubit_count: int = 0
    two_qubit_depth: int = 0
    total_depth: int = 0
    swaps: int = 0
    swaps_dressed: int = 0
    depth_blocks: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


class _Cache:
    def __init__(self, gs: GateSet):
        self.gs = gs
        self.mem: dict[int, LocalCircuit] = {}

    def block(self, blk: TwoQubitBlock) -> LocalCircuit:
        key = id(blk)
        if key not in self.mem:
            self.mem[key] = synth_cnot(blk, self.gs.basis)
        return self.mem[key]


def _swap_gates(basis: str) -> tuple:
    return _emit([("2q", "CX", (0, 1)), ("2q", "CX", (1, 0)), ("2q", "CX", (0, 1))], basis)


def _emit_local(circ: Circuit, gates, qubits, basis: str) -> None:
    for g in gates:
        if g[0] == "R":
            circ.append(Rot(g[1], g[2], qubits[g[3]]))
        else:
            i, j = g[1]
            circ.append(Basis(g[0], (qubits[i], qubits[j])))


def lower(sc, gs: GateSet = GateSet(), spans: list | None = None) -> tuple[Circuit, list[int]]:
    """Expand a scheduled circuit into hardware gates on physical qubits.

    Returns the circuit and the two-qubit cost of every emitted gate in order
    (1 per basis gate, model cost per ``Unitary2Q``). If ``spans`` is a list,
    ``(op, start, stop)`` gate ranges are appended to it.
    """
    cache = _Cache(gs)
    circ = Circuit(sc.m, [], tuple(sc.initial_map.phi), tuple(sc.final_map.phi))
    costs: list[int] = []
    qmap = sc.initial_map
    for cyc, sgl in zip(sc.cycles, sc.singles_placement):
        for op in cyc:
            before = len(circ.gates)
            a, b = op.qubits
            if op.index is None:
                u = SWAP_MATRIX
            else:
                blk = sc.blocks[op.index]
                u = blk.dress().matrix if op.is_swap else blk.matrix
            # local frame follows the block's (min, max) logical order
            if qmap.inverse[a] > qmap.inverse[b]:
                a, b = b, a
            if gs.exact:
                if op.index is None:
                    gates = _swap_gates(gs.basis)
                elif op.is_swap:
                    gates = synth_unitary(u, gs.basis).gates
                else:
                    gates = cache.block(blk).gates
                _emit_local(circ, gates, (a, b), gs.basis)
                costs.extend(0 if isinstance(g, Rot) else 1 for g in circ.gates[before:])
            else:
                circ.append(Unitary2Q(u, (a, b)))
                costs.append(gs.cost(weyl_coordinates(u).cls))
            if spans is not None:
                spans.append((op, before, len(circ.gates)))
        for op in sgl:
            before = len(circ.gates)
            (p,) = op.qubits
            for axis, t in zyz(sc.singles[op.index].matrix):
                circ.append(Rot(axis, t, p))
                costs.append(0)
            if spans is not None:
                spans.append((op, before, len(circ.gates)))
        for op in cyc:
            if op.is_swap:
                qmap = qmap.swapped(*op.qubits)
    return circ, costs


def levelize(circ: Circuit, costs: Sequence[int] | None = None) -> tuple[int, int]:
    """Return ``(two_qubit_depth, total_depth)``.

    Two-qubit depth counts two-qubit layers only. Total depth counts every
    layer, with a run of consecutive single-qubit gates on one qubit occupying
    a single layer. A count-model gate of cost ``k`` is expanded as ``k``
    two-qubit layers interleaved with single-qubit layers on both qubits.
    """
    lvl2: dict[int, int] = {}
    lvl: dict[int, int] = {}
    in_run: dict[int, bool] = {}
    d2 = dt = 0

    def one(q: int) -> None:
        nonlocal dt
        if not in_run.get(q, False):
            lvl[q] = lvl.get(q, 0) + 1
            in_run[q] = True
        dt = max(dt, lvl[q])

    def two(a: int, b: int) -> None:
        nonlocal d2, dt
        t = max(lvl2.get(a, 0), lvl2.get(b, 0)) + 1
        lvl2[a] = lvl2[b] = t
        d2 = max(d2, t)
        t = max(lvl.get(a, 0), lvl.get(b, 0)) + 1
        lvl[a] = lvl[b] = t
        in_run[a] = in_run[b] = False
        dt = max(dt, t)

    for i, g in enumerate(circ.gates):
        if isinstance(g, Unitary2Q):
            k = costs[i] if costs is not None else 3
            a, b = g.qubits
            # a level-aligned local layer on both qubits
            one(a)
            one(b)
            for _ in range(k):
                two(a, b)
                one(a)
                one(b)
        elif len(g.qubits) == 2:
            two(*g.qubits)
        else:
            one(g.qubits[0])
    return d2, dt


def count_hw(sc, gs: GateSet = GateSet()) -> Metrics:
    circ, costs = lower(sc, gs)
    d2, dt = levelize(circ, costs)
    return Metrics(
        two_qubit_count=int(sum(costs)),
        two_qubit_depth=d2,
        total_depth=dt,
        swaps=sc.swaps,
        swaps_dressed=sc.swaps_dressed,
        depth_blocks=sc.depth_blocks,
    )


def count_layers(layers: Sequence, gs: GateSet = GateSet()) -> Metrics:
    """Metrics of consecutive layers run back to back."""
    gates, costs = [], []
    for sc in layers:
        circ, c = lower(sc, gs)
        gates.extend(circ.gates)
        costs.extend(c)
    m = layers[0].m if layers else 0
    d2, dt = levelize(Circuit(m, gates), costs)
    return Metrics(
        two_qubit_count=int(sum(costs)),
        two_qubit_depth=d2,
        total_depth=dt,
        swaps=sum(sc.swaps for sc in layers),
        swaps_dressed=sum(sc.swaps_dressed for sc in layers),
        depth_blocks=sum(sc.depth_blocks for sc in layers),
    )
