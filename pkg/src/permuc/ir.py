"""Core data model: Pauli terms, Hamiltonians, two-qubit blocks and gates.

Local 4x4 matrices on a qubit pair ``(a, b)`` use ``kron(op_a, op_b)``
ordering, i.e. the first qubit of the pair is the most significant bit of the
local index. Global matrices (see :mod:`permuc.simcheck`) are little-endian.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

SWAP_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


class HamiltonianError(ValueError):
    """Raised for malformed Hamiltonians or Pauli terms."""


def pauli_exp(paulis: str, angle: float) -> np.ndarray:
    """Return ``exp(i * angle * P)`` for a Pauli string ``P`` (P^2 = I)."""
    op = PAULI[paulis[0]]
    for p in paulis[1:]:
        op = np.kron(op, PAULI[p])
    dim = op.shape[0]
    return math.cos(angle) * np.eye(dim, dtype=complex) + 1j * math.sin(angle) * op


@dataclass(frozen=True)
class PauliTerm:
    paulis: str
    qubits: tuple[int, ...]
    coeff: float

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "coeff", float(self.coeff))
        if len(self.paulis) not in (1, 2):
            raise HamiltonianError(f"only 1- and 2-local terms supported, got {self.paulis!r}")
        if any(p not in "XYZ" for p in self.paulis):
            raise HamiltonianError(f"Pauli string {self.paulis!r} has characters outside XYZ")
        if len(self.paulis) != len(self.qubits):
            raise HamiltonianError(
                f"Pauli string {self.paulis!r} does not match qubits {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise HamiltonianError(f"duplicate qubit in term {self.paulis} {list(self.qubits)}")
        if any(q < 0 for q in self.qubits):
            raise HamiltonianError(f"negative qubit index in {list(self.qubits)}")
        if not math.isfinite(self.coeff):
            raise HamiltonianError(f"non-finite coefficient {self.coeff}")

    @property
    def pair(self) -> tuple[int, int]:
        a, b = self.qubits
        return (a, b) if a < b else (b, a)

    def normalized_paulis(self) -> str:
        """Pauli string reordered to match :attr:`pair` (ascending qubits)."""
        if len(self.qubits) == 2 and self.qubits[0] > self.qubits[1]:
            return self.paulis[::-1]
        return self.paulis


@dataclass(frozen=True)
class Hamiltonian:
    n: int
    terms: tuple[PauliTerm, ...]
    time: float = 1.0
    steps: int = 1

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Interaction graph edges, in order of first appearance."""
        seen: dict[tuple[int, int], None] = {}
        for t in self.terms:
            if len(t.qubits) == 2:
                seen.setdefault(t.pair, None)
        return list(seen)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "time": self.time,
            "steps": self.steps,
            "terms": [
                {"paulis": t.paulis, "qubits": list(t.qubits), "coeff": t.coeff}
                for t in self.terms
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "Hamiltonian":
        if not isinstance(data, dict):
            raise HamiltonianError("Hamiltonian JSON must be an object")
        unknown = set(data) - {"n", "time", "steps", "terms"}
        if unknown:
            raise HamiltonianError(f"unknown Hamiltonian fields: {sorted(unknown)}")
        if "n" not in data or "terms" not in data:
            raise HamiltonianError("Hamiltonian JSON requires 'n' and 'terms'")
        terms = []
        for raw in data["terms"]:
            extra = set(raw) - {"paulis", "qubits", "coeff"}
            if extra:
                raise HamiltonianError(f"unknown term fields: {sorted(extra)}")
            try:
                terms.append(PauliTerm(raw["paulis"], tuple(raw["qubits"]), raw["coeff"]))
            except KeyError as exc:
                raise HamiltonianError(f"term missing field {exc}") from None
        return build_hamiltonian(
            data["n"], terms, data.get("time", 1.0), data.get("steps", 1)
        )

    @classmethod
    def from_json(cls, text: str) -> "Hamiltonian":
        return cls.from_dict(json.loads(text))


def build_hamiltonian(
    n: int, terms: Iterable[PauliTerm], time: float = 1.0, steps: int = 1
) -> Hamiltonian:
    """Validate ``terms`` against ``n`` and return a :class:`Hamiltonian`."""
    if int(n) != n or n < 2:
        raise HamiltonianError(f"need at least 2 qubits, got n={n}")
    if int(steps) != steps or steps < 1:
        raise HamiltonianError(f"steps must be a positive integer, got {steps}")
    if not math.isfinite(time):
        raise HamiltonianError(f"non-finite evolution time {time}")
    terms = tuple(terms)
    for t in terms:
        if not isinstance(t, PauliTerm):
            raise HamiltonianError(f"expected PauliTerm, got {type(t).__name__}")
        if max(t.qubits) >= n:
            raise HamiltonianError(f"qubit index {max(t.qubits)} out of range for n={n}")
    return Hamiltonian(int(n), terms, float(time), int(steps))


def is_unitary(m: np.ndarray, atol: float = 1e-12) -> bool:
    return np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=atol, rtol=0)


def block_matrix(terms: Sequence[PauliTerm], t: float) -> np.ndarray:
    """Unified 4x4 unitary of same-pair terms, in ascending-qubit tensor order.

    The result is the ordered product of the individual exponentials, first
    term applied first. For mutually commuting terms (XX, YY, ZZ on one pair)
    this equals the exponential of the sum.
    """
    pairs = {term.pair for term in terms}
    if len(pairs) > 1 or any(len(term.qubits) != 2 for term in terms):
        raise HamiltonianError(f"block terms act on differing pairs: {sorted(pairs)}")
    u = np.eye(4, dtype=complex)
    for term in terms:
        u = pauli_exp(term.normalized_paulis(), t * term.coeff) @ u
    return u


@dataclass(frozen=True, eq=False)
class TwoQubitBlock:
    pair: tuple[int, int]
    terms: tuple[PauliTerm, ...]
    angle_scale: float
    dressed: bool = False
    matrix: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        a, b = self.pair
        if a == b:
            raise HamiltonianError(f"block pair needs two distinct qubits, got {self.pair}")
        object.__setattr__(self, "pair", (min(a, b), max(a, b)))
        if self.matrix is None:
            m = block_matrix(self.terms, self.angle_scale)
            if self.dressed:
                m = SWAP_MATRIX @ m
            object.__setattr__(self, "matrix", m)
        self.matrix.setflags(write=False)

    def dress(self) -> "TwoQubitBlock":
        """Return the block merged with a trailing SWAP (matrix ``SWAP @ U``)."""
        if self.dressed:
            raise ValueError("block is already dressed")
        return TwoQubitBlock(self.pair, self.terms, self.angle_scale, True, SWAP_MATRIX @ self.matrix)


@dataclass(frozen=True, eq=False)
class SingleQubitOp:
    qubit: int
    matrix: np.ndarray = field(repr=False)
    term: PauliTerm | None = None

    def __post_init__(self):
        self.matrix.setflags(write=False)


def unify_terms(h: Hamiltonian) -> tuple[list[TwoQubitBlock], list[SingleQubitOp]]:
    """Merge every same-pair group of two-qubit terms into one block.

    Blocks come out in order of first appearance of their pair; single-qubit
    terms are returned separately, one op per term.
    """
    groups: dict[tuple[int, int], list[PauliTerm]] = {}
    singles = []
    for term in h.terms:
        if len(term.qubits) == 2:
            groups.setdefault(term.pair, []).append(term)
        else:
            singles.append(
                SingleQubitOp(term.qubits[0], pauli_exp(term.paulis, h.time * term.coeff), term)
            )
    blocks = [TwoQubitBlock(pair, tuple(ts), h.time) for pair, ts in groups.items()]
    return blocks, singles


# Gate variants. Qubit indices are whatever frame the enclosing circuit uses.


@dataclass(frozen=True, eq=False)
class Block:
    block: TwoQubitBlock
    qubits: tuple[int, int]


@dataclass(frozen=True)
class Swap:
    qubits: tuple[int, int]


@dataclass(frozen=True, eq=False)
class Single:
    op: SingleQubitOp
    qubit: int

    @property
    def qubits(self) -> tuple[int]:
        return (self.qubit,)


BASIS_GATES = ("CX", "CZ", "SYC", "ISWAP")


@dataclass(frozen=True)
class Basis:
    name: str
    qubits: tuple[int, int]

    def __post_init__(self):
        if self.name not in BASIS_GATES:
            raise ValueError(f"unknown basis gate {self.name}")
        if self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{self.name} needs two distinct qubits")


@dataclass(frozen=True)
class Rot:
    axis: str
    angle: float
    qubit: int

    def __post_init__(self):
        if self.axis not in ("X", "Y", "Z"):
            raise ValueError(f"unknown rotation axis {self.axis}")

    @property
    def qubits(self) -> tuple[int]:
        return (self.qubit,)


@dataclass(frozen=True, eq=False)
class Unitary2Q:
    """Arbitrary two-qubit unitary, kept unexpanded (count-model gate sets)."""

    matrix: np.ndarray = field(repr=False)
    qubits: tuple[int, int] = (0, 1)


Gate = Union[Block, Swap, Single, Basis, Rot, Unitary2Q]


@dataclass
class Circuit:
    n: int
    gates: list = field(default_factory=list)
    initial_map: tuple[int, ...] | None = None
    final_map: tuple[int, ...] | None = None

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, gate) -> None:
        if any(q < 0 or q >= self.n for q in gate.qubits):
            raise ValueError(f"gate {gate} out of range for {self.n} qubits")

    def append(self, gate) -> None:
        self._check(gate)
        self.gates.append(gate)

    def count(self, name: str) -> int:
        return sum(1 for g in self.gates if isinstance(g, Basis) and g.name == name)

    @property
    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if len(g.qubits) == 2)
