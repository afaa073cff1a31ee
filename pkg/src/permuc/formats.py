"""Text and JSON file formats.

Compiled circuits are plain text, one hardware gate per line::

    # permuc circuit 1
    # n 6
    # m 6
    # gateset CNOT
    # layers 1
    # initial_map 0 3 1 4 2 5
    # final_map 0 3 4 1 2 5
    # layer 0
    # cycle 0
    # block 3 0 3
    CX 0 3
    RZ -0.6 3
    CX 0 3
    # dressed 5 1 4
    ...

``#`` lines are comments to a gate reader but carry the bookkeeping the
verifier needs: which operator each group of gates implements (``block``,
``dressed``, ``single``) and where plain SWAPs sit (``swap``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ir import Basis, Circuit, Rot, Unitary2Q
from .synth import GateSet, lower

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


def _fmt(x: float) -> str:
    return repr(float(x))


def _gate_line(g) -> str:
    if isinstance(g, Rot):
        return f"R{g.axis} {_fmt(g.angle)} {g.qubit}"
    if isinstance(g, Basis):
        return f"{g.name} {g.qubits[0]} {g.qubits[1]}"
    if isinstance(g, Unitary2Q):
        vals = " ".join(_fmt(v) for z in np.asarray(g.matrix).ravel() for v in (z.real, z.imag))
        return f"U2Q {g.qubits[0]} {g.qubits[1]} {vals}"
    raise FormatError(f"cannot serialise {g!r}")


def write_circuit(layers: Sequence, gs: GateSet) -> str:
    """Serialise one or more consecutive scheduled layers."""
    first, last = layers[0], layers[-1]
    out = [
        f"# permuc circuit {FORMAT_VERSION}",
        f"# n {first.n}",
        f"# m {first.m}",
        f"# gateset {gs.name}",
        f"# layers {len(layers)}",
        "# initial_map " + " ".join(map(str, first.initial_map.phi)),
        "# final_map " + " ".join(map(str, last.final_map.phi)),
    ]
    for li, sc in enumerate(layers):
        out.append(f"# layer {li}")
        spans: list = []
        circ, _ = lower(sc, gs, spans)
        by_op = {id(op): (start, stop) for op, start, stop in spans}
        for t, (cyc, sgl) in enumerate(zip(sc.cycles, sc.singles_placement)):
            out.append(f"# cycle {t}")
            for op in list(cyc) + list(sgl):
                if op.kind == "single":
                    out.append(f"# single {op.index} {op.qubits[0]}")
                elif op.index is None:
                    out.append(f"# swap {op.qubits[0]} {op.qubits[1]}")
                elif op.is_swap:
                    out.append(f"# dressed {op.index} {op.qubits[0]} {op.qubits[1]}")
                else:
                    out.append(f"# block {op.index} {op.qubits[0]} {op.qubits[1]}")
                start, stop = by_op[id(op)]
                out.extend(_gate_line(g) for g in circ.gates[start:stop])
    return "\n".join(out) + "\n"


@dataclass
class ParsedCircuit:
    n: int
    m: int
    gateset: str
    layers: int
    initial_map: list[int]
    final_map: list[int]
    circuit: Circuit
    emitted: list = field(default_factory=list)  # (kind, index, layer)
    full_initial: list[int] = field(default_factory=list)
    full_final: list[int] = field(default_factory=list)


def parse_circuit(text: str) -> ParsedCircuit:
    header: dict[str, list[str]] = {}
    gates = []
    emitted = []
    swaps = []
    layer = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            if line.startswith("#"):
                parts = line[1:].split()
                if not parts:
                    continue
                key, args = parts[0], parts[1:]
                if key in ("n", "m", "gateset", "layers", "initial_map", "final_map", "permuc"):
                    header[key] = args
                elif key == "layer":
                    layer = int(args[0])
                elif key in ("block", "dressed"):
                    emitted.append(("block", int(args[0]), layer))
                    if key == "dressed":
                        swaps.append((int(args[1]), int(args[2])))
                elif key == "single":
                    emitted.append(("single", int(args[0]), layer))
                elif key == "swap":
                    swaps.append((int(args[0]), int(args[1])))
                continue
            parts = line.split()
            name = parts[0]
            if name in ("RX", "RY", "RZ"):
                gates.append(Rot(name[1], float(parts[1]), int(parts[2])))
            elif name in ("CX", "CZ", "SYC", "ISWAP"):
                gates.append(Basis(name, (int(parts[1]), int(parts[2]))))
            elif name == "U2Q":
                vals = np.array([float(v) for v in parts[3:]])
                if vals.size != 32:
                    raise FormatError("U2Q needs 32 numbers")
                gates.append(Unitary2Q((vals[0::2] + 1j * vals[1::2]).reshape(4, 4), (int(parts[1]), int(parts[2]))))
            else:
                raise FormatError(f"unknown gate {name!r}")
        except (IndexError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    for key in ("n", "m", "initial_map", "final_map"):
        if key not in header:
            raise FormatError(f"missing header field {key!r}")
    n, m = int(header["n"][0]), int(header["m"][0])
    initial = [int(x) for x in header["initial_map"]]
    final = [int(x) for x in header["final_map"]]
    used = set(initial)
    full_initial = initial + [p for p in range(m) if p not in used]
    pos = list(full_initial)
    owner = {p: i for i, p in enumerate(pos)}
    for a, b in swaps:
        ia, ib = owner[a], owner[b]
        pos[ia], pos[ib] = b, a
        owner[a], owner[b] = ib, ia
    if pos[:n] != final:
        raise FormatError("SWAP markers do not reproduce the final map")
    circ = Circuit(m, gates, tuple(initial), tuple(final))
    return ParsedCircuit(
        n, m, header.get("gateset", ["CNOT"])[0], int(header.get("layers", ["1"])[0]),
        initial, final, circ, emitted, full_initial, pos,
    )


def trace_json(rp, extra: dict | None = None) -> str:
    data = {
        "maps": [list(qm.phi) for qm in rp.maps],
        "gate_sets": [
            {
                "blocks": list(s.blocks),
                "swap": list(s.swap) if s.swap is not None else None,
                "dressed_block": s.swap_block,
            }
            for s in rp.stages
        ],
        "swaps_inserted": rp.swaps_inserted,
        "swaps_dressed": rp.swaps_dressed,
        "steps": rp.trace,
    }
    if extra:
        data.update(extra)
    return json.dumps(data, indent=2, sort_keys=True)


def schedule_json(sc) -> dict:
    """Cycle table: per cycle the two-qubit ops and single-qubit ops."""
    def op_dict(op):
        return {"kind": "dressed" if op.dressed else op.kind, "index": op.index, "qubits": list(op.qubits)}

    return {
        "cycles": [
            {"two_qubit": [op_dict(o) for o in c], "single": [op_dict(o) for o in s]}
            for c, s in zip(sc.cycles, sc.singles_placement)
        ]
    }
