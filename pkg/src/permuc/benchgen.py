"""Benchmark families, the order-preserving baseline router, layer expansion
and overhead reporting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ir import Hamiltonian, PauliTerm, TwoQubitBlock, build_hamiltonian
from .placement import QubitMap
from .router import DisconnectedError, RoutedProgram, Stage
from .scheduler import ScheduledCircuit, _place_singles
from .synth import Metrics
from .topology import UNREACHABLE, DeviceTopology

FAMILIES = (
    "nnn-ising",
    "nnn-xy",
    "nnn-heisenberg",
    "qaoa-reg3",
    "heisenberg-1d",
    "heisenberg-2d",
    "heisenberg-3d",
)


class BenchmarkError(ValueError):
    pass


def _coeff(rng: np.random.Generator) -> float:
    # uniform on the open interval (0, pi)
    while True:
        x = float(rng.uniform(0.0, math.pi))
        if x > 0.0:
            return x


def _pair_terms(edges, paulis: Sequence[str], rng) -> list[PauliTerm]:
    return [PauliTerm(p, e, _coeff(rng)) for e in edges for p in paulis]


def nnn_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)] + [(i, i + 2) for i in range(n - 2)]


def gen_nnn(family: str, n: int, seed=0, x_field: bool = True, time: float = 1.0) -> Hamiltonian:
    """Linear chain with nearest and next-nearest neighbour couplings."""
    if n < 3:
        raise BenchmarkError(f"NNN models need n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    edges = nnn_edges(n)
    if family == "nnn-ising":
        terms = _pair_terms(edges, ["ZZ"], rng)
        if x_field:
            terms += [PauliTerm("X", (q,), _coeff(rng)) for q in range(n)]
    elif family == "nnn-xy":
        terms = _pair_terms(edges, ["XX", "YY"], rng)
    elif family == "nnn-heisenberg":
        terms = _pair_terms(edges, ["XX", "YY", "ZZ"], rng)
    else:
        raise BenchmarkError(f"unknown NNN family {family!r}")
    return build_hamiltonian(n, terms, time)


def _balanced_factors(n: int, k: int) -> tuple[int, ...]:
    """Most cube-like factorisation of ``n`` into ``k`` ascending factors."""
    best = None
    def rec(rem, start, acc):
        nonlocal best
        if len(acc) == k - 1:
            if rem >= start:
                shape = tuple(acc + [rem])
                key = (max(shape) - min(shape), shape)
                if best is None or key < best[0]:
                    best = (key, shape)
            return
        for f in range(start, rem + 1):
            if rem % f == 0:
                rec(rem // f, f, acc + [f])
    rec(n, 1, [])
    return best[1]


def lattice_edges(shape: Sequence[int]) -> list[tuple[int, int]]:
    shape = tuple(shape)
    idx = np.arange(int(np.prod(shape))).reshape(shape)
    edges = []
    for axis in range(len(shape)):
        a = np.take(idx, range(shape[axis] - 1), axis=axis).ravel()
        b = np.take(idx, range(1, shape[axis]), axis=axis).ravel()
        edges += [(int(x), int(y)) for x, y in zip(a, b)]
    return sorted(edges)


def gen_heisenberg_lattice(dim: int, n: int, seed=0, shape: Sequence[int] | None = None, time: float = 1.0) -> Hamiltonian:
    """XX+YY+ZZ on every edge of a 1D chain, 2D grid or 3D box."""
    if shape is None:
        shape = (n,) if dim == 1 else _balanced_factors(n, dim)
    if int(np.prod(shape)) != n or len(shape) != dim:
        raise BenchmarkError(f"lattice shape {tuple(shape)} does not give {n} qubits in {dim}D")
    if n < 2:
        raise BenchmarkError("need at least 2 qubits")
    rng = np.random.default_rng(seed)
    return build_hamiltonian(n, _pair_terms(lattice_edges(shape), ["XX", "YY", "ZZ"], rng), time)


def random_regular3(n: int, seed=0, max_attempts: int = 1000) -> list[tuple[int, int]]:
    """Uniform simple 3-regular graph by the pairing model with rejection."""
    if n < 4 or n % 2:
        raise BenchmarkError(f"3-regular graphs need even n >= 4, got {n}")
    rng = np.random.default_rng(seed)
    points = np.repeat(np.arange(n), 3)
    for _ in range(max_attempts):
        perm = rng.permutation(points)
        pairs = perm.reshape(-1, 2)
        edges = set()
        ok = True
        for a, b in pairs:
            e = (int(min(a, b)), int(max(a, b)))
            if a == b or e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return sorted(edges)
    raise BenchmarkError(f"no simple 3-regular graph found in {max_attempts} attempts")


def gen_qaoa_reg3(
    n: int, seed=0, params: Sequence[tuple[float, float]] | None = None, layers: int = 1
) -> list[Hamiltonian]:
    """One Hamiltonian per QAOA layer: gamma*ZZ per edge, then beta*X per qubit.

    Without explicit ``params`` every (gamma, beta) is drawn from (0, pi)
    using the instance seed.
    """
    edges = random_regular3(n, seed)
    if params is None:
        rng = np.random.default_rng([int(seed), 1])
        params = [(_coeff(rng), _coeff(rng)) for _ in range(layers)]
    params = list(params)
    if len(params) < layers:
        raise BenchmarkError(f"{layers} layers requested but {len(params)} parameter pairs given")
    out = []
    for gamma, beta in params[:layers]:
        terms = [PauliTerm("ZZ", e, gamma) for e in edges] + [PauliTerm("X", (q,), beta) for q in range(n)]
        out.append(build_hamiltonian(n, terms, 1.0))
    return out


@dataclass(frozen=True)
class BenchmarkSpec:
    family: str
    n: int
    seed: int = 0
    layers: int = 1
    params: tuple | None = None
    x_field: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BenchmarkError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.layers < 1:
            raise BenchmarkError("layers must be >= 1")
        if self.family == "qaoa-reg3" and (self.n < 4 or self.n % 2):
            raise BenchmarkError("qaoa-reg3 requires even n >= 4")

    def hamiltonians(self) -> list[Hamiltonian]:
        """One Hamiltonian per layer (QAOA) or per Trotter step."""
        f = self.family
        if f == "qaoa-reg3":
            return gen_qaoa_reg3(self.n, self.seed, self.params, self.layers)
        if f.startswith("nnn-"):
            h = gen_nnn(f, self.n, self.seed, self.x_field)
        else:
            h = gen_heisenberg_lattice(int(f.split("-")[1][0]), self.n, self.seed)
        return [h] * self.layers


# ------------------------------------------------------------------- baseline


def baseline_route(blocks: Sequence[TwoQubitBlock], phi0: QubitMap, topo: DeviceTopology) -> RoutedProgram:
    """Order-preserving router: blocks run strictly in input order.

    A non-adjacent block is fixed by SWAPs along a shortest path, each
    moving one endpoint one step closer. The endpoint and neighbour with the
    lowest physical indices win ties.
    """
    blocks = list(blocks)
    dist = topo.dist
    qmap = phi0
    maps, stages = [qmap], [Stage()]
    for i, blk in enumerate(blocks):
        u, v = blk.pair
        if qmap.distance(blk.pair, dist) >= UNREACHABLE:
            raise DisconnectedError(f"qubits of block {blk.pair} are in disconnected device regions")
        while qmap.distance(blk.pair, dist) > 1:
            pu, pv = qmap[u], qmap[v]
            d = dist[pu, pv]
            options = []
            for p, other in ((pu, pv), (pv, pu)):
                for w in topo.neighbors(p):
                    gain = d - dist[w, other]
                    if gain > 0:
                        options.append((-int(gain), p, w))
            _, p, w = min(options)
            stages[-1].swap = (min(p, w), max(p, w))
            qmap = qmap.swapped(p, w)
            maps.append(qmap)
            stages.append(Stage())
        stages[-1].blocks.append(i)
    rp = RoutedProgram(blocks, maps, stages, topo, len(stages) - 1, 0)
    rp.validate()
    return rp


# ---------------------------------------------------------- layer expansion


def reverse_layer(sc: ScheduledCircuit, blocks=None, singles=None) -> ScheduledCircuit:
    """The layer with its two-qubit cycles in reverse order.

    It starts at ``sc``'s final map and ends at its initial map. Single-qubit
    ops are re-placed after the last two-qubit gate on their qubit.
    """
    blocks = sc.blocks if blocks is None else blocks
    singles = sc.singles if singles is None else singles
    cycles = [list(c) for c in reversed([c for c in sc.cycles if c])]
    placement = _place_singles(cycles, singles, sc.final_map, sc.n)
    out = ScheduledCircuit(sc.n, sc.m, list(blocks), list(singles), cycles, placement, sc.final_map, sc.topo)
    return out


def expand_layers(
    layer1: ScheduledCircuit, layers: int, hams: Sequence[Hamiltonian] | None = None
) -> list[ScheduledCircuit]:
    """Repeat a compiled layer: odd layers reuse it, even layers run it backwards.

    ``hams`` supplies per-layer operators (e.g. QAOA angles); the schedule
    structure is shared because every layer has the same interaction graph.
    """
    from .ir import unify_terms

    if layers < 1:
        raise BenchmarkError("layers must be >= 1")
    out = []
    for k in range(layers):
        if hams is not None:
            blocks, singles = unify_terms(hams[k])
            if [b.pair for b in blocks] != [b.pair for b in layer1.blocks]:
                raise BenchmarkError(f"layer {k + 1} has a different interaction graph")
        else:
            blocks, singles = layer1.blocks, layer1.singles
        if k % 2 == 0:
            sc = ScheduledCircuit(
                layer1.n, layer1.m, list(blocks), list(singles), layer1.cycles, layer1.singles_placement,
                layer1.initial_map, layer1.topo,
            )
        else:
            sc = reverse_layer(layer1, blocks, singles)
        out.append(sc)
    return out


# ------------------------------------------------------------------ overhead


@dataclass(frozen=True)
class OverheadReport:
    absolute: dict
    ratio: dict

    def to_dict(self) -> dict:
        return {"absolute": self.absolute, "ratio": self.ratio}


_OVERHEAD_KEYS = ("two_qubit_count", "two_qubit_depth", "total_depth")


def overhead(compiled: Metrics, nomap: Metrics) -> OverheadReport:
    """Extra gates and depth over the all-to-all compilation of the same instance."""
    ab, ra = {}, {}
    for k in _OVERHEAD_KEYS:
        c, b = getattr(compiled, k), getattr(nomap, k)
        ab[k] = c - b
        ra[k] = (c - b) / b if b else 0.0
    return OverheadReport(ab, ra)


def aggregate(rows: Sequence[dict], keys: Sequence[str]) -> list[dict]:
    """Mean and standard deviation of ``keys`` per (family, n)."""
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        groups.setdefault((r["family"], r["n"]), []).append(r)
    out = []
    for (fam, n), rs in sorted(groups.items()):
        entry = {"family": fam, "n": n, "instances": len(rs)}
        for k in keys:
            vals = np.array([r[k] for r in rs if r.get(k) is not None], dtype=float)
            entry[f"{k}_mean"] = float(vals.mean()) if vals.size else float("nan")
            entry[f"{k}_std"] = float(vals.std()) if vals.size else float("nan")
        out.append(entry)
    return out
