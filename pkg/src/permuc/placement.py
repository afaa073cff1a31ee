"""Initial placement as a quadratic assignment problem, solved by Tabu search."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .ir import TwoQubitBlock
from .topology import DeviceTopology


class PlacementError(ValueError):
    pass


@dataclass(frozen=True)
class QubitMap:
    """Injective map from logical to physical qubits (``phi[logical]``)."""

    phi: tuple[int, ...]
    m: int

    def __post_init__(self):
        phi = tuple(int(p) for p in self.phi)
        object.__setattr__(self, "phi", phi)
        if len(set(phi)) != len(phi):
            raise PlacementError(f"map is not injective: {phi}")
        if any(p < 0 or p >= self.m for p in phi):
            raise PlacementError(f"map {phi} has images outside 0..{self.m - 1}")
        inv = [-1] * self.m
        for q, p in enumerate(phi):
            inv[p] = q
        object.__setattr__(self, "inverse", tuple(inv))

    @classmethod
    def identity(cls, n: int, m: int | None = None) -> "QubitMap":
        return cls(tuple(range(n)), n if m is None else m)

    def __getitem__(self, q: int) -> int:
        return self.phi[q]

    def __len__(self) -> int:
        return len(self.phi)

    def swapped(self, a: int, b: int) -> "QubitMap":
        """Map after exchanging the contents of physical qubits ``a`` and ``b``."""
        phi = list(self.phi)
        qa, qb = self.inverse[a], self.inverse[b]
        if qa >= 0:
            phi[qa] = b
        if qb >= 0:
            phi[qb] = a
        return QubitMap(tuple(phi), self.m)

    def distance(self, pair, dist: np.ndarray) -> int:
        u, v = pair
        return int(dist[self.phi[u], self.phi[v]])


@dataclass(frozen=True)
class TabuParams:
    max_iters: int | None = None
    tenure: int | None = None
    seed: int = 0
    restarts: int = 5
    time_budget_ms: int | None = None

    def resolved(self, n: int) -> "TabuParams":
        p = TabuParams(
            self.max_iters if self.max_iters is not None else 100 * n,
            self.tenure if self.tenure is not None else n,
            self.seed,
            self.restarts,
            self.time_budget_ms,
        )
        if p.max_iters < 1 or p.tenure < 1 or p.restarts < 1:
            raise PlacementError(f"invalid Tabu parameters {p}")
        return p


def flow_matrix(blocks: Sequence[TwoQubitBlock], n: int) -> np.ndarray:
    """Interaction counts ``f[i, j]`` between logical qubits (symmetric)."""
    f = np.zeros((n, n), dtype=np.int64)
    for b in blocks:
        u, v = b.pair
        if u >= n or v >= n:
            raise PlacementError(f"block on {b.pair} outside {n} qubits")
        f[u, v] += 1
        f[v, u] += 1
    return f


def qap_cost(qmap: QubitMap, f: np.ndarray, dist: np.ndarray) -> int:
    """Placement objective: sum over ordered pairs of ``f[i,j] * d[phi(i), phi(j)]``."""
    phi = np.asarray(qmap.phi, dtype=np.int64)
    n = len(phi)
    return int((f[:n, :n] * dist[np.ix_(phi, phi)]).sum())


def greedy_seed(f: np.ndarray, topo: DeviceTopology) -> list[int]:
    """Grow a placement outward from the busiest logical qubit."""
    n = f.shape[0]
    dist = topo.dist
    weight = f.sum(axis=1)
    phys_deg = [topo.degree(p) for p in range(topo.m)]
    placed: dict[int, int] = {}
    free = set(range(topo.m))

    def best_free_by_degree() -> int:
        return min(free, key=lambda p: (-phys_deg[p], p))

    while len(placed) < n:
        frontier = [
            (int(f[q, list(placed)].sum()), q)
            for q in range(n)
            if q not in placed and placed and f[q, list(placed)].any()
        ]
        if frontier:
            q = min(frontier, key=lambda t: (-t[0], t[1]))[1]
            nbrs = [j for j in placed if f[q, j]]
            loc = min(
                free,
                key=lambda p: (sum(int(f[q, j]) * int(dist[p, placed[j]]) for j in nbrs), p),
            )
        else:
            rest = [q for q in range(n) if q not in placed]
            q = min(rest, key=lambda q: (-int(weight[q]), q))
            loc = best_free_by_degree()
        placed[q] = loc
        free.discard(loc)
    return [placed[q] for q in range(n)]


def _full_perm(phi: Sequence[int], m: int) -> np.ndarray:
    used = set(phi)
    rest = [p for p in range(m) if p not in used]
    return np.array(list(phi) + rest, dtype=np.int64)


def tabu_place(
    f: np.ndarray, topo: DeviceTopology, params: TabuParams = TabuParams()
) -> tuple[QubitMap, int]:
    """Search for a low-cost injection of ``f``'s qubits into ``topo``.

    Restart 0 starts from :func:`greedy_seed`; later restarts start from a
    random permutation drawn from ``(seed, restart)``. The lowest cost wins,
    earliest restart on ties.
    """
    n = f.shape[0]
    m = topo.m
    if n > m:
        raise PlacementError(f"device has {m} qubits but circuit needs {n}")
    params = params.resolved(n)
    flow = np.zeros((m, m), dtype=np.int64)
    flow[:n, :n] = f
    dist = np.asarray(topo.dist, dtype=np.int64)
    deadline = 0.0
    if params.time_budget_ms:
        deadline = time.perf_counter() + params.time_budget_ms / 1000.0

    floor = int(f.sum())  # every interacting pair adjacent
    best = None
    for k in range(params.restarts):
        if k == 0:
            perm0 = _full_perm(greedy_seed(f, topo), m)
        else:
            rng = np.random.default_rng([params.seed, k])
            perm0 = rng.permutation(m).astype(np.int64)
        perm, cost, _ = kernels.tabu_search(
            flow, dist, perm0, n, params.max_iters, params.tenure, deadline
        )
        if best is None or cost < best[1]:
            best = (perm, cost)
        if best[1] <= floor or (deadline and time.perf_counter() > deadline):
            break
    perm, cost = best
    qmap = QubitMap(tuple(int(p) for p in perm[:n]), m)
    return qmap, int(cost)
