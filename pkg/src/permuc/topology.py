"""Device connectivity graphs and all-pairs hop distances."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

UNREACHABLE = np.iinfo(np.int64).max // 4


class TopologyError(ValueError):
    pass


def _components(m: int, edges) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(m)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * m
    comps = []
    for s in range(m):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def all_pairs_distances(edges, m: int, require_connected: bool = True) -> np.ndarray:
    """Unweighted shortest-path hop counts by Floyd-Warshall.

    Unreachable pairs hold ``UNREACHABLE`` when ``require_connected`` is false;
    otherwise a disconnected graph raises :class:`TopologyError` listing the
    components.
    """
    dist = np.full((m, m), UNREACHABLE, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    for a, b in edges:
        dist[a, b] = dist[b, a] = 1
    for k in range(m):
        # row/column k relaxation, vectorised over (i, j)
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)
    np.minimum(dist, UNREACHABLE, out=dist)
    if require_connected and (dist >= UNREACHABLE).any():
        comps = _components(m, edges)
        raise TopologyError(f"device graph is disconnected; components: {comps}")
    return dist


@dataclass(frozen=True, eq=False)
class DeviceTopology:
    m: int
    edges: frozenset
    name: str = "custom"
    dist: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        norm = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise TopologyError(f"self-loop on qubit {a}")
            if not (0 <= a < self.m and 0 <= b < self.m):
                raise TopologyError(f"edge ({a}, {b}) out of range for m={self.m}")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))
        if self.dist is None:
            object.__setattr__(self, "dist", all_pairs_distances(norm, self.m))
        self.dist.setflags(write=False)
        adj = [[] for _ in range(self.m)]
        for a, b in sorted(norm):
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(x)) for x in adj))

    def neighbors(self, q: int) -> tuple[int, ...]:
        return self._adj[q]

    def degree(self, q: int) -> int:
        return len(self._adj[q])

    def is_edge(self, a: int, b: int) -> bool:
        return self.dist[a, b] == 1

    @property
    def diameter(self) -> int:
        return int(self.dist.max())

    def to_dict(self) -> dict:
        return {"m": self.m, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_dict(cls, data: dict, name: str = "custom") -> "DeviceTopology":
        unknown = set(data) - {"m", "edges", "name", "version", "description"}
        if unknown:
            raise TopologyError(f"unknown topology fields: {sorted(unknown)}")
        return cls(int(data["m"]), frozenset(tuple(e) for e in data["edges"]), data.get("name", name))


def make_grid(rows: int, cols: int) -> DeviceTopology:
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise TopologyError(f"invalid grid dimensions {rows}x{cols}")
    edges = set()
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.add((q, q + 1))
            if r + 1 < rows:
                edges.add((q, q + cols))
    return DeviceTopology(rows * cols, frozenset(edges), f"grid:{rows}x{cols}")


def make_line(n: int) -> DeviceTopology:
    if n < 2:
        raise TopologyError(f"line needs at least 2 qubits, got {n}")
    return DeviceTopology(n, frozenset((i, i + 1) for i in range(n - 1)), f"line:{n}")


def make_complete(n: int) -> DeviceTopology:
    if n < 2:
        raise TopologyError(f"complete graph needs at least 2 qubits, got {n}")
    edges = frozenset((i, j) for i in range(n) for j in range(i + 1, n))
    return DeviceTopology(n, edges, f"all2all:{n}")


DATA_PRESETS = ("sycamore54", "montreal27", "aspen16")


def _load_data(name: str) -> DeviceTopology:
    text = resources.files("permuc.data").joinpath(f"{name}.json").read_text()
    return DeviceTopology.from_dict(json.loads(text), name)


def preset(name: str, n: int | None = None) -> DeviceTopology:
    """Resolve a device name.

    Accepts the shipped machines plus ``grid:RxC``, ``line:N`` and
    ``all2all[:N]``. With ``n`` given, bare ``grid``, ``line`` and
    ``all2all`` are sized to fit ``n`` qubits.
    """
    if name in DATA_PRESETS:
        return _load_data(name)
    if m := re.fullmatch(r"grid:(\d+)x(\d+)", name):
        return make_grid(int(m[1]), int(m[2]))
    if m := re.fullmatch(r"line:(\d+)", name):
        return make_line(int(m[1]))
    if m := re.fullmatch(r"all2all(?::(\d+))?", name):
        size = int(m[1]) if m[1] else n
        if size is None:
            raise TopologyError("all2all needs a size (all2all:N)")
        return make_complete(size)
    if name == "line" and n is not None:
        return make_line(n)
    if name == "grid" and n is not None:
        rows = max(1, math.isqrt(n))
        return make_grid(rows, -(-n // rows))
    raise TopologyError(f"unknown topology preset {name!r}")


def load_topology(spec: str, n: int | None = None) -> DeviceTopology:
    """Preset name or path to a topology JSON file."""
    if spec.endswith(".json"):
        with open(spec) as fh:
            return DeviceTopology.from_dict(json.load(fh), spec)
    return preset(spec, n)
