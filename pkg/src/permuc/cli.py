"""Command-line front end: ``permuc compile | verify | bench``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .benchgen import FAMILIES, BenchmarkSpec, aggregate, expand_layers, overhead
from .formats import parse_circuit, schedule_json, trace_json, write_circuit
from .ir import Hamiltonian, unify_terms
from .pipeline import PASS_BENCH, compile_hamiltonian, compile_nomap
from .placement import TabuParams
from .simcheck import DEFAULT_CAP, CapExceeded, verify_circuit
from .synth import GateSet, count_layers
from .topology import load_topology

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PERMUC_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"PERMUC_SEED must be an integer, got {env!r}") from None


def _error(kind: str, exc: BaseException, code: int) -> int:
    print(json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
    return code


def load_hamiltonians(path: str) -> list[Hamiltonian]:
    """A Hamiltonian JSON object, or a list of them (one per layer)."""
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, list):
        if not data:
            raise ValueError("empty Hamiltonian list")
        return [Hamiltonian.from_dict(d) for d in data]
    return [Hamiltonian.from_dict(data)]


def _tabu(args) -> TabuParams:
    return TabuParams(
        max_iters=args.placement_iters,
        tenure=args.placement_tenure,
        restarts=args.placement_restarts,
        time_budget_ms=args.placement_budget_ms,
    )


def _metrics_dict(m) -> dict:
    return {k: int(v) for k, v in m.to_dict().items()}


def _compile_layers(hams, topo, gs, seed, method, tabu, layers, trace=False):
    res = compile_hamiltonian(hams[0], topo, gs, seed, method, tabu, trace=trace)
    per_layer = hams if len(hams) >= layers else [hams[0]] * layers
    stack = expand_layers(res.sc, layers, per_layer[:layers])
    return res, stack


# ------------------------------------------------------------------ compile


def cmd_compile(args) -> int:
    try:
        seed = _seed(args)
        hams = load_hamiltonians(args.ham)
        h = hams[0]
        topo = load_topology(args.topo, h.n)
        gs = GateSet.load(args.gateset)
        layers = args.layers or (len(hams) if len(hams) > 1 else h.steps)
        tabu = _tabu(args)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _error("invalid input", exc, EXIT_INPUT)

    try:
        res, stack = _compile_layers(hams, topo, gs, seed, args.schedule, tabu, layers, args.trace is not None)
        metrics = count_layers(stack, gs)
        nomap_stack = [compile_nomap(hh, gs).sc for hh in (hams if len(hams) >= layers else [h] * layers)[:layers]]
        nomap = count_layers(nomap_stack, gs)
        text = write_circuit(stack, gs)
    except ValueError as exc:
        return _error("invalid input", exc, EXIT_INPUT)
    except Exception as exc:  # replay or synthesis failure
        return _error("internal error", exc, EXIT_INTERNAL)

    report = {
        "version": __version__,
        "n": h.n,
        "m": topo.m,
        "topology": topo.name,
        "gateset": gs.to_dict(),
        "schedule": args.schedule,
        "seed": seed,
        "layers": layers,
        "placement_cost": res.placement_cost,
        "initial_map": list(res.sc.initial_map.phi),
        "final_map": list(stack[-1].final_map.phi),
        "blocks": len(res.sc.blocks),
        "metrics": _metrics_dict(metrics),
        "nomap": _metrics_dict(nomap),
        "overhead": overhead(metrics, nomap).to_dict(),
        "depth_conventions": {
            "two_qubit_depth": "two-qubit gate layers only",
            "total_depth": "all layers; consecutive single-qubit gates on a qubit share one layer",
        },
    }
    blob = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "circuit.txt").write_text(text)
        (out / "metrics.json").write_text(blob + "\n")
        (out / "schedule.json").write_text(json.dumps(schedule_json(res.sc), indent=2) + "\n")
        if args.trace is not None:
            Path(args.trace or out / "trace.json").write_text(trace_json(res.routed) + "\n")
    elif args.trace:
        Path(args.trace).write_text(trace_json(res.routed) + "\n")
    print(blob)
    if args.verbose:
        print(json.dumps({"runtime_ms": res.runtime_ms}), file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    try:
        parsed = parse_circuit(Path(args.circuit).read_text())
        hams = load_hamiltonians(args.ham)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _error("invalid input", exc, EXIT_INPUT)
    per_layer = hams if len(hams) >= parsed.layers else [hams[0]] * parsed.layers
    if any(hh.n != parsed.n for hh in per_layer):
        return _error("invalid input", ValueError("Hamiltonian and circuit qubit counts differ"), EXIT_INPUT)
    blocks, singles, emitted = [], [], []
    offsets = []
    for hh in per_layer[: parsed.layers]:
        b, s = unify_terms(hh)
        offsets.append((len(blocks), len(singles)))
        blocks += b
        singles += s
    for kind, idx, layer in parsed.emitted:
        if layer >= len(offsets):
            return _error("invalid input", ValueError(f"layer {layer} beyond header count"), EXIT_INPUT)
        b0, s0 = offsets[layer]
        emitted.append((kind, idx + (b0 if kind == "block" else s0)))
    try:
        rep = verify_circuit(
            parsed.circuit, emitted, blocks, singles, parsed.n, parsed.full_initial, parsed.full_final, args.cap
        )
    except CapExceeded as exc:
        return _error("cap exceeded", exc, EXIT_INPUT)
    except (IndexError, KeyError, ValueError) as exc:
        return _error("invalid input", exc, EXIT_INPUT)
    d = rep.to_dict()
    if not args.full:
        d.pop("emitted_order")
    print(json.dumps(d, indent=2))
    return EXIT_OK if rep.ok else EXIT_FAIL


# -------------------------------------------------------------------- bench


def parse_sizes(spec: str) -> list[int]:
    """``"30"``, ``"4..22"`` (inclusive) or ``"8,12,16"``."""
    out = []
    for part in spec.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..")
            out += list(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError(f"no sizes in {spec!r}")
    return out


_BENCH_KEYS = ("swaps", "swaps_dressed", "two_qubit_count", "two_qubit_depth", "total_depth", "depth_blocks")
_PASSES = ("unify", "placement", "routing", "scheduling", "synthesis")


def _bench_row(job: dict) -> dict:
    row = {"family": job["family"], "n": job["n"], "seed": job["seed"], "layers": job["layers"],
           "topology": job["topo"], "gateset": job["gateset"], "schedule": job["schedule"]}
    try:
        spec = BenchmarkSpec(job["family"], job["n"], job["seed"], job["layers"], x_field=job["x_field"])
        hams = spec.hamiltonians()
        topo = load_topology(job["topo"], job["n"])
        gs = GateSet.load(job["gateset"])
        seed = int(np.random.SeedSequence([job["global_seed"], PASS_BENCH, job["seed"]]).generate_state(1)[0])
        t0 = time.perf_counter()
        res, stack = _compile_layers(hams, topo, gs, seed, job["schedule"], TabuParams(), job["layers"])
        total = (time.perf_counter() - t0) * 1e3
        m = count_layers(stack, gs)
        nomap = count_layers([compile_nomap(hh, gs).sc for hh in hams], gs)
        row.update({"topology": topo.name, "blocks": len(res.sc.blocks)})
        row.update({k: getattr(m, k) for k in _BENCH_KEYS})
        row.update({f"nomap_{k}": getattr(nomap, k) for k in ("two_qubit_count", "two_qubit_depth", "total_depth")})
        row.update({f"runtime_ms_{p}": round(res.runtime_ms.get(p, 0.0), 3) for p in _PASSES})
        row["runtime_ms_total"] = round(total, 3)
        row["status"] = "ok"
        row["error"] = ""
    except Exception as exc:  # recorded per row
        row["status"] = "failed"
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_bench(args) -> int:
    try:
        seed = _seed(args)
        families = [f.strip() for f in args.family.split(",")]
        for f in families:
            if f not in FAMILIES:
                raise ValueError(f"unknown family {f!r}; choose from {', '.join(FAMILIES)}")
        sizes = parse_sizes(args.n)
        GateSet.load(args.gateset)
    except (OSError, ValueError) as exc:
        return _error("invalid input", exc, EXIT_INPUT)
    jobs = []
    for fam in families:
        for n in sizes:
            if fam == "qaoa-reg3" and n % 2:
                continue
            for s in range(args.seeds):
                jobs.append({"family": fam, "n": n, "seed": s, "layers": args.layers, "topo": args.topo,
                             "gateset": args.gateset, "schedule": args.schedule, "x_field": not args.no_x_field,
                             "global_seed": seed})
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_bench_row, jobs))
    else:
        rows = [_bench_row(j) for j in jobs]

    fields = ["family", "n", "seed", "layers", "topology", "gateset", "schedule", "blocks", *_BENCH_KEYS,
              "nomap_two_qubit_count", "nomap_two_qubit_depth", "nomap_total_depth",
              *[f"runtime_ms_{p}" for p in _PASSES], "runtime_ms_total", "status", "error"]
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
        for r in rows:
            name = f"{r['family']}_n{r['n']}_s{r['seed']}.json"
            det = {k: v for k, v in r.items() if not k.startswith("runtime_ms")}
            (out / name).write_text(json.dumps(det, indent=2, sort_keys=True) + "\n")
        with open(out / "bench.csv", "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields, restval="")
            w.writeheader()
            w.writerows(rows)
        ok_rows = [r for r in rows if r["status"] == "ok"]
        summary = aggregate(ok_rows, [*_BENCH_KEYS, "nomap_two_qubit_count", "nomap_total_depth"])
        if summary:
            with open(out / "summary.csv", "w", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=list(summary[0]))
                w.writeheader()
                w.writerows(summary)
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=fields, restval="")
        w.writeheader()
        w.writerows(rows)
    failed = [r for r in rows if r["status"] != "ok"]
    for r in failed:
        print(f"failed: {r['family']} n={r['n']} seed={r['seed']}: {r['error']}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="permuc", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--topo", default="all2all", help="preset name or topology JSON")
        sp.add_argument("--gateset", default="cnot", help="cnot, cz, syc, iswap or gate-set JSON")
        sp.add_argument("--schedule", choices=("hybrid", "generic", "coloring"), default="hybrid")
        sp.add_argument("--seed", type=int, default=None, help="global seed (default: $PERMUC_SEED or 0)")
        sp.add_argument("--layers", type=int, default=None)

    c = sub.add_parser("compile", help="compile a Hamiltonian onto a device")
    c.add_argument("--ham", required=True)
    common(c)
    c.add_argument("--placement-iters", type=int, default=None)
    c.add_argument("--placement-tenure", type=int, default=None)
    c.add_argument("--placement-restarts", type=int, default=5)
    c.add_argument("--placement-budget-ms", type=int, default=None)
    c.add_argument("--out", default=None, help="output directory")
    c.add_argument("--trace", nargs="?", const="", default=None, help="write the routing trace JSON")
    c.add_argument("-v", "--verbose", action="store_true")
    c.set_defaults(func=cmd_compile)

    v = sub.add_parser("verify", help="check a compiled circuit against its Hamiltonian")
    v.add_argument("--circuit", required=True)
    v.add_argument("--ham", required=True)
    v.add_argument("--cap", type=int, default=DEFAULT_CAP)
    v.add_argument("--full", action="store_true", help="include the emitted operator order")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run benchmark families")
    b.add_argument("--family", required=True, help="comma-separated families")
    b.add_argument("--n", required=True, help="sizes: 30, 4..22 or 8,12,16")
    b.add_argument("--seeds", type=int, default=1)
    common(b)
    b.add_argument("--no-x-field", action="store_true", help="Ising without the transverse field")
    b.add_argument("--out", default=None)
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "layers", None) is not None and args.layers < 1:
        parser.error("--layers must be >= 1")
    if args.command == "bench" and args.layers is None:
        args.layers = 1
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
