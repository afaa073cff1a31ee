import networkx as nx
import numpy as np
import pytest

from permuc.benchgen import (
    FAMILIES, BenchmarkError, BenchmarkSpec, aggregate, expand_layers, gen_heisenberg_lattice, gen_nnn,
    gen_qaoa_reg3, lattice_edges, overhead, random_regular3,
)
from permuc.ir import unify_terms
from permuc.pipeline import compile_hamiltonian, sub_seed
from permuc.simcheck import verify_multilayer
from permuc.synth import GateSet, Metrics
from permuc.topology import preset


@pytest.mark.parametrize("family", ["nnn-ising", "nnn-xy", "nnn-heisenberg"])
def test_nnn_block_count(family):
    for n in (3, 6, 11):
        blocks, singles = unify_terms(gen_nnn(family, n, 0))
        assert len(blocks) == 2 * n - 3
        assert len(singles) == (n if family == "nnn-ising" else 0)


def test_ising_without_field():
    assert unify_terms(gen_nnn("nnn-ising", 5, 0, x_field=False))[1] == []


def test_coefficients_in_open_interval():
    h = gen_nnn("nnn-heisenberg", 9, 4)
    assert all(0 < t.coeff < np.pi for t in h.terms)


@pytest.mark.parametrize("n", [4, 6, 10, 20, 50])
def test_regular_graph_is_simple_and_cubic(n):
    g = nx.Graph(random_regular3(n, n))
    assert g.number_of_nodes() == n and g.number_of_edges() == 3 * n // 2
    assert all(d == 3 for _, d in g.degree())


def test_qaoa_layers_share_graph_with_distinct_angles():
    hs = gen_qaoa_reg3(8, 2, layers=3)
    assert len({tuple(sorted(t.qubits for t in h.terms if len(t.qubits) == 2)) for h in hs}) == 1
    assert len({h.terms[0].coeff for h in hs}) == 3
    fixed = gen_qaoa_reg3(8, 2, params=[(0.1, 0.2)])
    assert {t.coeff for t in fixed[0].terms} == {0.1, 0.2}
    with pytest.raises(BenchmarkError):
        gen_qaoa_reg3(7)
    with pytest.raises(BenchmarkError):
        gen_qaoa_reg3(8, params=[(0.1, 0.2)], layers=2)


def test_lattices():
    assert lattice_edges((2, 3)) == [(0, 1), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (4, 5)]
    assert len(unify_terms(gen_heisenberg_lattice(1, 30, 0))[0]) == 29
    assert len(unify_terms(gen_heisenberg_lattice(2, 30, 0))[0]) == 5 * 5 + 6 * 4  # 5x6 grid
    assert len(unify_terms(gen_heisenberg_lattice(3, 30, 0))[0]) == 1 * 3 * 5 + 2 * 2 * 5 + 2 * 3 * 4  # 2x3x5 box
    with pytest.raises(BenchmarkError):
        gen_heisenberg_lattice(2, 6, 0, shape=(2, 2))


def test_spec_validation():
    with pytest.raises(BenchmarkError):
        BenchmarkSpec("tfim", 6)
    with pytest.raises(BenchmarkError):
        BenchmarkSpec("qaoa-reg3", 5)
    for fam in FAMILIES:
        assert BenchmarkSpec(fam, 8, 1).hamiltonians()[0].n == 8


def test_sub_seeds_differ_and_are_stable():
    assert sub_seed(1, 1) != sub_seed(1, 2) != sub_seed(2, 1)
    assert sub_seed(5, 1) == sub_seed(5, 1)


@pytest.mark.parametrize("layers", [2, 3, 4])
def test_expand_layers_alternate_and_verify(layers):
    spec = BenchmarkSpec("qaoa-reg3", 6, 1, layers)
    hams = spec.hamiltonians()
    res = compile_hamiltonian(hams[0], preset("grid:2x3"), seed=1)
    stack = expand_layers(res.sc, layers, hams)
    assert stack[1].final_map == stack[0].initial_map
    assert sum(s.swaps for s in stack) == layers * res.sc.swaps
    rep = verify_multilayer(stack, GateSet(), hams=hams)
    assert rep.ok, rep.message


def test_expand_layers_rejects_other_graph():
    res = compile_hamiltonian(gen_nnn("nnn-xy", 6, 0), preset("grid:2x3"))
    with pytest.raises(BenchmarkError):
        expand_layers(res.sc, 2, [gen_nnn("nnn-xy", 6, 0), gen_qaoa_reg3(6, 0)[0]])


def test_overhead_and_aggregate():
    a = Metrics(two_qubit_count=30, two_qubit_depth=12, total_depth=20)
    b = Metrics(two_qubit_count=20, two_qubit_depth=8, total_depth=0)
    r = overhead(a, b)
    assert r.absolute["two_qubit_count"] == 10 and r.ratio["two_qubit_depth"] == 0.5
    assert r.ratio["total_depth"] == 0.0
    rows = [{"family": "f", "n": 4, "x": 1}, {"family": "f", "n": 4, "x": 3}, {"family": "g", "n": 4, "x": 2}]
    agg = aggregate(rows, ["x"])
    assert agg[0] == {"family": "f", "n": 4, "instances": 2, "x_mean": 2.0, "x_std": 1.0}
