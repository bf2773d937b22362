"""Acceptance criteria 1 to 9, each with its time limit."""

import time

import pytest

from hopflattice.constructions import builtin_algebra
from hopflattice.equivalence import invariance_report
from hopflattice.kitaev import KitaevModel
from hopflattice.ribbon import builtin_graph
from hopflattice.suites import (
    RunContext,
    algebra_suite,
    controls_suite,
    haar_suite,
    heisenberg_suite,
    run_suite,
)

ALGEBRAS = ("z2", "z3", "s3", "s3-dual")


def failures(rep):
    return [c for c in rep.checks if c["status"] != "pass"]


def within(start, limit):
    elapsed = time.perf_counter() - start
    assert elapsed < limit, f"took {elapsed:.1f} s, limit {limit} s"


@pytest.fixture(scope="module")
def z2():
    return builtin_algebra("z2")


@pytest.mark.criterion(1)
def test_criterion_1_hopf_axioms(criterion):
    for name in ALGEBRAS:
        rep = algebra_suite(builtin_algebra(name))
        assert rep.passed, (name, failures(rep))
        assert {"H/associativity", "D/associativity", "D*/associativity"} <= {c["name"] for c in rep.checks}
    within(criterion, 30)


@pytest.mark.criterion(2)
def test_criterion_2_haar(criterion):
    for name in ALGEBRAS:
        rep = haar_suite(builtin_algebra(name))
        assert rep.passed, (name, failures(rep))
        assert any("closed_form" in c["name"] for c in rep.checks)
    within(criterion, 5)


@pytest.mark.criterion(3)
def test_criterion_3_heisenberg(criterion):
    for name in ("z2", "z3"):
        rep = heisenberg_suite(builtin_algebra(name))
        assert rep.passed, (name, failures(rep))
    within(criterion, 60)


def _graph_suites(h, graph, names):
    ctx = RunContext(h, builtin_graph(graph))
    return [run_suite(n, ctx) for n in names]


@pytest.mark.criterion(4)
def test_criterion_4_holonomy(criterion, z2):
    (rep,) = _graph_suites(z2, "tetrahedron", ["kitaev-holprops"])
    assert rep.passed, failures(rep)
    within(criterion, 300)


@pytest.mark.criterion(5)
def test_criterion_5_kitaev_operators(criterion, z2):
    for rep in _graph_suites(z2, "tetrahedron", ["kitaev-operators", "kitaev-gauge"]):
        assert rep.passed, failures(rep)
    within(criterion, 300)


@pytest.mark.criterion(6)
def test_criterion_6_gauge_theory(criterion, z2):
    names = ["gauge-multrel", "gauge-module", "gauge-curvature", "gauge-flatinv"]
    for rep in _graph_suites(z2, "tetrahedron", names):
        assert rep.passed, failures(rep)
    within(criterion, 900)


@pytest.mark.criterion(7)
def test_criterion_7_equivalence(criterion, z2):
    names = ["equiv-chi", "equiv-actedge", "equiv-facetransfer", "equiv-modth"]
    reps = _graph_suites(z2, "tetrahedron", names)
    for rep in reps:
        assert rep.passed, failures(rep)
    chi = reps[0]
    assert chi.dims["random_pairs"] >= 200
    assert chi.dims["chi_rank"] == 4096
    assert reps[3].dims["moduli_dim"] == reps[3].dims["flat_subalgebra_dim"]
    within(criterion, 1800)


@pytest.mark.criterion(8)
def test_criterion_8_topological_invariance(criterion, z2):
    sphere = {name: KitaevModel(builtin_graph(name), z2) for name in ("tetrahedron", "pyramid")}
    for m in sphere.values():
        assert m.protected_dimension() == 1
    assert sphere["tetrahedron"].dense_dimension(cap=5000) == 1
    t0 = time.perf_counter()
    for name in ("torus-3-3", "torus-3-4"):
        assert KitaevModel(builtin_graph(name), z2).protected_dimension() == 4
    within(t0, 600)
    rep = invariance_report(z2, [builtin_graph("tetrahedron"), builtin_graph("pyramid")])
    assert rep.passed, failures(rep)
    assert rep.dims["tetrahedron/moduli_dim"] == rep.dims["pyramid/moduli_dim"]
    assert rep.dims["tetrahedron/flat_dim"] == rep.dims["pyramid/flat_dim"]


@pytest.mark.criterion(9)
def test_criterion_9_negative_controls(criterion):
    for name in ("z2", "z3"):
        rep = controls_suite(builtin_algebra(name))
        assert rep.passed, (name, failures(rep))
        names = {c["name"] for c in rep.checks}
        assert {"corrupted_mult_fails_associativity", "kernel/kernel_element_annihilated",
                "rejects_loop", "rejects_multi_edge"} <= names
