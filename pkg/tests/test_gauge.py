import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from hopflattice.constructions import builtin_algebra
from hopflattice.gauge import GraphAlgebra, VertexAlgebraSpec, VertexChi
from hopflattice.gauge_suites import (
    cilium_independence,
    kernel_control,
    module_suite,
    multrel_suite,
    two_vertex_closure,
    vertex_chi_suite,
    vertex_suite,
)
from hopflattice.ribbon import builtin_graph


@pytest.fixture(scope="module")
def z2():
    return builtin_algebra("z2")


@pytest.fixture(scope="module")
def tetra_ga(z2):
    return GraphAlgebra(builtin_graph("tetrahedron"), z2)


def test_vertex_algebras_associative(z2):
    assert vertex_suite(z2).passed


def test_vertex_chi_patterns(z2):
    assert vertex_chi_suite(z2).passed


def test_kernel_for_non_zero_sigma(z2):
    rep = kernel_control(z2)
    assert rep.passed
    assert rep.dims["rank"] < rep.dims["dimension"] == 16


def test_vertex_chi_bijective_on_three_slots():
    vc = VertexChi(VertexAlgebraSpec(3, (0, 0, 0), (0, 0, 0)), builtin_algebra("z3"))
    assert vc.rank() == 9 ** 3


def test_spec_validation():
    with pytest.raises(ValueError):
        VertexAlgebraSpec(2, (0,), (0, 0))
    with pytest.raises(ValueError):
        VertexAlgebraSpec(1, (2,), (0,))


def test_two_vertex_closure(z2):
    assert two_vertex_closure(z2).passed


def test_multiplication_relations(tetra_ga):
    assert multrel_suite(tetra_ga, samples=40).passed


def test_module_structure(tetra_ga):
    assert module_suite(tetra_ga, samples=20).passed


def test_unit_is_neutral(tetra_ga):
    ga = tetra_ga
    x = ga.generator(0, {3: 1})
    assert ga.multiply(ga.unit(), x) == x == ga.multiply(x, ga.unit())


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 3)), min_size=3, max_size=3))
def test_graph_algebra_associative(tetra_ga, gens):
    ga = tetra_ga
    x, y, z = (ga.generator(e, {p: mpq(1)}) for e, p in gens)
    assert ga.multiply(ga.multiply(x, y), z) == ga.multiply(x, ga.multiply(y, z))


def test_cilium_independence(z2):
    assert cilium_independence(builtin_graph("tetrahedron"), z2, limit=1).passed
