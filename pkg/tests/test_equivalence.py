import pytest

from hopflattice.constructions import builtin_algebra
from hopflattice.equivalence import (
    Equivalence,
    alternative_edge_order,
    invariance_report,
    verify_actedge,
    verify_chi,
    verify_facetransfer,
    verify_modth,
)
from hopflattice.ribbon import builtin_graph


@pytest.fixture(scope="module")
def eq_z2():
    return Equivalence(builtin_graph("tetrahedron"), builtin_algebra("z2"))


def test_chi_is_bijective_anti_homomorphism(eq_z2):
    rep = verify_chi(eq_z2, pairs=200, full_rank=True)
    assert rep.passed
    assert rep.dims["chi_rank"] == rep.dims["dimension"] == 4 ** 6


def test_chi_intertwines_edge_actions(eq_z2):
    assert verify_actedge(eq_z2).passed


def test_face_transfer(eq_z2):
    assert verify_facetransfer(eq_z2).passed


def test_moduli_algebra_matches_protected_algebra(eq_z2):
    rep = verify_modth(eq_z2)
    assert rep.passed
    assert rep.dims["moduli_dim"] == rep.dims["flat_subalgebra_dim"] == 1


def test_chi_on_z3_sampled():
    eq = Equivalence(builtin_graph("tetrahedron"), builtin_algebra("z3"))
    rep = verify_chi(eq, pairs=40, full_rank=False)
    names = {c["name"] for c in rep.checks}
    assert {"vertex_decomposition", "edge_reversal", "anti_multiplicative_generators"} <= names
    assert rep.passed


def test_alternative_edge_order_is_a_permutation():
    g = builtin_graph("tetrahedron")
    alt = alternative_edge_order(g)
    assert alt is not None and sorted(alt) == list(range(g.n_edges))


def test_invariance_on_one_graph_is_trivially_consistent():
    rep = invariance_report(builtin_algebra("z2"), [builtin_graph("tetrahedron")])
    assert rep.passed
    assert rep.dims["tetrahedron/protected_dim"] == 1
