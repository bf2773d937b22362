import itertools

import pytest
from gmpy2 import mpq

from hopflattice.constructions import builtin_algebra, haar_integral
from hopflattice.kitaev import KitaevModel, ResourceLimit, matrix_rank
from hopflattice.kitaev_suites import gauge_suite, holprops_suite, operators_suite
from hopflattice.ribbon import CiliatedRibbonGraph, NotRegular, builtin_graph, ciliated_face

E, G = 0, 1


@pytest.fixture(scope="module")
def z2():
    return builtin_algebra("z2")


@pytest.fixture(scope="module")
def pyramid_z2(z2):
    return KitaevModel(builtin_graph("pyramid"), z2)


@pytest.fixture(scope="module")
def tetra_z2(z2):
    return KitaevModel(builtin_graph("tetrahedron"), z2)


def test_vertex_projector_rank_on_apex(pyramid_z2, z2):
    m = pyramid_z2
    apex = max(range(m.graph.n_vertices), key=lambda v: len(m.graph.incident(v)))
    mat = m.vertex_operator(apex, haar_integral(z2)).matrix()
    # oracle: (1 + X on every incident edge) / 2, built directly on basis states
    edges = [e for e, _ in m.graph.incident(apex)]
    oracle = {}
    for s in itertools.product(range(2), repeat=m.E):
        flipped = tuple(1 - x if i in edges else x for i, x in enumerate(s))
        col = {}
        for t in (s, flipped):
            col[t] = col.get(t, 0) + mpq(1, 2)
        oracle[s] = col
    assert mat == oracle
    assert matrix_rank(mat) == 8 * 2 ** 4


def test_face_projector_is_parity(pyramid_z2, z2):
    m = pyramid_z2
    eta = haar_integral(m.hdual)
    for v in range(m.graph.n_vertices):
        face = ciliated_face(m.graph, v)
        mat = m.face_operator(face, eta).matrix()
        edges = [e for e, _ in face.word]
        for s, col in mat.items():
            even = sum(s[e] for e in edges) % 2 == 0
            assert col == ({s: 1} if even else {})


def test_triangle_operators_on_z2(tetra_z2):
    T = tetra_z2.tri.T(1, {G: 1})
    assert T[G] == {G: 1}
    assert tetra_z2.tri.T(1, {E: 1})[G] == {}
    L = tetra_z2.tri.L(1, {G: 1})
    assert L[E] == {G: 1} and L[G] == {E: 1}


def test_site_representation_on_one_edge(tetra_z2):
    m = tetra_z2
    # group oracle: (y (x) delta_b) sends label k to [k = b] y k
    for p in range(4):
        y, b = divmod(p, 2)
        key = (p,) + (None,) * (m.E - 1)
        for k in range(2):
            state = (k,) + (0,) * (m.E - 1)
            expect = {((y + k) % 2,) + state[1:]: 1} if k == b else {}
            assert m.rho_apply({key: 1}, {state: 1}) == expect
    assert m.rho_apply({(2,) + (None,) * (m.E - 1): 1}, {(0,) * m.E: 1}) == {(1,) + (0,) * (m.E - 1): 1}


@pytest.mark.parametrize("name,expected", [("tetrahedron", 1), ("pyramid", 1), ("torus-3-3", 4)])
def test_protected_dimensions(z2, name, expected):
    assert KitaevModel(builtin_graph(name), z2).protected_dimension() == expected


def test_sparse_trace_matches_dense_oracles(tetra_z2):
    assert tetra_z2.dense_dimension(cap=5000) == 1
    assert tetra_z2.protected_dimension_bruteforce() == 1


def test_dense_oracle_respects_cap(tetra_z2):
    with pytest.raises(ResourceLimit):
        tetra_z2.dense_dimension(cap=10)


def test_holprops_suite(tetra_z2):
    assert holprops_suite(tetra_z2).passed


def test_operators_suite(tetra_z2):
    assert operators_suite(tetra_z2).passed


def test_gauge_suite(tetra_z2):
    assert gauge_suite(tetra_z2).passed


def test_non_regular_graph_rejected(z2):
    loop = CiliatedRibbonGraph.from_rotation([[(0, 0), (0, 1)]], "loop")
    with pytest.raises(NotRegular, match="1"):
        KitaevModel(loop, z2)
