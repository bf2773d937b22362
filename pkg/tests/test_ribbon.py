import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopflattice.ribbon import (
    RB,
    CiliatedRibbonGraph,
    GraphFormatError,
    L,
    NotRegular,
    R,
    builtin_graph,
    check_regular,
    edge_order,
    edge_paths,
    euler_characteristic,
    face_loop,
    faces,
    genus,
    graph_from_json,
    incidence_identities,
    is_composable,
    is_regular,
    is_ribbon_path,
    nb_path,
    regularize,
    reverse_edge,
    star,
    thick_letter,
    thicken,
    vertex_loop,
)


def two_loop_torus():
    return CiliatedRibbonGraph.from_rotation([[(0, 0), (1, 0), (0, 1), (1, 1)]], "two-loops")


def cycle(n):
    return CiliatedRibbonGraph.from_rotation(
        [[(v, 0), ((v - 1) % n, 1)] for v in range(n)], f"cycle-{n}")


def test_face_counts():
    tet = builtin_graph("tetrahedron")
    assert len(faces(tet)) == 4 and euler_characteristic(tet) == 2
    tor = builtin_graph("torus-3-3")
    assert (tor.n_vertices, tor.n_edges) == (9, 18)
    assert len(faces(tor)) == 9 and euler_characteristic(tor) == 0 and genus(tor) == 1
    seg = CiliatedRibbonGraph.from_rotation([[(0, 0)], [(0, 1)]])
    (f,) = faces(seg)
    assert sorted(e for e, _ in f.word) == [0, 0]


def test_regularity_conditions():
    assert is_regular(builtin_graph("tetrahedron"))
    assert is_regular(builtin_graph("torus-3-3"))
    tri = cycle(3)
    assert len(faces(tri)) == 2
    rep = check_regular(tri)
    assert not rep.regular and 3 in rep.failed_conditions
    assert 1 in check_regular(two_loop_torus()).failed_conditions
    with pytest.raises(NotRegular):
        builtin_graph("torus-2-2")


def test_regularize():
    res = regularize(two_loop_torus())
    assert is_regular(res.graph)
    assert euler_characteristic(res.graph) == 0
    tet = builtin_graph("tetrahedron")
    assert regularize(tet).graph == tet
    assert is_regular(regularize(cycle(4)).graph)
    assert is_regular(regularize(star(3)).graph)


def test_thickening_of_tetrahedron():
    th = thicken(builtin_graph("tetrahedron"))
    assert th.graph.n_edges == 24 and th.graph.n_vertices == 12
    kinds = [k for k, _ in th.classify_faces()]
    assert (kinds.count("edge"), kinds.count("vertex"), kinds.count("face")) == (6, 4, 4)
    assert incidence_identities(th)


def test_loops_and_edge_paths_compose():
    g = builtin_graph("tetrahedron")
    tg = thicken(g).graph
    for v in range(g.n_vertices):
        assert is_composable(tg, vertex_loop(g, v))
        assert is_composable(tg, face_loop(g, v))
    for e in range(g.n_edges):
        for p in edge_paths(g, e):
            assert is_composable(tg, p)


def test_edge_path_with_minimal_ends():
    g = builtin_graph("tetrahedron")
    e = next(e for e, ((_, s), (_, t)) in enumerate(g.edges) if s == 0 and t == 0)
    assert edge_paths(g, e)[0] == (thick_letter(RB, e), thick_letter(R, e))


def test_neighbourhood_paths():
    g = star(4)
    assert nb_path(g, 0, 1, 0) == (thick_letter(RB, 0), thick_letter(R, 0))
    assert nb_path(g, 0, 1, 1) == (thick_letter(L, 0),)
    # earlier half-edges are skipped along their right boundaries
    assert nb_path(g, 0, 3, 0) == (thick_letter(RB, 0), thick_letter(RB, 1),
                                   thick_letter(RB, 2), thick_letter(R, 2))
    assert nb_path(g, 0, 3, 1) == (thick_letter(RB, 0), thick_letter(RB, 1), thick_letter(L, 2))


def test_non_ribbon_path_rejected():
    assert not is_ribbon_path((thick_letter(RB, 0), thick_letter(R, 0)))
    assert is_ribbon_path((thick_letter(L, 0), thick_letter(R, 0)))


def test_edge_order_and_reversal():
    g = builtin_graph("tetrahedron")
    order = edge_order(g)
    assert sorted(order) == list(range(g.n_edges))
    for e in range(g.n_edges):
        assert reverse_edge(reverse_edge(g, e), e) == g
        assert len(faces(reverse_edge(g, e))) == len(faces(g))
    assert edge_order(builtin_graph("torus-3-3")) is None


def test_json_round_trip():
    for name in ("tetrahedron", "pyramid", "torus-3-4"):
        g = builtin_graph(name)
        assert graph_from_json(g.to_json()) == g
    with pytest.raises(GraphFormatError):
        graph_from_json('{"vertices": [{"halfedges": [0]}], "edges": []}')
    with pytest.raises(GraphFormatError):
        graph_from_json("not json")


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["tetrahedron", "pyramid", "torus-3-3"]), st.data())
def test_cilium_rotation_preserves_surface(name, data):
    g = builtin_graph(name)
    for v in range(g.n_vertices):
        g2 = g.rotate_cilium(v, data.draw(st.integers(0, 3)))
        assert len(faces(g2)) == len(faces(g))
        assert genus(g2) == genus(g)
        g = g2


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 5), st.integers(3, 5))
def test_torus_lattices_are_regular(n, m):
    g = builtin_graph(f"torus-{n}-{m}")
    assert is_regular(g)
    assert genus(g) == 1
