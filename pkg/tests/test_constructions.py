import itertools

import pytest
from gmpy2 import mpq

from hopflattice.constructions import (
    HeisenbergStructure,
    builtin_algebra,
    char_projector,
    check_basis_identities,
    check_hd_structure,
    check_module_axioms,
    double_dual,
    double_dual_matches_dual_of_double,
    group_algebra,
    haar_integral,
    haar_properties,
    heisenberg_double,
    paired,
    regular_actions,
    symmetric_group_table,
)
from hopflattice.hopf import check_hopf_axioms
from hopflattice.linalg import sparse_rank

E, G = 0, 1


def test_haar_of_z2():
    assert haar_integral(builtin_algebra("z2")) == {E: mpq(1, 2), G: mpq(1, 2)}


def test_haar_of_s3_is_group_average():
    s3 = builtin_algebra("s3")
    ell = haar_integral(s3)
    assert ell == {g: mpq(1, 6) for g in range(6)}
    for h in range(6):
        assert s3.mul({h: 1}, ell) == ell


@pytest.mark.parametrize("name", ["z2", "z3", "s3"])
def test_haar_of_function_algebra_is_delta_unit(name):
    pair = paired(builtin_algebra(name))
    unit = next(iter(pair.h.unit))
    assert haar_integral(pair.hd) == {unit: 1}


@pytest.mark.parametrize("name", ["z2", "z3", "s3", "s3-dual"])
def test_haar_properties(name):
    pair = paired(builtin_algebra(name))
    assert all(haar_properties(pair.h, haar_integral(pair.h), pair.hd).values())
    assert all(haar_properties(pair.hd, haar_integral(pair.hd), pair.h).values())


def test_dual_double_antipode_group_formula():
    # for a group: S(g (x) delta_c) = c^-1 g^-1 c (x) delta_{c^-1}
    table, unit, inv = symmetric_group_table(3)
    h = group_algebra(table, unit, inv)
    dd = double_dual(paired(h))
    n = len(table)
    for g, c in itertools.product(range(n), repeat=2):
        y = table[table[inv[c]][inv[g]]][c]
        assert dd.S({g * n + c: 1}) == {y * n + inv[c]: 1}


def test_dual_double_is_dual_of_double():
    for name in ("z2", "s3"):
        assert double_dual_matches_dual_of_double(paired(builtin_algebra(name)))


def test_dual_double_antipode_involutive_and_counit():
    pair = paired(builtin_algebra("s3"))
    dd = double_dual(pair)
    n = pair.n
    for a, b in itertools.product(range(n), repeat=2):
        assert dd.S(dd.S({a * n + b: 1})) == {a * n + b: 1}
        assert dd.eps({a * n + b: 1}) == pair.h.counit[a] * pair.hd.counit[b]


def test_heisenberg_product_z2():
    hd = heisenberg_double(paired(builtin_algebra("z2")))
    n = 2
    assert hd.mul({E * n + G: 1}, {G * n + E: 1}) == {G * n + E: 1}
    unit = hd.unit
    for i in range(4):
        assert hd.mul(unit, {i: 1}) == {i: 1} == hd.mul({i: 1}, unit)


def test_heisenberg_associative_z3():
    hd = heisenberg_double(paired(builtin_algebra("z3")))
    for i, j, k in itertools.product(range(9), repeat=3):
        assert hd.mul(hd.mul({i: 1}, {j: 1}), {k: 1}) == hd.mul({i: 1}, hd.mul({j: 1}, {k: 1}))


@pytest.mark.parametrize("name", ["z2", "z3"])
def test_heisenberg_structure_maps(name):
    pair = paired(builtin_algebra(name))
    assert all(check_hd_structure(pair).values())
    assert all(check_basis_identities(pair).values())


def test_s_d_squares_to_identity_s3():
    st = HeisenbergStructure(paired(builtin_algebra("s3")))
    for i in range(36):
        once = st.S_D({i: 1})
        twice = {}
        for k, c in once.items():
            for j, z in st.S_D({k: 1}).items():
                twice[j] = twice.get(j, 0) + c * z
        assert {k: v for k, v in twice.items() if v} == {i: 1}


def test_character_projectors():
    z2 = paired(builtin_algebra("z2"))
    cols = char_projector(z2)
    assert sparse_rank(cols) == 2
    s3 = paired(builtin_algebra("s3"))
    for side in ("left", "right"):
        cols = char_projector(s3, side=side)
        assert sparse_rank(cols) == 3
        for a in range(6):
            once = cols[a]
            twice = {}
            for k, c in once.items():
                for j, z in cols[k].items():
                    twice[j] = twice.get(j, 0) + c * z
            assert {k: v for k, v in twice.items() if v} == once


def test_actions():
    z2 = paired(builtin_algebra("z2"))
    acts = regular_actions(z2)
    assert acts["left_regular_dual"]({G: 1}, {G: 1}) == {E: 1}
    z3 = paired(builtin_algebra("z3"))
    ad = regular_actions(z3)["left_adjoint"]
    for h, k in itertools.product(range(3), repeat=2):
        assert ad({h: 1}, {k: 1}) == {k: 1}
    assert all(check_module_axioms(paired(builtin_algebra("s3"))).values())


def test_builtin_double_axioms_z3():
    pair = paired(builtin_algebra("z3"))
    assert all(check_hopf_axioms(double_dual(pair)).values())
