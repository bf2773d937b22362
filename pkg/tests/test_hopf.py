import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from hopflattice.constructions import (
    builtin_algebra,
    cyclic_group_table,
    double_dual,
    drinfeld_double,
    group_algebra,
    haar_integral,
    paired,
    symmetric_group_table,
)
from hopflattice.hopf import (
    AlgebraFormatError,
    check_hopf_axioms,
    check_quasitriangular,
    coopposite,
    dual_hopf,
    from_json,
    opposite,
    same_structure,
    tensor_power_space,
    to_json,
)
from hopflattice.suites import corrupt_multiplication

E, G = 0, 1  # basis of F[Z2]; the dual basis uses the same indices for delta_e, delta_g


@pytest.fixture(scope="module")
def z2():
    return builtin_algebra("z2")


def test_group_law_and_function_algebra(z2):
    assert z2.mul({G: 1}, {G: 1}) == {E: 1}
    zd = dual_hopf(z2)
    assert zd.mul({E: 1}, {G: 1}) == {}
    assert z2.comul({G: 1}) == {(G, G): 1}
    assert zd.comul({G: 1}) == {(E, G): 1, (G, E): 1}
    assert z2.S({G: 1}) == {G: 1}
    assert zd.eps({G: 1}) == 0


def test_iterated_coproduct_of_haar(z2):
    ell = {E: mpq(1, 2), G: mpq(1, 2)}
    assert z2.comul_n(ell, 3) == {(E, E, E): mpq(1, 2), (G, G, G): mpq(1, 2)}


def test_double_product_closed_form_z2(z2):
    dh = drinfeld_double(paired(z2))
    n = 2

    def idx(alpha, h):
        return alpha * n + h

    assert dh.mul({idx(G, G): 1}, {idx(G, G): 1}) == {idx(G, E): 1}
    assert dh.mul({idx(E, G): 1}, {idx(G, E): 1}) == {}


def _s3():
    table, unit, inv = symmetric_group_table(3)
    return table, unit, inv


def test_double_product_matches_group_formula():
    # independent formula for D(G): (d_a x g)(d_b x k) = [a = g b g^-1] d_a x gk
    table, unit, inv = _s3()
    h = group_algebra(table, unit, inv)
    dh = drinfeld_double(paired(h))
    n = len(table)
    for a, g, b, k in itertools.product(range(n), repeat=4):
        conj = table[table[g][b]][inv[g]]
        expect = {a * n + table[g][k]: 1} if conj == a else {}
        assert dh.mul({a * n + g: 1}, {b * n + k: 1}) == expect


@pytest.mark.parametrize("name", ["z2", "z3", "s3", "s3-dual"])
def test_axioms_for_builtins(name):
    h = builtin_algebra(name)
    assert all(check_hopf_axioms(h).values())
    assert all(check_hopf_axioms(dual_hopf(h)).values())


def test_double_of_s3_is_quasitriangular():
    dh = drinfeld_double(paired(builtin_algebra("s3")))
    assert all(check_hopf_axioms(dh).values())
    assert all(check_quasitriangular(dh).values())


def test_corrupted_multiplication_fails_associativity(z2):
    assert not check_hopf_axioms(corrupt_multiplication(z2))["associativity"]


def test_dual_and_opposites():
    z2 = builtin_algebra("z2")
    s3 = builtin_algebra("s3")
    assert same_structure(dual_hopf(dual_hopf(s3)), s3)
    assert same_structure(opposite(z2), z2)
    assert same_structure(opposite(opposite(s3)), s3)
    s3d = dual_hopf(s3)
    assert s3d.comult != coopposite(s3d).comult
    zd = dual_hopf(z2)
    assert zd.mul({E: 1}, {E: 1}) == {E: 1} and zd.mul({G: 1}, {G: 1}) == {G: 1}


def test_group_tables():
    h = group_algebra(*cyclic_group_table(2))
    assert h.dim == 2 and all(check_hopf_axioms(h).values())
    s3 = group_algebra(*symmetric_group_table(3))
    assert s3.dim == 6
    assert any(s3.mul({i: 1}, {j: 1}) != s3.mul({j: 1}, {i: 1}) for i in range(6) for j in range(6))
    assert all(s3.comul({i: 1}) == {(i, i): 1} for i in range(6))
    z3 = group_algebra(*cyclic_group_table(3))
    assert z3.S({1: 1}) == {2: 1}
    assert all(z3.S(z3.S({i: 1})) == {i: 1} for i in range(3))


def test_json_round_trip_and_errors():
    for name in ("z3", "s3-dual"):
        h = builtin_algebra(name)
        assert same_structure(from_json(to_json(h)), h)
    dh = drinfeld_double(paired(builtin_algebra("z2")))
    assert same_structure(from_json(to_json(dh)), dh)
    with pytest.raises(AlgebraFormatError):
        from_json('{"dim": 2, "mult": [[0, 0')
    with pytest.raises(AlgebraFormatError):
        from_json('{"dim": 2, "mult": [], "unit": [1]}')


def test_tensor_power_counit_of_haar():
    pair = paired(builtin_algebra("z2"))
    dh = drinfeld_double(pair)
    ell, eta = haar_integral(pair.h), haar_integral(pair.hd)
    n = pair.n
    haar = {a * n + b: x * y for a, x in eta.items() for b, y in ell.items()}
    space = tensor_power_space(dh, 3)
    t = space.from_tuples({(i, j, k): x * y * z for (i, x), (j, y), (k, z)
                           in itertools.product(haar.items(), repeat=3)})
    assert space.eps(t) == 1
    assert tensor_power_space(dh, 1) is dh or tensor_power_space(dh, 1).dim == dh.dim


def test_antipode_of_dual_double_is_involutive():
    dd = double_dual(paired(builtin_algebra("s3")))
    for i in range(dd.dim):
        assert dd.S(dd.S({i: 1})) == {i: 1}


coeffs = st.integers(-2, 2)


@settings(max_examples=40, deadline=None)
@given(st.lists(coeffs, min_size=9, max_size=9), st.lists(coeffs, min_size=9, max_size=9))
def test_double_counit_and_coproduct_multiplicative(a, b):
    dh = drinfeld_double(paired(builtin_algebra("z3")))
    x = {i: mpq(c) for i, c in enumerate(a) if c}
    y = {i: mpq(c) for i, c in enumerate(b) if c}
    xy = dh.mul(x, y)
    assert dh.eps(xy) == dh.eps(x) * dh.eps(y)
    lhs = dh.comul(xy)
    dx, dy = dh.comul(x), dh.comul(y)
    rhs = {}
    for (p, q), c in dx.items():
        for (r, s), z in dy.items():
            for k1, w1 in dh.mul({p: 1}, {r: 1}).items():
                for k2, w2 in dh.mul({q: 1}, {s: 1}).items():
                    rhs[(k1, k2)] = rhs.get((k1, k2), 0) + c * z * w1 * w2
    assert lhs == {k: v for k, v in rhs.items() if v}


@settings(max_examples=40, deadline=None)
@given(st.lists(coeffs, min_size=6, max_size=6), st.lists(coeffs, min_size=6, max_size=6),
       st.lists(coeffs, min_size=6, max_size=6))
def test_s3_associative_on_random_elements(a, b, c):
    h = builtin_algebra("s3")
    x, y, z = ({i: mpq(v) for i, v in enumerate(t) if v} for t in (a, b, c))
    assert h.mul(h.mul(x, y), z) == h.mul(x, h.mul(y, z))
