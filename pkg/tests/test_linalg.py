import itertools

from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from hopflattice.linalg import (
    NoSolution,
    SparseEchelon,
    dense_to_sparse,
    kernel_basis,
    mat_vec,
    mixed_radix_decode,
    mixed_radix_encode,
    rank,
    solve_linear,
    sparse_kernel_basis,
    sparse_rank,
)

small = st.integers(min_value=-3, max_value=3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rank_small_cases():
    assert rank([[1, 0], [0, 1]]) == 2
    assert rank([[1, 1], [1, 1]]) == 1


def test_kernel_small_cases():
    assert kernel_basis([[1, 0], [0, 1]]) == []
    assert len(kernel_basis([[0] * 3] * 3)) == 3


def test_kernel_of_multiplication_by_e_minus_g():
    # columns: images of e and g under left multiplication by e - g in F[Z2]
    m = [[1, -1], [-1, 1]]
    ker = kernel_basis(m)
    assert len(ker) == 1
    a, b = ker[0]
    assert a == b != 0


def test_solve_identity_and_singular():
    assert solve_linear([[1, 0], [0, 1]], [3, mpq(1, 2)]) == [3, mpq(1, 2)]
    m = [[1, 2], [2, 4]]
    x = solve_linear(m, [1, 2])
    assert mat_vec(m, x) == [1, 2]
    try:
        solve_linear(m, [1, 3])
    except NoSolution:
        pass
    else:
        raise AssertionError("inconsistent system accepted")


def test_mixed_radix():
    assert mixed_radix_encode((0, 0, 0), (2, 2, 2)) == 0
    assert mixed_radix_encode((1, 1), (2, 3)) == 4
    shape = (2, 3, 4)
    seen = set()
    for digits in itertools.product(*(range(s) for s in shape)):
        flat = mixed_radix_encode(digits, shape)
        assert mixed_radix_decode(flat, shape) == digits
        seen.add(flat)
    assert seen == set(range(24))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    ncols = len(m[0])
    assert rank(m) + len(kernel_basis(m, ncols)) == ncols


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_vectors_are_annihilated(m):
    for v in kernel_basis(m, len(m[0])):
        assert all(x == 0 for x in mat_vec(m, v))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_sparse_rank_matches_dense(m):
    rows = [dense_to_sparse(r) for r in m]
    assert sparse_rank(rows) == rank(m)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_sparse_kernel_matches_dense(m):
    ncols = len(m[0])
    columns = [dense_to_sparse([m[r][c] for r in range(len(m))]) for c in range(ncols)]
    ker = sparse_kernel_basis(columns)
    assert len(ker) == len(kernel_basis(m, ncols))
    for v in ker:
        out = {}
        for c, z in v.items():
            for r, w in columns[c].items():
                out[r] = out.get(r, 0) + z * w
        assert all(x == 0 for x in out.values())


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_echelon_membership(m):
    ech = SparseEchelon(reduced=True)
    rows = [dense_to_sparse(r) for r in m]
    for r in rows:
        ech.insert(r)
    for r in rows:
        assert ech.contains(r)
        coords = ech.coordinates(r)
        back = {}
        for i, c in coords.items():
            for k, z in ech.basis()[i].items():
                back[k] = back.get(k, 0) + c * z
        assert {k: v for k, v in back.items() if v} == r
