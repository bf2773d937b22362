"""Exact rational linear algebra on dense and sparse vectors.

Scalars are ``gmpy2.mpq`` values (always reduced, positive denominator).
Sparse vectors are plain ``dict`` objects mapping an integer (or any hashable
key) to a nonzero scalar.  Dense matrices are lists of rows.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

from gmpy2 import mpq

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)

SparseVec = dict


def scalar(x) -> mpq:
    """Coerce an int, string ``"p/q"`` or rational to a scalar."""
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def format_scalar(x) -> str:
    q = mpq(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def height(x: mpq) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


# --------------------------------------------------------------------------
# mixed-radix indices (first factor most significant)

def strides(shape: Sequence[int]) -> list[int]:
    out = [1] * len(shape)
    acc = 1
    for i in range(len(shape) - 1, -1, -1):
        out[i] = acc
        acc *= shape[i]
    return out


def mixed_radix_encode(digits: Sequence[int], shape: Sequence[int]) -> int:
    if len(digits) != len(shape):
        raise ValueError(f"expected {len(shape)} digits, got {len(digits)}")
    flat = 0
    for d, n in zip(digits, shape):
        if not 0 <= d < n:
            raise ValueError(f"digit {d} out of range for factor of size {n}")
        flat = flat * n + d
    return flat


def mixed_radix_decode(flat: int, shape: Sequence[int]) -> tuple[int, ...]:
    total = 1
    for n in shape:
        total *= n
    if not 0 <= flat < total:
        raise ValueError(f"flat index {flat} out of range for shape {tuple(shape)}")
    out = []
    for n in reversed(shape):
        flat, d = divmod(flat, n)
        out.append(d)
    return tuple(reversed(out))


# --------------------------------------------------------------------------
# sparse vector helpers

def axpy(dst: dict, src: Mapping, c=ONE) -> dict:
    """dst += c * src, dropping entries that cancel."""
    for k, v in src.items():
        nv = dst.get(k, ZERO) + c * v
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)
    return dst


def add_term(dst: dict, key: Hashable, c) -> None:
    nv = dst.get(key, ZERO) + c
    if nv:
        dst[key] = nv
    else:
        dst.pop(key, None)


def scale(vec: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in vec.items()}


def vec_sub(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    axpy(out, b, -ONE)
    return out


def clean(vec: Mapping) -> dict:
    return {k: v for k, v in vec.items() if v}


def dense_to_sparse(vec: Sequence) -> dict:
    return {i: mpq(v) for i, v in enumerate(vec) if v}


def sparse_to_dense(vec: Mapping, n: int) -> list:
    out = [ZERO] * n
    for k, v in vec.items():
        out[k] = v
    return out


# --------------------------------------------------------------------------
# dense routines

def _rref(rows: list[list[mpq]], ncols: int) -> tuple[list[list[mpq]], list[int]]:
    """Reduced row echelon form; the pivot in each column is the lowest-height entry."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        best = None
        for i in range(r, len(m)):
            x = m[i][c]
            if x and (best is None or height(x) < height(m[best][c])):
                best = i
        if best is None:
            continue
        m[r], m[best] = m[best], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                row_r = m[r]
                m[i] = [a - f * b for a, b in zip(m[i], row_r)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _as_matrix(matrix: Sequence[Sequence]) -> tuple[list[list[mpq]], int]:
    rows = [[scalar(x) for x in row] for row in matrix]
    ncols = len(rows[0]) if rows else 0
    if any(len(row) != ncols for row in rows):
        raise ValueError("ragged matrix")
    return rows, ncols


def rank(matrix: Sequence[Sequence]) -> int:
    rows, ncols = _as_matrix(matrix)
    if not rows:
        return 0
    _, piv = _rref(rows, ncols)
    return len(piv)


def kernel_basis(matrix: Sequence[Sequence], ncols: int | None = None) -> list[list[mpq]]:
    rows, n = _as_matrix(matrix)
    if not rows:
        if ncols is None:
            return []
        n = ncols
    red, piv = _rref(rows, n) if rows else ([], [])
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


class NoSolution(ValueError):
    pass


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> list[mpq]:
    """One exact solution of matrix @ x = rhs; raises NoSolution if inconsistent."""
    rows, n = _as_matrix(matrix)
    if len(rhs) != len(rows):
        raise ValueError(f"rhs has length {len(rhs)}, matrix has {len(rows)} rows")
    aug = [row + [scalar(b)] for row, b in zip(rows, rhs)]
    red, piv = _rref(aug, n + 1)
    if piv and piv[-1] == n:
        raise NoSolution("inconsistent linear system")
    x = [ZERO] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return x


def mat_vec(matrix: Sequence[Sequence], vec: Sequence) -> list[mpq]:
    return [sum((scalar(a) * scalar(b) for a, b in zip(row, vec)), ZERO) for row in matrix]


# --------------------------------------------------------------------------
# sparse incremental echelon form

def _lead(vec: Mapping):
    return min(vec)


class SparseEchelon:
    """Incremental row echelon basis of a span of sparse vectors.

    Rows are normalised so that their leading (minimal) key has coefficient 1.
    With ``reduced=True`` every pivot column is cleared from all other rows,
    which makes coordinates with respect to the basis readable off the pivots.
    """

    def __init__(self, reduced: bool = False):
        self.reduced = reduced
        self.rows: dict = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        v = dict(vec)
        if self.reduced:
            for p in [k for k in v if k in self.rows]:
                c = v.get(p)
                if c:
                    axpy(v, self.rows[p], -c)
            return v
        done: dict = {}
        while v:
            p = _lead(v)
            row = self.rows.get(p)
            c = v[p]
            if row is None:
                done[p] = c
                del v[p]
                continue
            axpy(v, row, -c)
        return done

    def insert(self, vec: Mapping) -> bool:
        """Add ``vec`` to the span; return True if it was independent."""
        r = self.reduce(vec)
        if not r:
            return False
        p = _lead(r)
        inv = ONE / r[p]
        r = {k: x * inv for k, x in r.items()}
        if self.reduced:
            for q, row in self.rows.items():
                c = row.get(p)
                if c:
                    axpy(row, r, -c)
        self.rows[p] = r
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[dict]:
        return [self.rows[p] for p in sorted(self.rows)]

    def pivots(self) -> list:
        return sorted(self.rows)

    def coordinates(self, vec: Mapping) -> dict | None:
        """Coordinates of ``vec`` in ``basis()`` (reduced mode only); None if outside."""
        if not self.reduced:
            raise ValueError("coordinates need a reduced echelon form")
        if self.reduce(vec):
            return None
        order = {p: i for i, p in enumerate(sorted(self.rows))}
        return {order[p]: c for p, c in vec.items() if p in self.rows}


def sparse_rank(vectors: Iterable[Mapping]) -> int:
    ech = SparseEchelon()
    for v in vectors:
        ech.insert(v)
    return len(ech)


def sparse_image_basis(vectors: Iterable[Mapping], reduced: bool = True) -> SparseEchelon:
    ech = SparseEchelon(reduced=reduced)
    for v in vectors:
        ech.insert(v)
    return ech


def sparse_kernel_basis(columns: Sequence[Mapping]) -> list[dict]:
    """Kernel of the linear map whose i-th column is ``columns[i]``.

    Returns sparse vectors over column indices.
    """
    pivot_rows: dict = {}
    kernel = []
    for i, col in enumerate(columns):
        v = dict(col)
        combo = {i: ONE}
        while v:
            p = _lead(v)
            if p not in pivot_rows:
                break
            row, rcombo = pivot_rows[p]
            c = v[p]
            axpy(v, row, -c)
            axpy(combo, rcombo, -c)
        if not v:
            kernel.append(combo)
            continue
        p = _lead(v)
        inv = ONE / v[p]
        pivot_rows[p] = ({k: x * inv for k, x in v.items()}, {k: x * inv for k, x in combo.items()})
    return kernel
