"""Finite-dimensional Hopf algebras given by sparse exact structure constants.

A basis element is an integer index.  Elements of an algebra are sparse
dicts ``index -> scalar``; elements of tensor products are sparse dicts keyed
by index tuples.  :class:`Element` wraps a sparse vector together with the
space it lives in and is the public arithmetic type.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .linalg import (
    ONE,
    ZERO,
    NoSolution,
    Q,
    add_term,
    axpy,
    format_scalar,
    mixed_radix_decode,
    mixed_radix_encode,
    scalar,
    solve_linear,
)


class SpaceMismatch(TypeError):
    pass


class HopfAlgebra:
    """Structure constants of a (possibly algebra-only) Hopf algebra.

    ``mult[(i, j)]`` is the sparse expansion of e_i e_j, ``comult[i]`` the
    expansion of Delta(e_i) keyed by pairs, ``antipode[i]`` the expansion of
    S(e_i).  Coalgebra data may be ``None`` for algebras such as the
    Heisenberg double.
    """

    def __init__(
        self,
        label: str,
        dim: int,
        mult: Iterable[tuple[int, int, int, object]],
        unit: Mapping[int, object],
        comult: Iterable[tuple[int, int, int, object]] | None = None,
        counit: Sequence[object] | None = None,
        antipode: Mapping[int, Mapping[int, object]] | None = None,
        r_matrix: Mapping[tuple[int, int], object] | None = None,
    ):
        self.label = label
        self.dim = dim
        self.mult: dict[tuple[int, int], dict[int, Q]] = {}
        for i, j, k, c in mult:
            self._check(i, j, k)
            c = scalar(c)
            if c:
                add_term(self.mult.setdefault((i, j), {}), k, c)
        self.mult = {key: v for key, v in self.mult.items() if v}
        self.unit = {k: scalar(v) for k, v in unit.items() if scalar(v)}
        self.comult: list[dict[tuple[int, int], Q]] | None = None
        if comult is not None:
            self.comult = [dict() for _ in range(dim)]
            for i, j, k, c in comult:
                self._check(i, j, k)
                c = scalar(c)
                if c:
                    add_term(self.comult[i], (j, k), c)
        self.counit = None if counit is None else [scalar(c) for c in counit]
        self.antipode = None
        if antipode is not None:
            self.antipode = [
                {j: scalar(c) for j, c in antipode.get(i, {}).items() if scalar(c)} for i in range(dim)
            ]
        self.r_matrix = None
        if r_matrix is not None:
            self.r_matrix = {k: scalar(v) for k, v in r_matrix.items() if scalar(v)}
        self._s_inv = None

    def _check(self, *idx: int) -> None:
        for i in idx:
            if not 0 <= i < self.dim:
                raise ValueError(f"basis index {i} out of range for dim {self.dim}")

    @property
    def is_hopf(self) -> bool:
        return self.comult is not None and self.counit is not None and self.antipode is not None

    def __repr__(self) -> str:
        return f"HopfAlgebra({self.label!r}, dim={self.dim})"

    # ---- arithmetic on sparse dicts -------------------------------------
    def basis(self, i: int) -> dict:
        return {i: ONE}

    def one(self) -> dict:
        return dict(self.unit)

    def mul(self, a: Mapping[int, Q], b: Mapping[int, Q]) -> dict:
        out: dict = {}
        mt = self.mult
        for i, x in a.items():
            for j, y in b.items():
                prod = mt.get((i, j))
                if prod:
                    c = x * y
                    for k, z in prod.items():
                        add_term(out, k, c * z)
        return out

    def comul(self, a: Mapping[int, Q]) -> dict:
        out: dict = {}
        for i, x in a.items():
            for jk, z in self.comult[i].items():
                add_term(out, jk, x * z)
        return out

    def comul_n(self, a: Mapping[int, Q], n: int) -> dict:
        """Iterated coproduct into the n-fold tensor power, keyed by n-tuples."""
        if n < 1:
            raise ValueError("n must be at least 1")
        cur = {(i,): x for i, x in a.items()}
        for _ in range(n - 1):
            nxt: dict = {}
            for key, x in cur.items():
                for (j, k), z in self.comult[key[-1]].items():
                    add_term(nxt, key[:-1] + (j, k), x * z)
            cur = nxt
        return cur

    def eps(self, a: Mapping[int, Q]) -> Q:
        return sum((x * self.counit[i] for i, x in a.items()), ZERO)

    def S(self, a: Mapping[int, Q]) -> dict:
        out: dict = {}
        for i, x in a.items():
            for j, z in self.antipode[i].items():
                add_term(out, j, x * z)
        return out

    def S_inv(self, a: Mapping[int, Q]) -> dict:
        if self._s_inv is None:
            self._s_inv = _invert_columns(self.antipode, self.dim)
        out: dict = {}
        for i, x in a.items():
            for j, z in self._s_inv[i].items():
                add_term(out, j, x * z)
        return out

    def antipode_inverse_columns(self) -> list[dict]:
        if self._s_inv is None:
            self._s_inv = _invert_columns(self.antipode, self.dim)
        return self._s_inv

    def apply_map(self, columns: Sequence[Mapping[int, Q]], a: Mapping[int, Q]) -> dict:
        out: dict = {}
        for i, x in a.items():
            for j, z in columns[i].items():
                add_term(out, j, x * z)
        return out


def _invert_columns(cols: Sequence[Mapping[int, Q]], n: int) -> list[dict]:
    """Columns of the inverse of the matrix whose i-th column is ``cols[i]``."""
    mat = [[cols[c].get(r, ZERO) for c in range(n)] for r in range(n)]
    out = []
    for i in range(n):
        rhs = [ONE if r == i else ZERO for r in range(n)]
        try:
            x = solve_linear(mat, rhs)
        except NoSolution as exc:
            raise ValueError("antipode is not invertible") from exc
        out.append({j: v for j, v in enumerate(x) if v})
    return out


# --------------------------------------------------------------------------
# tensor products of sparse tuple-keyed elements

def tensor(*parts: Mapping) -> dict:
    """Tensor product of elements; integer keys become 1-tuples."""
    out: dict = {(): ONE}
    for p in parts:
        nxt: dict = {}
        for k1, x in out.items():
            for k2, y in p.items():
                key = k1 + (k2 if isinstance(k2, tuple) else (k2,))
                add_term(nxt, key, x * y)
        out = nxt
    return out


def tmul(algs: Sequence[HopfAlgebra], a: Mapping[tuple, Q], b: Mapping[tuple, Q]) -> dict:
    """Componentwise product in a tensor product of algebras."""
    out: dict = {}
    mts = [alg.mult for alg in algs]
    for ka, x in a.items():
        for kb, y in b.items():
            terms = [((), x * y)]
            for mt, i, j in zip(mts, ka, kb):
                prod = mt.get((i, j))
                if not prod:
                    terms = []
                    break
                terms = [(k + (m,), c * z) for k, c in terms for m, z in prod.items()]
            for k, c in terms:
                add_term(out, k, c)
    return out


def apply_factor(a: Mapping[tuple, Q], pos: int, fn) -> dict:
    """Apply a linear map ``fn`` (basis index -> sparse dict) to one tensor factor."""
    out: dict = {}
    for key, x in a.items():
        for m, z in fn(key[pos]).items():
            add_term(out, key[:pos] + (m,) + key[pos + 1:], x * z)
    return out


def flip(a: Mapping[tuple, Q]) -> dict:
    return {(k[1], k[0]) + k[2:]: v for k, v in a.items()}


# --------------------------------------------------------------------------
# lazy componentwise tensor powers

class TensorPower:
    """The n-fold tensor power of a Hopf algebra with componentwise structure.

    Elements are sparse dicts keyed by flat mixed-radix indices.
    """

    def __init__(self, base: HopfAlgebra, n: int):
        if n < 1:
            raise ValueError("tensor power exponent must be positive")
        self.base = base
        self.n = n
        self.shape = (base.dim,) * n
        self.dim = base.dim ** n
        self.label = f"{base.label}^{n}"

    def __repr__(self) -> str:
        return f"TensorPower({self.base.label!r}, {self.n})"

    @property
    def is_hopf(self) -> bool:
        return self.base.is_hopf

    def encode(self, digits: Sequence[int]) -> int:
        return mixed_radix_encode(digits, self.shape)

    def decode(self, flat: int) -> tuple[int, ...]:
        return mixed_radix_decode(flat, self.shape)

    def to_tuples(self, a: Mapping[int, Q]) -> dict:
        return {self.decode(k): v for k, v in a.items()}

    def from_tuples(self, a: Mapping[tuple, Q]) -> dict:
        return {self.encode(k): v for k, v in a.items()}

    def basis(self, i: int) -> dict:
        return {i: ONE}

    def one(self) -> dict:
        return self.from_tuples(tensor(*([self.base.unit] * self.n)))

    def mul(self, a, b) -> dict:
        return self.from_tuples(tmul([self.base] * self.n, self.to_tuples(a), self.to_tuples(b)))

    def comul(self, a) -> dict:
        out: dict = {}
        for k, x in self.to_tuples(a).items():
            parts = [self.base.comult[i] for i in k]
            for combo in itertools.product(*[list(p.items()) for p in parts]):
                c = x
                left, right = [], []
                for (j, m), z in combo:
                    c = c * z
                    left.append(j)
                    right.append(m)
                add_term(out, (self.encode(left), self.encode(right)), c)
        return out

    def eps(self, a) -> Q:
        tot = ZERO
        for k, x in self.to_tuples(a).items():
            c = x
            for i in k:
                c = c * self.base.counit[i]
            tot += c
        return tot

    def S(self, a) -> dict:
        t = self.to_tuples(a)
        for pos in range(self.n):
            t = apply_factor(t, pos, lambda i: self.base.antipode[i])
        return self.from_tuples(t)

    def embed(self, positions: Sequence[int], x: Mapping) -> dict:
        """iota_{positions}(x): place the factors of ``x`` at the given slots, units elsewhere."""
        if isinstance(next(iter(x), ()), tuple) is False and len(positions) == 1:
            x = {(k,): v for k, v in x.items()}
        out: dict = {}
        unit_terms = list(self.base.unit.items())
        rest = [p for p in range(self.n) if p not in positions]
        for key, c in x.items():
            for fill in itertools.product(unit_terms, repeat=len(rest)):
                digits = [0] * self.n
                cc = c
                for p, d in zip(positions, key):
                    digits[p] = d
                for p, (d, z) in zip(rest, fill):
                    digits[p] = d
                    cc = cc * z
                add_term(out, self.encode(digits), cc)
        return out


def tensor_power_space(spec: HopfAlgebra, n: int):
    """Registered tensor power; n = 1 returns the spec itself."""
    if n == 1:
        return spec
    return _register(TensorPower(spec, n))


_REGISTRY: dict[str, object] = {}


def _register(space):
    key = space.label
    existing = _REGISTRY.get(key)
    if existing is not None and getattr(existing, "base", None) is getattr(space, "base", None):
        return existing
    _REGISTRY[key] = space
    return space


# --------------------------------------------------------------------------
# public element type

@dataclass(frozen=True)
class Element:
    space: object
    coords: Mapping[int, Q]

    @staticmethod
    def basis(space, i: int) -> "Element":
        return Element(space, {i: ONE})

    @staticmethod
    def from_dict(space, coords: Mapping[int, object]) -> "Element":
        return Element(space, {k: scalar(v) for k, v in coords.items() if scalar(v)})

    @property
    def space_id(self) -> str:
        return self.space.label

    def _same(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.space is not self.space:
            raise SpaceMismatch(f"cannot combine elements of {self.space!r} and {getattr(other, 'space', other)!r}")

    def __add__(self, other: "Element") -> "Element":
        self._same(other)
        out = dict(self.coords)
        axpy(out, other.coords)
        return Element(self.space, out)

    def __sub__(self, other: "Element") -> "Element":
        self._same(other)
        out = dict(self.coords)
        axpy(out, other.coords, -ONE)
        return Element(self.space, out)

    def __neg__(self) -> "Element":
        return Element(self.space, {k: -v for k, v in self.coords.items()})

    def __rmul__(self, c) -> "Element":
        c = scalar(c)
        return Element(self.space, {k: c * v for k, v in self.coords.items()} if c else {})

    def __mul__(self, other) -> "Element":
        if isinstance(other, Element):
            return multiply(self, other)
        return self.__rmul__(other)

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and other.space is self.space and dict(self.coords) == dict(other.coords)

    def __hash__(self) -> int:
        return hash((id(self.space), frozenset(self.coords.items())))

    def dense(self) -> list[Q]:
        out = [ZERO] * self.space.dim
        for k, v in self.coords.items():
            out[k] = v
        return out


def multiply(a: Element, b: Element) -> Element:
    a._same(b)
    return Element(a.space, a.space.mul(a.coords, b.coords))


def comultiply(a: Element, n: int = 2) -> Element:
    """Iterated coproduct into the registered n-th tensor power (flat indices)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    space = a.space
    if isinstance(space, TensorPower):
        if n != 2:
            raise ValueError("iterated coproducts of tensor powers are not supported")
        target = tensor_power_space(space, 2)
        return Element(target, {target.encode(k): v for k, v in space.comul(a.coords).items()})
    target = tensor_power_space(space, n)
    return Element(target, target.from_tuples(space.comul_n(a.coords, n)))


def antipode(a: Element) -> Element:
    return Element(a.space, a.space.S(a.coords))


def counit(a: Element) -> Q:
    return a.space.eps(a.coords)


def embed(space: TensorPower, positions: Sequence[int], x: Element) -> Element:
    if x.space is not space.base and not (isinstance(x.space, TensorPower) and x.space.base is space.base):
        raise SpaceMismatch("embedded element must come from the base algebra")
    if isinstance(x.space, TensorPower):
        coords = x.space.to_tuples(x.coords)
    else:
        coords = {(k,): v for k, v in x.coords.items()}
    return Element(space, space.embed(list(positions), coords))


# --------------------------------------------------------------------------
# axiom checks

def _basis_prod(alg: HopfAlgebra, i: int, j: int) -> dict:
    return dict(alg.mult.get((i, j), {}))


def check_hopf_axioms(spec: HopfAlgebra) -> dict[str, bool]:
    """Exhaustive verification of the (quasitriangular) Hopf algebra axioms."""
    n = spec.dim
    rep: dict[str, bool] = {}
    rng = range(n)
    one = spec.unit

    ok = True
    for i in rng:
        for j in rng:
            ij = _basis_prod(spec, i, j)
            for k in rng:
                lhs = spec.mul(ij, {k: ONE})
                rhs = spec.mul({i: ONE}, _basis_prod(spec, j, k))
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            break
    rep["associativity"] = ok
    rep["unit"] = all(spec.mul(one, {i: ONE}) == {i: ONE} == spec.mul({i: ONE}, one) for i in rng)
    if spec.comult is None:
        return rep

    ok = True
    for i in rng:
        d = spec.comult[i]
        lhs: dict = {}
        rhs: dict = {}
        for (j, k), c in d.items():
            for (a, b), z in spec.comult[j].items():
                add_term(lhs, (a, b, k), c * z)
            for (a, b), z in spec.comult[k].items():
                add_term(rhs, (j, a, b), c * z)
        if lhs != rhs:
            ok = False
            break
    rep["coassociativity"] = ok
    ok = True
    for i in rng:
        left: dict = {}
        right: dict = {}
        for (j, k), c in spec.comult[i].items():
            add_term(left, k, c * spec.counit[j])
            add_term(right, j, c * spec.counit[k])
        if left != {i: ONE} or right != {i: ONE}:
            ok = False
            break
    rep["counit"] = ok
    algs2 = [spec, spec]
    ok = tensor(one, one) == spec.comul(one)
    if ok:
        for i in rng:
            for j in rng:
                lhs = spec.comul(_basis_prod(spec, i, j))
                rhs = tmul(algs2, spec.comult[i], spec.comult[j])
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
    rep["comult_multiplicative"] = ok
    ok = spec.eps(one) == ONE and all(
        spec.eps(_basis_prod(spec, i, j)) == spec.counit[i] * spec.counit[j] for i in rng for j in rng
    )
    rep["counit_multiplicative"] = ok
    ok = True
    for i in rng:
        left: dict = {}
        right: dict = {}
        for (j, k), c in spec.comult[i].items():
            axpy(left, spec.mul(spec.S({j: ONE}), {k: ONE}), c)
            axpy(right, spec.mul({j: ONE}, spec.S({k: ONE})), c)
        target = {k: spec.counit[i] * v for k, v in one.items() if spec.counit[i]}
        if left != target or right != target:
            ok = False
            break
    rep["antipode"] = ok
    if spec.r_matrix is not None:
        rep.update(check_quasitriangular(spec))
    return rep


def check_quasitriangular(spec: HopfAlgebra) -> dict[str, bool]:
    R = spec.r_matrix
    algs2 = [spec, spec]
    algs3 = [spec, spec, spec]
    rep: dict[str, bool] = {}
    r_inv = apply_factor(R, 0, lambda i: spec.antipode[i])
    one2 = tensor(spec.unit, spec.unit)
    rep["r_invertible"] = tmul(algs2, R, r_inv) == one2 == tmul(algs2, r_inv, R)
    ok = True
    for i in range(spec.dim):
        d = spec.comult[i]
        if tmul(algs2, R, d) != tmul(algs2, flip(d), R):
            ok = False
            break
    rep["r_intertwines_coproduct"] = ok
    d_first: dict = {}
    d_second: dict = {}
    for (a, b), c in R.items():
        for (x, y), z in spec.comult[a].items():
            add_term(d_first, (x, y, b), c * z)
        for (x, y), z in spec.comult[b].items():
            add_term(d_second, (a, x, y), c * z)
    unit_terms = list(spec.unit.items())

    def r_at(p: int, q: int) -> dict:
        out: dict = {}
        for (a, b), c in R.items():
            for u, z in unit_terms:
                key = [u, u, u]
                key[p], key[q] = a, b
                add_term(out, tuple(key), c * z)
        return out

    r12, r13, r23 = r_at(0, 1), r_at(0, 2), r_at(1, 2)
    rep["hexagon_1"] = d_first == tmul(algs3, r13, r23)
    rep["hexagon_2"] = d_second == tmul(algs3, r13, r12)
    return rep


# --------------------------------------------------------------------------
# derived structures

def dual_hopf(spec: HopfAlgebra, label: str | None = None) -> HopfAlgebra:
    """The dual Hopf algebra in the dual basis."""
    if not spec.is_hopf:
        raise ValueError("dual needs a full Hopf structure")
    n = spec.dim
    mult = [(i, j, k, c) for k in range(n) for (i, j), c in spec.comult[k].items()]
    comult = [(k, i, j, c) for (i, j), prod in spec.mult.items() for k, c in prod.items()]
    unit = {i: c for i, c in enumerate(spec.counit) if c}
    counit = [spec.unit.get(i, ZERO) for i in range(n)]
    antipode: dict[int, dict[int, Q]] = {i: {} for i in range(n)}
    for j in range(n):
        for i, c in spec.antipode[j].items():
            antipode[i][j] = c
    return HopfAlgebra(label or f"dual({spec.label})", n, mult, unit, comult, counit, antipode)


def _r_flip(spec: HopfAlgebra):
    if spec.r_matrix is None:
        return None
    return {(b, a): c for (a, b), c in spec.r_matrix.items()}


def opposite(spec: HopfAlgebra, label: str | None = None) -> HopfAlgebra:
    mult = [(j, i, k, c) for (i, j), prod in spec.mult.items() for k, c in prod.items()]
    comult = None
    antipode = None
    if spec.comult is not None:
        comult = [(i, j, k, c) for i in range(spec.dim) for (j, k), c in spec.comult[i].items()]
    if spec.antipode is not None:
        antipode = dict(enumerate(spec.antipode_inverse_columns()))
    return HopfAlgebra(label or f"op({spec.label})", spec.dim, mult, spec.unit, comult, spec.counit,
                       antipode, _r_flip(spec))


def coopposite(spec: HopfAlgebra, label: str | None = None) -> HopfAlgebra:
    mult = [(i, j, k, c) for (i, j), prod in spec.mult.items() for k, c in prod.items()]
    comult = [(i, k, j, c) for i in range(spec.dim) for (j, k), c in spec.comult[i].items()]
    antipode = dict(enumerate(spec.antipode_inverse_columns()))
    return HopfAlgebra(label or f"cop({spec.label})", spec.dim, mult, spec.unit, comult, spec.counit,
                       antipode, _r_flip(spec))


def same_structure(a: HopfAlgebra, b: HopfAlgebra) -> bool:
    """Equality of all structure constants (labels ignored)."""
    return (
        a.dim == b.dim
        and a.mult == b.mult
        and a.unit == b.unit
        and a.comult == b.comult
        and a.counit == b.counit
        and a.antipode == b.antipode
        and a.r_matrix == b.r_matrix
    )


# --------------------------------------------------------------------------
# JSON interchange

def to_json_dict(spec: HopfAlgebra) -> dict:
    n = spec.dim
    fs = format_scalar
    out = {
        "label": spec.label,
        "dim": n,
        "mult": [[i, j, k, fs(c)] for (i, j), prod in sorted(spec.mult.items()) for k, c in sorted(prod.items())],
        "unit": [fs(spec.unit.get(i, ZERO)) for i in range(n)],
    }
    if spec.comult is not None:
        out["comult"] = [[i, j, k, fs(c)] for i in range(n) for (j, k), c in sorted(spec.comult[i].items())]
    if spec.counit is not None:
        out["counit"] = [fs(c) for c in spec.counit]
    if spec.antipode is not None:
        out["antipode"] = [[fs(spec.antipode[col].get(row, ZERO)) for col in range(n)] for row in range(n)]
    out["r_matrix"] = (
        None if spec.r_matrix is None else [[i, j, fs(c)] for (i, j), c in sorted(spec.r_matrix.items())]
    )
    return out


def to_json(spec: HopfAlgebra) -> str:
    return json.dumps(to_json_dict(spec), indent=1)


class AlgebraFormatError(ValueError):
    pass


def from_json_dict(data: Mapping) -> HopfAlgebra:
    try:
        n = int(data["dim"])
        if n < 1:
            raise AlgebraFormatError("dim must be positive")
        mult = [(int(i), int(j), int(k), scalar(c)) for i, j, k, c in data["mult"]]
        unit_list = data["unit"]
        if len(unit_list) != n:
            raise AlgebraFormatError("unit has wrong length")
        unit = {i: scalar(c) for i, c in enumerate(unit_list)}
        comult = None
        if data.get("comult") is not None:
            comult = [(int(i), int(j), int(k), scalar(c)) for i, j, k, c in data["comult"]]
        counit = None
        if data.get("counit") is not None:
            counit = [scalar(c) for c in data["counit"]]
            if len(counit) != n:
                raise AlgebraFormatError("counit has wrong length")
        antipode = None
        if data.get("antipode") is not None:
            rows = data["antipode"]
            if len(rows) != n or any(len(r) != n for r in rows):
                raise AlgebraFormatError("antipode must be a dim x dim matrix")
            antipode = {col: {row: scalar(rows[row][col]) for row in range(n)} for col in range(n)}
        r_matrix = None
        if data.get("r_matrix") is not None:
            r_matrix = {(int(i), int(j)): scalar(c) for i, j, c in data["r_matrix"]}
        return HopfAlgebra(str(data.get("label", "custom")), n, mult, unit, comult, counit, antipode, r_matrix)
    except AlgebraFormatError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise AlgebraFormatError(f"malformed algebra JSON: {exc}") from exc


def from_json(text: str) -> HopfAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise AlgebraFormatError("algebra JSON must be an object")
    return from_json_dict(data)
