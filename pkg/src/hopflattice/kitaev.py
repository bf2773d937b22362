"""Kitaev lattice model for a semisimple Hopf algebra H on a ciliated ribbon graph.

Triangle operators act on the extended space ``H^{(x) E}``.  The operator
algebra is modelled by ``H(H)^{(x) E}`` on the carrier ``(H (x) H*)^{(x) E}``
(flat local index ``a*n + b`` for ``x_a (x) alpha^b``), which carries two
componentwise products: ``"hd"`` (Heisenberg double) and ``"dd"`` (the dual
Drinfeld double D(H)*).  Holonomies along words in the thickened graph use
the ``"dd"`` product unless another mode is requested.

States are dicts keyed by tuples of H-basis indices, one per edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .constructions import (
    double_dual,
    drinfeld_double,
    haar_integral,
    heisenberg_double,
    paired,
)
from .edgetensor import EdgeTensorSpace
from .hopf import HopfAlgebra
from .linalg import ONE, ZERO, Q, SparseEchelon, add_term, axpy, rank, scale
from .ribbon import (
    LB,
    RB,
    CiliatedRibbonGraph,
    L,
    NotRegular,
    R,
    check_regular,
    ciliated_face,
    faces,
    face_loop,
    is_composable,
    is_ribbon_path,
    thicken,
    vertex_loop,
)


class ResourceLimit(RuntimeError):
    pass


class NotComposable(ValueError):
    pass


class NotRibbon(ValueError):
    pass


def require_regular(graph: CiliatedRibbonGraph) -> None:
    rep = check_regular(graph)
    if not rep.regular:
        first = rep.failures[0]
        raise NotRegular(
            f"graph '{graph.label}' is not regular: condition {first['condition']} "
            f"({first['kind']}) fails; failing conditions {rep.failed_conditions}")


# --------------------------------------------------------------------------
# local operators on H

Matrix = list  # list over input basis of sparse output dicts


def _mat_compose(a: Matrix, b: Matrix) -> Matrix:
    """a o b."""
    out = []
    for col in b:
        acc: dict = {}
        for k, c in col.items():
            axpy(acc, a[k], c)
        out.append(acc)
    return out


def _mat_trace(m: Matrix) -> Q:
    return sum((col.get(i, ZERO) for i, col in enumerate(m)), ZERO)


def _mat_apply(m: Matrix, vec: Mapping[int, Q]) -> dict:
    out: dict = {}
    for k, c in vec.items():
        axpy(out, m[k], c)
    return out


class TriangleOperators:
    """L_+, L_-, T_+, T_- as n x n matrices."""

    def __init__(self, h: HopfAlgebra, hd: HopfAlgebra):
        self.h, self.hd, self.n = h, hd, h.dim

    def L(self, sign: int, x: Mapping[int, Q]) -> Matrix:
        if sign == 1:
            return [self.h.mul(x, {k: ONE}) for k in range(self.n)]
        return [self.h.mul({k: ONE}, x) for k in range(self.n)]

    def T(self, sign: int, alpha: Mapping[int, Q]) -> Matrix:
        out = []
        for k in range(self.n):
            acc: dict = {}
            for (k1, k2), c in self.h.comult[k].items():
                if sign == 1:
                    w = alpha.get(k2)
                    if w:
                        add_term(acc, k1, c * w)
                else:
                    w = alpha.get(k1)
                    if w:
                        add_term(acc, k2, c * w)
            out.append(acc)
        return out


@dataclass
class TensorOperator:
    """Sum of tensor products of local matrices: list of (coef, {edge: matrix})."""

    terms: list
    n_edges: int

    def apply(self, state: Mapping[tuple, Q]) -> dict:
        out: dict = {}
        for c, mats in self.terms:
            cur = dict(state)
            for p, m in mats.items():
                nxt: dict = {}
                for key, z in cur.items():
                    for k, w in m[key[p]].items():
                        nk = key[:p] + (k,) + key[p + 1:]
                        add_term(nxt, nk, z * w)
                cur = nxt
            axpy(out, cur, c)
        return out

    def compose(self, other: "TensorOperator") -> "TensorOperator":
        terms = []
        for ca, ma in self.terms:
            for cb, mb in other.terms:
                mats = dict(mb)
                for p, m in ma.items():
                    mats[p] = _mat_compose(m, mats[p]) if p in mats else m
                terms.append((ca * cb, mats))
        return TensorOperator(terms, self.n_edges)

    def matrix(self, n: int) -> dict:
        """Columns keyed by basis state over all n^E states."""
        return {s: self.apply({s: ONE}) for s in itertools.product(range(n), repeat=self.n_edges)}


class ChainOperator:
    """x -> F_1^{x_(1)} o ... o F_n^{x_(n)} for a coalgebra element x.

    ``factors[i] = (edge, fn)`` where ``fn(basis index)`` is the local matrix.
    Application splits the coalgebra element one factor at a time, so the
    n-fold coproduct is never expanded.
    """

    def __init__(self, factors: list, coalg: HopfAlgebra, vec: Mapping[int, Q], n: int, n_edges: int):
        self.factors = factors
        self.coalg = coalg
        self.vec = vec
        self.n = n
        self.n_edges = n_edges
        self._local: dict = {}

    def _mat(self, i: int, x: int) -> Matrix:
        key = (i, x)
        if key not in self._local:
            self._local[key] = self.factors[i][1](x)
        return self._local[key]

    def apply(self, state: Mapping[tuple, Q]) -> dict:
        cur: dict = {}
        for s, c in state.items():
            for x, z in self.vec.items():
                add_term(cur, (s, x), c * z)
        for i in range(len(self.factors) - 1, -1, -1):
            e = self.factors[i][0]
            nxt: dict = {}
            for (s, x), c in cur.items():
                splits = self.coalg.comult[x].items() if i else (((None, x), ONE),)
                for (x1, x2), z in splits:
                    for k, w in self._mat(i, x2)[s[e]].items():
                        add_term(nxt, (s[:e] + (k,) + s[e + 1:], x1), c * z * w)
            cur = nxt
        out: dict = {}
        for (s, _), c in cur.items():
            add_term(out, s, c)
        return out

    def matrix(self, n: int | None = None) -> dict:
        n = n or self.n
        return {s: self.apply({s: ONE}) for s in itertools.product(range(n), repeat=self.n_edges)}

    def terms(self) -> list:
        """Expansion as a sum of tensor products of local matrices."""
        out = []
        for parts, c in self.coalg.comul_n(self.vec, len(self.factors)).items():
            mats: dict = {}
            for i, x in enumerate(parts):
                e = self.factors[i][0]
                m = self._mat(i, x)
                mats[e] = _mat_compose(mats[e], m) if e in mats else m
            out.append((c, mats))
        return out

    def to_tensor(self) -> TensorOperator:
        return TensorOperator(self.terms(), self.n_edges)


class ProductOperator:
    """Composition op_1 o op_2 o ... of operators with an ``apply`` method."""

    def __init__(self, ops: Sequence):
        self.ops = list(ops)

    def apply(self, state: Mapping[tuple, Q]) -> dict:
        cur = dict(state)
        for op in reversed(self.ops):
            cur = op.apply(cur)
            if not cur:
                break
        return cur

    def matrix(self, n: int) -> dict:
        m = self.ops[0].n_edges
        return {s: self.apply({s: ONE}) for s in itertools.product(range(n), repeat=m)}


def matrices_equal(a: Mapping, b: Mapping) -> bool:
    keys = set(a) | set(b)
    return all(a.get(k, {}) == b.get(k, {}) for k in keys)


def matrix_compose(a: Mapping, b: Mapping) -> dict:
    out = {}
    for s, col in b.items():
        acc: dict = {}
        for k, c in col.items():
            axpy(acc, a[k], c)
        out[s] = acc
    return out


def matrix_rank(m: Mapping) -> int:
    ech = SparseEchelon()
    for col in m.values():
        ech.insert(col)
    return len(ech)


# --------------------------------------------------------------------------
# the model

class KitaevModel:
    def __init__(self, graph: CiliatedRibbonGraph, h: HopfAlgebra, regular: bool = True):
        if regular:
            require_regular(graph)
        self.graph = graph
        self.regular = regular
        self.h = h
        self.pair = paired(h)
        self.hdual = self.pair.hd
        self.n = h.dim
        self.d = self.n * self.n
        self.E = graph.n_edges
        self.dd = double_dual(self.pair)
        self.hdouble = heisenberg_double(self.pair)
        self.double = drinfeld_double(self.pair)
        self.space = EdgeTensorSpace(self.d, self.E, self.dd.unit,
                                     {"dd": self.dd.mult, "hd": self.hdouble.mult})
        self.ell = haar_integral(h)
        self.eta = haar_integral(self.hdual)
        self.tri = TriangleOperators(h, self.hdual)
        self.thick = thicken(graph, require_regular=False)
        self._letter_local = self._build_letter_maps()
        self._hol_cache: dict = {}
        self._rho_local = self._build_rho()
        self._tau_cache: dict = {}

    # --- D(H)* helpers on the flat carrier
    def one_dual(self, delta: Mapping[int, Q]) -> dict:
        """1 (x) delta."""
        n, u = self.n, self.h.unit
        return {a * n + b: x * y for a, x in u.items() for b, y in delta.items()}

    def y_one(self, y: Mapping[int, Q]) -> dict:
        """y (x) 1."""
        n, cu = self.n, self.h.counit
        return {a * n + b: x * cu[b] for a, x in y.items() for b in range(n) if cu[b]}

    def pure_local(self, y: Mapping[int, Q], gamma: Mapping[int, Q]) -> dict:
        n = self.n
        return {a * n + b: x * z for a, x in y.items() for b, z in gamma.items()}

    # --- letters
    def _build_letter_maps(self) -> dict:
        n, h, hd = self.n, self.h, self.hdual
        unit_h, counit_h = h.unit, h.counit
        base = {R: [], L: [], RB: [], LB: []}
        for p in range(self.d):
            a, b = divmod(p, n)
            eps_y = counit_h[a]
            eps_g = unit_h.get(b, ZERO)
            # r(e): eps(y) (1 (x) gamma)
            base[R].append({u * n + b: eps_y * z for u, z in unit_h.items()} if eps_y else {})
            # r(ebar): eps(gamma) (y (x) 1)
            base[RB].append({a * n + k: eps_g * counit_h[k] for k in range(n) if counit_h[k]} if eps_g else {})
            # l(e): eps(y) sum x_i S(x_j) (x) a^j gamma a^i
            acc: dict = {}
            if eps_y:
                for i, j in itertools.product(range(n), repeat=2):
                    left = h.mul({i: ONE}, h.S({j: ONE}))
                    right = hd.mul(hd.mul({j: ONE}, {b: ONE}), {i: ONE})
                    for k1, z1 in left.items():
                        for k2, z2 in right.items():
                            add_term(acc, k1 * n + k2, eps_y * z1 * z2)
            base[L].append(acc)
            # l(ebar): eps(gamma) sum x_i y S(x_j) (x) a^j a^i
            acc = {}
            if eps_g:
                for i, j in itertools.product(range(n), repeat=2):
                    left = h.mul(h.mul({i: ONE}, {a: ONE}), h.S({j: ONE}))
                    right = hd.mul({j: ONE}, {i: ONE})
                    for k1, z1 in left.items():
                        for k2, z2 in right.items():
                            add_term(acc, k1 * n + k2, eps_g * z1 * z2)
            base[LB].append(acc)
        out = {}
        for kind, cols in base.items():
            out[(kind, 1)] = cols
            out[(kind, -1)] = [self._apply_cols(cols, self.dd.antipode[p]) for p in range(self.d)]
        return out

    @staticmethod
    def _apply_cols(cols, vec):
        out: dict = {}
        for k, c in vec.items():
            axpy(out, cols[k], c)
        return out

    def letter_local(self, letter: tuple[int, int]) -> list:
        t, x = letter
        return self._letter_local[(t % 4, x)]

    def letter_matrix(self, letter: tuple[int, int]) -> list:
        e = letter[0] // 4
        return [self.space.embed(e, col) for col in self.letter_local(letter)]

    # --- holonomy
    def hol_matrix(self, word: Sequence[tuple[int, int]], mode: str = "dd", check: bool = True) -> list:
        """Hol_word on every basis vector of D(H)*, as a list of elements."""
        word = tuple(word)
        key = (word, mode)
        if key in self._hol_cache:
            return self._hol_cache[key]
        if check and word and not is_composable(self.thick.graph, word):
            raise NotComposable(f"word {word} is not composable in the thickened graph")
        if not word:
            res = [scale(self.space.unit(), self.dd.counit[p]) for p in range(self.d)]
        else:
            res = self.letter_matrix(word[0])
            for letter in word[1:]:
                e = letter[0] // 4
                cols = self.letter_local(letter)
                new = []
                for p in range(self.d):
                    acc: dict = {}
                    for (p1, p2), c in self.dd.comult[p].items():
                        if not res[p1] or not cols[p2]:
                            continue
                        axpy(acc, self.space.mul(res[p1], self.space.embed(e, cols[p2]), mode), c)
                    new.append(acc)
                res = new
        self._hol_cache[key] = res
        return res

    def holonomy(self, word: Sequence[tuple[int, int]], x: Mapping[int, Q], mode: str = "dd") -> dict:
        mat = self.hol_matrix(word, mode)
        out: dict = {}
        for p, c in x.items():
            axpy(out, mat[p], c)
        return out

    def ribbon_compare(self, word: Sequence[tuple[int, int]]) -> dict:
        """Evaluate a ribbon path holonomy with both products and compare."""
        word = tuple(word)
        if not is_ribbon_path(word):
            raise NotRibbon("path traverses a thickened edge twice or mixes {r,l} with {rbar,lbar}")
        # traversal order is right to left
        pos = {t: i for i, (t, _) in enumerate(word)}
        for e in {t // 4 for t, _ in word}:
            for first, second in ((4 * e + R, 4 * e + L), (4 * e + RB, 4 * e + LB)):
                if first in pos and second in pos and not pos[first] > pos[second]:
                    raise NotRibbon(f"edge {e}: the r-type letter must be traversed before the l-type letter")
        a = self.hol_matrix(word, "dd")
        b = self.hol_matrix(word, "hd")
        bad = [p for p in range(self.d) if not self.space.equal(a[p], b[p])]
        return {"equal": not bad, "mismatch": bad}

    # --- rho
    def _build_rho(self) -> list:
        n, h = self.n, self.h
        out = []
        for p in range(self.d):
            a, b = divmod(p, n)
            cols = []
            for k in range(n):
                acc: dict = {}
                for (k1, k2), c in h.comult[k].items():
                    if k2 == b:
                        axpy(acc, h.mul({a: ONE}, {k1: ONE}), c)
                cols.append(acc)
            out.append(cols)
        return out

    def rho_local(self, p: int | None) -> Matrix:
        if p is None:
            return [{k: ONE} for k in range(self.n)]
        return self._rho_local[p]

    def rho_apply(self, X: Mapping, state: Mapping[tuple, Q]) -> dict:
        out: dict = {}
        for key, c in X.items():
            cur = dict(state)
            for pos, p in enumerate(key):
                if p is None:
                    continue
                m = self._rho_local[p]
                nxt: dict = {}
                for s, z in cur.items():
                    for k, w in m[s[pos]].items():
                        add_term(nxt, s[:pos] + (k,) + s[pos + 1:], z * w)
                cur = nxt
                if not cur:
                    break
            axpy(out, cur, c)
        return out

    def rho_matrix(self, X: Mapping) -> dict:
        return {s: self.rho_apply(X, {s: ONE}) for s in self.states()}

    def states(self):
        return itertools.product(range(self.n), repeat=self.E)

    # --- operators
    def _vertex_factors(self, v: int) -> list:
        out = []
        for e, eps in self.graph.incident(v):
            if eps == 1:
                out.append((e, lambda x: self.tri.L(1, {x: ONE})))
            else:
                out.append((e, lambda x: self.tri.L(-1, self.h.S({x: ONE}))))
        return out

    def _face_factors(self, face) -> list:
        if isinstance(face, int):
            face = ciliated_face(self.graph, face)
        out = []
        for e, eps in face.word:
            if eps == 1:
                out.append((e, lambda x: self.tri.T(1, {x: ONE})))
            else:
                out.append((e, lambda x: self.tri.T(-1, self.hdual.S({x: ONE}))))
        return out

    def vertex_operator(self, v: int, hvec: Mapping[int, Q]) -> "ChainOperator":
        """A_v^h = L^{S^tau(h_(1))}_{e_1} o ... o L^{S^tau(h_(n))}_{e_n}."""
        return ChainOperator(self._vertex_factors(v), self.h, dict(hvec), self.n, self.E)

    def face_operator(self, face, alpha: Mapping[int, Q]) -> "ChainOperator":
        """B_f^alpha = T^{S^tau(alpha_(1))}_{e_1} o ... o T^{S^tau(alpha_(n))}_{e_n}."""
        return ChainOperator(self._face_factors(face), self.hdual, dict(alpha), self.n, self.E)

    def triangle_operator(self, kind: str, sign: int, e: int, x) -> TensorOperator:
        """L_{e,sign}^x (x in H) or T_{e,sign}^x (x in H*) on the extended space."""
        if kind not in ("L", "T") or sign not in (1, -1):
            raise ValueError(f"unknown triangle operator {kind}{sign:+d}")
        space = getattr(x, "space", None)
        if space is not None:
            expected = self.h if kind == "L" else self.hdual
            if space is not expected and space.label != expected.label:
                raise TypeError(f"{kind} operators take elements of {expected.label}, got {space.label}")
            x = x.coords
        if any(not 0 <= k < self.n for k in x):
            raise ValueError("element index out of range")
        m = self.tri.L(sign, x) if kind == "L" else self.tri.T(sign, x)
        return TensorOperator([(ONE, {e: m})], self.E)

    def hamiltonian_operator(self) -> "ProductOperator":
        ops = [self.vertex_operator(v, self.ell) for v in range(self.graph.n_vertices)]
        ops += [self.face_operator(v, self.eta) for v in range(self.graph.n_vertices)]
        return ProductOperator(ops)

    # --- loops and the site representation
    def p_v(self, v: int) -> tuple:
        return vertex_loop(self.graph, v)

    def p_f(self, v: int) -> tuple:
        return face_loop(self.graph, v)

    def tau(self, v: int, x: Mapping[int, Q]) -> dict:
        """tau_v on an element of D(H) (flat alpha^a (x) x_b)."""
        out: dict = {}
        for p, c in x.items():
            axpy(out, self.tau_basis(v, p), c)
        return out

    def tau_basis(self, v: int, p: int) -> dict:
        key = (v, p)
        if key not in self._tau_cache:
            a, b = divmod(p, self.n)
            left = self.holonomy(self.p_f(v), self.one_dual({a: ONE}))
            right = self.holonomy(self.p_v(v), self.y_one({b: ONE}))
            self._tau_cache[key] = self.space.mul(left, right, "hd")
        return self._tau_cache[key]

    def haar_double(self) -> dict:
        """eta (x) ell in D(H)."""
        n = self.n
        return {a * n + b: x * y for a, x in self.eta.items() for b, y in self.ell.items()}

    def _action_terms(self, v: int, k: Mapping[int, Q]) -> list:
        terms = []
        for (k1, k2), c in self.double.comul(k).items():
            left = self.tau(v, self.double.S({k2: ONE}))
            right = self.tau_basis(v, k1)
            if left and right:
                terms.append((c, left, right))
        return terms

    def gauge_act(self, X: Mapping, v: int, k: Mapping[int, Q]) -> dict:
        """X <| k_v = tau_v(S(k_(2))) . X . tau_v(k_(1))."""
        out: dict = {}
        for c, left, right in self._action_terms(v, k):
            axpy(out, self.space.mul(self.space.mul(left, X, "hd"), right, "hd"), c)
        return out

    def gauge_act_tensor(self, X: Mapping, g: Mapping[tuple, Q]) -> dict:
        """Action of an element of D(H)^{(x) V} given as tuple-keyed dict."""
        out: dict = {}
        for key, c in g.items():
            cur = X
            for v, p in enumerate(key):
                cur = self.gauge_act(cur, v, {p: ONE})
            axpy(out, cur, c)
        return out

    def q_inv(self, X: Mapping) -> dict:
        k = self.haar_double()
        cur = dict(X)
        for v in range(self.graph.n_vertices):
            cur = self.gauge_act(cur, v, k)
        return cur

    def G(self, v: int) -> dict:
        return self.tau(v, self.haar_double())

    def G_all(self) -> dict:
        out = self.space.unit()
        for v in range(self.graph.n_vertices):
            out = self.space.mul(out, self.G(v), "hd")
        return out

    def q_v(self, X: Mapping, v: int) -> dict:
        return self.space.mul(X, self.G(v), "hd")

    def q_flat(self, X: Mapping) -> dict:
        return self.space.mul(X, self.G_all(), "hd")

    def hamiltonian_element(self) -> dict:
        return self.q_flat(self.space.unit())

    # --- protected space
    def dense_dimension(self, cap: int = 5000) -> int:
        """Rank of rho(Q_flat(1)) as an n^E x n^E matrix."""
        if self.d ** self.E > cap:
            raise ResourceLimit(
                f"dense oracle needs the {self.d ** self.E}-dimensional operator algebra, above the cap {cap}; "
                "use the sparse trace instead")
        return matrix_rank(self.rho_matrix(self.hamiltonian_element()))

    def protected_dimension(self) -> int:
        return sparse_trace(self)

    def protected_dimension_bruteforce(self, cap: int = 5000) -> int:
        """Sum of diagonal entries of H_K applied to every basis state."""
        if self.n ** self.E > cap:
            raise ResourceLimit(f"{self.n ** self.E} states exceed the cap {cap}")
        op = self.hamiltonian_operator()
        total = ZERO
        for s in self.states():
            total += op.apply({s: ONE}).get(s, ZERO)
        return _as_int(total)


def _as_int(x: Q) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"trace {x} of an idempotent is not an integer")
    return int(x.numerator)


# --------------------------------------------------------------------------
# sparse trace

def sparse_trace(model: KitaevModel) -> int:
    """tr(prod_v A_v^ell prod_f B_f^eta) without materializing any global operator.

    Each vertex and face operator is a sum of tensor products of local
    matrices.  Expanding all sums, the trace factorises over edges; a depth
    first search assigns one term per operator and prunes as soon as a fully
    determined edge has zero trace.
    """
    g = model.graph
    ops = [model.vertex_operator(v, model.ell) for v in range(g.n_vertices)]
    ops += [model.face_operator(v, model.eta) for v in range(g.n_vertices)]
    # drop zero terms and record which operators touch each edge
    terms = [[(c, m) for c, m in op.terms() if c] for op in ops]
    touching: list[list[int]] = [[] for _ in range(g.n_edges)]
    for i, op in enumerate(terms):
        edges = set()
        for _, m in op:
            edges |= set(m)
        for e in edges:
            touching[e].append(i)
    # search order: greedy, always pick the operator closing most edges
    order: list[int] = []
    assigned: set = set()
    remaining = set(range(len(ops)))
    while remaining:
        best = max(sorted(remaining), key=lambda i: (
            sum(1 for e in range(g.n_edges) if i in touching[e] and all(j in assigned or j == i for j in touching[e])),
            sum(1 for e in range(g.n_edges) if i in touching[e] and any(j in assigned for j in touching[e]))))
        order.append(best)
        assigned.add(best)
        remaining.discard(best)
    closes: list[list[int]] = [[] for _ in order]
    seen: set = set()
    for depth, i in enumerate(order):
        seen.add(i)
        for e in range(g.n_edges):
            if touching[e] and i in touching[e] and all(j in seen for j in touching[e]):
                closes[depth].append(e)
    identity = [{k: ONE} for k in range(model.n)]
    cache: dict = {}
    choice = [0] * len(ops)

    def edge_trace(e: int) -> Q:
        key = (e,) + tuple(choice[i] for i in touching[e])
        val = cache.get(key)
        if val is None:
            m = identity
            # composition order follows the operator list order
            for i in sorted(touching[e]):
                mats = terms[i][choice[i]][1]
                if e in mats:
                    m = _mat_compose(m, mats[e])
            val = cache[key] = _mat_trace(m)
        return val

    untouched = sum(1 for e in range(g.n_edges) if not touching[e])

    def dfs(depth: int, acc: Q) -> Q:
        if depth == len(order):
            return acc
        i = order[depth]
        total = ZERO
        for t, (c, _) in enumerate(terms[i]):
            choice[i] = t
            val = acc * c
            for e in closes[depth]:
                tr = edge_trace(e)
                if not tr:
                    val = ZERO
                    break
                val *= tr
            if val:
                total += dfs(depth + 1, val)
        return total

    result = dfs(0, ONE) * (model.n ** untouched)
    return _as_int(result)
