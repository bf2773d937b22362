"""Hopf algebra gauge theory with gauge group K = D(H) on a ciliated ribbon graph.

Functions live in K*^{(x) E} (carrier (H (x) H*)^{(x) E}, flat local index
``a*n + b`` for ``x_a (x) alpha^b``).  The K* basis index ``p`` is dual to the
K basis index ``p``, so pairings are Kronecker deltas.

The product of the graph algebra is defined through the embedding
``G*: K*^{(x) E} -> (x)_v A*_v`` into the tensor product of vertex algebras.
A second engine multiplies normal-ordered monomials directly with swap and
merge tables derived from the embedding; it is used when the graph admits a
global edge order and is cross-checked against the embedding route.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .constructions import (
    PairedHopfData,
    char_projector,
    double_dual,
    drinfeld_double,
    haar_integral,
    paired,
)
from .edgetensor import EdgeTensorSpace
from .hopf import HopfAlgebra
from .linalg import ONE, ZERO, Q, SparseEchelon, add_term, axpy, scale
from .ribbon import (
    CiliatedRibbonGraph,
    NotRegular,
    check_regular,
    ciliated_face,
    edge_order,
    is_composable,
)


class OffImage(ValueError):
    """An element handed to the retraction is not in the image of G*."""


# --------------------------------------------------------------------------
# vertex algebras

@dataclass(frozen=True)
class VertexAlgebraSpec:
    """Valence, sigma and tau flags of a ciliated vertex (slots in cilium order)."""

    n: int
    sigma: tuple
    tau: tuple

    def __post_init__(self):
        if len(self.sigma) != self.n or len(self.tau) != self.n:
            raise ValueError("sigma and tau need one entry per slot")
        if any(s not in (0, 1) for s in self.sigma + self.tau):
            raise ValueError("sigma and tau entries must be 0 or 1")


class RMatrixTables:
    """Swap and same-slot tables for the braided product of K*."""

    def __init__(self, K: HopfAlgebra, Kd: HopfAlgebra):
        if K.r_matrix is None:
            raise ValueError(f"{K.label} carries no R-matrix")
        self.K, self.Kd = K, Kd
        R = K.r_matrix
        d = Kd.dim
        self.swap: dict = {}
        self.merge0: dict = {}
        for a in range(d):
            for b in range(d):
                sw: dict = {}
                m0: dict = {}
                for (a1, a2), ca in Kd.comult[a].items():
                    for (b1, b2), cb in Kd.comult[b].items():
                        r = R.get((b1, a1))
                        if not r:
                            continue
                        c = ca * cb * r
                        # (alpha)_k (beta)_j = <beta_(1) (x) alpha_(1), R> (beta_(2))_j (alpha_(2))_k
                        add_term(sw, (b2, a2), c)
                        # (alpha)_i (beta)_i = <beta_(1) (x) alpha_(1), R> (beta_(2) alpha_(2))_i
                        axpy(m0, Kd.mult.get((b2, a2), {}), c)
                self.swap[(a, b)] = tuple(sw.items())
                self.merge0[(a, b)] = m0


class VertexAlgebra:
    """The K-right module algebra A*_v on K*^{(x) n}.

    Elements are dicts keyed by n-tuples (entries: K* basis index or None for
    the unit).  A pure tensor equals the ordered product of its slot
    generators, slot 1 leftmost.
    """

    def __init__(self, spec: VertexAlgebraSpec, K: HopfAlgebra, Kd: HopfAlgebra,
                 tables: RMatrixTables | None = None):
        self.spec = spec
        self.K, self.Kd = K, Kd
        self.tables = tables or RMatrixTables(K, Kd)
        self._cache: dict = {}

    # --- the untwisted braided product
    def _right_gen(self, X: Mapping, j: int, b: int) -> dict:
        """X . (beta^b)_j in the untwisted algebra."""
        n = self.spec.n
        sw = self.tables.swap
        out: dict = {}
        for key, c in X.items():
            states = [(list(key), b, c)]
            for k in range(n - 1, j, -1):
                if key[k] is None:
                    continue
                nxt = []
                for lst, bb, cc in states:
                    for (b2, a2), z in sw[(lst[k], bb)]:
                        nl = list(lst)
                        nl[k] = a2
                        nxt.append((nl, b2, cc * z))
                states = nxt
            for lst, bb, cc in states:
                a = lst[j]
                if a is None:
                    lst[j] = bb
                    add_term(out, tuple(lst), cc)
                    continue
                prod = self.Kd.mult.get((a, bb), {}) if self.spec.sigma[j] else self.tables.merge0[(a, bb)]
                for k, z in prod.items():
                    nl = list(lst)
                    nl[j] = k
                    add_term(out, tuple(nl), cc * z)
        return out

    def flip_multiply(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for ky, cy in y.items():
            cur = dict(x)
            for j, b in enumerate(ky):
                if b is not None:
                    cur = self._right_gen(cur, j, b)
                    if not cur:
                        break
            axpy(out, cur, cy)
        return out

    # --- orientation twist
    def twist(self, x: Mapping) -> dict:
        """Apply S on the slots with tau = 1 (an involution)."""
        out = dict(x)
        for i, t in enumerate(self.spec.tau):
            if t:
                out = _apply_slot(out, i, self.Kd.antipode)
        return out

    def multiply(self, x: Mapping, y: Mapping) -> dict:
        return self.twist(self.flip_multiply(self.twist(x), self.twist(y)))

    def multiply_keys(self, kx: tuple, ky: tuple) -> dict:
        key = (kx, ky)
        res = self._cache.get(key)
        if res is None:
            res = self._cache[key] = self.multiply({kx: ONE}, {ky: ONE})
        return res

    # --- action
    def flip_act(self, x: Mapping, h: Mapping[int, Q]) -> dict:
        """(a^1 (x) ... (x) a^n) <| h = <a^1_(1) ... a^n_(1), h> a^1_(2) (x) ... (x) a^n_(2)."""
        n = self.spec.n
        Kd, K = self.Kd, self.K
        out: dict = {}
        parts = K.comul_n(h, n) if n > 1 else {(k,): c for k, c in h.items()}
        for key, c in x.items():
            for hp, ch in parts.items():
                terms = [((), c * ch)]
                for i, a in enumerate(key):
                    nxt = []
                    if a is None:
                        w = K.counit[hp[i]]
                        if w:
                            nxt = [(t + (None,), z * w) for t, z in terms]
                    else:
                        for (a1, a2), z2 in Kd.comult[a].items():
                            if a1 == hp[i]:
                                nxt.extend((t + (a2,), z * z2) for t, z in terms)
                    terms = nxt
                    if not terms:
                        break
                for t, z in terms:
                    add_term(out, t, z)
        return out

    def act(self, x: Mapping, h: Mapping[int, Q]) -> dict:
        return self.twist(self.flip_act(self.twist(x), h))


def vertex_multiply(a: Mapping, b: Mapping, spec: VertexAlgebraSpec, K: HopfAlgebra, Kd: HopfAlgebra) -> dict:
    return VertexAlgebra(spec, K, Kd).multiply(a, b)


def _apply_slot(x: Mapping, pos: int, cols) -> dict:
    out: dict = {}
    for key, c in x.items():
        a = key[pos]
        if a is None:
            add_term(out, key, c)
            continue
        for k, z in cols[a].items():
            add_term(out, key[:pos] + (k,) + key[pos + 1:], c * z)
    return out


# --------------------------------------------------------------------------
# graph algebra

class GraphAlgebra:
    """A*_Gamma for K = D(H) with the same R-matrix at every vertex.

    ``sigma_end`` selects which edge end carries sigma = 0: ``"target"``
    (default) or ``"source"``.
    """

    def __init__(self, graph: CiliatedRibbonGraph, h: HopfAlgebra | PairedHopfData,
                 sigma_end: str = "target", order: Sequence[int] | None = None,
                 require_regular: bool = True):
        if require_regular:
            rep = check_regular(graph)
            if not rep.regular:
                first = rep.failures[0]
                raise NotRegular(f"graph '{graph.label}' is not regular: condition {first['condition']} "
                                 f"({first['kind']}) fails")
        self.graph = graph
        self.pair = h if isinstance(h, PairedHopfData) else paired(h)
        self.h = self.pair.h
        self.K = drinfeld_double(self.pair)
        self.Kd = double_dual(self.pair)
        self.d = self.Kd.dim
        self.E = graph.n_edges
        self.V = graph.n_vertices
        self.space = EdgeTensorSpace(self.d, self.E, self.Kd.unit, {"tensor": self.Kd.mult})
        self.tables = RMatrixTables(self.K, self.Kd)
        if sigma_end not in ("target", "source"):
            raise ValueError("sigma_end must be 'target' or 'source'")
        self.sigma_end = sigma_end
        self.offset = []
        off = 0
        for v in range(self.V):
            self.offset.append(off)
            off += graph.valence(v)
        self.n_slots = off
        self.vertex_algebras = []
        for v in range(self.V):
            sig, tau = [], []
            for e, end in graph.rotation[v]:
                incoming = end == 1
                tau.append(0 if incoming else 1)
                zero_here = incoming if sigma_end == "target" else not incoming
                sig.append(0 if zero_here else 1)
            spec = VertexAlgebraSpec(graph.valence(v), tuple(sig), tuple(tau))
            self.vertex_algebras.append(VertexAlgebra(spec, self.K, self.Kd, self.tables))
        self.s_slot = [self.offset[v] + s for (v, s), _ in graph.edges]
        self.t_slot = [self.offset[w] + t for _, (w, t) in graph.edges]
        self.order = list(order) if order is not None else edge_order(graph)
        self._swap_tables: dict = {}
        self._merge_tables: dict = {}
        self.ell = haar_integral(self.K)
        self.eta = haar_integral(self.Kd)

    # --- units and generators
    def unit(self) -> dict:
        return self.space.unit()

    def generator(self, e: int, alpha: Mapping[int, Q]) -> dict:
        return self.space.embed(e, alpha)

    # --- the embedding into vertex algebras
    def g_star(self, x: Mapping) -> dict:
        out: dict = {}
        for key, c in x.items():
            terms = [([None] * self.n_slots, c)]
            for e, a in enumerate(key):
                if a is None:
                    continue
                nxt = []
                for (a1, a2), z in self.Kd.comult[a].items():
                    for lst, cc in terms:
                        nl = list(lst)
                        nl[self.s_slot[e]] = a2
                        nl[self.t_slot[e]] = a1
                        nxt.append((nl, cc * z))
                terms = nxt
            for lst, cc in terms:
                add_term(out, tuple(lst), cc)
        return out

    def retract(self, y: Mapping, check: bool = False) -> dict:
        out: dict = {}
        cu = self.Kd.counit
        for key, c in y.items():
            w = c
            for e in range(self.E):
                s = key[self.s_slot[e]]
                if s is not None:
                    w = w * cu[s]
                    if not w:
                        break
            if w:
                add_term(out, tuple(key[self.t_slot[e]] for e in range(self.E)), w)
        if check:
            back = self.g_star(out)
            diff = dict(back)
            axpy(diff, y, -ONE)
            if not self._slot_space().is_zero(diff):
                raise OffImage("element is not in the image of G*")
        return out

    def _slot_space(self) -> EdgeTensorSpace:
        if not hasattr(self, "_slots"):
            self._slots = EdgeTensorSpace(self.d, self.n_slots, self.Kd.unit, {})
        return self._slots

    def in_image(self, y: Mapping) -> bool:
        try:
            self.retract(y, check=True)
        except OffImage:
            return False
        return True

    def vertex_product(self, x: Mapping, y: Mapping) -> dict:
        """Product in (x)_v A*_v (keys over all slots)."""
        out: dict = {}
        segs = [(self.offset[v], self.offset[v] + self.graph.valence(v)) for v in range(self.V)]
        for kx, cx in x.items():
            for ky, cy in y.items():
                parts = [((), cx * cy)]
                for v, (lo, hi) in enumerate(segs):
                    sx, sy = kx[lo:hi], ky[lo:hi]
                    if all(b is None for b in sy):
                        prod = {sx: ONE}
                    elif all(a is None for a in sx):
                        prod = {sy: ONE}
                    else:
                        prod = self.vertex_algebras[v].multiply_keys(sx, sy)
                    parts = [(t + seg, z * w) for t, z in parts for seg, w in prod.items()]
                    if not parts:
                        break
                for t, z in parts:
                    add_term(out, t, z)
        return out

    def vertex_act(self, y: Mapping, v: int, h: Mapping[int, Q]) -> dict:
        lo, hi = self.offset[v], self.offset[v] + self.graph.valence(v)
        out: dict = {}
        for key, c in y.items():
            for seg, z in self.vertex_algebras[v].act({key[lo:hi]: ONE}, h).items():
                add_term(out, key[:lo] + seg + key[hi:], c * z)
        return out

    def multiply_expanded(self, x: Mapping, y: Mapping) -> dict:
        """retract(G*(x) G*(y)) with both embeddings fully expanded."""
        return self.retract(self.vertex_product(self.g_star(x), self.g_star(y)))

    def multiply_gstar(self, x: Mapping, y: Mapping) -> dict:
        """retract(G*(x) G*(y)) contracted vertex by vertex."""
        out: dict = {}
        for kx, cx in x.items():
            for ky, cy in y.items():
                axpy(out, self._gstar_keys(kx, ky), cx * cy)
        return out

    def _gstar_keys(self, kx: tuple, ky: tuple) -> dict:
        g = self.graph
        cu = self.Kd.counit
        comult = self.Kd.comult
        # state: (pending pieces per edge, output key) -> coefficient
        states = {((None,) * self.E, (None,) * self.E): ONE}
        for v in range(self.V):
            slots = g.rotation[v]
            nxt: dict = {}
            for (pend, outk), c in states.items():
                # choose pieces for every slot at v
                partial = [([], [], list(pend), c)]
                for e, end in slots:
                    new = []
                    for sx, sy, pd, cc in partial:
                        if pd[e] is not None:
                            px, py = pd[e][end]
                            npd = list(pd)
                            npd[e] = ()
                            new.append((sx + [px], sy + [py], npd, cc))
                            continue
                        xs = comult[kx[e]].items() if kx[e] is not None else [((None, None), ONE)]
                        ys = comult[ky[e]].items() if ky[e] is not None else [((None, None), ONE)]
                        for (a1, a2), za in xs:
                            for (b1, b2), zb in ys:
                                # first piece sits at the target end, second at the start
                                pieces = ((a2, b2), (a1, b1))
                                npd = list(pd)
                                npd[e] = pieces
                                new.append((sx + [pieces[end][0]], sy + [pieces[end][1]], npd, cc * za * zb))
                    partial = new
                for sx, sy, pd, cc in partial:
                    sx, sy = tuple(sx), tuple(sy)
                    if all(b is None for b in sy):
                        prod = {sx: ONE}
                    elif all(a is None for a in sx):
                        prod = {sy: ONE}
                    else:
                        prod = self.vertex_algebras[v].multiply_keys(sx, sy)
                    for seg, z in prod.items():
                        w = cc * z
                        ok = list(outk)
                        for (e, end), p in zip(slots, seg):
                            if end == 0:
                                if p is not None:
                                    w = w * cu[p]
                            else:
                                ok[e] = p
                        if w:
                            add_term(nxt, (tuple(pd), tuple(ok)), w)
            states = nxt
        out: dict = {}
        for (_, outk), c in states.items():
            add_term(out, outk, c)
        return out

    # --- normal-ordering engine
    def _adjacent(self, e: int, f: int) -> bool:
        a = {self.graph.source(e), self.graph.target(e)}
        return bool(a & {self.graph.source(f), self.graph.target(f)})

    def _swap(self, g: int, f: int) -> dict:
        """(alpha)_g (beta)_f = sum c (beta')_f (alpha')_g for f before g."""
        key = (g, f)
        if key not in self._swap_tables:
            tab = {}
            for a in range(self.d):
                for b in range(self.d):
                    res = self.multiply_gstar(self.generator(g, {a: ONE}), self.generator(f, {b: ONE}))
                    res = self.space.expand_positions(res, (f, g))
                    tab[(a, b)] = tuple(((k[f], k[g]), c) for k, c in res.items())
            self._swap_tables[key] = tab
        return self._swap_tables[key]

    def _merge(self, e: int) -> dict:
        if e not in self._merge_tables:
            tab = {}
            for a in range(self.d):
                for b in range(self.d):
                    res = self.multiply_gstar(self.generator(e, {a: ONE}), self.generator(e, {b: ONE}))
                    res = self.space.expand_positions(res, (e,))
                    tab[(a, b)] = tuple((k[e], c) for k, c in res.items())
            self._merge_tables[e] = tab
        return self._merge_tables[e]

    def _right_gen(self, x: Mapping, f: int, b: int) -> dict:
        pos = {e: i for i, e in enumerate(self.order)}
        later = [g for g in reversed(self.order) if pos[g] > pos[f] and self._adjacent(g, f)]
        out: dict = {}
        for key, c in x.items():
            states = [(list(key), b, c)]
            for g in later:
                if key[g] is None:
                    continue
                tab = self._swap(g, f)
                nxt = []
                for lst, bb, cc in states:
                    for (b2, a2), z in tab[(lst[g], bb)]:
                        nl = list(lst)
                        nl[g] = a2
                        nxt.append((nl, b2, cc * z))
                states = nxt
            for lst, bb, cc in states:
                a = lst[f]
                if a is None:
                    lst[f] = bb
                    add_term(out, tuple(lst), cc)
                    continue
                for k, z in self._merge(f)[(a, bb)]:
                    nl = list(lst)
                    nl[f] = k
                    add_term(out, tuple(nl), cc * z)
        return out

    def multiply_ordered(self, x: Mapping, y: Mapping) -> dict:
        if self.order is None:
            raise ValueError("graph has no global edge order")
        out: dict = {}
        for ky, cy in y.items():
            cur = dict(x)
            for f in self.order:
                if ky[f] is not None:
                    cur = self._right_gen(cur, f, ky[f])
                    if not cur:
                        break
            axpy(out, cur, cy)
        return out

    def multiply(self, x: Mapping, y: Mapping) -> dict:
        if self.order is not None:
            return self.multiply_ordered(x, y)
        return self.multiply_gstar(x, y)

    def multiply_many(self, factors: Sequence[Mapping]) -> dict:
        out = self.unit()
        for f in factors:
            out = self.multiply(out, f)
        return out

    # --- gauge action
    def act(self, x: Mapping, v: int, h: Mapping[int, Q]) -> dict:
        """x <| (h)_v on pure tensors: h is split over the slots at v in cilium order."""
        g = self.graph
        Kd, K = self.Kd, self.K
        slots = g.rotation[v]
        n = len(slots)
        parts = K.comul_n(h, n) if n > 1 else {(k,): c for k, c in h.items()}
        out: dict = {}
        for key, c in x.items():
            for hp, ch in parts.items():
                terms = [(list(key), c * ch)]
                for i, (e, end) in enumerate(slots):
                    a = key[e]
                    nxt = []
                    if a is None:
                        w = K.counit[hp[i]]
                        if w:
                            nxt = [(lst, z * w) for lst, z in terms]
                    elif end == 1:
                        # target end: <alpha_(1), h> alpha_(2)
                        for (a1, a2), z2 in Kd.comult[a].items():
                            if a1 == hp[i]:
                                for lst, z in terms:
                                    nl = list(lst)
                                    nl[e] = a2
                                    nxt.append((nl, z * z2))
                    else:
                        # starting end: <S(alpha_(2)), h> alpha_(1)
                        for (a1, a2), z2 in Kd.comult[a].items():
                            w = Kd.antipode[a2].get(hp[i])
                            if w:
                                for lst, z in terms:
                                    nl = list(lst)
                                    nl[e] = a1
                                    nxt.append((nl, z * z2 * w))
                    terms = nxt
                    if not terms:
                        break
                for lst, z in terms:
                    add_term(out, tuple(lst), z)
        return out

    def act_tensor(self, x: Mapping, g: Mapping[tuple, Q]) -> dict:
        """Action of an element of K^{(x) V} keyed by V-tuples (None: unit)."""
        out: dict = {}
        for key, c in g.items():
            cur = x
            for v, p in enumerate(key):
                if p is not None:
                    cur = self.act(cur, v, {p: ONE})
            axpy(out, cur, c)
        return out

    def act_gstar(self, x: Mapping, v: int, h: Mapping[int, Q]) -> dict:
        """The same action computed through the vertex algebra at v."""
        return self.retract(self.vertex_act(self.g_star(x), v, h))

    def p_inv(self, x: Mapping) -> dict:
        cur = dict(x)
        for v in range(self.V):
            cur = self.act(cur, v, self.ell)
        return cur

    def basis_keys(self):
        return self.space.basis_keys()

    def invariant_basis(self) -> tuple[list[dict], SparseEchelon]:
        ech = SparseEchelon()
        out = []
        for key in self.basis_keys():
            img = self.p_inv({key: ONE})
            if ech.insert(self.space.to_flat(img)):
                out.append(img)
        return out, ech

    # --- holonomy and curvature
    def hol_gamma(self, word: Sequence[tuple[int, int]], alpha: Mapping[int, Q],
                  product: str = "tensor") -> dict:
        """Hol_word(alpha) = Hol_{x_1}(alpha_(1)) * ... * Hol_{x_n}(alpha_(n)).

        ``product="tensor"`` uses the componentwise algebra of K*^{(x) E};
        ``product="graph"`` multiplies in A*_Gamma instead.
        """
        word = tuple(word)
        if word and not is_composable(self.graph, word):
            raise ValueError(f"word {word} is not composable")
        if not word:
            return scale(self.unit(), sum((c * self.Kd.counit[k] for k, c in alpha.items()), ZERO))
        if product not in ("tensor", "graph"):
            raise ValueError(f"unknown product {product}")
        n = len(word)
        parts = self.Kd.comul_n(alpha, n) if n > 1 else {(k,): c for k, c in alpha.items()}
        out: dict = {}
        for ps, c in parts.items():
            gens = [self.generator(e, {p: ONE} if x == 1 else self.Kd.antipode[p]) for (e, x), p in zip(word, ps)]
            if product == "graph":
                term = self.multiply_many(gens)
            else:
                term = self.space.mul_many(gens, "tensor")
            axpy(out, term, c)
        return out

    def face_word(self, v: int) -> tuple:
        return ciliated_face(self.graph, v).word

    def curvature_element(self, v: int, product: str = "tensor") -> dict:
        key = (v, product)
        cache = self.__dict__.setdefault("_curv", {})
        if key not in cache:
            cache[key] = self.hol_gamma(self.face_word(v), self.eta, product)
        return cache[key]

    def p_face(self, x: Mapping, v: int, product: str = "tensor") -> dict:
        return self.multiply(self.curvature_element(v, product), x)

    def p_flat(self, x: Mapping, product: str = "tensor") -> dict:
        cur = dict(x)
        for v in range(self.V):
            cur = self.p_face(cur, v, product)
        return cur

    def moduli_basis(self, invariant: list[dict] | None = None) -> tuple[list[dict], SparseEchelon]:
        if invariant is None:
            invariant, _ = self.invariant_basis()
        ech = SparseEchelon()
        out = []
        for x in invariant:
            img = self.p_flat(x)
            if ech.insert(self.space.to_flat(img)):
                out.append(img)
        return out, ech

    def multiplication_table(self, basis: list[dict]) -> dict:
        """Structure constants of span(basis) (assumed closed) in that basis."""
        ech = SparseEchelon()
        for b in basis:
            ech.insert(self.space.to_flat(b))
        table = {}
        flat_basis = [self.space.to_flat(b) for b in basis]
        for i, x in enumerate(basis):
            for j, y in enumerate(basis):
                table[(i, j)] = coordinates(flat_basis, self.space.to_flat(self.multiply(x, y)))
        return table

    def pi_ad(self, alpha: Mapping[int, Q], side: str = "right") -> dict:
        cols = char_projector(PairedHopfData(self.K, self.Kd), self.ell, side)
        out: dict = {}
        for k, c in alpha.items():
            axpy(out, cols[k], c)
        return out


def coordinates(basis: list[dict], vec: Mapping) -> dict:
    """Coordinates of ``vec`` in a linearly independent list of sparse vectors."""
    from .linalg import solve_linear, sparse_to_dense
    keys = sorted(set().union(*[set(b) for b in basis], set(vec)))
    idx = {k: i for i, k in enumerate(keys)}
    rows = len(keys)
    mat = [[ZERO] * len(basis) for _ in range(rows)]
    for j, b in enumerate(basis):
        for k, c in b.items():
            mat[idx[k]][j] = c
    rhs = [ZERO] * rows
    for k, c in vec.items():
        rhs[idx[k]] = c
    sol = solve_linear(mat, rhs)
    return {i: c for i, c in enumerate(sol) if c}


# --------------------------------------------------------------------------
# vertex neighbourhoods and the Kitaev side

def _apply_antipode_slots(key: tuple, tau: Sequence[int], antipode) -> dict:
    terms = [((), ONE)]
    for k, x in enumerate(key):
        if tau[k] and x is not None:
            terms = [(t + (y,), z * w) for t, z in terms for y, w in antipode[x].items()]
        else:
            terms = [(t + (x,), z) for t, z in terms]
    out: dict = {}
    for t, z in terms:
        add_term(out, t, z)
    return out


def star_with_orientation(tau: Sequence[int]) -> CiliatedRibbonGraph:
    from .ribbon import star
    return star(len(tau), outgoing=[i for i, t in enumerate(tau) if t])


class VertexChi:
    """chi_{tau,sigma}: A*_v -> H(H)^{op (x) n}.

    Generators map through neighbourhood-path holonomies on the all-incoming
    star; tau = 1 slots are conjugated by S_D on input and output.
    """

    def __init__(self, spec: VertexAlgebraSpec, h: HopfAlgebra):
        from .kitaev import KitaevModel
        from .ribbon import nb_path
        self.spec = spec
        self.graph = star_with_orientation((0,) * spec.n)
        self.model = KitaevModel(self.graph, h, regular=False)
        self.pair = self.model.pair
        self.algebra = VertexAlgebra(spec, self.model.double, self.model.dd)
        self.paths = [nb_path(self.graph, 0, i + 1, spec.sigma[i]) for i in range(spec.n)]
        self._gen = {}

    def untwisted_image(self, i: int, p: int) -> dict:
        return self.model.holonomy(self.paths[i], {p: ONE})

    def generator_image(self, i: int, p: int) -> dict:
        key = (i, p)
        if key not in self._gen:
            dd, tau = self.model.dd, self.spec.tau
            inp = dd.antipode[p] if tau[i] else {p: ONE}
            raw: dict = {}
            for q, c in inp.items():
                axpy(raw, self.untwisted_image(i, q), c)
            out: dict = {}
            for k, c in raw.items():
                axpy(out, _apply_antipode_slots(k, tau, dd.antipode), c)
            self._gen[key] = out
        return self._gen[key]

    def apply(self, x: Mapping) -> dict:
        sp = self.model.space
        out: dict = {}
        for key, c in x.items():
            cur = sp.unit()
            for i, p in enumerate(key):
                if p is not None:
                    cur = sp.mul(self.generator_image(i, p), cur, "hd")
            axpy(out, cur, c)
        return out

    def basis_keys(self):
        return itertools.product(range(self.model.d), repeat=self.spec.n)

    def rank(self) -> int:
        ech = SparseEchelon()
        for key in self.basis_keys():
            ech.insert(self.model.space.to_flat(self.apply({key: ONE})))
        return len(ech)

    def kernel_element(self, y: Mapping[int, Q]) -> dict | None:
        """sum (S(y_(1)) (x) 1)_{k-1} (y_(2) (x) 1)_k - eps(y) 1 for k the first slot
        with sigma = 1 (needs k >= 2); zero under chi when all tau vanish."""
        try:
            k = self.spec.sigma.index(1)
        except ValueError:
            return None
        if k == 0:
            return None
        m = self.model
        h = m.h
        out: dict = {}
        for (y1, y2), c in h.comul(y).items():
            left = m.y_one(h.S({y1: ONE}))
            right = m.y_one({y2: ONE})
            for a, za in left.items():
                for b, zb in right.items():
                    key = [None] * self.spec.n
                    key[k - 1] = a
                    key[k] = b
                    add_term(out, tuple(key), c * za * zb)
        eps = sum((c * h.counit[i] for i, c in y.items()), ZERO)
        if eps:
            add_term(out, (None,) * self.spec.n, -eps)
        return out


def mu_retraction(spec: VertexAlgebraSpec, h: HopfAlgebra, x: Mapping) -> dict:
    """mu_v = T o mu_{v,0} o T with T = S_D on the tau = 1 slots."""
    pair = paired(h)
    dd = double_dual(pair)
    n_h = h.dim
    T = VertexAlgebra(spec, drinfeld_double(pair), dd).twist
    return T(_mu0(spec.n, h, pair.hd, T(x), n_h))


def _mu0(n: int, h: HopfAlgebra, hd: HopfAlgebra, x: Mapping, n_h: int) -> dict:
    out: dict = {}
    unit_full = _expand_unit_keys(x, n, h, hd, n_h)
    for key, c in unit_full.items():
        zs = [divmod(p, n_h) for p in key]
        # split z^i for i >= 2 into (z_(1), z_(2))
        splits = [[((None, zs[0][0]), ONE)]]
        for i in range(1, n):
            splits.append(list(h.comult[zs[i][0]].items()))
        for combo in itertools.product(*splits):
            coef = c
            terms = [((), coef)]
            for i in range(n):
                own = combo[i][0][1]
                coef_i = combo[i][1]
                nxt_first = combo[i + 1][0][0] if i + 1 < n else None
                left = h.S({nxt_first: ONE}) if nxt_first is not None else dict(h.unit)
                prod = h.mul(left, {own: ONE})
                new = []
                for t, z in terms:
                    for k, w in prod.items():
                        new.append((t + (k * n_h + zs[i][1],), z * w * coef_i))
                terms = new
            for t, z in terms:
                add_term(out, t, z)
    return out


def _expand_unit_keys(x: Mapping, n: int, h: HopfAlgebra, hd: HopfAlgebra, n_h: int) -> dict:
    unit_local = {a * n_h + b: za * zb for a, za in h.unit.items() for b, zb in hd.unit.items()}
    out: dict = {}
    for key, c in x.items():
        terms = [((), c)]
        for p in key:
            opts = unit_local.items() if p is None else ((p, ONE),)
            terms = [(t + (k,), z * w) for t, z in terms for k, w in opts]
        for t, z in terms:
            add_term(out, t, z)
    return out


def mu_chi_closed_form(spec: VertexAlgebraSpec, h: HopfAlgebra, key: tuple) -> dict:
    """mu_{v,0} o chi_{v,0} on a basis tensor via the m_i formulas (tau = 0)."""
    pair = paired(h)
    hd = pair.hd
    n_h = h.dim
    n = spec.n
    sig = list(spec.sigma) + [0]
    ys = [divmod(p, n_h) for p in key]
    splits = [[((None, ys[0][0]), ONE)]]
    for i in range(1, n):
        splits.append(list(h.comult[ys[i][0]].items()))
    out: dict = {}
    for combo in itertools.product(*splits):
        terms = [((), ONE)]
        for i in range(n):
            coef_i = combo[i][1]
            y = {combo[i][0][1]: ONE}
            z = {combo[i + 1][0][0]: ONE} if i + 1 < n else dict(h.unit)
            delta = ys[i][1]
            local = _m_local(sig[i], sig[i + 1], y, z, delta, h, hd, n_h)
            terms = [(t + (k,), w * v * coef_i) for t, w in terms for k, v in local.items()]
        for t, w in terms:
            add_term(out, t, w)
    return out


def _eps(h: HopfAlgebra, vec: Mapping[int, Q]) -> Q:
    return sum((c * h.counit[k] for k, c in vec.items()), ZERO)


def _m_local(s_i: int, s_next: int, y, z, delta: int, h, hd, n_h) -> dict:
    out: dict = {}
    if s_i == 0 and s_next == 0:
        w = _eps(h, z)
        for k, c in y.items():
            add_term(out, k * n_h + delta, c * w)
    elif s_i == 0 and s_next == 1:
        for k, c in h.mul(z, y).items():
            add_term(out, k * n_h + delta, c)
    else:
        w = _eps(h, y) if s_next == 1 else _eps(h, y) * _eps(h, z)
        if not w:
            return out
        base = z if s_next == 1 else dict(h.unit)
        for r in range(n_h):
            for s in range(n_h):
                left = h.mul(h.mul(base, {r: ONE}), h.S({s: ONE}))
                right = hd.mul(hd.mul({s: ONE}, {delta: ONE}), {r: ONE})
                for a, ca in left.items():
                    for b, cb in right.items():
                        add_term(out, a * n_h + b, w * ca * cb)
    return out
