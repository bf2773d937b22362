"""The algebra isomorphism chi from the D(H) gauge theory to the triangle operators.

chi sends the generator (y (x) gamma)_e to the holonomy of the edge path
p_{e,+} and an ordered product of generators (in a global edge order) to the
reversed product of their images.  A second route factors chi through the
vertex algebras: chi = M* o (x)_v chi_v o G*.
"""

from __future__ import annotations

import heapq
import itertools
import random
from typing import Mapping, Sequence

from .constructions import HeisenbergStructure
from .edgetensor import EdgeTensorSpace
from .gauge import GraphAlgebra, VertexChi, coordinates
from .hopf import HopfAlgebra
from .kitaev import KitaevModel
from .linalg import ONE, ZERO, Q, SparseEchelon, add_term, axpy
from .report import Report
from .ribbon import CiliatedRibbonGraph, edge_paths


def alternative_edge_order(graph: CiliatedRibbonGraph) -> list[int] | None:
    """Another linear extension of the edge order (largest index first)."""
    succ: list[set] = [set() for _ in range(graph.n_edges)]
    indeg = [0] * graph.n_edges
    for slots in graph.rotation:
        for a in range(len(slots)):
            for b in range(a + 1, len(slots)):
                e, f = slots[a][0], slots[b][0]
                if e != f and f not in succ[e]:
                    succ[e].add(f)
                    indeg[f] += 1
    heap = [-e for e in range(graph.n_edges) if indeg[e] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        e = -heapq.heappop(heap)
        out.append(e)
        for f in succ[e]:
            indeg[f] -= 1
            if indeg[f] == 0:
                heapq.heappush(heap, -f)
    return out if len(out) == graph.n_edges else None


class Equivalence:
    """chi: A*_Gamma -> H(H)^{op (x) E} on a regular ciliated ribbon graph."""

    def __init__(self, graph: CiliatedRibbonGraph, h: HopfAlgebra, order: Sequence[int] | None = None,
                 sigma_end: str = "target"):
        self.graph = graph
        self.gauge = GraphAlgebra(graph, h, sigma_end=sigma_end)
        self.kitaev = KitaevModel(graph, h)
        self.h = h
        self.n = h.dim
        self.d = self.kitaev.d
        self.E = graph.n_edges
        self.space = self.kitaev.space
        self.hs = HeisenbergStructure(self.kitaev.pair)
        self.order = list(order) if order is not None else self.gauge.order
        self._gen: dict = {}
        self._prefix: dict = {}
        self._vchi = None

    # --- generators
    def edge_holonomy(self, e: int, vec: Mapping[int, Q], sign: int = 1) -> dict:
        plus, minus = edge_paths(self.graph, e)
        return self.kitaev.holonomy(plus if sign > 0 else minus, vec)

    def generator_image(self, e: int, p: int) -> dict:
        key = (e, p)
        if key not in self._gen:
            self._gen[key] = self.edge_holonomy(e, {p: ONE})
        return self._gen[key]

    def edge_holonomy_closed(self, e: int, vec: Mapping[int, Q]) -> dict:
        """The edge-path holonomy from xi_1, iterated phi_1 and antipodes."""
        g = self.graph
        (v, s), (w, t) = g.edges[e]
        t_edges = g.incident(w)[:t]
        s_edges = g.incident(v)[:s]
        dd = self.kitaev.dd
        out: dict = {}
        for (pa, pb), c in self.hs.xi1(vec).items():
            left = self._split_phi1({pa: ONE}, len(t_edges) + 1)
            if s_edges:
                right = self._split_phi1({pb: ONE}, len(s_edges))
            else:
                eps = dd.counit[pb]
                right = {(): eps} if eps else {}
            for lk, lc in left.items():
                for rk, rc in right.items():
                    parts = {}
                    for (f, eps), q in zip(t_edges, lk[:-1]):
                        parts[f] = {q: ONE} if eps == 1 else dd.antipode[q]
                    parts[e] = {lk[-1]: ONE}
                    for (f, eps), q in zip(s_edges, rk):
                        parts[f] = {q: ONE} if eps == 1 else dd.antipode[q]
                    axpy(out, self.space.pure(parts), c * lc * rc)
        return out

    def _split_phi1(self, vec: Mapping[int, Q], k: int) -> dict:
        """Iterated phi_1 producing ``k`` factors (the last keeps the H* part)."""
        cur = {(p,): c for p, c in vec.items()}
        for _ in range(k - 1):
            nxt: dict = {}
            for key, c in cur.items():
                for (a, b), z in self.hs.phi1({key[-1]: ONE}).items():
                    add_term(nxt, key[:-1] + (a, b), c * z)
            cur = nxt
        return cur

    # --- chi through the global edge order
    def chi_key(self, key: tuple) -> dict:
        if self.order is None:
            return self.chi_decomposed({key: ONE})
        return self._chi_prefix(tuple(key[e] for e in self.order))

    def _chi_prefix(self, seq: tuple) -> dict:
        """chi of (x_k)_{e_k} ... with entries listed along the order; reversed product."""
        if not seq:
            return self.space.unit()
        hit = self._prefix.get(seq)
        if hit is not None:
            return hit
        rest = self._chi_prefix(seq[:-1])
        p = seq[-1]
        if p is None:
            res = rest
        else:
            e = self.order[len(seq) - 1]
            res = self.space.mul(self.generator_image(e, p), rest, "hd")
        if len(self._prefix) < 200000:
            self._prefix[seq] = res
        return res

    def chi(self, x: Mapping) -> dict:
        out: dict = {}
        for key, c in x.items():
            axpy(out, self.chi_key(key), c)
        return out

    # --- chi through the vertex algebras
    def vertex_chis(self) -> list[VertexChi]:
        if self._vchi is None:
            self._vchi = [VertexChi(va.spec, self.h) for va in self.gauge.vertex_algebras]
        return self._vchi

    def chi_decomposed(self, x: Mapping) -> dict:
        ga = self.gauge
        chis = self.vertex_chis()
        segs = [(ga.offset[v], ga.offset[v] + self.graph.valence(v)) for v in range(ga.V)]
        slot_space = EdgeTensorSpace(self.d, ga.n_slots, self.kitaev.dd.unit, {})
        cache: dict = {}
        out: dict = {}
        for key, c in ga.g_star(x).items():
            parts = [((), c)]
            for v, (lo, hi) in enumerate(segs):
                seg = key[lo:hi]
                img = cache.get((v, seg))
                if img is None:
                    img = cache[(v, seg)] = chis[v].apply({seg: ONE})
                parts = [(t + k, z * w) for t, z in parts for k, w in img.items()]
            for t, z in parts:
                add_term(out, t, z)
        return self.m_star(slot_space.expand_positions(out, range(ga.n_slots)))

    def m_star(self, y: Mapping) -> dict:
        """(y (x) gamma)_t (x) (z (x) delta)_s -> eps(delta) (yz (x) gamma)_e."""
        ga = self.gauge
        n, h, hd = self.n, self.h, self.kitaev.hdual
        out: dict = {}
        for key, c in y.items():
            terms = [((), c)]
            for e in range(self.E):
                ya, gb = divmod(key[ga.t_slot[e]], n)
                za, db = divmod(key[ga.s_slot[e]], n)
                w = hd.counit[db]
                if not w:
                    terms = []
                    break
                prod = h.mult.get((ya, za), {})
                terms = [(t + (k * n + gb,), z * w * u) for t, z in terms for k, u in prod.items()]
            for t, z in terms:
                add_term(out, t, z)
        return out

    # --- whole-space data
    def basis_keys(self):
        return itertools.product(range(self.d), repeat=self.E)

    def rank(self) -> int:
        ech = SparseEchelon()
        for key in self.basis_keys():
            ech.insert(self.space.to_flat(self.chi_key(key)))
        return len(ech)


# --------------------------------------------------------------------------
# verification suites

def _sample_keys(rng: random.Random, d: int, E: int, count: int, sparse: bool = False) -> list[tuple]:
    out = []
    for _ in range(count):
        out.append(tuple(None if sparse and rng.random() < 0.4 else rng.randrange(d) for _ in range(E)))
    return out


def verify_chi(eq: Equivalence, pairs: int = 200, seed: int = 0, full_rank: bool = True) -> Report:
    rep = Report("equivalence/chi")
    ga, sp = eq.gauge, eq.space
    rng = random.Random(seed)
    d, E = eq.d, eq.E
    # closed form of the edge-path holonomy and p_{e,+} = p_{e,-}
    bad = None
    for e in range(E):
        for p in range(d):
            a = eq.generator_image(e, p)
            if not sp.equal(a, eq.edge_holonomy(e, {p: ONE}, -1)):
                bad = bad or {"edge": e, "basis": p, "paths": "plus/minus"}
            if not sp.equal(a, eq.edge_holonomy_closed(e, {p: ONE})):
                bad = bad or {"edge": e, "basis": p, "paths": "closed form"}
    rep.check("edge_path_holonomy_closed_form", bad is None, bad)
    # structural generator cases: same edge, disjoint edges, shared vertex
    bad = None
    for e in range(E):
        for f in range(E):
            for a in range(d):
                for b in range(d):
                    x, y = ga.generator(e, {a: ONE}), ga.generator(f, {b: ONE})
                    lhs = eq.chi(ga.multiply(x, y))
                    rhs = sp.mul(eq.chi(y), eq.chi(x), "hd")
                    if not sp.equal(lhs, rhs):
                        bad = {"edges": [e, f], "basis": [a, b]}
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    rep.check("anti_multiplicative_generators", bad is None, bad)
    # random basis pairs
    # random basis pairs, then pairs with unit entries (these give more nonzero products)
    for name, sparse in (("random_pairs", False), ("sparse_pairs", True)):
        bad = None
        nonzero = 0
        keys = _sample_keys(rng, d, E, 2 * pairs, sparse=sparse)
        for i in range(pairs):
            x, y = {keys[2 * i]: ONE}, {keys[2 * i + 1]: ONE}
            xy = ga.multiply(x, y)
            nonzero += not sp.is_zero(xy)
            if not sp.equal(eq.chi(xy), sp.mul(eq.chi(y), eq.chi(x), "hd")):
                bad = {"pair": [list(keys[2 * i]), list(keys[2 * i + 1])]}
                break
        rep.check(f"anti_multiplicative_{name}", bad is None, bad)
        rep.dims[name] = pairs
        rep.dims[f"{name}_nonzero_products"] = nonzero
    # the two routes agree
    bad = None
    for key in _sample_keys(rng, d, E, 40, sparse=True):
        if not sp.equal(eq.chi_key(key), eq.chi_decomposed({key: ONE})):
            bad = {"key": list(key)}
            break
    rep.check("vertex_decomposition", bad is None, bad)
    # independence of the chosen global order
    alt = alternative_edge_order(eq.graph)
    if alt is not None and eq.order is not None:
        other = Equivalence.__new__(Equivalence)
        other.__dict__.update(eq.__dict__)
        other.order, other._prefix = alt, {}
        bad = None
        for key in _sample_keys(rng, d, E, 200):
            if not sp.equal(eq.chi_key(key), other.chi_key(key)):
                bad = {"key": list(key), "order": alt}
                break
        rep.check("order_independent", bad is None, bad)
        rep.dims["alternative_order"] = alt
    # edge reversal: the paths of e^{-1} carry S_D alpha along the paths of e
    bad = None
    anti = eq.kitaev.dd.antipode
    for e in range(E):
        rev_plus, rev_minus = edge_paths(eq.graph, e, -1)
        for p in range(d):
            for path, sign in ((rev_plus, -1), (rev_minus, 1)):
                lhs = eq.kitaev.holonomy(path, {p: ONE})
                if not sp.equal(lhs, eq.edge_holonomy(e, anti[p], sign)):
                    bad = {"edge": e, "basis": p, "sign": sign}
                    break
            if bad:
                break
        if bad:
            break
    rep.check("edge_reversal", bad is None, bad)
    if full_rank:
        r = eq.rank()
        rep.dims["chi_rank"] = r
        rep.dims["dimension"] = d ** E
        rep.check("bijective", r == d ** E, {"rank": r})
    return rep


def verify_actedge(eq: Equivalence, samples: int = 32, seed: int = 1) -> Report:
    rep = Report("equivalence/action")
    ga, km, sp = eq.gauge, eq.kitaev, eq.space
    d, E, V = eq.d, eq.E, ga.V
    dd = km.dd
    # generator level: target end, starting end, other vertices
    bad = {}
    for e in range(E):
        src, tgt = eq.graph.source(e), eq.graph.target(e)
        for p in range(d):
            hol = eq.generator_image(e, p)
            for v in range(V):
                for k in range(d):
                    lhs = km.gauge_act(hol, v, {k: ONE})
                    rhs: dict = {}
                    if v == tgt:
                        case = "target"
                        for (p1, p2), c in dd.comult[p].items():
                            if p1 == k:
                                axpy(rhs, eq.generator_image(e, p2), c)
                    elif v == src:
                        case = "start"
                        for (p1, p2), c in dd.comult[p].items():
                            w = dd.antipode[p2].get(k)
                            if w:
                                axpy(rhs, eq.generator_image(e, p1), c * w)
                    else:
                        case = "other"
                        w = km.double.counit[k]
                        if w:
                            axpy(rhs, hol, w)
                    if not sp.equal(lhs, rhs) and case not in bad:
                        bad[case] = {"edge": e, "basis": p, "vertex": v, "k": k}
    for case in ("target", "start", "other"):
        rep.check(f"edge_action_{case}", case not in bad, bad.get(case))
    # chi(x <| k_v) = chi(x) <| k_v on sampled basis elements
    rng = random.Random(seed)
    bad = None
    for key in _sample_keys(rng, d, E, samples, sparse=True):
        x = {key: ONE}
        cx = eq.chi(x)
        v = rng.randrange(V)
        k = rng.randrange(d)
        if not sp.equal(eq.chi(ga.act(x, v, {k: ONE})), km.gauge_act(cx, v, {k: ONE})):
            bad = {"key": list(key), "vertex": v, "k": k}
            break
    rep.check("module_morphism", bad is None, bad)
    bad = None
    for key in _sample_keys(rng, d, E, samples):
        x = {key: ONE}
        if not sp.equal(eq.chi(ga.p_inv(x)), km.q_inv(eq.chi(x))):
            bad = {"key": list(key)}
            break
    rep.check("invariant_projectors_intertwined", bad is None, bad)
    return rep


def verify_facetransfer(eq: Equivalence, product: str = "tensor", full: bool = True) -> Report:
    rep = Report("equivalence/curvature")
    ga, km, sp = eq.gauge, eq.kitaev, eq.space
    n = eq.n
    bad = None
    for v in range(ga.V):
        for p in range(eq.d):
            a, b = divmod(p, n)
            lhs = eq.chi(ga.hol_gamma(ga.face_word(v), {p: ONE}, product))
            rhs = sp.mul(km.holonomy(km.p_v(v), km.y_one({a: ONE})),
                         km.holonomy(km.p_f(v), km.one_dual({b: ONE})), "hd")
            if not sp.equal(lhs, rhs):
                bad = {"vertex": v, "basis": p}
                break
        if bad:
            break
    rep.check("face_holonomy_to_site", bad is None, bad)
    bad = None
    keys = list(eq.basis_keys()) if full else _sample_keys(random.Random(2), eq.d, eq.E, 64)
    for v in range(ga.V):
        for key in keys:
            x = {key: ONE}
            if not sp.equal(eq.chi(ga.p_face(x, v, product)), km.q_v(eq.chi(x), v)):
                bad = {"vertex": v, "key": list(key)}
                break
        if bad:
            break
    rep.check("face_projector_intertwined", bad is None, bad)
    return rep


def verify_modth(eq: Equivalence) -> Report:
    rep = Report("equivalence/moduli")
    ga, km, sp = eq.gauge, eq.kitaev, eq.space
    inv, _ = ga.invariant_basis()
    bad = None
    for x in inv:
        if not sp.equal(eq.chi(ga.p_flat(x)), km.q_flat(eq.chi(x))):
            bad = {"element": sorted(map(list, x))[:4]}
            break
    rep.check("flat_projectors_intertwined", bad is None, bad)
    moduli, _ = ga.moduli_basis(inv)
    # Kitaev side: the flat subalgebra Q_flat(Q_inv(H(H)^{(x) E}))
    ech = SparseEchelon()
    for key in eq.basis_keys():
        ech.insert(sp.to_flat(km.q_flat(km.q_inv({key: ONE}))))
    rep.dims["moduli_dim"] = len(moduli)
    rep.dims["flat_subalgebra_dim"] = len(ech)
    rep.dims["invariant_dim"] = len(inv)
    rep.check("dimensions_match", len(moduli) == len(ech))
    images = [eq.chi(m) for m in moduli]
    img_flat = [sp.to_flat(x) for x in images]
    rep.check("image_in_flat_subalgebra", all(ech.contains(v) for v in img_flat))
    table_m = ga.multiplication_table(moduli)
    bad = None
    for i in range(len(moduli)):
        for j in range(len(moduli)):
            prod = sp.to_flat(sp.mul(images[j], images[i], "hd"))
            if coordinates(img_flat, prod) != table_m[(i, j)]:
                bad = {"i": i, "j": j}
                break
        if bad:
            break
    rep.check("multiplication_tables_match", bad is None, bad)
    rep.dims["moduli_table"] = {f"{i},{j}": v for (i, j), v in table_m.items()}
    return rep


def invariance_report(h: HopfAlgebra, graphs: Sequence[CiliatedRibbonGraph]) -> Report:
    """Moduli, flat-subalgebra and protected dimensions across graphs."""
    from .kitaev_suites import invariant_image_basis
    rep = Report("equivalence/invariance")
    seen: dict = {"moduli_dim": {}, "flat_dim": {}, "protected_dim": {}}
    for g in graphs:
        ga = GraphAlgebra(g, h)
        inv, _ = ga.invariant_basis()
        mod, _ = ga.moduli_basis(inv)
        km = KitaevModel(g, h)
        flat = SparseEchelon()
        for x in invariant_image_basis(km):
            flat.insert(km.space.to_flat(km.q_flat(x)))
        key = g.label
        rep.dims[f"{key}/invariant_dim"] = len(inv)
        for name, val in (("moduli_dim", len(mod)), ("flat_dim", len(flat)),
                          ("protected_dim", km.protected_dimension())):
            rep.dims[f"{key}/{name}"] = val
            seen[name][key] = val
    for name, vals in seen.items():
        rep.check(f"{name}_invariant", len(set(vals.values())) == 1, vals)
    return rep
