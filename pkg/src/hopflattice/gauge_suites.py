"""Verification suites for the D(H) gauge theory: generator relations, module
structure, curvatures and the quantum moduli algebra."""

from __future__ import annotations

import itertools
import random
from typing import Mapping

from .constructions import (
    PairedHopfData,
    character_algebra_basis,
    paired,
)
from .gauge import (
    GraphAlgebra,
    OffImage,
    VertexAlgebra,
    VertexAlgebraSpec,
    VertexChi,
    mu_chi_closed_form,
    mu_retraction,
)
from .hopf import HopfAlgebra
from .linalg import ONE, ZERO, SparseEchelon, add_term, axpy, scale
from .report import Report
from .ribbon import CiliatedRibbonGraph, check_regular, edge_order, inverse_word


def _sample_keys(rng: random.Random, d: int, E: int, count: int, sparse: bool = True) -> list[tuple]:
    return [tuple(None if sparse and rng.random() < 0.4 else rng.randrange(d) for _ in range(E))
            for _ in range(count)]


def _pair_R(R: Mapping, a: int, b: int):
    return R.get((a, b), ZERO)


# --------------------------------------------------------------------------
# vertex algebras

def vertex_suite(h: HopfAlgebra, n: int = 2) -> Report:
    """Associativity of every sigma/tau pattern and the closed product rules."""
    rep = Report("gauge/vertex")
    pair = paired(h)
    from .constructions import double_dual, drinfeld_double
    K, Kd = drinfeld_double(pair), double_dual(pair)
    d = Kd.dim
    R = K.r_matrix
    keys = list(itertools.product(range(d), repeat=n))
    for sig in itertools.product((0, 1), repeat=n):
        for tau in itertools.product((0, 1), repeat=n):
            va = VertexAlgebra(VertexAlgebraSpec(n, sig, tau), K, Kd)
            bad = None
            for a in keys:
                for b in keys:
                    ab = va.multiply_keys(a, b)
                    for c in keys:
                        left: dict = {}
                        for k, z in ab.items():
                            axpy(left, va.multiply({k: ONE}, {c: ONE}), z)
                        right = va.multiply({a: ONE}, va.multiply({b: ONE}, {c: ONE}))
                        diff = dict(left)
                        axpy(diff, right, -ONE)
                        if diff:
                            bad = {"a": a, "b": b, "c": c}
                            break
                    if bad:
                        break
                if bad:
                    break
            rep.check(f"associative_sigma{''.join(map(str, sig))}_tau{''.join(map(str, tau))}", bad is None, bad)
    # closed rules with tau = 0
    unit = (None,) * n
    bad = {}
    for sig in itertools.product((0, 1), repeat=n):
        va = VertexAlgebra(VertexAlgebraSpec(n, sig, (0,) * n), K, Kd)
        for i in range(n):
            for j in range(n):
                for a in range(d):
                    for b in range(d):
                        x = {unit[:i] + (a,) + unit[i + 1:]: ONE}
                        y = {unit[:j] + (b,) + unit[j + 1:]: ONE}
                        got = va.multiply(x, y)
                        want: dict = {}
                        if i < j:
                            key = list(unit)
                            key[i], key[j] = a, b
                            want = {tuple(key): ONE}
                            case = "ordered_slots"
                        elif i > j:
                            case = "swapped_slots"
                            for (a1, a2), za in Kd.comult[a].items():
                                for (b1, b2), zb in Kd.comult[b].items():
                                    r = _pair_R(R, b1, a1)
                                    if r:
                                        key = list(unit)
                                        key[i], key[j] = a2, b2
                                        add_term(want, tuple(key), za * zb * r)
                        elif sig[i]:
                            case = "same_slot_sigma1"
                            for k, z in Kd.mult.get((a, b), {}).items():
                                add_term(want, unit[:i] + (k,) + unit[i + 1:], z)
                        else:
                            case = "same_slot_sigma0"
                            for (a1, a2), za in Kd.comult[a].items():
                                for (b1, b2), zb in Kd.comult[b].items():
                                    r = _pair_R(R, b1, a1)
                                    if r:
                                        for k, z in Kd.mult.get((b2, a2), {}).items():
                                            add_term(want, unit[:i] + (k,) + unit[i + 1:], za * zb * r * z)
                        diff = dict(got)
                        axpy(diff, want, -ONE)
                        if diff and case not in bad:
                            bad[case] = {"sigma": sig, "i": i, "j": j, "a": a, "b": b}
    for case in ("ordered_slots", "swapped_slots", "same_slot_sigma1", "same_slot_sigma0"):
        rep.check(f"rule_{case}", case not in bad, bad.get(case))
    return rep


def vertex_chi_suite(h: HopfAlgebra, n: int = 2, patterns=None) -> Report:
    """chi_v is anti-multiplicative, bijective iff all sigma vanish, and mu_v
    satisfies the composition formula."""
    rep = Report("gauge/vertex-chi")
    pats = patterns or [(s, t) for s in itertools.product((0, 1), repeat=n)
                        for t in itertools.product((0, 1), repeat=n)]
    for sig, tau in pats:
        tag = f"sigma{''.join(map(str, sig))}_tau{''.join(map(str, tau))}"
        spec = VertexAlgebraSpec(n, tuple(sig), tuple(tau))
        vc = VertexChi(spec, h)
        sp = vc.model.space
        keys = list(vc.basis_keys())
        bad = None
        for a in keys:
            for b in keys:
                lhs = vc.apply(vc.algebra.multiply_keys(a, b))
                rhs = sp.mul(vc.apply({b: ONE}), vc.apply({a: ONE}), "hd")
                if not sp.equal(lhs, rhs):
                    bad = {"a": a, "b": b}
                    break
            if bad:
                break
        rep.check(f"{tag}_anti_multiplicative", bad is None, bad)
        r = vc.rank()
        rep.dims[f"{tag}_rank"] = r
        bij = r == vc.model.d ** n
        rep.check(f"{tag}_bijective_iff_sigma_zero", bij == (all(s == 0 for s in sig) or h.dim == 1), {"rank": r})
        if not any(tau):
            bad = None
            for key in keys:
                if not sp.equal(mu_retraction(spec, h, vc.apply({key: ONE})), mu_chi_closed_form(spec, h, key)):
                    bad = {"key": key}
                    break
            rep.check(f"{tag}_mu_composition", bad is None, bad)
    return rep


def kernel_control(h: HopfAlgebra) -> Report:
    """For sigma = (0, 1) the element sum (S(y_(1)) (x) 1)_1 (y_(2) (x) 1)_2 with
    y = x_0 - x_1 is nonzero and annihilated by chi_v."""
    rep = Report("gauge/vertex-kernel")
    vc = VertexChi(VertexAlgebraSpec(2, (0, 1), (0, 0)), h)
    y = {0: ONE, 1: -ONE}
    ker = vc.kernel_element(y)
    sp = vc.model.space
    rep.check("kernel_element_nonzero", ker is not None and not sp.is_zero(ker))
    rep.check("kernel_element_annihilated", ker is not None and sp.is_zero(vc.apply(ker)))
    rep.dims["rank"] = vc.rank()
    rep.dims["dimension"] = vc.model.d ** 2
    return rep


# --------------------------------------------------------------------------
# graph algebra relations

def _shared_vertex_oracle(ga: GraphAlgebra, e: int, a: int, f: int, b: int, v: int) -> dict:
    """(alpha)_e (beta)_f for edges meeting only at v, slot of e above slot of f,
    from the braided product at v and the counit on starting ends."""
    Kd, R = ga.Kd, ga.K.r_matrix
    S = Kd.antipode
    cu = Kd.counit

    def split(edge, x):
        # (piece at v, piece at the other end, tau at v, other end is a start)
        out = []
        at_target = ga.graph.target(edge) == v
        for (x1, x2), z in Kd.comult[x].items():
            if at_target:
                out.append((x1, x2, 0, True, z))
            else:
                out.append((x2, x1, 1, False, z))
        return out

    def twist(vec, t):
        if not t:
            return vec
        res: dict = {}
        for k, c in vec.items():
            axpy(res, S[k], c)
        return res

    out: dict = {}
    for av, ao, ta, ao_start, za in split(e, a):
        for bv, bo, tb, bo_start, zb in split(f, b):
            for p, cp in twist({av: ONE}, ta).items():
                for q, cq in twist({bv: ONE}, tb).items():
                    for (p1, p2), z1 in Kd.comult[p].items():
                        for (q1, q2), z2 in Kd.comult[q].items():
                            r = R.get((q1, p1))
                            if not r:
                                continue
                            c = za * zb * cp * cq * z1 * z2 * r
                            for pe, ce in twist({p2: ONE}, ta).items():
                                for qf, cf in twist({q2: ONE}, tb).items():
                                    w = c * ce * cf
                                    # the counit removes the starting end of each edge
                                    ent_e = pe if ta == 0 else ao
                                    w = w * (cu[ao] if ta == 0 else cu[pe])
                                    ent_f = qf if tb == 0 else bo
                                    w = w * (cu[bo] if tb == 0 else cu[qf])
                                    if w:
                                        key = [None] * ga.E
                                        key[e], key[f] = ent_e, ent_f
                                        add_term(out, tuple(key), w)
    return out


def multrel_suite(ga: GraphAlgebra, samples: int = 100, seed: int = 0) -> Report:
    rep = Report("gauge/multrel")
    sp, Kd, R = ga.space, ga.Kd, ga.K.r_matrix
    d, E = ga.d, ga.E
    g = ga.graph
    rng = random.Random(seed)
    # embedding and its retraction
    rep.check("gstar_unit", ga.g_star(ga.unit()) == {(None,) * ga.n_slots: ONE})
    bad = None
    for e in range(E):
        for a in range(d):
            x = ga.generator(e, {a: ONE})
            if not sp.equal(ga.retract(ga.g_star(x), check=True), x):
                bad = {"edge": e, "basis": a}
    rep.check("gstar_round_trip", bad is None, bad)
    off = {tuple(0 if i == ga.s_slot[0] else None for i in range(ga.n_slots)): ONE}
    try:
        ga.retract(off, check=True)
        rep.check("retract_rejects_off_image", False, {"element": "single start-slot entry"})
    except OffImage:
        rep.check("retract_rejects_off_image", True)
    # same edge relation: (beta)_e (alpha)_e = <alpha_(1) (x) beta_(1), R> (alpha_(2) beta_(2))_e
    bad = None
    for e in range(E):
        for a in range(d):
            for b in range(d):
                lhs = ga.multiply(ga.generator(e, {b: ONE}), ga.generator(e, {a: ONE}))
                rhs: dict = {}
                for (a1, a2), za in Kd.comult[a].items():
                    for (b1, b2), zb in Kd.comult[b].items():
                        r = R.get((a1, b1))
                        if r:
                            axpy(rhs, ga.generator(e, Kd.mult.get((a2, b2), {})), za * zb * r)
                if not sp.equal(lhs, rhs):
                    bad = {"edge": e, "a": a, "b": b}
    rep.check("same_edge_relation", bad is None, bad)
    # disjoint edges commute and multiply to the pure tensor
    bad = None
    for e in range(E):
        for f in range(E):
            if e == f or {g.source(e), g.target(e)} & {g.source(f), g.target(f)}:
                continue
            for a in range(d):
                for b in range(d):
                    x, y = ga.generator(e, {a: ONE}), ga.generator(f, {b: ONE})
                    pure = sp.pure({e: {a: ONE}, f: {b: ONE}})
                    if not (sp.equal(ga.multiply(x, y), pure) and sp.equal(ga.multiply(y, x), pure)):
                        bad = {"edges": [e, f], "a": a, "b": b}
    rep.check("disjoint_edges_commute", bad is None, bad)
    # edges sharing one vertex
    bad = None
    for v in range(ga.V):
        slots = g.rotation[v]
        for i, j in itertools.permutations(range(len(slots)), 2):
            e, f = slots[i][0], slots[j][0]
            for a in range(d):
                for b in range(d):
                    x, y = ga.generator(e, {a: ONE}), ga.generator(f, {b: ONE})
                    got = ga.multiply(x, y)
                    if i < j:
                        want = sp.pure({e: {a: ONE}, f: {b: ONE}})
                    else:
                        want = _shared_vertex_oracle(ga, e, a, f, b, v)
                    if not sp.equal(got, want):
                        bad = {"vertex": v, "slots": [i, j], "a": a, "b": b}
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    rep.check("shared_vertex_relation", bad is None, bad)
    # unit, engines, associativity on samples
    keys = _sample_keys(rng, d, E, samples, sparse=False)
    bad = None
    for k in keys:
        x = {k: ONE}
        if not (sp.equal(ga.multiply(ga.unit(), x), x) and sp.equal(ga.multiply(x, ga.unit()), x)):
            bad = {"key": list(k)}
            break
    rep.check("two_sided_unit", bad is None, bad)
    keys = _sample_keys(rng, d, E, 3 * samples)
    bad = None
    if ga.order is not None:
        for i in range(samples):
            x, y = {keys[2 * i]: ONE}, {keys[2 * i + 1]: ONE}
            if not sp.equal(ga.multiply_ordered(x, y), ga.multiply_gstar(x, y)):
                bad = {"pair": [list(keys[2 * i]), list(keys[2 * i + 1])]}
                break
        rep.check("ordering_engine_matches_embedding", bad is None, bad)
    if ga.d ** 2 <= 16 and ga.E <= 6:
        bad = None
        for i in range(min(samples, 20)):
            x, y = {keys[2 * i]: ONE}, {keys[2 * i + 1]: ONE}
            if not sp.equal(ga.multiply_expanded(x, y), ga.multiply_gstar(x, y)):
                bad = {"pair": [list(keys[2 * i]), list(keys[2 * i + 1])]}
                break
        rep.check("contracted_embedding_matches_expanded", bad is None, bad)
    bad = None
    for i in range(samples // 2):
        x, y, z = ({keys[3 * i + k]: ONE} for k in range(3))
        if not sp.equal(ga.multiply(ga.multiply(x, y), z), ga.multiply(x, ga.multiply(y, z))):
            bad = {"triple": [list(keys[3 * i + k]) for k in range(3)]}
            break
    rep.check("associative_samples", bad is None, bad)
    # pure tensors are ordered products of generators
    if ga.order is not None:
        bad = None
        for k in keys[:samples]:
            gens = [ga.generator(e, {k[e]: ONE}) for e in ga.order if k[e] is not None]
            if not sp.equal(ga.multiply_many(gens), {k: ONE}):
                bad = {"key": list(k)}
                break
        rep.check("pure_tensor_is_ordered_product", bad is None, bad)
    # choice of the sigma = 0 end does not change the algebra
    other = GraphAlgebra(g, ga.pair, sigma_end="source" if ga.sigma_end == "target" else "target")
    bad = None
    for e in range(E):
        for f in range(E):
            for a in range(d):
                for b in range(d):
                    x, y = ga.generator(e, {a: ONE}), ga.generator(f, {b: ONE})
                    if not sp.equal(ga.multiply(x, y), other.multiply(x, y)):
                        bad = {"edges": [e, f], "a": a, "b": b}
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    rep.check("sigma_choice_independent", bad is None, bad)
    return rep


def two_vertex_closure(h: HopfAlgebra) -> Report:
    """On one edge between two vertices the image of G* is closed under the
    vertex product."""
    rep = Report("gauge/gstar-closure")
    g = CiliatedRibbonGraph.from_rotation([[(0, 0)], [(0, 1)]], "segment")
    ga = GraphAlgebra(g, h, require_regular=False)
    bad = None
    for a in range(ga.d):
        for b in range(ga.d):
            y = ga.vertex_product(ga.g_star(ga.generator(0, {a: ONE})), ga.g_star(ga.generator(0, {b: ONE})))
            if not ga.in_image(y):
                bad = {"a": a, "b": b}
                break
        if bad:
            break
    rep.check("gstar_image_closed", bad is None, bad)
    return rep


# --------------------------------------------------------------------------
# gauge action

def module_suite(ga: GraphAlgebra, samples: int = 40, seed: int = 0) -> Report:
    rep = Report("gauge/module")
    sp, K = ga.space, ga.K
    d, E, V = ga.d, ga.E, ga.V
    rng = random.Random(seed)
    keys = _sample_keys(rng, d, E, 2 * samples)
    rep.check("unit_acts_trivially", all(sp.equal(ga.act({k: ONE}, v, K.unit), {k: ONE})
                                         for k in keys[:samples] for v in range(V)))
    bad = None
    for e in range(E):
        ends = {ga.graph.source(e), ga.graph.target(e)}
        for v in range(V):
            for a in range(d):
                for k in range(d):
                    x = ga.generator(e, {a: ONE})
                    got = ga.act(x, v, {k: ONE})
                    if v not in ends:
                        if not sp.equal(got, scale(x, K.counit[k])):
                            bad = {"edge": e, "vertex": v, "a": a, "k": k}
                    if ga.d <= 9 and not sp.equal(got, ga.act_gstar(x, v, {k: ONE})):
                        bad = {"edge": e, "vertex": v, "a": a, "k": k, "route": "embedding"}
    rep.check("generator_action", bad is None, bad)
    bad = None
    for i in range(samples):
        x, y = {keys[2 * i]: ONE}, {keys[2 * i + 1]: ONE}
        v = rng.randrange(V)
        k = rng.randrange(d)
        lhs = ga.act(ga.multiply(x, y), v, {k: ONE})
        rhs: dict = {}
        for (k1, k2), c in K.comult[k].items():
            axpy(rhs, ga.multiply(ga.act(x, v, {k1: ONE}), ga.act(y, v, {k2: ONE})), c)
        if not sp.equal(lhs, rhs):
            bad = {"pair": [list(keys[2 * i]), list(keys[2 * i + 1])], "vertex": v, "k": k}
            break
    rep.check("module_algebra", bad is None, bad)
    rep.check("unit_invariant", all(sp.equal(ga.act(ga.unit(), v, {k: ONE}), scale(ga.unit(), K.counit[k]))
                                    for v in range(V) for k in range(d)))
    bad = None
    for i in range(samples):
        x = {keys[i]: ONE}
        v = rng.randrange(V)
        h1, h2 = rng.randrange(d), rng.randrange(d)
        lhs = ga.act(ga.act(x, v, {h1: ONE}), v, {h2: ONE})
        rhs = ga.act(x, v, K.mul({h1: ONE}, {h2: ONE}))
        if not sp.equal(lhs, rhs):
            bad = {"key": list(keys[i]), "vertex": v, "h": [h1, h2]}
            break
        w = rng.randrange(V)
        if w != v:
            a = ga.act(ga.act(x, v, {h1: ONE}), w, {h2: ONE})
            b = ga.act(ga.act(x, w, {h2: ONE}), v, {h1: ONE})
            if not sp.equal(a, b):
                bad = {"key": list(keys[i]), "vertices": [v, w]}
                break
    rep.check("right_action", bad is None, bad)
    return rep


# --------------------------------------------------------------------------
# curvature and moduli

def curvature_suite(ga: GraphAlgebra, invariant: list | None = None, dense: bool = True) -> Report:
    rep = Report("gauge/curvature")
    sp, Kd = ga.space, ga.Kd
    d, E, V = ga.d, ga.E, ga.V
    if invariant is None:
        invariant, _ = ga.invariant_basis()
    rep.dims["invariant_dim"] = len(invariant)
    rep.check("p_inv_unit", sp.equal(ga.p_inv(ga.unit()), ga.unit()))
    if dense:
        bad = None
        for k in ga.basis_keys():
            y = ga.p_inv({k: ONE})
            if not sp.equal(ga.p_inv(y), y):
                bad = {"key": list(k)}
                break
        rep.check("p_inv_idempotent", bad is None, bad)
    ech = SparseEchelon()
    for x in invariant:
        ech.insert(sp.to_flat(x))
    bad = None
    for i, x in enumerate(invariant):
        for j, y in enumerate(invariant):
            if not ech.contains(sp.to_flat(ga.multiply(x, y))):
                bad = {"i": i, "j": j}
                break
        if bad:
            break
    rep.check("invariants_closed", bad is None, bad)
    # holonomy basics
    ok = all(sp.equal(ga.hol_gamma(((e, 1),), {a: ONE}), ga.generator(e, {a: ONE}))
             and sp.equal(ga.hol_gamma(((e, 1), (e, -1)), {a: ONE}), scale(ga.unit(), Kd.counit[a]))
             for e in range(E) for a in range(d))
    rep.check("edge_holonomy", ok)
    bad = None
    for v in range(V):
        for a in range(d):
            hol = ga.hol_gamma(ga.face_word(v), {a: ONE})
            ordered: dict = {}
            word = ga.face_word(v)
            parts = Kd.comul_n({a: ONE}, len(word))
            for ps, c in parts.items():
                gens = {e: ({p: ONE} if x == 1 else Kd.antipode[p]) for (e, x), p in zip(word, ps)}
                if ga.order is not None:
                    seq = [ga.generator(e, gens[e]) for e in ga.order if e in gens]
                    axpy(ordered, ga.multiply_many(seq), c)
                else:
                    axpy(ordered, sp.pure(gens), c)
            if not sp.equal(hol, ordered):
                bad = {"vertex": v, "basis": a}
    rep.check("face_holonomy_ordered_product", bad is None, bad)
    # curvature elements
    cs = [ga.curvature_element(v) for v in range(V)]
    rep.check("curvature_idempotent", all(sp.equal(ga.multiply(c, c), c) for c in cs))
    bad = None
    for v, c in enumerate(cs):
        for i, y in enumerate(invariant):
            if not sp.equal(ga.multiply(c, y), ga.multiply(y, c)):
                bad = {"vertex": v, "invariant": i}
                break
        if bad:
            break
    rep.check("curvature_central", bad is None, bad)
    for side in ("left", "right"):
        bad = None
        for v in range(V):
            for a in range(d):
                lhs = ga.p_inv(ga.hol_gamma(ga.face_word(v), {a: ONE}))
                rhs = ga.hol_gamma(ga.face_word(v), ga.pi_ad({a: ONE}, side))
                if not sp.equal(lhs, rhs):
                    bad = {"vertex": v, "basis": a}
                    break
            if bad:
                break
        rep.check(f"p_inv_hol_is_hol_pi_ad_{side}", bad is None, bad)
    bad = None
    for v in range(V):
        w = ga.face_word(v)
        for k in range(1, len(w)):
            rot = w[k:] + w[:k]
            for a in range(d):
                if not sp.equal(ga.p_inv(ga.hol_gamma(rot, {a: ONE})), ga.p_inv(ga.hol_gamma(w, {a: ONE}))):
                    bad = {"vertex": v, "rotation": k, "basis": a}
                    break
    rep.check("invariant_curvature_depends_on_face_only", bad is None, bad)
    # the character algebra
    chars = character_algebra_basis(PairedHopfData(ga.K, ga.Kd))
    rep.dims["character_dim"] = len(chars)
    bad = None
    for v in range(V):
        w = ga.face_word(v)
        hols = [ga.hol_gamma(w, c) for c in chars]
        for i, ci in enumerate(chars):
            if not sp.equal(ga.p_inv(hols[i]), hols[i]):
                bad = {"vertex": v, "character": i, "law": "invariant"}
            for j, cj in enumerate(chars):
                if not sp.equal(ga.hol_gamma(w, Kd.mul(ci, cj)), ga.multiply(hols[i], hols[j])):
                    bad = {"vertex": v, "characters": [i, j], "law": "multiplicative"}
            for y in invariant[:16]:
                if not sp.equal(ga.multiply(hols[i], y), ga.multiply(y, hols[i])):
                    bad = {"vertex": v, "character": i, "law": "central"}
    rep.check("characters_to_centre", bad is None, bad)
    # C(K)^{(x) F} acting by curvature multiplication
    bad = None
    rng = random.Random(3)
    for _ in range(8):
        c1 = [rng.choice(chars) for _ in range(V)]
        c2 = [rng.choice(chars) for _ in range(V)]
        y = rng.choice(invariant)

        def act(cs_, x):
            out = x
            for v, c in enumerate(cs_):
                out = ga.multiply(ga.hol_gamma(ga.face_word(v), c), out)
            return out

        prod = [Kd.mul(a, b) for a, b in zip(c1, c2)]
        if not sp.equal(act(prod, y), act(c1, act(c2, y))):
            bad = {"law": "composition"}
            break
        if not sp.equal(act([Kd.unit] * V, y), y):
            bad = {"law": "unit"}
            break
    rep.check("character_action_module", bad is None, bad)
    # P_f on invariants
    bad = None
    for v in range(V):
        for i, x in enumerate(invariant):
            px = ga.p_face(x, v)
            if not sp.equal(ga.p_face(px, v), px):
                bad = {"vertex": v, "invariant": i, "law": "idempotent"}
                break
        for i, x in enumerate(invariant[:16]):
            for j, y in enumerate(invariant[:16]):
                if not sp.equal(ga.p_face(ga.multiply(x, y), v), ga.multiply(ga.p_face(x, v), ga.p_face(y, v))):
                    bad = {"vertex": v, "pair": [i, j], "law": "morphism"}
    rep.check("face_projector_on_invariants", bad is None, bad)
    return rep


def flatinv_suite(ga: GraphAlgebra, invariant: list | None = None) -> Report:
    rep = Report("gauge/flatinv")
    sp = ga.space
    if invariant is None:
        invariant, _ = ga.invariant_basis()
    flats = [ga.p_flat(x) for x in invariant]
    rep.check("p_flat_idempotent", all(sp.equal(ga.p_flat(y), y) for y in flats))
    bad = None
    for i, x in enumerate(invariant):
        for j, y in enumerate(invariant):
            if not sp.equal(ga.p_flat(ga.multiply(x, y)), ga.multiply(flats[i], flats[j])):
                bad = {"pair": [i, j]}
                break
        if bad:
            break
    rep.check("p_flat_morphism", bad is None, bad)
    moduli, _ = ga.moduli_basis(invariant)
    table = ga.multiplication_table(moduli)
    rep.dims["invariant_dim"] = len(invariant)
    rep.dims["moduli_dim"] = len(moduli)
    rep.dims["moduli_table"] = {f"{i},{j}": v for (i, j), v in table.items()}
    return rep


def cilium_variants(graph: CiliatedRibbonGraph, limit: int = 3) -> list[CiliatedRibbonGraph]:
    """Regular graphs obtained by rotating cilia, first ``limit`` found."""
    out = []
    n = graph.n_vertices
    for shifts in itertools.product(*(range(graph.valence(v)) for v in range(n))):
        if not any(shifts):
            continue
        g = graph
        for v, s in enumerate(shifts):
            if s:
                g = g.rotate_cilium(v, s)
        if check_regular(g).regular:
            out.append(g.with_label(f"{graph.label}/cilia{''.join(map(str, shifts))}"))
            if len(out) == limit:
                break
    return out


def commutator_rank(ga: GraphAlgebra, basis: list) -> int:
    ech = SparseEchelon()
    for x, y in itertools.combinations(basis, 2):
        c = ga.multiply(x, y)
        axpy(c, ga.multiply(y, x), -ONE)
        ech.insert(ga.space.to_flat(c))
    return len(ech)


def cilium_independence(graph: CiliatedRibbonGraph, h: HopfAlgebra, limit: int = 2) -> Report:
    rep = Report("gauge/cilia")
    base = GraphAlgebra(graph, h)
    inv, _ = base.invariant_basis()
    mod, _ = base.moduli_basis(inv)
    ref = (len(inv), len(mod), commutator_rank(base, inv))
    rep.dims[graph.label] = list(ref)
    for g in cilium_variants(graph, limit):
        ga = GraphAlgebra(g, h)
        i2, _ = ga.invariant_basis()
        m2, _ = ga.moduli_basis(i2)
        got = (len(i2), len(m2), commutator_rank(ga, i2))
        rep.dims[g.label] = list(got)
        rep.check(f"same_invariants_{g.label}", got == ref, {"expected": ref, "got": got})
    return rep
