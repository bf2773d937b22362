"""Verification suites for the Kitaev model: holonomy properties, vertex and
face operators, and the gauge action on the operator algebra."""

from __future__ import annotations

import random
from typing import Iterator

from .kitaev import (
    KitaevModel,
    TensorOperator,
    _mat_compose,
    matrices_equal,
    matrix_compose,
    matrix_rank,
)
from .linalg import ONE, ZERO, SparseEchelon, axpy
from .report import Report
from .ribbon import (
    LB,
    RB,
    L,
    R,
    Face,
    edge_paths,
    faces,
    inverse_word,
    is_ribbon_path,
    nb_path,
    reduce_word,
    thick_letter,
    word_name,
)


# --------------------------------------------------------------------------
# words in the thickened graph

def composable_words(model: KitaevModel, max_len: int) -> Iterator[tuple]:
    """All composable words in the thickened graph of length 1..max_len
    without immediate backtracking."""
    tg = model.thick.graph
    letters = [(t, x) for t in range(tg.n_edges) for x in (1, -1)]
    by_start: dict = {}
    for t, x in letters:
        s = tg.source(t) if x == 1 else tg.target(t)
        by_start.setdefault(s, []).append((t, x))

    def end(letter):
        t, x = letter
        return tg.target(t) if x == 1 else tg.source(t)

    def rec(word):
        yield word
        if len(word) == max_len:
            return
        for nxt in by_start.get(end(word[0]), []):
            if nxt == (word[0][0], -word[0][1]):
                continue
            yield from rec((nxt,) + word)

    for first in letters:
        yield from rec((first,))


def qualifies_for_inverse(word) -> bool:
    """Each thickened edge at most once and per base edge at most one of
    {r, l} and at most one of {rbar, lbar}."""
    seen: set = set()
    used: dict = {}
    for t, _ in word:
        if t in seen:
            return False
        seen.add(t)
        e, k = divmod(t, 4)
        fam = (e, k >= 2)
        if fam in used and used[fam] != k:
            return False
        used[fam] = k
    return True


def r_before_l(word) -> bool:
    pos = {t: i for i, (t, _) in enumerate(word)}
    for e in {t // 4 for t, _ in word}:
        for first, second in ((4 * e + R, 4 * e + L), (4 * e + RB, 4 * e + LB)):
            if first in pos and second in pos and pos[first] < pos[second]:
                return False
    return True


def distinguished_paths(model: KitaevModel) -> list[tuple]:
    g = model.graph
    out = []
    for v in range(g.n_vertices):
        out.append(model.p_v(v))
        out.append(model.p_f(v))
        for i in range(1, g.valence(v) + 1):
            out.append(nb_path(g, v, i, 0))
            out.append(nb_path(g, v, i, 1))
    for e in range(g.n_edges):
        out.extend(edge_paths(g, e))
    return [w for w in out if w]


def _hol_equal(model: KitaevModel, a: list, b: list) -> int | None:
    for p in range(model.d):
        if not model.space.equal(a[p], b[p]):
            return p
    return None


def _compose_cols(model: KitaevModel, hol: list, cols: list) -> list:
    """Hol o f for a linear map f on D(H)* given by columns."""
    out = []
    for col in cols:
        acc: dict = {}
        for k, c in col.items():
            axpy(acc, hol[k], c)
        out.append(acc)
    return out


# --------------------------------------------------------------------------
# holonomy suite

def holprops_suite(model: KitaevModel, max_len: int = 3) -> Report:
    rep = Report("holprops")
    sp, n, d = model.space, model.n, model.d
    unit = model.dd.unit
    words = list(composable_words(model, max_len))
    paths = words + distinguished_paths(model)
    rep.dims["words"] = len(words)

    # unit
    bad = next((w for w in paths if not sp.equal(model.holonomy(w, unit), sp.unit())), None)
    rep.check("hol_unit", bad is None, bad and word_name(bad))

    # functoriality under reduction
    bad = None
    for w in words:
        padded = w + inverse_word(w[-1:]) + w[-1:]
        if _hol_equal(model, model.hol_matrix(padded), model.hol_matrix(reduce_word(padded))) is not None:
            bad = w
            break
    rep.check("hol_reduction", bad is None, bad and word_name(bad))

    # inverse rule
    sd_cols = [model.dd.antipode[p] for p in range(d)]
    qual = [w for w in paths if qualifies_for_inverse(w)]
    bad = None
    for w in qual:
        lhs = model.hol_matrix(inverse_word(w))
        rhs = _compose_cols(model, model.hol_matrix(w), sd_cols)
        if _hol_equal(model, lhs, rhs) is not None:
            bad = w
            break
    rep.check("hol_inverse", bad is None, bad and word_name(bad))
    rep.dims["inverse_paths"] = len(qual)

    # epsilon factorisation
    counit_h = model.h.counit
    counit_d = model.hdual.counit
    for name, kinds, factor in (("hol_eps_rl", {R, L}, "y"), ("hol_eps_bar", {RB, LB}, "g")):
        sel = [w for w in paths if {t % 4 for t, _ in w} <= kinds]
        bad = None
        for w in sel:
            hol = model.hol_matrix(w)
            for p in range(d):
                a, b = divmod(p, n)
                if factor == "y":
                    rhs = {k: c * counit_h[a] for k, c in model.holonomy(w, model.one_dual({b: ONE})).items()}
                else:
                    rhs = {k: c * counit_d[b] for k, c in model.holonomy(w, model.y_one({a: ONE})).items()}
                if not sp.equal(hol[p], rhs):
                    bad = (word_name(w), p)
                    break
            if bad:
                break
        rep.check(name, bad is None, bad)

    # rectangle relations
    bad = None
    for e in range(model.E):
        r, l, rb, lb = (thick_letter(k, e) for k in (R, L, RB, LB))
        pairs = [((rb, r), (l, lb)),
                 (((rb[0], -1), l), (r, (lb[0], -1)))]
        for w1, w2 in pairs:
            if _hol_equal(model, model.hol_matrix(w1), model.hol_matrix(w2)) is not None:
                bad = (e, word_name(w1), word_name(w2))
        if bad:
            break
    rep.check("hol_rectangle", bad is None, bad)

    # the rectangle holonomy is the identity insertion
    bad = None
    for e in range(model.E):
        w = (thick_letter(RB, e), thick_letter(R, e))
        hol = model.hol_matrix(w)
        for p in range(d):
            if not sp.equal(hol[p], sp.embed(e, {p: ONE})):
                bad = (e, p)
                break
        if bad:
            break
    rep.check("hol_rectangle_insertion", bad is None, bad)

    # ribbon paths: both products agree
    ribbon = [w for w in words if is_ribbon_path(w) and r_before_l(w)]
    bad = next((w for w in ribbon if not model.ribbon_compare(w)["equal"]), None)
    rep.check("ribbon_products_agree", bad is None, bad and word_name(bad))
    rep.dims["ribbon_paths"] = len(ribbon)

    # vertex and face loops: algebra morphisms and operator identification
    bad = None
    for v in range(model.graph.n_vertices):
        for a in range(n):
            for b in range(n):
                lhs = model.holonomy(model.p_v(v), model.y_one(model.h.mul({a: ONE}, {b: ONE})))
                rhs = sp.mul(model.holonomy(model.p_v(v), model.y_one({a: ONE})),
                             model.holonomy(model.p_v(v), model.y_one({b: ONE})), "hd")
                if not sp.equal(lhs, rhs):
                    bad = ("vertex", v, a, b)
                lhs = model.holonomy(model.p_f(v), model.one_dual(model.hdual.mul({a: ONE}, {b: ONE})))
                rhs = sp.mul(model.holonomy(model.p_f(v), model.one_dual({a: ONE})),
                             model.holonomy(model.p_f(v), model.one_dual({b: ONE})), "hd")
                if not sp.equal(lhs, rhs):
                    bad = ("face", v, a, b)
    rep.check("loop_morphisms", bad is None, bad)

    bad = None
    for v in range(model.graph.n_vertices):
        for b in range(n):
            A = model.vertex_operator(v, {b: ONE}).matrix(n)
            B = model.face_operator(v, {b: ONE}).matrix(n)
            if not matrices_equal(A, model.rho_matrix(model.holonomy(model.p_v(v), model.y_one({b: ONE})))):
                bad = ("vertex", v, b)
            if not matrices_equal(B, model.rho_matrix(model.holonomy(model.p_f(v), model.one_dual({b: ONE})))):
                bad = ("face", v, b)
            # the other tensor factor only contributes its counit
            for c in range(n):
                if c == b:
                    continue
                lhs = model.holonomy(model.p_v(v), model.pure_local({b: ONE}, {c: ONE}))
                rhs = {k: z * model.hdual.counit[c] for k, z in model.holonomy(model.p_v(v), model.y_one({b: ONE})).items()}
                if not sp.equal(lhs, rhs):
                    bad = ("vertex_counit", v, b, c)
    rep.check("loop_operator_identification", bad is None, bad)

    # commutation near an all-incoming vertex
    bad = None
    checked = 0
    for v in range(model.graph.n_vertices):
        inc = model.graph.incident(v)
        if not all(eps == 1 for _, eps in inc):
            continue
        for i in range(len(inc) - 1):
            ei, ej = inc[i][0], inc[i + 1][0]
            p = ((4 * ej + L, -1), (4 * ei + R, 1))
            others = [((4 * ej + R, 1),), ((4 * ei + L, 1),), ((4 * ei + RB, 1), (4 * ej + RB, 1))]
            for q in others:
                checked += 1
                if not _commute(model, p, q):
                    bad = (v, i, word_name(p), word_name(q))
    rep.check("neighbour_commutation", bad is None and checked > 0, bad or "no all-incoming vertex")

    # distinct loops commute
    bad = None
    V = model.graph.n_vertices
    for v in range(V):
        for w in range(V):
            if v == w:
                continue
            for kind, p, q in (("vv", model.p_v(v), model.p_v(w)),
                               ("ff", model.p_f(v), model.p_f(w)),
                               ("vf", model.p_v(v), model.p_f(w))):
                if not _commute(model, p, q):
                    bad = (kind, v, w)
    rep.check("loop_commutation", bad is None, bad)
    return rep


def _commute(model: KitaevModel, p, q) -> bool:
    hp, hq = model.hol_matrix(p), model.hol_matrix(q)
    sp = model.space
    for x in hp:
        for y in hq:
            if not sp.is_zero(sp.commutator(x, y, "hd")):
                return False
    return True


# --------------------------------------------------------------------------
# operator suite

def _rotations(face: Face) -> list[Face]:
    steps = face.steps
    out = []
    for i in range(len(steps)):
        s = steps[i:] + steps[:i]
        c = face.corners[i:] + face.corners[:i]
        out.append(Face(tuple(reversed(s)), c, None))
    return out


def operators_suite(model: KitaevModel, prop_samples: int = 64, seed: int = 0) -> Report:
    rep = Report("operators")
    g, h, hd, n = model.graph, model.h, model.hdual, model.n
    V = g.n_vertices

    def mat(op: TensorOperator) -> dict:
        return op.matrix(n)

    # triangle operators
    bad = None
    for x in range(n):
        for sign_formula in ("L", "T"):
            if sign_formula == "L":
                minus = model.tri.L(-1, {x: ONE})
                inner = model.tri.L(1, h.S({x: ONE}))
                s_mat = [h.S({k: ONE}) for k in range(n)]
            else:
                minus = model.tri.T(-1, {x: ONE})
                inner = model.tri.T(1, hd.S({x: ONE}))
                s_mat = [h.S({k: ONE}) for k in range(n)]
            if _mat_compose(s_mat, _mat_compose(inner, s_mat)) != minus:
                bad = (sign_formula, x)
    rep.check("triangle_minus_from_plus", bad is None, bad)

    A = {(v, a): mat(model.vertex_operator(v, {a: ONE})) for v in range(V) for a in range(n)}
    B = {(v, a): mat(model.face_operator(v, {a: ONE})) for v in range(V) for a in range(n)}

    def lin(table, v, vec):
        out: dict = {}
        for k, c in vec.items():
            for s, col in table[(v, k)].items():
                acc = out.setdefault(s, {})
                axpy(acc, col, c)
        return out

    # vertex and face algebra relations
    bad = None
    for v in range(V):
        for a in range(n):
            for b in range(n):
                if not matrices_equal(matrix_compose(A[(v, a)], A[(v, b)]), lin(A, v, h.mul({a: ONE}, {b: ONE}))):
                    bad = ("AA", v, a, b)
                if not matrices_equal(matrix_compose(B[(v, a)], B[(v, b)]), lin(B, v, hd.mul({a: ONE}, {b: ONE}))):
                    bad = ("BB", v, a, b)
    rep.check("vertex_face_multiplicative", bad is None, bad)

    # straightening relation
    bad = None
    for v in range(V):
        BA = {(a, b): matrix_compose(B[(v, a)], A[(v, b)]) for a in range(n) for b in range(n)}
        for a in range(n):      # h = x_a
            for b in range(n):  # alpha = alpha^b
                lhs = matrix_compose(A[(v, a)], B[(v, b)])
                rhs: dict = {}
                for (h1, h2, h3), ch in h.comul_n({a: ONE}, 3).items():
                    for (a1, a2, a3), ca in hd.comul_n({b: ONE}, 3).items():
                        w = ch * ca * _pair(a3, {h1: ONE}) * _pair(a1, h.S({h3: ONE}))
                        if w:
                            term = BA[(a2, h2)]
                            for s, col in term.items():
                                axpy(rhs.setdefault(s, {}), col, w)
                if not matrices_equal(lhs, rhs):
                    bad = (v, a, b)
    rep.check("straightening", bad is None, bad)

    # the site map alpha (x) h -> B A is injective (regular graphs)
    bad = None
    for v in range(V if model.regular else 0):
        ech = SparseEchelon()
        for a in range(n):
            for b in range(n):
                flat: dict = {}
                for s, col in matrix_compose(B[(v, a)], A[(v, b)]).items():
                    for k, c in col.items():
                        flat[(s, k)] = c
                ech.insert(flat)
        if len(ech) != n * n:
            bad = (v, len(ech))
    rep.check("site_map_injective", bad is None, bad)

    # commutation for distinct vertices and faces
    face_list = [f for f in faces(g)]
    Fops = {}
    for i, f in enumerate(face_list):
        for a in range(n):
            Fops[(i, a)] = mat(model.face_operator(f, {a: ONE}))
    bad = None
    for v in range(V):
        for w in range(v + 1, V):
            for a in range(n):
                for b in range(n):
                    if not _mat_commute(A[(v, a)], A[(w, b)]):
                        bad = ("AA", v, w, a, b)
    for i in range(len(face_list)):
        for j in range(i + 1, len(face_list)):
            for a in range(n):
                for b in range(n):
                    if not _mat_commute(Fops[(i, a)], Fops[(j, b)]):
                        bad = ("BB", i, j, a, b)
    for v in range(V):
        for i, f in enumerate(face_list):
            if f.cilium_anchor == v or (v, 0) in f.corners:
                continue
            for a in range(n):
                for b in range(n):
                    if not _mat_commute(A[(v, a)], Fops[(i, b)]):
                        bad = ("AB", v, i, a, b)
    rep.check("distinct_commute", bad is None, bad)

    # Haar projectors
    Al = [mat(model.vertex_operator(v, model.ell)) for v in range(V)]
    Bl = [mat(model.face_operator(f, model.eta)) for f in face_list]
    projs = Al + Bl
    bad = None
    for i, P in enumerate(projs):
        if not matrices_equal(matrix_compose(P, P), P):
            bad = ("idempotent", i)
        for j in range(i + 1, len(projs)):
            if not _mat_commute(P, projs[j]):
                bad = ("commute", i, j)
    rep.check("haar_commuting_projectors", bad is None, bad)

    bad = None
    for v in range(V):
        for shift in range(1, g.valence(v)):
            g2 = g.rotate_cilium(v, shift)
            m2 = KitaevModel(g2, h, regular=False)
            if not matrices_equal(mat(m2.vertex_operator(v, model.ell)), Al[v]):
                bad = ("vertex", v, shift)
    for i, f in enumerate(face_list):
        for rot in _rotations(f)[1:]:
            if not matrices_equal(mat(model.face_operator(rot, model.eta)), Bl[i]):
                bad = ("face", i)
    rep.check("haar_cilium_independent", bad is None, bad)

    # Hamiltonian as the image of the flat projector
    if model.regular:
        HK = mat(model.hamiltonian_operator())
        rep.check("hamiltonian_from_flat_projector",
                  matrices_equal(HK, model.rho_matrix(model.hamiltonian_element())))
        rng = random.Random(seed)
        keys = list(model.space.basis_keys())
        sample = keys if prop_samples <= 0 or prop_samples >= len(keys) else rng.sample(keys, prop_samples)
        bad = None
        for key in sample:
            X = {key: ONE}
            lhs = matrix_compose(model.rho_matrix(model.q_inv(X)), HK)
            mid = matrix_compose(HK, matrix_compose(model.rho_matrix(X), HK))
            rhs = matrix_compose(HK, model.rho_matrix(model.q_flat(X)))
            if not (matrices_equal(lhs, mid) and matrices_equal(mid, rhs)):
                bad = key
                break
        rep.check("protected_representation", bad is None, bad)
        rep.dims["protected_samples"] = len(sample)
    return rep


def _pair(alpha: int, vec) -> object:
    return vec.get(alpha, ZERO)


def _mat_commute(a: dict, b: dict) -> bool:
    return matrices_equal(matrix_compose(a, b), matrix_compose(b, a))


# --------------------------------------------------------------------------
# gauge suite

def invariant_image_basis(model: KitaevModel) -> list[dict]:
    """Basis of Q_inv(H(H)^{(x) E}) as flat vectors, with the matching elements."""
    sp = model.space
    ech = SparseEchelon()
    out = []
    for key in sp.basis_keys():
        img = model.q_inv({key: ONE})
        if ech.insert(sp.to_flat(img)):
            out.append(img)
    return out


def gauge_suite(model: KitaevModel, samples: int = 40, seed: int = 0) -> Report:
    rep = Report("gauge")
    sp, dbl = model.space, model.double
    V, d = model.graph.n_vertices, model.d
    rng = random.Random(seed)

    # site map
    bad = None
    for v in range(V):
        if not sp.equal(model.tau(v, dbl.unit), sp.unit()):
            bad = ("unit", v)
        for p in range(d):
            for q in range(d):
                lhs = model.tau(v, dbl.mul({p: ONE}, {q: ONE}))
                rhs = sp.mul(model.tau_basis(v, p), model.tau_basis(v, q), "hd")
                if not sp.equal(lhs, rhs):
                    bad = ("mult", v, p, q)
    rep.check("site_map_multiplicative", bad is None, bad)
    ranks = []
    for v in range(V):
        ech = SparseEchelon()
        for p in range(d):
            ech.insert(sp.to_flat(model.tau_basis(v, p)))
        ranks.append(len(ech))
    rep.check("site_map_injective", all(r == d for r in ranks), ranks)

    # site map image agrees with the operators
    bad = None
    for v in range(V):
        for p in range(d):
            a, b = divmod(p, model.n)
            lhs = model.rho_matrix(model.tau_basis(v, p))
            rhs = matrix_compose(model.face_operator(v, {a: ONE}).matrix(model.n),
                                 model.vertex_operator(v, {b: ONE}).matrix(model.n))
            if not matrices_equal(lhs, rhs):
                bad = (v, p)
    rep.check("site_map_operators", bad is None, bad)

    # module algebra axioms
    keys = list(sp.basis_keys())
    bad = None
    for _ in range(samples):
        X = {rng.choice(keys): ONE}
        Y = {rng.choice(keys): ONE}
        v = rng.randrange(V)
        k1, k2 = rng.randrange(d), rng.randrange(d)
        lhs = model.gauge_act(model.gauge_act(X, v, {k1: ONE}), v, {k2: ONE})
        rhs = model.gauge_act(X, v, dbl.mul({k1: ONE}, {k2: ONE}))
        if not sp.equal(lhs, rhs):
            bad = ("composition", v, k1, k2)
        w = rng.randrange(V)
        if w != v:
            a = model.gauge_act(model.gauge_act(X, v, {k1: ONE}), w, {k2: ONE})
            b = model.gauge_act(model.gauge_act(X, w, {k2: ONE}), v, {k1: ONE})
            if not sp.equal(a, b):
                bad = ("vertices_commute", v, w)
        if not sp.equal(model.gauge_act(X, v, dbl.unit), X):
            bad = ("unit_acts_trivially", v)
        # opposite algebra: (X Y) <| k = (X <| k_(1)) (Y <| k_(2)) in the op product
        lhs = model.gauge_act(sp.mul(X, Y, "hd"), v, {k1: ONE})
        rhs: dict = {}
        for (c1, c2), c in dbl.comult[k1].items():
            axpy(rhs, sp.mul(model.gauge_act(X, v, {c2: ONE}), model.gauge_act(Y, v, {c1: ONE}), "hd"), c)
        if not sp.equal(lhs, rhs):
            bad = ("module_algebra", v, k1)
        if not sp.equal(model.gauge_act(sp.unit(), v, {k1: ONE}),
                        {k: c * dbl.counit[k1] for k, c in sp.unit().items()}):
            bad = ("unit_invariant", v, k1)
    rep.check("module_algebra", bad is None, bad)

    # Q_inv projector with central loop holonomies
    basis = invariant_image_basis(model)
    rep.dims["invariant_dim"] = len(basis)
    bad = None
    for X in basis:
        if not sp.equal(model.q_inv(X), X):
            bad = "idempotent"
            break
    rep.check("q_inv_idempotent", bad is None, bad)
    ech = SparseEchelon()
    for X in basis:
        ech.insert(sp.to_flat(X))
    bad = None
    for _ in range(samples):
        X, Y = rng.choice(basis), rng.choice(basis)
        if not ech.contains(sp.to_flat(sp.mul(X, Y, "hd"))):
            bad = "product_leaves_image"
    rep.check("q_inv_subalgebra", bad is None, bad)
    bad = None
    for v in range(V):
        cands = []
        for b in range(model.n):
            cands.append(model.q_inv(model.holonomy(model.p_v(v), model.y_one({b: ONE}))))
            cands.append(model.q_inv(model.holonomy(model.p_f(v), model.one_dual({b: ONE}))))
        for Z in cands:
            for X in basis:
                if not sp.is_zero(sp.commutator(Z, X, "hd")):
                    bad = v
                    break
    rep.check("q_inv_loops_central", bad is None, bad)

    # flatness idempotents
    G = [model.G(v) for v in range(V)]
    bad = None
    for v in range(V):
        alt = sp.mul(model.holonomy(model.p_v(v), model.y_one(model.ell)),
                     model.holonomy(model.p_f(v), model.one_dual(model.eta)), "hd")
        if not sp.equal(alt, G[v]):
            bad = ("definition", v)
        if not sp.equal(sp.mul(G[v], G[v], "hd"), G[v]):
            bad = ("idempotent", v)
        for w in range(v + 1, V):
            if not sp.is_zero(sp.commutator(G[v], G[w], "hd")):
                bad = ("commute", v, w)
        for X in basis:
            if not sp.is_zero(sp.commutator(G[v], X, "hd")):
                bad = ("central", v)
                break
    rep.check("flatness_idempotents", bad is None, bad)

    bad = None
    haar = model.haar_double()
    for _ in range(samples):
        X = {rng.choice(keys): ONE}
        v = rng.randrange(V)
        lhs = model.q_v(model.gauge_act(X, v, haar), v)
        rhs = sp.mul(sp.mul(G[v], X, "hd"), G[v], "hd")
        if not sp.equal(lhs, rhs):
            bad = ("sandwich", v)
    rep.check("q_v_sandwich", bad is None, bad)

    bad = None
    for X in basis:
        if not sp.equal(model.q_flat(model.q_flat(X)), model.q_flat(X)):
            bad = "idempotent"
            break
    for _ in range(samples):
        X, Y = rng.choice(basis), rng.choice(basis)
        if not sp.equal(model.q_flat(sp.mul(X, Y, "hd")),
                        sp.mul(model.q_flat(X), model.q_flat(Y), "hd")):
            bad = "morphism"
    rep.check("q_flat_projector_morphism", bad is None, bad)
    flat = SparseEchelon()
    for X in basis:
        flat.insert(sp.to_flat(model.q_flat(X)))
    rep.dims["flat_dim"] = len(flat)

    rep.check("hamiltonian_element", matrices_equal(
        model.rho_matrix(model.hamiltonian_element()), model.hamiltonian_operator().matrix(model.n)))
    rep.dims["rho_rank"] = matrix_rank(model.rho_matrix(sp.unit()))
    return rep
