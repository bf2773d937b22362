"""Registry of verification suites, each producing a Report.

Suites take a RunContext that builds the algebra, graph and heavy objects
lazily, so that several suites on the same input share one KitaevModel,
GraphAlgebra and Equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .constructions import (
    HeisenbergStructure,
    check_basis_identities,
    check_hd_structure,
    check_module_axioms,
    double_dual,
    double_dual_matches_dual_of_double,
    drinfeld_double,
    function_algebra_haar_closed_form,
    group_haar_closed_form,
    haar_integral,
    haar_properties,
    paired,
)
from .hopf import HopfAlgebra, check_hopf_axioms, check_quasitriangular
from .hopf import from_json_dict as hopf_from_json_dict
from .hopf import to_json_dict as hopf_to_json_dict
from .kitaev import KitaevModel, ResourceLimit
from .report import Report
from .ribbon import CiliatedRibbonGraph, NotRegular, check_regular, star

__all__ = [
    "RunContext",
    "SUITES",
    "ALGEBRA_SUITES",
    "GRAPH_SUITES",
    "run_suite",
    "algebra_suite",
    "haar_suite",
    "heisenberg_suite",
    "protected_suite",
    "controls_suite",
    "corrupt_multiplication",
]


@dataclass
class RunContext:
    h: HopfAlgebra
    graph: CiliatedRibbonGraph | None = None
    dense_cap: int = 5000
    _cache: dict = field(default_factory=dict)

    def _get(self, key: str, build: Callable):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def require_graph(self) -> CiliatedRibbonGraph:
        if self.graph is None:
            raise ValueError("this suite needs a graph (--graph)")
        return self.graph

    def require_cap(self, what: str, dim: int) -> None:
        if dim > self.dense_cap:
            raise ResourceLimit(f"{what} needs a {dim}-dimensional space, above the cap {self.dense_cap}; "
                                "raise --dense-cap or choose a smaller algebra or graph")

    def full_dimension(self) -> int:
        return (self.h.dim ** 2) ** self.require_graph().n_edges

    @property
    def kitaev(self) -> KitaevModel:
        return self._get("kitaev", lambda: KitaevModel(self.require_graph(), self.h))

    @property
    def gauge(self):
        from .gauge import GraphAlgebra
        return self._get("gauge", lambda: GraphAlgebra(self.require_graph(), self.h))

    @property
    def equivalence(self):
        from .equivalence import Equivalence
        return self._get("equivalence", lambda: Equivalence(self.require_graph(), self.h))

    def invariant_basis(self) -> list:
        return self._get("invariant", lambda: self.gauge.invariant_basis()[0])


# --------------------------------------------------------------------------
# algebra-level suites

def _add_all(rep: Report, prefix: str, checks: dict) -> None:
    for name, ok in checks.items():
        rep.check(prefix + name, ok)


def algebra_suite(h: HopfAlgebra) -> Report:
    """Hopf axioms for H, H*, D(H), D(H)*; quasitriangularity of D(H)."""
    rep = Report("hopf/axioms")
    pair = paired(h)
    dh = drinfeld_double(pair)
    ddual = double_dual(pair)
    for tag, alg in (("H", h), ("H*", pair.hd), ("D", dh), ("D*", ddual)):
        _add_all(rep, f"{tag}/", check_hopf_axioms(alg))
        rep.dims[f"{tag}_dim"] = alg.dim
    _add_all(rep, "D/", check_quasitriangular(dh))
    rep.check("D*/is_dual_of_D", double_dual_matches_dual_of_double(pair))
    _add_all(rep, "modules/", check_module_axioms(pair))
    return rep


def haar_suite(h: HopfAlgebra) -> Report:
    """Haar integrals of H and H*, their laws, and the closed forms where known."""
    rep = Report("hopf/haar")
    pair = paired(h)
    ell = haar_integral(h)
    eta = haar_integral(pair.hd)
    _add_all(rep, "H/", haar_properties(h, ell, pair.hd))
    _add_all(rep, "H*/", haar_properties(pair.hd, eta, h))
    if _is_group_algebra(h):
        rep.check("H/group_closed_form", dict(ell) == group_haar_closed_form(h))
        rep.check("H*/function_closed_form", dict(eta) == function_algebra_haar_closed_form(pair.hd))
    elif _is_group_algebra(pair.hd):
        rep.check("H*/group_closed_form", dict(eta) == group_haar_closed_form(pair.hd))
        rep.check("H/function_closed_form", dict(ell) == function_algebra_haar_closed_form(h))
    rep.check("H/antipode_involutive", all(h.S(h.S({i: 1})) == {i: 1} for i in range(h.dim)))
    return rep


def _is_group_algebra(h: HopfAlgebra) -> bool:
    """Every basis element grouplike."""
    return all(h.comult[i] == {(i, i): 1} for i in range(h.dim))


def heisenberg_suite(h: HopfAlgebra) -> Report:
    """S_D, the commutation rules and the phi/xi coproduct-type maps."""
    rep = Report("hopf/heisenberg")
    pair = paired(h)
    _add_all(rep, "", check_hd_structure(pair))
    _add_all(rep, "basis/", check_basis_identities(pair))
    rep.dims["heisenberg_dim"] = HeisenbergStructure(pair).hd_alg.dim
    return rep


# --------------------------------------------------------------------------
# protected space

def protected_suite(ctx: RunContext, dense_oracle: bool = True) -> Report:
    """Protected dimension by sparse trace, cross-checked by a dense rank when small."""
    rep = Report("kitaev/protected")
    model = ctx.kitaev
    pd = model.protected_dimension()
    rep.dims["protected_dim"] = pd
    rep.dims["state_dim"] = model.n ** model.E
    rep.check("trace_is_integer", True)
    if dense_oracle:
        ctx.require_cap("dense protected-dimension oracle", model.d ** model.E)
        dense = model.dense_dimension(cap=ctx.dense_cap)
        rep.dims["dense_rank"] = dense
        rep.check("sparse_trace_matches_dense_rank", dense == pd, {"trace": pd, "rank": dense})
    return rep


# --------------------------------------------------------------------------
# negative controls

def corrupt_multiplication(h: HopfAlgebra) -> HopfAlgebra:
    """Copy of ``h`` with the first square e_i e_i redirected to the next basis element."""
    data = hopf_to_json_dict(h)
    for row in data["mult"]:
        if row[0] == row[1]:
            row[2] = (row[2] + 1) % h.dim
            break
    data["label"] = f"corrupt({h.label})"
    return hopf_from_json_dict(data)


def controls_suite(h: HopfAlgebra) -> Report:
    """Checks that must detect broken inputs."""
    from .gauge_suites import kernel_control
    rep = Report("controls")
    bad = corrupt_multiplication(h)
    axioms = check_hopf_axioms(bad)
    rep.check("corrupted_mult_fails_associativity", not axioms["associativity"], {"axioms": axioms})
    rep.extend(kernel_control(h), "kernel/")
    loop = CiliatedRibbonGraph.from_rotation([[(0, 0), (0, 1)]], "loop")
    for name, g, cond in (("loop", loop, 1), ("multi_edge", _double_edge_graph(), 1)):
        rep_g = check_regular(g)
        try:
            KitaevModel(g, h)
            rejected, msg = False, ""
        except NotRegular as exc:
            rejected, msg = True, str(exc)
        rep.check(f"rejects_{name}", rejected and cond in rep_g.failed_conditions and f"{cond}" in msg,
                  {"message": msg, "conditions": rep_g.failed_conditions})
    rep.check("star_is_not_regular", not check_regular(star(3)).regular)
    return rep


def _double_edge_graph() -> CiliatedRibbonGraph:
    return CiliatedRibbonGraph.from_rotation([[(0, 0), (1, 0)], [(0, 1), (1, 1)]], "double-edge")


# --------------------------------------------------------------------------
# registry

def _kitaev(name):
    def run(ctx: RunContext) -> Report:
        from . import kitaev_suites as ks
        if name == "gauge":
            ctx.require_cap("Kitaev gauge suite", ctx.full_dimension())
        fn = {"holprops": ks.holprops_suite, "operators": ks.operators_suite, "gauge": ks.gauge_suite}[name]
        return fn(ctx.kitaev)
    return run


def _gauge(name):
    def run(ctx: RunContext) -> Report:
        from . import gauge_suites as gs
        if name == "multrel":
            rep = gs.multrel_suite(ctx.gauge)
            rep.extend(gs.vertex_suite(ctx.h), "vertex/")
            rep.extend(gs.two_vertex_closure(ctx.h), "closure/")
            return rep
        if name == "module":
            return gs.module_suite(ctx.gauge)
        ctx.require_cap(f"gauge {name} suite", ctx.full_dimension())
        if name == "curvature":
            return gs.curvature_suite(ctx.gauge, ctx.invariant_basis())
        return gs.flatinv_suite(ctx.gauge, ctx.invariant_basis())
    return run


def _equiv(name):
    def run(ctx: RunContext) -> Report:
        from . import equivalence as eqm
        from .gauge_suites import vertex_chi_suite
        eq = ctx.equivalence
        if name == "chi":
            full = ctx.full_dimension() <= ctx.dense_cap
            rep = eqm.verify_chi(eq, full_rank=full)
            rep.extend(vertex_chi_suite(ctx.h), "vertex/")
            return rep
        if name == "actedge":
            return eqm.verify_actedge(eq)
        ctx.require_cap(f"equivalence {name} suite", ctx.full_dimension())
        if name == "facetransfer":
            return eqm.verify_facetransfer(eq)
        return eqm.verify_modth(eq)
    return run


def _protected(ctx: RunContext) -> Report:
    return protected_suite(ctx, dense_oracle=ctx.full_dimension() <= ctx.dense_cap)


ALGEBRA_SUITES: dict[str, Callable[[RunContext], Report]] = {
    "hopf": lambda ctx: algebra_suite(ctx.h),
    "haar": lambda ctx: haar_suite(ctx.h),
    "heisenberg": lambda ctx: heisenberg_suite(ctx.h),
    "controls": lambda ctx: controls_suite(ctx.h),
}

GRAPH_SUITES: dict[str, Callable[[RunContext], Report]] = {
    "kitaev-holprops": _kitaev("holprops"),
    "kitaev-operators": _kitaev("operators"),
    "kitaev-gauge": _kitaev("gauge"),
    "kitaev-protected": _protected,
    "gauge-multrel": _gauge("multrel"),
    "gauge-module": _gauge("module"),
    "gauge-curvature": _gauge("curvature"),
    "gauge-flatinv": _gauge("flatinv"),
    "equiv-chi": _equiv("chi"),
    "equiv-actedge": _equiv("actedge"),
    "equiv-facetransfer": _equiv("facetransfer"),
    "equiv-modth": _equiv("modth"),
}

SUITES = {**ALGEBRA_SUITES, **GRAPH_SUITES}


def run_suite(name: str, ctx: RunContext) -> Report:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    return SUITES[name](ctx)

