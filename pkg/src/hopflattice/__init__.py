"""Exact Kitaev lattice models and Hopf algebra gauge theory on ribbon graphs."""

from .constructions import (
    BUILTIN_ALGEBRAS,
    PairedHopfData,
    builtin_algebra,
    double_dual,
    drinfeld_double,
    group_algebra,
    haar_integral,
    heisenberg_double,
    paired,
)
from .equivalence import Equivalence
from .gauge import GraphAlgebra, VertexAlgebra, VertexAlgebraSpec, VertexChi
from .hopf import HopfAlgebra, check_hopf_axioms, check_quasitriangular
from .kitaev import KitaevModel, ResourceLimit, sparse_trace
from .report import Report
from .ribbon import (
    BUILTIN_GRAPHS,
    CiliatedRibbonGraph,
    NotRegular,
    builtin_graph,
    check_regular,
    regularize,
    thicken,
)
from .suites import SUITES, RunContext, run_suite

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_ALGEBRAS",
    "BUILTIN_GRAPHS",
    "CiliatedRibbonGraph",
    "Equivalence",
    "GraphAlgebra",
    "HopfAlgebra",
    "KitaevModel",
    "NotRegular",
    "PairedHopfData",
    "Report",
    "ResourceLimit",
    "RunContext",
    "SUITES",
    "VertexAlgebra",
    "VertexAlgebraSpec",
    "VertexChi",
    "builtin_algebra",
    "builtin_graph",
    "check_hopf_axioms",
    "check_quasitriangular",
    "check_regular",
    "double_dual",
    "drinfeld_double",
    "group_algebra",
    "haar_integral",
    "heisenberg_double",
    "paired",
    "regularize",
    "run_suite",
    "sparse_trace",
    "thicken",
]
