"""Cell systems on the SU(3) ADE graphs."""
from .catalog import build_graph, catalog, parse_selector
from .cells import CellSystem, GaugeFamily, gauge_transform, verify, verify_type_I, verify_type_II
from .closed_forms import construct_cells, legal_variants
from .equivalence import equivalent, fingerprint
from .graphs import Graph, Triangle, triangles, type_i_frames, type_ii_frames, z3_orbifold
from .hecke import check_unitarity, check_yang_baxter, connection, hecke_operator, wenzl_weight
from .qnum import QContext, qint
from .solver import SolveOptions, classify_solutions, solve_cells

__version__ = "0.1.0"

__all__ = [
    "build_graph", "catalog", "parse_selector", "CellSystem", "GaugeFamily", "gauge_transform",
    "verify", "verify_type_I", "verify_type_II", "construct_cells", "legal_variants",
    "equivalent", "fingerprint", "Graph", "Triangle", "triangles", "type_i_frames",
    "type_ii_frames", "z3_orbifold", "check_unitarity", "check_yang_baxter", "connection",
    "hecke_operator", "wenzl_weight", "QContext", "qint", "SolveOptions", "classify_solutions",
    "solve_cells",
]
