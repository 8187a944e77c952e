"""Secant varieties of toric varieties: separation certificates, bounds and oracles."""
from .shape import SvShape
from .lattice import Polytope, PointSet, product_simplex_points, load_polytope, fano_polytope
from .separation import certify_non_defective, greedy_extract, separates, verify_certificate
from .terracini import defect_report, secant_dim_mod_p
from .bounds import theorem_main_bound, hyperplane_bound, table_scan
from .flattening import FlatteningSplit, flattening_defect_certificate, split_search
from .cremona import LinearSystem3Fold, pic_action, iterate_transform, sv111_defect_scan

__version__ = "0.1.0"

__all__ = [
    "SvShape", "Polytope", "PointSet", "product_simplex_points", "load_polytope", "fano_polytope",
    "certify_non_defective", "greedy_extract", "separates", "verify_certificate",
    "defect_report", "secant_dim_mod_p", "theorem_main_bound", "hyperplane_bound", "table_scan",
    "FlatteningSplit", "flattening_defect_certificate", "split_search",
    "LinearSystem3Fold", "pic_action", "iterate_transform", "sv111_defect_scan",
]
