"""Exact intersection homology and signature invariants of triangulated stratified pseudomanifolds."""

from .complex import (ComplexError, Perversity, StratifiedPseudomanifold, barycentric_subdivide, complement,
                      decomposition, perversity, restratify_boundary, validate)
from .ichain import build_complex, build_qp_quotient, ordinary_homology
from .pairing import intersection_number, middle_pairing, phi_pairing, relative_middle_pairing
from .qlinalg import BilinearForm, QMatrix, Subspace, signature
from .signatures import MaslovProblem, maslov_index, perverse_signature, verify_wall, verify_wall_boundary
from .ssp import emit_ssp, parse_ssp, read_ssp

__version__ = "0.1.0"
