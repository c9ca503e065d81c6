"""Exact toolkit for Voronoi parallelotopes and their sums with segments."""

from .lattice import (
    ContactVectorSet,
    QuadForm,
    catalog,
    commensurate,
    coset_minima,
    eval_form,
    facet_normals,
    layer_index,
    make_form,
)
from .polytope import (
    Belt,
    Face,
    HPolytope,
    VPolytope,
    adjacency_check,
    belts,
    build_cell,
    codim2_faces,
    contact_face,
    enumerate_vertices,
    irreducibility_graph,
    is_parallelotope,
    shadow_boundary,
    support_value,
    voronoi_cell,
)
from .extension import (
    Direction,
    DualSet,
    ExtensionReport,
    a_e,
    check_theorem,
    dual_set,
    f_e,
    normalize_direction,
    p_e_set,
    segment_as_polytope,
    subset_check,
    sum_with_segment,
    voronoi_of_sum_form,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
