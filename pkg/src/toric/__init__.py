"""Toric degenerations of Gr(2, n) and spatial polygon spaces.

The algebraic side (trees, Kempe graphs, Plücker brackets) and the geometric
side (Hopf coordinates, bending, spin-frames) share one convention for
triangulations: vertices ``1..n`` and edge ``i`` from vertex ``i`` to
``i + 1``.
"""

from .errors import *  # noqa: F401,F403
from .frames import (
    ForestFraming,
    SpinFrame,
    ad_star,
    bend_lift,
    c2_of,
    close_triangle,
    edge_rotate,
    extend_framing,
    frame_of,
    hamiltonians,
    normalize,
    restrict_to_leaves,
)
from .kempe import (
    EdgeWeighting,
    KempeGraph,
    crossing,
    graph_weight,
    induced_weighting,
    is_admissible,
    r_membership,
    star_product,
    weighting_to_kempe,
)
from .pluecker import (
    BracketCombination,
    PlueckerMonomial,
    TripodExponents,
    exponents_from_weighting,
    initial_form,
    leading_term,
    phi,
    straighten,
    weighting_from_exponents,
)
from .polygon import (
    FramedPolygon,
    Polygon,
    bend,
    diagonal,
    edges_of,
    hopf,
    in_cone_Dn,
    ky_canonicalize,
    mu_su2,
    mu_torus,
    project_to_zero_level,
    sample_linkage,
    stratum_signature,
)
from .tree import (
    DecomposedForest,
    Triangulation,
    TrivalentTree,
    decompose,
    dual_tree,
    fan_triangulation,
    path_weight,
    trivalent_order,
)

__version__ = "0.1.0"
