"""Finite windows of highly arc-transitive digraphs and checks of their structure."""

from .graph import (
    DegreeProfile,
    FiniteDigraph,
    PeriodicDigraph,
    degree_profile,
    tile,
    underlying_components,
    window,
)
from .constructions import (
    LeveledTemplate,
    TreeEdgeGraph,
    coloured_template_product,
    complete_template,
    connecting_path,
    disjoint_paths_template,
    hexagon_template,
    mckay_praeger,
    template_product,
    tensor_z_kbar,
    tree_edge_graph,
)
from .geometry import incidence_template, pg_subspaces
from .reachability import (
    alternating_class,
    is_complete_bipartite,
    r_digraph,
    reach_partition,
    universality_certificate,
)
from .symmetry import (
    clone_classes,
    enumerate_s_arcs,
    find_automorphism,
    property_z_check,
    quotient_by_partition,
    s_arc_transitivity_report,
)

__version__ = "0.1.0"
