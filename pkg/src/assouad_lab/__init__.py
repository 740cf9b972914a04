"""Toolkit for finite metric spaces: Gromov-Hausdorff distances, covering
quantities, empirical Assouad-type dimension estimates, telescope and cone
constructions, and numerical experiments over them."""

from .spaces import (
    TOL_METRIC,
    EmbeddedVectors,
    FiniteMetricSpace,
    SubsetView,
    closed_ball,
    frechet_embed,
    hausdorff_distance,
    restrict,
    scale,
    validate_metric,
)
from .covering import (
    EXACT_COVER_LIMIT,
    CoverCertificate,
    covering_number,
    doubling_constant_empirical,
    max_separated_set,
)
from .gh import (
    GH_EXACT_LIMIT,
    ApproximationPair,
    Correspondence,
    GHResult,
    distortion,
    extract_approximation,
    gh_auto,
    gh_bounds,
    gh_exact,
)
from .dimension import (
    DimensionEstimate,
    EstimatorParams,
    assouad_estimate_covering,
    assouad_estimate_subsets,
    lower_assouad_estimate,
)
from .constructions import (
    AsymptoticExample,
    AsymptoticExampleSpec,
    IndexTriple,
    TelescopeSpec,
    asymptotic_example,
    cantor_points,
    cantor_sample,
    classify_F,
    cycle_graph_space,
    graph_length_space,
    index_map_A,
    index_map_C,
    index_map_H,
    path_graph_space,
    progression,
    sup_grid,
    tangent_rescale_schedule,
    telescope,
)
from .experiments import (
    SCENARIOS,
    ExperimentReport,
    ScaledSubsetSequence,
    ball_convergence_check,
    concentric_ball_check,
    demo_dictionary,
    dimension_inequality_check,
    precompact_subsequence,
    pseudo_cone_convergence,
    run_scenario,
    telescope_lemma_checks,
)
from .io import dump_document, read_space, write_space
from . import errors

__version__ = "0.1.0"

__all__ = [
    "TOL_METRIC",
    "EXACT_COVER_LIMIT",
    "GH_EXACT_LIMIT",
    "FiniteMetricSpace",
    "SubsetView",
    "EmbeddedVectors",
    "CoverCertificate",
    "Correspondence",
    "ApproximationPair",
    "GHResult",
    "DimensionEstimate",
    "EstimatorParams",
    "TelescopeSpec",
    "AsymptoticExampleSpec",
    "AsymptoticExample",
    "IndexTriple",
    "ScaledSubsetSequence",
    "ExperimentReport",
    "SCENARIOS",
    "validate_metric",
    "scale",
    "restrict",
    "closed_ball",
    "hausdorff_distance",
    "frechet_embed",
    "covering_number",
    "max_separated_set",
    "doubling_constant_empirical",
    "distortion",
    "gh_exact",
    "gh_bounds",
    "gh_auto",
    "extract_approximation",
    "assouad_estimate_subsets",
    "assouad_estimate_covering",
    "lower_assouad_estimate",
    "telescope",
    "tangent_rescale_schedule",
    "sup_grid",
    "progression",
    "cantor_points",
    "cantor_sample",
    "graph_length_space",
    "path_graph_space",
    "cycle_graph_space",
    "index_map_H",
    "index_map_A",
    "index_map_C",
    "classify_F",
    "asymptotic_example",
    "pseudo_cone_convergence",
    "dimension_inequality_check",
    "ball_convergence_check",
    "concentric_ball_check",
    "telescope_lemma_checks",
    "precompact_subsequence",
    "demo_dictionary",
    "run_scenario",
    "read_space",
    "write_space",
    "dump_document",
    "errors",
]
