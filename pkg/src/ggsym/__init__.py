"""Graphical Gaussian models with vertex- and edge-color symmetry.

Decides when the maximum likelihood estimator of a block-constant mean
equals the least-squares estimator, and fits the corresponding models:
least squares, profile-likelihood concentration fitting, joint
alternating maximization, and likelihood ratio tests.
"""

__version__ = "0.1.0"

from .colored_graph import (
    ColoredGraph,
    GeneratorMatrix,
    Graph,
    MeanSpaceBasis,
    Partition,
    colored_graph,
    generator_matrix,
    is_finer,
    make_partition,
    mean_space_basis,
    neighbors_in_class,
    one_block_partition,
    singleton_partition,
)
from .estimation import (
    ConcentrationFit,
    Dataset,
    FitOptions,
    LrtResult,
    ModelFit,
    SspMatrix,
    fit_model,
    fit_rcon_concentration,
    gls_mean,
    lr_test,
    ls_mean,
    profile_loglik,
    residual_ssp,
)
from .model_space import (
    ConcentrationPoint,
    RconParameters,
    RcorParameters,
    assemble_rcon,
    assemble_rcor,
    is_member_rcon,
    is_member_rcor,
    kruskal_invariance_oracle,
    sample_rcon,
    sample_rcor,
)
from .rcop import (
    Permutation,
    edge_orbits,
    is_automorphism,
    is_group_invariant,
    permutation_from_cycles,
    rcop_coloring,
    vertex_orbits,
)
from .regularity import (
    EstimabilityVerdict,
    RegularityReport,
    coarsest_regular_refinement,
    enumerate_valid_partitions,
    is_edge_regular,
    is_equitable,
    is_vertex_regular,
    mean_mle_equals_ls,
)
