"""Realizing, connecting and sampling graphs with a prescribed joint-degree matrix."""

from .connected import (
    Certificate,
    ContractedInstance,
    ValidTree,
    balance_tree,
    certificate_report,
    contract,
    expand_tree,
    realize_connected,
    valid_tree_construction,
    verify_certificate,
)
from .core import (
    FeasibilityError,
    InstanceError,
    JdmInstance,
    JdmSummary,
    LabeledGraph,
    check_degree_feasibility,
    check_matrix_feasibility,
    extract_jdm,
    regroup_by_degree,
    validate_realization,
)
from .realizer import BuildState, add_edge_balanced, balanced_realize, simple_realize
from .sampler import (
    ChainState,
    SwitchMove,
    enumerate_legal_switches,
    enumerate_omega,
    mcmc_step,
    run_chain,
    switch_path,
)
from .star import (
    ForbiddenDegreeProblem,
    NotRealizedError,
    StarInstance,
    build_matching_gadget,
    perfect_matching,
    realize_star,
)

__version__ = "0.1.0"
