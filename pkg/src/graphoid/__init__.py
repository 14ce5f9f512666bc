"""Graphoid-based relevance reasoning over discrete and Gaussian distributions."""

from .bayesnet import (
    Dag,
    SeparationQuery,
    Trail,
    audit_minimality,
    build_network,
    burglary_model,
    burglary_network,
    connected_components,
    d_separated,
    d_separated_by_enumeration,
    factorization_max_error,
    minimal_parents,
)
from .dist_oracle import (
    CiOracle,
    GaussianModel,
    JointTable,
    ci_holds_discrete,
    ci_holds_gaussian,
    condition_on,
    extract_model,
    marginalize,
    product_table,
    random_gaussian,
    random_spb,
    xor_table,
)
from .model_core import (
    AxiomViolation,
    DependencyModel,
    Triplet,
    Universe,
    check_graphoid_axioms,
    graphoid_closure,
    restrict,
)
from .relevance import (
    CheckResult,
    PartitionTriple,
    PtBinBlocks,
    RelationVerdict,
    TransitivityResult,
    check_clean,
    check_pt_bin,
    gaussian_axioms_check,
    is_transitive,
    mutually_irrelevant,
    mutually_irrelevant_sets,
    uncoupled,
    unrelated,
)
from .simnet import (
    HypothesisCover,
    LocalNetwork,
    SimilarityNetwork,
    build_local,
    build_similarity,
    restrict_to_hypotheses,
    types_equivalent,
)
from .suites import SuiteReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation",
    "CheckResult",
    "CiOracle",
    "Dag",
    "DependencyModel",
    "GaussianModel",
    "HypothesisCover",
    "JointTable",
    "LocalNetwork",
    "PartitionTriple",
    "PtBinBlocks",
    "RelationVerdict",
    "SeparationQuery",
    "SimilarityNetwork",
    "SuiteReport",
    "Trail",
    "TransitivityResult",
    "Triplet",
    "Universe",
    "audit_minimality",
    "build_local",
    "build_network",
    "build_similarity",
    "burglary_model",
    "burglary_network",
    "check_clean",
    "check_graphoid_axioms",
    "check_pt_bin",
    "ci_holds_discrete",
    "ci_holds_gaussian",
    "condition_on",
    "connected_components",
    "d_separated",
    "d_separated_by_enumeration",
    "extract_model",
    "factorization_max_error",
    "gaussian_axioms_check",
    "graphoid_closure",
    "is_transitive",
    "marginalize",
    "minimal_parents",
    "mutually_irrelevant",
    "mutually_irrelevant_sets",
    "product_table",
    "random_gaussian",
    "random_spb",
    "restrict",
    "restrict_to_hypotheses",
    "run_suite",
    "types_equivalent",
    "uncoupled",
    "unrelated",
    "xor_table",
]
