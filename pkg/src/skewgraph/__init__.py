"""Skew-robust rank correlation estimation and sparse graph recovery."""

from .errors import (
    DegenerateColumnError,
    InfeasibleColumnError,
    IngestError,
    NotPositiveSemidefiniteError,
    SkewgraphError,
)
from .evaluate import RocResult, compare_edgesets, confusion, rates, roc_curve
from .panel import NormalityReport, ReturnsPanel, ingest_prices, normality_tests
from .pipeline import (
    ESTIMATORS,
    GraphPipeline,
    PipelineResult,
    campaign,
    estimate_correlation,
    export_graph,
    run_pipeline,
)
from .precision import (
    EdgeSet,
    PrecisionEstimate,
    clime,
    dantzig,
    edges_from_precision,
    glasso,
    glasso_path,
)
from .rankcorr import (
    CorrelationEstimate,
    DataMatrix,
    RankMatrix,
    kendall_tau_matrix,
    normal_scores,
    skeptic_from_rho,
    skeptic_from_tau,
    spearman_rho_matrix,
)
from .selection import StarsConfig, StarsResult, lambda_grid_around, stars_select
from .simulate import (
    GroundTruth,
    SimulationConfig,
    contaminate,
    generate_scenario,
    power_transform,
    random_precision,
    sample_csn,
    sample_csn_bivariate,
    sample_gaussian,
)
from .skeptic import SkewCorrectionMatrix, psd_repair, skew_correction, skew_skeptic
from .skewfit import SkewnessVector, estimate_alpha_mle, estimate_alpha_moments

__version__ = "0.1.0"

__all__ = [
    "CorrelationEstimate",
    "DataMatrix",
    "DegenerateColumnError",
    "EdgeSet",
    "ESTIMATORS",
    "GraphPipeline",
    "GroundTruth",
    "InfeasibleColumnError",
    "IngestError",
    "NormalityReport",
    "NotPositiveSemidefiniteError",
    "PipelineResult",
    "PrecisionEstimate",
    "RankMatrix",
    "ReturnsPanel",
    "RocResult",
    "SimulationConfig",
    "SkewCorrectionMatrix",
    "SkewgraphError",
    "SkewnessVector",
    "StarsConfig",
    "StarsResult",
    "campaign",
    "clime",
    "compare_edgesets",
    "confusion",
    "contaminate",
    "dantzig",
    "edges_from_precision",
    "estimate_alpha_mle",
    "estimate_alpha_moments",
    "estimate_correlation",
    "export_graph",
    "generate_scenario",
    "glasso",
    "glasso_path",
    "ingest_prices",
    "kendall_tau_matrix",
    "lambda_grid_around",
    "normal_scores",
    "normality_tests",
    "power_transform",
    "psd_repair",
    "random_precision",
    "rates",
    "roc_curve",
    "run_pipeline",
    "sample_csn",
    "sample_csn_bivariate",
    "sample_gaussian",
    "skeptic_from_rho",
    "skeptic_from_tau",
    "skew_correction",
    "skew_skeptic",
    "spearman_rho_matrix",
    "stars_select",
]
