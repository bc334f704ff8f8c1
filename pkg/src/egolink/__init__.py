"""Egocentric link recommendation over temporal graph snapshots."""

from ._kernels import JIT_ENABLED
from .degree_dist import (
    BinnedDistribution,
    DegreeSampleSet,
    global_degree_samples,
    log_binned_histogram,
    personalized_degree_samples,
)
from .ego import (
    EdgeConfig,
    EgoView,
    TriadType,
    TRIAD_TABLE,
    classify_triad,
    common_neighbors,
    ego_neighbors,
    ego_view,
    personalized_degree,
    two_hop_candidates,
)
from .empirical import (
    EmpiricalStats,
    GroupStats,
    aggregate_empirical,
    ego_snapshot_stats,
    partition_candidates,
)
from .errors import (
    ConfigError,
    EmptyInputError,
    EmptyResultError,
    ParseError,
    PreconditionError,
)
from .evaluation import (
    EvalResult,
    RankedList,
    evaluate_methods,
    percent_improvement,
    precision_at_k,
    rank_candidates,
)
from .generators import GeneratorSpec, generate
from .graph import (
    SnapshotGraph,
    SnapshotSeries,
    TemporalEdgeList,
    build_snapshots,
    drop_zero_out_degree,
    ingest_edges,
    neighbors,
    write_label_map_csv,
    write_normalized_csv,
)
from .scorers import (
    ScoreTable,
    score_aa,
    score_candidates,
    score_cn,
    score_pdaa,
    score_pdcn,
)

__version__ = "0.1.0"

__all__ = [
    "JIT_ENABLED",
    "__version__",
    "BinnedDistribution",
    "DegreeSampleSet",
    "global_degree_samples",
    "log_binned_histogram",
    "personalized_degree_samples",
    "EdgeConfig",
    "EgoView",
    "TriadType",
    "TRIAD_TABLE",
    "classify_triad",
    "common_neighbors",
    "ego_neighbors",
    "ego_view",
    "personalized_degree",
    "two_hop_candidates",
    "EmpiricalStats",
    "GroupStats",
    "aggregate_empirical",
    "ego_snapshot_stats",
    "partition_candidates",
    "ConfigError",
    "EmptyInputError",
    "EmptyResultError",
    "ParseError",
    "PreconditionError",
    "EvalResult",
    "RankedList",
    "evaluate_methods",
    "percent_improvement",
    "precision_at_k",
    "rank_candidates",
    "GeneratorSpec",
    "generate",
    "SnapshotGraph",
    "SnapshotSeries",
    "TemporalEdgeList",
    "build_snapshots",
    "drop_zero_out_degree",
    "ingest_edges",
    "neighbors",
    "write_label_map_csv",
    "write_normalized_csv",
    "ScoreTable",
    "score_aa",
    "score_candidates",
    "score_cn",
    "score_pdaa",
    "score_pdcn",
]
