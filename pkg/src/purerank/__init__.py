"""PureRank node scores for sparse directed graphs, with a PageRank baseline."""

from purerank.errors import (
    ConvergenceError,
    InsufficientDataError,
    ParseError,
    PureRankError,
    ValidationError,
)
from purerank.graph import (
    Graph,
    load_edge_list,
    normalized_row,
    reverse_adjacency,
    write_edge_list,
    write_label_map,
)
from purerank.classification import (
    Classification,
    class_fingerprint,
    classify,
    scc_decompose,
)
from purerank.local import (
    LocalVector,
    SolverOptions,
    lambda_D,
    lambda_R,
    lambda_T,
)
from purerank.core import (
    GraphDelta,
    PureRankCache,
    PureRankResult,
    apply_delta,
    assemble,
    compute,
    compute_incremental,
)
from purerank.pagerank import PageRankResult, pagerank
from purerank.surfer import (
    ExtendedChain,
    SurferStats,
    build_extended_chain,
    simulate,
    sojourn_check,
)
from purerank.multi import (
    MultiGraph,
    SplitResult,
    build_splitting_network,
    load_multi_edge_list,
    multi_purerank,
    net_score,
)
from purerank.metrics import (
    ComparisonReport,
    class_breakdown,
    compare,
    kendall_tau,
    pearson,
    top_k_overlap,
)

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "ComparisonReport",
    "ConvergenceError",
    "ExtendedChain",
    "Graph",
    "GraphDelta",
    "InsufficientDataError",
    "LocalVector",
    "MultiGraph",
    "PageRankResult",
    "ParseError",
    "PureRankCache",
    "PureRankError",
    "PureRankResult",
    "SolverOptions",
    "SplitResult",
    "SurferStats",
    "ValidationError",
    "apply_delta",
    "assemble",
    "build_extended_chain",
    "build_splitting_network",
    "class_breakdown",
    "class_fingerprint",
    "classify",
    "compare",
    "compute",
    "compute_incremental",
    "kendall_tau",
    "lambda_D",
    "lambda_R",
    "lambda_T",
    "load_edge_list",
    "load_multi_edge_list",
    "multi_purerank",
    "net_score",
    "normalized_row",
    "pagerank",
    "pearson",
    "reverse_adjacency",
    "scc_decompose",
    "simulate",
    "sojourn_check",
    "top_k_overlap",
    "write_edge_list",
    "write_label_map",
]
