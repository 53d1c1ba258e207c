"""Clustering by near neighbor influence (CNNI, ICNNI, ECNNI) and tooling around it."""

__version__ = "0.1.0"

from .baselines import DbscanConfig, KMeansConfig, dbscan, kmeans
from .clustering import ClusterLabeling, CnniConfig, cnni, cnni_multiset, ecnni, icnni, run_algorithm
from .core import Dataset, SimilarityKind, euclidean_distance, influence, similarity
from .delta import (
    DeltaInterval,
    build_mst,
    delta_bounds_supervised,
    estimate_delta_mst,
    scan_valid_interval,
)
from .disjoint_set import DisjointSet, make_set
from .errors import FormatError, UsageError
from .evaluation import EvalReport, adm, evaluate, purity
from .neighbors import GridIndex, NeighborTable, build_brute, build_grid, sort_by_influence

__all__ = [
    "ClusterLabeling", "CnniConfig", "Dataset", "DbscanConfig", "DeltaInterval", "DisjointSet",
    "EvalReport", "FormatError", "GridIndex", "KMeansConfig", "NeighborTable", "SimilarityKind",
    "UsageError", "adm", "build_brute", "build_grid", "build_mst", "cnni", "cnni_multiset", "dbscan",
    "delta_bounds_supervised", "ecnni", "estimate_delta_mst", "euclidean_distance", "evaluate",
    "icnni", "influence", "kmeans", "make_set", "purity", "run_algorithm", "scan_valid_interval",
    "similarity", "sort_by_influence",
]
