from .base import (ALGORITHMS, DEFAULT_POOL, LearnerError, LearnerSpec, Model, default_pool, fit,
                   load_pool, parse_learner, predict)
from .cluster import Dendrogram, average_linkage, cluster_pool
from .metrics import cod_distance, cod_matrix, confusion, mcc
from .tree import DecisionTree

__all__ = [
    "ALGORITHMS", "DEFAULT_POOL", "LearnerError", "LearnerSpec", "Model", "default_pool", "fit", "load_pool",
    "parse_learner", "predict", "Dendrogram", "average_linkage", "cluster_pool", "cod_distance", "cod_matrix",
    "confusion", "mcc", "DecisionTree",
]
