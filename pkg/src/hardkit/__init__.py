"""Instance hardness and dataset complexity analysis for binary classification data."""
from .data import (Dataset, DatasetError, EvaluationPlan, NormalizationSpec, apply_normalizer, distance_matrix,
                   fit_normalizer, load_dataset, normalize, save_dataset, stratified_folds)

__version__ = "0.1.0"

__all__ = [
    "Dataset", "DatasetError", "EvaluationPlan", "NormalizationSpec", "apply_normalizer", "distance_matrix",
    "fit_normalizer", "load_dataset", "normalize", "save_dataset", "stratified_folds", "__version__",
]
