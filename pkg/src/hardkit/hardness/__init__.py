from .context import MeasureContext, prim_mst
from .estimate import (BaselinePipeline, FittedPipeline, HardnessReport, PoolPredictions, derive_seed, dsh,
                       estimate_ih, idsh, idsh_from_predictions, run_pool)
from .measures import (MEASURE_NAMES, OVERLAP_MEASURES, balance_measures, feature_overlap_measure,
                       instance_measure, instance_measures, likelihood_measures, neighborhood_measures,
                       resolve_measure, tree_measures)

__all__ = [
    "MeasureContext", "prim_mst", "BaselinePipeline", "FittedPipeline", "HardnessReport", "PoolPredictions",
    "derive_seed", "dsh", "estimate_ih", "idsh", "idsh_from_predictions", "run_pool", "MEASURE_NAMES",
    "OVERLAP_MEASURES", "balance_measures", "feature_overlap_measure", "instance_measure", "instance_measures",
    "likelihood_measures", "neighborhood_measures", "resolve_measure", "tree_measures",
]
