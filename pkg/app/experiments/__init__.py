from app.experiments.base_experiment import BaseExperiment, ExperimentError, PointResult
from app.experiments.catalog import CATALOG, EXPERIMENTS, list_experiments
from app.experiments.experiment_factory import get_experiment

__all__ = [
    "BaseExperiment",
    "ExperimentError",
    "PointResult",
    "CATALOG",
    "EXPERIMENTS",
    "list_experiments",
    "get_experiment",
]
