from app.experiments.base_experiment import BaseExperiment
from app.experiments.catalog import CATALOG

_experiments_cache: dict[str, BaseExperiment] = {}


def get_experiment(experiment_id: str) -> BaseExperiment:
    """Return an experiment instance (cached)."""
    experiment_id = experiment_id.lower()

    if experiment_id in _experiments_cache:
        return _experiments_cache[experiment_id]

    experiment_class = CATALOG.get(experiment_id)
    if experiment_class is None:
        raise ValueError(f"Unknown experiment: {experiment_id}")

    experiment = experiment_class()
    _experiments_cache[experiment_id] = experiment
    return experiment
